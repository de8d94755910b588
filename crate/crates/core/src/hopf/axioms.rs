//! The seven defining diagrams of a connected Hopf monoid, checked exhaustively.

use std::fmt;

use serde::Serialize;

use super::{Engine, LinearizedHopf};
use crate::element::Element;
use crate::ground::{decompositions, GroundSet};
use crate::report::{Verdict, Witness};
use crate::vector::{TensorVector, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associative,
    Commutative,
    Unital,
    Coassociative,
    Cocommutative,
    Counital,
    HopfCompatible,
}

pub const ALL_AXIOMS: [Axiom; 7] = [
    Axiom::Associative,
    Axiom::Commutative,
    Axiom::Unital,
    Axiom::Coassociative,
    Axiom::Cocommutative,
    Axiom::Counital,
    Axiom::HopfCompatible,
];

impl Axiom {
    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Associative => "associative",
            Axiom::Commutative => "commutative",
            Axiom::Unital => "unital",
            Axiom::Coassociative => "coassociative",
            Axiom::Cocommutative => "cocommutative",
            Axiom::Counital => "counital",
            Axiom::HopfCompatible => "hopf_compatible",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks one axiom on every ground set {1..n}, n ≤ max_n, returning the first
/// (smallest n) witness of failure.
pub fn check_axiom(h: &LinearizedHopf, axiom: Axiom, max_n: usize) -> Verdict {
    let e = Engine::new(h);
    (0..=max_n).try_for_each(|n| check_axiom_on(&e, axiom, &GroundSet::range(n)))
}

/// Checks one axiom on a single ground set, sharing an engine's caches.
pub fn check_axiom_on(e: &Engine, axiom: Axiom, ground: &GroundSet) -> Verdict {
    match axiom {
        Axiom::Associative => associative(e, ground),
        Axiom::Commutative => commutative(e, ground),
        Axiom::Unital => unital(e, ground),
        Axiom::Coassociative => coassociative(e, ground),
        Axiom::Cocommutative => cocommutative(e, ground),
        Axiom::Counital => counital(e, ground),
        Axiom::HopfCompatible => hopf_compatible(e, ground),
    }
}

fn associative(e: &Engine, ground: &GroundSet) -> Verdict {
    for d in decompositions(ground, 3, false) {
        for x in e.elements(&d[0]).iter() {
            for y in e.elements(&d[1]).iter() {
                for z in e.elements(&d[2]).iter() {
                    let t = TensorVector::basis(vec![x.clone(), y.clone(), z.clone()]);
                    let left = e.nabla_at(&e.nabla_at(&t, 0), 0).into_vector();
                    let right = e.nabla_at(&e.nabla_at(&t, 1), 0).into_vector();
                    if left != right {
                        return Err(Witness::new(format!("(xy)z = {left} but x(yz) = {right}"))
                            .parts(&d)
                            .elements([x, y, z]));
                    }
                }
            }
        }
    }
    Ok(())
}

fn commutative(e: &Engine, ground: &GroundSet) -> Verdict {
    for d in decompositions(ground, 2, false) {
        let (s, t) = (&d[0], &d[1]);
        for x in e.elements(s).iter() {
            for y in e.elements(t).iter() {
                let a = e.product_basis(s, t, x, y);
                let b = e.product_basis(t, s, y, x);
                if a != b {
                    return Err(Witness::new(format!("{a} != {b}")).parts(&d).elements([x, y]));
                }
            }
        }
    }
    Ok(())
}

fn connected_unit(e: &Engine) -> Result<Element, Witness> {
    e.unit().ok_or_else(|| {
        Witness::new(format!("not connected: {} elements over the empty set", e.elements(&GroundSet::empty()).len()))
    })
}

fn unital(e: &Engine, ground: &GroundSet) -> Verdict {
    let u = connected_unit(e)?;
    let empty = GroundSet::empty();
    for x in e.elements(ground).iter() {
        let want = Vector::basis(x.clone());
        let a = e.product_basis(&empty, ground, &u, x);
        let b = e.product_basis(ground, &empty, x, &u);
        if a != want || b != want {
            return Err(Witness::new(format!("unit products give {a} and {b}")).parts([ground]).elements([x]));
        }
    }
    Ok(())
}

fn coassociative(e: &Engine, ground: &GroundSet) -> Verdict {
    for d in decompositions(ground, 3, false) {
        let (r, s, t) = (&d[0], &d[1], &d[2]);
        for z in e.elements(ground).iter() {
            let v = TensorVector::from_vector(&Vector::basis(z.clone()));
            let left = e.delta_at(&e.delta_at(&v, 0, &r.union(s), t), 0, r, s);
            let right = e.delta_at(&e.delta_at(&v, 0, r, &s.union(t)), 1, s, t);
            if left != right {
                return Err(Witness::new(format!("(Δ⊗id)Δ = {left} but (id⊗Δ)Δ = {right}")).parts(&d).elements([z]));
            }
        }
    }
    Ok(())
}

fn cocommutative(e: &Engine, ground: &GroundSet) -> Verdict {
    for d in decompositions(ground, 2, false) {
        let (s, t) = (&d[0], &d[1]);
        for z in e.elements(ground).iter() {
            let a = e.coproduct_basis(s, t, z).twist(&[1, 0]).unwrap();
            let b = e.coproduct_basis(t, s, z);
            if a != b {
                return Err(Witness::new(format!("twisted {a} != {b}")).parts(&d).elements([z]));
            }
        }
    }
    Ok(())
}

fn counital(e: &Engine, ground: &GroundSet) -> Verdict {
    let u = connected_unit(e)?;
    let empty = GroundSet::empty();
    for z in e.elements(ground).iter() {
        let a = e.coproduct_basis(&empty, ground, z);
        let b = e.coproduct_basis(ground, &empty, z);
        if a != TensorVector::basis(vec![u.clone(), z.clone()]) || b != TensorVector::basis(vec![z.clone(), u.clone()]) {
            return Err(Witness::new(format!("unit coproducts give {a} and {b}")).parts([ground]).elements([z]));
        }
    }
    Ok(())
}

fn hopf_compatible(e: &Engine, ground: &GroundSet) -> Verdict {
    let pairs = decompositions(ground, 2, false);
    for rr in &pairs {
        let (r, r2) = (&rr[0], &rr[1]);
        for ss in &pairs {
            let (s, s2) = (&ss[0], &ss[1]);
            let a = r.intersection(s);
            let b = r.intersection(s2);
            let a2 = r2.intersection(s);
            let b2 = r2.intersection(s2);
            for x in e.elements(r).iter() {
                for y in e.elements(r2).iter() {
                    let top = e.delta(s, s2, &e.product_basis(r, r2, x, y));
                    let t = TensorVector::basis(vec![x.clone(), y.clone()]);
                    let t = e.delta_at(&t, 0, &a, &b);
                    let t = e.delta_at(&t, 2, &a2, &b2);
                    // (A, B, A', B') -> (A, A', B, B')
                    let t = t.twist(&[0, 2, 1, 3]).unwrap();
                    let t = e.nabla_at(&t, 0);
                    let bottom = e.nabla_at(&t, 1);
                    if top != bottom {
                        return Err(Witness::new(format!("Δ∇ = {top} but (∇⊗∇)τ(Δ⊗Δ) = {bottom}"))
                            .parts([r, r2, s, s2])
                            .elements([x, y]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Δ_{S,T} ∘ ∇_{S,T} = id on every basis tensor.
pub fn check_delta_nabla_identity(h: &LinearizedHopf, max_n: usize) -> Verdict {
    let e = Engine::new(h);
    for n in 0..=max_n {
        for d in decompositions(&GroundSet::range(n), 2, false) {
            let (s, t) = (&d[0], &d[1]);
            for x in e.elements(s).iter() {
                for y in e.elements(t).iter() {
                    let back = e.delta(s, t, &e.product_basis(s, t, x, y));
                    if back != TensorVector::basis(vec![x.clone(), y.clone()]) {
                        return Err(Witness::new(format!("Δ∇ returns {back}")).parts(&d).elements([x, y]));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_l, make_pi};

    #[test]
    fn partitions_form_a_hopf_monoid() {
        let p = make_pi();
        let h = LinearizedHopf::mu_pi(p.mu.as_ref().unwrap(), p.pi.as_ref().unwrap());
        for a in ALL_AXIOMS {
            assert_eq!(check_axiom(&h, a, 3), Ok(()), "{a}");
        }
    }

    #[test]
    fn orders_fail_commutativity_at_size_two() {
        let l = make_l();
        let h = LinearizedHopf::mu_pi(l.mu.as_ref().unwrap(), l.pi.as_ref().unwrap());
        let w = check_axiom(&h, Axiom::Commutative, 3).unwrap_err();
        assert_eq!(w.elements, vec!["(1)", "(2)"]);
        assert!(w.detail.contains("(1,2)") && w.detail.contains("(2,1)"));
    }
}
