//! Structure constants, free self-duality, the invariant form, and duals.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::axioms::{check_axiom_on, Axiom};
use super::{Coproduct, Engine, LinearizedHopf, Product};
use crate::element::Element;
use crate::ground::{decompositions, GroundSet};
use crate::report::{Verdict, Witness};
use crate::vector::{TensorVector, Vector, Q};

pub type ConstantTable = BTreeMap<(Element, Element, Element), Q>;

/// Product constants a and coproduct constants b for one pair (S, T):
/// ∇(x⊗y) = Σ a[x,y,z] z and Δ(z) = Σ b[x,y,z] x⊗y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub s: GroundSet,
    pub t: GroundSet,
    pub product: ConstantTable,
    pub coproduct: ConstantTable,
}

impl StructureConstants {
    /// Swaps the roles of the two tables.
    pub fn transpose(&self) -> StructureConstants {
        StructureConstants {
            s: self.s.clone(),
            t: self.t.clone(),
            product: self.coproduct.clone(),
            coproduct: self.product.clone(),
        }
    }
}

pub fn structure_constants(h: &LinearizedHopf, s: &GroundSet, t: &GroundSet) -> StructureConstants {
    constants_with(&Engine::new(h), s, t)
}

fn constants_with(e: &Engine, s: &GroundSet, t: &GroundSet) -> StructureConstants {
    let mut product = ConstantTable::new();
    let mut coproduct = ConstantTable::new();
    for x in e.elements(s).iter() {
        for y in e.elements(t).iter() {
            for (z, c) in e.product_basis(s, t, x, y).terms() {
                product.insert((x.clone(), y.clone(), z.clone()), c.clone());
            }
        }
    }
    for z in e.elements(&s.union(t)).iter() {
        for (k, c) in e.coproduct_basis(s, t, z).terms() {
            coproduct.insert((k[0].clone(), k[1].clone(), z.clone()), c.clone());
        }
    }
    StructureConstants { s: s.clone(), t: t.clone(), product, coproduct }
}

fn first_difference(a: &ConstantTable, b: &ConstantTable) -> Option<((Element, Element, Element), Q, Q)> {
    let zero = Q::zero();
    a.keys().chain(b.keys()).find_map(|k| {
        let (x, y) = (a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero));
        (x != y).then(|| (k.clone(), x.clone(), y.clone()))
    })
}

#[derive(Clone, Debug)]
pub struct FsdReport {
    /// The Hopf monoid axioms other than (co)commutativity.
    pub hopf: Verdict,
    /// Product and coproduct constants coincide.
    pub tables: Verdict,
    /// ⟨∇x, y⟩ = ⟨x, Δy⟩ for the form with orthonormal basis.
    pub form: Verdict,
}

impl FsdReport {
    pub fn verdict(&self) -> Verdict {
        self.hopf.clone()?;
        self.tables.clone()?;
        self.form.clone()
    }

    /// The table comparison and the invariant-form comparison agree.
    pub fn consistent(&self) -> bool {
        self.tables.is_ok() == self.form.is_ok()
    }
}

/// Freely self-dual in the given basis: a connected Hopf monoid whose
/// product and coproduct constants coincide.
pub fn check_fsd(h: &LinearizedHopf, max_n: usize) -> FsdReport {
    let e = Engine::new(h);
    let hopf_axioms = [Axiom::Associative, Axiom::Unital, Axiom::Coassociative, Axiom::Counital, Axiom::HopfCompatible];
    let hopf = hopf_axioms
        .iter()
        .try_for_each(|&a| (0..=max_n).try_for_each(|n| check_axiom_on(&e, a, &GroundSet::range(n))));
    let mut tables = Ok(());
    let mut form = Ok(());
    for n in 0..=max_n {
        for d in decompositions(&GroundSet::range(n), 2, false) {
            let (s, t) = (&d[0], &d[1]);
            if tables.is_ok() {
                let c = constants_with(&e, s, t);
                if let Some((k, a, b)) = first_difference(&c.product, &c.coproduct) {
                    tables = Err(Witness::new(format!("product constant {a} but coproduct constant {b}"))
                        .parts(&d)
                        .elements([&k.0, &k.1, &k.2]));
                }
            }
            if form.is_ok() {
                form = form_on(&e, s, t);
            }
        }
    }
    FsdReport { hopf, tables, form }
}

fn form_on(e: &Engine, s: &GroundSet, t: &GroundSet) -> Verdict {
    let zs = e.elements(&s.union(t));
    for x in e.elements(s).iter() {
        for y in e.elements(t).iter() {
            let xy = TensorVector::basis(vec![x.clone(), y.clone()]);
            let prod = e.product_basis(s, t, x, y);
            for z in zs.iter() {
                let left = prod.pairing(&Vector::basis(z.clone()));
                let right = tensor_pairing(&xy, &e.coproduct_basis(s, t, z));
                if left != right {
                    return Err(Witness::new(format!("<∇(x⊗y), z> = {left} but <x⊗y, Δz> = {right}"))
                        .parts([s, t])
                        .elements([x, y, z]));
                }
            }
        }
    }
    Ok(())
}

fn tensor_pairing(a: &TensorVector, b: &TensorVector) -> Q {
    a.terms().map(|(k, c)| c * b.coeff(k)).fold(Q::zero(), |x, y| x + y)
}

/// The dual structure: products become transposed coproducts and vice versa.
pub fn dual_transpose(h: &LinearizedHopf) -> LinearizedHopf {
    let product = match &h.coproduct {
        Coproduct::FromPi(pi) => Product::TransposeOfPi(pi.clone()),
        Coproduct::TransposeOfMu(mu) => Product::FromMu(mu.clone()),
    };
    let coproduct = match &h.product {
        Product::FromMu(mu) => Coproduct::TransposeOfMu(mu.clone()),
        Product::TransposeOfPi(pi) => Coproduct::FromPi(pi.clone()),
    };
    LinearizedHopf { name: format!("dual {}", h.name), basis: h.basis.clone(), product, coproduct }
}

/// Compares the structure constants of two structures on the same basis,
/// optionally transposing the first.
pub fn compare_tables(h1: &LinearizedHopf, h2: &LinearizedHopf, transpose_first: bool, max_n: usize) -> Verdict {
    let (e1, e2) = (Engine::new(h1), Engine::new(h2));
    for n in 0..=max_n {
        for d in decompositions(&GroundSet::range(n), 2, false) {
            let mut c1 = constants_with(&e1, &d[0], &d[1]);
            if transpose_first {
                c1 = c1.transpose();
            }
            let c2 = constants_with(&e2, &d[0], &d[1]);
            for (which, a, b) in [("product", &c1.product, &c2.product), ("coproduct", &c1.coproduct, &c2.coproduct)] {
                if let Some((k, x, y)) = first_difference(a, b) {
                    return Err(Witness::new(format!("{which} constants differ: {x} vs {y}"))
                        .parts(&d)
                        .elements([&k.0, &k.1, &k.2]));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_e_c, make_pi};

    #[test]
    fn fsd_on_partitions_depends_on_the_coproduct() {
        let p = make_pi();
        let (mu, pi) = (p.mu.as_ref().unwrap(), p.pi.as_ref().unwrap());
        assert!(check_fsd(&LinearizedHopf::mu_mu(mu), 3).verdict().is_ok());
        let r = check_fsd(&LinearizedHopf::mu_pi(mu, pi), 3);
        assert!(r.tables.is_err() && r.form.is_err());
        assert_eq!(r.tables.unwrap_err().parts.len(), 2);
    }

    #[test]
    fn maps_with_restriction_are_fsd() {
        let e = make_e_c(2);
        let h = LinearizedHopf::mu_pi(e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap());
        assert!(check_fsd(&h, 3).verdict().is_ok());
    }

    #[test]
    fn dual_is_an_involution() {
        let p = make_pi();
        let h = LinearizedHopf::mu_pi(p.mu.as_ref().unwrap(), p.pi.as_ref().unwrap());
        let dd = dual_transpose(&dual_transpose(&h));
        assert!(compare_tables(&h, &dd, false, 3).is_ok());
        assert!(compare_tables(&h, &dual_transpose(&h), true, 3).is_ok());
        assert!(compare_tables(&h, &dual_transpose(&h), false, 3).is_err());
    }
}
