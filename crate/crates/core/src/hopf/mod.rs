//! Linearized products and coproducts, and the checks built on them.

pub mod antipode;
pub mod axioms;
pub mod constants;
pub mod selfcompat;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::element::Element;
use crate::ground::{permutations, GroundSet};
use crate::report::Witness;
use crate::species::{ComultSystem, MultSystem, Species};
use crate::vector::{TensorVector, Vector};

pub use antipode::{check_antipode_axiom, takeuchi_antipode};
pub use axioms::{check_axiom, check_delta_nabla_identity, Axiom, ALL_AXIOMS};
pub use constants::{check_fsd, compare_tables, dual_transpose, structure_constants, FsdReport, StructureConstants};
pub use selfcompat::{check_local_conditions, check_self_compatible, self_compat_both, LocalReport, Mode, SelfCompatOutcome};

#[derive(Clone)]
pub enum Product {
    FromMu(MultSystem),
    TransposeOfPi(ComultSystem),
}

#[derive(Clone)]
pub enum Coproduct {
    FromPi(ComultSystem),
    TransposeOfMu(MultSystem),
}

/// A species basis with a linear product and coproduct.
#[derive(Clone)]
pub struct LinearizedHopf {
    pub name: String,
    pub basis: Species,
    pub product: Product,
    pub coproduct: Coproduct,
}

impl LinearizedHopf {
    /// (KP, ∇^μ, Δ^π)
    pub fn mu_pi(mu: &MultSystem, pi: &ComultSystem) -> Self {
        LinearizedHopf {
            name: format!("({}, nabla^mu, delta^pi)", mu.species.name()),
            basis: mu.species.clone(),
            product: Product::FromMu(mu.clone()),
            coproduct: Coproduct::FromPi(pi.clone()),
        }
    }

    /// (KP, ∇^μ, Δ^μ)
    pub fn mu_mu(mu: &MultSystem) -> Self {
        LinearizedHopf {
            name: format!("({}, nabla^mu, delta^mu)", mu.species.name()),
            basis: mu.species.clone(),
            product: Product::FromMu(mu.clone()),
            coproduct: Coproduct::TransposeOfMu(mu.clone()),
        }
    }

    /// (KP, ∇^π, Δ^μ)
    pub fn pi_mu(pi: &ComultSystem, mu: &MultSystem) -> Self {
        LinearizedHopf {
            name: format!("({}, nabla^pi, delta^mu)", mu.species.name()),
            basis: mu.species.clone(),
            product: Product::TransposeOfPi(pi.clone()),
            coproduct: Coproduct::TransposeOfMu(mu.clone()),
        }
    }

    /// (KP, ∇^π, Δ^π)
    pub fn pi_pi(pi: &ComultSystem) -> Self {
        LinearizedHopf {
            name: format!("({}, nabla^pi, delta^pi)", pi.species.name()),
            basis: pi.species.clone(),
            product: Product::TransposeOfPi(pi.clone()),
            coproduct: Coproduct::FromPi(pi.clone()),
        }
    }
}

type PairKey = (GroundSet, GroundSet);
type PiFibers = HashMap<(Element, Element), Vec<Element>>;
type MuFibers = HashMap<Element, Vec<(Element, Element)>>;

/// Evaluates the maps of one [`LinearizedHopf`], memoizing component
/// enumerations and fibers. One engine serves one computation.
pub struct Engine<'h> {
    pub h: &'h LinearizedHopf,
    elements: RefCell<HashMap<GroundSet, Rc<Vec<Element>>>>,
    pi_fibers: RefCell<HashMap<PairKey, Rc<PiFibers>>>,
    mu_fibers: RefCell<HashMap<PairKey, Rc<MuFibers>>>,
    antipodes: RefCell<HashMap<Element, Vector>>,
}

impl<'h> Engine<'h> {
    pub fn new(h: &'h LinearizedHopf) -> Self {
        Engine {
            h,
            elements: RefCell::default(),
            pi_fibers: RefCell::default(),
            mu_fibers: RefCell::default(),
            antipodes: RefCell::default(),
        }
    }

    pub fn elements(&self, g: &GroundSet) -> Rc<Vec<Element>> {
        if let Some(v) = self.elements.borrow().get(g) {
            return v.clone();
        }
        let v = Rc::new(self.h.basis.elements(g));
        self.elements.borrow_mut().insert(g.clone(), v.clone());
        v
    }

    /// The unique element over ∅, if the species is connected.
    pub fn unit(&self) -> Option<Element> {
        let e = self.elements(&GroundSet::empty());
        (e.len() == 1).then(|| e[0].clone())
    }

    fn pi_fiber(&self, pi: &ComultSystem, s: &GroundSet, t: &GroundSet) -> Rc<PiFibers> {
        let key = (s.clone(), t.clone());
        if let Some(f) = self.pi_fibers.borrow().get(&key) {
            return f.clone();
        }
        let mut fib: HashMap<(Element, Element), Vec<Element>> = HashMap::new();
        for z in self.elements(&s.union(t)).iter() {
            fib.entry(pi.apply(s, t, z)).or_default().push(z.clone());
        }
        let fib = Rc::new(fib);
        self.pi_fibers.borrow_mut().insert(key, fib.clone());
        fib
    }

    fn mu_fiber(&self, mu: &MultSystem, s: &GroundSet, t: &GroundSet) -> Rc<MuFibers> {
        let key = (s.clone(), t.clone());
        if let Some(f) = self.mu_fibers.borrow().get(&key) {
            return f.clone();
        }
        let mut fib: HashMap<Element, Vec<(Element, Element)>> = HashMap::new();
        let ys = self.elements(t);
        for x in self.elements(s).iter() {
            for y in ys.iter() {
                fib.entry(mu.apply(s, t, x, y)).or_default().push((x.clone(), y.clone()));
            }
        }
        let fib = Rc::new(fib);
        self.mu_fibers.borrow_mut().insert(key, fib.clone());
        fib
    }

    /// ∇_{S,T}(x⊗y) for basis elements.
    pub fn product_basis(&self, s: &GroundSet, t: &GroundSet, x: &Element, y: &Element) -> Vector {
        match &self.h.product {
            Product::FromMu(mu) => Vector::basis(mu.apply(s, t, x, y)),
            Product::TransposeOfPi(pi) => {
                let mut v = Vector::zero(s.union(t));
                if let Some(zs) = self.pi_fiber(pi, s, t).get(&(x.clone(), y.clone())) {
                    for z in zs {
                        v.add_term(z.clone(), crate::vector::q(1));
                    }
                }
                v
            }
        }
    }

    /// Δ_{S,T}(z) for a basis element.
    pub fn coproduct_basis(&self, s: &GroundSet, t: &GroundSet, z: &Element) -> TensorVector {
        match &self.h.coproduct {
            Coproduct::FromPi(pi) => {
                let (a, b) = pi.apply(s, t, z);
                TensorVector::basis(vec![a, b])
            }
            Coproduct::TransposeOfMu(mu) => {
                let mut out = TensorVector::zero(vec![s.clone(), t.clone()]);
                if let Some(pairs) = self.mu_fiber(mu, s, t).get(z) {
                    for (a, b) in pairs {
                        out.add_term(vec![a.clone(), b.clone()], crate::vector::q(1));
                    }
                }
                out
            }
        }
    }

    pub fn nabla(&self, s: &GroundSet, t: &GroundSet, v: &TensorVector) -> Vector {
        assert_eq!(v.parts(), &[s.clone(), t.clone()], "product parts mismatch");
        self.nabla_at(v, 0).into_vector()
    }

    pub fn delta(&self, s: &GroundSet, t: &GroundSet, v: &Vector) -> TensorVector {
        self.delta_at(&TensorVector::from_vector(v), 0, s, t)
    }

    /// Multiplies factors `i` and `i + 1`.
    pub fn nabla_at(&self, v: &TensorVector, i: usize) -> TensorVector {
        let (s, t) = (v.parts()[i].clone(), v.parts()[i + 1].clone());
        v.map_pair(i, &s.union(&t), |x, y| self.product_basis(&s, &t, x, y))
    }

    /// Splits factor `i`, whose ground set must be `a ⊔ b`.
    pub fn delta_at(&self, v: &TensorVector, i: usize, a: &GroundSet, b: &GroundSet) -> TensorVector {
        assert_eq!(v.parts()[i], a.union(b), "coproduct parts do not cover the factor");
        v.map_factor(i, &[a.clone(), b.clone()], |z| self.coproduct_basis(a, b, z))
    }

    /// ∇_{S1,...,Sk}, multiplying from the left.
    pub fn iterate_nabla(&self, v: &TensorVector) -> Vector {
        let mut cur = v.clone();
        while cur.parts().len() > 1 {
            cur = self.nabla_at(&cur, 0);
        }
        cur.into_vector()
    }

    /// Δ_{S1,...,Sk}, splitting off the first part each time.
    pub fn iterate_delta(&self, parts: &[GroundSet], v: &Vector) -> TensorVector {
        let mut cur = TensorVector::from_vector(v);
        for i in 0..parts.len().saturating_sub(1) {
            let rest = GroundSet::union_all(&parts[i + 1..]);
            cur = self.delta_at(&cur, i, &parts[i], &rest);
        }
        cur
    }

    /// Computes ∇_{S1,...,Sk} along all (k-1)! orders of the joins and
    /// reports the first pair of orders that disagree.
    pub fn iterate_nabla_verified(&self, v: &TensorVector) -> Result<Vector, Witness> {
        let k = v.parts().len();
        let mut first: Option<(Vec<u32>, Vector)> = None;
        for order in permutations(&(0..k.saturating_sub(1) as u32).collect::<Vec<_>>()) {
            // current factors as runs [lo, hi) of the original parts
            let mut runs: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
            let mut cur = v.clone();
            for &j in &order {
                let p = runs.iter().position(|r| r.1 == j as usize + 1).unwrap();
                cur = self.nabla_at(&cur, p);
                runs[p].1 = runs[p + 1].1;
                runs.remove(p + 1);
            }
            let res = cur.into_vector();
            match &first {
                None => first = Some((order, res)),
                Some((o, r)) if r != &res => {
                    return Err(Witness::new(format!("join orders {o:?} and {order:?} disagree: {r} vs {res}"))
                        .parts(v.parts()));
                }
                _ => {}
            }
        }
        Ok(first.map(|f| f.1).unwrap_or_else(|| TensorVector::zero(v.parts().to_vec()).into_vector()))
    }

    /// Computes Δ_{S1,...,Sk} along all (k-1)! orders of the cuts.
    pub fn iterate_delta_verified(&self, parts: &[GroundSet], v: &Vector) -> Result<TensorVector, Witness> {
        let k = parts.len();
        let mut first: Option<(Vec<u32>, TensorVector)> = None;
        for order in permutations(&(0..k.saturating_sub(1) as u32).collect::<Vec<_>>()) {
            let mut runs: Vec<(usize, usize)> = vec![(0, k)];
            let mut cur = TensorVector::from_vector(v);
            for &j in &order {
                let j = j as usize;
                let p = runs.iter().position(|r| r.0 <= j && j + 1 < r.1).unwrap();
                let (lo, hi) = runs[p];
                let a = GroundSet::union_all(&parts[lo..=j]);
                let b = GroundSet::union_all(&parts[j + 1..hi]);
                cur = self.delta_at(&cur, p, &a, &b);
                runs[p] = (lo, j + 1);
                runs.insert(p + 1, (j + 1, hi));
            }
            match &first {
                None => first = Some((order, cur)),
                Some((o, r)) if r != &cur => {
                    return Err(Witness::new(format!("cut orders {o:?} and {order:?} disagree: {r} vs {cur}")).parts(parts));
                }
                _ => {}
            }
        }
        Ok(first.map(|f| f.1).unwrap())
    }

    /// Takeuchi's antipode on a basis element, memoized.
    pub fn antipode_basis(&self, x: &Element) -> Vector {
        if let Some(v) = self.antipodes.borrow().get(x) {
            return v.clone();
        }
        let v = antipode::takeuchi_with(self, &Vector::basis(x.clone()));
        self.antipodes.borrow_mut().insert(x.clone(), v.clone());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_l, make_pi};
    use crate::vector::q;

    fn gs(v: &[u32]) -> GroundSet {
        GroundSet::new(v.iter().copied()).unwrap()
    }

    fn part(blocks: &[&[u32]]) -> Element {
        Element::partition(blocks.iter().map(|b| gs(b))).unwrap()
    }

    #[test]
    fn delta_mu_on_partitions() {
        let pi = make_pi();
        let h = LinearizedHopf::mu_mu(pi.mu.as_ref().unwrap());
        let e = Engine::new(&h);
        let d = e.coproduct_basis(&gs(&[1]), &gs(&[2]), &part(&[&[1], &[2]]));
        assert_eq!(d, TensorVector::basis(vec![part(&[&[1]]), part(&[&[2]])]));
        assert!(e.coproduct_basis(&gs(&[1]), &gs(&[2]), &part(&[&[1, 2]])).is_zero());
        let unit = e.unit().unwrap();
        let lam = part(&[&[1, 2]]);
        assert_eq!(e.coproduct_basis(&GroundSet::empty(), &gs(&[1, 2]), &lam), TensorVector::basis(vec![unit, lam]));
    }

    #[test]
    fn nabla_pi_on_partitions() {
        let pi = make_pi();
        let h = LinearizedHopf::pi_mu(pi.pi.as_ref().unwrap(), pi.mu.as_ref().unwrap());
        let e = Engine::new(&h);
        let v = e.product_basis(&gs(&[1]), &gs(&[2]), &part(&[&[1]]), &part(&[&[2]]));
        let mut want = Vector::basis(part(&[&[1], &[2]]));
        want.add_term(part(&[&[1, 2]]), q(1));
        assert_eq!(v, want);
    }

    #[test]
    fn iterated_orders_agree_for_associative_products() {
        let pi = make_pi();
        let h = LinearizedHopf::mu_pi(pi.mu.as_ref().unwrap(), pi.pi.as_ref().unwrap());
        let e = Engine::new(&h);
        let t = TensorVector::basis(vec![part(&[&[1]]), part(&[&[2]]), part(&[&[3]])]);
        assert_eq!(e.iterate_nabla_verified(&t).unwrap(), Vector::basis(part(&[&[1], &[2], &[3]])));
        let parts = [gs(&[1]), gs(&[2]), gs(&[3])];
        let v = Vector::basis(part(&[&[1, 2, 3]]));
        assert_eq!(e.iterate_delta_verified(&parts, &v).unwrap(), e.iterate_delta(&parts, &v));
    }

    #[test]
    fn permuted_parts_witness_non_commutativity() {
        let l = make_l();
        let h = LinearizedHopf::mu_pi(l.mu.as_ref().unwrap(), l.pi.as_ref().unwrap());
        let e = Engine::new(&h);
        let o = |s: &[u32]| Element::order(s.to_vec()).unwrap();
        let a = e.iterate_nabla(&TensorVector::basis(vec![o(&[1]), o(&[2]), o(&[3])]));
        let b = e.iterate_nabla(&TensorVector::basis(vec![o(&[3]), o(&[2]), o(&[1])]));
        assert_ne!(a, b);
        assert!(e.iterate_nabla_verified(&TensorVector::basis(vec![o(&[1]), o(&[2]), o(&[3])])).is_ok());
    }
}
