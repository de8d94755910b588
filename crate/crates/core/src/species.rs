//! Set species, their transport laws, and multiplicative/comultiplicative systems.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::IndexedRandom;

use crate::element::Element;
use crate::ground::{decompositions, Bijection, GroundSet};
use crate::report::{Verdict, Witness};

/// A functor from finite sets with bijections to finite sets, given by an
/// enumeration of each component and a transport rule.
pub trait SetSpecies: Send + Sync {
    fn name(&self) -> String;
    /// Elements over `ground` in a fixed deterministic order.
    fn elements(&self, ground: &GroundSet) -> Vec<Element>;
    fn transport(&self, sigma: &Bijection, x: &Element) -> Element;
}

pub type Species = Arc<dyn SetSpecies>;

/// Checks the identity and composition laws of transport on `ground`, over all
/// bijection pairs or `trials` random ones.
pub fn transport_check(p: &dyn SetSpecies, ground: &GroundSet, trials: Option<(usize, &mut dyn rand::RngCore)>) -> Verdict {
    let elems = p.elements(ground);
    let all = Bijection::all_on(ground);
    let id = Bijection::identity(ground);
    let expected: HashSet<&Element> = elems.iter().collect();
    for x in &elems {
        if &p.transport(&id, x) != x {
            return Err(Witness::new(format!("transport along {id} moves an element")).parts([ground]).elements([x]));
        }
    }
    for s in &all {
        let image: HashSet<Element> = elems.iter().map(|x| p.transport(s, x)).collect();
        let image_ref: HashSet<&Element> = image.iter().collect();
        if image_ref != expected {
            return Err(Witness::new(format!("transport along {s} is not a bijection of the component")).parts([ground]));
        }
    }
    let check_pair = |s: &Bijection, t: &Bijection| -> Verdict {
        let st = s.compose(t).expect("endomorphisms compose");
        for x in &elems {
            let lhs = p.transport(&st, x);
            let rhs = p.transport(s, &p.transport(t, x));
            if lhs != rhs {
                return Err(Witness::new(format!("transport along {s} after {t} differs from the composite"))
                    .parts([ground])
                    .elements([x, &lhs, &rhs]));
            }
        }
        Ok(())
    };
    match trials {
        None => {
            for s in &all {
                for t in &all {
                    check_pair(s, t)?;
                }
            }
        }
        Some((count, rng)) => {
            for _ in 0..count {
                let s = all.choose(rng).unwrap();
                let t = all.choose(rng).unwrap();
                check_pair(s, t)?;
            }
        }
    }
    // Shifting labels exercises bijections between different sets.
    let shift = Bijection::new(ground.clone(), ground.labels().iter().map(|l| l + 100).collect()).unwrap();
    let target: HashSet<Element> = p.elements(shift.target()).into_iter().collect();
    for x in &elems {
        let y = p.transport(&shift, x);
        if !target.contains(&y) || p.transport(&shift.inverse(), &y) != *x {
            return Err(Witness::new(format!("transport along {shift} leaves the species")).parts([ground]).elements([x]));
        }
    }
    Ok(())
}

pub type MuFn = dyn Fn(&GroundSet, &GroundSet, &Element, &Element) -> Element + Send + Sync;
pub type PiFn = dyn Fn(&GroundSet, &GroundSet, &Element) -> (Element, Element) + Send + Sync;

/// A natural family of maps P[S] × P[T] → P[S⊔T].
#[derive(Clone)]
pub struct MultSystem {
    pub name: String,
    pub species: Species,
    mu: Arc<MuFn>,
}

impl MultSystem {
    pub fn new(
        name: impl Into<String>,
        species: Species,
        mu: impl Fn(&GroundSet, &GroundSet, &Element, &Element) -> Element + Send + Sync + 'static,
    ) -> Self {
        MultSystem { name: name.into(), species, mu: Arc::new(mu) }
    }

    pub fn apply(&self, s: &GroundSet, t: &GroundSet, x: &Element, y: &Element) -> Element {
        (self.mu)(s, t, x, y)
    }

    /// The iterated product over `parts`, folding from the left.
    pub fn apply_iter(&self, parts: &[GroundSet], xs: &[Element]) -> Element {
        assert_eq!(parts.len(), xs.len());
        let mut acc = xs[0].clone();
        let mut ground = parts[0].clone();
        for (p, x) in parts.iter().zip(xs).skip(1) {
            acc = self.apply(&ground, p, &acc, x);
            ground = ground.union(p);
        }
        acc
    }

    /// Exhaustive naturality on every decomposition of {1..n}, n ≤ max_n.
    pub fn check_naturality(&self, max_n: usize) -> Verdict {
        for n in 0..=max_n {
            let ground = GroundSet::range(n);
            let sigmas = Bijection::all_on(&ground);
            for st in decompositions(&ground, 2, false) {
                let (s, t) = (&st[0], &st[1]);
                let xs = self.species.elements(s);
                let ys = self.species.elements(t);
                for x in &xs {
                    for y in &ys {
                        let z = self.apply(s, t, x, y);
                        if z.ground() != ground {
                            return Err(Witness::new("product lands on the wrong ground set").parts([s, t]).elements([x, y, &z]));
                        }
                        for sigma in &sigmas {
                            let lhs = self.species.transport(sigma, &z);
                            let (ss, tt) = (sigma.image(s), sigma.image(t));
                            let rhs = self.apply(
                                &ss,
                                &tt,
                                &self.species.transport(&sigma.restrict(s), x),
                                &self.species.transport(&sigma.restrict(t), y),
                            );
                            if lhs != rhs {
                                return Err(Witness::new(format!("product does not commute with {sigma}"))
                                    .parts([s, t])
                                    .elements([x, y]));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A natural family of maps P[S⊔T] → P[S] × P[T].
#[derive(Clone)]
pub struct ComultSystem {
    pub name: String,
    pub species: Species,
    pi: Arc<PiFn>,
}

impl ComultSystem {
    pub fn new(
        name: impl Into<String>,
        species: Species,
        pi: impl Fn(&GroundSet, &GroundSet, &Element) -> (Element, Element) + Send + Sync + 'static,
    ) -> Self {
        ComultSystem { name: name.into(), species, pi: Arc::new(pi) }
    }

    pub fn apply(&self, s: &GroundSet, t: &GroundSet, z: &Element) -> (Element, Element) {
        (self.pi)(s, t, z)
    }

    /// The iterated coproduct over `parts`, splitting off the first part each time.
    pub fn apply_iter(&self, parts: &[GroundSet], z: &Element) -> Vec<Element> {
        let mut out = Vec::with_capacity(parts.len());
        let mut rest = z.clone();
        for i in 0..parts.len() - 1 {
            let tail = GroundSet::union_all(&parts[i + 1..]);
            let (a, r) = self.apply(&parts[i], &tail, &rest);
            out.push(a);
            rest = r;
        }
        out.push(rest);
        out
    }

    pub fn check_naturality(&self, max_n: usize) -> Verdict {
        for n in 0..=max_n {
            let ground = GroundSet::range(n);
            let sigmas = Bijection::all_on(&ground);
            let zs = self.species.elements(&ground);
            for st in decompositions(&ground, 2, false) {
                let (s, t) = (&st[0], &st[1]);
                for z in &zs {
                    let (x, y) = self.apply(s, t, z);
                    if &x.ground() != s || &y.ground() != t {
                        return Err(Witness::new("coproduct lands on the wrong ground sets").parts([s, t]).elements([z, &x, &y]));
                    }
                    for sigma in &sigmas {
                        let (a, b) = self.apply(&sigma.image(s), &sigma.image(t), &self.species.transport(sigma, z));
                        if a != self.species.transport(&sigma.restrict(s), &x) || b != self.species.transport(&sigma.restrict(t), &y) {
                            return Err(Witness::new(format!("coproduct does not commute with {sigma}"))
                                .parts([s, t])
                                .elements([z]));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
