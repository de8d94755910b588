//! Hopf self-compatibility of a multiplicative system, checked directly and
//! through the three local conditions (commutative, injective, image condition).

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::axioms::{check_axiom, Axiom};
use super::LinearizedHopf;
use crate::element::Element;
use crate::ground::{decompositions, GroundSet};
use crate::report::{Verdict, Witness};
use crate::species::MultSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Direct,
    Local,
}

/// Checks that μ is associative and unital, the standing assumption.
fn precondition(mu: &MultSystem, max_n: usize) -> Verdict {
    let h = LinearizedHopf::mu_mu(mu);
    for a in [Axiom::Associative, Axiom::Unital] {
        check_axiom(&h, a, max_n).map_err(|w| Witness { detail: format!("precondition {a}: {}", w.detail), ..w })?;
    }
    Ok(())
}

pub fn check_self_compatible(mu: &MultSystem, mode: Mode, max_n: usize) -> Verdict {
    precondition(mu, max_n)?;
    match mode {
        Mode::Direct => check_axiom(&LinearizedHopf::mu_mu(mu), Axiom::HopfCompatible, max_n),
        Mode::Local => check_local_conditions(mu, max_n).all(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub commutative: Verdict,
    pub injective: Verdict,
    pub image_condition: Verdict,
}

impl LocalReport {
    pub fn all(&self) -> Verdict {
        self.commutative.clone()?;
        self.injective.clone()?;
        self.image_condition.clone()
    }
}

struct Images<'a> {
    mu: &'a MultSystem,
    cache: HashMap<(GroundSet, GroundSet), HashSet<Element>>,
}

impl Images<'_> {
    fn contains(&mut self, s: &GroundSet, t: &GroundSet, z: &Element) -> bool {
        let mu = self.mu;
        self.cache
            .entry((s.clone(), t.clone()))
            .or_insert_with(|| {
                let ys = mu.species.elements(t);
                mu.species.elements(s).iter().flat_map(|x| ys.iter().map(move |y| mu.apply(s, t, x, y))).collect()
            })
            .contains(z)
    }
}

/// Evaluates the three local conditions separately on {1..n}, n ≤ max_n.
pub fn check_local_conditions(mu: &MultSystem, max_n: usize) -> LocalReport {
    let p = &mu.species;
    let mut commutative = Ok(());
    let mut injective = Ok(());
    let mut image_condition = Ok(());
    let mut images = Images { mu, cache: HashMap::new() };
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        let pairs = decompositions(&ground, 2, false);
        for d in &pairs {
            let (s, t) = (&d[0], &d[1]);
            let mut seen: HashMap<Element, (Element, Element)> = HashMap::new();
            for x in p.elements(s) {
                for y in p.elements(t) {
                    let z = mu.apply(s, t, &x, &y);
                    if commutative.is_ok() && z != mu.apply(t, s, &y, &x) {
                        commutative = Err(Witness::new("condition (a): μ(x,y) != μ(y,x)").parts(d).elements([&x, &y]));
                    }
                    if injective.is_ok() {
                        if let Some((a, b)) = seen.get(&z) {
                            injective = Err(Witness::new(format!("condition (b): ({a}, {b}) and ({x}, {y}) both give {z}"))
                                .parts(d)
                                .elements([a, b, &x, &y]));
                        }
                    }
                    seen.insert(z, (x.clone(), y));
                }
            }
        }
        if image_condition.is_ok() {
            image_condition = image_condition_on(&mut images, &pairs);
        }
    }
    LocalReport { commutative, injective, image_condition }
}

// If μ_{S,S'}(λ,λ') lies in Image μ_{A,B} then λ and λ' split along A and B.
fn image_condition_on(images: &mut Images, pairs: &[Vec<GroundSet>]) -> Verdict {
    let p = images.mu.species.clone();
    for d in pairs {
        let (s, s2) = (&d[0], &d[1]);
        let xs = p.elements(s);
        let ys = p.elements(s2);
        for ab in pairs {
            let (a, b) = (&ab[0], &ab[1]);
            for x in &xs {
                for y in &ys {
                    let z = images.mu.apply(s, s2, x, y);
                    if !images.contains(a, b, &z) {
                        continue;
                    }
                    let left = images.contains(&a.intersection(s), &b.intersection(s), x);
                    let right = images.contains(&a.intersection(s2), &b.intersection(s2), y);
                    if !left || !right {
                        let bad = if left { y } else { x };
                        return Err(Witness::new(format!("condition (c): {z} splits along (A,B) but {bad} does not"))
                            .parts([s, s2, a, b])
                            .elements([x, y]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Both modes of the self-compatibility check on the same system.
#[derive(Clone, Debug)]
pub struct SelfCompatOutcome {
    pub direct: Verdict,
    pub local: Verdict,
}

impl SelfCompatOutcome {
    pub fn agree(&self) -> bool {
        self.direct.is_ok() == self.local.is_ok()
    }

    pub fn holds(&self) -> bool {
        self.direct.is_ok() && self.local.is_ok()
    }
}

/// Runs the precondition and then both modes. A precondition failure is
/// returned as the error.
pub fn self_compat_both(mu: &MultSystem, max_n: usize) -> Result<SelfCompatOutcome, Witness> {
    precondition(mu, max_n)?;
    Ok(SelfCompatOutcome {
        direct: check_axiom(&LinearizedHopf::mu_mu(mu), Axiom::HopfCompatible, max_n),
        local: check_local_conditions(mu, max_n).all(),
    })
}
