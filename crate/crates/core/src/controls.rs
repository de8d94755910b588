//! Seeded multiplicative systems that satisfy or break the local
//! self-compatibility conditions in known ways.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{disjoint_union, make_e_c, make_l, make_perm, make_pi, make_s, make_x_c, Filtered};
use crate::element::Element;
use crate::ground::GroundSet;
use crate::species::{MultSystem, Species};

/// Which of the conditions (a) commutative, (b) injective, (c) image
/// condition are expected to hold at n ≤ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub commutative: bool,
    pub injective: bool,
    pub image_condition: bool,
}

impl Expected {
    const ALL: Expected = Expected { commutative: true, injective: true, image_condition: true };

    pub fn self_compatible(&self) -> bool {
        self.commutative && self.injective && self.image_condition
    }
}

#[derive(Clone)]
pub struct ControlSystem {
    pub family: &'static str,
    pub mu: MultSystem,
    pub expected: Expected,
}

fn colors_of(x: &Element) -> impl Iterator<Item = u32> + '_ {
    let Element::Map(v) = x else { panic!("{x} is not a map") };
    v.iter().map(|p| p.1)
}

fn constant(ground: &GroundSet, c: u32) -> Element {
    Element::Map(ground.labels().iter().map(|&l| (l, c)).collect())
}

fn concatenation(reverse: bool) -> ControlSystem {
    let l = make_l();
    let mu = MultSystem::new(if reverse { "reverse concatenation" } else { "concatenation" }, l.species, move |_, _, x, y| {
        let (Element::Order(a), Element::Order(b)) = (x, y) else { panic!("concatenation needs linear orders") };
        let (a, b) = if reverse { (b, a) } else { (a, b) };
        Element::Order(a.iter().chain(b).copied().collect())
    });
    ControlSystem { family: "noncommutative", mu, expected: Expected { commutative: false, ..Expected::ALL } }
}

/// Monochromatic maps; a product of two nonempty maps takes the higher-ranked color.
fn merge_to_max(colors: u32, rank: Vec<u32>) -> ControlSystem {
    let species: Species = Arc::new(Filtered {
        base: make_e_c(colors).species,
        name: format!("mono E_C:{colors}"),
        keep: Arc::new(|x| {
            let mut cs = colors_of(x);
            let first = cs.next();
            cs.all(|c| Some(c) == first)
        }),
    });
    let mu = MultSystem::new(format!("merge to max {rank:?}"), species, move |s, t, x, y| {
        if s.is_empty() || t.is_empty() {
            return disjoint_union(x, y);
        }
        let top = colors_of(x).chain(colors_of(y)).max_by_key(|&c| rank[c as usize]).unwrap();
        constant(&s.union(t), top)
    });
    ControlSystem { family: "merge_to_max", mu, expected: Expected { injective: false, ..Expected::ALL } }
}

fn one_block_merge() -> ControlSystem {
    let mu = MultSystem::new("one-block merge", make_pi().species, |s, t, x, y| {
        if s.is_empty() || t.is_empty() {
            disjoint_union(x, y)
        } else {
            Element::Partition(vec![s.union(t)])
        }
    });
    ControlSystem { family: "one_block_merge", mu, expected: Expected { commutative: true, injective: false, image_condition: false } }
}

fn in_semigroup(k: u32, a: u32, b: u32) -> bool {
    (0..=k / a).any(|i| (k - i * a).is_multiple_of(b))
}

/// Maps whose total color weight lies in the numerical semigroup ⟨a, b⟩,
/// multiplied by union.
fn weighted(family: &'static str, weights: Vec<u32>, a: u32, b: u32) -> ControlSystem {
    let colors = weights.len() as u32;
    let w = weights.clone();
    let species: Species = Arc::new(Filtered {
        base: make_e_c(colors).species,
        name: format!("weights {weights:?} in <{a},{b}>"),
        keep: Arc::new(move |x| in_semigroup(colors_of(x).map(|c| w[c as usize]).sum(), a, b)),
    });
    let m = |k| in_semigroup(k, a, b);
    let breaks = weights.iter().any(|&x| !m(x) && weights.iter().any(|&y| m(y) && m(x + y)));
    let mu = MultSystem::new("union", species, |_, _, x, y| disjoint_union(x, y));
    ControlSystem { family, mu, expected: Expected { image_condition: !breaks, ..Expected::ALL } }
}

fn passing(rng: &mut ChaCha8Rng) -> ControlSystem {
    let entry = match rng.random_range(0..4) {
        0 => make_e_c(rng.random_range(1..=3)),
        1 => make_pi(),
        2 => make_perm(),
        _ => make_s(&make_x_c(rng.random_range(1..=2))).unwrap(),
    };
    ControlSystem { family: "control", mu: entry.mu.unwrap(), expected: Expected::ALL }
}

/// `count` systems drawn from six families in rotation, all derived from `seed`.
pub fn perturbed_systems(seed: u64, count: usize) -> Vec<ControlSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 6 {
            0 => concatenation(rng.random_bool(0.5)),
            1 => {
                let colors = rng.random_range(2..=3);
                let mut rank: Vec<u32> = (0..colors).collect();
                rank.shuffle(&mut rng);
                merge_to_max(colors, rank)
            }
            2 => one_block_merge(),
            3 => {
                let mut w = vec![0, 1, 2];
                w.shuffle(&mut rng);
                weighted("weighted_break", w, 2, 3)
            }
            4 => {
                let colors = rng.random_range(2..=3);
                let w: Vec<u32> = std::iter::once(0).chain((1..colors).map(|_| rng.random_range(0..=6))).collect();
                let a = rng.random_range(2..=5);
                let b = rng.random_range(a + 1..=7);
                weighted("weighted_random", w, a, b)
            }
            _ => passing(&mut rng),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::check_local_conditions;

    #[test]
    fn semigroup_membership() {
        let m: Vec<u32> = (0..8).filter(|&k| in_semigroup(k, 2, 3)).collect();
        assert_eq!(m, vec![0, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn each_family_breaks_what_it_claims() {
        for c in perturbed_systems(0, 12) {
            let r = check_local_conditions(&c.mu, 3);
            let got = Expected {
                commutative: r.commutative.is_ok(),
                injective: r.injective.is_ok(),
                image_condition: r.image_condition.is_ok(),
            };
            assert_eq!(got, c.expected, "{} {}", c.family, c.mu.name);
        }
    }

    #[test]
    fn same_seed_same_systems() {
        let names = |s| perturbed_systems(s, 50).iter().map(|c| c.mu.species.name()).collect::<Vec<_>>();
        assert_eq!(names(7), names(7));
    }
}
