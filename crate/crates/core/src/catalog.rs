//! The built-in species with their multiplicative and comultiplicative systems.

use std::sync::Arc;

use serde::Serialize;

use crate::element::Element;
use crate::error::SpeciesError;
use crate::ground::{permutations, set_partitions, Bijection, GroundSet};
use crate::species::{ComultSystem, MultSystem, SetSpecies, Species};

/// Declared properties of a multiplicative system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuFlags {
    pub associative: bool,
    pub commutative: bool,
    pub unital: bool,
    pub injective: bool,
    pub surjective: bool,
}

/// Declared properties of a comultiplicative system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PiFlags {
    pub coassociative: bool,
    pub cocommutative: bool,
    pub counital: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl PiFlags {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub species: Species,
    pub mu: Option<MultSystem>,
    pub pi: Option<ComultSystem>,
    pub mu_flags: Option<MuFlags>,
    pub pi_flags: Option<PiFlags>,
    /// Every element lives on a one-element set.
    pub singleton_support: bool,
}

const GOOD_MU: MuFlags = MuFlags { associative: true, commutative: true, unital: true, injective: true, surjective: false };
const GOOD_PI: PiFlags = PiFlags { coassociative: true, cocommutative: true, counital: true, injective: false, surjective: true };

// ---------------------------------------------------------------- species

fn relabel_name(base: &str, n: u32) -> String {
    format!("{base}:{n}")
}

/// Maps I → {0..colors-1}.
pub struct Maps {
    pub colors: u32,
    name: String,
}

impl SetSpecies for Maps {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        let n = ground.len();
        let mut out = Vec::new();
        if n > 0 && self.colors == 0 {
            return out;
        }
        let mut digits = vec![0u32; n];
        loop {
            out.push(Element::Map(ground.labels().iter().copied().zip(digits.iter().copied()).collect()));
            let Some(i) = (0..n).rev().find(|&i| digits[i] + 1 < self.colors) else { break };
            digits[i] += 1;
            for d in digits.iter_mut().skip(i + 1) {
                *d = 0;
            }
        }
        out
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        x.relabel(sigma)
    }
}

/// Maps from one-element sets to {0..colors-1}; empty elsewhere.
pub struct SingletonMaps {
    pub colors: u32,
}

impl SetSpecies for SingletonMaps {
    fn name(&self) -> String {
        relabel_name("X_C", self.colors)
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        if ground.len() != 1 {
            return Vec::new();
        }
        let l = ground.labels()[0];
        (0..self.colors).map(|c| Element::Map(vec![(l, c)])).collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        x.relabel(sigma)
    }
}

pub struct Partitions;

impl SetSpecies for Partitions {
    fn name(&self) -> String {
        "Pi".into()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        set_partitions(ground).into_iter().map(Element::Partition).collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        x.relabel(sigma)
    }
}

pub struct Perms;

impl SetSpecies for Perms {
    fn name(&self) -> String {
        "Perm".into()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        permutations(ground.labels())
            .into_iter()
            .map(|img| Element::Perm(ground.labels().iter().copied().zip(img).collect()))
            .collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        x.relabel(sigma)
    }
}

pub struct Orders;

impl SetSpecies for Orders {
    fn name(&self) -> String {
        "L".into()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        permutations(ground.labels()).into_iter().map(Element::Order).collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        x.relabel(sigma)
    }
}

/// Simple graphs on the ground set.
pub struct Graphs;

impl SetSpecies for Graphs {
    fn name(&self) -> String {
        "G".into()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        let l = ground.labels();
        let pairs: Vec<(u32, u32)> =
            (0..l.len()).flat_map(|i| (i + 1..l.len()).map(move |j| (l[i], l[j]))).collect();
        (0u64..1 << pairs.len())
            .map(|m| {
                let edges = (0..pairs.len()).filter(|&i| m >> i & 1 == 1).map(|i| pairs[i]).collect();
                Element::Graph(ground.clone(), edges)
            })
            .collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        x.relabel(sigma)
    }
}

/// Set partitions whose blocks carry elements of an inner species.
pub struct LabeledPartitions {
    pub inner: Species,
}

impl SetSpecies for LabeledPartitions {
    fn name(&self) -> String {
        format!("S({})", self.inner.name())
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        let mut out = Vec::new();
        for blocks in set_partitions(ground) {
            let choices: Vec<Vec<Element>> = blocks.iter().map(|b| self.inner.elements(b)).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; blocks.len()];
            loop {
                out.push(Element::Labeled(
                    blocks.iter().cloned().zip(idx.iter().enumerate().map(|(i, &j)| choices[i][j].clone())).collect(),
                ));
                let Some(i) = (0..idx.len()).rev().find(|&i| idx[i] + 1 < choices[i].len()) else { break };
                idx[i] += 1;
                for d in idx.iter_mut().skip(i + 1) {
                    *d = 0;
                }
            }
        }
        out
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        let Element::Labeled(bs) = x else { panic!("{x} is not a labeled partition") };
        let mut w: Vec<(GroundSet, Element)> =
            bs.iter().map(|(b, l)| (sigma.image(b), self.inner.transport(&sigma.restrict(b), l))).collect();
        w.sort();
        Element::Labeled(w)
    }
}

/// The restriction of a species to nonempty sets.
pub struct Positive {
    pub inner: Species,
}

impl SetSpecies for Positive {
    fn name(&self) -> String {
        format!("{}+", self.inner.name())
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        if ground.is_empty() {
            Vec::new()
        } else {
            self.inner.elements(ground)
        }
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        self.inner.transport(sigma, x)
    }
}

/// The subspecies of elements satisfying a transport-invariant predicate.
pub struct Filtered {
    pub base: Species,
    pub name: String,
    pub keep: Arc<dyn Fn(&Element) -> bool + Send + Sync>,
}

impl SetSpecies for Filtered {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        self.base.elements(ground).into_iter().filter(|x| (self.keep)(x)).collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        self.base.transport(sigma, x)
    }
}

// ---------------------------------------------------------------- systems

fn merge_pairs(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

/// Disjoint union of maps, partitions, permutations, labeled partitions or graphs.
pub fn disjoint_union(x: &Element, y: &Element) -> Element {
    match (x, y) {
        (Element::Map(a), Element::Map(b)) => Element::Map(merge_pairs(a, b)),
        (Element::Perm(a), Element::Perm(b)) => Element::Perm(merge_pairs(a, b)),
        (Element::Partition(a), Element::Partition(b)) => {
            let mut v: Vec<GroundSet> = a.iter().chain(b).cloned().collect();
            v.sort();
            Element::Partition(v)
        }
        (Element::Labeled(a), Element::Labeled(b)) => {
            let mut v: Vec<(GroundSet, Element)> = a.iter().chain(b).cloned().collect();
            v.sort();
            Element::Labeled(v)
        }
        (Element::Graph(va, ea), Element::Graph(vb, eb)) => {
            Element::Graph(va.union(vb), merge_pairs(ea, eb))
        }
        _ => panic!("no disjoint union of {x} and {y}"),
    }
}

/// Restriction of a map, partition or graph to a subset.
pub fn restrict(z: &Element, s: &GroundSet) -> Element {
    match z {
        Element::Map(v) => Element::Map(v.iter().copied().filter(|p| s.contains(p.0)).collect()),
        Element::Partition(bs) => {
            let mut v: Vec<GroundSet> = bs.iter().map(|b| b.intersection(s)).filter(|b| !b.is_empty()).collect();
            v.sort();
            Element::Partition(v)
        }
        Element::Order(seq) => Element::Order(seq.iter().copied().filter(|&l| s.contains(l)).collect()),
        Element::Perm(v) => {
            // first return: follow the permutation until it lands back in s
            let img = |a: u32| v[v.binary_search_by_key(&a, |p| p.0).unwrap()].1;
            Element::Perm(
                v.iter()
                    .filter(|p| s.contains(p.0))
                    .map(|&(a, mut b)| {
                        while !s.contains(b) {
                            b = img(b);
                        }
                        (a, b)
                    })
                    .collect(),
            )
        }
        Element::Graph(_, es) => Element::Graph(
            s.clone(),
            es.iter().copied().filter(|&(a, b)| s.contains(a) && s.contains(b)).collect(),
        ),
        Element::Labeled(_) => panic!("labeled partitions have no canonical restriction"),
    }
}

fn union_mu(name: &str, species: Species) -> MultSystem {
    MultSystem::new(name, species, |_, _, x, y| disjoint_union(x, y))
}

fn restriction_pi(name: &str, species: Species) -> ComultSystem {
    ComultSystem::new(name, species, |s, t, z| (restrict(z, s), restrict(z, t)))
}

// ---------------------------------------------------------------- entries

pub fn make_e_c(colors: u32) -> CatalogEntry {
    let name = if colors == 1 { "E".to_string() } else { relabel_name("E_C", colors) };
    let species: Species = Arc::new(Maps { colors, name: name.clone() });
    CatalogEntry {
        name,
        mu: Some(union_mu("union", species.clone())),
        pi: Some(restriction_pi("restriction", species.clone())),
        species,
        mu_flags: Some(MuFlags { surjective: true, ..GOOD_MU }),
        pi_flags: Some(PiFlags { injective: true, ..GOOD_PI }),
        singleton_support: false,
    }
}

pub fn make_e() -> CatalogEntry {
    make_e_c(1)
}

pub fn make_x_c(colors: u32) -> CatalogEntry {
    CatalogEntry {
        name: relabel_name("X_C", colors),
        species: Arc::new(SingletonMaps { colors }),
        mu: None,
        pi: None,
        mu_flags: None,
        pi_flags: None,
        singleton_support: true,
    }
}

pub fn make_pi() -> CatalogEntry {
    let species: Species = Arc::new(Partitions);
    CatalogEntry {
        name: "Pi".into(),
        mu: Some(union_mu("union", species.clone())),
        pi: Some(restriction_pi("restriction", species.clone())),
        species,
        mu_flags: Some(GOOD_MU),
        pi_flags: Some(GOOD_PI),
        singleton_support: false,
    }
}

pub fn make_perm() -> CatalogEntry {
    let species: Species = Arc::new(Perms);
    CatalogEntry {
        name: "Perm".into(),
        mu: Some(union_mu("cycle union", species.clone())),
        pi: Some(restriction_pi("first return", species.clone())),
        species,
        mu_flags: Some(GOOD_MU),
        pi_flags: Some(GOOD_PI),
        singleton_support: false,
    }
}

pub fn make_l() -> CatalogEntry {
    let species: Species = Arc::new(Orders);
    let mu = MultSystem::new("concatenation", species.clone(), |_, _, x, y| match (x, y) {
        (Element::Order(a), Element::Order(b)) => Element::Order(a.iter().chain(b).copied().collect()),
        _ => panic!("concatenation needs linear orders"),
    });
    CatalogEntry {
        name: "L".into(),
        mu: Some(mu),
        pi: Some(restriction_pi("induced suborders", species.clone())),
        species,
        mu_flags: Some(MuFlags { commutative: false, ..GOOD_MU }),
        pi_flags: Some(GOOD_PI),
        singleton_support: false,
    }
}

/// Simple graphs with disjoint union and induced subgraphs.
pub fn make_graphs() -> CatalogEntry {
    let species: Species = Arc::new(Graphs);
    CatalogEntry {
        name: "G".into(),
        mu: Some(union_mu("union", species.clone())),
        pi: Some(restriction_pi("induced subgraphs", species.clone())),
        species,
        mu_flags: Some(GOOD_MU),
        pi_flags: Some(GOOD_PI),
        singleton_support: false,
    }
}

/// The positive part of an entry. Its systems are dropped: it is not connected.
pub fn make_positive(q: &CatalogEntry) -> CatalogEntry {
    CatalogEntry {
        name: format!("{}+", q.name),
        species: Arc::new(Positive { inner: q.species.clone() }),
        mu: None,
        pi: None,
        mu_flags: None,
        pi_flags: None,
        singleton_support: q.singleton_support,
    }
}

/// Labeled partitions over a positive species, multiplied by union. When the
/// labels live on singletons, union is bijective and its inverse is the coproduct.
pub fn make_s(q: &CatalogEntry) -> Result<CatalogEntry, SpeciesError> {
    if !q.species.elements(&GroundSet::empty()).is_empty() {
        return Err(SpeciesError::NotPositive(q.name.clone()));
    }
    let inner_name = q.name.strip_suffix('+').unwrap_or(&q.name);
    let species: Species = Arc::new(LabeledPartitions { inner: q.species.clone() });
    let pi = q.singleton_support.then(|| {
        ComultSystem::new("union inverse", species.clone(), |s, t, z| {
            let Element::Labeled(bs) = z else { panic!("{z} is not a labeled partition") };
            let (a, b): (Vec<_>, Vec<_>) = bs.iter().cloned().partition(|(blk, _)| blk.is_subset(s));
            assert!(b.iter().all(|(blk, _)| blk.is_subset(t)), "block of {z} straddles {s} and {t}");
            (Element::Labeled(a), Element::Labeled(b))
        })
    });
    Ok(CatalogEntry {
        name: format!("S({inner_name})"),
        mu: Some(union_mu("union", species.clone())),
        pi,
        species,
        mu_flags: Some(MuFlags { surjective: q.singleton_support, ..GOOD_MU }),
        pi_flags: q
            .singleton_support
            .then_some(PiFlags { coassociative: true, cocommutative: true, counital: true, injective: true, surjective: true }),
        singleton_support: false,
    })
}

pub const VALID_SPECS: &str = "E, E_C:<c>, X_C:<c>, Perm, L, Pi, S(<spec>)";

/// Parses the species grammar `E | E_C:<c> | X_C:<c> | Perm | L | Pi | S(<spec>)`.
///
/// `S(Q)` takes the positive part of Q first, so `S(E_C:2)` labels blocks by
/// nonempty maps.
pub fn parse_species(spec: &str) -> Result<CatalogEntry, SpeciesError> {
    let s = spec.trim();
    let bad = || SpeciesError::UnknownSpecies { spec: spec.to_string(), valid: VALID_SPECS.to_string() };
    if let Some(inner) = s.strip_prefix("S(").and_then(|r| r.strip_suffix(')')) {
        let q = parse_species(inner)?;
        let q = if q.species.elements(&GroundSet::empty()).is_empty() { q } else { make_positive(&q) };
        return make_s(&q);
    }
    let colors = |rest: &str| rest.parse::<u32>().map_err(|_| bad());
    match s {
        "E" => Ok(make_e()),
        "Perm" => Ok(make_perm()),
        "L" => Ok(make_l()),
        "Pi" => Ok(make_pi()),
        _ => {
            if let Some(c) = s.strip_prefix("E_C:") {
                Ok(make_e_c(colors(c)?))
            } else if let Some(c) = s.strip_prefix("X_C:") {
                Ok(make_x_c(colors(c)?))
            } else {
                Err(bad())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(v: &[u32]) -> GroundSet {
        GroundSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn maps_count_and_union() {
        let e = make_e_c(2);
        assert_eq!(e.species.elements(&GroundSet::range(3)).len(), 8);
        let f = Element::map([(1, 0)]).unwrap();
        let g = Element::map([(2, 1)]).unwrap();
        let mu = e.mu.as_ref().unwrap();
        assert_eq!(mu.apply(&gs(&[1]), &gs(&[2]), &f, &g), Element::map([(1, 0), (2, 1)]).unwrap());
        let h = Element::map([(1, 0), (2, 1), (3, 0)]).unwrap();
        let (a, b) = e.pi.as_ref().unwrap().apply(&gs(&[1, 3]), &gs(&[2]), &h);
        assert_eq!(a, Element::map([(1, 0), (3, 0)]).unwrap());
        assert_eq!(b, Element::map([(2, 1)]).unwrap());
    }

    #[test]
    fn partition_restriction() {
        let z = Element::partition([gs(&[1, 3]), gs(&[2])]).unwrap();
        let (a, b) = make_pi().pi.unwrap().apply(&gs(&[1, 2]), &gs(&[3, 4]), &z);
        assert_eq!(a, Element::partition([gs(&[1]), gs(&[2])]).unwrap());
        assert_eq!(b, Element::partition([gs(&[3])]).unwrap());
        let x = Element::partition([gs(&[1]), gs(&[2])]).unwrap();
        let y = Element::partition([gs(&[3])]).unwrap();
        let u = make_pi().mu.unwrap().apply(&gs(&[1, 2]), &gs(&[3]), &x, &y);
        assert_eq!(u, Element::partition([gs(&[1]), gs(&[2]), gs(&[3])]).unwrap());
    }

    #[test]
    fn first_return_map() {
        let lam = Element::perm_from_cycles(&[&[1, 3, 2, 4]]).unwrap();
        let (a, b) = make_perm().pi.unwrap().apply(&gs(&[1, 2]), &gs(&[3, 4]), &lam);
        assert_eq!(a, Element::perm_from_cycles(&[&[1, 2]]).unwrap());
        assert_eq!(b, Element::perm_from_cycles(&[&[3, 4]]).unwrap());
    }

    #[test]
    fn concatenation_and_suborders() {
        let l = make_l();
        let x = Element::order(vec![2, 1]).unwrap();
        let y = Element::order(vec![3]).unwrap();
        assert_eq!(l.mu.unwrap().apply(&gs(&[1, 2]), &gs(&[3]), &x, &y), Element::order(vec![2, 1, 3]).unwrap());
        let z = Element::order(vec![2, 1, 3]).unwrap();
        let (a, b) = l.pi.unwrap().apply(&gs(&[1, 3]), &gs(&[2]), &z);
        assert_eq!((a, b), (Element::order(vec![1, 3]).unwrap(), Element::order(vec![2]).unwrap()));
    }

    #[test]
    fn grammar() {
        for s in ["E", "E_C:3", "X_C:2", "Perm", "L", "Pi", "S(X_C:1)", "S(E_C:2)", "S(S(X_C:1))"] {
            parse_species(s).unwrap();
        }
        let err = parse_species("Q").err().unwrap().to_string();
        assert!(err.contains("Perm") && err.contains("S(<spec>)"));
        assert!(parse_species("E_C:x").is_err());
        assert!(make_s(&make_e()).is_err());
        assert_eq!(parse_species("S(E_C:2)").unwrap().name, "S(E_C:2)");
    }

    #[test]
    fn labeled_partition_union() {
        let s = parse_species("S(X_C:1)").unwrap();
        let q1 = Element::map([(1, 0)]).unwrap();
        let x = Element::labeled([(gs(&[1]), q1.clone())]).unwrap();
        let y = Element::labeled([(gs(&[2]), Element::map([(2, 0)]).unwrap())]).unwrap();
        let u = s.mu.as_ref().unwrap().apply(&gs(&[1]), &gs(&[2]), &x, &y);
        assert_eq!(u.blocks().unwrap(), vec![gs(&[1]), gs(&[2])]);
        let (a, b) = s.pi.as_ref().unwrap().apply(&gs(&[1]), &gs(&[2]), &u);
        assert_eq!((a, b), (x, y));
    }
}
