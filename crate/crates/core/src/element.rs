//! Basis elements in canonical form, so that equality is structural.

use std::fmt;

use crate::error::SpeciesError;
use crate::ground::{Bijection, GroundSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// A map from labels to color indices, sorted by label.
    Map(Vec<(u32, u32)>),
    /// A set partition with blocks sorted by minimum.
    Partition(Vec<GroundSet>),
    /// A linear order written as a sequence, first element smallest.
    Order(Vec<u32>),
    /// A permutation in one-line form: (label, image) sorted by label.
    Perm(Vec<(u32, u32)>),
    /// A set partition whose blocks carry elements over themselves.
    Labeled(Vec<(GroundSet, Element)>),
    /// A simple graph: vertex set and edges (a, b) with a < b, sorted.
    Graph(GroundSet, Vec<(u32, u32)>),
}

impl Element {
    pub fn map(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Element, SpeciesError> {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().collect();
        v.sort_unstable();
        GroundSet::new(v.iter().map(|p| p.0))?;
        Ok(Element::Map(v))
    }

    pub fn partition(blocks: impl IntoIterator<Item = GroundSet>) -> Result<Element, SpeciesError> {
        let mut v: Vec<GroundSet> = blocks.into_iter().collect();
        if v.iter().any(|b| b.is_empty()) {
            return Err(SpeciesError::Precondition("partition blocks must be nonempty".into()));
        }
        GroundSet::new(v.iter().flat_map(|b| b.labels().iter().copied()))?;
        v.sort();
        Ok(Element::Partition(v))
    }

    pub fn order(seq: Vec<u32>) -> Result<Element, SpeciesError> {
        GroundSet::new(seq.iter().copied())?;
        Ok(Element::Order(seq))
    }

    pub fn perm(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Element, SpeciesError> {
        let b = Bijection::from_pairs(pairs)?;
        if b.source() != b.target() {
            return Err(SpeciesError::NotABijection("permutation must map a set to itself".into()));
        }
        Ok(Element::Perm(b.pairs().collect()))
    }

    /// A permutation given as a list of cycles.
    pub fn perm_from_cycles(cycles: &[&[u32]]) -> Result<Element, SpeciesError> {
        let mut pairs = Vec::new();
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                pairs.push((a, c[(i + 1) % c.len()]));
            }
        }
        Element::perm(pairs)
    }

    pub fn labeled(blocks: impl IntoIterator<Item = (GroundSet, Element)>) -> Result<Element, SpeciesError> {
        let mut v: Vec<(GroundSet, Element)> = blocks.into_iter().collect();
        for (b, x) in &v {
            if b.is_empty() || &x.ground() != b {
                return Err(SpeciesError::Precondition(format!("label {x} does not live on block {b}")));
            }
        }
        GroundSet::new(v.iter().flat_map(|(b, _)| b.labels().iter().copied()))?;
        v.sort();
        Ok(Element::Labeled(v))
    }

    pub fn graph(vertices: GroundSet, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Element, SpeciesError> {
        let mut e: Vec<(u32, u32)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e.dedup();
        if e.iter().any(|&(a, b)| a == b || !vertices.contains(a) || !vertices.contains(b)) {
            return Err(SpeciesError::Precondition("edge outside the vertex set".into()));
        }
        Ok(Element::Graph(vertices, e))
    }

    /// The ground set this element lives on.
    pub fn ground(&self) -> GroundSet {
        match self {
            Element::Map(v) | Element::Perm(v) => GroundSet::from_sorted(v.iter().map(|p| p.0).collect()),
            Element::Partition(bs) => GroundSet::union_all(bs),
            Element::Order(seq) => GroundSet::new(seq.iter().copied()).expect("canonical order"),
            Element::Labeled(bs) => GroundSet::union_all(bs.iter().map(|b| &b.0)),
            Element::Graph(v, _) => v.clone(),
        }
    }

    /// Relabels every label through `sigma`. Labels of a labeled partition are
    /// relabeled structurally too, which is the transport of every catalog species.
    pub fn relabel(&self, sigma: &Bijection) -> Element {
        match self {
            Element::Map(v) => {
                let mut w: Vec<(u32, u32)> = v.iter().map(|&(l, c)| (sigma.apply(l), c)).collect();
                w.sort_unstable();
                Element::Map(w)
            }
            Element::Partition(bs) => {
                let mut w: Vec<GroundSet> = bs.iter().map(|b| sigma.image(b)).collect();
                w.sort();
                Element::Partition(w)
            }
            Element::Order(seq) => Element::Order(seq.iter().map(|&l| sigma.apply(l)).collect()),
            Element::Perm(v) => {
                let mut w: Vec<(u32, u32)> = v.iter().map(|&(a, b)| (sigma.apply(a), sigma.apply(b))).collect();
                w.sort_unstable();
                Element::Perm(w)
            }
            Element::Labeled(bs) => {
                let mut w: Vec<(GroundSet, Element)> =
                    bs.iter().map(|(b, x)| (sigma.image(b), x.relabel(&sigma.restrict(b)))).collect();
                w.sort();
                Element::Labeled(w)
            }
            Element::Graph(vs, es) => {
                let mut w: Vec<(u32, u32)> = es
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (sigma.apply(a), sigma.apply(b));
                        (x.min(y), x.max(y))
                    })
                    .collect();
                w.sort_unstable();
                Element::Graph(sigma.image(vs), w)
            }
        }
    }

    /// Blocks of a partition or labeled partition.
    pub fn blocks(&self) -> Option<Vec<GroundSet>> {
        match self {
            Element::Partition(bs) => Some(bs.clone()),
            Element::Labeled(bs) => Some(bs.iter().map(|b| b.0.clone()).collect()),
            _ => None,
        }
    }

    /// Cycles of a permutation, each starting at its minimum, sorted by minimum.
    pub fn cycles(&self) -> Option<Vec<Vec<u32>>> {
        let Element::Perm(v) = self else { return None };
        let img = |a: u32| v[v.binary_search_by_key(&a, |p| p.0).unwrap()].1;
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for &(start, _) in v {
            if seen.contains(&start) {
                continue;
            }
            let mut c = vec![start];
            seen.push(start);
            let mut x = img(start);
            while x != start {
                c.push(x);
                seen.push(x);
                x = img(x);
            }
            out.push(c);
        }
        Some(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Map(v) => {
                write!(f, "{{")?;
                for (i, (l, c)) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}:{c}")?;
                }
                write!(f, "}}")
            }
            Element::Partition(bs) => {
                write!(f, "{{")?;
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{b}")?;
                }
                write!(f, "}}")
            }
            Element::Order(seq) => {
                write!(f, "(")?;
                for (i, l) in seq.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
            Element::Perm(_) => {
                let cycles = self.cycles().unwrap();
                if cycles.is_empty() {
                    return write!(f, "()");
                }
                for c in cycles {
                    write!(f, "(")?;
                    for (i, l) in c.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{l}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Element::Labeled(bs) => {
                write!(f, "{{")?;
                for (i, (b, x)) in bs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{b}:{x}")?;
                }
                write!(f, "}}")
            }
            Element::Graph(vs, es) => {
                write!(f, "{vs}[")?;
                for (i, (a, b)) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}-{b}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_partition() {
        let a = Element::partition([GroundSet::new([3]).unwrap(), GroundSet::new([2, 1]).unwrap()]).unwrap();
        let b = Element::partition([GroundSet::new([1, 2]).unwrap(), GroundSet::new([3]).unwrap()]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{{1,2},{3}}");
        assert_eq!(a.ground(), GroundSet::range(3));
    }

    #[test]
    fn cycle_display() {
        let p = Element::perm_from_cycles(&[&[1, 3, 2, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1 3 2 4)");
        let q = Element::perm_from_cycles(&[&[2, 1], &[3]]).unwrap();
        assert_eq!(q.to_string(), "(1 2)(3)");
    }

    #[test]
    fn overlapping_blocks_rejected() {
        let b = GroundSet::new([1, 2]).unwrap();
        assert!(Element::partition([b.clone(), b]).is_err());
    }
}
