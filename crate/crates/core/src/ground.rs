//! Finite label sets, bijections between them, and the decomposition
//! enumerators every checker walks over.

use std::fmt;

use serde::Serialize;

use crate::error::SpeciesError;

/// A finite set of nonnegative labels, kept sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct GroundSet(Vec<u32>);

impl GroundSet {
    /// Builds a ground set from labels in any order. Repeated labels are an error.
    pub fn new(labels: impl IntoIterator<Item = u32>) -> Result<Self, SpeciesError> {
        let mut v: Vec<u32> = labels.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(SpeciesError::DuplicateLabel(w[0]));
        }
        Ok(GroundSet(v))
    }

    /// Wraps labels already known to be strictly increasing.
    pub(crate) fn from_sorted(v: Vec<u32>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        GroundSet(v)
    }

    pub fn empty() -> Self {
        GroundSet(Vec::new())
    }

    /// The set {1, ..., n}.
    pub fn range(n: usize) -> Self {
        GroundSet((1..=n as u32).collect())
    }

    pub fn singleton(label: u32) -> Self {
        GroundSet(vec![label])
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn contains(&self, label: u32) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn is_disjoint(&self, other: &GroundSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_subset(&self, other: &GroundSet) -> bool {
        self.0.iter().all(|&l| other.contains(l))
    }

    pub fn union(&self, other: &GroundSet) -> GroundSet {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = j == other.0.len() || (i < self.0.len() && self.0[i] <= other.0[j]);
            if take_left {
                if j < other.0.len() && self.0[i] == other.0[j] {
                    j += 1;
                }
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(other.0[j]);
                j += 1;
            }
        }
        GroundSet(v)
    }

    /// Union of disjoint sets. Overlap is an error.
    pub fn disjoint_union(&self, other: &GroundSet) -> Result<GroundSet, SpeciesError> {
        if !self.is_disjoint(other) {
            return Err(SpeciesError::Overlap(self.clone(), other.clone()));
        }
        Ok(self.union(other))
    }

    pub fn intersection(&self, other: &GroundSet) -> GroundSet {
        GroundSet(self.0.iter().copied().filter(|&l| other.contains(l)).collect())
    }

    pub fn difference(&self, other: &GroundSet) -> GroundSet {
        GroundSet(self.0.iter().copied().filter(|&l| !other.contains(l)).collect())
    }

    /// Union of a list of sets.
    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a GroundSet>) -> GroundSet {
        let mut v: Vec<u32> = sets.into_iter().flat_map(|s| s.0.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        GroundSet(v)
    }

    /// Every subset, indexed by bitmask over the sorted labels.
    pub fn subsets(&self) -> Vec<GroundSet> {
        let n = self.len();
        (0u64..1 << n)
            .map(|m| GroundSet((0..n).filter(|&i| m >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// A bijection between two ground sets of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bijection {
    source: GroundSet,
    target: GroundSet,
    // images[i] is the image of source.labels()[i]
    images: Vec<u32>,
}

impl Bijection {
    pub fn new(source: GroundSet, images: Vec<u32>) -> Result<Self, SpeciesError> {
        if images.len() != source.len() {
            return Err(SpeciesError::NotABijection(format!(
                "{} images for {} labels",
                images.len(),
                source.len()
            )));
        }
        let target = GroundSet::new(images.iter().copied())
            .map_err(|_| SpeciesError::NotABijection("repeated image".into()))?;
        Ok(Bijection { source, target, images })
    }

    /// Builds a bijection from (source, target) label pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, SpeciesError> {
        let mut p: Vec<(u32, u32)> = pairs.into_iter().collect();
        p.sort_unstable();
        let source = GroundSet::new(p.iter().map(|x| x.0))?;
        Bijection::new(source, p.into_iter().map(|x| x.1).collect())
    }

    pub fn identity(g: &GroundSet) -> Self {
        Bijection { source: g.clone(), target: g.clone(), images: g.0.clone() }
    }

    /// The unique order-preserving bijection between equinumerous sets.
    pub fn order_preserving(source: &GroundSet, target: &GroundSet) -> Result<Self, SpeciesError> {
        if source.len() != target.len() {
            return Err(SpeciesError::NotABijection(format!("{source} and {target} differ in size")));
        }
        Ok(Bijection { source: source.clone(), target: target.clone(), images: target.0.clone() })
    }

    pub fn source(&self) -> &GroundSet {
        &self.source
    }

    pub fn target(&self) -> &GroundSet {
        &self.target
    }

    /// Image of a label. Panics when the label is outside the source.
    pub fn apply(&self, label: u32) -> u32 {
        match self.source.0.binary_search(&label) {
            Ok(i) => self.images[i],
            Err(_) => panic!("label {label} is not in the source {}", self.source),
        }
    }

    pub fn image(&self, g: &GroundSet) -> GroundSet {
        let mut v: Vec<u32> = g.0.iter().map(|&l| self.apply(l)).collect();
        v.sort_unstable();
        GroundSet(v)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.source.0.iter().copied().zip(self.images.iter().copied())
    }

    pub fn inverse(&self) -> Bijection {
        let mut p: Vec<(u32, u32)> = self.pairs().map(|(a, b)| (b, a)).collect();
        p.sort_unstable();
        Bijection {
            source: self.target.clone(),
            target: self.source.clone(),
            images: p.into_iter().map(|x| x.1).collect(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Bijection) -> Result<Bijection, SpeciesError> {
        if other.target != self.source {
            return Err(SpeciesError::NotComposable(other.target.clone(), self.source.clone()));
        }
        Ok(Bijection {
            source: other.source.clone(),
            target: self.target.clone(),
            images: other.images.iter().map(|&l| self.apply(l)).collect(),
        })
    }

    pub fn restrict(&self, sub: &GroundSet) -> Bijection {
        Bijection {
            source: sub.clone(),
            target: self.image(sub),
            images: sub.0.iter().map(|&l| self.apply(l)).collect(),
        }
    }

    /// All bijections from `g` to itself, in lexicographic order of images.
    pub fn all_on(g: &GroundSet) -> Vec<Bijection> {
        permutations(g.labels())
            .into_iter()
            .map(|images| Bijection { source: g.clone(), target: g.clone(), images })
            .collect()
    }
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}->{b}")?;
        }
        write!(f, "]")
    }
}

/// All orderings of `items` in lexicographic order (for sorted input).
pub fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = items.to_vec();
    cur.sort_unstable();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Ordered `k`-tuples of pairwise disjoint sets with union `ground`.
///
/// Tuples are listed by counting through block-membership words with the
/// smallest label as the lowest digit; digit d puts a label in block k-1-d.
/// For k = 2 this reads (∅,I), ..., (I,∅) with S running through subsets
/// in bitmask order.
pub fn decompositions(ground: &GroundSet, k: usize, nonempty: bool) -> Vec<Vec<GroundSet>> {
    assert!(k >= 1, "decompositions need at least one part");
    let n = ground.len();
    let total = (k as u64).checked_pow(n as u32).expect("too many decompositions");
    let mut out = Vec::new();
    for word in 0..total {
        let mut parts = vec![Vec::new(); k];
        let mut w = word;
        for &l in ground.labels() {
            let d = (w % k as u64) as usize;
            w /= k as u64;
            parts[k - 1 - d].push(l);
        }
        if nonempty && parts.iter().any(|p| p.is_empty()) {
            continue;
        }
        out.push(parts.into_iter().map(GroundSet::from_sorted).collect());
    }
    out
}

/// All ordered decompositions of `ground` into nonempty parts, any number of parts.
pub fn compositions(ground: &GroundSet) -> Vec<Vec<GroundSet>> {
    if ground.is_empty() {
        return Vec::new();
    }
    (1..=ground.len()).flat_map(|k| decompositions(ground, k, true)).collect()
}

/// Set partitions of `ground`, blocks sorted by minimum, listed by
/// restricted growth strings in lexicographic order.
pub fn set_partitions(ground: &GroundSet) -> Vec<Vec<GroundSet>> {
    let n = ground.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        let nblocks = rgs.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(ground.labels()[i]);
        }
        out.push(blocks.into_iter().map(GroundSet::from_sorted).collect());
        // advance the restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let bound = rgs[..i].iter().max().unwrap() + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}
