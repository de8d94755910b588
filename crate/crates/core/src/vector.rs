//! Exact rational combinations of basis elements and of tuples of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::element::Element;
use crate::error::SpeciesError;
use crate::ground::GroundSet;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

fn bump<K: Ord>(terms: &mut BTreeMap<K, Q>, key: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A vector of p[I]: a finite combination of elements over one ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    ground: GroundSet,
    terms: BTreeMap<Element, Q>,
}

impl Vector {
    pub fn zero(ground: GroundSet) -> Self {
        Vector { ground, terms: BTreeMap::new() }
    }

    pub fn basis(x: Element) -> Self {
        let ground = x.ground();
        let mut terms = BTreeMap::new();
        terms.insert(x, Q::one());
        Vector { ground, terms }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Adds `c·x`. The element must live on this vector's ground set.
    pub fn add_term(&mut self, x: Element, c: Q) {
        debug_assert_eq!(x.ground(), self.ground, "term on the wrong ground set");
        bump(&mut self.terms, x, c);
    }

    pub fn coeff(&self, x: &Element) -> Q {
        self.terms.get(x).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Vector) {
        assert_eq!(self.ground, other.ground, "adding vectors over different ground sets");
        for (x, c) in &other.terms {
            bump(&mut self.terms, x.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Q) {
        assert_eq!(self.ground, other.ground, "adding vectors over different ground sets");
        for (x, d) in &other.terms {
            bump(&mut self.terms, x.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Vector {
        let mut out = Vector::zero(self.ground.clone());
        for (x, d) in &self.terms {
            bump(&mut out.terms, x.clone(), d * c);
        }
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add(&other.scale(&-Q::one()))
    }

    /// The bilinear form making the element basis orthonormal.
    pub fn pairing(&self, other: &Vector) -> Q {
        self.terms
            .iter()
            .filter_map(|(x, c)| other.terms.get(x).map(|d| c * d))
            .fold(Q::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(x, c)| (x.to_string(), c)))
    }
}

fn write_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (String, &'a Q)>) -> fmt::Result {
    let mut first = true;
    for (x, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if c.is_one() {
            write!(f, "{x}")?;
        } else {
            write!(f, "{c}*{x}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// A vector of p[S1]⊗...⊗p[Sk].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorVector {
    parts: Vec<GroundSet>,
    terms: BTreeMap<Vec<Element>, Q>,
}

impl TensorVector {
    pub fn zero(parts: Vec<GroundSet>) -> Self {
        TensorVector { parts, terms: BTreeMap::new() }
    }

    /// A single basis tensor x1⊗...⊗xk; the parts are the elements' ground sets.
    pub fn basis(xs: Vec<Element>) -> Self {
        let parts = xs.iter().map(Element::ground).collect();
        let mut terms = BTreeMap::new();
        terms.insert(xs, Q::one());
        TensorVector { parts, terms }
    }

    pub fn from_vector(v: &Vector) -> Self {
        TensorVector {
            parts: vec![v.ground.clone()],
            terms: v.terms.iter().map(|(x, c)| (vec![x.clone()], c.clone())).collect(),
        }
    }

    /// Collapses a one-part tensor to a vector.
    pub fn into_vector(self) -> Vector {
        assert_eq!(self.parts.len(), 1, "only one-part tensors are vectors");
        let ground = self.parts.into_iter().next().unwrap();
        let terms = self.terms.into_iter().map(|(mut k, c)| (k.pop().unwrap(), c)).collect();
        Vector { ground, terms }
    }

    pub fn parts(&self) -> &[GroundSet] {
        &self.parts
    }

    pub fn add_term(&mut self, xs: Vec<Element>, c: Q) {
        debug_assert!(xs.len() == self.parts.len() && xs.iter().zip(&self.parts).all(|(x, p)| &x.ground() == p));
        bump(&mut self.terms, xs, c);
    }

    pub fn coeff(&self, xs: &[Element]) -> Q {
        self.terms.get(xs).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Element>, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &TensorVector) {
        assert_eq!(self.parts, other.parts, "adding tensors over different parts");
        for (k, c) in &other.terms {
            bump(&mut self.terms, k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &TensorVector, c: &Q) {
        assert_eq!(self.parts, other.parts, "adding tensors over different parts");
        for (k, d) in &other.terms {
            bump(&mut self.terms, k.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Q) -> TensorVector {
        let mut out = TensorVector::zero(self.parts.clone());
        out.add_scaled(self, c);
        out
    }

    /// The tensor product, concatenating parts. Parts must be disjoint.
    pub fn tensor(&self, other: &TensorVector) -> Result<TensorVector, SpeciesError> {
        for a in &self.parts {
            for b in &other.parts {
                if !a.is_disjoint(b) {
                    return Err(SpeciesError::Overlap(a.clone(), b.clone()));
                }
            }
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        let mut out = TensorVector::zero(parts);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut k = k1.clone();
                k.extend(k2.iter().cloned());
                bump(&mut out.terms, k, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Reorders parts: part i of the result is part `perm[i]` of `self`.
    pub fn twist(&self, perm: &[usize]) -> Result<TensorVector, SpeciesError> {
        let mut seen = vec![false; self.parts.len()];
        if perm.len() != self.parts.len() || perm.iter().any(|&p| p >= seen.len() || std::mem::replace(&mut seen[p], true)) {
            return Err(SpeciesError::PartMismatch(format!("{perm:?} is not a permutation of the parts")));
        }
        Ok(TensorVector {
            parts: perm.iter().map(|&p| self.parts[p].clone()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (perm.iter().map(|&p| k[p].clone()).collect(), c.clone()))
                .collect(),
        })
    }

    /// Applies a linear map to factor `i`, given on basis elements as a tensor
    /// over `new_parts`, which replace part `i`.
    pub fn map_factor(
        &self,
        i: usize,
        new_parts: &[GroundSet],
        mut f: impl FnMut(&Element) -> TensorVector,
    ) -> TensorVector {
        let mut parts = self.parts[..i].to_vec();
        parts.extend(new_parts.iter().cloned());
        parts.extend(self.parts[i + 1..].iter().cloned());
        let mut out = TensorVector::zero(parts);
        for (k, c) in &self.terms {
            let image = f(&k[i]);
            for (mid, d) in &image.terms {
                let mut key = k[..i].to_vec();
                key.extend(mid.iter().cloned());
                key.extend(k[i + 1..].iter().cloned());
                bump(&mut out.terms, key, c * d);
            }
        }
        out
    }

    /// Applies a linear map to factors `i` and `i + 1` jointly, producing one factor over `merged`.
    pub fn map_pair(&self, i: usize, merged: &GroundSet, mut f: impl FnMut(&Element, &Element) -> Vector) -> TensorVector {
        let mut parts = self.parts[..i].to_vec();
        parts.push(merged.clone());
        parts.extend(self.parts[i + 2..].iter().cloned());
        let mut out = TensorVector::zero(parts);
        for (k, c) in &self.terms {
            let image = f(&k[i], &k[i + 1]);
            for (x, d) in &image.terms {
                let mut key = k[..i].to_vec();
                key.push(x.clone());
                key.extend(k[i + 2..].iter().cloned());
                bump(&mut out.terms, key, c * d);
            }
        }
        out
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(k, c)| (k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("⊗"), c)),
        )
    }
}
