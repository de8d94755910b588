//! Exact linear algebra: fraction-free row reduction over the integers with
//! deterministic pivoting (first nonzero column, smallest row index).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::element::Element;
use crate::vector::{Vector, Q};

/// Scales a rational row to a primitive integer row.
fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    normalize(&mut out);
    out
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c /= &g;
        }
    }
}

/// A row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

pub fn echelon(rows: &[Vec<Q>], cols: usize) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).filter(|r| r.iter().any(|c| !c.is_zero())).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = prow[c].gcd(&row[c]);
            let a = &prow[c] / &g;
            let b = &row[c] / &g;
            for j in c..cols {
                row[j] = &a * &row[j] - &b * &prow[j];
            }
            normalize(row);
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon { rows: m, pivots, cols }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A basis of the null space, one vector per free column with that
    /// coordinate set to 1 and the other free coordinates 0.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (i, &p) in self.pivots.iter().enumerate().rev() {
                    let row = &self.rows[i];
                    let s = (p + 1..self.cols)
                        .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                        .fold(Q::zero(), |acc, j| acc + Q::from_integer(row[j].clone()) * &x[j]);
                    x[p] = -s / Q::from_integer(row[p].clone());
                }
                x
            })
            .collect()
    }
}

/// Fixes an ordering of basis elements so vectors become coordinate rows.
#[derive(Clone, Debug, Default)]
pub struct Coordinates {
    index: BTreeMap<Element, usize>,
    order: Vec<Element>,
}

impl Coordinates {
    pub fn new(elements: impl IntoIterator<Item = Element>) -> Self {
        let mut c = Coordinates::default();
        for x in elements {
            c.insert(x);
        }
        c
    }

    fn insert(&mut self, x: Element) -> usize {
        if let Some(&i) = self.index.get(&x) {
            return i;
        }
        self.index.insert(x.clone(), self.order.len());
        self.order.push(x);
        self.order.len() - 1
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.order
    }

    /// Coordinates of `v`. Panics if `v` uses an element outside the basis.
    pub fn row(&self, v: &Vector) -> Vec<Q> {
        let mut r = vec![Q::zero(); self.order.len()];
        for (x, c) in v.terms() {
            r[*self.index.get(x).unwrap_or_else(|| panic!("{x} is outside the coordinate basis"))] = c.clone();
        }
        r
    }

    pub fn vector(&self, ground: &crate::ground::GroundSet, coords: &[Q]) -> Vector {
        let mut v = Vector::zero(ground.clone());
        for (x, c) in self.order.iter().zip(coords) {
            v.add_term(x.clone(), c.clone());
        }
        v
    }
}

/// Dimension of the span of `vs`.
pub fn rank(vs: &[Vector]) -> usize {
    let coords = Coordinates::new(vs.iter().flat_map(|v| v.terms().map(|(x, _)| x.clone())));
    let rows: Vec<Vec<Q>> = vs.iter().map(|v| coords.row(v)).collect();
    echelon(&rows, coords.len()).rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vector], v: &Vector) -> bool {
    let mut all = basis.to_vec();
    let r = rank(&all);
    all.push(v.clone());
    rank(&all) == r
}

/// Whether two lists span the same subspace.
pub fn same_span(a: &[Vector], b: &[Vector]) -> bool {
    let ra = rank(a);
    ra == rank(b) && {
        let mut all = a.to_vec();
        all.extend(b.iter().cloned());
        rank(&all) == ra
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::q;

    #[test]
    fn kernel_of_small_matrix() {
        // x + y + z = 0, y - z = 0
        let rows = vec![vec![q(1), q(1), q(1)], vec![q(0), q(1), q(-1)]];
        let e = echelon(&rows, 3);
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k, vec![vec![q(-2), q(1), q(1)]]);
    }

    #[test]
    fn rational_rows_are_cleared() {
        let half = Q::new(1.into(), 2.into());
        let rows = vec![vec![half.clone(), q(1)], vec![q(1), q(2)]];
        assert_eq!(echelon(&rows, 2).rank(), 1);
    }
}
