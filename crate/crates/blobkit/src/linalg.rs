//! Dense exact linear algebra generic over any [`Scalar`](crate::ring::Scalar).
//!
//! Used for Gram-matrix ranks, idempotent verification, ideal-membership
//! spans, nullspace computations for representation checks, and solving
//! small linear systems symbolically.

use crate::ring::{RingError, Scalar};

/// A dense matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn zero_like(r: usize, c: usize, sample: &S) -> Self {
        Matrix { rows: r, cols: c, data: vec![sample.zero_like(); r * c] }
    }

    pub fn identity(n: usize, sample: &S) -> Self {
        let mut m = Self::zero_like(n, n, sample);
        for i in 0..n {
            *m.at_mut(i, i) = sample.one_like();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let zero = self.data.first().map(|s| s.zero_like()).unwrap_or_else(|| {
            other.data.first().expect("nonempty matrix").zero_like()
        });
        let mut out = Matrix {
            rows: self.rows,
            cols: other.cols,
            data: vec![zero; self.rows * other.cols],
        };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b));
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Rank by fraction-free-ish Gaussian elimination with divisions
    /// (coefficients live in a field).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().0
    }

    /// In-place reduction to row echelon form. Returns `(rank, pivot columns)`.
    pub fn row_reduce(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Find a pivot in column c at row ≥ r.
            let piv = (r..self.rows).find(|&i| !self.at(i, c).is_zero());
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, piv * self.cols + j);
                }
            }
            let inv = self.at(r, c).inv().expect("pivot nonzero");
            for j in c..self.cols {
                let v = self.at(r, j).mul(&inv);
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = self.at(i, j).sub(&f.mul(self.at(r, j)));
                    *self.at_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (r, pivots)
    }

    /// Solve `self · x = b` for a single solution vector; `None` if the
    /// system is inconsistent. (If underdetermined, free variables are 0.)
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let zero = b.first().map(|s| s.zero_like())
            .or_else(|| self.data.first().map(|s| s.zero_like()))?;
        let mut aug = Matrix::zero_like(self.rows, self.cols + 1, &zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let (_, pivots) = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![zero; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// A basis of the right nullspace (as row vectors).
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let zero = match self.data.first() {
            None => return Vec::new(),
            Some(s) => s.zero_like(),
        };
        let one = zero.one_like();
        let mut m = self.clone();
        let (_, pivots) = m.row_reduce();
        let mut basis = Vec::new();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut vec = vec![zero.clone(); self.cols];
            vec[free] = one.clone();
            for (r, &c) in pivots.iter().enumerate() {
                vec[c] = m.at(r, free).neg();
            }
            basis.push(vec);
        }
        basis
    }
}

/// An incrementally built echelonized row span over a field, for ideal
/// membership and linear-independence testing in high-dimensional ambient
/// spaces. Rows are sparse `(index, coefficient)` lists.
#[derive(Debug, Clone)]
pub struct Span<S: Scalar> {
    /// Echelon rows keyed by leading index; each row is normalized so its
    /// leading coefficient is 1. Sorted by leading index.
    rows: Vec<(usize, Vec<(usize, S)>)>,
}

impl<S: Scalar> Default for Span<S> {
    fn default() -> Self {
        Span { rows: Vec::new() }
    }
}

impl<S: Scalar> Span<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span; returns the (sparse, sorted) residue.
    pub fn reduce(&self, mut v: Vec<(usize, S)>) -> Vec<(usize, S)> {
        v.sort_by_key(|(i, _)| *i);
        loop {
            v.retain(|(_, c)| !c.is_zero());
            let lead = match v.first() {
                None => return v,
                Some((i, _)) => *i,
            };
            let row = match self.rows.binary_search_by_key(&lead, |(l, _)| *l) {
                Err(_) => return v,
                Ok(pos) => &self.rows[pos].1,
            };
            let factor = v[0].1.clone();
            v = sparse_axpy(&v, row, &factor.neg());
        }
    }

    /// Insert `v` if independent of the span. Returns `true` if the span grew.
    pub fn insert(&mut self, v: Vec<(usize, S)>) -> Result<bool, RingError> {
        let r = self.reduce(v);
        match r.first() {
            None => Ok(false),
            Some((lead, c)) => {
                let lead = *lead;
                let inv = c.inv()?;
                let row: Vec<(usize, S)> = r.iter().map(|(i, x)| (*i, x.mul(&inv))).collect();
                let pos = self.rows.binary_search_by_key(&lead, |(l, _)| *l).unwrap_err();
                self.rows.insert(pos, (lead, row));
                Ok(true)
            }
        }
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: Vec<(usize, S)>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// `a + factor · b` for sorted sparse vectors.
fn sparse_axpy<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)], factor: &S) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, b[j].1.mul(factor)));
            j += 1;
        } else {
            let c = a[i].1.add(&b[j].1.mul(factor));
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn rank_and_solve() {
        let m = Matrix::from_rows(vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(1), r(0), r(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let b = vec![r(6), r(12), r(2)];
        let x = m.solve(&b).unwrap();
        // Verify m·x = b.
        for i in 0..3 {
            let mut acc = r(0);
            for j in 0..3 {
                acc += m.at(i, j) * &x[j];
            }
            assert_eq!(acc, b[i]);
        }
        assert!(m.solve(&vec![r(1), r(0), r(0)]).is_none());
    }

    #[test]
    fn nullspace_correct() {
        let m = Matrix::from_rows(vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..m.rows {
                let mut acc = r(0);
                for j in 0..m.cols {
                    acc += m.at(i, j) * &v[j];
                }
                assert_eq!(acc, r(0));
            }
        }
    }

    #[test]
    fn span_membership() {
        let mut span: Span<BigRational> = Span::new();
        assert!(span.insert(vec![(0, r(1)), (2, r(2))]).unwrap());
        assert!(span.insert(vec![(1, r(3))]).unwrap());
        assert!(!span.insert(vec![(0, r(2)), (1, r(3)), (2, r(4))]).unwrap());
        assert_eq!(span.dim(), 2);
        assert!(span.contains(vec![(0, r(5)), (2, r(10))]));
        assert!(!span.contains(vec![(2, r(1))]));
    }

    #[test]
    fn matmul_identity() {
        let m = Matrix::from_rows(vec![vec![r(1), r(2)], vec![r(3), r(4)]]);
        let id = Matrix::identity(2, &r(0));
        assert_eq!(m.matmul(&id), m);
    }
}
