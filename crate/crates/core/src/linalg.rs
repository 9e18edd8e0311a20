//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are [`LinComb`]s over column indices. Row reduction always pivots
//! on the smallest column index, so echelon forms are reproducible.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;

pub type SparseVec = LinComb<usize>;

/// A list of sparse rows over a shared indexed basis of `ncols` columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matrix {
    pub ncols: usize,
    pub rows: Vec<SparseVec>,
}

impl Matrix {
    pub fn new(ncols: usize, rows: Vec<SparseVec>) -> Self {
        Matrix { ncols, rows }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::new(n, (0..n).map(SparseVec::basis).collect())
    }

    pub fn stacked(&self, other: &Matrix) -> Result<Matrix> {
        check_cols(self.ncols, other.ncols)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Matrix::new(self.ncols, rows))
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for r in &self.rows {
            e.insert(r.clone());
        }
        e
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// A basis of the row space in echelon form.
    pub fn row_basis(&self) -> Matrix {
        Matrix::new(self.ncols, self.echelon().rows().cloned().collect())
    }
}

fn check_cols(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::BasisMismatch(a, b))
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

/// `dim(span u ∩ span v)`.
pub fn intersect_dim(u: &Matrix, v: &Matrix) -> Result<usize> {
    let both = u.stacked(v)?;
    Ok(u.rank() + v.rank() - both.rank())
}

pub fn in_span(vec: &SparseVec, m: &Matrix) -> Result<bool> {
    if let Some((&k, _)) = vec.iter().next_back() {
        if k >= m.ncols {
            return Err(Error::BasisMismatch(k + 1, m.ncols));
        }
    }
    Ok(m.echelon().contains(vec))
}

/// Incrementally maintained row-echelon basis. Each stored row has leading
/// coefficient 1 at its pivot, and no two rows share a pivot.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, SparseVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rows in insertion order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.iter().map(move |p| &self.rows[p])
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Remainder of `v` after eliminating every pivot column; the result is
    /// zero exactly when `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut from = 0usize;
        while let Some((&k, c)) = v.first_from(&from) {
            if let Some(row) = self.rows.get(&k) {
                let c = -c;
                v.add_scaled(row, &c);
            }
            from = k + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    fn has_stale_tail(&self, p: usize) -> Option<usize> {
        self.rows[&p].keys().skip(1).copied().find(|k| self.rows.contains_key(k))
    }

    /// Rewrites row `p` so that its tail avoids every pivot column. Rows it
    /// depends on are cleaned first, iteratively, so long elimination chains
    /// are shortened once instead of being walked on every reduction.
    fn clean(&mut self, p: usize) {
        let mut stack = vec![p];
        while let Some(&top) = stack.last() {
            let dirty = self.rows[&top]
                .keys()
                .skip(1)
                .copied()
                .find(|k| self.rows.contains_key(k) && self.has_stale_tail(*k).is_some());
            if let Some(k) = dirty {
                stack.push(k);
                continue;
            }
            if self.has_stale_tail(top).is_some() {
                let mut row = self.rows.remove(&top).expect("row");
                let used: Vec<(usize, Scalar)> = row
                    .iter()
                    .skip(1)
                    .filter(|(k, _)| self.rows.contains_key(k))
                    .map(|(&k, c)| (k, -c))
                    .collect();
                for (k, c) in used {
                    row.add_scaled(&self.rows[&k], &c);
                }
                self.rows.insert(top, row);
            }
            stack.pop();
        }
    }

    /// Like [`Echelon::reduce`], compressing the rows it touches.
    pub fn reduce_mut(&mut self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut from = 0usize;
        while let Some((&k, c)) = v.first_from(&from) {
            if self.rows.contains_key(&k) {
                let c = -c;
                self.clean(k);
                v.add_scaled(&self.rows[&k], &c);
            }
            from = k + 1;
        }
        v
    }

    /// Brings every row to reduced form (no pivot column in any tail).
    pub fn compress(&mut self) {
        for p in self.pivots.clone() {
            self.clean(p);
        }
    }

    /// Inserts `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce_mut(&v);
        let Some((&p, c)) = r.leading() else {
            return false;
        };
        let inv = c.inv().expect("leading coefficient is nonzero");
        let r = r.scale(&inv);
        self.rows.insert(p, r);
        self.pivots.push(p);
        true
    }
}

/// Kernel of the linear map sending domain basis vector `j` to `images[j]`.
/// Returned vectors are over domain indices.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let offset = images
        .iter()
        .filter_map(|v| v.iter().next_back().map(|(&k, _)| k + 1))
        .max()
        .unwrap_or(0);
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.add_term(offset + j, Scalar::one());
        let before = e.rank();
        e.insert(row);
        debug_assert_eq!(e.rank(), before + 1);
    }
    for p in e.pivots() {
        if *p >= offset {
            let row = &e.rows[p];
            out.push(row.map_basis(|&k| k - offset));
        }
    }
    out
}

/// Coordinates of `v` in the independent family `basis`, if `v` is in its span.
pub fn express(basis: &[SparseVec], v: &SparseVec) -> Option<Vec<Scalar>> {
    let mut images = basis.to_vec();
    images.push(v.clone());
    let k = basis.len();
    let rel = kernel(&images).into_iter().find(|r| !r.coeff(&k).is_zero())?;
    let c = -rel.coeff(&k).inv().expect("nonzero");
    Some((0..k).map(|i| rel.coeff(&i) * &c).collect())
}

/// Inverse of a square matrix given densely; `None` when singular.
pub fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &(&f * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, c)| (k, Scalar::from_int(c))).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::new(3, vec![]).rank(), 0);
        assert_eq!(Matrix::identity(3).rank(), 3);
        let m = Matrix::new(3, vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn express_examples() {
        let b = [v(&[(0, 1), (1, 1)]), v(&[(1, 2)])];
        let c = express(&b, &v(&[(0, 3), (1, 1)])).unwrap();
        assert_eq!(c, vec![Scalar::from_int(3), Scalar::ratio(-1, 1)]);
        assert!(express(&b, &v(&[(2, 1)])).is_none());
        assert_eq!(express(&[], &v(&[])).unwrap(), vec![]);
    }

    #[test]
    fn intersect_examples() {
        let e = |i| Matrix::new(3, vec![v(&[(i, 1)])]);
        assert_eq!(intersect_dim(&e(0), &e(1)).unwrap(), 0);
        assert_eq!(intersect_dim(&e(0), &e(0)).unwrap(), 1);
        let u = Matrix::new(3, vec![v(&[(0, 1), (1, 1)]), v(&[(2, 1)])]);
        let w = Matrix::new(3, vec![v(&[(0, 1), (1, 1), (2, 1)])]);
        assert_eq!(intersect_dim(&u, &w).unwrap(), 1);
        assert!(intersect_dim(&u, &Matrix::new(4, vec![])).is_err());
    }

    #[test]
    fn span_examples() {
        let m = Matrix::new(2, vec![v(&[(1, 1)])]);
        assert!(in_span(&SparseVec::zero(), &m).unwrap());
        assert!(!in_span(&v(&[(0, 1)]), &m).unwrap());
        let m = Matrix::new(2, vec![v(&[(0, 1), (1, -1)]), v(&[(1, 2)])]);
        assert!(in_span(&v(&[(0, 1), (1, 1)]), &m).unwrap());
        assert!(in_span(&v(&[(5, 1)]), &m).is_err());
    }

    #[test]
    fn kernel_of_sum_map() {
        // (a, b, c) -> a + b + c has a 2-dimensional kernel
        let imgs = vec![v(&[(0, 1)]), v(&[(0, 1)]), v(&[(0, 1)])];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 2);
        for vec in &k {
            let s: Scalar = vec.iter().map(|(_, c)| c.clone()).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![
            vec![Scalar::from_int(2), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(1)],
        ];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], Scalar::from_int(1));
        assert_eq!(inv[0][1], Scalar::from_int(-1));
        assert_eq!(inv[1][1], Scalar::from_int(2));
        assert!(invert(&[vec![Scalar::zero()]]).is_none());
    }

    /// Rank oracle: size of the largest nonsingular square minor, via
    /// Leibniz-formula determinants.
    fn minor_rank(dense: &[Vec<i64>]) -> usize {
        fn det(m: &[Vec<i64>]) -> i128 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] as i128 * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                .collect()
        }
        let (r, c) = (dense.len(), dense.first().map_or(0, |x| x.len()));
        for k in (1..=r.min(c)).rev() {
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let m: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| dense[i][j]).collect()).collect();
                    if det(&m) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn to_matrix(dense: &[Vec<i64>], ncols: usize) -> Matrix {
        Matrix::new(
            ncols,
            dense
                .iter()
                .map(|r| r.iter().enumerate().map(|(k, &x)| (k, Scalar::from_int(x))).collect())
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn rank_matches_minor_oracle(dense in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 0..5)) {
            let m = to_matrix(&dense, 4);
            prop_assert_eq!(m.rank(), minor_rank(&dense));
        }

        #[test]
        fn rank_invariant_under_permutation_and_scaling(
            dense in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 1..5),
            k in 1i64..4,
        ) {
            let m = to_matrix(&dense, 4);
            let mut rows = m.rows.clone();
            rows.reverse();
            rows[0] = rows[0].scale(&Scalar::ratio(-k, 3));
            prop_assert_eq!(Matrix::new(4, rows).rank(), m.rank());
        }

        #[test]
        fn intersection_laws(
            a in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 0..4),
            b in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 0..4),
            probe in prop::collection::vec(-2i64..3, 4),
        ) {
            let (u, w) = (to_matrix(&a, 4), to_matrix(&b, 4));
            prop_assert_eq!(intersect_dim(&u, &w).unwrap(), intersect_dim(&w, &u).unwrap());
            prop_assert_eq!(intersect_dim(&u, &u).unwrap(), u.rank());
            let p = to_matrix(&[probe], 4).rows.remove(0);
            if in_span(&p, &u).unwrap() {
                let mut rows = u.rows.clone();
                rows.push(p);
                prop_assert_eq!(Matrix::new(4, rows).rank(), u.rank());
            }
        }
    }
}
