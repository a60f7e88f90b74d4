//! Dense exact matrices over Q(i).
//!
//! Convention used across the crate: vectors are rows, and a linear map
//! f: k^a -> k^b is an a x b matrix acting on the right, `f(v) = v * M`.
//! Row i of M is the image of the i-th source basis vector. Composition
//! "f then g" is therefore the product `M_f * M_g`.

use crate::scalar::Scalar;
use num::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Mat { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    /// Integer literal helper, mostly for tests and fixtures.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(Scalar::is_real)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.adjoint() == *self
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * s)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    /// Applies the map to a row vector: v * self.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows, "apply dimension mismatch");
        let mut out = vec![Scalar::zero(); self.cols];
        for (r, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let t = x * &self[(r, c)];
                out[c] += &t;
            }
        }
        out
    }

    /// Row-reduced echelon form together with the pivot-column list.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero());
            let Some(r0) = found else { continue };
            m.swap_rows(pivot_row, r0);
            let inv = m[(pivot_row, col)].inv();
            for c in col..m.cols {
                let t = &m[(pivot_row, c)] * &inv;
                m[(pivot_row, c)] = t;
            }
            for r in 0..m.rows {
                if r != pivot_row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let t = &m[(r, c)] - &(&factor * &m[(pivot_row, c)]);
                        m[(r, c)] = t;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(r0) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if r0 != col {
                m.swap_rows(col, r0);
                det = -det;
            }
            det *= &m[(col, col)];
            let inv = m[(col, col)].inv();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for c in col..n {
                    let t = &m[(r, c)] - &(&factor * &m[(col, c)]);
                    m[(r, c)] = t;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(red.submatrix(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    /// Solves x * self = rhs for a single row vector; `None` when inconsistent.
    pub fn solve_left(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.cols, "solve dimension mismatch");
        // x * M = rhs  <=>  M^T x^T = rhs^T; row reduce the augmented transpose.
        let aug = self.transpose().hstack(&Mat::from_rows(vec![rhs.to_vec()]).transpose());
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.rows) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Scalar::zero(); self.rows];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red[(i, self.rows)].clone();
        }
        Some(x)
    }

    /// Leading principal minor of order k (determinant of the top-left k x k block).
    pub fn leading_principal_minor(&self, k: usize) -> Scalar {
        let idx: Vec<usize> = (0..k).collect();
        self.submatrix(&idx, &idx).det()
    }

    /// Sylvester's criterion, exact: a Hermitian matrix is positive definite
    /// iff every leading principal minor is real and strictly positive.
    pub fn hermitian_posdef(&self) -> Result<bool, crate::error::Error> {
        if !self.is_hermitian() {
            return Err(crate::error::Error::NotHermitian);
        }
        for k in 1..=self.rows {
            let minor = self.leading_principal_minor(k);
            if !minor.is_real() || minor.real_sign() <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Signature (n_plus, n_minus, n_zero) of a real symmetric matrix, by exact
    /// congruence diagonalization (Sylvester's law of inertia).
    pub fn symmetric_signature(&self) -> Result<(usize, usize, usize), crate::error::Error> {
        if !self.is_square() || !self.is_real() || self.transpose() != *self {
            return Err(crate::error::Error::NotSymmetric);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut done = vec![false; n];
        let (mut plus, mut minus, mut zero) = (0usize, 0usize, 0usize);
        for _ in 0..n {
            // pick a live index with nonzero diagonal, manufacturing one from an
            // off-diagonal entry if necessary
            let live: Vec<usize> = (0..n).filter(|&i| !done[i]).collect();
            if live.is_empty() {
                break;
            }
            let diag_idx = live.iter().copied().find(|&i| !m[(i, i)].is_zero());
            let k = match diag_idx {
                Some(k) => k,
                None => {
                    let mut found = None;
                    'search: for &i in &live {
                        for &j in &live {
                            if i != j && !m[(i, j)].is_zero() {
                                found = Some((i, j));
                                break 'search;
                            }
                        }
                    }
                    match found {
                        Some((i, j)) => {
                            // row/col addition creates 2*m[i][j] on the diagonal
                            for c in 0..n {
                                let t = &m[(i, c)] + &m[(j, c)];
                                m[(i, c)] = t;
                            }
                            for r in 0..n {
                                let t = &m[(r, i)] + &m[(r, j)];
                                m[(r, i)] = t;
                            }
                            i
                        }
                        None => {
                            zero += live.len();
                            break;
                        }
                    }
                }
            };
            let d = m[(k, k)].clone();
            if d.real_sign() > 0 {
                plus += 1;
            } else {
                minus += 1;
            }
            let dinv = d.inv();
            // clear row/column k by congruence
            for &r in &live {
                if r == k || m[(r, k)].is_zero() {
                    continue;
                }
                let factor = &m[(r, k)] * &dinv;
                for c in 0..n {
                    let t = &m[(r, c)] - &(&factor * &m[(k, c)]);
                    m[(r, c)] = t;
                }
                for rr in 0..n {
                    let t = &m[(rr, r)] - &(&factor * &m[(rr, k)]);
                    m[(rr, r)] = t;
                }
            }
            done[k] = true;
        }
        Ok((plus, minus, zero))
    }

    /// Kronecker product; row (i,j) of the result is the tensor of row i of
    /// `self` with row j of `other` under the index (i * other.rows + j).
    pub fn kronecker(&self, other: &Mat) -> Mat {
        Mat::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            let (r1, r2) = (r / other.rows, r % other.rows);
            let (c1, c2) = (c / other.cols, c % other.cols);
            &self[(r1, c1)] * &other[(r2, c2)]
        })
    }

    /// Entry-wise rational parts; errors if any entry has nonzero imaginary part.
    pub fn rational_entries(&self) -> Option<Vec<BigRational>> {
        if !self.is_real() {
            return None;
        }
        Some(self.entries.iter().map(|s| s.re.clone()).collect())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.entries[r * self.cols + c]
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "add shape mismatch");
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &rhs[(r, c)])
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "sub shape mismatch");
        Mat::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &rhs[(r, c)])
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| -&self[(r, c)])
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch: {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self[(r, k)].is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let t = &self[(r, k)] * &rhs[(k, c)];
                    out[(r, c)] += &t;
                }
            }
        }
        out
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

// Row-major array-of-rows wire format; shape is implicit except for matrices
// with zero rows, which serialize as an empty list and deserialize with zero
// columns (callers that care about the width reconstruct it from context).
impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Scalar>> = self.rows_iter().map(|r| r.to_vec()).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<Scalar>> = Vec::deserialize(deserializer)?;
        if !rows.is_empty() {
            let w = rows[0].len();
            if rows.iter().any(|r| r.len() != w) {
                return Err(serde::de::Error::custom("ragged matrix rows"));
            }
        }
        Ok(Mat::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity() {
        let id = Mat::identity(2);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let m = Mat::from_int_rows(&[&[2, 4], &[1, 2]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r.row_vec(0), vec![Scalar::one(), Scalar::from_int(2)]);
        assert!(r.row(1).iter().all(Scalar::is_zero));
    }

    #[test]
    fn det_and_inverse() {
        let m = Mat::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), Scalar::from_int(-2));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        let singular = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), Scalar::zero());
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn posdef_examples() {
        assert!(Mat::identity(3).hermitian_posdef().unwrap());
        let diag = Mat::from_int_rows(&[&[1, 0], &[0, -1]]);
        assert!(!diag.hermitian_posdef().unwrap());
        // [[2, i], [-i, 2]] has minors 2 and 3
        let mut g = Mat::zeros(2, 2);
        g[(0, 0)] = Scalar::from_int(2);
        g[(0, 1)] = Scalar::i();
        g[(1, 0)] = -Scalar::i();
        g[(1, 1)] = Scalar::from_int(2);
        assert_eq!(g.leading_principal_minor(1), Scalar::from_int(2));
        assert_eq!(g.leading_principal_minor(2), Scalar::from_int(3));
        assert!(g.hermitian_posdef().unwrap());
        let not_herm = Mat::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert!(not_herm.hermitian_posdef().is_err());
    }

    #[test]
    fn signature_by_congruence() {
        let m = Mat::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.symmetric_signature().unwrap(), (1, 1, 0));
        let m = Mat::from_int_rows(&[&[2, 0, 0], &[0, -3, 0], &[0, 0, 0]]);
        assert_eq!(m.symmetric_signature().unwrap(), (1, 1, 1));
        // degenerate rank-1
        let m = Mat::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.symmetric_signature().unwrap(), (1, 0, 1));
    }

    #[test]
    fn solve_left_consistency() {
        let m = Mat::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = m.solve_left(&[Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)]).unwrap();
        assert_eq!(m.apply(&x), vec![Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)]);
        assert!(m.solve_left(&[Scalar::from_int(1), Scalar::from_int(1), Scalar::from_int(3)]).is_none());
    }

    #[test]
    fn kronecker_shape_and_values() {
        let a = Mat::from_int_rows(&[&[1, 2]]);
        let b = Mat::from_int_rows(&[&[3], &[4]]);
        let k = a.kronecker(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k[(0, 0)], Scalar::from_int(3));
        assert_eq!(k[(1, 1)], Scalar::from_int(8));
    }
}
