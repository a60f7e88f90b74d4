//! The subspace lattice of a fixed coordinate space k^n over k = Q(i).
//!
//! Subspaces are stored as canonical RREF row bases, so equality of
//! subspaces is representation equality. Sums, intersections (Zassenhaus),
//! images, preimages and quotients are all exact.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// A subspace of k^n, presented by a row basis in reduced row-echelon form
/// with strictly increasing pivot columns and no zero rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Canonicalizes an arbitrary spanning set.
    pub fn from_rows(ambient_dim: usize, rows: &Mat) -> Self {
        assert!(
            rows.is_empty() || rows.cols() == ambient_dim,
            "spanning rows have wrong width: {} vs ambient {}",
            rows.cols(),
            ambient_dim
        );
        if rows.rows() == 0 {
            return Subspace { ambient_dim, basis: Mat::zeros(0, ambient_dim), pivots: vec![] };
        }
        let (red, pivots) = rows.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let cols: Vec<usize> = (0..ambient_dim).collect();
        Subspace { ambient_dim, basis: red.submatrix(&keep, &cols), pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Mat::zeros(0, ambient_dim), pivots: vec![] }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Mat::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span_of_vec(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        Subspace::from_rows(ambient_dim, &Mat::from_rows(vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// True iff every basis entry is rational.
    pub fn is_rational(&self) -> bool {
        self.basis.is_real()
    }

    /// Entry-wise conjugate (RREF is preserved by conjugation).
    pub fn conj(&self) -> Subspace {
        Subspace { ambient_dim: self.ambient_dim, basis: self.basis.conj(), pivots: self.pivots.clone() }
    }

    /// Reduces v modulo the basis; the result is zero iff v lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient_dim, "vector has wrong dimension");
        let mut v = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for c in p..self.ambient_dim {
                    let t = &v[c] - &(&factor * &self.basis[(row, c)]);
                    v[c] = t;
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        other.basis.rows_iter().all(|r| self.contains_vector(r))
    }

    /// Coordinates of v in this subspace's basis; `None` when v is outside.
    /// With an RREF basis the coordinates are just the pivot entries.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        Ok(Subspace::from_rows(self.ambient_dim, &self.basis.vstack(&other.basis)))
    }

    /// Intersection by the Zassenhaus block trick: row reduce [U | U; V | 0];
    /// rows whose left block vanishes carry an intersection basis on the right.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let n = self.ambient_dim;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Mat::zeros(other.basis.rows(), n));
        let (red, _) = top.vstack(&bottom).rref();
        let mut rows = Vec::new();
        for r in 0..red.rows() {
            let left_zero = (0..n).all(|c| red[(r, c)].is_zero());
            let right_nonzero = (n..2 * n).any(|c| !red[(r, c)].is_zero());
            if left_zero && right_nonzero {
                rows.push((n..2 * n).map(|c| red[(r, c)].clone()).collect());
            }
        }
        Ok(Subspace::span_of_vec(n, rows))
    }

    /// Image of this subspace under the row-acting map f (ambient_dim x target).
    pub fn image(&self, f: &Mat) -> Result<Subspace> {
        if f.rows() != self.ambient_dim {
            return Err(Error::MapShape {
                expected_rows: self.ambient_dim,
                expected_cols: f.cols(),
                rows: f.rows(),
                cols: f.cols(),
            });
        }
        if self.is_zero() {
            return Ok(Subspace::zero(f.cols()));
        }
        Ok(Subspace::from_rows(f.cols(), &(&self.basis * f)))
    }

    /// {x : f(x) in V}. The preimage of the zero subspace is the kernel.
    pub fn preimage(f: &Mat, target: &Subspace) -> Result<Subspace> {
        if f.cols() != target.ambient_dim {
            return Err(Error::MapShape {
                expected_rows: f.rows(),
                expected_cols: target.ambient_dim,
                rows: f.rows(),
                cols: f.cols(),
            });
        }
        // x in preimage iff f(x) satisfies the linear constraints cutting out V.
        let constraints = target.constraint_matrix();
        if constraints.cols() == 0 {
            return Ok(Subspace::full(f.rows()));
        }
        kernel(&(f * &constraints))
    }

    /// A matrix C (n x c) with V = { y : y * C = 0 }; the columns are a basis
    /// of the annihilator of V under the standard (unconjugated) pairing.
    pub fn constraint_matrix(&self) -> Mat {
        // right kernel of the basis: { c : basis * c^T = 0 }
        let k = right_kernel(&self.basis, self.ambient_dim);
        // pack kernel vectors as columns
        let mut c = Mat::zeros(self.ambient_dim, k.len());
        for (j, v) in k.iter().enumerate() {
            for i in 0..self.ambient_dim {
                c[(i, j)] = v[i].clone();
            }
        }
        c
    }

    /// Completes this subspace's basis to a basis of `bigger`, returning the
    /// added vectors (drawn from bigger's basis rows).
    pub fn complete_inside(&self, bigger: &Subspace) -> Result<Vec<Vec<Scalar>>> {
        if !bigger.contains(self) {
            return Err(Error::NotContained);
        }
        let mut current = self.clone();
        let mut added = Vec::new();
        for row in bigger.basis.rows_iter() {
            if !current.contains_vector(row) {
                added.push(row.to_vec());
                current = current.sum(&Subspace::span_of_vec(self.ambient_dim, vec![row.to_vec()]))?;
            }
        }
        Ok(added)
    }

    /// First basis vector of `self` that is not in `smaller`; `None` when
    /// self is contained in smaller.
    pub fn witness_outside(&self, smaller: &Subspace) -> Option<Vec<Scalar>> {
        self.basis.rows_iter().find(|r| !smaller.contains_vector(r)).map(|r| r.to_vec())
    }
}

/// Kernel of the row-acting map f: k^a -> k^b, i.e. { x : x * f = 0 }.
pub fn kernel(f: &Mat) -> Result<Subspace> {
    let a = f.rows();
    let vs = right_kernel(&f.transpose(), a);
    Ok(Subspace::span_of_vec(a, vs))
}

/// Column-kernel vectors of m: all v with m * v^T = 0, where v ranges over k^w.
fn right_kernel(m: &Mat, width: usize) -> Vec<Vec<Scalar>> {
    if m.rows() == 0 {
        // no constraints: whole space
        return (0..width)
            .map(|i| {
                let mut v = vec![Scalar::zero(); width];
                v[i] = Scalar::one();
                v
            })
            .collect();
    }
    debug_assert_eq!(m.cols(), width);
    let (red, pivots) = m.rref();
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Scalar::zero(); width];
        v[fc] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&red[(r, fc)];
        }
        out.push(v);
    }
    out
}

/// Quotient of the ambient space by a subspace, presented on the non-pivot
/// coordinates. `proj` (n x m) is the quotient map; `section` (m x n) is the
/// canonical splitting with section * proj = id.
#[derive(Clone)]
pub struct Quotient {
    denominator: Subspace,
    proj: Mat,
    section: Mat,
}

impl Quotient {
    pub fn by(denominator: &Subspace) -> Self {
        let n = denominator.ambient_dim();
        let nonpivot: Vec<usize> =
            (0..n).filter(|c| !denominator.pivots().contains(c)).collect();
        let m = nonpivot.len();
        let mut proj = Mat::zeros(n, m);
        for i in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[i] = Scalar::one();
            let reduced = denominator.reduce(&e);
            for (j, &c) in nonpivot.iter().enumerate() {
                proj[(i, j)] = reduced[c].clone();
            }
        }
        let mut section = Mat::zeros(m, n);
        for (j, &c) in nonpivot.iter().enumerate() {
            section[(j, c)] = Scalar::one();
        }
        Quotient { denominator: denominator.clone(), proj, section }
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denominator
    }

    /// Dimension of the quotient space.
    pub fn dim(&self) -> usize {
        self.proj.cols()
    }

    pub fn proj(&self) -> &Mat {
        &self.proj
    }

    pub fn section(&self) -> &Mat {
        &self.section
    }

    pub fn project_subspace(&self, s: &Subspace) -> Subspace {
        s.image(&self.proj).expect("quotient projection shape")
    }

    pub fn project_vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.proj.apply(v)
    }

    /// Full preimage of a subspace of the quotient.
    pub fn preimage_subspace(&self, s: &Subspace) -> Subspace {
        Subspace::preimage(&self.proj, s).expect("quotient preimage shape")
    }
}

/// A subquotient top/bottom of the ambient space, with its canonical
/// coordinate presentation. Page terms of spectral sequences, graded pieces
/// of filtrations and cohomology groups are all presented this way, so
/// induced maps and induced filtrations stay comparable as literal subspaces.
#[derive(Clone)]
pub struct Subquotient {
    top: Subspace,
    bottom: Subspace,
    // quotient of the ambient by `bottom`
    ambient_quotient: Quotient,
    // image of `top` in that quotient; its RREF basis fixes the coordinates
    image: Subspace,
}

impl Subquotient {
    pub fn new(top: Subspace, bottom: Subspace) -> Result<Self> {
        if !top.contains(&bottom) {
            return Err(Error::NotContained);
        }
        let ambient_quotient = Quotient::by(&bottom);
        let image = ambient_quotient.project_subspace(&top);
        Ok(Subquotient { top, bottom, ambient_quotient, image })
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Subquotient::new(Subspace::full(ambient_dim), Subspace::zero(ambient_dim)).unwrap()
    }

    pub fn top(&self) -> &Subspace {
        &self.top
    }

    pub fn bottom(&self) -> &Subspace {
        &self.bottom
    }

    pub fn dim(&self) -> usize {
        self.top.dim() - self.bottom.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.top.ambient_dim()
    }

    /// Class of an ambient vector (must lie in `top`) in presentation coordinates.
    pub fn class_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.top.contains_vector(v) {
            return None;
        }
        self.image.coordinates(&self.ambient_quotient.project_vector(v))
    }

    /// A representative in `top` of a presentation-coordinate class.
    pub fn representative(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim(), "class has wrong dimension");
        let in_quotient = self.image.basis().apply_rows(coords);
        self.ambient_quotient.section().apply(&in_quotient)
    }

    /// Subspace S with bottom <= S <= top, written in presentation coordinates.
    pub fn subspace_in_coords(&self, s: &Subspace) -> Result<Subspace> {
        if !self.top.contains(s) {
            return Err(Error::NotContained);
        }
        let proj = self.ambient_quotient.project_subspace(s);
        // express inside the image coordinates
        let rows: Vec<Vec<Scalar>> = proj
            .basis()
            .rows_iter()
            .map(|r| self.image.coordinates(r).ok_or(Error::NotContained))
            .collect::<Result<_>>()?;
        Ok(Subspace::span_of_vec(self.dim(), rows))
    }

    /// Pulls a presentation-coordinate subspace back to an ambient subspace S
    /// with bottom <= S <= top.
    pub fn subspace_from_coords(&self, s: &Subspace) -> Subspace {
        assert_eq!(s.ambient_dim(), self.dim());
        let mut rows: Vec<Vec<Scalar>> = s
            .basis()
            .rows_iter()
            .map(|r| self.representative(r))
            .collect();
        rows.extend(self.bottom.basis().rows_iter().map(|r| r.to_vec()));
        Subspace::span_of_vec(self.ambient_dim(), rows)
    }

    /// Matrix (in presentation coordinates) of the map induced by the ambient
    /// map f; requires f(top) <= target.top and f(bottom) <= target.bottom,
    /// which is exactly well-definedness.
    pub fn induced_map(&self, f: &Mat, target: &Subquotient) -> Result<Mat> {
        let img_top = self.top.image(f)?;
        if !target.top.contains(&img_top) {
            return Err(Error::Inconsistent("induced map does not preserve top".into()));
        }
        let img_bottom = self.bottom.image(f)?;
        if !target.bottom.contains(&img_bottom) {
            return Err(Error::Inconsistent("induced map does not preserve bottom".into()));
        }
        let mut rows = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let mut coords = vec![Scalar::zero(); self.dim()];
            coords[j] = Scalar::one();
            let rep = self.representative(&coords);
            let img = f.apply(&rep);
            rows.push(target.class_of(&img).expect("image class"));
        }
        if rows.is_empty() {
            return Ok(Mat::zeros(0, target.dim()));
        }
        Ok(Mat::from_rows(rows))
    }
}

trait ApplyRows {
    fn apply_rows(&self, coords: &[Scalar]) -> Vec<Scalar>;
}

impl ApplyRows for Mat {
    /// Linear combination of the rows with the given coefficients.
    fn apply_rows(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.rows());
        let mut out = vec![Scalar::zero(); self.cols()];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.cols() {
                let t = c * &self[(i, j)];
                out[j] += &t;
            }
        }
        out
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of k^{}, basis {:?})", self.dim(), self.ambient_dim, self.basis)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceWire {
    ambient_dim: usize,
    basis: Mat,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceWire { ambient_dim: self.ambient_dim, basis: self.basis.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SubspaceWire::deserialize(deserializer)?;
        if !wire.basis.is_empty() && wire.basis.cols() != wire.ambient_dim {
            return Err(serde::de::Error::custom("basis width differs from ambient dimension"));
        }
        Ok(Subspace::from_rows(wire.ambient_dim, &wire.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_rows(ambient, &Mat::from_int_rows(rows))
    }

    #[test]
    fn sum_and_intersection_of_axes() {
        let u = span(2, &[&[1, 0]]);
        let v = span(2, &[&[0, 1]]);
        assert_eq!(u.sum(&v).unwrap(), Subspace::full(2));
        assert_eq!(u.intersect(&v).unwrap(), Subspace::zero(2));
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn canonical_representation_is_order_independent() {
        let a = span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = span(3, &[&[0, 1, 1], &[1, 2, 3]]);
        let c = span(3, &[&[1, 3, 4], &[2, 5, 7]]);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn preimage_of_zero_and_identity() {
        let f = Mat::zeros(3, 2);
        assert_eq!(Subspace::preimage(&f, &span(2, &[&[1, 0]])).unwrap(), Subspace::full(3));
        let id = Mat::identity(2);
        let v = span(2, &[&[1, 5]]);
        assert_eq!(Subspace::preimage(&id, &v).unwrap(), v);
    }

    #[test]
    fn kernel_matches_preimage_of_zero() {
        let f = Mat::from_int_rows(&[&[1, 0], &[1, 0], &[0, 1]]);
        let k = kernel(&f).unwrap();
        assert_eq!(k, Subspace::preimage(&f, &Subspace::zero(2)).unwrap());
        assert_eq!(k.dim(), 1);
        assert!(k.contains_vector(&[
            Scalar::from_int(1),
            Scalar::from_int(-1),
            Scalar::zero()
        ]));
    }

    #[test]
    fn dimension_formula() {
        let u = span(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let v = span(4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        assert_eq!(u.dim() + v.dim(), s.dim() + i.dim());
        assert_eq!(i, span(4, &[&[0, 1, 0, 0]]));
    }

    #[test]
    fn quotient_projection_section() {
        let b = span(3, &[&[1, 1, 0]]);
        let q = Quotient::by(&b);
        assert_eq!(q.dim(), 2);
        assert_eq!(&(q.section() * q.proj()), &Mat::identity(2));
        // b itself dies in the quotient
        assert!(q.project_subspace(&b).is_zero());
        assert_eq!(q.preimage_subspace(&Subspace::zero(2)), b);
    }

    #[test]
    fn subquotient_roundtrip() {
        let top = span(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let bottom = span(4, &[&[0, 0, 1, 0]]);
        let sq = Subquotient::new(top.clone(), bottom.clone()).unwrap();
        assert_eq!(sq.dim(), 2);
        let s = span(4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let coords = sq.subspace_in_coords(&s).unwrap();
        assert_eq!(coords.dim(), 1);
        let back = sq.subspace_from_coords(&coords);
        assert_eq!(back, s.sum(&bottom).unwrap());
    }

    #[test]
    fn complete_inside_extends_basis() {
        let u = span(3, &[&[1, 0, 0]]);
        let w = Subspace::full(3);
        let added = u.complete_inside(&w).unwrap();
        assert_eq!(added.len(), 2);
        let mut all = vec![u.basis().row_vec(0)];
        all.extend(added);
        assert_eq!(Subspace::span_of_vec(3, all), w);
    }
}
