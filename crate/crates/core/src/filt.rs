//! Filtration calculus: finite decreasing (F) and increasing (W) chains of
//! subspaces, induced filtrations on subs and quotients, graded pieces,
//! shifts, strictness of filtered maps, two-filtration bigraded tables and
//! n-opposite pairs.
//!
//! Only the jump steps are stored; queries outside the stored range clamp to
//! the full space on one side and zero on the other, so every filtration is
//! finite (biregular) by construction and equality of filtrations is
//! representation equality.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::subspace::{Quotient, Subquotient, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "dec")]
    Decreasing,
    #[serde(rename = "inc")]
    Increasing,
}

/// A finite filtration of k^n by subspaces.
///
/// Decreasing (Hodge-style F): `value(p)` is the stored space at the smallest
/// index >= p, zero above the top step; the smallest stored step must be the
/// full space. Increasing (weight-style W): mirror image.
#[derive(Clone, PartialEq, Eq)]
pub struct Filtration {
    direction: Direction,
    ambient_dim: usize,
    steps: Vec<(i64, Subspace)>,
}

impl Filtration {
    pub fn new(direction: Direction, ambient_dim: usize, mut steps: Vec<(i64, Subspace)>) -> Result<Self> {
        steps.sort_by_key(|(i, _)| *i);
        for w in steps.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
                return Err(Error::FiltrationNotMonotone(w[0].0));
            }
        }
        steps.dedup_by(|a, b| a.0 == b.0);
        for (_, s) in &steps {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::AmbientMismatch(s.ambient_dim(), ambient_dim));
            }
        }
        // nesting
        for w in steps.windows(2) {
            let ok = match direction {
                Direction::Decreasing => w[0].1.contains(&w[1].1),
                Direction::Increasing => w[1].1.contains(&w[0].1),
            };
            if !ok {
                return Err(Error::FiltrationNotMonotone(w[1].0));
            }
        }
        // canonicalize: keep one index per distinct value (the last for
        // decreasing, the first for increasing), drop clamp-value steps on the
        // open side
        let mut canon: Vec<(i64, Subspace)> = Vec::new();
        match direction {
            Direction::Decreasing => {
                for (i, s) in steps {
                    if let Some(last) = canon.last_mut() {
                        if last.1 == s {
                            last.0 = i;
                            continue;
                        }
                    }
                    canon.push((i, s));
                }
                while canon.last().is_some_and(|(_, s)| s.is_zero()) {
                    canon.pop();
                }
            }
            Direction::Increasing => {
                for (i, s) in steps {
                    if canon.last().is_some_and(|(_, l)| *l == s) {
                        continue;
                    }
                    canon.push((i, s));
                }
                while canon.first().is_some_and(|(_, s)| s.is_zero()) {
                    canon.remove(0);
                }
            }
        }
        // finiteness: the closed end must reach the full space
        let closed_end_full = match direction {
            Direction::Decreasing => canon.first().map(|(_, s)| s.is_full()),
            Direction::Increasing => canon.last().map(|(_, s)| s.is_full()),
        };
        if ambient_dim > 0 && closed_end_full != Some(true) {
            let at = match direction {
                Direction::Decreasing => canon.first().map(|(i, _)| *i).unwrap_or(0),
                Direction::Increasing => canon.last().map(|(i, _)| *i).unwrap_or(0),
            };
            return Err(Error::FiltrationNotMonotone(at));
        }
        if ambient_dim == 0 {
            canon.clear();
        }
        Ok(Filtration { direction, ambient_dim, steps: canon })
    }

    pub fn decreasing(ambient_dim: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        Filtration::new(Direction::Decreasing, ambient_dim, steps)
    }

    pub fn increasing(ambient_dim: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        Filtration::new(Direction::Increasing, ambient_dim, steps)
    }

    /// One-jump filtration: full at `idx` (decreasing: full for p <= idx,
    /// zero after; increasing: zero below idx, full from idx on).
    pub fn one_jump(direction: Direction, ambient_dim: usize, idx: i64) -> Self {
        Filtration {
            direction,
            ambient_dim,
            steps: if ambient_dim == 0 { vec![] } else { vec![(idx, Subspace::full(ambient_dim))] },
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_decreasing(&self) -> bool {
        self.direction == Direction::Decreasing
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    /// Stored jump indices, ascending.
    pub fn jumps(&self) -> Vec<i64> {
        self.steps.iter().map(|(i, _)| *i).collect()
    }

    pub fn min_jump(&self) -> Option<i64> {
        self.steps.first().map(|(i, _)| *i)
    }

    pub fn max_jump(&self) -> Option<i64> {
        self.steps.last().map(|(i, _)| *i)
    }

    /// The subspace at index n, clamped outside the stored range.
    pub fn value(&self, n: i64) -> Subspace {
        match self.direction {
            Direction::Decreasing => self
                .steps
                .iter()
                .find(|(i, _)| *i >= n)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| Subspace::zero(self.ambient_dim)),
            Direction::Increasing => self
                .steps
                .iter()
                .rev()
                .find(|(i, _)| *i <= n)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| Subspace::zero(self.ambient_dim)),
        }
    }

    /// Shifted filtration: (F[n])^p = F^{n+p} for decreasing,
    /// (W[n])_p = W_{p-n} for increasing.
    pub fn shift(&self, n: i64) -> Filtration {
        let steps = self
            .steps
            .iter()
            .map(|(i, s)| {
                let j = match self.direction {
                    Direction::Decreasing => i - n,
                    Direction::Increasing => i + n,
                };
                (j, s.clone())
            })
            .collect();
        Filtration { direction: self.direction, ambient_dim: self.ambient_dim, steps }
    }

    /// Entry-wise conjugate filtration.
    pub fn conj(&self) -> Filtration {
        Filtration {
            direction: self.direction,
            ambient_dim: self.ambient_dim,
            steps: self.steps.iter().map(|(i, s)| (*i, s.conj())).collect(),
        }
    }

    /// True iff every step has a rational basis.
    pub fn is_rational(&self) -> bool {
        self.steps.iter().all(|(_, s)| s.is_rational())
    }

    /// Reindexes an increasing W as the decreasing filtration F^i = W_{-i}
    /// (and vice versa).
    pub fn flip_direction(&self) -> Filtration {
        let direction = match self.direction {
            Direction::Decreasing => Direction::Increasing,
            Direction::Increasing => Direction::Decreasing,
        };
        let mut steps: Vec<(i64, Subspace)> =
            self.steps.iter().map(|(i, s)| (-i, s.clone())).collect();
        steps.reverse();
        Filtration { direction, ambient_dim: self.ambient_dim, steps }
    }

    /// Induced filtration on a subspace B, in B's own RREF coordinates:
    /// F^n(B) = B ∩ F^n(A).
    pub fn induced_sub(&self, b: &Subspace) -> Result<Filtration> {
        if b.ambient_dim() != self.ambient_dim {
            return Err(Error::AmbientMismatch(b.ambient_dim(), self.ambient_dim));
        }
        let pivots = b.pivots().to_vec();
        let mut steps = Vec::new();
        for (i, s) in &self.steps {
            let cut = s.intersect(b)?;
            // coordinates of cut inside b: restrict to b's pivot columns
            let rows: Vec<Vec<Scalar>> = cut
                .basis()
                .rows_iter()
                .map(|r| pivots.iter().map(|&p| r[p].clone()).collect())
                .collect();
            steps.push((*i, Subspace::span_of_vec(b.dim(), rows)));
        }
        Filtration::new(self.direction, b.dim(), steps)
    }

    /// Induced quotient filtration F^n(A/B) = p(F^n(A)) for a fixed quotient
    /// presentation.
    pub fn induced_quotient(&self, q: &Quotient) -> Result<Filtration> {
        if q.denominator().ambient_dim() != self.ambient_dim {
            return Err(Error::AmbientMismatch(q.denominator().ambient_dim(), self.ambient_dim));
        }
        let steps = self
            .steps
            .iter()
            .map(|(i, s)| (*i, q.project_subspace(s)))
            .collect();
        Filtration::new(self.direction, q.dim(), steps)
    }

    /// Graded piece at n: F^n/F^{n+1} (decreasing) or W_n/W_{n-1} (increasing),
    /// presented as a subquotient of the ambient space.
    pub fn gr(&self, n: i64) -> Subquotient {
        let (top, bottom) = match self.direction {
            Direction::Decreasing => (self.value(n), self.value(n + 1)),
            Direction::Increasing => (self.value(n), self.value(n - 1)),
        };
        Subquotient::new(top, bottom).expect("filtration nesting")
    }

    pub fn gr_dim(&self, n: i64) -> usize {
        self.gr(n).dim()
    }

    /// Indices with a nonzero graded piece, together with the dimensions.
    pub fn gr_profile(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        for &i in &self.candidate_indices() {
            let d = self.gr_dim(i);
            if d > 0 {
                out.push((i, d));
            }
        }
        out
    }

    /// All stored jump indices; for canonical forms these are exactly the
    /// indices with a nonzero graded piece.
    pub fn candidate_indices(&self) -> Vec<i64> {
        self.steps.iter().map(|(i, _)| *i).collect()
    }
}

impl std::fmt::Debug for Filtration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dir = match self.direction {
            Direction::Decreasing => "dec",
            Direction::Increasing => "inc",
        };
        write!(f, "Filtration[{dir}, dim {}]{{", self.ambient_dim)?;
        for (i, s) in &self.steps {
            write!(f, " {i}:dim{}", s.dim())?;
        }
        write!(f, " }}")
    }
}

#[derive(Serialize, Deserialize)]
struct StepWire {
    idx: i64,
    basis: Mat,
}

#[derive(Serialize, Deserialize)]
struct FiltrationWire {
    direction: Direction,
    ambient_dim: usize,
    steps: Vec<StepWire>,
}

impl Serialize for Filtration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FiltrationWire {
            direction: self.direction,
            ambient_dim: self.ambient_dim,
            steps: self
                .steps
                .iter()
                .map(|(i, s)| StepWire { idx: *i, basis: s.basis().clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Filtration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = FiltrationWire::deserialize(deserializer)?;
        let steps = wire
            .steps
            .into_iter()
            .map(|s| {
                if !s.basis.is_empty() && s.basis.cols() != wire.ambient_dim {
                    return Err(serde::de::Error::custom("step basis width differs from ambient"));
                }
                Ok((s.idx, Subspace::from_rows(wire.ambient_dim, &s.basis)))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Filtration::new(wire.direction, wire.ambient_dim, steps).map_err(serde::de::Error::custom)
    }
}

/// The spec-level induced operation: sub-filtration on B and quotient
/// filtration on ambient/B (with its canonical presentation).
pub fn induced(f: &Filtration, b: &Subspace) -> Result<(Filtration, Filtration)> {
    let sub = f.induced_sub(b)?;
    let quot = f.induced_quotient(&Quotient::by(b))?;
    Ok((sub, quot))
}

/// A linear map compatible with filtrations on source and target.
#[derive(Clone, Debug)]
pub struct FilteredMap {
    map: Mat,
    source: Filtration,
    target: Filtration,
}

impl FilteredMap {
    /// Checks f(F^n source) <= F^n target on every stored jump of either side
    /// (clamped values make all other indices redundant).
    pub fn new(map: Mat, source: Filtration, target: Filtration) -> Result<Self> {
        if map.rows() != source.ambient_dim() || map.cols() != target.ambient_dim() {
            return Err(Error::MapShape {
                expected_rows: source.ambient_dim(),
                expected_cols: target.ambient_dim(),
                rows: map.rows(),
                cols: map.cols(),
            });
        }
        if source.direction() != target.direction() {
            return Err(Error::InvalidInput("filtered map endpoints have mixed directions".into()));
        }
        let mut idxs = source.jumps();
        idxs.extend(target.jumps());
        idxs.sort_unstable();
        idxs.dedup();
        for n in idxs {
            let img = source.value(n).image(&map)?;
            if !target.value(n).contains(&img) {
                return Err(Error::NotFiltered(n));
            }
        }
        Ok(FilteredMap { map, source, target })
    }

    pub fn map(&self) -> &Mat {
        &self.map
    }

    pub fn source(&self) -> &Filtration {
        &self.source
    }

    pub fn target(&self) -> &Filtration {
        &self.target
    }
}

/// Falsification witness for strictness: an index n and a vector lying in
/// Im(f) ∩ F^n(target) but not in f(F^n(source)).
#[derive(Clone, Debug)]
pub struct StrictnessWitness {
    pub index: i64,
    pub vector: Vec<Scalar>,
}

/// f is strict when f(F^n(A)) = Im(f) ∩ F^n(B) for all n.
pub fn is_strict(f: &FilteredMap) -> Result<(bool, Option<StrictnessWitness>)> {
    let image = Subspace::full(f.source.ambient_dim()).image(&f.map)?;
    let mut idxs = f.source.jumps();
    idxs.extend(f.target.jumps());
    idxs.sort_unstable();
    idxs.dedup();
    for n in idxs {
        let pushed = f.source.value(n).image(&f.map)?;
        let cut = image.intersect(&f.target.value(n))?;
        if pushed != cut {
            let vector = cut.witness_outside(&pushed).expect("dimension gap has a witness");
            return Ok((false, Some(StrictnessWitness { index: n, vector })));
        }
    }
    Ok((true, None))
}

/// The §3.1 exactness criterion: f is strict iff
/// 0 -> Gr(Ker f) -> Gr(A) -> Gr(B) -> Gr(Coker f) -> 0 is exact, checked
/// degreewise by dimension count against the rank of Gr(f).
pub fn strictness_gr_criterion(f: &FilteredMap) -> Result<bool> {
    let ker = crate::subspace::kernel(&f.map)?;
    let ker_filt = f.source.induced_sub(&ker)?;
    let image = Subspace::full(f.source.ambient_dim()).image(&f.map)?;
    let q = Quotient::by(&image);
    let coker_filt = f.target.induced_quotient(&q)?;
    let mut idxs = f.source.jumps();
    idxs.extend(f.target.jumps());
    let extended: Vec<i64> = idxs.iter().flat_map(|&i| [i - 1, i, i + 1]).collect();
    let mut idxs = extended;
    idxs.sort_unstable();
    idxs.dedup();
    for n in idxs {
        let gr_a = f.source.gr(n);
        let gr_b = f.target.gr(n);
        let gr_ker = ker_filt.gr(n).dim();
        let gr_coker = coker_filt.gr(n).dim();
        let induced = gr_a.induced_map(&f.map, &gr_b)?;
        let rank = induced.rank();
        if gr_a.dim() != gr_ker + rank || gr_b.dim() != rank + gr_coker {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bigraded dimension table keyed (m, n) = (first index, second index).
pub type BigradedDims = BTreeMap<(i64, i64), usize>;

/// Computes dim Gr^n_G Gr^m_F and dim Gr^m_F Gr^n_G independently and asserts
/// they agree (Zassenhaus' lemma), returning the common table keyed (m, n).
pub fn two_filtration_gr(f: &Filtration, g: &Filtration) -> Result<BigradedDims> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::AmbientMismatch(f.ambient_dim(), g.ambient_dim()));
    }
    let table_fg = gr_gr_table(f, g)?;
    let table_gf = gr_gr_table(g, f)?;
    let flipped: BigradedDims = table_gf.into_iter().map(|((n, m), d)| ((m, n), d)).collect();
    if table_fg != flipped {
        return Err(Error::Inconsistent("Zassenhaus tables disagree".into()));
    }
    Ok(table_fg)
}

/// dim Gr^n_{second} Gr^m_{first}, keyed (m, n); second is induced on the
/// graded pieces of first.
fn gr_gr_table(first: &Filtration, second: &Filtration) -> Result<BigradedDims> {
    let mut out = BigradedDims::new();
    for &m in &first.candidate_indices() {
        let piece = first.gr(m);
        if piece.dim() == 0 {
            continue;
        }
        for &n in &second.candidate_indices() {
            let this = induced_on_subquotient(second, n, &piece)?;
            let next_idx = match second.direction() {
                Direction::Decreasing => n + 1,
                Direction::Increasing => n - 1,
            };
            let next = induced_on_subquotient(second, next_idx, &piece)?;
            let d = this.dim() - next.dim();
            if d > 0 {
                out.insert((m, n), d);
            }
        }
    }
    Ok(out)
}

/// The subspace of the subquotient's coordinate space induced by filt.value(n):
/// ((value(n) ∩ top) + bottom) / bottom.
pub fn induced_on_subquotient(filt: &Filtration, n: i64, piece: &Subquotient) -> Result<Subspace> {
    let cut = filt.value(n).intersect(piece.top())?;
    let lifted = cut.sum(piece.bottom())?;
    piece.subspace_in_coords(&lifted)
}

/// Filtration of a tensor product on Kronecker coordinates:
/// F^r = Σ_p F^p ⊗ G^{r-p} (decreasing) or W_r = Σ_p W_p ⊗ W'_{r-p}
/// (increasing). Summing over the stored jumps of the first factor is
/// exhaustive thanks to clamping.
pub fn tensor_filtration(f: &Filtration, g: &Filtration) -> Result<Filtration> {
    if f.direction() != g.direction() {
        return Err(Error::InvalidInput("tensor of filtrations with mixed directions".into()));
    }
    let n = f.ambient_dim() * g.ambient_dim();
    let (jf, jg) = (f.jumps(), g.jumps());
    if jf.is_empty() || jg.is_empty() {
        return Ok(Filtration::one_jump(f.direction(), n, 0));
    }
    let lo = jf[0] + jg[0];
    let hi = jf[jf.len() - 1] + jg[jg.len() - 1];
    let mut steps = Vec::new();
    for r in lo..=hi {
        let mut total = Subspace::zero(n);
        for &p in &jf {
            let left = f.value(p);
            let right = g.value(r - p);
            if left.is_zero() || right.is_zero() {
                continue;
            }
            let block = Subspace::from_rows(n, &left.basis().kronecker(right.basis()));
            total = total.sum(&block)?;
        }
        steps.push((r, total));
    }
    Filtration::new(f.direction(), n, steps)
}

/// Filtration on Hom(A, B) ≅ k^{dim A · dim B} (row-major vec(M) coordinates):
/// F^k Hom = { f : f(F^n A) ⊆ F^{n+k} B for all n } and the increasing
/// analogue W_k Hom = { f : f(W_n A) ⊆ W_{n+k} B }.
pub fn hom_filtration(f: &Filtration, g: &Filtration) -> Result<Filtration> {
    if f.direction() != g.direction() {
        return Err(Error::InvalidInput("hom of filtrations with mixed directions".into()));
    }
    let (da, db) = (f.ambient_dim(), g.ambient_dim());
    let n = da * db;
    let (ja, jb) = (f.jumps(), g.jumps());
    if ja.is_empty() || jb.is_empty() {
        return Ok(Filtration::one_jump(f.direction(), n, 0));
    }
    let lo = jb[0] - ja[ja.len() - 1] - 1;
    let hi = jb[jb.len() - 1] - ja[0] + 1;
    let mut steps = Vec::new();
    for k in lo..=hi {
        let mut space = Subspace::full(n);
        for &p in &ja {
            let src = f.value(p);
            let tgt = g.value(p + k);
            if src.is_zero() || tgt.is_full() {
                continue;
            }
            // constraint: for every basis row v of src, (v·M) ∈ tgt, encoded
            // as linear conditions Σ_{a,b} v_a C_{b,j} M_{a,b} = 0 with C the
            // constraint matrix of tgt
            let cons = tgt.constraint_matrix();
            let mut cmat = Mat::zeros(n, src.dim() * cons.cols());
            for (vi, v) in src.basis().rows_iter().enumerate() {
                for j in 0..cons.cols() {
                    let col = vi * cons.cols() + j;
                    for a in 0..da {
                        if v[a].is_zero() {
                            continue;
                        }
                        for b in 0..db {
                            cmat[(a * db + b, col)] = &v[a] * &cons[(b, j)];
                        }
                    }
                }
            }
            if cmat.cols() == 0 {
                continue;
            }
            let sol = crate::subspace::kernel(&cmat)?;
            space = space.intersect(&sol)?;
        }
        steps.push((k, space));
    }
    Filtration::new(f.direction(), n, steps)
}

/// Result of an opposedness check: on success the bigraded pieces
/// A^{p,q} = F^p ∩ G^q (p + q = n); on failure the offending (p, q).
pub enum Opposedness {
    Opposite(BTreeMap<(i64, i64), Subspace>),
    Fails { p: i64, q: i64, dim: usize },
}

/// F and G (both decreasing, same ambient) are n-opposite iff
/// Gr^p_F Gr^q_G = 0 whenever p + q != n.
pub fn check_n_opposite(f: &Filtration, g: &Filtration, n: i64) -> Result<Opposedness> {
    if !f.is_decreasing() || !g.is_decreasing() {
        return Err(Error::InvalidInput("opposedness is defined for decreasing filtrations".into()));
    }
    let table = two_filtration_gr(f, g)?;
    for (&(p, q), &dim) in &table {
        if p + q != n && dim > 0 {
            return Ok(Opposedness::Fails { p, q, dim });
        }
    }
    let mut pieces = BTreeMap::new();
    let mut total = Subspace::zero(f.ambient_dim());
    for (&(p, q), _) in &table {
        let a = f.value(p).intersect(&g.value(q))?;
        if !total.intersect(&a)?.is_zero() {
            return Err(Error::Inconsistent("A^{p,q} do not form a direct sum".into()));
        }
        total = total.sum(&a)?;
        pieces.insert((p, q), a);
    }
    if !total.is_full() {
        return Err(Error::Inconsistent("⊕ A^{p,q} is not the whole space".into()));
    }
    Ok(Opposedness::Opposite(pieces))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_rows(ambient, &Mat::from_int_rows(rows))
    }

    fn flag3() -> Filtration {
        // F^0 = Q^3, F^1 = <e1,e2>, F^2 = <e1>, F^3 = 0
        Filtration::decreasing(
            3,
            vec![
                (0, Subspace::full(3)),
                (1, span(3, &[&[1, 0, 0], &[0, 1, 0]])),
                (2, span(3, &[&[1, 0, 0]])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn clamping_and_values() {
        let f = flag3();
        assert!(f.value(-10).is_full());
        assert_eq!(f.value(1).dim(), 2);
        assert!(f.value(3).is_zero());
        let w = Filtration::increasing(
            2,
            vec![(0, span(2, &[&[1, 0]])), (1, Subspace::full(2))],
        )
        .unwrap();
        assert!(w.value(-1).is_zero());
        assert_eq!(w.value(0).dim(), 1);
        assert!(w.value(7).is_full());
    }

    #[test]
    fn canonicalization_drops_redundant_steps() {
        let a = Filtration::decreasing(
            2,
            vec![
                (-1, Subspace::full(2)),
                (0, Subspace::full(2)),
                (1, span(2, &[&[1, 0]])),
                (2, Subspace::zero(2)),
            ],
        )
        .unwrap();
        let b = Filtration::decreasing(
            2,
            vec![(0, Subspace::full(2)), (1, span(2, &[&[1, 0]]))],
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.jumps(), vec![0, 1]);
    }

    #[test]
    fn rejects_non_monotone() {
        let r = Filtration::decreasing(
            2,
            vec![(0, span(2, &[&[1, 0]])), (1, Subspace::full(2))],
        );
        assert!(r.is_err());
        // must start full
        let r = Filtration::decreasing(2, vec![(0, span(2, &[&[1, 0]]))]);
        assert!(r.is_err());
    }

    #[test]
    fn gr_profile_flag() {
        let f = flag3();
        assert_eq!(f.gr_profile(), vec![(0, 1), (1, 1), (2, 1)]);
        let one = Filtration::one_jump(Direction::Decreasing, 4, 5);
        assert_eq!(one.gr_profile(), vec![(5, 4)]);
    }

    #[test]
    fn gr_dims_match_rank_differences() {
        // independent oracle: dim Gr^n = rank(F^n) - rank(F^{n+1}) read off the
        // step matrices directly
        let f = flag3();
        for n in -1..4 {
            let oracle = f.value(n).basis().rank() - f.value(n + 1).basis().rank();
            assert_eq!(f.gr_dim(n), oracle);
        }
    }

    #[test]
    fn shift_laws() {
        let f = flag3();
        let shifted = f.shift(2);
        for p in -3..6 {
            assert_eq!(shifted.value(p), f.value(p + 2), "(F[n])^p = F^{{n+p}} at p={p}");
        }
        let w = f.flip_direction();
        let ws = w.shift(2);
        for p in -6..4 {
            assert_eq!(ws.value(p), w.value(p - 2), "(W[n])_p = W_{{p-n}} at p={p}");
        }
    }

    #[test]
    fn flip_direction_is_involutive_reindexing() {
        let f = flag3();
        let w = f.flip_direction();
        for p in -4..5 {
            assert_eq!(w.value(-p), f.value(p));
        }
        assert_eq!(w.flip_direction(), f);
    }

    #[test]
    fn induced_trivial_cases() {
        let f = flag3();
        let (sub, quot) = induced(&f, &Subspace::full(3)).unwrap();
        assert_eq!(sub.gr_profile(), f.gr_profile());
        assert_eq!(quot.ambient_dim(), 0);
        let (sub, quot) = induced(&f, &Subspace::zero(3)).unwrap();
        assert_eq!(sub.ambient_dim(), 0);
        assert_eq!(quot.gr_profile(), f.gr_profile());
    }

    #[test]
    fn induced_dimension_bookkeeping() {
        let f = flag3();
        let line = span(3, &[&[1, 1, 1]]);
        let (sub, quot) = induced(&f, &line).unwrap();
        for n in -1..4 {
            assert_eq!(
                sub.gr_dim(n) + quot.gr_dim(n),
                f.gr_dim(n),
                "graded dims add up at {n}"
            );
        }
    }

    #[test]
    fn strictness_identity_and_shifted() {
        let f = flag3();
        let id = FilteredMap::new(Mat::identity(3), f.clone(), f.clone()).unwrap();
        let (ok, w) = is_strict(&id).unwrap();
        assert!(ok && w.is_none());
        assert!(strictness_gr_criterion(&id).unwrap());

        // f: (Q, jump at 0) -> (Q, jump at 1), identity map: compatible, not strict.
        // Im ∩ F^1 = Q but f(F^1) = f(0) = 0.
        let src = Filtration::one_jump(Direction::Decreasing, 1, 0);
        let tgt = Filtration::one_jump(Direction::Decreasing, 1, 1);
        let m = FilteredMap::new(Mat::identity(1), src, tgt).unwrap();
        let (ok, w) = is_strict(&m).unwrap();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.index, 1);
        assert!(!w.vector.iter().all(Scalar::is_zero));
        assert!(!strictness_gr_criterion(&m).unwrap());
    }

    #[test]
    fn zassenhaus_table_complete_flag() {
        let f = flag3();
        let table = two_filtration_gr(&f, &f).unwrap();
        let expect: BigradedDims = [((0i64, 0i64), 1usize), ((1, 1), 1), ((2, 2), 1)].into();
        assert_eq!(table, expect);
    }

    #[test]
    fn zassenhaus_one_jump_reduces_to_gr() {
        let f = flag3();
        let triv = Filtration::one_jump(Direction::Decreasing, 3, 7);
        let table = two_filtration_gr(&triv, &f).unwrap();
        for ((m, _n), _) in &table {
            assert_eq!(*m, 7);
        }
        let dims: Vec<usize> = table.values().copied().collect();
        assert_eq!(dims, vec![1, 1, 1]);
    }

    #[test]
    fn opposite_bigraded_model() {
        // A = A^{1,0} ⊕ A^{0,1} in Q^2: F^1 = <e1>, G^1 = <e2>
        let f = Filtration::decreasing(
            2,
            vec![(0, Subspace::full(2)), (1, span(2, &[&[1, 0]]))],
        )
        .unwrap();
        let g = Filtration::decreasing(
            2,
            vec![(0, Subspace::full(2)), (1, span(2, &[&[0, 1]]))],
        )
        .unwrap();
        match check_n_opposite(&f, &g, 1).unwrap() {
            Opposedness::Opposite(pieces) => {
                assert_eq!(pieces.len(), 2);
                assert_eq!(pieces[&(1, 0)], span(2, &[&[1, 0]]));
                assert_eq!(pieces[&(0, 1)], span(2, &[&[0, 1]]));
            }
            Opposedness::Fails { .. } => panic!("should be 1-opposite"),
        }
        // misaligned one-jump filtrations are not opposite
        let t1 = Filtration::one_jump(Direction::Decreasing, 2, 0);
        match check_n_opposite(&t1, &t1, 1).unwrap() {
            Opposedness::Fails { p, q, .. } => assert_eq!((p, q), (0, 0)),
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn opposite_conjugate_weight_one() {
        // F^1 = span((i,1)): weight-1 Hodge pair, F and conj(F) are 1-opposite
        let v = vec![vec![Scalar::i(), Scalar::one()]];
        let f1 = Subspace::span_of_vec(2, v);
        let f = Filtration::decreasing(2, vec![(0, Subspace::full(2)), (1, f1.clone())]).unwrap();
        let g = f.conj();
        match check_n_opposite(&f, &g, 1).unwrap() {
            Opposedness::Opposite(pieces) => {
                assert_eq!(pieces[&(1, 0)], f1);
            }
            _ => panic!("expected 1-opposite"),
        }
    }

    #[test]
    fn opposite_recovers_f_from_pieces() {
        // F^p = ⊕_{p' >= p} A^{p', n-p'} as representation equality
        let v = vec![vec![Scalar::i(), Scalar::one()]];
        let f1 = Subspace::span_of_vec(2, v);
        let f = Filtration::decreasing(2, vec![(0, Subspace::full(2)), (1, f1)]).unwrap();
        let g = f.conj();
        let Opposedness::Opposite(pieces) = check_n_opposite(&f, &g, 1).unwrap() else {
            panic!("expected opposite");
        };
        for p in 0..2 {
            let mut sum = Subspace::zero(2);
            for (&(pp, _qq), a) in &pieces {
                if pp >= p {
                    sum = sum.sum(a).unwrap();
                }
            }
            assert_eq!(sum, f.value(p), "F^{p} recovered from pieces");
        }
    }

    #[test]
    fn serialization_round_trip() {
        let f = flag3();
        let json = serde_json::to_string(&f).unwrap();
        let back: Filtration = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
        assert!(json.contains("\"direction\":\"dec\""));
    }
}
