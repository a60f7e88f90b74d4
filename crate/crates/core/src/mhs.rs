//! Mixed Hodge structures: a rational increasing weight filtration W and a
//! complex decreasing Hodge filtration F on the complexification, such that F
//! induces a pure Hodge structure of weight n on every Gr^W_n.
//!
//! The module validates the defining axiom, computes the canonical bigraded
//! splitting
//!
//! ```text
//! I^{p,q} = (F^p ∩ W_{p+q}) ∩ (conj(F)^q ∩ W_{p+q} + Σ_{i>=1} conj(F)^{q-i} ∩ W_{p+q-i-1})
//! ```
//!
//! checks the splitting identities W_n = ⊕_{p+q<=n} I^{p,q} and
//! F^p = ⊕_{p'>=p} I^{p',q'}, and provides the abelian-category layer:
//! morphisms are automatically strict for W and F, kernels and cokernels
//! carry induced mixed Hodge structures, and tensor / Hom / Tate twist stay
//! inside the category.

use crate::error::{Error, Result};
use crate::filt::{
    hom_filtration, is_strict, tensor_filtration, Direction, FilteredMap, Filtration,
    StrictnessWitness,
};
use crate::hodge::HodgeStructure;
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::subspace::{Quotient, Subquotient, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq)]
pub struct MixedHodgeStructure {
    weight: Filtration,
    hodge: Filtration,
}

/// Validation output: for each weight n with Gr^W_n ≠ 0, the induced pure
/// Hodge structure on the graded piece together with its presentation.
pub struct WeightGradedReport {
    pub pieces: BTreeMap<i64, (Subquotient, HodgeStructure)>,
}

impl WeightGradedReport {
    pub fn weight_dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(&n, (sq, _))| (n, sq.dim())).collect()
    }
}

impl MixedHodgeStructure {
    pub fn new(weight: Filtration, hodge: Filtration) -> Result<Self> {
        if weight.direction() != Direction::Increasing {
            return Err(Error::InvalidInput("weight filtration must be increasing".into()));
        }
        if hodge.direction() != Direction::Decreasing {
            return Err(Error::InvalidInput("Hodge filtration must be decreasing".into()));
        }
        if weight.ambient_dim() != hodge.ambient_dim() {
            return Err(Error::AmbientMismatch(weight.ambient_dim(), hodge.ambient_dim()));
        }
        if !weight.is_rational() {
            return Err(Error::FiltrationNotRational);
        }
        Ok(MixedHodgeStructure { weight, hodge })
    }

    /// A pure Hodge structure of weight n seen as an MHS with the one-jump
    /// weight filtration.
    pub fn pure(h: &HodgeStructure) -> Self {
        MixedHodgeStructure {
            weight: Filtration::one_jump(Direction::Increasing, h.dim(), h.weight()),
            hodge: h.filtration().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.weight.ambient_dim()
    }

    pub fn weight_filtration(&self) -> &Filtration {
        &self.weight
    }

    pub fn hodge_filtration(&self) -> &Filtration {
        &self.hodge
    }

    /// Weight jumps with nonzero graded piece.
    pub fn weights(&self) -> Vec<i64> {
        self.weight.gr_profile().into_iter().map(|(n, _)| n).collect()
    }

    /// Builds Gr^W_n with the induced F
    /// F^p Gr^W_n = ((F^p ∩ W_n) + W_{n-1}) / W_{n-1}
    /// and packages it as a candidate Hodge structure of weight n.
    pub fn graded_piece(&self, n: i64) -> Result<(Subquotient, HodgeStructure)> {
        let sq = self.weight.gr(n);
        let dim = sq.dim();
        let mut steps = Vec::new();
        let jumps = self.hodge.jumps();
        let lo = jumps.first().copied().unwrap_or(0);
        let hi = jumps.last().copied().unwrap_or(0);
        for p in lo..=hi {
            let cut = self.hodge.value(p).intersect(sq.top())?;
            let lifted = cut.sum(sq.bottom())?;
            steps.push((p, sq.subspace_in_coords(&lifted)?));
        }
        if steps.is_empty() {
            steps.push((0, Subspace::full(dim)));
        }
        let f = Filtration::decreasing(dim, steps)?;
        Ok((sq, HodgeStructure::new(n, f)?))
    }

    /// The defining axiom: every Gr^W_n carries a pure HS of weight n.
    pub fn validate(&self) -> Result<WeightGradedReport> {
        let mut pieces = BTreeMap::new();
        for n in self.weights() {
            let (sq, hs) = self.graded_piece(n)?;
            hs.validate().map_err(|e| Error::InvalidMixedHodgeStructure {
                weight: n,
                source: Box::new(e),
            })?;
            pieces.insert(n, (sq, hs));
        }
        Ok(WeightGradedReport { pieces })
    }

    /// h^{p,q} = dim Gr^p_F Gr^q_{conj F} Gr^W_{p+q}.
    pub fn hodge_numbers(&self) -> Result<BTreeMap<(i64, i64), usize>> {
        let report = self.validate()?;
        let mut out = BTreeMap::new();
        for (_, (_, hs)) in report.pieces {
            for (k, d) in hs.hodge_numbers()? {
                *out.entry(k).or_insert(0) += d;
            }
        }
        Ok(out)
    }

    /// The canonical splitting; validates the structure first and asserts
    /// all three splitting identities plus the conjugation congruence
    /// I^{p,q} ≡ conj(I^{q,p}) mod W_{p+q-2}.
    pub fn deligne_splitting(&self) -> Result<DeligneSplitting> {
        let report = self.validate()?;
        let dim = self.dim();
        let f = &self.hodge;
        let fbar = self.hodge.conj();
        let w = &self.weight;
        let w_min = w.min_jump().unwrap_or(0);
        let w_jumps: Vec<i64> = report.pieces.keys().copied().collect();
        let f_jumps = f.jumps();
        let (p_lo, p_hi) = match (f_jumps.first(), f_jumps.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0, 0),
        };
        let mut pieces: BTreeMap<(i64, i64), Subspace> = BTreeMap::new();
        for &n in &w_jumps {
            for p in p_lo..=p_hi {
                let q = n - p;
                // correction series: conj(F)^q ∩ W_n + Σ_{i>=1} conj(F)^{q-i} ∩ W_{n-i-1},
                // truncated once W underflows its lowest jump
                let mut series = fbar.value(q).intersect(&w.value(n))?;
                let mut i = 1i64;
                while n - i - 1 >= w_min {
                    let term = fbar.value(q - i).intersect(&w.value(n - i - 1))?;
                    series = series.sum(&term)?;
                    i += 1;
                }
                let piece = f.value(p).intersect(&w.value(n))?.intersect(&series)?;
                if !piece.is_zero() {
                    pieces.insert((p, q), piece);
                }
            }
        }
        let splitting = DeligneSplitting { dim, pieces };
        splitting.check_weight_identity(w)?;
        splitting.check_hodge_identity(f)?;
        splitting.check_projection_iso(&report)?;
        splitting.check_conjugation_congruence(w)?;
        Ok(splitting)
    }

    /// Tensor product: W_r = Σ W_a ⊗ W'_b (a+b = r), F^r = Σ F^a ⊗ F'^b.
    pub fn tensor(&self, other: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
        self.validate()?;
        other.validate()?;
        let out = MixedHodgeStructure::new(
            tensor_filtration(&self.weight, &other.weight)?,
            tensor_filtration(&self.hodge, &other.hodge)?,
        )?;
        out.validate()?;
        Ok(out)
    }

    /// Internal Hom: W_r Hom = {f : f(W_n) ⊆ W_{n+r}}, F^r likewise.
    pub fn hom(&self, other: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
        self.validate()?;
        other.validate()?;
        let out = MixedHodgeStructure::new(
            hom_filtration(&self.weight, &other.weight)?,
            hom_filtration(&self.hodge, &other.hodge)?,
        )?;
        out.validate()?;
        Ok(out)
    }

    /// Tate twist H(m): W_r H(m) = W_{r+2m}, F^r H(m) = F^{r+m}.
    pub fn twist(&self, m: i64) -> Result<MixedHodgeStructure> {
        self.validate()?;
        let out = MixedHodgeStructure::new(self.weight.shift(-2 * m), self.hodge.shift(m))?;
        out.validate()?;
        Ok(out)
    }

    /// Block direct sum; self takes the first coordinates.
    pub fn direct_sum(&self, other: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
        let sum_filt = |a: &Filtration, b: &Filtration| -> Result<Filtration> {
            let n = a.ambient_dim() + b.ambient_dim();
            let mut idxs = a.jumps();
            idxs.extend(b.jumps());
            idxs.sort_unstable();
            idxs.dedup();
            let steps = idxs
                .into_iter()
                .map(|i| {
                    let left = a.value(i);
                    let right = b.value(i);
                    let mut rows: Vec<Vec<Scalar>> = Vec::new();
                    for r in left.basis().rows_iter() {
                        let mut v = r.to_vec();
                        v.extend(vec![Scalar::zero(); b.ambient_dim()]);
                        rows.push(v);
                    }
                    for r in right.basis().rows_iter() {
                        let mut v = vec![Scalar::zero(); a.ambient_dim()];
                        v.extend(r.to_vec());
                        rows.push(v);
                    }
                    (i, Subspace::span_of_vec(n, rows))
                })
                .collect();
            Filtration::new(a.direction(), n, steps)
        };
        MixedHodgeStructure::new(
            sum_filt(&self.weight, &other.weight)?,
            sum_filt(&self.hodge, &other.hodge)?,
        )
    }

    /// The zero structure.
    pub fn zero() -> Self {
        MixedHodgeStructure {
            weight: Filtration::one_jump(Direction::Increasing, 0, 0),
            hodge: Filtration::one_jump(Direction::Decreasing, 0, 0),
        }
    }
}

impl std::fmt::Debug for MixedHodgeStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MHS(dim {}, W {:?}, F {:?})", self.dim(), self.weight, self.hodge)
    }
}

#[derive(Serialize, Deserialize)]
struct MhsWire {
    dim: usize,
    #[serde(rename = "W")]
    w: Filtration,
    #[serde(rename = "F")]
    f: Filtration,
}

impl Serialize for MixedHodgeStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MhsWire { dim: self.dim(), w: self.weight.clone(), f: self.hodge.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MixedHodgeStructure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MhsWire::deserialize(deserializer)?;
        if wire.w.ambient_dim() != wire.dim {
            return Err(serde::de::Error::custom("dim field differs from W ambient"));
        }
        MixedHodgeStructure::new(wire.w, wire.f).map_err(serde::de::Error::custom)
    }
}

/// The bigraded pieces I^{p,q} of a validated MHS.
pub struct DeligneSplitting {
    dim: usize,
    pub pieces: BTreeMap<(i64, i64), Subspace>,
}

impl DeligneSplitting {
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces.iter().map(|(&k, s)| (k, s.dim())).collect()
    }

    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// W_n = ⊕_{p+q<=n} I^{p,q} as a representation equality, with directness.
    fn check_weight_identity(&self, w: &Filtration) -> Result<()> {
        let mut total = Subspace::zero(self.dim);
        let mut dim_sum = 0usize;
        for (_, s) in &self.pieces {
            total = total.sum(s)?;
            dim_sum += s.dim();
        }
        if !total.is_full() || dim_sum != self.dim {
            return Err(Error::Inconsistent("⊕ I^{p,q} is not a direct decomposition".into()));
        }
        for n in w.jumps() {
            let mut sum = Subspace::zero(self.dim);
            for (&(p, q), s) in &self.pieces {
                if p + q <= n {
                    sum = sum.sum(s)?;
                }
            }
            if sum != w.value(n) {
                return Err(Error::Inconsistent(format!(
                    "W_{n} != ⊕_{{p+q<={n}}} I^{{p,q}}"
                )));
            }
        }
        Ok(())
    }

    /// F^p = ⊕_{p'>=p} I^{p',q'} as a representation equality.
    fn check_hodge_identity(&self, f: &Filtration) -> Result<()> {
        for p in f.jumps() {
            let mut sum = Subspace::zero(self.dim);
            for (&(pp, _), s) in &self.pieces {
                if pp >= p {
                    sum = sum.sum(s)?;
                }
            }
            if sum != f.value(p) {
                return Err(Error::Inconsistent(format!("F^{p} != ⊕_{{p'>={p}}} I^{{p',q'}}")));
            }
        }
        Ok(())
    }

    /// The projection W_{p+q} -> Gr^W_{p+q} restricts to an isomorphism
    /// I^{p,q} ≅ H^{p,q}(Gr^W_{p+q}).
    fn check_projection_iso(&self, report: &WeightGradedReport) -> Result<()> {
        for (&(p, q), s) in &self.pieces {
            let n = p + q;
            let Some((sq, hs)) = report.pieces.get(&n) else {
                return Err(Error::Inconsistent(format!(
                    "I^{{{p},{q}}} nonzero but Gr^W_{n} = 0"
                )));
            };
            let dec = hs.validate()?;
            let expected = dec.piece(p, q);
            let image = sq.subspace_in_coords(&s.sum(sq.bottom())?)?;
            if image != expected || image.dim() != s.dim() {
                return Err(Error::Inconsistent(format!(
                    "projection I^{{{p},{q}}} -> H^{{{p},{q}}}(Gr^W_{n}) is not an isomorphism"
                )));
            }
        }
        Ok(())
    }

    /// I^{p,q} ≡ conj(I^{q,p}) modulo W_{p+q-2}.
    fn check_conjugation_congruence(&self, w: &Filtration) -> Result<()> {
        let mut keys: Vec<(i64, i64)> = self.pieces.keys().copied().collect();
        keys.extend(self.pieces.keys().map(|&(p, q)| (q, p)));
        keys.sort_unstable();
        keys.dedup();
        for (p, q) in keys {
            let low = w.value(p + q - 2);
            let lhs = self.piece(p, q).sum(&low)?;
            let rhs = self.piece(q, p).conj().sum(&low)?;
            if lhs != rhs {
                return Err(Error::Inconsistent(format!(
                    "I^{{{p},{q}}} ≢ conj(I^{{{q},{p}}}) mod W_{{{}}}",
                    p + q - 2
                )));
            }
        }
        Ok(())
    }

    /// True iff I^{p,q} = conj(I^{q,p}) on the nose (the split case).
    pub fn is_conjugation_symmetric(&self) -> bool {
        self.pieces
            .iter()
            .all(|(&(p, q), s)| self.piece(q, p).conj() == *s)
    }
}

/// A rational linear map compatible with W and (after complexification) F.
#[derive(Clone)]
pub struct MhsMorphism {
    map: Mat,
    source: MixedHodgeStructure,
    target: MixedHodgeStructure,
}

impl MhsMorphism {
    pub fn new(map: Mat, source: MixedHodgeStructure, target: MixedHodgeStructure) -> Result<Self> {
        if !map.is_real() {
            return Err(Error::InvalidInput("MHS morphisms are rational maps".into()));
        }
        // compatibility with both filtrations, checked at construction
        FilteredMap::new(map.clone(), source.weight.clone(), target.weight.clone())?;
        FilteredMap::new(map.clone(), source.hodge.clone(), target.hodge.clone())?;
        Ok(MhsMorphism { map, source, target })
    }

    pub fn map(&self) -> &Mat {
        &self.map
    }

    pub fn source(&self) -> &MixedHodgeStructure {
        &self.source
    }

    pub fn target(&self) -> &MixedHodgeStructure {
        &self.target
    }
}

/// Strictness report for both filtrations. For morphisms of valid MHS the
/// theorem guarantees strictness; a failure is surfaced as an
/// internal-consistency diagnostic rather than a boolean.
pub struct StrictnessReport {
    pub w_strict: bool,
    pub f_strict: bool,
    pub w_witness: Option<StrictnessWitness>,
    pub f_witness: Option<StrictnessWitness>,
}

impl StrictnessReport {
    pub fn is_strict(&self) -> bool {
        self.w_strict && self.f_strict
    }
}

pub fn morphism_strictness(f: &MhsMorphism) -> Result<StrictnessReport> {
    f.source.validate()?;
    f.target.validate()?;
    let wm = FilteredMap::new(
        f.map.clone(),
        f.source.weight.clone(),
        f.target.weight.clone(),
    )?;
    let (w_strict, w_witness) = is_strict(&wm)?;
    let fm = FilteredMap::new(f.map.clone(), f.source.hodge.clone(), f.target.hodge.clone())?;
    let (f_strict, f_witness) = is_strict(&fm)?;
    Ok(StrictnessReport { w_strict, f_strict, w_witness, f_witness })
}

/// Kernel and cokernel with their induced mixed Hodge structures, plus the
/// abelianness witness: the natural map coimage -> image is a filtered
/// isomorphism for both W and F.
pub struct KernelCokernel {
    pub kernel: MixedHodgeStructure,
    /// inclusion of the kernel into the source coordinates
    pub kernel_inclusion: Mat,
    pub cokernel: MixedHodgeStructure,
    /// projection of the target onto the cokernel coordinates
    pub cokernel_projection: Mat,
}

pub fn kernel_cokernel(f: &MhsMorphism) -> Result<KernelCokernel> {
    f.source.validate()?;
    f.target.validate()?;
    let ker = crate::subspace::kernel(&f.map)?;
    let kernel = MixedHodgeStructure::new(
        f.source.weight.induced_sub(&ker)?,
        f.source.hodge.induced_sub(&ker)?,
    )?;
    kernel.validate()?;
    let image = Subspace::full(f.source.dim()).image(&f.map)?;
    let q = Quotient::by(&image);
    let cokernel = MixedHodgeStructure::new(
        f.target.weight.induced_quotient(&q)?,
        f.target.hodge.induced_quotient(&q)?,
    )?;
    cokernel.validate()?;

    // abelianness witness: image ≅ coimage as bi-filtered objects
    let coim_q = Quotient::by(&ker);
    let coim_w = f.source.weight.induced_quotient(&coim_q)?;
    let coim_f = f.source.hodge.induced_quotient(&coim_q)?;
    let im_w = f.target.weight.induced_sub(&image)?;
    let im_f = f.target.hodge.induced_sub(&image)?;
    // the induced map coimage -> image: section into the source, apply f,
    // take coordinates in the image
    let mut rows = Vec::new();
    for j in 0..coim_q.dim() {
        let mut e = vec![Scalar::zero(); coim_q.dim()];
        e[j] = Scalar::one();
        let lifted = coim_q.section().apply(&e);
        let mapped = f.map.apply(&lifted);
        rows.push(image.coordinates(&mapped).ok_or_else(|| {
            Error::Inconsistent("image coordinates of mapped vector".into())
        })?);
    }
    let iso = if rows.is_empty() { Mat::zeros(0, image.dim()) } else { Mat::from_rows(rows) };
    if iso.rank() != image.dim() || coim_q.dim() != image.dim() {
        return Err(Error::Inconsistent("coimage -> image is not bijective".into()));
    }
    for (a, b) in [(&coim_w, &im_w), (&coim_f, &im_f)] {
        let mut idxs = a.jumps();
        idxs.extend(b.jumps());
        idxs.sort_unstable();
        idxs.dedup();
        for n in idxs {
            if a.value(n).image(&iso)? != b.value(n) {
                return Err(Error::Inconsistent(format!(
                    "coimage/image filtrations differ at index {n}"
                )));
            }
        }
    }

    Ok(KernelCokernel {
        kernel,
        kernel_inclusion: ker.basis().clone(),
        cokernel,
        cokernel_projection: q.proj().clone(),
    })
}

/// Gr-exactness: dim Gr^W_n(source) = dim Gr^W_n(ker) + dim Gr^W_n(im) for
/// every n, and the same for Gr_F (the functors Gr^W_n and Gr^p_F are exact).
pub fn gr_exactness_check(f: &MhsMorphism) -> Result<bool> {
    let kc = kernel_cokernel(f)?;
    let image = Subspace::full(f.source.dim()).image(&f.map)?;
    let im_w = f.target.weight.induced_sub(&image)?;
    let im_f = f.target.hodge.induced_sub(&image)?;
    for n in f.source.weight.jumps() {
        if f.source.weight.gr_dim(n)
            != kc.kernel.weight_filtration().gr_dim(n) + im_w.gr_dim(n)
        {
            return Ok(false);
        }
    }
    for p in f.source.hodge.jumps() {
        if f.source.hodge.gr_dim(p) != kc.kernel.hodge_filtration().gr_dim(p) + im_f.gr_dim(p) {
            return Ok(false);
        }
    }
    // dual count on the target side
    for n in f.target.weight.jumps() {
        if f.target.weight.gr_dim(n)
            != kc.cokernel.weight_filtration().gr_dim(n) + im_w.gr_dim(n)
        {
            return Ok(false);
        }
    }
    for p in f.target.hodge.jumps() {
        if f.target.hodge.gr_dim(p) != kc.cokernel.hodge_filtration().gr_dim(p) + im_f.gr_dim(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::weight_one_line;

    fn pure_weight1() -> MixedHodgeStructure {
        MixedHodgeStructure::pure(&weight_one_line(Scalar::i(), Scalar::one()))
    }

    /// Split punctured-curve style H^1 for (g, m) = (1, 2): dim 3,
    /// Gr^W_1 of dim 2 (elliptic block), Gr^W_2 of dim 1 (type (1,1)).
    fn punctured_torus_h1() -> MixedHodgeStructure {
        let w = Filtration::increasing(
            3,
            vec![
                (1, Subspace::from_rows(3, &Mat::from_int_rows(&[&[1, 0, 0], &[0, 1, 0]]))),
                (2, Subspace::full(3)),
            ],
        )
        .unwrap();
        let f1 = Subspace::span_of_vec(
            3,
            vec![
                vec![Scalar::i(), Scalar::one(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
            ],
        );
        let f = Filtration::decreasing(3, vec![(0, Subspace::full(3)), (1, f1)]).unwrap();
        MixedHodgeStructure::new(w, f).unwrap()
    }

    #[test]
    fn pure_structure_packages_as_mhs() {
        let m = pure_weight1();
        let rep = m.validate().unwrap();
        assert_eq!(rep.weight_dims(), [(1i64, 2usize)].into());
        assert_eq!(
            m.hodge_numbers().unwrap(),
            [((1i64, 0i64), 1usize), ((0, 1), 1)].into()
        );
    }

    #[test]
    fn direct_sum_of_pures_validates() {
        let a = pure_weight1();
        let b = MixedHodgeStructure::pure(&HodgeStructure::tate(-1));
        let s = a.direct_sum(&b).unwrap();
        let rep = s.validate().unwrap();
        assert_eq!(rep.weight_dims(), [(1i64, 2usize), (2, 1)].into());
    }

    #[test]
    fn invalid_when_f_misaligned() {
        // weight says pure of weight 1 on a 2-dim space, but F is real
        let w = Filtration::one_jump(Direction::Increasing, 2, 1);
        let f1 = Subspace::from_rows(2, &Mat::from_int_rows(&[&[1, 1]]));
        let f = Filtration::decreasing(2, vec![(0, Subspace::full(2)), (1, f1)]).unwrap();
        let m = MixedHodgeStructure::new(w, f).unwrap();
        let Err(err) = m.validate() else { panic!("expected invalid MHS") };
        assert!(matches!(err, Error::InvalidMixedHodgeStructure { weight: 1, .. }));
    }

    #[test]
    fn splitting_of_pure_is_the_bigrading() {
        let m = pure_weight1();
        let s = m.deligne_splitting().unwrap();
        assert_eq!(s.dims(), [((1i64, 0i64), 1usize), ((0, 1), 1)].into());
        assert!(s.is_conjugation_symmetric());
    }

    #[test]
    fn splitting_of_punctured_torus() {
        let m = punctured_torus_h1();
        let s = m.deligne_splitting().unwrap();
        assert_eq!(
            s.dims(),
            [((1i64, 0i64), 1usize), ((0, 1), 1), ((1, 1), 1)].into()
        );
        assert_eq!(
            m.hodge_numbers().unwrap(),
            [((1i64, 0i64), 1usize), ((0, 1), 1), ((1, 1), 1)].into()
        );
    }

    #[test]
    fn hodge_number_symmetry() {
        let m = punctured_torus_h1();
        let nums = m.hodge_numbers().unwrap();
        for (&(p, q), &d) in &nums {
            assert_eq!(nums.get(&(q, p)), Some(&d), "h^{{{p},{q}}} = h^{{{q},{p}}}");
        }
    }

    #[test]
    fn twist_shifts_hodge_numbers_diagonally() {
        let m = punctured_torus_h1();
        let t = m.twist(1).unwrap();
        let orig = m.hodge_numbers().unwrap();
        let twisted = t.hodge_numbers().unwrap();
        for (&(p, q), &d) in &twisted {
            assert_eq!(orig.get(&(p + 1, q + 1)), Some(&d));
        }
    }

    #[test]
    fn tensor_with_unit_is_identity_on_numbers() {
        let m = punctured_torus_h1();
        let unit = MixedHodgeStructure::pure(&HodgeStructure::tate(0));
        let t = m.tensor(&unit).unwrap();
        assert_eq!(t.hodge_numbers().unwrap(), m.hodge_numbers().unwrap());
    }

    #[test]
    fn kuenneth_weight_convolution() {
        let m = punctured_torus_h1();
        let t = m.tensor(&m).unwrap();
        // weight-graded dims of the tensor = convolution of weight dims
        let dims = |x: &MixedHodgeStructure| -> BTreeMap<i64, usize> {
            x.validate().unwrap().weight_dims()
        };
        let a = dims(&m);
        let product = dims(&t);
        let mut conv: BTreeMap<i64, usize> = BTreeMap::new();
        for (&n1, &d1) in &a {
            for (&n2, &d2) in &a {
                *conv.entry(n1 + n2).or_insert(0) += d1 * d2;
            }
        }
        assert_eq!(product, conv);
    }

    #[test]
    fn hom_contains_identity_and_weights_subtract() {
        let m = pure_weight1();
        let h = m.hom(&m).unwrap();
        assert_eq!(h.dim(), 4);
        // identity endomorphism sits in W_0 ∩ F^0
        let id_vec: Vec<Scalar> = (0..4)
            .map(|i| if i % 3 == 0 { Scalar::one() } else { Scalar::zero() })
            .collect();
        assert!(h.weight_filtration().value(0).contains_vector(&id_vec));
        assert!(h.hodge_filtration().value(0).contains_vector(&id_vec));
    }

    #[test]
    fn identity_morphism_strict() {
        let m = punctured_torus_h1();
        let f = MhsMorphism::new(Mat::identity(3), m.clone(), m.clone()).unwrap();
        let rep = morphism_strictness(&f).unwrap();
        assert!(rep.is_strict());
        assert!(gr_exactness_check(&f).unwrap());
    }

    #[test]
    fn projection_from_direct_sum_strict() {
        let a = pure_weight1();
        let b = MixedHodgeStructure::pure(&HodgeStructure::tate(-1));
        let s = a.direct_sum(&b).unwrap();
        // projection onto the second factor
        let proj = Mat::from_int_rows(&[&[0], &[0], &[1]]);
        let f = MhsMorphism::new(proj, s, b).unwrap();
        let rep = morphism_strictness(&f).unwrap();
        assert!(rep.is_strict());
        let kc = kernel_cokernel(&f).unwrap();
        assert_eq!(kc.kernel.dim(), 2);
        assert_eq!(kc.cokernel.dim(), 0);
    }

    #[test]
    fn weight_gap_forces_zero_morphism() {
        // compatible maps between pure structures of different weights are 0:
        // any nonzero map fails either W or F compatibility
        let a = MixedHodgeStructure::pure(&HodgeStructure::tate(0)); // weight 0
        let b = MixedHodgeStructure::pure(&HodgeStructure::tate(-1)); // weight 2
        // the only compatible map is zero: f(W_0 a) ⊆ W_0 b = 0
        assert!(MhsMorphism::new(Mat::identity(1), a.clone(), b.clone()).is_err());
        let zero = MhsMorphism::new(Mat::zeros(1, 1), a, b).unwrap();
        assert!(morphism_strictness(&zero).unwrap().is_strict());
    }

    #[test]
    fn kernel_cokernel_of_zero_and_identity() {
        let m = punctured_torus_h1();
        let zero = MhsMorphism::new(Mat::zeros(3, 3), m.clone(), m.clone()).unwrap();
        let kc = kernel_cokernel(&zero).unwrap();
        assert_eq!(kc.kernel.dim(), 3);
        assert_eq!(kc.cokernel.dim(), 3);
        assert_eq!(kc.kernel.hodge_numbers().unwrap(), m.hodge_numbers().unwrap());
        assert_eq!(kc.cokernel.hodge_numbers().unwrap(), m.hodge_numbers().unwrap());

        let id = MhsMorphism::new(Mat::identity(3), m.clone(), m.clone()).unwrap();
        let kc = kernel_cokernel(&id).unwrap();
        assert_eq!(kc.kernel.dim(), 0);
        assert_eq!(kc.cokernel.dim(), 0);
    }

    #[test]
    fn serialization_round_trip() {
        let m = punctured_torus_h1();
        let json = serde_json::to_string(&m).unwrap();
        let back: MixedHodgeStructure = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }
}
