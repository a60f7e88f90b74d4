//! Pure Hodge structures: validation via opposed filtrations, the Weil
//! operator, tensor/Hom/Tate-twist constructions, polarizations
//! (Hodge-Riemann positivity) and Lefschetz packages, plus the period-matrix
//! Riemann relations.
//!
//! A Hodge structure of weight n lives on a rational coordinate space Q^d;
//! its complexification is Q(i)^d with entry-wise conjugation, and the Hodge
//! filtration F is a decreasing filtration there. Validity means F and its
//! conjugate are n-opposite; the bigrading is always recomputed from F, never
//! cached.

use crate::error::{Error, Result};
use crate::filt::{check_n_opposite, two_filtration_gr, Direction, Filtration, Opposedness};
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HodgeStructure {
    weight: i64,
    filt: Filtration,
}

/// The bigrading H^{p,q} = F^p ∩ conj(F)^q of a valid Hodge structure.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub weight: i64,
    pub pieces: BTreeMap<(i64, i64), Subspace>,
}

impl HodgeDecomposition {
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces
            .iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(&k, s)| (k, s.dim()))
            .collect()
    }

    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        let dim = self.pieces.values().next().map_or(0, |s| s.ambient_dim());
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(dim))
    }
}

impl HodgeStructure {
    /// Wraps (weight, F) without validating; run [`HodgeStructure::validate`]
    /// to obtain the bigrading or a diagnostic.
    pub fn new(weight: i64, filt: Filtration) -> Result<Self> {
        if !filt.is_decreasing() {
            return Err(Error::InvalidInput("Hodge filtration must be decreasing".into()));
        }
        Ok(HodgeStructure { weight, filt })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.filt.ambient_dim()
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filt
    }

    /// Rank-1 pure type (-m,-m): the Tate structure Z(m), weight -2m.
    pub fn tate(m: i64) -> Self {
        HodgeStructure {
            weight: -2 * m,
            filt: Filtration::one_jump(Direction::Decreasing, 1, -m),
        }
    }

    /// Pure type (p, q) structure of the given rank (weight p + q, rational
    /// structure only meaningful when p = q or when paired with its mirror;
    /// used for building block fixtures).
    pub fn pure_type(p: i64, q: i64, rank: usize) -> Self {
        HodgeStructure {
            weight: p + q,
            filt: Filtration::one_jump(Direction::Decreasing, rank, p),
        }
    }

    /// Checks [HS2]: H^{p,q} = F^p ∩ conj(F)^q for p + q = n decompose the
    /// space with conj(H^{p,q}) = H^{q,p}.
    pub fn validate(&self) -> Result<HodgeDecomposition> {
        let conj = self.filt.conj();
        match check_n_opposite(&self.filt, &conj, self.weight)? {
            Opposedness::Fails { p, q, dim } => Err(Error::NotOpposite { p, q, dim }),
            Opposedness::Opposite(raw) => {
                let mut pieces = BTreeMap::new();
                for ((p, q), s) in raw {
                    pieces.insert((p, q), s);
                }
                // conj symmetry is part of validity and is a representation check
                for (&(p, q), s) in &pieces {
                    let mirror = pieces
                        .get(&(q, p))
                        .cloned()
                        .unwrap_or_else(|| Subspace::zero(self.dim()));
                    if s.conj() != mirror {
                        return Err(Error::InvalidHodgeStructure {
                            p,
                            q,
                            reason: "conj(H^{p,q}) differs from H^{q,p}".into(),
                        });
                    }
                }
                Ok(HodgeDecomposition { weight: self.weight, pieces })
            }
        }
    }

    pub fn hodge_numbers(&self) -> Result<BTreeMap<(i64, i64), usize>> {
        Ok(self.validate()?.hodge_numbers())
    }

    /// The Weil operator C acting by i^{p-q} on H^{p,q}, as a matrix on the
    /// coordinate space. C is real (conj-invariant entries) and C^2 = (-1)^n.
    pub fn weil_operator(&self) -> Result<Mat> {
        let dec = self.validate()?;
        let d = self.dim();
        let mut basis_rows: Vec<Vec<Scalar>> = Vec::with_capacity(d);
        let mut eigen: Vec<Scalar> = Vec::with_capacity(d);
        for (&(p, q), s) in &dec.pieces {
            for row in s.basis().rows_iter() {
                basis_rows.push(row.to_vec());
                eigen.push(Scalar::i_pow(p - q));
            }
        }
        let pmat = Mat::from_rows(basis_rows);
        let pinv = pmat.inverse().ok_or_else(|| {
            Error::Inconsistent("bigrading basis is not invertible".into())
        })?;
        let diag = Mat::from_fn(d, d, |r, c| if r == c { eigen[r].clone() } else { Scalar::zero() });
        // row-vector convention: v = c·P with c the piece coordinates, so
        // C = P^{-1} D P sends v to the i^{p-q}-scaled combination
        let c = &(&pinv * &diag) * &pmat;
        if c.conj() != c {
            return Err(Error::Inconsistent("Weil operator is not real".into()));
        }
        let c2 = &c * &c;
        let sign = if self.weight.rem_euclid(2) == 0 { 1 } else { -1 };
        let expect = Mat::identity(d).scale(&Scalar::from_int(sign));
        if c2 != expect {
            return Err(Error::Inconsistent("C^2 != (-1)^n".into()));
        }
        Ok(c)
    }
}

#[derive(Serialize, Deserialize)]
struct HsWire {
    weight: i64,
    dim: usize,
    #[serde(rename = "F")]
    f: Filtration,
}

impl Serialize for HodgeStructure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HsWire { weight: self.weight, dim: self.dim(), f: self.filt.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HodgeStructure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = HsWire::deserialize(deserializer)?;
        if wire.f.ambient_dim() != wire.dim {
            return Err(serde::de::Error::custom("dim field differs from filtration ambient"));
        }
        HodgeStructure::new(wire.weight, wire.f).map_err(serde::de::Error::custom)
    }
}

use crate::filt::{hom_filtration, tensor_filtration};

/// Tensor product of Hodge structures; weights add.
pub fn hs_tensor(a: &HodgeStructure, b: &HodgeStructure) -> Result<HodgeStructure> {
    a.validate()?;
    b.validate()?;
    let out = HodgeStructure::new(a.weight() + b.weight(), tensor_filtration(a.filtration(), b.filtration())?)?;
    out.validate()?;
    Ok(out)
}

/// Hom(A, B) as a Hodge structure of weight weight(B) - weight(A).
pub fn hs_hom(a: &HodgeStructure, b: &HodgeStructure) -> Result<HodgeStructure> {
    a.validate()?;
    b.validate()?;
    let out = HodgeStructure::new(b.weight() - a.weight(), hom_filtration(a.filtration(), b.filtration())?)?;
    out.validate()?;
    Ok(out)
}

/// Tate twist H(m): weight n - 2m, H(m)^{p,q} = H^{p+m,q+m}, F^p H(m) = F^{p+m}.
pub fn tate_twist(h: &HodgeStructure, m: i64) -> Result<HodgeStructure> {
    h.validate()?;
    let out = HodgeStructure::new(h.weight() - 2 * m, h.filtration().shift(m))?;
    out.validate()?;
    Ok(out)
}

/// A rational bilinear form with the parity of the weight: ᵀQ = (-1)^n Q,
/// nondegenerate. The pairing convention is Q(α, β) = β·Q·ᵀα on row vectors.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub q: Mat,
}

/// Outcome of a polarization check.
#[derive(Clone, Debug)]
pub struct PolarizationReport {
    pub orthogonal: bool,
    /// (p, q) blocks where i^{p-q} Q(·, conj ·) fails positive definiteness.
    pub positivity_failures: Vec<(i64, i64)>,
    /// Signature (n_plus, n_minus) of Q for even weight.
    pub signature: Option<(usize, usize)>,
}

impl PolarizationReport {
    pub fn is_polarization(&self) -> bool {
        self.orthogonal && self.positivity_failures.is_empty()
    }
}

/// Checks the two Hodge-Riemann conditions for (H, Q): the pairing
/// F(α,β) = Q(α, conj β) is block-diagonal on the bigrading, and
/// i^{p-q} Q(α, conj α) is positive definite on each H^{p,q}.
pub fn check_polarization(h: &HodgeStructure, pol: &Polarization) -> Result<PolarizationReport> {
    let dec = h.validate()?;
    let d = h.dim();
    let q = &pol.q;
    if q.rows() != d || q.cols() != d {
        return Err(Error::MapShape { expected_rows: d, expected_cols: d, rows: q.rows(), cols: q.cols() });
    }
    if !q.is_real() {
        return Err(Error::InvalidInput("polarization form must be rational".into()));
    }
    let sign = if h.weight().rem_euclid(2) == 0 { 1 } else { -1 };
    if q.transpose() != q.scale(&Scalar::from_int(sign)) {
        return Err(Error::PolarizationParity { weight: h.weight() });
    }
    if q.det().is_zero() {
        return Err(Error::DegeneratePolarization);
    }
    // orthogonality of distinct pieces under the sesquilinear pairing
    let mut orthogonal = true;
    let keys: Vec<(i64, i64)> = dec.pieces.keys().copied().collect();
    for &(p1, q1) in &keys {
        for &(p2, q2) in &keys {
            if (p1, q1) == (p2, q2) {
                continue;
            }
            let a = dec.piece(p1, q1);
            let b = dec.piece(p2, q2);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            // Q(α, conj β) for α in A, β in B: conj(B) Q ᵀA
            let block = &(&b.basis().conj() * q) * &a.basis().transpose();
            if !block.is_zero() {
                orthogonal = false;
            }
        }
    }
    // positivity on each piece
    let mut positivity_failures = Vec::new();
    for (&(p, qq), s) in &dec.pieces {
        if s.is_zero() {
            continue;
        }
        let gram = (&(&s.basis().conj() * q) * &s.basis().transpose()).scale(&Scalar::i_pow(p - qq));
        if !(gram.hermitian_posdef()?) {
            positivity_failures.push((p, qq));
        }
    }
    let signature = if h.weight().rem_euclid(2) == 0 {
        let (plus, minus, _zero) = q.symmetric_signature()?;
        Some((plus, minus))
    } else {
        None
    };
    Ok(PolarizationReport { orthogonal, positivity_failures, signature })
}

/// Graded cohomology data with a Lefschetz operator: spaces H^0..H^{2n}, each
/// a Hodge structure of weight k, and maps L: H^k -> H^{k+2} of bidegree (1,1).
#[derive(Clone)]
pub struct LefschetzPackage {
    /// complex dimension n; degrees run 0..=2n
    pub n_dim: usize,
    pub graded: Vec<HodgeStructure>,
    /// maps[k]: H^k -> H^{k+2} for k = 0..2n-2
    pub maps: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct LefschetzReport {
    /// degrees i where L^i: H^{n-i} -> H^{n+i} fails to be an isomorphism
    pub hard_lefschetz_failures: Vec<usize>,
    /// primitive subspace per degree q <= n (of H^q's coordinate space)
    pub primitive: BTreeMap<usize, Subspace>,
    /// whether H^q = ⊕_r L^r Prim^{q-2r} held in every degree
    pub decomposition_ok: bool,
    /// [Λ, L] = h check, when Λ was supplied
    pub sl2_ok: Option<bool>,
}

impl LefschetzPackage {
    fn dim_of(&self, k: usize) -> usize {
        self.graded.get(k).map_or(0, |h| h.dim())
    }

    fn map_from(&self, k: usize) -> Mat {
        if k + 2 > 2 * self.n_dim {
            return Mat::zeros(self.dim_of(k), 0);
        }
        self.maps.get(k).cloned().unwrap_or_else(|| Mat::zeros(self.dim_of(k), self.dim_of(k + 2)))
    }

    /// Composite L^j starting at degree k.
    fn iterate(&self, k: usize, j: usize) -> Mat {
        let mut m = Mat::identity(self.dim_of(k));
        let mut deg = k;
        for _ in 0..j {
            m = &m * &self.map_from(deg);
            deg += 2;
        }
        m
    }

    /// Verifies L is a morphism of bidegree (1,1) on the bigradings.
    pub fn check_types(&self) -> Result<()> {
        for k in 0..self.graded.len() {
            if self.graded[k].weight() != k as i64 {
                return Err(Error::InvalidInput(format!("H^{k} must have weight {k}")));
            }
        }
        for k in 0..=2 * self.n_dim.saturating_sub(1) {
            if k + 2 > 2 * self.n_dim {
                break;
            }
            let l = self.map_from(k);
            if l.cols() == 0 {
                continue;
            }
            let src = self.graded[k].validate()?;
            let tgt = self.graded[k + 2].validate()?;
            for (&(p, q), s) in &src.pieces {
                let img = s.image(&l)?;
                if !tgt.piece(p + 1, q + 1).contains(&img) {
                    return Err(Error::InvalidInput(format!(
                        "L is not of type (1,1) on H^{{{p},{q}}} ⊂ H^{k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Hard Lefschetz verification, primitive decomposition, optional sl2 check.
    pub fn decompose(&self, lambda: Option<&[Mat]>) -> Result<LefschetzReport> {
        self.check_types()?;
        let n = self.n_dim;
        let mut hard_lefschetz_failures = Vec::new();
        for i in 1..=n {
            let li = self.iterate(n - i, i);
            let iso = li.rank() == self.dim_of(n - i) && self.dim_of(n - i) == self.dim_of(n + i);
            if !iso {
                hard_lefschetz_failures.push(i);
            }
        }
        // primitive pieces: Prim^q = Ker(L^{n-q+1}: H^q -> H^{2n-q+2}), q <= n
        let mut primitive = BTreeMap::new();
        for q in 0..=n {
            let power = n - q + 1;
            let lp = self.iterate(q, power);
            let ker = crate::subspace::kernel(&lp)?;
            primitive.insert(q, ker);
        }
        // decomposition H^q = ⊕_r L^r Prim^{q-2r} for all q = 0..2n
        let mut decomposition_ok = true;
        for q in 0..=2 * n {
            let mut sum = Subspace::zero(self.dim_of(q));
            let mut direct = true;
            let mut r = if q > n { (q - n).div_ceil(1) } else { 0 };
            // smallest r with q - 2r <= n
            while 2 * r < q.max(1) + 1 {
                let base = q as i64 - 2 * r as i64;
                if base < 0 {
                    break;
                }
                let base = base as usize;
                if base <= n {
                    if let Some(prim) = primitive.get(&base) {
                        let img = prim.image(&self.iterate(base, r))?;
                        if !sum.intersect(&img)?.is_zero() {
                            direct = false;
                        }
                        sum = sum.sum(&img)?;
                    }
                }
                r += 1;
            }
            if !(direct && sum.is_full()) {
                decomposition_ok = false;
            }
        }
        // optional sl2 relation [Λ, L] = h with h = (n - k)·id on H^k
        let sl2_ok = match lambda {
            None => None,
            Some(lams) => {
                let mut ok = true;
                for k in 0..=2 * n {
                    let d = self.dim_of(k);
                    if d == 0 {
                        continue;
                    }
                    // lams[j] is Λ: H^{j+2} -> H^j. Row convention composes
                    // left to right, so (ΛL)(x) = Λ(Lx) is L_k · Λ_{k+2->k}.
                    let lambda_l = if k + 2 <= 2 * n {
                        let lam_down = lams
                            .get(k)
                            .cloned()
                            .unwrap_or_else(|| Mat::zeros(self.dim_of(k + 2), d));
                        &self.map_from(k) * &lam_down
                    } else {
                        Mat::zeros(d, d)
                    };
                    let l_lambda = if k >= 2 {
                        let lam_k = lams
                            .get(k - 2)
                            .cloned()
                            .unwrap_or_else(|| Mat::zeros(d, self.dim_of(k - 2)));
                        &lam_k * &self.map_from(k - 2)
                    } else {
                        Mat::zeros(d, d)
                    };
                    let bracket = &lambda_l - &l_lambda;
                    let wanted = Mat::identity(d).scale(&Scalar::from_int(n as i64 - k as i64));
                    if bracket != wanted {
                        ok = false;
                    }
                }
                Some(ok)
            }
        };
        Ok(LefschetzReport { hard_lefschetz_failures, primitive, decomposition_ok, sl2_ok })
    }
}

/// Riemann bilinear relations for a g x g period-matrix pair: the first
/// relation ᵀM1·M2 - ᵀM2·M1 = 0 and positive definiteness of
/// i(ᵀconj(M1)·M2 - ᵀconj(M2)·M1).
#[derive(Clone, Debug)]
pub struct RiemannReport {
    pub first_relation: bool,
    pub positive: bool,
}

pub fn riemann_relations(m1: &Mat, m2: &Mat) -> Result<RiemannReport> {
    if !m1.is_square() || !m2.is_square() || m1.rows() != m2.rows() {
        return Err(Error::InvalidInput("period matrices must be square of equal size".into()));
    }
    let first = &(&m1.transpose() * m2) - &(&m2.transpose() * m1);
    let first_relation = first.is_zero();
    let herm = (&(&m1.adjoint() * m2) - &(&m2.adjoint() * m1)).scale(&Scalar::i());
    let positive = if herm.is_hermitian() { herm.hermitian_posdef()? } else { false };
    Ok(RiemannReport { first_relation, positive })
}

/// Convenience: the weight-1 dim-2 structure with F^1 spanned by (v1, v2).
pub fn weight_one_line(v1: Scalar, v2: Scalar) -> HodgeStructure {
    let f1 = Subspace::span_of_vec(2, vec![vec![v1, v2]]);
    let f = Filtration::decreasing(2, vec![(0, Subspace::full(2)), (1, f1)]).unwrap();
    HodgeStructure::new(1, f).unwrap()
}

/// dim F^p = Σ_{p' >= p} h^{p', n-p'}; checked for all p.
pub fn dims_match_hodge_numbers(h: &HodgeStructure) -> Result<bool> {
    let nums = h.hodge_numbers()?;
    for &(p, _) in nums.keys() {
        let expect: usize = nums.iter().filter(|(&(pp, _), _)| pp >= p).map(|(_, &d)| d).sum();
        if h.filtration().value(p).dim() != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

pub use crate::filt::BigradedDims;

/// dim Gr^p_F Gr^q_{conj F} table of a (possibly invalid) pair, for diagnostics.
pub fn opposedness_table(h: &HodgeStructure) -> Result<BigradedDims> {
    two_filtration_gr(h.filtration(), &h.filtration().conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tate_structure_is_pure_minus_m_minus_m() {
        let z1 = HodgeStructure::tate(1);
        assert_eq!(z1.weight(), -2);
        let dec = z1.validate().unwrap();
        assert_eq!(dec.hodge_numbers(), [((-1i64, -1i64), 1usize)].into());
    }

    #[test]
    fn weight_one_valid_and_invalid() {
        let good = weight_one_line(Scalar::i(), Scalar::one());
        let nums = good.hodge_numbers().unwrap();
        assert_eq!(nums, [((1i64, 0i64), 1usize), ((0, 1), 1)].into());
        assert!(dims_match_hodge_numbers(&good).unwrap());

        // real vector: F^1 self-conjugate, F^1 ∩ conj(F^1) ≠ 0
        let bad = weight_one_line(Scalar::one(), Scalar::one());
        assert!(bad.validate().is_err());
    }

    #[test]
    fn weil_operator_squares() {
        let h = weight_one_line(Scalar::i(), Scalar::one());
        let c = h.weil_operator().unwrap();
        assert_eq!(&c * &c, Mat::identity(2).scale(&Scalar::from_int(-1)));
        assert!(c.is_real());

        // pure (p,p): C = id
        let t = HodgeStructure::tate(-2);
        assert_eq!(t.weil_operator().unwrap(), Mat::identity(1));
    }

    #[test]
    fn weil_operator_weight_two_eigenvalues() {
        // h^{2,0} = h^{0,2} = 1 (conjugate pair), h^{1,1} = 1
        let v20 = vec![vec![Scalar::one(), Scalar::i(), Scalar::zero()]];
        let f2 = Subspace::span_of_vec(3, v20);
        let f1 = f2
            .sum(&Subspace::span_of_vec(3, vec![vec![Scalar::zero(), Scalar::zero(), Scalar::one()]]))
            .unwrap();
        let f = Filtration::decreasing(
            3,
            vec![(0, Subspace::full(3)), (1, f1), (2, f2.clone())],
        )
        .unwrap();
        let h = HodgeStructure::new(2, f).unwrap();
        let dec = h.validate().unwrap();
        assert_eq!(dec.hodge_numbers(), [((2i64, 0i64), 1usize), ((1, 1), 1), ((0, 2), 1)].into());
        let c = h.weil_operator().unwrap();
        assert!(c.is_real());
        // eigenvalues: -1 on (2,0) and (0,2), +1 on (1,1)
        let on_20 = f2.basis().row_vec(0);
        assert_eq!(c.apply(&on_20), Mat::from_rows(vec![on_20.clone()]).scale(&Scalar::from_int(-1)).row_vec(0));
        assert_eq!(&c * &c, Mat::identity(3));
    }

    #[test]
    fn tensor_hom_twist() {
        let h = weight_one_line(Scalar::i(), Scalar::one());
        let unit = HodgeStructure::tate(0);
        let t = hs_tensor(&h, &unit).unwrap();
        assert_eq!(t.weight(), 1);
        assert_eq!(t.hodge_numbers().unwrap(), h.hodge_numbers().unwrap());

        // Z(1)^{⊗ m} = Z(m)
        let mut acc = HodgeStructure::tate(1);
        for _ in 1..3 {
            acc = hs_tensor(&acc, &HodgeStructure::tate(1)).unwrap();
        }
        assert_eq!(acc.weight(), -6);
        assert_eq!(acc.hodge_numbers().unwrap(), [((-3i64, -3i64), 1usize)].into());

        // hom(H, H) has weight 0 and contains the identity in type (0,0)
        let e = hs_hom(&h, &h).unwrap();
        assert_eq!(e.weight(), 0);
        let dec = e.validate().unwrap();
        let id_vec: Vec<Scalar> = (0..4)
            .map(|i| if i % 3 == 0 { Scalar::one() } else { Scalar::zero() })
            .collect();
        assert!(dec.piece(0, 0).contains_vector(&id_vec));

        // twist shifts the bigrading diagonally
        let tw = tate_twist(&h, 1).unwrap();
        assert_eq!(tw.weight(), -1);
        assert_eq!(tw.hodge_numbers().unwrap(), [((0i64, -1i64), 1usize), ((-1, 0), 1)].into());
    }

    #[test]
    fn polarization_weight_one() {
        let q = Polarization { q: Mat::from_int_rows(&[&[0, 1], &[-1, 0]]) };
        let good = weight_one_line(Scalar::i(), Scalar::one());
        let rep = check_polarization(&good, &q).unwrap();
        assert!(rep.is_polarization());

        // τ = -i fails positivity
        let bad = weight_one_line(-Scalar::i(), Scalar::one());
        let rep = check_polarization(&bad, &q).unwrap();
        assert!(rep.orthogonal);
        assert_eq!(rep.positivity_failures, vec![(0, 1), (1, 0)]);

        // symmetric Q has the wrong parity for weight 1
        let wrong = Polarization { q: Mat::identity(2) };
        assert!(matches!(check_polarization(&good, &wrong), Err(Error::PolarizationParity { .. })));
    }

    #[test]
    fn riemann_relations_examples() {
        // g = 1: M1 = (i), M2 = (1)
        let m1 = Mat::from_fn(1, 1, |_, _| Scalar::i());
        let m2 = Mat::identity(1);
        let rep = riemann_relations(&m1, &m2).unwrap();
        assert!(rep.first_relation && rep.positive);

        // M1 = M2 = (1): first holds, positivity fails
        let rep = riemann_relations(&Mat::identity(1), &Mat::identity(1)).unwrap();
        assert!(rep.first_relation && !rep.positive);

        // g = 2, Z = iI
        let m1 = Mat::identity(2).scale(&Scalar::i());
        let rep = riemann_relations(&m1, &Mat::identity(2)).unwrap();
        assert!(rep.first_relation && rep.positive);
    }

    #[test]
    fn lefschetz_p2_and_torus() {
        // P^2: H^0, H^2, H^4 of rank 1, L = identity
        let p2 = LefschetzPackage {
            n_dim: 2,
            graded: vec![
                HodgeStructure::tate(0),
                HodgeStructure::pure_type(0, 1, 0), // H^1 = 0
                HodgeStructure::pure_type(1, 1, 1),
                HodgeStructure::pure_type(1, 2, 0), // H^3 = 0
                HodgeStructure::pure_type(2, 2, 1),
            ],
            maps: vec![Mat::identity(1), Mat::zeros(0, 0), Mat::identity(1)],
        };
        let rep = p2.decompose(None).unwrap();
        assert!(rep.hard_lefschetz_failures.is_empty());
        assert!(rep.decomposition_ok);
        assert_eq!(rep.primitive[&0].dim(), 1);
        assert_eq!(rep.primitive[&2].dim(), 0);

        // torus of dim 1: H^0, H^1, H^2 of ranks 1, 2, 1; L: H^0 -> H^2 iso
        let torus = LefschetzPackage {
            n_dim: 1,
            graded: vec![
                HodgeStructure::tate(0),
                weight_one_line(Scalar::i(), Scalar::one()),
                HodgeStructure::pure_type(1, 1, 1),
            ],
            maps: vec![Mat::identity(1)],
        };
        let rep = torus.decompose(None).unwrap();
        assert!(rep.hard_lefschetz_failures.is_empty());
        assert!(rep.decomposition_ok);
        // Prim^1 = Ker(L^1: H^1 -> H^3 = 0) = H^1
        assert_eq!(rep.primitive[&1].dim(), 2);

        // L = 0 with H^{n-1} ≠ 0 fails hard Lefschetz at i = 1
        let broken = LefschetzPackage {
            n_dim: 1,
            graded: vec![
                HodgeStructure::tate(0),
                weight_one_line(Scalar::i(), Scalar::one()),
                HodgeStructure::pure_type(1, 1, 1),
            ],
            maps: vec![Mat::zeros(1, 1)],
        };
        let rep = broken.decompose(None).unwrap();
        assert_eq!(rep.hard_lefschetz_failures, vec![1]);
    }

    #[test]
    fn lefschetz_sl2_relation() {
        // rank-1 sl2 string across degrees 0 and 2 (n = 1):
        // [Λ, L] = h with h = ±1 on H^0 / H^2
        let pkg = LefschetzPackage {
            n_dim: 1,
            graded: vec![
                HodgeStructure::tate(0),
                HodgeStructure::pure_type(0, 1, 0),
                HodgeStructure::pure_type(1, 1, 1),
            ],
            maps: vec![Mat::identity(1)],
        };
        // Λ: H^2 -> H^0 identity
        let lambda = vec![Mat::identity(1)];
        let rep = pkg.decompose(Some(&lambda)).unwrap();
        assert_eq!(rep.sl2_ok, Some(true));
    }

    #[test]
    fn polarization_invariant_under_rational_base_change() {
        let h = weight_one_line(Scalar::i(), Scalar::one());
        let q = Polarization { q: Mat::from_int_rows(&[&[0, 1], &[-1, 0]]) };
        assert!(check_polarization(&h, &q).unwrap().is_polarization());
        // change of rational basis g: coordinates v -> v·g, F-basis rows map
        // through g, Q transforms by g Q ᵀg (so that Q'(αg, βg) = Q(α,β))
        let g = Mat::from_int_rows(&[&[1, 2], &[1, 3]]);
        let f1 = Subspace::span_of_vec(2, vec![g.apply(&[Scalar::i(), Scalar::one()])]);
        let f = Filtration::decreasing(2, vec![(0, Subspace::full(2)), (1, f1)]).unwrap();
        let h2 = HodgeStructure::new(1, f).unwrap();
        let ginv = g.inverse().unwrap();
        let q2 = Polarization { q: &(&ginv * &q.q) * &ginv.transpose() };
        assert!(check_polarization(&h2, &q2).unwrap().is_polarization());
    }
}
