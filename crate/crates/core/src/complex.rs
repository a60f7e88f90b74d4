//! Bounded cochain complexes of finite-dimensional spaces, chain maps,
//! homotopies, mapping cones and cohomology presentations.
//!
//! A complex stores its degree range [a, b], the dimension in each degree and
//! the differentials d^n: K^n -> K^{n+1} as row-acting matrices, with
//! d^{n+1} ∘ d^n = 0 enforced at construction.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::subspace::{kernel, Quotient, Subquotient, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq)]
pub struct Complex {
    min_deg: i64,
    dims: Vec<usize>,
    /// diffs[k]: d from degree min_deg+k to min_deg+k+1 (length dims.len()-1,
    /// omitted entries at the ends are zero maps)
    diffs: Vec<Mat>,
}

impl Complex {
    pub fn new(min_deg: i64, dims: Vec<usize>, diffs: Vec<Mat>) -> Result<Self> {
        if dims.is_empty() {
            return Ok(Complex { min_deg, dims: vec![0], diffs: vec![] });
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} differentials for {} degrees",
                dims.len() - 1,
                dims.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(Error::MapShape {
                    expected_rows: dims[k],
                    expected_cols: dims[k + 1],
                    rows: d.rows(),
                    cols: d.cols(),
                });
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !(&diffs[k] * &diffs[k + 1]).is_zero() {
                return Err(Error::NotAComplex(min_deg + k as i64));
            }
        }
        Ok(Complex { min_deg, dims, diffs })
    }

    /// The zero complex.
    pub fn zero() -> Self {
        Complex { min_deg: 0, dims: vec![0], diffs: vec![] }
    }

    /// A single space in one degree.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        Complex { min_deg: degree, dims: vec![dim], diffs: vec![] }
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.min_deg..=self.max_deg()
    }

    pub fn dim(&self, degree: i64) -> usize {
        let k = degree - self.min_deg;
        if k < 0 || k as usize >= self.dims.len() {
            0
        } else {
            self.dims[k as usize]
        }
    }

    /// d^degree as a matrix dim(degree) x dim(degree+1).
    pub fn diff(&self, degree: i64) -> Mat {
        let k = degree - self.min_deg;
        if k < 0 || k as usize >= self.diffs.len() {
            Mat::zeros(self.dim(degree), self.dim(degree + 1))
        } else {
            self.diffs[k as usize].clone()
        }
    }

    /// Ker d^n as a subspace of K^n.
    pub fn cycles(&self, degree: i64) -> Result<Subspace> {
        if self.dim(degree) == 0 {
            return Ok(Subspace::zero(0));
        }
        kernel(&self.diff(degree))
    }

    /// Im d^{n-1} as a subspace of K^n.
    pub fn boundaries(&self, degree: i64) -> Result<Subspace> {
        let d = self.dim(degree);
        if self.dim(degree - 1) == 0 {
            return Ok(Subspace::zero(d));
        }
        Subspace::full(self.dim(degree - 1)).image(&self.diff(degree - 1))
    }

    /// H^n(K) as the canonical subquotient (Ker d^n, Im d^{n-1}).
    pub fn cohomology(&self, degree: i64) -> Result<Subquotient> {
        Subquotient::new(self.cycles(degree)?, self.boundaries(degree)?)
    }

    pub fn cohomology_dim(&self, degree: i64) -> Result<usize> {
        Ok(self.cohomology(degree)?.dim())
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        for n in self.degrees() {
            if self.cohomology_dim(n)? > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Entry-wise conjugate complex (differentials conjugated).
    pub fn conj(&self) -> Complex {
        Complex {
            min_deg: self.min_deg,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(Mat::conj).collect(),
        }
    }

    /// Shifted complex K[m]^i = K^{i+m} with differential (-1)^m d.
    pub fn shift(&self, m: i64) -> Complex {
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        Complex {
            min_deg: self.min_deg - m,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&Scalar::from_int(sign))).collect(),
        }
    }

    /// Direct sum, degreewise; coordinates of `self` come first.
    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let min_deg = self.min_deg.min(other.min_deg);
        let max_deg = self.max_deg().max(other.max_deg());
        let dims: Vec<usize> =
            (min_deg..=max_deg).map(|n| self.dim(n) + other.dim(n)).collect();
        let mut diffs = Vec::new();
        for n in min_deg..max_deg {
            let (a, b) = (self.diff(n), other.diff(n));
            let mut d = Mat::zeros(self.dim(n) + other.dim(n), self.dim(n + 1) + other.dim(n + 1));
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    d[(r, c)] = a[(r, c)].clone();
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    d[(self.dim(n) + r, self.dim(n + 1) + c)] = b[(r, c)].clone();
                }
            }
            diffs.push(d);
        }
        Complex { min_deg, dims, diffs }
    }

    /// Inclusion/projection index helpers for direct sums.
    pub fn sum_injection_left(&self, other: &Complex, n: i64) -> Mat {
        let mut m = Mat::zeros(self.dim(n), self.dim(n) + other.dim(n));
        for i in 0..self.dim(n) {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn sum_injection_right(&self, other: &Complex, n: i64) -> Mat {
        let mut m = Mat::zeros(other.dim(n), self.dim(n) + other.dim(n));
        for i in 0..other.dim(n) {
            m[(i, self.dim(n) + i)] = Scalar::one();
        }
        m
    }
}

impl std::fmt::Debug for Complex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Complex[{}..{}] dims {:?}", self.min_deg, self.max_deg(), self.dims)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexWire {
    range: [i64; 2],
    dims: BTreeMap<String, usize>,
    d: BTreeMap<String, Mat>,
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dims = self.degrees().map(|n| (n.to_string(), self.dim(n))).collect();
        let d = self
            .degrees()
            .filter(|&n| n < self.max_deg() && self.dim(n) > 0 && self.dim(n + 1) > 0)
            .map(|n| (n.to_string(), self.diff(n)))
            .collect();
        ComplexWire { range: [self.min_deg, self.max_deg()], dims, d }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ComplexWire::deserialize(deserializer)?;
        let [a, b] = wire.range;
        if b < a {
            return Err(serde::de::Error::custom("empty degree range"));
        }
        let mut dims = vec![0usize; (b - a + 1) as usize];
        for (k, v) in wire.dims {
            let n: i64 = k.parse().map_err(serde::de::Error::custom)?;
            if n < a || n > b {
                return Err(serde::de::Error::custom("degree outside range"));
            }
            dims[(n - a) as usize] = v;
        }
        let mut diffs: Vec<Mat> = (0..dims.len().saturating_sub(1))
            .map(|k| Mat::zeros(dims[k], dims[k + 1]))
            .collect();
        for (k, m) in wire.d {
            let n: i64 = k.parse().map_err(serde::de::Error::custom)?;
            if n < a || n >= b {
                return Err(serde::de::Error::custom("differential outside range"));
            }
            diffs[(n - a) as usize] = m;
        }
        Complex::new(a, dims, diffs).map_err(serde::de::Error::custom)
    }
}

/// A degreewise linear map of complexes commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    maps: BTreeMap<i64, Mat>,
}

impl ChainMap {
    pub fn new(source: &Complex, target: &Complex, maps: BTreeMap<i64, Mat>) -> Result<Self> {
        let lo = source.min_deg().min(target.min_deg());
        let hi = source.max_deg().max(target.max_deg());
        let mut full = BTreeMap::new();
        for n in lo..=hi {
            let m = maps
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Mat::zeros(source.dim(n), target.dim(n)));
            if m.rows() != source.dim(n) || m.cols() != target.dim(n) {
                return Err(Error::MapShape {
                    expected_rows: source.dim(n),
                    expected_cols: target.dim(n),
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            full.insert(n, m);
        }
        // commutation f d = d f
        for n in lo..hi {
            let lhs = &full[&n] * &target.diff(n);
            let rhs = &source.diff(n) * &full[&(n + 1)];
            if lhs != rhs {
                return Err(Error::NotAChainMap(n));
            }
        }
        Ok(ChainMap { maps: full })
    }

    pub fn identity(k: &Complex) -> Self {
        let maps = k.degrees().map(|n| (n, Mat::identity(k.dim(n)))).collect();
        ChainMap { maps }
    }

    pub fn at(&self, n: i64) -> Mat {
        self.maps.get(&n).cloned().unwrap_or_else(|| Mat::zeros(0, 0))
    }

    /// Map induced on H^n, as a matrix between the cohomology presentations.
    pub fn induced_on_cohomology(
        &self,
        source: &Complex,
        target: &Complex,
        n: i64,
    ) -> Result<Mat> {
        let hs = source.cohomology(n)?;
        let ht = target.cohomology(n)?;
        hs.induced_map(&self.at(n), &ht)
    }
}

/// Per-degree homotopy h^j: K^j -> K'^{j-1}.
#[derive(Clone, Debug, Default)]
pub struct Homotopy {
    pub maps: BTreeMap<i64, Mat>,
}

impl Homotopy {
    pub fn zero() -> Self {
        Homotopy { maps: BTreeMap::new() }
    }

    pub fn at(&self, source: &Complex, target: &Complex, n: i64) -> Mat {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(source.dim(n), target.dim(n - 1)))
    }

    /// Checks f - g = dh + hd degreewise.
    pub fn certifies(
        &self,
        source: &Complex,
        target: &Complex,
        f: &ChainMap,
        g: &ChainMap,
    ) -> Result<()> {
        let lo = source.min_deg().min(target.min_deg());
        let hi = source.max_deg().max(target.max_deg());
        for n in lo..=hi {
            let hd = &self.at(source, target, n) * &target.diff(n - 1);
            let dh = &source.diff(n) * &self.at(source, target, n + 1);
            let lhs = &(&f.at(n) - &g.at(n));
            let rhs = &hd + &dh;
            if *lhs != rhs {
                return Err(Error::BadHomotopy(n));
            }
        }
        Ok(())
    }
}

/// Mapping cone C(f)^n = K^{n+1} ⊕ L^n with differential
/// (x, y) -> (-d x, f(x) + d y). Returns the cone plus the canonical maps
/// L -> C(f) and C(f) -> K[1] per degree.
pub struct Cone {
    pub complex: Complex,
    /// inclusion L^n -> C^n
    pub include_target: BTreeMap<i64, Mat>,
    /// projection C^n -> K^{n+1}
    pub project_shifted: BTreeMap<i64, Mat>,
}

pub fn cone(f: &ChainMap, source: &Complex, target: &Complex) -> Result<Cone> {
    let min_deg = (source.min_deg() - 1).min(target.min_deg());
    let max_deg = (source.max_deg() - 1).max(target.max_deg());
    let mut dims = Vec::new();
    for n in min_deg..=max_deg {
        dims.push(source.dim(n + 1) + target.dim(n));
    }
    let mut diffs = Vec::new();
    for n in min_deg..max_deg {
        let (sk, tk) = (source.dim(n + 1), target.dim(n));
        let (sk1, tk1) = (source.dim(n + 2), target.dim(n + 1));
        let mut d = Mat::zeros(sk + tk, sk1 + tk1);
        let ds = source.diff(n + 1);
        let dt = target.diff(n);
        let fm = f.at(n + 1);
        for r in 0..sk {
            for c in 0..sk1 {
                d[(r, c)] = -&ds[(r, c)];
            }
            for c in 0..tk1 {
                d[(r, sk1 + c)] = fm[(r, c)].clone();
            }
        }
        for r in 0..tk {
            for c in 0..tk1 {
                d[(sk + r, sk1 + c)] = dt[(r, c)].clone();
            }
        }
        diffs.push(d);
    }
    let complex = Complex::new(min_deg, dims, diffs)?;
    let mut include_target = BTreeMap::new();
    let mut project_shifted = BTreeMap::new();
    for n in min_deg..=max_deg {
        let (sk, tk) = (source.dim(n + 1), target.dim(n));
        let mut inc = Mat::zeros(tk, sk + tk);
        for i in 0..tk {
            inc[(i, sk + i)] = Scalar::one();
        }
        include_target.insert(n, inc);
        let mut proj = Mat::zeros(sk + tk, sk);
        for i in 0..sk {
            proj[(i, i)] = Scalar::one();
        }
        project_shifted.insert(n, proj);
    }
    Ok(Cone { complex, include_target, project_shifted })
}

/// f is a quasi-isomorphism iff its cone is acyclic; reports the first
/// degree with nonzero cone cohomology otherwise.
pub fn is_quasi_iso(f: &ChainMap, source: &Complex, target: &Complex) -> Result<()> {
    let c = cone(f, source, target)?;
    for n in c.complex.degrees() {
        if c.complex.cohomology_dim(n)? > 0 {
            return Err(Error::NotQuasiIso(n));
        }
    }
    Ok(())
}

/// Degreewise subcomplex data: a subspace of K^n for each degree, closed
/// under d. Used to build quotient complexes in canonical coordinates.
pub fn quotient_complex(
    k: &Complex,
    sub: &BTreeMap<i64, Subspace>,
) -> Result<(Complex, BTreeMap<i64, Quotient>)> {
    let mut quotients = BTreeMap::new();
    for n in k.degrees() {
        let s = sub
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(k.dim(n)));
        if s.ambient_dim() != k.dim(n) {
            return Err(Error::AmbientMismatch(s.ambient_dim(), k.dim(n)));
        }
        quotients.insert(n, Quotient::by(&s));
    }
    // closure under d
    for n in k.min_deg()..k.max_deg() {
        let img = quotients[&n].denominator().image(&k.diff(n))?;
        if !quotients[&(n + 1)].denominator().contains(&img) {
            return Err(Error::NotASubcomplex { level: 0, degree: n });
        }
    }
    let dims: Vec<usize> = k.degrees().map(|n| quotients[&n].dim()).collect();
    let mut diffs = Vec::new();
    for n in k.min_deg()..k.max_deg() {
        // induced differential: section, then d, then projection
        let d = &(quotients[&n].section() * &k.diff(n)) * quotients[&(n + 1)].proj();
        diffs.push(d);
    }
    Ok((Complex::new(k.min_deg(), dims, diffs)?, quotients))
}

/// Subcomplex in its own coordinates (each degree re-coordinatized on the
/// subspace's RREF basis), with the per-degree inclusion maps back.
pub fn sub_complex(
    k: &Complex,
    sub: &BTreeMap<i64, Subspace>,
) -> Result<(Complex, BTreeMap<i64, Mat>)> {
    let mut spaces = BTreeMap::new();
    for n in k.degrees() {
        let s = sub
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(k.dim(n)));
        if s.ambient_dim() != k.dim(n) {
            return Err(Error::AmbientMismatch(s.ambient_dim(), k.dim(n)));
        }
        spaces.insert(n, s);
    }
    for n in k.min_deg()..k.max_deg() {
        let img = spaces[&n].image(&k.diff(n))?;
        if !spaces[&(n + 1)].contains(&img) {
            return Err(Error::NotASubcomplex { level: 0, degree: n });
        }
    }
    let dims: Vec<usize> = k.degrees().map(|n| spaces[&n].dim()).collect();
    let mut inclusions = BTreeMap::new();
    for n in k.degrees() {
        inclusions.insert(n, spaces[&n].basis().clone());
    }
    let mut diffs = Vec::new();
    for n in k.min_deg()..k.max_deg() {
        // rows of the sub-basis map through d, then take coordinates in the target sub-basis
        let img = &spaces[&n].basis().clone() * &k.diff(n);
        let rows: Vec<Vec<Scalar>> = img
            .rows_iter()
            .map(|r| spaces[&(n + 1)].coordinates(r).ok_or(Error::NotASubcomplex { level: 0, degree: n }))
            .collect::<Result<_>>()?;
        let d = if rows.is_empty() {
            Mat::zeros(0, spaces[&(n + 1)].dim())
        } else {
            Mat::from_rows(rows)
        };
        diffs.push(d);
    }
    Ok((Complex::new(k.min_deg(), dims, diffs)?, inclusions))
}
