//! Spectral sequences of filtered complexes.
//!
//! For a biregular decreasing filtration F on a bounded complex K the page
//! terms are computed from the closed formulas
//!
//! ```text
//! Z_r^{pq} = Ker(d: F^p K^{p+q} -> K^{p+q+1}/F^{p+r})
//!          = F^p K^{p+q} ∩ d^{-1}(F^{p+r} K^{p+q+1})
//! B_r^{pq} = F^{p+1} K^{p+q} + d(F^{p-r+1} K^{p+q-1})
//! E_r^{pq} = Z_r^{pq} / (B_r^{pq} ∩ Z_r^{pq})
//! ```
//!
//! with r = ∞ given by F^{-∞} = everything, F^{∞} = 0. Every term is kept as
//! an explicit pair of subspaces of the ambient chain group, never as an
//! abstract quotient, so the filtrations F_d, F_rec and F_d* induced by a
//! second filtration are comparable as literal subspaces. Increasing
//! filtrations W use the reindexing F^i = W_{-i}; `increasing_page` computes
//! the same terms independently through the quotient-complex formula
//! Gr^W_{-p} H^{p+q}(W_{-p+r-1}K / W_{-p-r}K) and the two routes are
//! cross-checked in tests.

use crate::complex::{quotient_complex, sub_complex, Complex};
use crate::error::{Error, Result};
use crate::filt::{is_strict, Direction, FilteredMap, Filtration};
use crate::mat::Mat;
use crate::subspace::{Subquotient, Subspace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Page index: a finite rank or the limit page.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PageIndex {
    Finite(u32),
    Infinity,
}

impl std::fmt::Display for PageIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PageIndex::Finite(r) => write!(f, "{r}"),
            PageIndex::Infinity => write!(f, "inf"),
        }
    }
}

/// A complex with one filtration per degree (each step a subcomplex).
#[derive(Clone)]
pub struct FilteredComplex {
    complex: Complex,
    direction: Direction,
    filts: BTreeMap<i64, Filtration>,
}

impl FilteredComplex {
    pub fn new(complex: Complex, filts: BTreeMap<i64, Filtration>) -> Result<Self> {
        let direction = filts
            .values()
            .next()
            .map(|f| f.direction())
            .unwrap_or(Direction::Decreasing);
        let mut full = BTreeMap::new();
        for n in complex.degrees() {
            let f = filts
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Filtration::one_jump(direction, complex.dim(n), 0));
            if f.ambient_dim() != complex.dim(n) {
                return Err(Error::AmbientMismatch(f.ambient_dim(), complex.dim(n)));
            }
            if f.direction() != direction {
                return Err(Error::InvalidInput("mixed filtration directions across degrees".into()));
            }
            full.insert(n, f);
        }
        let fc = FilteredComplex { complex, direction, filts: full };
        // each step must be a subcomplex
        for n in fc.complex.min_deg()..fc.complex.max_deg() {
            for lvl in fc.all_levels() {
                let img = fc.level(n, lvl).image(&fc.complex.diff(n))?;
                if !fc.level(n + 1, lvl).contains(&img) {
                    return Err(Error::NotASubcomplex { level: lvl, degree: n });
                }
            }
        }
        Ok(fc)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn filtration(&self, degree: i64) -> Filtration {
        self.filts.get(&degree).cloned().unwrap_or_else(|| {
            Filtration::one_jump(self.direction, self.complex.dim(degree), 0)
        })
    }

    /// F^p K^n in the internal decreasing indexing (W_{-p} when increasing).
    pub fn level(&self, degree: i64, p: i64) -> Subspace {
        let dim = self.complex.dim(degree);
        match self.filts.get(&degree) {
            None => {
                if dim == 0 {
                    Subspace::zero(0)
                } else {
                    unreachable!("filtration present for every degree")
                }
            }
            Some(f) => match self.direction {
                Direction::Decreasing => f.value(p),
                Direction::Increasing => f.value(-p),
            },
        }
    }

    /// Union of all stored jump levels, translated to decreasing indexing.
    pub fn all_levels(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .filts
            .values()
            .flat_map(|f| f.jumps())
            .map(|j| match self.direction {
                Direction::Decreasing => j,
                Direction::Increasing => -j,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn level_bounds(&self) -> (i64, i64) {
        let levels = self.all_levels();
        match (levels.first(), levels.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        }
    }

    /// Rank from which all pages are stable (Z_r = Z_∞, B_r = B_∞).
    pub fn stabilization_rank(&self) -> u32 {
        let (lo, hi) = self.level_bounds();
        ((hi - lo) + 2).max(2) as u32
    }

    fn z_term(&self, p: i64, q: i64, r: PageIndex) -> Result<Subspace> {
        let n = p + q;
        let fp = self.level(n, p);
        if fp.is_zero() {
            return Ok(fp);
        }
        let target = match r {
            PageIndex::Finite(r) => self.level(n + 1, p + r as i64),
            PageIndex::Infinity => Subspace::zero(self.complex.dim(n + 1)),
        };
        fp.intersect(&Subspace::preimage(&self.complex.diff(n), &target)?)
    }

    fn b_term(&self, p: i64, q: i64, r: PageIndex) -> Result<Subspace> {
        let n = p + q;
        let first = self.level(n, p + 1);
        let source = match r {
            PageIndex::Finite(r) => self.level(n - 1, p - r as i64 + 1),
            PageIndex::Infinity => Subspace::full(self.complex.dim(n - 1)),
        };
        first.sum(&source.image(&self.complex.diff(n - 1))?)
    }

    /// The (p, q) term of page r as the explicit pair (Z, B∩Z).
    pub fn term(&self, p: i64, q: i64, r: PageIndex) -> Result<Subquotient> {
        let z = self.z_term(p, q, r)?;
        let b = self.b_term(p, q, r)?;
        Subquotient::new(z.clone(), b.intersect(&z)?)
    }

    /// Full page with differentials; terms are stored for every p in the
    /// filtration's support and every total degree of the complex.
    pub fn page(&self, r: PageIndex) -> Result<SSPage> {
        let (lo, hi) = self.level_bounds();
        let mut terms = BTreeMap::new();
        for n in self.complex.degrees() {
            for p in lo..=hi {
                let q = n - p;
                let term = self.term(p, q, r)?;
                if term.dim() > 0 {
                    terms.insert((p, q), term);
                }
            }
        }
        let mut diffs = BTreeMap::new();
        if let PageIndex::Finite(rr) = r {
            let rr = rr as i64;
            let keys: Vec<(i64, i64)> = terms.keys().copied().collect();
            for (p, q) in keys {
                let (tp, tq) = (p + rr, q - rr + 1);
                let n = p + q;
                let src = &terms[&(p, q)];
                let tgt = match terms.get(&(tp, tq)) {
                    Some(t) => t.clone(),
                    None => self.term(tp, tq, r)?,
                };
                // well-definedness of d_r is exactly the induced-map check
                let m = src.induced_map(&self.complex.diff(n), &tgt).map_err(|_| {
                    Error::Inconsistent(format!("d_{rr} not well defined at ({p},{q})"))
                })?;
                diffs.insert((p, q), m);
            }
        }
        Ok(SSPage { r, terms, diffs })
    }

    /// H^n(K) with the induced filtration
    /// F^i H^n = Im(H^n(F^i K) -> H^n(K)) = ((Ker d ∩ F^i) + Im d)/Im d,
    /// returned as (cohomology presentation, filtration on its coordinates).
    pub fn cohomology_filtration(&self, n: i64) -> Result<(Subquotient, Filtration)> {
        let h = self.complex.cohomology(n)?;
        let cycles = self.complex.cycles(n)?;
        let mut steps = Vec::new();
        let (lo, hi) = self.level_bounds();
        for p in lo..=hi + 1 {
            let cut = cycles.intersect(&self.level(n, p))?;
            let lifted = cut.sum(h.bottom())?;
            let in_coords = h.subspace_in_coords(&lifted)?;
            let idx = match self.direction {
                Direction::Decreasing => p,
                Direction::Increasing => -p,
            };
            steps.push((idx, in_coords));
        }
        let f = Filtration::new(self.direction, h.dim(), steps)?;
        Ok((h, f))
    }

    /// Compares E_∞^{pq} with Gr^p_F H^{p+q}(K): dimensions and an explicit
    /// representative-level isomorphism (the matrix of the natural map).
    pub fn e_infinity_vs_graded_cohomology(&self) -> Result<Vec<EInfinityComparison>> {
        let (lo, hi) = self.level_bounds();
        let mut out = Vec::new();
        for n in self.complex.degrees() {
            let (h, hfilt) = self.cohomology_filtration(n)?;
            for p in lo..=hi {
                let q = n - p;
                let einf = self.term(p, q, PageIndex::Infinity)?;
                let idx = match self.direction {
                    Direction::Decreasing => p,
                    Direction::Increasing => -p,
                };
                let gr = hfilt.gr(idx);
                if einf.dim() == 0 && gr.dim() == 0 {
                    continue;
                }
                // natural map: representative in Z_∞ -> class in H^n -> class in Gr
                let mut rows = Vec::new();
                let mut defined = true;
                for j in 0..einf.dim() {
                    let mut coords = vec![crate::scalar::Scalar::zero(); einf.dim()];
                    coords[j] = crate::scalar::Scalar::one();
                    let rep = einf.representative(&coords);
                    let Some(hclass) = h.class_of(&rep) else {
                        defined = false;
                        break;
                    };
                    let Some(grclass) = gr.class_of(&hclass) else {
                        defined = false;
                        break;
                    };
                    rows.push(grclass);
                }
                let iso = defined && einf.dim() == gr.dim() && {
                    if einf.dim() == 0 {
                        true
                    } else {
                        Mat::from_rows(rows.clone()).rank() == einf.dim()
                    }
                };
                out.push(EInfinityComparison {
                    p,
                    q,
                    e_infinity_dim: einf.dim(),
                    graded_dim: gr.dim(),
                    isomorphic: iso,
                });
            }
        }
        Ok(out)
    }

    /// Smallest r0 with d_r = 0 for all r >= r0, plus both sides of the
    /// Prop 1.3.2 equivalence (degeneration at rank 1 iff every d is strict).
    pub fn degeneration_rank(&self) -> Result<DegenerationReport> {
        let stab = self.stabilization_rank();
        let mut last_nonzero: Option<u32> = None;
        for r in 0..=stab {
            let page = self.page(PageIndex::Finite(r))?;
            if !page.all_diffs_zero() {
                last_nonzero = Some(r);
            }
        }
        let rank = match last_nonzero {
            None => 0,
            Some(r) => r + 1,
        };
        // strictness of every differential
        let mut strict = true;
        let mut witness = None;
        for n in self.complex.min_deg()..self.complex.max_deg() {
            let fm = FilteredMap::new(
                self.complex.diff(n),
                self.filtration(n),
                self.filtration(n + 1),
            )?;
            let (ok, w) = is_strict(&fm)?;
            if !ok {
                strict = false;
                witness = w.map(|w| (n, w));
                break;
            }
        }
        let degenerates_at_one = rank <= 1;
        if degenerates_at_one != strict {
            return Err(Error::Inconsistent(
                "Prop 1.3.2 equivalence violated: degeneration at rank 1 vs strictness".into(),
            ));
        }
        Ok(DegenerationReport { rank, all_differentials_strict: strict, witness })
    }
}

/// One side-by-side comparison row for E_∞ vs graded cohomology.
#[derive(Clone, Debug, Serialize)]
pub struct EInfinityComparison {
    pub p: i64,
    pub q: i64,
    pub e_infinity_dim: usize,
    pub graded_dim: usize,
    pub isomorphic: bool,
}

#[derive(Debug)]
pub struct DegenerationReport {
    /// smallest r0 such that d_r = 0 for all r >= r0
    pub rank: u32,
    pub all_differentials_strict: bool,
    pub witness: Option<(i64, crate::filt::StrictnessWitness)>,
}

/// A page of the spectral sequence: terms presented as (Z, B∩Z) pairs and
/// the d_r matrices in presentation coordinates.
pub struct SSPage {
    pub r: PageIndex,
    terms: BTreeMap<(i64, i64), Subquotient>,
    diffs: BTreeMap<(i64, i64), Mat>,
}

impl SSPage {
    pub fn terms(&self) -> &BTreeMap<(i64, i64), Subquotient> {
        &self.terms
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.terms.get(&(p, q)).map_or(0, Subquotient::dim)
    }

    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.terms.iter().map(|(&k, t)| (k, t.dim())).collect()
    }

    pub fn diff(&self, p: i64, q: i64) -> Option<&Mat> {
        self.diffs.get(&(p, q))
    }

    pub fn all_diffs_zero(&self) -> bool {
        self.diffs.values().all(Mat::is_zero)
    }

    /// Dimensions of H(E_r, d_r) per term, computed purely from this page's
    ///differential matrices: the independent recomputation used to check
    /// E_{r+1} = H(E_r, d_r).
    pub fn cohomology_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let PageIndex::Finite(r) = self.r else {
            return self.dims();
        };
        let r = r as i64;
        let mut out = BTreeMap::new();
        for (&(p, q), term) in &self.terms {
            let out_rank = self.diffs.get(&(p, q)).map_or(0, Mat::rank);
            let in_rank = self.diffs.get(&(p - r, q + r - 1)).map_or(0, Mat::rank);
            let d = term.dim() - out_rank - in_rank;
            if d > 0 {
                out.insert((p, q), d);
            }
        }
        out
    }

    /// JSON dump keyed "p,q" with dims and differential matrices.
    pub fn dump(&self) -> serde_json::Value {
        let mut terms = serde_json::Map::new();
        for (&(p, q), t) in &self.terms {
            let mut entry = serde_json::Map::new();
            entry.insert("dim".into(), t.dim().into());
            if let Some(d) = self.diffs.get(&(p, q)) {
                if !d.is_zero() {
                    entry.insert("d".into(), serde_json::to_value(d).unwrap());
                }
            }
            terms.insert(format!("{p},{q}"), entry.into());
        }
        serde_json::json!({ "r": self.r.to_string(), "terms": terms })
    }
}

/// E_r^{pq}(K, W) for an increasing filtration, via the quotient-complex
/// formula Gr^W_{-p} H^{p+q}(W_{-p+r-1}K / W_{-p-r}K). This is an
/// independent route from `page` (which uses the Z/B formulas after the
/// reindexing F^i = W_{-i}); both must agree.
pub fn increasing_page_term(fc: &FilteredComplex, p: i64, q: i64, r: u32) -> Result<usize> {
    if fc.direction() != Direction::Increasing {
        return Err(Error::InvalidInput("increasing_page needs an increasing filtration".into()));
    }
    if r == 0 {
        return Ok(fc.term(p, q, PageIndex::Finite(0))?.dim());
    }
    let r = r as i64;
    let k = fc.complex();
    // subcomplex S = W_{-p+r-1}K in its own coordinates
    let top_sub: BTreeMap<i64, Subspace> =
        k.degrees().map(|n| (n, fc.level(n, p - r + 1))).collect();
    let (s, inclusions) = sub_complex(k, &top_sub)?;
    // image of W_{-p-r} (and the W levels we need) inside S's coordinates
    let level_in_s = |n: i64, lvl: i64| -> Result<Subspace> {
        let cut = fc.level(n, lvl).intersect(&top_sub[&n])?;
        let rows: Vec<Vec<crate::scalar::Scalar>> = cut
            .basis()
            .rows_iter()
            .map(|v| {
                top_sub[&n]
                    .coordinates(v)
                    .ok_or(Error::NotContained)
            })
            .collect::<Result<_>>()?;
        Ok(Subspace::span_of_vec(s.dim(n), rows))
    };
    let _ = &inclusions;
    let bottom_in_s: BTreeMap<i64, Subspace> =
        k.degrees().map(|n| Ok((n, level_in_s(n, p + r)?))).collect::<Result<_>>()?;
    let (quot, projections) = quotient_complex(&s, &bottom_in_s)?;
    // W_i H^j(quot) = image of (cycles ∩ image-of-W_i) in H^j(quot)
    let n = p + q;
    let h = quot.cohomology(n)?;
    let w_level_dim = |lvl: i64| -> Result<usize> {
        let in_s = level_in_s(n, lvl)?;
        let in_q = projections[&n].project_subspace(&in_s);
        let cut = quot.cycles(n)?.intersect(&in_q)?;
        let lifted = cut.sum(h.bottom())?;
        Ok(h.subspace_in_coords(&lifted)?.dim())
    };
    Ok(w_level_dim(p)? - w_level_dim(p + 1)?)
}

/// A complex carrying both an increasing W and a decreasing F, each a chain
/// of subcomplexes.
#[derive(Clone)]
pub struct BiFilteredComplex {
    w: FilteredComplex,
    f: FilteredComplex,
}

impl BiFilteredComplex {
    pub fn new(
        complex: Complex,
        w: BTreeMap<i64, Filtration>,
        f: BTreeMap<i64, Filtration>,
    ) -> Result<Self> {
        let wfc = FilteredComplex::new(complex.clone(), w)?;
        if wfc.direction() != Direction::Increasing {
            return Err(Error::InvalidInput("W must be increasing".into()));
        }
        let ffc = FilteredComplex::new(complex, f)?;
        if ffc.direction() != Direction::Decreasing {
            return Err(Error::InvalidInput("F must be decreasing".into()));
        }
        Ok(BiFilteredComplex { w: wfc, f: ffc })
    }

    pub fn complex(&self) -> &Complex {
        self.w.complex()
    }

    pub fn w(&self) -> &FilteredComplex {
        &self.w
    }

    pub fn f(&self) -> &FilteredComplex {
        &self.f
    }

    /// F jump levels across all degrees.
    pub fn f_levels(&self) -> Vec<i64> {
        self.f.all_levels()
    }

    /// The three induced filtrations on every term of E_r(K, W).
    pub fn three_filtrations(&self, r: PageIndex) -> Result<ThreeFiltrationsReport> {
        let stab = self.w.stabilization_rank();
        let r_eff = match r {
            PageIndex::Finite(rr) => rr.min(stab),
            PageIndex::Infinity => stab,
        };
        // F_rec is carried along the page recursion from E_0
        let mut rec = self.rec_filtration_at(0)?;
        for step in 0..r_eff {
            rec = self.rec_step(step, rec)?;
        }
        let page_terms = self.w_page_terms(r_eff)?;
        let f_jumps = {
            let mut v = self.f_levels();
            if v.is_empty() {
                v.push(0);
            }
            v
        };
        let mut terms = BTreeMap::new();
        for (&(p, q), term) in &page_terms {
            if term.dim() == 0 {
                continue;
            }
            let n = p + q;
            let mut fd_steps = Vec::new();
            let mut fds_steps = Vec::new();
            let mut rec_steps = Vec::new();
            for &j in &f_jumps {
                // F_d: image of E_r(F^j K, W): (F^j ∩ Z) + D
                let fd_amb = self
                    .f
                    .level(n, j)
                    .intersect(term.top())?
                    .sum(term.bottom())?;
                fd_steps.push((j, term.subspace_in_coords(&fd_amb)?));
                // F_d*: kernel of E_r(K, W) -> E_r(K/F^j K, W)
                let fds_amb = self.dstar_ambient(p, q, r_eff, j, term)?;
                fds_steps.push((j, term.subspace_in_coords(&fds_amb)?));
                // F_rec from the recursion state
                let rec_amb = rec
                    .get(&(p, q))
                    .and_then(|m| m.get(&j))
                    .cloned()
                    .unwrap_or_else(|| term.bottom().clone());
                let rec_amb = rec_amb.sum(term.bottom())?;
                rec_steps.push((j, term.subspace_in_coords(&rec_amb.intersect(term.top())?)?));
            }
            let dim = term.dim();
            let build = |steps: Vec<(i64, Subspace)>| -> Result<Filtration> {
                let mut steps = steps;
                // prepend the full space one level below the smallest jump so
                // clamping matches F (below all jumps F^j = K, so all three = term)
                let lowest = steps.first().map(|(j, _)| j - 1).unwrap_or(0);
                steps.insert(0, (lowest, Subspace::full(dim)));
                Filtration::decreasing(dim, steps)
            };
            let f_d = build(fd_steps)?;
            let f_rec = build(rec_steps)?;
            let f_dstar = build(fds_steps)?;
            // the proved inclusions F_d ⊆ F_rec ⊆ F_d* must hold
            for &j in &f_jumps {
                if !f_rec.value(j).contains(&f_d.value(j)) || !f_dstar.value(j).contains(&f_rec.value(j)) {
                    return Err(Error::Inconsistent(format!(
                        "inclusion F_d ⊆ F_rec ⊆ F_d* fails at term ({p},{q}), level {j}"
                    )));
                }
            }
            terms.insert(
                (p, q),
                TermFiltrations { dim, f_d, f_rec, f_dstar },
            );
        }
        // on E_0 and E_1, F_d = F_d*
        if matches!(r, PageIndex::Finite(0) | PageIndex::Finite(1)) {
            for ((p, q), t) in &terms {
                if t.f_d != t.f_dstar {
                    return Err(Error::Inconsistent(format!(
                        "F_d != F_d* on page {r_eff} at term ({p},{q})"
                    )));
                }
            }
        }
        Ok(ThreeFiltrationsReport { r, terms })
    }

    /// W-page terms in decreasing indexing, including zero terms skipped.
    fn w_page_terms(&self, r: u32) -> Result<BTreeMap<(i64, i64), Subquotient>> {
        let page = self.w.page(PageIndex::Finite(r))?;
        Ok(page.terms.clone())
    }

    /// Ambient subspace (inside Z) representing F_d*^j on the term (p,q) of
    /// page r: Z ∩ π^{-1}((B ∩ Z)(K/F^j)) where π is the per-degree quotient
    /// map by F^j.
    fn dstar_ambient(
        &self,
        p: i64,
        q: i64,
        r: u32,
        j: i64,
        term: &Subquotient,
    ) -> Result<Subspace> {
        let k = self.complex();
        let n = p + q;
        let fj: BTreeMap<i64, Subspace> = k.degrees().map(|m| (m, self.f.level(m, j))).collect();
        let (quot, projections) = quotient_complex(k, &fj)?;
        // W filtration on the quotient: images of W levels
        let mut wq_filts = BTreeMap::new();
        for m in k.degrees() {
            let steps: Vec<(i64, Subspace)> = self
                .w
                .filtration(m)
                .steps()
                .iter()
                .map(|(i, s)| (*i, projections[&m].project_subspace(s)))
                .collect();
            wq_filts.insert(m, Filtration::increasing(quot.dim(m), steps)?);
        }
        let qfc = FilteredComplex::new(quot, wq_filts)?;
        let qterm = qfc.term(p, q, PageIndex::Finite(r))?;
        // kernel: x in Z with π(x) in (B∩Z) of the quotient
        let pre = projections[&n].preimage_subspace(qterm.bottom());
        term.top().intersect(&pre)?.sum(term.bottom())
    }

    /// F_rec state on page r: for each term, level j -> ambient subspace
    /// (between D and Z) representing F_rec^j.
    fn rec_filtration_at(&self, r: u32) -> Result<RecState> {
        assert_eq!(r, 0, "recursion starts at page 0");
        let terms = self.w_page_terms(0)?;
        let f_jumps = self.f_levels();
        let mut state = RecState::new();
        for (&(p, q), term) in &terms {
            let n = p + q;
            let mut by_level = BTreeMap::new();
            for &j in &f_jumps {
                let amb = self
                    .f
                    .level(n, j)
                    .intersect(term.top())?
                    .sum(term.bottom())?;
                by_level.insert(j, amb);
            }
            state.insert((p, q), by_level);
        }
        Ok(state)
    }

    /// One recursion step: F_rec on page r+1 from F_rec on page r.
    /// With K_r = Z_r ∩ d^{-1}(D_r^{target}) and I = d(Z_r^{source}) + D_r:
    /// R' = ((R ∩ K_r) + I) ∩ Z_{r+1}.
    fn rec_step(&self, r: u32, state: RecState) -> Result<RecState> {
        let cur = self.w_page_terms(r)?;
        let next = self.w_page_terms(r + 1)?;
        let rr = r as i64;
        let mut out = RecState::new();
        for (&(p, q), nterm) in &next {
            let n = p + q;
            let cterm = match cur.get(&(p, q)) {
                Some(t) => t.clone(),
                None => self.w.term(p, q, PageIndex::Finite(r))?,
            };
            let tgt_d = match cur.get(&(p + rr, q - rr + 1)) {
                Some(t) => t.bottom().clone(),
                None => self.w.term(p + rr, q - rr + 1, PageIndex::Finite(r))?.bottom().clone(),
            };
            let ker_sub = cterm
                .top()
                .intersect(&Subspace::preimage(&self.complex().diff(n), &tgt_d)?)?;
            let src_z = match cur.get(&(p - rr, q + rr - 1)) {
                Some(t) => t.top().clone(),
                None => self.w.term(p - rr, q + rr - 1, PageIndex::Finite(r))?.top().clone(),
            };
            let image_sub = src_z
                .image(&self.complex().diff(n - 1))?
                .sum(cterm.bottom())?;
            let mut by_level = BTreeMap::new();
            let empty = BTreeMap::new();
            let prev_levels = state.get(&(p, q)).unwrap_or(&empty);
            for &j in &self.f_levels() {
                let prev = prev_levels
                    .get(&j)
                    .cloned()
                    .unwrap_or_else(|| {
                        // terms absent on the earlier page were zero; start from F ∩ Z
                        self.f
                            .level(n, j)
                            .intersect(cterm.top())
                            .and_then(|s| s.sum(cterm.bottom()))
                            .unwrap_or_else(|_| cterm.bottom().clone())
                    });
                let r_new = prev
                    .intersect(&ker_sub)?
                    .sum(&image_sub)?
                    .intersect(nterm.top())?;
                by_level.insert(j, r_new);
            }
            out.insert((p, q), by_level);
        }
        Ok(out)
    }
}

type RecState = BTreeMap<(i64, i64), BTreeMap<i64, Subspace>>;

/// The three filtrations on one page term, as filtrations of the term's
/// presentation coordinate space.
#[derive(Clone, Debug)]
pub struct TermFiltrations {
    pub dim: usize,
    pub f_d: Filtration,
    pub f_rec: Filtration,
    pub f_dstar: Filtration,
}

impl TermFiltrations {
    pub fn all_equal(&self) -> bool {
        self.f_d == self.f_rec && self.f_rec == self.f_dstar
    }
}

#[derive(Debug)]
pub struct ThreeFiltrationsReport {
    pub r: PageIndex,
    pub terms: BTreeMap<(i64, i64), TermFiltrations>,
}

impl ThreeFiltrationsReport {
    pub fn all_coincide(&self) -> bool {
        self.terms.values().all(TermFiltrations::all_equal)
    }

    /// Terms where F_d is strictly smaller than F_d* at some level.
    pub fn strict_inclusions(&self) -> Vec<(i64, i64)> {
        self.terms
            .iter()
            .filter(|(_, t)| !t.all_equal())
            .map(|(&k, _)| k)
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct FilteredComplexWire {
    #[serde(flatten)]
    complex: Complex,
    #[serde(rename = "F", default, skip_serializing_if = "BTreeMap::is_empty")]
    f: BTreeMap<String, Filtration>,
    #[serde(rename = "W", default, skip_serializing_if = "BTreeMap::is_empty")]
    w: BTreeMap<String, Filtration>,
}

fn filts_from_wire(m: BTreeMap<String, Filtration>) -> std::result::Result<BTreeMap<i64, Filtration>, String> {
    m.into_iter()
        .map(|(k, v)| k.parse::<i64>().map(|n| (n, v)).map_err(|e| e.to_string()))
        .collect()
}

fn filts_to_wire(m: &BTreeMap<i64, Filtration>) -> BTreeMap<String, Filtration> {
    m.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

impl Serialize for FilteredComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (f, w) = match self.direction {
            Direction::Decreasing => (filts_to_wire(&self.filts), BTreeMap::new()),
            Direction::Increasing => (BTreeMap::new(), filts_to_wire(&self.filts)),
        };
        FilteredComplexWire { complex: self.complex.clone(), f, w }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FilteredComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = FilteredComplexWire::deserialize(deserializer)?;
        let (f, w) = (wire.f, wire.w);
        let filts = if !f.is_empty() && w.is_empty() {
            filts_from_wire(f).map_err(serde::de::Error::custom)?
        } else if f.is_empty() && !w.is_empty() {
            filts_from_wire(w).map_err(serde::de::Error::custom)?
        } else {
            return Err(serde::de::Error::custom("expected exactly one of F or W"));
        };
        FilteredComplex::new(wire.complex, filts).map_err(serde::de::Error::custom)
    }
}

impl Serialize for BiFilteredComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FilteredComplexWire {
            complex: self.complex().clone(),
            f: filts_to_wire(&self.f.filts),
            w: filts_to_wire(&self.w.filts),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiFilteredComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = FilteredComplexWire::deserialize(deserializer)?;
        let f = filts_from_wire(wire.f).map_err(serde::de::Error::custom)?;
        let w = filts_from_wire(wire.w).map_err(serde::de::Error::custom)?;
        BiFilteredComplex::new(wire.complex, w, f).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filt::Direction;

    /// 0 -> Q --id--> Q -> 0 with the trivial (one-jump) filtration σ:
    /// F^0 = everything, F^1 = the degree-1 part only.
    fn sigma_two_term() -> FilteredComplex {
        let k = Complex::new(0, vec![1, 1], vec![Mat::identity(1)]).unwrap();
        // σ_{>= p}: F^0 = K, F^1 = (0 -> K^1), F^2 = 0
        let filts: BTreeMap<i64, Filtration> = [
            (0, Filtration::one_jump(Direction::Decreasing, 1, 0)),
            (1, Filtration::one_jump(Direction::Decreasing, 1, 1)),
        ]
        .into();
        FilteredComplex::new(k, filts).unwrap()
    }

    #[test]
    fn sigma_filtration_pages() {
        let fc = sigma_two_term();
        let p1 = fc.page(PageIndex::Finite(1)).unwrap();
        assert_eq!(p1.dim(0, 0), 1);
        assert_eq!(p1.dim(1, 0), 1);
        // d_1: E_1^{0,0} -> E_1^{1,0} is the identity
        assert_eq!(p1.diff(0, 0).unwrap(), &Mat::identity(1));
        let p2 = fc.page(PageIndex::Finite(2)).unwrap();
        assert_eq!(p2.dims().len(), 0);
        // degenerates at rank 2; d is not strict
        let rep = fc.degeneration_rank().unwrap();
        assert_eq!(rep.rank, 2);
        assert!(!rep.all_differentials_strict);
        let (deg, w) = rep.witness.unwrap();
        assert_eq!(deg, 0);
        assert_eq!(w.index, 1);
    }

    #[test]
    fn zero_differential_degenerates_at_one() {
        let k = Complex::new(0, vec![2, 2], vec![Mat::zeros(2, 2)]).unwrap();
        let filts: BTreeMap<i64, Filtration> = [
            (
                0,
                Filtration::decreasing(
                    2,
                    vec![(0, Subspace::full(2)), (1, Subspace::from_rows(2, &Mat::from_int_rows(&[&[1, 0]])))],
                )
                .unwrap(),
            ),
            (
                1,
                Filtration::decreasing(
                    2,
                    vec![(0, Subspace::full(2)), (1, Subspace::from_rows(2, &Mat::from_int_rows(&[&[0, 1]])))],
                )
                .unwrap(),
            ),
        ]
        .into();
        let fc = FilteredComplex::new(k, filts).unwrap();
        let rep = fc.degeneration_rank().unwrap();
        assert_eq!(rep.rank, 0.min(1));
        assert!(rep.all_differentials_strict);
    }

    #[test]
    fn canonical_filtration_concentrates_e1_on_cohomology() {
        // K: 0 -> Q^2 --(x,y)->(x)--> Q -> 0 (H^0 = Q, H^1 = 0), canonical τ
        let d = Mat::from_int_rows(&[&[1], &[0]]);
        let k = Complex::new(0, vec![2, 1], vec![d.clone()]).unwrap();
        // τ_{<= p} is increasing: τ_{<= -1} = 0; τ_{<= 0} = (Ker d in deg 0);
        // τ_{<= 1} = K. Encode per degree.
        let ker = crate::subspace::kernel(&d).unwrap();
        let filts: BTreeMap<i64, Filtration> = [
            (
                0,
                Filtration::increasing(2, vec![(0, ker), (1, Subspace::full(2))]).unwrap(),
            ),
            (
                1,
                Filtration::increasing(1, vec![(1, Subspace::full(1))]).unwrap(),
            ),
        ]
        .into();
        let fc = FilteredComplex::new(k, filts).unwrap();
        // E_1^{pq} = H^{p+q}(Gr_p): concentrated on cohomology.
        // Gr^τ_0 ≃ H^0(K)[0]: term at p = 0 (decreasing index -0 = 0), n = 0.
        let p1 = fc.page(PageIndex::Finite(1)).unwrap();
        let total: usize = p1.dims().values().sum();
        assert_eq!(total, 1);
        assert_eq!(p1.dim(0, 0), 1);
        let rep = fc.degeneration_rank().unwrap();
        assert!(rep.rank <= 1);
    }

    #[test]
    fn e_infinity_matches_graded_cohomology() {
        let fc = sigma_two_term();
        for row in fc.e_infinity_vs_graded_cohomology().unwrap() {
            assert!(row.isomorphic, "mismatch at ({}, {})", row.p, row.q);
        }
    }

    #[test]
    fn one_step_filtration_gives_e1_equals_einfty() {
        let d = Mat::from_int_rows(&[&[1, 1]]);
        let k = Complex::new(0, vec![1, 2], vec![d]).unwrap();
        let filts: BTreeMap<i64, Filtration> = [
            (0, Filtration::one_jump(Direction::Decreasing, 1, 0)),
            (1, Filtration::one_jump(Direction::Decreasing, 2, 0)),
        ]
        .into();
        let fc = FilteredComplex::new(k, filts).unwrap();
        let p1 = fc.page(PageIndex::Finite(1)).unwrap();
        let pinf = fc.page(PageIndex::Infinity).unwrap();
        assert_eq!(p1.dims(), pinf.dims());
        let rep = fc.degeneration_rank().unwrap();
        assert!(rep.rank <= 1);
        assert!(rep.all_differentials_strict);
    }

    #[test]
    fn increasing_route_agrees_with_reindexed_page() {
        // W-filtered two-term complex with a non-trivial W
        let d = Mat::from_int_rows(&[&[1, 0], &[0, 0]]);
        let k = Complex::new(0, vec![2, 2], vec![d]).unwrap();
        let w0 = Filtration::increasing(
            2,
            vec![
                (-1, Subspace::from_rows(2, &Mat::from_int_rows(&[&[0, 1]]))),
                (0, Subspace::full(2)),
            ],
        )
        .unwrap();
        let w1 = Filtration::increasing(
            2,
            vec![
                (-1, Subspace::from_rows(2, &Mat::from_int_rows(&[&[1, 0]]))),
                (0, Subspace::full(2)),
            ],
        )
        .unwrap();
        let fc = FilteredComplex::new(k, [(0, w0), (1, w1)].into()).unwrap();
        for r in 1..=3u32 {
            let page = fc.page(PageIndex::Finite(r)).unwrap();
            for p in -2..=2i64 {
                for n in 0..=1i64 {
                    let q = n - p;
                    let via_quotient = increasing_page_term(&fc, p, q, r).unwrap();
                    assert_eq!(
                        page.dim(p, q),
                        via_quotient,
                        "term ({p},{q}) page {r} disagrees between routes"
                    );
                }
            }
        }
    }

    #[test]
    fn three_filtrations_trivial_w() {
        // W one-jump: E_0 collapses to the whole complex; all three equal the
        // induced F on cohomology at the stable page.
        let d = Mat::from_int_rows(&[&[1]]);
        let k = Complex::new(0, vec![1, 1], vec![d]).unwrap();
        let w: BTreeMap<i64, Filtration> = [
            (0, Filtration::one_jump(Direction::Increasing, 1, 0)),
            (1, Filtration::one_jump(Direction::Increasing, 1, 0)),
        ]
        .into();
        let f: BTreeMap<i64, Filtration> = [
            (0, Filtration::one_jump(Direction::Decreasing, 1, 0)),
            (1, Filtration::one_jump(Direction::Decreasing, 1, 1)),
        ]
        .into();
        let b = BiFilteredComplex::new(k, w, f).unwrap();
        let rep = b.three_filtrations(PageIndex::Finite(0)).unwrap();
        assert!(rep.all_coincide());
        let rep = b.three_filtrations(PageIndex::Infinity).unwrap();
        assert!(rep.all_coincide());
    }

    #[test]
    fn page_recursion_identity_small() {
        let fc = sigma_two_term();
        for r in 0..3u32 {
            let cur = fc.page(PageIndex::Finite(r)).unwrap();
            let nxt = fc.page(PageIndex::Finite(r + 1)).unwrap();
            assert_eq!(cur.cohomology_dims(), nxt.dims(), "page recursion at r={r}");
        }
    }

    #[test]
    fn serialization_round_trip() {
        let fc = sigma_two_term();
        let json = serde_json::to_string(&fc).unwrap();
        let back: FilteredComplex = serde_json::from_str(&json).unwrap();
        assert_eq!(back.complex(), fc.complex());
        assert_eq!(back.filtration(0), fc.filtration(0));
    }
}
