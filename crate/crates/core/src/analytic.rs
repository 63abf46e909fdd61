//! Closed-form results in the solvable limit `mu = 0`, `pairing = hopping`.
//!
//! Each band branch is `Λ²/4 = b(k) = x² + r² - 2 x r cos k` with
//! `x = Ũ(1+η)`, `r = t(1-η)` (the second branch flips the sign of η),
//! so as `k` varies `b` sweeps a straight segment in the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ChainParams;

/// Default k-grid size for band scans.
pub const DEFAULT_K_POINTS: usize = 1024;

/// Default gap tolerance in units of `t`.
pub const DEFAULT_GAP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolvableLimitParams {
    pub t: f64,
    pub u: f64,
    pub delta: f64,
    pub eta: f64,
}

impl SolvableLimitParams {
    pub fn new(t: f64, u: f64, delta: f64, eta: f64) -> Result<Self> {
        let p = Self { t, u, delta, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.t, self.u, self.delta, self.eta].iter().all(|x| x.is_finite()) {
            return Err(Error::Parameter("solvable-limit parameters must be finite".into()));
        }
        if self.t <= 0.0 {
            return Err(Error::Parameter(format!("hopping must be positive, got {}", self.t)));
        }
        if !(-1.0..=1.0).contains(&self.eta) {
            return Err(Error::Parameter(format!("eta must lie in [-1, 1], got {}", self.eta)));
        }
        Ok(())
    }

    pub fn from_chain(params: &ChainParams) -> Result<Self> {
        params.validate()?;
        params.require_solvable("solvable-limit analytics")?;
        Ok(Self { t: params.hopping, u: params.hubbard_u, delta: params.nh_delta, eta: params.eta })
    }

    pub fn to_chain(&self, length: usize) -> ChainParams {
        ChainParams::solvable(self.t, self.u, self.delta, self.eta, length)
    }

    /// `Ũ = U - iδ`
    pub fn u_tilde(&self) -> c64 {
        c64::new(self.u, -self.delta)
    }

    /// `Ũ² = U² - δ² - 2iδU`
    pub fn u_tilde_sq(&self) -> c64 {
        c64::new(self.u * self.u - self.delta * self.delta, -2.0 * self.delta * self.u)
    }

    /// Endpoints `(x, r)` of branch `b`: branch 0 uses `+η`, branch 1 uses `-η`.
    fn branch_coefficients(&self, branch: usize) -> (c64, f64) {
        let eta = if branch == 0 { self.eta } else { -self.eta };
        (self.u_tilde() * (1.0 + eta), self.t * (1.0 - eta))
    }

    /// `Λ²/4` on branch `branch` at momentum `k`.
    pub fn band_square(&self, branch: usize, k: f64) -> c64 {
        self.band_square_cos(branch, k.cos())
    }

    /// `Λ²/4` as a function of `cos k`. At `k = π/2` pass `0.0` directly:
    /// `f64` π/2 has a cosine of about 6e-17, which the square root turns into
    /// a spurious `|Λ| ~ 1e-8` at a gap closing.
    pub fn band_square_cos(&self, branch: usize, cos_k: f64) -> c64 {
        let (x, r) = self.branch_coefficients(branch);
        x * x + r * r - 2.0 * x * r * cos_k
    }
}

/// `[Λ₁, -Λ₁, Λ₂, -Λ₂]` at momentum `k`, principal square root.
pub fn lambda_bands(p: &SolvableLimitParams, k: f64) -> [c64; 4] {
    lambda_bands_cos(p, k.cos())
}

pub fn lambda_bands_cos(p: &SolvableLimitParams, cos_k: f64) -> [c64; 4] {
    let l1 = 2.0 * p.band_square_cos(0, cos_k).sqrt();
    let l2 = 2.0 * p.band_square_cos(1, cos_k).sqrt();
    [l1, -l1, l2, -l2]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Ratio `(1+η)/(1-η)`.
    Upper,
    /// Ratio `(1-η)/(1+η)`.
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaRoot {
    pub branch: Branch,
    pub radicand: f64,
    /// `None` when the radicand is negative ("no real boundary").
    pub u_over_t: Option<f64>,
}

/// Closed-form boundary `U/t = sqrt(δ²/t² - ((1±η)/(1∓η))²)`, evaluated verbatim for both branches.
pub fn phase_boundary_formula(delta: f64, eta: f64, t: f64) -> [FormulaRoot; 2] {
    [Branch::Upper, Branch::Lower].map(|branch| {
        let (num, den) = match branch {
            Branch::Upper => (1.0 + eta, 1.0 - eta),
            Branch::Lower => (1.0 - eta, 1.0 + eta),
        };
        let radicand = if den == 0.0 { f64::NEG_INFINITY } else { (delta / t).powi(2) - (num / den).powi(2) };
        let u_over_t = (radicand >= 0.0).then(|| radicand.sqrt());
        FormulaRoot { branch, radicand, u_over_t }
    })
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Minimum of a unimodal `f` on `[lo, hi]`.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    let candidates = [(lo, f(lo)), (x1, f1), (x2, f2), (hi, f(hi))];
    candidates.into_iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap()
}

/// Minimum over `k ∈ [0, π]` of `f(b(k))` for a convex `f`, sampled on a
/// `k_points` grid over the Brillouin zone and polished by golden section.
/// `b` is even in `k`, so the half zone carries every value.
fn band_min(p: &SolvableLimitParams, branch: usize, k_points: usize, f: impl Fn(c64) -> f64) -> f64 {
    let half = (k_points / 2).max(2);
    let step = PI / half as f64;
    let g = |k: f64| f(p.band_square(branch, k));
    let (j_min, _) = (0..=half)
        .map(|j| (j, g(j as f64 * step)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let lo = (j_min.saturating_sub(1)) as f64 * step;
    let hi = ((j_min + 1).min(half)) as f64 * step;
    golden_min(g, lo, hi, 1e-12).1
}

/// Smallest `|Λ_k|` over both branches.
pub fn min_abs_lambda(p: &SolvableLimitParams, k_points: usize) -> f64 {
    (0..2).map(|b| 2.0 * band_min(p, b, k_points, |z| z.norm()).sqrt()).fold(f64::INFINITY, f64::min)
}

/// Gap-closing points `U/t` inside `u_range`.
///
/// For each branch, `g(U) = min_k |Λ_k²/4|` is scanned on a grid of spacing
/// at most `0.005 t`; every local minimum is polished by golden section in `U`
/// and kept when `g` vanishes there. Returned values are sorted and deduplicated.
pub fn locate_boundary_numeric(delta: f64, eta: f64, t: f64, u_range: (f64, f64)) -> Result<Vec<f64>> {
    locate_boundary_numeric_with(delta, eta, t, u_range, DEFAULT_K_POINTS)
}

pub fn locate_boundary_numeric_with(
    delta: f64,
    eta: f64,
    t: f64,
    u_range: (f64, f64),
    k_points: usize,
) -> Result<Vec<f64>> {
    let (u_lo, u_hi) = u_range;
    if !(u_lo.is_finite() && u_hi.is_finite()) || u_lo > u_hi {
        return Err(Error::Parameter(format!("invalid U range [{u_lo}, {u_hi}]")));
    }
    SolvableLimitParams::new(t, u_lo, delta, eta)?;
    let span = u_hi - u_lo;
    let n = ((span / (0.005 * t)).ceil() as usize).max(8);
    let u_at = |i: usize| u_lo + span * i as f64 / n as f64;
    let accept = 1e-9 * t * t;

    let mut roots = Vec::new();
    for branch in 0..2 {
        let g = |u: f64| {
            let p = SolvableLimitParams { t, u, delta, eta };
            band_min(&p, branch, k_points, |z| z.norm())
        };
        let samples: Vec<f64> = (0..=n).map(|i| g(u_at(i))).collect();
        for i in 0..=n {
            let left = if i == 0 { f64::INFINITY } else { samples[i - 1] };
            let right = if i == n { f64::INFINITY } else { samples[i + 1] };
            if samples[i] > left || samples[i] > right {
                continue;
            }
            let lo = u_at(i.saturating_sub(1));
            let hi = u_at((i + 1).min(n));
            let (u, value) = golden_min(g, lo, hi, 1e-13 * t.max(span));
            if value < accept {
                roots.push(u / t);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
    Ok(roots)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GapClass {
    /// Spectrum avoids the imaginary axis.
    RealLine,
    /// Spectrum avoids the real axis.
    ImagLine,
    /// Spectrum avoids only the origin.
    Point,
    /// Some `Λ_k` vanishes within tolerance.
    Gapless,
}

impl GapClass {
    pub fn label(&self) -> &'static str {
        match self {
            GapClass::RealLine => "real-line",
            GapClass::ImagLine => "imag-line",
            GapClass::Point => "point",
            GapClass::Gapless => "gapless",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub class: GapClass,
    pub tolerance: f64,
    pub k_points: usize,
    /// Minima over k and both branches of `|Re Λ/2|`, `|Im Λ/2|`, `|Λ/2|`.
    pub min_abs_re: f64,
    pub min_abs_im: f64,
    pub min_abs: f64,
}

impl GapReport {
    pub fn gapless(&self) -> bool {
        self.class == GapClass::Gapless
    }
}

/// Non-Hermitian gap class of the band spectrum `±Λ_k/2`.
///
/// The imaginary-line test runs before the real-line test; where both line
/// gaps are open the point is reported as [`GapClass::ImagLine`].
pub fn classify_gap(p: &SolvableLimitParams, tolerance: f64) -> GapReport {
    classify_gap_with(p, tolerance, DEFAULT_K_POINTS)
}

pub fn classify_gap_with(p: &SolvableLimitParams, tolerance: f64, k_points: usize) -> GapReport {
    // For s = sqrt(b): |Re s|² = (|b| + Re b)/2 and |Im s|² = (|b| - Re b)/2, both convex in b.
    let min_over = |f: &dyn Fn(c64) -> f64| (0..2).map(|b| band_min(p, b, k_points, f)).fold(f64::INFINITY, f64::min);
    let min_abs_re = (min_over(&|z: c64| (z.norm() + z.re).max(0.0)) / 2.0).sqrt();
    let min_abs_im = (min_over(&|z: c64| (z.norm() - z.re).max(0.0)) / 2.0).sqrt();
    let min_abs = min_over(&|z: c64| z.norm()).sqrt();
    let class = if min_abs <= tolerance {
        GapClass::Gapless
    } else if min_abs_im > tolerance {
        GapClass::ImagLine
    } else if min_abs_re > tolerance {
        GapClass::RealLine
    } else {
        GapClass::Point
    };
    GapReport { class, tolerance, k_points, min_abs_re, min_abs_im, min_abs }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeModeCoefficients {
    /// `U(1+η) / (t(1-η))`; `None` when `η = 1` and `U ≠ 0`.
    pub r_i: Option<f64>,
    /// `t(1+η) / (U(1-η))`; `None` when `U = 0` or `η = 1`.
    pub r_ii: Option<f64>,
    /// `a_{I,j} = -r_I^{j-1}`, empty when `r_I` is undefined.
    pub a_i: Vec<f64>,
    pub a_ii: Vec<f64>,
    pub normalizable_i: bool,
    pub normalizable_ii: bool,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    if den == 0.0 {
        (num == 0.0).then_some(0.0)
    } else {
        Some(num / den)
    }
}

/// Edge-mode amplitudes of `Q_I` and `Q_II` on `n_sites` sites, from the real part of `U`.
pub fn edge_coefficients(p: &SolvableLimitParams, n_sites: usize) -> EdgeModeCoefficients {
    let r_i = ratio(p.u * (1.0 + p.eta), p.t * (1.0 - p.eta));
    let r_ii = if p.u == 0.0 { None } else { ratio(p.t * (1.0 + p.eta), p.u * (1.0 - p.eta)) };
    let series = |r: Option<f64>| match r {
        Some(r) => (0..n_sites).map(|j| -r.powi(j as i32)).collect(),
        None => Vec::new(),
    };
    EdgeModeCoefficients {
        r_i,
        r_ii,
        a_i: series(r_i),
        a_ii: series(r_ii),
        normalizable_i: r_i.is_some_and(|r| r.abs() < 1.0),
        normalizable_ii: r_ii.is_some_and(|r| r.abs() < 1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Degeneracy {
    Single,
    Twofold,
    Fourfold,
}

impl Degeneracy {
    pub fn multiplicity(&self) -> u32 {
        match self {
            Degeneracy::Single => 1,
            Degeneracy::Twofold => 2,
            Degeneracy::Fourfold => 4,
        }
    }

    pub fn from_mode_count(count: usize) -> Self {
        match count {
            0 => Degeneracy::Single,
            1 => Degeneracy::Twofold,
            _ => Degeneracy::Fourfold,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegeneracyClass {
    pub kind: Degeneracy,
    pub provenance: Provenance,
}

impl DegeneracyClass {
    pub fn multiplicity(&self) -> u32 {
        self.kind.multiplicity()
    }
}

/// Degeneracy from counting normalizable edge modes.
///
/// `|U|` in the ratios is replaced by `|Ũ|`, which reduces to the edge-mode
/// ratios at `δ = 0` and places the region boundaries on the gap-closing
/// locus `|Ũ|(1±η) = t(1∓η)` otherwise.
pub fn predict_degeneracy(p: &SolvableLimitParams) -> DegeneracyClass {
    let (q_i, q_ii) = edge_modes_present(p);
    DegeneracyClass {
        kind: Degeneracy::from_mode_count(q_i as usize + q_ii as usize),
        provenance: Provenance::Analytic,
    }
}

/// Whether `Q_I` and `Q_II` are normalizable, with `|U|` replaced by `|Ũ|`.
pub fn edge_modes_present(p: &SolvableLimitParams) -> (bool, bool) {
    let u = p.u_tilde().norm();
    (u * (1.0 + p.eta) < p.t * (1.0 - p.eta), p.t * (1.0 + p.eta) < u * (1.0 - p.eta))
}

/// Distance in `U/t` from `u` to the nearest entry of `boundaries`.
pub fn boundary_distance(u_over_t: f64, boundaries: &[f64]) -> Option<f64> {
    boundaries.iter().map(|b| (b - u_over_t).abs()).min_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(u: f64, delta: f64, eta: f64) -> SolvableLimitParams {
        SolvableLimitParams::new(1.0, u, delta, eta).unwrap()
    }

    #[test]
    fn u_tilde_square_expansion() {
        for &(u, d) in &[(0.3, 0.7), (-1.2, 0.4), (0.0, 2.0), (2.5, 0.0)] {
            let p = sp(u, d, 0.1);
            assert_eq!(p.u_tilde() * p.u_tilde(), p.u_tilde_sq());
        }
    }

    #[test]
    fn flat_sweet_spot_bands() {
        let p = sp(0.0, 0.0, 0.0);
        for i in 0..16 {
            let k = -PI + i as f64 * PI / 8.0;
            let l = lambda_bands(&p, k);
            for (v, want) in l.iter().zip([2.0, -2.0, 2.0, -2.0]) {
                assert!((v - c64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn critical_delta_closes_gap() {
        let p = sp(0.0, 1.0, 0.0);
        assert!(lambda_bands_cos(&p, 0.0).iter().all(|z| z.norm() < 1e-12));
        assert!(lambda_bands(&p, PI / 2.0).iter().all(|z| z.norm() < 1e-7));
    }

    #[test]
    fn formula_as_written() {
        let [up, lo] = phase_boundary_formula(1.0, 0.0, 1.0);
        assert_eq!(up.u_over_t, Some(0.0));
        assert_eq!(lo.u_over_t, Some(0.0));
        assert!(phase_boundary_formula(0.0, 0.0, 1.0).iter().all(|r| r.u_over_t.is_none()));
        assert!(phase_boundary_formula(0.5, 0.0, 1.0).iter().all(|r| r.u_over_t.is_none()));
        let roots = phase_boundary_formula(3.0, 0.5, 1.0);
        assert_eq!(roots[0].branch, Branch::Upper);
        assert!(roots[0].u_over_t.unwrap().abs() < 1e-12);
        assert!((roots[1].u_over_t.unwrap() - (9.0f64 - 1.0 / 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn numeric_boundary_examples() {
        let r = locate_boundary_numeric(0.0, 0.0, 1.0, (-4.0, 4.0)).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0] + 1.0).abs() < 1e-6 && (r[1] - 1.0).abs() < 1e-6);

        let r = locate_boundary_numeric(1.0, 0.0, 1.0, (-2.0, 2.0)).unwrap();
        assert_eq!(r.len(), 1, "{r:?}");
        assert!(r[0].abs() < 1e-6);

        let r = locate_boundary_numeric(0.0, -0.5, 1.0, (0.0, 4.0)).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0] - 1.0 / 3.0).abs() < 1e-6 && (r[1] - 3.0).abs() < 1e-6);

        // |Ũ| = 1 at δ = 0.5
        let r = locate_boundary_numeric(0.5, 0.0, 1.0, (0.0, 2.0)).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.75f64.sqrt()).abs() < 1e-6);

        assert!(locate_boundary_numeric(0.0, 0.0, 1.0, (2.0, 3.0)).unwrap().is_empty());
        assert!(locate_boundary_numeric(0.0, 0.0, 1.0, (1.0, f64::NAN)).is_err());
    }

    #[test]
    fn gap_labels() {
        assert_eq!(classify_gap(&sp(0.0, 0.5, 0.0), 1e-6).class, GapClass::RealLine);
        assert_eq!(classify_gap(&sp(2.0, 0.5, 0.2), 1e-6).class, GapClass::ImagLine);
        assert_eq!(classify_gap(&sp(0.0, 0.5, -0.5), 1e-6).class, GapClass::Point);
        assert_eq!(classify_gap(&sp(1.0, 0.0, 0.0), 1e-6).class, GapClass::Gapless);
        assert_eq!(classify_gap(&sp(0.0, 1.0, 0.0), 1e-6).class, GapClass::Gapless);
        // Hermitian spectra are real: never an imaginary-line gap
        assert_eq!(classify_gap(&sp(0.3, 0.0, 0.2), 1e-6).class, GapClass::RealLine);
    }

    #[test]
    fn edge_examples() {
        let e = edge_coefficients(&sp(0.0, 0.0, 0.0), 4);
        assert_eq!(e.r_i, Some(0.0));
        assert_eq!(e.a_i, vec![-1.0, 0.0, 0.0, 0.0]);
        assert_eq!(e.r_ii, None);
        assert!(e.normalizable_i && !e.normalizable_ii);

        let e = edge_coefficients(&sp(1.0, 0.0, 0.0), 3);
        assert_eq!((e.r_i, e.r_ii), (Some(1.0), Some(1.0)));
        assert!(!e.normalizable_i && !e.normalizable_ii);

        let e = edge_coefficients(&sp(0.2, 0.0, -0.5), 3);
        assert!((e.r_i.unwrap() - 1.0 / 15.0).abs() < 1e-15);
        assert!((e.r_ii.unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert!((e.a_i[2] + 1.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn prediction_examples() {
        assert_eq!(predict_degeneracy(&sp(0.0, 0.0, 0.0)).kind, Degeneracy::Twofold);
        assert_eq!(predict_degeneracy(&sp(0.2, 0.0, -0.5)).kind, Degeneracy::Twofold);
        assert_eq!(predict_degeneracy(&sp(1.0, 0.0, -0.5)).kind, Degeneracy::Fourfold);
        for eta in [-0.9, -0.3, 0.0, 0.5, 0.9] {
            assert_eq!(predict_degeneracy(&sp(40.0, 0.0, eta)).kind, Degeneracy::Twofold);
        }
        assert_eq!(predict_degeneracy(&sp(1.0, 0.0, 0.5)).kind, Degeneracy::Single);
        assert_eq!(predict_degeneracy(&sp(0.5, 0.5, -0.6)).kind, Degeneracy::Fourfold);
        assert_eq!(predict_degeneracy(&sp(0.0, 0.0, 0.0)).provenance, Provenance::Analytic);
    }

    #[test]
    fn prediction_changes_on_numeric_locus() {
        for &(delta, eta) in &[(0.5, 0.0), (0.8, -0.4), (0.3, 0.6)] {
            for u in locate_boundary_numeric(delta, eta, 1.0, (0.0, 4.0)).unwrap() {
                let below = edge_modes_present(&sp(u - 1e-4, delta, eta));
                let above = edge_modes_present(&sp(u + 1e-4, delta, eta));
                assert_ne!(below, above, "delta={delta} eta={eta} u={u}");
            }
        }
    }
}
