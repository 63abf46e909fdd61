//! Degeneracy measure χ, local correlator Ξ(n) and finite-size extrapolation.

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::analytic::{Degeneracy, DegeneracyClass, Provenance};
use crate::error::{Error, Result};
use crate::fock::{FermionKind, FockBasis};
use crate::spectra::{ComplexSpectrum, ExcitationGaps, GroundStateInfo};

pub const CHI_FOURFOLD: f64 = 3.0;
pub const CHI_TWOFOLD: f64 = 1.5;

/// Default smearing `λ` in units of `1/t`.
pub const DEFAULT_LAMBDA: f64 = 20.0;

/// Negative extrapolated gaps closer to zero than this are plain rounding.
pub const CLAMP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyMeasure {
    pub chi: f64,
    pub lambda_smear: f64,
    pub class: DegeneracyClass,
    pub gaps_used: usize,
}

/// `χ = Σ_i exp(-λ ε_i)` over the supplied gaps. Negative gaps count as zero.
pub fn degeneracy_chi(gaps: &ExcitationGaps, lambda_smear: f64) -> Result<DegeneracyMeasure> {
    if !(lambda_smear > 0.0 && lambda_smear.is_finite()) {
        return Err(Error::Parameter(format!("lambda_smear must be positive and finite, got {lambda_smear}")));
    }
    if gaps.gaps.is_empty() {
        return Err(Error::Parameter("no excitation gaps supplied".into()));
    }
    let chi = gaps.gaps.iter().map(|&e| (-lambda_smear * e.max(0.0)).exp()).sum();
    Ok(DegeneracyMeasure { chi, lambda_smear, class: classify(chi), gaps_used: gaps.gaps.len() })
}

pub fn classify(chi: f64) -> DegeneracyClass {
    let kind = if chi >= CHI_FOURFOLD {
        Degeneracy::Fourfold
    } else if chi >= CHI_TWOFOLD {
        Degeneracy::Twofold
    } else {
        Degeneracy::Single
    };
    DegeneracyClass { kind, provenance: Provenance::Numeric }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorProfile {
    /// `xi[n - 1] = Ξ(n)` for sites `n = 1..=L`.
    pub xi: Vec<f64>,
    pub manifold_size: usize,
}

impl CorrelatorProfile {
    /// `Ξ(1) / Ξ(L/2)`.
    pub fn edge_bulk_ratio(&self) -> f64 {
        let l = self.xi.len();
        self.xi[0] / self.xi[(l / 2).max(1) - 1]
    }

    /// Largest `|Ξ(n) - Ξ(L+1-n)|`.
    pub fn mirror_asymmetry(&self) -> f64 {
        let l = self.xi.len();
        (0..l).map(|i| (self.xi[i] - self.xi[l - 1 - i]).abs()).fold(0.0, f64::max)
    }
}

/// `Ξ(n) = Σ_{α ∈ manifold} |⟨Ψ_α|c_n|GS⟩|² + |⟨Ψ_α|c†_n|GS⟩|²` with unit-norm right eigenvectors.
pub fn local_correlator(
    spectrum: &ComplexSpectrum,
    ground: &GroundStateInfo,
    basis: &FockBasis,
) -> Result<CorrelatorProfile> {
    if !spectrum.has_vectors() {
        return Err(Error::MissingVectors);
    }
    let dim = basis.dimension();
    if spectrum.source_dimension() != dim {
        return Err(Error::Construction(format!(
            "spectrum dimension {} does not match basis dimension {dim}",
            spectrum.source_dimension()
        )));
    }
    let gs = spectrum.vector(ground.index).ok_or(Error::MissingVectors)?;
    let manifold: Vec<&[c64]> = ground.manifold.iter().map(|&a| spectrum.vector(a).unwrap()).collect();

    let mut xi = Vec::with_capacity(basis.sites());
    for site in 1..=basis.sites() {
        let mut total = 0.0;
        for kind in [FermionKind::Annihilate, FermionKind::Create] {
            let mut image = vec![c64::new(0.0, 0.0); dim];
            for (state, &amp) in gs.iter().enumerate() {
                if let Some((target, sign)) = basis.apply(kind, site, state)? {
                    image[target] += amp * sign;
                }
            }
            for psi in &manifold {
                let overlap: c64 = psi.iter().zip(&image).map(|(p, x)| p.conj() * x).sum();
                total += overlap.norm_sqr();
            }
        }
        xi.push(total);
    }
    Ok(CorrelatorProfile { xi, manifold_size: manifold.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFit {
    /// Least-squares intercept before clamping.
    pub a_raw: f64,
    /// Intercept clamped at zero.
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// Set when the raw intercept lies below `-CLAMP_TOLERANCE`.
    pub overshoot: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationFit {
    pub sizes: Vec<usize>,
    pub levels: Vec<LevelFit>,
}

impl ExtrapolationFit {
    /// Clamped thermodynamic gaps, truncated to `count` levels.
    pub fn thermodynamic_gaps(&self, count: usize) -> ExcitationGaps {
        ExcitationGaps { gaps: self.levels.iter().take(count).map(|l| l.a).collect() }
    }

    pub fn any_overshoot(&self, count: usize) -> bool {
        self.levels.iter().take(count).any(|l| l.overshoot)
    }
}

/// Per-level least-squares fit of `ε_α(L) = a_α + b_α / L`.
/// Levels beyond the shortest gap list are dropped.
pub fn extrapolate(series: &[(usize, ExcitationGaps)]) -> Result<ExtrapolationFit> {
    let mut sizes: Vec<usize> = series.iter().map(|s| s.0).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::Parameter(format!("extrapolation needs at least 2 distinct sizes, got {}", sizes.len())));
    }
    if sizes[0] == 0 {
        return Err(Error::Parameter("system size 0 in extrapolation series".into()));
    }
    let levels = series.iter().map(|s| s.1.gaps.len()).min().unwrap_or(0);
    let xs: Vec<f64> = series.iter().map(|s| 1.0 / s.0 as f64).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();

    let fits = (0..levels)
        .map(|alpha| {
            let ys: Vec<f64> = series.iter().map(|s| s.1.gaps[alpha]).collect();
            let y_mean = ys.iter().sum::<f64>() / n;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
            let b = sxy / sxx;
            let a_raw = y_mean - b * x_mean;
            let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - a_raw - b * x).powi(2)).sum::<f64>() / n).sqrt();
            LevelFit { a_raw, a: a_raw.max(0.0), b, residual, overshoot: a_raw < -CLAMP_TOLERANCE }
        })
        .collect();
    Ok(ExtrapolationFit { sizes, levels: fits })
}
