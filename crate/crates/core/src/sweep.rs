//! Parameter sweeps over the `(U, η)` plane and the derived tables
//! (boundaries, correlator profiles, bands).

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analytic::{
    boundary_distance, classify_gap, lambda_bands, locate_boundary_numeric, phase_boundary_formula, predict_degeneracy,
    Degeneracy, GapClass, GapReport, SolvableLimitParams, DEFAULT_GAP_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::fock::{FockBasis, MAX_SITES};
use crate::model::{build_interacting_h, ChainParams};
use crate::observables::{
    degeneracy_chi, extrapolate, local_correlator, CorrelatorProfile, CHI_FOURFOLD, CHI_TWOFOLD, DEFAULT_LAMBDA,
};
use crate::output::{Cell, Table};
use crate::spectra::{
    excitation_gaps, ground_state, parity_resolved_spectrum, ExcitationGaps, SolverConfig, DEFAULT_DENSE_CAP,
};

/// Default ground-state manifold resolution in units of `t`.
pub const DEFAULT_MANIFOLD_RESOLUTION: f64 = 0.15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub hopping: f64,
    pub pairing: f64,
    pub nh_delta: f64,
    pub mu: f64,
    pub u_range: (f64, f64),
    pub u_step: f64,
    pub eta_range: (f64, f64),
    pub eta_step: f64,
    pub sizes: Vec<usize>,
    pub lambda_smear: f64,
    /// Gaps entering χ; `None` means `L + 1`.
    pub gap_count: Option<usize>,
    pub manifold_resolution: f64,
    pub workers: usize,
    pub seed: u64,
    pub dense_cap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            hopping: 1.0,
            pairing: 1.0,
            nh_delta: 0.0,
            mu: 0.0,
            u_range: (-4.0, 4.0),
            u_step: 0.2,
            eta_range: (-1.0, 1.0),
            eta_step: 0.05,
            sizes: vec![10],
            lambda_smear: DEFAULT_LAMBDA,
            gap_count: None,
            manifold_resolution: DEFAULT_MANIFOLD_RESOLUTION,
            workers: 1,
            seed: 0,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

/// Inclusive grid `lo, lo + step, ...` up to `hi` (with a small slack for rounding).
pub fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.hopping, self.pairing, self.nh_delta, self.mu, self.lambda_smear, self.manifold_resolution];
        if !finite.iter().all(|x| x.is_finite()) {
            return Err(Error::Parameter("couplings and smearing must be finite".into()));
        }
        for (name, (lo, hi), step) in [("U", self.u_range, self.u_step), ("eta", self.eta_range, self.eta_step)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Parameter(format!("{name} range [{lo}, {hi}] must be finite and ordered")));
            }
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::Parameter(format!("{name} step must be positive, got {step}")));
            }
        }
        if self.eta_range.0 < -1.0 || self.eta_range.1 > 1.0 {
            return Err(Error::Parameter("eta range must lie inside [-1, 1]".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Parameter("at least one chain length is required".into()));
        }
        if let Some(&l) = self.sizes.iter().find(|&&l| !(2..=MAX_SITES).contains(&l)) {
            return Err(Error::Parameter(format!("chain length {l} outside 2..={MAX_SITES}")));
        }
        if !(self.lambda_smear > 0.0) {
            return Err(Error::Parameter(format!("lambda_smear must be positive, got {}", self.lambda_smear)));
        }
        if self.manifold_resolution <= 0.0 {
            return Err(Error::Parameter("manifold resolution must be positive".into()));
        }
        if self.gap_count == Some(0) {
            return Err(Error::Parameter("gap count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Parameter("workers must be at least 1".into()));
        }
        ChainParams { hopping: self.hopping, pairing: self.pairing, nh_delta: self.nh_delta, mu: self.mu, ..Default::default() }
            .validate()
    }

    pub fn u_values(&self) -> Vec<f64> {
        axis(self.u_range.0, self.u_range.1, self.u_step)
    }

    pub fn eta_values(&self) -> Vec<f64> {
        axis(self.eta_range.0, self.eta_range.1, self.eta_step)
    }

    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn gaps_for(&self, length: usize) -> usize {
        self.gap_count.unwrap_or(length + 1)
    }

    /// Gap count of the extrapolated layer, taken from the smallest size.
    pub fn extrapolation_gap_count(&self) -> usize {
        self.gaps_for(self.sorted_sizes()[0])
    }

    pub fn params(&self, u: f64, eta: f64, length: usize) -> ChainParams {
        ChainParams {
            hopping: self.hopping,
            pairing: self.pairing,
            hubbard_u: u,
            nh_delta: self.nh_delta,
            mu: self.mu,
            eta,
            length,
        }
    }

    pub fn is_solvable_limit(&self) -> bool {
        self.params(0.0, 0.0, 2).is_solvable_limit()
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig { dense_cap: self.dense_cap }
    }

    /// Everything that affects results; the worker count is excluded.
    pub fn fingerprint(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        v.as_object_mut().unwrap().remove("workers");
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointStatus {
    Ok,
    Capacity,
    Solver,
    Failed,
}

impl PointStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Capacity => "capacity",
            PointStatus::Solver => "solver",
            PointStatus::Failed => "failed",
        }
    }

    fn of(err: &Error) -> Self {
        match err {
            Error::Capacity { .. } => PointStatus::Capacity,
            Error::Solver { .. } => PointStatus::Solver,
            _ => PointStatus::Failed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeResult {
    pub length: usize,
    pub status: PointStatus,
    pub chi: Option<f64>,
    pub class: Option<Degeneracy>,
    /// Ascending excitation gaps, as many as any layer needs.
    pub gaps: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolatedResult {
    pub chi: f64,
    pub class: Degeneracy,
    pub gaps_used: usize,
    /// Some raw intercept fell below zero by more than the clamp tolerance.
    pub overshoot: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: usize,
    pub u: f64,
    pub eta: f64,
    pub sizes: Vec<SizeResult>,
    pub extrapolated: Option<ExtrapolatedResult>,
    pub gap_class: Option<GapClass>,
    pub predicted: Option<Degeneracy>,
    /// Distance in `U/t` to the nearest gap-closing point on this η row.
    pub boundary_distance: Option<f64>,
}

/// Row-major grid: η is the outer index, U the inner one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagramGrid {
    pub u_values: Vec<f64>,
    pub eta_values: Vec<f64>,
    pub sizes: Vec<usize>,
    pub points: Vec<GridPoint>,
}

impl PhaseDiagramGrid {
    pub fn point(&self, u_index: usize, eta_index: usize) -> &GridPoint {
        &self.points[eta_index * self.u_values.len() + u_index]
    }

    pub fn count_status(&self, status: PointStatus) -> usize {
        self.points.iter().flat_map(|p| &p.sizes).filter(|s| s.status == status).count()
    }
}

fn size_result(config: &SweepConfig, u: f64, eta: f64, length: usize, keep: usize) -> SizeResult {
    let run = || -> Result<(ExcitationGaps, f64)> {
        let params = config.params(u, eta, length);
        let basis = FockBasis::new(length)?;
        let h = build_interacting_h(&params, &basis)?;
        let spectrum = parity_resolved_spectrum(&h, &basis, false, &config.solver())?;
        let ground = ground_state(&spectrum, config.manifold_resolution);
        let gaps = excitation_gaps(&spectrum, &ground, keep.max(config.gaps_for(length)));
        let own = ExcitationGaps { gaps: gaps.gaps.iter().take(config.gaps_for(length)).copied().collect() };
        Ok((gaps, degeneracy_chi(&own, config.lambda_smear)?.chi))
    };
    match run() {
        Ok((gaps, chi)) => SizeResult {
            length,
            status: PointStatus::Ok,
            chi: Some(chi),
            class: Some(crate::observables::classify(chi).kind),
            gaps: gaps.gaps,
            error: None,
        },
        Err(e) => SizeResult {
            length,
            status: PointStatus::of(&e),
            chi: None,
            class: None,
            gaps: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn extrapolated_result(config: &SweepConfig, sizes: &[SizeResult]) -> Option<ExtrapolatedResult> {
    if sizes.len() < 2 || sizes.iter().any(|s| s.status != PointStatus::Ok) {
        return None;
    }
    let count = config.extrapolation_gap_count();
    let series: Vec<(usize, ExcitationGaps)> =
        sizes.iter().map(|s| (s.length, ExcitationGaps { gaps: s.gaps.iter().take(count).copied().collect() })).collect();
    let fit = extrapolate(&series).ok()?;
    let measure = degeneracy_chi(&fit.thermodynamic_gaps(count), config.lambda_smear).ok()?;
    Some(ExtrapolatedResult {
        chi: measure.chi,
        class: measure.class.kind,
        gaps_used: measure.gaps_used,
        overshoot: fit.any_overshoot(count),
    })
}

/// Evaluate one grid point for every configured size.
pub fn evaluate_point(config: &SweepConfig, index: usize, u: f64, eta: f64, boundaries: Option<&[f64]>) -> GridPoint {
    let sizes = config.sorted_sizes();
    let keep = config.extrapolation_gap_count();
    let results: Vec<SizeResult> = sizes.iter().map(|&l| size_result(config, u, eta, l, keep)).collect();
    let extrapolated = extrapolated_result(config, &results);
    let analytic = config
        .is_solvable_limit()
        .then(|| SolvableLimitParams { t: config.hopping, u, delta: config.nh_delta, eta });
    GridPoint {
        index,
        u,
        eta,
        sizes: results,
        extrapolated,
        gap_class: analytic.map(|p| classify_gap(&p, DEFAULT_GAP_TOLERANCE * config.hopping).class),
        predicted: analytic.map(|p| predict_degeneracy(&p).kind),
        boundary_distance: boundaries.and_then(|b| boundary_distance(u / config.hopping, b)),
    }
}

/// Gap-closing points for each η row, searched over the U range padded by `2t`.
pub fn row_boundaries(config: &SweepConfig) -> Result<Vec<Option<Vec<f64>>>> {
    let t = config.hopping;
    let range = (config.u_range.0 - 2.0 * t, config.u_range.1 + 2.0 * t);
    config
        .eta_values()
        .iter()
        .map(|&eta| {
            if config.is_solvable_limit() {
                locate_boundary_numeric(config.nh_delta, eta, t, range).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect()
}

pub enum SweepProgress {
    Complete(PhaseDiagramGrid),
    /// Stopped early; `done` points are in the journal.
    Interrupted { done: usize, total: usize },
}

fn make_pool(workers: usize) -> Result<rayon::ThreadPool> {
    faer::set_global_parallelism(faer::Par::Seq);
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))
}

/// Run a sweep entirely in memory.
pub fn run_sweep(config: &SweepConfig) -> Result<PhaseDiagramGrid> {
    match run_sweep_journaled(config, None, None)? {
        SweepProgress::Complete(grid) => Ok(grid),
        SweepProgress::Interrupted { .. } => unreachable!("no stop requested"),
    }
}

#[derive(Serialize, Deserialize)]
struct JournalHeader {
    config: Value,
}

fn read_journal(path: &Path, fingerprint: &Value) -> Result<BTreeMap<usize, GridPoint>> {
    let mut done = BTreeMap::new();
    let Ok(file) = File::open(path) else {
        return Ok(done);
    };
    let mut lines = BufReader::new(file).lines();
    let header: Option<JournalHeader> =
        lines.next().and_then(|l| l.ok()).and_then(|l| serde_json::from_str(&l).ok());
    if header.map(|h| &h.config != fingerprint).unwrap_or(true) {
        return Ok(done);
    }
    for line in lines {
        // A torn final line from an interrupted write is skipped.
        let Ok(line) = line else { break };
        if let Ok(point) = serde_json::from_str::<GridPoint>(&line) {
            done.insert(point.index, point);
        }
    }
    Ok(done)
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Parameter(format!("{}: {e}", path.display()))
}

/// Run a sweep, recording each finished point in `journal` (JSON lines) so a
/// restarted run with the same configuration only computes what is missing.
/// `stop_after` limits how many new points are computed in this call.
pub fn run_sweep_journaled(
    config: &SweepConfig,
    journal: Option<&Path>,
    stop_after: Option<usize>,
) -> Result<SweepProgress> {
    config.validate()?;
    let u_values = config.u_values();
    let eta_values = config.eta_values();
    let total = u_values.len() * eta_values.len();
    let fingerprint = config.fingerprint();

    let mut done = match journal {
        Some(path) => read_journal(path, &fingerprint)?,
        None => BTreeMap::new(),
    };
    let writer = match journal {
        Some(path) => {
            let fresh = done.is_empty();
            let mut f = if fresh {
                File::create(path).map_err(|e| io_error(path, e))?
            } else {
                OpenOptions::new().append(true).open(path).map_err(|e| io_error(path, e))?
            };
            if fresh {
                let header = serde_json::to_string(&JournalHeader { config: fingerprint.clone() }).unwrap();
                writeln!(f, "{header}").map_err(|e| io_error(path, e))?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };

    let boundaries = row_boundaries(config)?;
    let mut pending: Vec<usize> = (0..total).filter(|i| !done.contains_key(i)).collect();
    let interrupted = stop_after.is_some_and(|n| n < pending.len());
    if let Some(n) = stop_after {
        pending.truncate(n);
    }

    let pool = make_pool(config.workers)?;
    let fresh: Vec<GridPoint> = pool.install(|| {
        pending
            .par_iter()
            .map(|&index| {
                let (ei, ui) = (index / u_values.len(), index % u_values.len());
                let point = evaluate_point(config, index, u_values[ui], eta_values[ei], boundaries[ei].as_deref());
                if let Some(w) = &writer {
                    let line = serde_json::to_string(&point).unwrap();
                    let mut f = w.lock().unwrap();
                    let _ = writeln!(f, "{line}").and_then(|_| f.flush());
                }
                point
            })
            .collect()
    });
    for p in fresh {
        done.insert(p.index, p);
    }
    if interrupted {
        return Ok(SweepProgress::Interrupted { done: done.len(), total });
    }
    let points: Vec<GridPoint> = done.into_values().collect();
    debug_assert_eq!(points.len(), total);
    Ok(SweepProgress::Complete(PhaseDiagramGrid {
        u_values,
        eta_values,
        sizes: config.sorted_sizes(),
        points,
    }))
}

/// Remove a finished journal.
pub fn clear_journal(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(io_error(path, e)),
    }
}

fn degeneracy_label(d: Degeneracy) -> &'static str {
    match d {
        Degeneracy::Single => "none",
        Degeneracy::Twofold => "twofold",
        Degeneracy::Fourfold => "fourfold",
    }
}

/// One row per grid point and size, row-major in `(η, U, L)`.
pub fn grid_table(grid: &PhaseDiagramGrid) -> Table {
    let mut t = Table::new(&[
        "index",
        "u",
        "eta",
        "L",
        "status",
        "chi",
        "class",
        "chi_extrapolated",
        "class_extrapolated",
        "gap_class",
        "predicted_class",
        "boundary_distance",
    ]);
    for p in &grid.points {
        for s in &p.sizes {
            t.push(vec![
                p.index.into(),
                p.u.into(),
                p.eta.into(),
                s.length.into(),
                s.status.label().into(),
                s.chi.into(),
                s.class.map(degeneracy_label).into(),
                p.extrapolated.as_ref().map(|e| e.chi).into(),
                p.extrapolated.as_ref().map(|e| degeneracy_label(e.class)).into(),
                p.gap_class.map(|g| g.label()).into(),
                p.predicted.map(degeneracy_label).into(),
                p.boundary_distance.into(),
            ]);
        }
    }
    t
}

/// One row per grid point with the thermodynamic-limit layer.
pub fn extrapolated_table(grid: &PhaseDiagramGrid) -> Table {
    let mut t = Table::new(&["index", "u", "eta", "status", "chi_extrapolated", "class_extrapolated", "overshoot"]);
    for p in &grid.points {
        let status = if p.extrapolated.is_some() { "ok" } else { "failed" };
        t.push(vec![
            p.index.into(),
            p.u.into(),
            p.eta.into(),
            status.into(),
            p.extrapolated.as_ref().map(|e| e.chi).into(),
            p.extrapolated.as_ref().map(|e| degeneracy_label(e.class)).into(),
            p.extrapolated.as_ref().map(|e| if e.overshoot { "yes" } else { "no" }).into(),
        ]);
    }
    t
}

/// Fixed metadata written next to every output file.
pub fn sweep_metadata(command: &str, config: &SweepConfig, grid: &PhaseDiagramGrid) -> Value {
    serde_json::json!({
        "command": command,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config.fingerprint(),
        "lambda_smear": config.lambda_smear,
        "thresholds": { "fourfold": CHI_FOURFOLD, "twofold": CHI_TWOFOLD },
        "gap_tolerance": DEFAULT_GAP_TOLERANCE * config.hopping,
        "grid": { "u_points": grid.u_values.len(), "eta_points": grid.eta_values.len(), "sizes": grid.sizes },
        "status_counts": {
            "ok": grid.count_status(PointStatus::Ok),
            "capacity": grid.count_status(PointStatus::Capacity),
            "solver": grid.count_status(PointStatus::Solver),
            "failed": grid.count_status(PointStatus::Failed),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub eta: f64,
    pub formula_upper: Option<f64>,
    pub formula_lower: Option<f64>,
    /// Gap-closing points `U/t`, both signs.
    pub numeric: Vec<f64>,
    /// Whether the nonnegative numeric roots coincide with the formula roots (within 1e-6).
    pub agree: bool,
}

pub fn boundary_rows(delta: f64, eta_values: &[f64], t: f64, u_range: (f64, f64)) -> Result<Vec<BoundaryRow>> {
    eta_values
        .iter()
        .map(|&eta| {
            let [up, lo] = phase_boundary_formula(delta, eta, t);
            let numeric = locate_boundary_numeric(delta, eta, t, u_range)?;
            let mut formula: Vec<f64> = [up.u_over_t, lo.u_over_t].into_iter().flatten().collect();
            formula.sort_by(f64::total_cmp);
            formula.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
            let positive: Vec<f64> = numeric.iter().copied().filter(|&u| u >= -1e-7).map(f64::abs).collect();
            let agree = formula.len() == positive.len()
                && formula.iter().zip(&positive).all(|(a, b)| (a - b).abs() < 1e-6);
            Ok(BoundaryRow { eta, formula_upper: up.u_over_t, formula_lower: lo.u_over_t, numeric, agree })
        })
        .collect()
}

pub fn boundary_table(rows: &[BoundaryRow]) -> Table {
    let mut t = Table::new(&["eta", "formula_upper", "formula_lower", "numeric", "agree"]);
    for r in rows {
        let numeric = r.numeric.iter().map(|&u| crate::output::fmt_sig(u)).collect::<Vec<_>>().join(";");
        t.push(vec![
            r.eta.into(),
            r.formula_upper.into(),
            r.formula_lower.into(),
            Cell::Text(numeric),
            (if r.agree { "yes" } else { "no" }).into(),
        ]);
    }
    t
}

#[derive(Clone, Debug)]
pub struct CorrelatorRun {
    pub length: usize,
    pub result: std::result::Result<CorrelatorProfile, String>,
    pub status: PointStatus,
}

/// Ξ(n) for each size, using parity-resolved eigenvectors.
pub fn correlator_profiles(params: &ChainParams, sizes: &[usize], resolution: f64, solver: &SolverConfig) -> Vec<CorrelatorRun> {
    faer::set_global_parallelism(faer::Par::Seq);
    sizes
        .iter()
        .map(|&length| {
            let run = || -> Result<CorrelatorProfile> {
                let p = params.clone().with_length(length);
                let basis = FockBasis::new(length)?;
                let h = build_interacting_h(&p, &basis)?;
                let spectrum = parity_resolved_spectrum(&h, &basis, true, solver)?;
                let ground = ground_state(&spectrum, resolution);
                local_correlator(&spectrum, &ground, &basis)
            };
            match run() {
                Ok(profile) => CorrelatorRun { length, result: Ok(profile), status: PointStatus::Ok },
                Err(e) => CorrelatorRun { length, status: PointStatus::of(&e), result: Err(e.to_string()) },
            }
        })
        .collect()
}

pub fn correlator_table(runs: &[CorrelatorRun]) -> Table {
    let mut t = Table::new(&["L", "n", "xi"]);
    for run in runs {
        if let Ok(profile) = &run.result {
            for (i, &xi) in profile.xi.iter().enumerate() {
                t.push(vec![run.length.into(), (i + 1).into(), xi.into()]);
            }
        }
    }
    t
}

pub fn correlator_summary(runs: &[CorrelatorRun]) -> Table {
    let mut t = Table::new(&["L", "status", "manifold_size", "edge_bulk_ratio", "mirror_asymmetry"]);
    for run in runs {
        let profile = run.result.as_ref().ok();
        t.push(vec![
            run.length.into(),
            run.status.label().into(),
            profile.map(|p| p.manifold_size).into(),
            profile.map(|p| p.edge_bulk_ratio()).into(),
            profile.map(|p| p.mirror_asymmetry()).into(),
        ]);
    }
    t
}

/// `Λ_k` on a `k_points` grid over `[-π, π)` plus the gap classification.
pub fn band_table(p: &SolvableLimitParams, k_points: usize) -> (Table, GapReport) {
    let mut t = Table::new(&["k", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im"]);
    let n = k_points.max(1);
    for j in 0..n {
        let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let l = lambda_bands(p, k);
        t.push(vec![k.into(), l[0].re.into(), l[0].im.into(), l[2].re.into(), l[2].im.into()]);
    }
    let report = crate::analytic::classify_gap_with(p, DEFAULT_GAP_TOLERANCE * p.t, n.max(2));
    (t, report)
}
