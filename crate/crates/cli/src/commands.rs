use std::path::{Path, PathBuf};
use std::time::Instant;

use nhkitaev_core::analytic::SolvableLimitParams;
use nhkitaev_core::model::ChainParams;
use nhkitaev_core::output::{append_suffix, sibling_path, write_atomic, Format, Table};
use nhkitaev_core::spectra::SolverConfig;
use nhkitaev_core::sweep::{
    band_table, boundary_rows, boundary_table, clear_journal, correlator_profiles, correlator_summary,
    correlator_table, extrapolated_table, grid_table, run_sweep_journaled, sweep_metadata, PhaseDiagramGrid,
    PointStatus, SweepConfig, SweepProgress, DEFAULT_MANIFOLD_RESOLUTION,
};
use nhkitaev_core::Error;
use serde_json::{json, Value};

use crate::options::{Options, Range};

/// Process exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Capacity(String),
    Solver(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Capacity(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Capacity(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            Error::Solver { .. } => Failure::Solver(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn io(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Usage(format!("{}: {e}", path.display()))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Payload to `--out` (or stdout) plus the metadata and timing sidecars.
struct Sink {
    out: Option<PathBuf>,
    format: Format,
}

impl Sink {
    fn new(opts: &Options) -> Self {
        Sink { out: opts.out.clone(), format: opts.format() }
    }

    fn payload(&self, table: &Table) -> Outcome {
        let text = table.render(self.format);
        match &self.out {
            Some(path) => write_atomic(path, &text).map_err(io(path)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// A secondary table next to the payload, e.g. `grid.extrapolated.csv`.
    fn sibling(&self, tag: &str, table: &Table) -> Result<Option<PathBuf>, Failure> {
        let Some(out) = &self.out else { return Ok(None) };
        let path = sibling_path(out, tag);
        write_atomic(&path, &table.render(self.format)).map_err(io(&path))?;
        Ok(Some(path))
    }

    fn sidecars(&self, meta: Value, started: Instant, workers: usize) -> Outcome {
        let Some(out) = &self.out else { return Ok(()) };
        let meta_path = append_suffix(out, ".meta.json");
        write_atomic(&meta_path, &(serde_json::to_string_pretty(&meta).unwrap() + "\n")).map_err(io(&meta_path))?;
        let timing = json!({ "elapsed_seconds": started.elapsed().as_secs_f64(), "workers": workers });
        let timing_path = append_suffix(out, ".timing.json");
        write_atomic(&timing_path, &(serde_json::to_string_pretty(&timing).unwrap() + "\n")).map_err(io(&timing_path))
    }
}

fn file_name(p: &Option<PathBuf>) -> Value {
    p.as_ref().and_then(|p| p.file_name()).map(|n| Value::from(n.to_string_lossy().into_owned())).unwrap_or(Value::Null)
}

fn sweep_config(opts: &Options, default_sizes: &[usize]) -> SweepConfig {
    let d = SweepConfig::default();
    SweepConfig {
        hopping: opts.hopping.unwrap_or(d.hopping),
        pairing: opts.pairing.unwrap_or(d.pairing),
        nh_delta: opts.nh_delta.unwrap_or(d.nh_delta),
        mu: opts.mu.unwrap_or(d.mu),
        u_range: opts.u_range.map(|Range(a, b)| (a, b)).unwrap_or(d.u_range),
        u_step: opts.u_step.unwrap_or(d.u_step),
        eta_range: opts.eta_range.map(|Range(a, b)| (a, b)).unwrap_or(d.eta_range),
        eta_step: opts.eta_step.unwrap_or(d.eta_step),
        sizes: opts.sizes_or(default_sizes),
        lambda_smear: opts.lambda_smear.unwrap_or(d.lambda_smear),
        gap_count: opts.gap_count.or(d.gap_count),
        manifold_resolution: opts.manifold_resolution.unwrap_or(d.manifold_resolution),
        workers: opts.workers.unwrap_or_else(default_workers),
        seed: d.seed,
        dense_cap: opts.dense_cap.unwrap_or(d.dense_cap),
    }
}

/// Failed points do not abort a sweep, but they do set the exit code.
fn grid_outcome(grid: &PhaseDiagramGrid) -> Outcome {
    let capacity = grid.count_status(PointStatus::Capacity);
    let solver = grid.count_status(PointStatus::Solver) + grid.count_status(PointStatus::Failed);
    if capacity > 0 {
        Err(Failure::Capacity(format!("{capacity} grid point(s) exceeded the dense solver cap")))
    } else if solver > 0 {
        Err(Failure::Solver(format!("{solver} grid point(s) failed in the eigensolver")))
    } else {
        Ok(())
    }
}

fn run_grid(config: &SweepConfig, sink: &Sink) -> Result<PhaseDiagramGrid, Failure> {
    let journal = sink.out.as_ref().map(|o| append_suffix(o, ".partial.jsonl"));
    match run_sweep_journaled(config, journal.as_deref(), None)? {
        SweepProgress::Complete(grid) => Ok(grid),
        SweepProgress::Interrupted { done, total } => {
            Err(Failure::Solver(format!("sweep stopped after {done} of {total} points")))
        }
    }
}

fn finish_journal(sink: &Sink) -> Outcome {
    if let Some(out) = &sink.out {
        let journal = append_suffix(out, ".partial.jsonl");
        clear_journal(&journal)?;
    }
    Ok(())
}

pub fn sweep(opts: &Options) -> Outcome {
    let started = Instant::now();
    let config = sweep_config(opts, &[10]);
    config.validate()?;
    let sink = Sink::new(opts);
    let grid = run_grid(&config, &sink)?;
    sink.payload(&grid_table(&grid))?;
    sink.sidecars(sweep_metadata("sweep", &config, &grid), started, config.workers)?;
    finish_journal(&sink)?;
    grid_outcome(&grid)
}

pub fn extrapolate(opts: &Options) -> Outcome {
    let started = Instant::now();
    let config = sweep_config(opts, &[8, 10, 12]);
    config.validate()?;
    if config.sorted_sizes().len() < 2 {
        return Err(Failure::Usage("extrapolate needs at least two distinct sizes".into()));
    }
    let sink = Sink::new(opts);
    let grid = run_grid(&config, &sink)?;
    let layer = extrapolated_table(&grid);
    let extrapolated_path = if sink.out.is_some() {
        sink.payload(&grid_table(&grid))?;
        sink.sibling("extrapolated", &layer)?
    } else {
        sink.payload(&layer)?;
        None
    };
    let mut meta = sweep_metadata("extrapolate", &config, &grid);
    meta["extrapolated_file"] = file_name(&extrapolated_path);
    meta["extrapolation_gap_count"] = config.extrapolation_gap_count().into();
    sink.sidecars(meta, started, config.workers)?;
    finish_journal(&sink)?;
    grid_outcome(&grid)
}

pub fn boundary(opts: &Options) -> Outcome {
    let started = Instant::now();
    let t = opts.hopping.unwrap_or(1.0);
    let delta = opts.nh_delta.unwrap_or(0.0);
    let Range(eta_lo, eta_hi) = opts.eta_range.unwrap_or(Range(-0.9, 0.9));
    let eta_step = opts.eta_step.unwrap_or(0.1);
    let Range(u_lo, u_hi) = opts.u_range.unwrap_or(Range(-10.0 * t, 10.0 * t));
    if !(eta_step > 0.0) || !(eta_lo <= eta_hi) {
        return Err(Failure::Usage("eta range must be ordered with a positive step".into()));
    }
    let etas = nhkitaev_core::sweep::axis(eta_lo, eta_hi, eta_step);
    let rows = boundary_rows(delta, &etas, t, (u_lo, u_hi))?;
    let sink = Sink::new(opts);
    sink.payload(&boundary_table(&rows))?;
    let disagreements = rows.iter().filter(|r| !r.agree).count();
    let meta = json!({
        "command": "boundary",
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "hopping": t,
        "nh_delta": delta,
        "eta_range": [eta_lo, eta_hi],
        "eta_step": eta_step,
        "u_range": [u_lo, u_hi],
        "rows": rows.len(),
        "disagreeing_rows": disagreements,
    });
    sink.sidecars(meta, started, 1)
}

pub fn correlator(opts: &Options) -> Outcome {
    let started = Instant::now();
    let d = ChainParams::default();
    let params = ChainParams {
        hopping: opts.hopping.unwrap_or(d.hopping),
        pairing: opts.pairing.unwrap_or(d.pairing),
        hubbard_u: opts.hubbard_u.unwrap_or(d.hubbard_u),
        nh_delta: opts.nh_delta.unwrap_or(d.nh_delta),
        mu: opts.mu.unwrap_or(d.mu),
        eta: opts.eta.unwrap_or(d.eta),
        length: 2,
    };
    params.validate()?;
    let sizes = opts.sizes_or(&[6, 8, 10]);
    for &l in &sizes {
        params.clone().with_length(l).validate()?;
    }
    let resolution = opts.manifold_resolution.unwrap_or(DEFAULT_MANIFOLD_RESOLUTION);
    if !(resolution > 0.0) {
        return Err(Failure::Usage("manifold resolution must be positive".into()));
    }
    let solver = SolverConfig { dense_cap: opts.dense_cap.unwrap_or(SolverConfig::default().dense_cap) };
    let runs = correlator_profiles(&params, &sizes, resolution, &solver);

    let sink = Sink::new(opts);
    sink.payload(&correlator_table(&runs))?;
    let summary = correlator_summary(&runs);
    let summary_path = sink.sibling("summary", &summary)?;
    if sink.out.is_none() {
        eprint!("{}", summary.to_csv());
    }
    let meta = json!({
        "command": "correlator",
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "params": {
            "hopping": params.hopping, "pairing": params.pairing, "hubbard_u": params.hubbard_u,
            "nh_delta": params.nh_delta, "mu": params.mu, "eta": params.eta,
        },
        "sizes": sizes,
        "manifold_resolution": resolution,
        "dense_cap": solver.dense_cap,
        "summary_file": file_name(&summary_path),
        "status": runs.iter().map(|r| json!({ "L": r.length, "status": r.status.label() })).collect::<Vec<_>>(),
    });
    sink.sidecars(meta, started, 1)?;

    let worst = runs.iter().map(|r| r.status).fold(PointStatus::Ok, |acc, s| match (acc, s) {
        (PointStatus::Capacity, _) | (_, PointStatus::Capacity) => PointStatus::Capacity,
        (PointStatus::Ok, s) => s,
        (acc, _) => acc,
    });
    let failed: Vec<String> =
        runs.iter().filter_map(|r| r.result.as_ref().err().map(|e| format!("L={}: {e}", r.length))).collect();
    match worst {
        PointStatus::Ok => Ok(()),
        PointStatus::Capacity => Err(Failure::Capacity(failed.join("; "))),
        _ => Err(Failure::Solver(failed.join("; "))),
    }
}

pub fn bands(opts: &Options) -> Outcome {
    let started = Instant::now();
    let t = opts.hopping.unwrap_or(1.0);
    if opts.pairing.is_some_and(|p| p != t) || opts.mu.is_some_and(|m| m != 0.0) {
        return Err(Failure::Usage("bands needs the solvable limit: pairing equal to hopping and mu = 0".into()));
    }
    let p = SolvableLimitParams::new(t, opts.hubbard_u.unwrap_or(0.0), opts.nh_delta.unwrap_or(0.0), opts.eta.unwrap_or(0.0))?;
    let k_points = opts.k_points.unwrap_or(256);
    if k_points < 2 {
        return Err(Failure::Usage("k-points must be at least 2".into()));
    }
    let (table, report) = band_table(&p, k_points);
    let sink = Sink::new(opts);
    sink.payload(&table)?;
    if sink.out.is_none() {
        eprintln!("gap class: {}", report.class.label());
    }
    let meta = json!({
        "command": "bands",
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "params": { "hopping": p.t, "hubbard_u": p.u, "nh_delta": p.delta, "eta": p.eta },
        "k_points": k_points,
        "gap_class": report.class.label(),
        "gap_tolerance": report.tolerance,
        "min_abs_re": report.min_abs_re,
        "min_abs_im": report.min_abs_im,
        "min_abs": report.min_abs,
    });
    sink.sidecars(meta, started, 1)
}
