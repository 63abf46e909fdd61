use nhkitaev_core::analytic::Degeneracy;
use nhkitaev_core::output::Format;
use nhkitaev_core::sweep::{
    boundary_rows, boundary_table, clear_journal, correlator_profiles, grid_table, run_sweep, run_sweep_journaled,
    SweepConfig, SweepProgress,
};
use nhkitaev_core::model::ChainParams;
use nhkitaev_core::spectra::SolverConfig;

fn small() -> SweepConfig {
    SweepConfig {
        u_range: (-1.0, 1.0),
        u_step: 0.5,
        eta_range: (-0.4, 0.4),
        eta_step: 0.4,
        sizes: vec![4, 6],
        nh_delta: 0.3,
        ..Default::default()
    }
}

#[test]
fn single_point_sweet_spot() {
    let cfg = SweepConfig { u_range: (0.0, 0.0), eta_range: (0.0, 0.0), sizes: vec![2], ..Default::default() };
    let grid = run_sweep(&cfg).unwrap();
    assert_eq!(grid.points.len(), 1);
    // gaps {0, 0, 2}: chi = 2 + e^{-40}
    let chi = grid.points[0].sizes[0].chi.unwrap();
    assert!((chi - 2.0).abs() < 1e-15, "{chi}");
    assert_eq!(grid.points[0].sizes[0].class, Some(Degeneracy::Twofold));
}

#[test]
fn completeness_and_order() {
    let cfg = small();
    let grid = run_sweep(&cfg).unwrap();
    let table = grid_table(&grid);
    assert_eq!(table.len(), 5 * 3 * 2);
    let etas: Vec<f64> = grid.points.iter().map(|p| p.eta).collect();
    assert!(etas.windows(2).all(|w| w[0] <= w[1]));
    for (i, p) in grid.points.iter().enumerate() {
        assert_eq!(p.index, i);
        assert_eq!(p.u, grid.u_values[i % 5]);
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let one = run_sweep(&SweepConfig { workers: 1, ..small() }).unwrap();
    let three = run_sweep(&SweepConfig { workers: 3, ..small() }).unwrap();
    for f in [Format::Csv, Format::Json] {
        assert_eq!(grid_table(&one).render(f), grid_table(&three).render(f));
    }
}

#[test]
fn interrupted_sweep_resumes_to_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("grid.csv.partial.jsonl");
    let cfg = small();
    let reference = grid_table(&run_sweep(&cfg).unwrap()).to_csv();

    match run_sweep_journaled(&cfg, Some(&journal), Some(4)).unwrap() {
        SweepProgress::Interrupted { done, total } => assert_eq!((done, total), (4, 15)),
        SweepProgress::Complete(_) => panic!("should have stopped"),
    }
    // simulate a torn write from the interruption
    let mut text = std::fs::read_to_string(&journal).unwrap();
    text.push_str("{\"index\": 9, \"u\"");
    std::fs::write(&journal, text).unwrap();

    let resumed = match run_sweep_journaled(&SweepConfig { workers: 2, ..cfg.clone() }, Some(&journal), None).unwrap() {
        SweepProgress::Complete(g) => g,
        SweepProgress::Interrupted { .. } => panic!("should finish"),
    };
    assert_eq!(grid_table(&resumed).to_csv(), reference);
    clear_journal(&journal).unwrap();
    assert!(!journal.exists());
}

#[test]
fn journal_from_other_config_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("j.jsonl");
    let cfg = small();
    let _ = run_sweep_journaled(&cfg, Some(&journal), Some(3)).unwrap();
    let other = SweepConfig { mu: 0.2, ..cfg };
    let grid = match run_sweep_journaled(&other, Some(&journal), None).unwrap() {
        SweepProgress::Complete(g) => g,
        SweepProgress::Interrupted { .. } => unreachable!(),
    };
    assert_eq!(grid_table(&grid).to_csv(), grid_table(&run_sweep(&other).unwrap()).to_csv());
}

#[test]
fn hermitian_fourfold_region_is_at_negative_eta() {
    let cfg = SweepConfig { u_step: 0.4, eta_step: 0.1, sizes: vec![10], ..Default::default() };
    let grid = run_sweep(&cfg).unwrap();
    assert_eq!(grid.points.len(), 21 * 21);
    let fourfold: Vec<_> = grid.points.iter().filter(|p| p.sizes[0].class == Some(Degeneracy::Fourfold)).collect();
    assert!(!fourfold.is_empty());
    let outside: Vec<String> = fourfold
        .iter()
        .filter(|p| p.eta >= 0.0)
        .map(|p| format!("U={:+.1} eta={:+.1} chi={:.3}", p.u, p.eta, p.sizes[0].chi.unwrap()))
        .collect();
    assert!(outside.is_empty(), "fourfold cells at eta >= 0:\n{}", outside.join("\n"));
}

#[test]
fn strong_loss_removes_fourfold_cells_next_to_origin() {
    // The cells around (U, η) = (0, 0) of the 21×21 grid over [-4, 4] × [-1, 1].
    let cfg = SweepConfig {
        nh_delta: 1.5,
        u_range: (-0.4, 0.4),
        u_step: 0.4,
        eta_range: (-0.1, 0.1),
        eta_step: 0.1,
        sizes: vec![10],
        ..Default::default()
    };
    let grid = run_sweep(&cfg).unwrap();
    assert_eq!(grid.points.len(), 9);
    assert!(grid.points.iter().all(|p| p.sizes[0].class != Some(Degeneracy::Fourfold)));
}

#[test]
fn boundary_table_examples() {
    let etas: Vec<f64> = (-9..=9).map(|i| i as f64 / 10.0).collect();
    let rows = boundary_rows(0.0, &etas, 1.0, (-25.0, 25.0)).unwrap();
    for r in &rows {
        let a = (1.0 + r.eta) / (1.0 - r.eta);
        let positive: Vec<f64> = r.numeric.iter().copied().filter(|&u| u > 0.0).collect();
        let mut want = vec![a.min(1.0 / a), a.max(1.0 / a)];
        want.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
        assert_eq!(positive.len(), want.len(), "{r:?}");
        for (p, w) in positive.iter().zip(&want) {
            assert!((p - w).abs() < 1e-6);
        }
    }

    let rows = boundary_rows(1.0, &[0.0], 1.0, (-4.0, 4.0)).unwrap();
    assert_eq!(rows[0].numeric.len(), 1);
    assert!(rows[0].numeric[0].abs() < 1e-6);

    let rows = boundary_rows(0.5, &etas, 1.0, (-4.0, 4.0)).unwrap();
    let csv = boundary_table(&rows).to_csv();
    assert!(!csv.contains("nan"));
    // outer root grows with |η|, inner root shrinks until it disappears
    let roots: Vec<Vec<f64>> = rows
        .iter()
        .filter(|r| r.eta >= 0.0)
        .map(|r| r.numeric.iter().copied().filter(|&u| u > 0.0).collect())
        .collect();
    let outer: Vec<f64> = roots.iter().filter_map(|r| r.last().copied()).collect();
    let inner: Vec<f64> = roots.iter().filter(|r| r.len() == 2).map(|r| r[0]).collect();
    assert!(outer.len() >= 5 && inner.len() >= 2);
    assert!(outer.windows(2).all(|w| w[1] > w[0]), "{outer:?}");
    assert!(inner.windows(2).all(|w| w[1] < w[0]), "{inner:?}");
    let mirrored: Vec<Vec<f64>> = rows
        .iter()
        .rev()
        .filter(|r| r.eta <= 0.0)
        .map(|r| r.numeric.iter().copied().filter(|&u| u > 0.0).collect())
        .collect();
    for (a, b) in roots.iter().zip(&mirrored) {
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-6));
    }
}

#[test]
fn correlator_profiles_report_capacity_per_size() {
    let p = ChainParams { eta: 0.0, ..ChainParams::solvable(1.0, 0.3, 0.2, 0.0, 2) };
    let runs = correlator_profiles(&p, &[4, 6], 0.15, &SolverConfig { dense_cap: 16 });
    assert!(runs[0].result.is_ok());
    assert!(runs[1].result.is_err());
    let profile = runs[0].result.as_ref().unwrap();
    assert!(profile.mirror_asymmetry() < 1e-8);
}
