use nhkitaev_core::analytic::locate_boundary_numeric;
use nhkitaev_core::sweep::{run_sweep, SweepConfig};

/// Extrapolated class changes along the η = ±0.4 rows sit within 0.15t of the analytic boundaries, and
/// every analytic boundary inside the scan has a class change next to it.
#[test]
fn extrapolated_transitions_follow_analytic_boundaries() {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let mut problems = Vec::new();
    for eta in [-0.4, 0.4] {
        let cfg = SweepConfig {
            u_range: (-3.0, 3.0),
            u_step: 0.1,
            eta_range: (eta, eta),
            sizes: vec![8, 10, 12],
            workers,
            ..Default::default()
        };
        let grid = run_sweep(&cfg).unwrap();
        let classes: Vec<(f64, _)> = grid.points.iter().map(|p| (p.u, p.extrapolated.as_ref().unwrap().class)).collect();
        let changes: Vec<f64> =
            classes.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| 0.5 * (w[0].0 + w[1].0)).collect();
        let analytic = locate_boundary_numeric(0.0, eta, 1.0, (-3.0, 3.0)).unwrap();
        for &c in &changes {
            if !analytic.iter().any(|a| (a - c).abs() <= 0.15) {
                problems.push(format!("eta={eta}: class change at U={c:+.2} far from {analytic:?}"));
            }
        }
        for &a in &analytic {
            if !changes.iter().any(|c| (a - c).abs() <= 0.15) {
                problems.push(format!("eta={eta}: no class change near boundary U={a:+.3} (changes {changes:?})"));
            }
        }
    }
    assert!(problems.is_empty(), "{}", problems.join("\n"));
}
