use nhkitaev_core::analytic::{predict_degeneracy, Degeneracy, SolvableLimitParams};
use nhkitaev_core::sweep::{run_sweep, SweepConfig};

fn ed_class(u: f64, eta: f64, length: usize) -> (Degeneracy, f64) {
    let cfg = SweepConfig {
        u_range: (u, u),
        eta_range: (eta, eta),
        sizes: vec![length],
        ..Default::default()
    };
    let grid = run_sweep(&cfg).unwrap();
    let s = &grid.points[0].sizes[0];
    (s.class.unwrap(), s.chi.unwrap())
}

#[test]
fn weakly_coupled_mode_example() {
    let sp = SolvableLimitParams::new(1.0, 0.2, 0.0, -0.5).unwrap();
    assert_eq!(predict_degeneracy(&sp).kind, Degeneracy::Twofold);
    let (class, chi) = ed_class(0.2, -0.5, 10);
    assert_eq!(class, Degeneracy::Twofold, "chi = {chi}");
}

#[test]
fn fourfold_example_matches_ed() {
    let sp = SolvableLimitParams::new(1.0, 1.0, 0.0, -0.5).unwrap();
    assert_eq!(predict_degeneracy(&sp).kind, Degeneracy::Fourfold);
    let (class, chi) = ed_class(1.0, -0.5, 10);
    assert_eq!(class, Degeneracy::Fourfold, "chi = {chi}");
}

/// Prediction vs the L = 10 class on a 9×9 grid, skipping points within 0.1t of a boundary.
#[test]
fn prediction_agrees_with_ed_on_grid() {
    let cfg = SweepConfig {
        u_range: (-2.0, 2.0),
        u_step: 0.5,
        eta_range: (-0.8, 0.8),
        eta_step: 0.2,
        sizes: vec![10],
        ..Default::default()
    };
    let grid = run_sweep(&cfg).unwrap();
    assert_eq!(grid.points.len(), 81);
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for p in &grid.points {
        if p.boundary_distance.is_some_and(|d| d < 0.1) {
            continue;
        }
        compared += 1;
        let ed = p.sizes[0].class.unwrap();
        if Some(ed) != p.predicted {
            mismatches.push(format!(
                "U={:+.1} eta={:+.1}: ed {:?} (chi {:.3}) vs predicted {:?}",
                p.u,
                p.eta,
                ed,
                p.sizes[0].chi.unwrap(),
                p.predicted.unwrap()
            ));
        }
    }
    assert!(mismatches.is_empty(), "{} of {compared} points disagree:\n{}", mismatches.len(), mismatches.join("\n"));
}
