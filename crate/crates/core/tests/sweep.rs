use std::f64::consts::PI;

use cdw_lab::model::{FieldDriveParams, PhysicalParams};
use cdw_lab::variational::{sweep_theta, theta_grid, MinimizerOptions, QuadratureSpec, SweepMode, SWEEP_COLUMNS};

fn coupled() -> PhysicalParams {
    PhysicalParams {
        d1: 174.091,
        e1: 1e-5,
        e2: 1e-6,
        delta_prime: 0.005,
        hbar: 1.0,
        ..PhysicalParams::default()
    }
}

#[test]
fn warm_and_cold_sweeps_agree() {
    let grid = theta_grid(-2.0 * PI, 2.0 * PI, 9).unwrap();
    let run = |mode| {
        sweep_theta(
            &coupled(),
            &FieldDriveParams::default(),
            &grid,
            &QuadratureSpec::default(),
            &MinimizerOptions::default(),
            mode,
        )
        .unwrap()
    };
    let warm = run(SweepMode::WarmStart);
    let cold = run(SweepMode::ColdStart);
    assert_eq!(warm.rows.len(), grid.len());
    for (w, c) in warm.rows.iter().zip(&cold.rows) {
        assert_eq!(w.theta, c.theta);
        assert!(w.converged && c.converged);
        let rel = (w.energy - c.energy).abs() / w.energy.abs();
        assert!(rel < 1e-8, "theta {}: warm {} cold {}", w.theta, w.energy, c.energy);
        assert!((w.mean_phi - c.mean_phi).abs() < 1e-3);
    }
}

#[test]
fn sweep_is_mirror_symmetric() {
    // E_min(−Θ) = E_min(Θ) and ⟨Φ⟩(−Θ) = −⟨Φ⟩(Θ) for the symmetric comb
    let grid = theta_grid(-PI, PI, 5).unwrap();
    let s = sweep_theta(
        &coupled(),
        &FieldDriveParams::default(),
        &grid,
        &QuadratureSpec::default(),
        &MinimizerOptions::default(),
        SweepMode::ColdStart,
    )
    .unwrap();
    let n = s.rows.len();
    for i in 0..n / 2 {
        let (a, b) = (&s.rows[i], &s.rows[n - 1 - i]);
        assert!((a.energy - b.energy).abs() < 1e-9 * a.energy);
        assert!((a.mean_phi + b.mean_phi).abs() < 1e-3);
    }
}

#[test]
fn table_rows_follow_grid_order() {
    let grid = theta_grid(0.0, PI, 4).unwrap();
    let opts = MinimizerOptions {
        max_evals: 3000,
        ..MinimizerOptions::default()
    };
    let q = QuadratureSpec {
        panels: 40,
        ..QuadratureSpec::default()
    };
    let s = sweep_theta(&coupled(), &FieldDriveParams::default(), &grid, &q, &opts, SweepMode::ColdStart).unwrap();
    let t = s.to_table();
    assert_eq!(t.columns(), SWEEP_COLUMNS);
    let thetas: Vec<f64> = s.rows.iter().map(|r| r.theta).collect();
    assert_eq!(thetas, grid);
}
