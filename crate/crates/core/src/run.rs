//! Experiment dispatch behind the command-line tool.

use std::path::PathBuf;

use crate::config::{Experiment, RunConfig};
use crate::error::{CdwError, Result};
use crate::evolver::{evolve_with, ComplexField, StepOptions};
use crate::sine_gordon::{integrate_chain_rk4, kink_chain_state, snapshots_table, KinkLattice, KinkSpec};
use crate::table::CurveTable;
use crate::tunneling::{fourier_table, iv_curve, thin_wall_fourier_modes, CurrentParams, PairGeometry};
use crate::variational::{sweep_theta, theta_grid};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub experiment: Experiment,
    pub path: PathBuf,
    pub rows: usize,
    /// Anything worth telling the user that is not an error.
    pub note: Option<String>,
}

/// Exit status for a failed run: 2 for configuration problems, 1 otherwise.
pub fn exit_status(e: &CdwError) -> i32 {
    match e {
        CdwError::Config { .. } => 2,
        _ => 1,
    }
}

/// One-line `error: <code>: <detail>` message.
pub fn error_line(e: &CdwError) -> String {
    format!("error: {}: {}", e.code(), e)
}

/// Computes the experiment's table without touching the filesystem.
pub fn compute(cfg: &RunConfig) -> Result<(CurveTable, Option<String>)> {
    cfg.params.validate()?;
    if cfg.experimental_regime {
        cfg.params.validate_experimental()?;
    }
    cfg.drive.validate()?;
    match cfg.experiment {
        Experiment::SingleChain => single_chain(cfg),
        Experiment::PendulumKink => pendulum(cfg).map(|t| (t, None)),
        Experiment::VariationalSweep => sweep(cfg).map(|t| (t, None)),
        Experiment::IvCurve => iv(cfg).map(|t| (t, None)),
        Experiment::FourierCheck => fourier(cfg).map(|t| (t, None)),
    }
}

/// Runs the experiment and writes its CSV to `cfg.output`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let (table, note) = compute(cfg)?;
    table.write_atomic(&cfg.output)?;
    Ok(RunSummary {
        experiment: cfg.experiment,
        path: cfg.output.clone(),
        rows: table.rows().len(),
        note,
    })
}

fn single_chain(cfg: &RunConfig) -> Result<(CurveTable, Option<String>)> {
    let c = &cfg.chain;
    let init = ComplexField::gaussian_packet(c.points, c.x_min, c.x_max, c.x_c, c.alpha0)?;
    let opts = StepOptions {
        boundary: c.boundary,
        jacobi_sweeps: c.jacobi_sweeps,
    };
    let traj = evolve_with(c.scheme, &init, &cfg.params, &cfg.drive, c.dt, c.steps, opts)?;
    let note = traj
        .truncated_at
        .map(|s| format!("amplitudes overflowed at step {s}; trajectory truncated"));
    Ok((traj.to_table(), note))
}

fn pendulum(cfg: &RunConfig) -> Result<CurveTable> {
    let c = &cfg.pendulum;
    let lat = KinkLattice {
        sites: c.sites,
        spacing: c.spacing,
        omega0_sq: c.omega0 * c.omega0,
        omega1_sq: c.omega1 * c.omega1,
        center: 0.5 * (c.sites.saturating_sub(1)) as f64 * c.spacing,
    };
    let state = kink_chain_state(&lat, KinkSpec::new(c.beta, c.sign)?)?;
    let snaps = integrate_chain_rk4(&state, c.dt, c.steps, c.stride)?;
    Ok(snapshots_table(&snaps))
}

fn sweep(cfg: &RunConfig) -> Result<CurveTable> {
    let v = &cfg.variational;
    let grid = theta_grid(v.theta_min, v.theta_max, v.points)?;
    let res = sweep_theta(&cfg.params, &cfg.drive, &grid, &v.quadrature, &v.minimizer, v.mode)?;
    Ok(res.to_table())
}

/// Current parameters shared by the iv-curve experiment and the FFI.
pub fn current_params(cfg: &RunConfig) -> CurrentParams {
    CurrentParams {
        e_t: cfg.drive.e_threshold,
        c_v: cfg.drive.c_v,
        c_tilde: cfg.current.c_tilde,
        g_p: cfg.drive.g_p,
        gate_zener: cfg.current.gate_zener,
        form: cfg.current.form,
    }
}

fn iv(cfg: &RunConfig) -> Result<CurveTable> {
    let cp = current_params(cfg);
    cp.validate()?;
    let n = cfg.current.points;
    if n == 0 {
        return Err(CdwError::domain("current.points must be >= 1"));
    }
    let e_max = cfg.current.e_max.unwrap_or(5.0 * cp.e_t * cp.c_v);
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(CdwError::domain("current.E_max must be positive"));
    }
    let grid: Vec<f64> = (1..=n).map(|k| e_max * k as f64 / n as f64).collect();
    iv_curve(&grid, &cp)
}

fn fourier(cfg: &RunConfig) -> Result<CurveTable> {
    let f = &cfg.fourier;
    let g = PairGeometry::centered(f.l, f.b, f.n1)?;
    Ok(fourier_table(&thin_wall_fourier_modes(&g, f.modes, f.box_len)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_status(&CdwError::config(3, "x")), 2);
        assert_eq!(exit_status(&CdwError::domain("x")), 1);
        assert_eq!(exit_status(&CdwError::Convergence { evals: 1, best_energy: 0.0 }), 1);
        assert_eq!(error_line(&CdwError::domain("bad D")), "error: domain: bad D");
    }

    #[test]
    fn iv_defaults() {
        let cfg = parse_config("experiment = iv-curve\n").unwrap();
        let (t, _) = compute(&cfg).unwrap();
        assert_eq!(t.rows().len(), 1000);
        assert!(t.column("I_beckwith").unwrap().iter().all(|v| *v > 0.0));
        assert_eq!(t.rows()[999][0], 5.0);
    }

    #[test]
    fn domain_errors_surface() {
        let cfg = parse_config("experiment = iv-curve\nD = -1\n").unwrap();
        assert!(matches!(compute(&cfg), Err(CdwError::Domain(_))));
        let cfg = parse_config("experiment = iv-curve\nexperimental_regime = true\nmu_E = 0.5\n").unwrap();
        assert!(matches!(compute(&cfg), Err(CdwError::Domain(_))));
    }

    #[test]
    fn run_writes_only_output() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("f.csv");
        let mut cfg = parse_config("experiment = fourier-check\nfourier.modes = 3\n").unwrap();
        cfg.output = out.clone();
        let s = run(&cfg).unwrap();
        assert_eq!(s.rows, 3);
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from("f.csv")]);
    }
}
