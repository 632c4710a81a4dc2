//! Two-chain variational ground state.
//!
//! The trial state is a product of one Gaussian comb per chain,
//! `Ψ(φ₁, φ₂) = [Σ_m b_m g(φ₁ − 2πm)]·[Σ_m c_m g(φ₂ − 2πm)]` with
//! `g(u) = exp(−α·u²)` and `m = −2..=2`. Because the state factorizes and
//! every potential term is a sum of products of one-chain functions, the
//! 2-D quadrature collapses into a handful of 1-D moments per chain.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ensure_finite, CdwError, Result};
use crate::model::{FieldDriveParams, PhysicalParams};
use crate::quadrature::CompositeRule;
use crate::simplex::{nelder_mead, SimplexOptions};
use crate::table::CurveTable;

/// Comb indices `m = −2..=2`.
pub const COMB_INDICES: [i32; 5] = [-2, -1, 0, 1, 2];

/// Gaussians below `exp(-SKIP_EXPONENT)` are treated as zero.
const SKIP_EXPONENT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzCoeffs {
    pub b: [f64; 5],
    pub c: [f64; 5],
    pub alpha: f64,
}

impl AnsatzCoeffs {
    /// Projects `b` and `c` onto the unit sphere.
    pub fn new(b: [f64; 5], c: [f64; 5], alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(CdwError::domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(AnsatzCoeffs {
            b: project(&b)?,
            c: project(&c)?,
            alpha,
        })
    }

    /// All weight on well `m` for both chains.
    pub fn single_well(m: i32, alpha: f64) -> Result<Self> {
        let idx = COMB_INDICES
            .iter()
            .position(|&k| k == m)
            .ok_or_else(|| CdwError::domain(format!("well index {m} outside -2..=2")))?;
        let mut e = [0.0; 5];
        e[idx] = 1.0;
        AnsatzCoeffs::new(e, e, alpha)
    }

    pub fn uniform(alpha: f64) -> Result<Self> {
        AnsatzCoeffs::new([1.0; 5], [1.0; 5], alpha)
    }

    /// Unconstrained simplex coordinates `(b, c, ln α)`.
    fn to_params(self) -> Vec<f64> {
        let mut x = Vec::with_capacity(11);
        x.extend_from_slice(&self.b);
        x.extend_from_slice(&self.c);
        x.push(self.alpha.ln());
        x
    }

    fn from_params(x: &[f64]) -> Option<Self> {
        let mut b = [0.0; 5];
        let mut c = [0.0; 5];
        b.copy_from_slice(&x[..5]);
        c.copy_from_slice(&x[5..10]);
        let alpha = x[10].exp();
        AnsatzCoeffs::new(b, c, alpha).ok()
    }
}

fn project(v: &[f64; 5]) -> Result<[f64; 5]> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(CdwError::domain("coefficient vector must be nonzero and finite"));
    }
    Ok(v.map(|x| x / n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Integration box is `[−η·π, η·π]` on each axis.
    pub eta: f64,
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            eta: 20.0,
            panels: 80,
            order: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(CdwError::domain("eta must be positive"));
        }
        if self.panels < 1 || self.order < 2 {
            return Err(CdwError::domain("need panels >= 1 and order >= 2"));
        }
        Ok(())
    }

    pub fn rule(&self) -> Result<CompositeRule> {
        self.validate()?;
        let h = self.eta * PI;
        CompositeRule::uniform(-h, h, self.panels, self.order)
    }
}

/// `Σ_m w_m·exp(−α(φ − 2πm)²)`.
pub fn comb_value(phi: f64, w: &[f64; 5], alpha: f64) -> f64 {
    COMB_INDICES
        .iter()
        .zip(w)
        .map(|(&m, &wm)| {
            let u = phi - 2.0 * PI * f64::from(m);
            wm * (-alpha * u * u).exp()
        })
        .sum()
}

/// Exact second derivative of [`comb_value`].
pub fn comb_second_derivative(phi: f64, w: &[f64; 5], alpha: f64) -> f64 {
    COMB_INDICES
        .iter()
        .zip(w)
        .map(|(&m, &wm)| {
            let u = phi - 2.0 * PI * f64::from(m);
            wm * (-alpha * u * u).exp() * (4.0 * alpha * alpha * u * u - 2.0 * alpha)
        })
        .sum()
}

/// Unnormalized product amplitude.
pub fn ansatz_value(phi1: f64, phi2: f64, a: &AnsatzCoeffs) -> f64 {
    comb_value(phi1, &a.b, a.alpha) * comb_value(phi2, &a.c, a.alpha)
}

/// One-chain integrals of the comb `f` on the quadrature rule.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChainMoments {
    /// `∫ f²`
    pub norm: f64,
    /// `∫ f·(−f″)`
    pub kinetic: f64,
    /// `∫ f²·(1 − cos φ)`
    pub pinning: f64,
    /// `∫ f²·(φ − Θ)²`
    pub charging: f64,
    /// `∫ f²·cos φ`
    pub cos: f64,
    /// `∫ f²·sin φ`
    pub sin: f64,
    /// `∫ f²·φ`
    pub first: f64,
}

pub fn chain_moments(rule: &CompositeRule, w: &[f64; 5], alpha: f64, theta: f64) -> ChainMoments {
    let mut mo = ChainMoments::default();
    let centers = COMB_INDICES.map(|m| 2.0 * PI * f64::from(m));
    for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let mut f = 0.0;
        let mut fpp = 0.0;
        for (c, wm) in centers.iter().zip(w) {
            if *wm == 0.0 {
                continue;
            }
            let u = x - c;
            let e = alpha * u * u;
            if e > SKIP_EXPONENT {
                continue;
            }
            let g = wm * (-e).exp();
            f += g;
            fpp += g * (4.0 * alpha * alpha * u * u - 2.0 * alpha);
        }
        if f == 0.0 {
            continue;
        }
        let f2 = wt * f * f;
        let (s, c) = x.sin_cos();
        let dt = x - theta;
        mo.norm += f2;
        mo.kinetic -= wt * f * fpp;
        mo.pinning += f2 * (1.0 - c);
        mo.charging += f2 * dt * dt;
        mo.cos += f2 * c;
        mo.sin += f2 * s;
        mo.first += f2 * x;
    }
    mo
}

/// `∬ |Ψ|²` over the η-box.
pub fn norm_squared(a: &AnsatzCoeffs, q: &QuadratureSpec) -> Result<f64> {
    let rule = q.rule()?;
    let m1 = chain_moments(&rule, &a.b, a.alpha, 0.0);
    let m2 = chain_moments(&rule, &a.c, a.alpha, 0.0);
    checked_norm(m1.norm * m2.norm)
}

fn checked_norm(n: f64) -> Result<f64> {
    if n.is_finite() && n > 0.0 {
        Ok(n)
    } else {
        Err(CdwError::Quadrature(format!("non-positive norm {n}")))
    }
}

/// Energy from the one-chain moments of both combs.
pub fn energy_from_moments(m1: &ChainMoments, m2: &ChainMoments, p: &PhysicalParams) -> Result<f64> {
    let n = checked_norm(m1.norm * m2.norm)?;
    let kin = p.hbar * p.hbar / (2.0 * p.d1) * (m1.kinetic * m2.norm + m1.norm * m2.kinetic);
    let pin = p.e1 * (m1.pinning * m2.norm + m1.norm * m2.pinning);
    let chg = p.e2 * (m1.charging * m2.norm + m1.norm * m2.charging);
    let cpl = p.delta_prime * (n - m1.cos * m2.cos - m1.sin * m2.sin);
    Ok((kin + pin + chg + cpl) / n)
}

/// `⟨Ψ|H|Ψ⟩/⟨Ψ|Ψ⟩` for the two-chain Hamiltonian at driving phase `theta`.
pub fn energy_expectation(a: &AnsatzCoeffs, p: &PhysicalParams, theta: f64, q: &QuadratureSpec) -> Result<f64> {
    ensure_finite("theta", theta)?;
    p.validate()?;
    let rule = q.rule()?;
    energy_with_rule(a, p, theta, &rule)
}

fn energy_with_rule(a: &AnsatzCoeffs, p: &PhysicalParams, theta: f64, rule: &CompositeRule) -> Result<f64> {
    let m1 = chain_moments(rule, &a.b, a.alpha, theta);
    let m2 = chain_moments(rule, &a.c, a.alpha, theta);
    energy_from_moments(&m1, &m2, p)
}

/// `⟨½(φ₁ + φ₂)⟩`, normalized.
pub fn phase_expectation(a: &AnsatzCoeffs, q: &QuadratureSpec) -> Result<f64> {
    let rule = q.rule()?;
    phase_with_rule(a, &rule)
}

fn phase_with_rule(a: &AnsatzCoeffs, rule: &CompositeRule) -> Result<f64> {
    let m1 = chain_moments(rule, &a.b, a.alpha, 0.0);
    let m2 = chain_moments(rule, &a.c, a.alpha, 0.0);
    checked_norm(m1.norm)?;
    checked_norm(m2.norm)?;
    Ok(0.5 * (m1.first / m1.norm + m2.first / m2.norm))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerOptions {
    /// Width parameter of the fixed seeds.
    pub alpha0: f64,
    /// Initial simplex edge for the comb coefficients.
    pub coeff_step: f64,
    /// Initial simplex edge for `ln α`.
    pub log_alpha_step: f64,
    pub max_evals: usize,
    pub ftol: f64,
    pub xtol: f64,
    /// Extra simplex runs started from the best point.
    pub restarts: usize,
    /// Additional seeds drawn from a ChaCha stream.
    pub random_seeds: usize,
    pub seed: u64,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        MinimizerOptions {
            alpha0: 0.3,
            coeff_step: 0.2,
            log_alpha_step: 0.5,
            max_evals: 20_000,
            ftol: 1e-15,
            xtol: 1e-7,
            restarts: 1,
            random_seeds: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub coeffs: AnsatzCoeffs,
    pub energy: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Local minimum of the energy reached from `init`.
///
/// Fails with a convergence error when the evaluation cap is hit before the
/// simplex collapses; [`minimize_from`] returns the best point instead.
pub fn minimize_energy(
    p: &PhysicalParams,
    theta: f64,
    q: &QuadratureSpec,
    init: &AnsatzCoeffs,
    opts: &MinimizerOptions,
) -> Result<(AnsatzCoeffs, f64)> {
    let m = minimize_from(p, theta, q, init, opts)?;
    if m.converged {
        Ok((m.coeffs, m.energy))
    } else {
        Err(CdwError::Convergence {
            evals: m.evals,
            best_energy: m.energy,
        })
    }
}

pub fn minimize_from(
    p: &PhysicalParams,
    theta: f64,
    q: &QuadratureSpec,
    init: &AnsatzCoeffs,
    opts: &MinimizerOptions,
) -> Result<Minimum> {
    ensure_finite("theta", theta)?;
    p.validate()?;
    let rule = q.rule()?;
    minimize_with_rule(p, theta, &rule, init, opts)
}

fn minimize_with_rule(
    p: &PhysicalParams,
    theta: f64,
    rule: &CompositeRule,
    init: &AnsatzCoeffs,
    opts: &MinimizerOptions,
) -> Result<Minimum> {
    let objective = |x: &[f64]| match AnsatzCoeffs::from_params(x) {
        Some(a) => energy_with_rule(&a, p, theta, rule).unwrap_or(f64::INFINITY),
        None => f64::INFINITY,
    };
    let mut step = vec![opts.coeff_step; 10];
    step.push(opts.log_alpha_step);
    let sopts = SimplexOptions {
        initial_step: step,
        ftol: opts.ftol,
        xtol: opts.xtol,
        max_evals: opts.max_evals,
    };

    let start_energy = energy_with_rule(init, p, theta, rule)?;
    let mut best = Minimum {
        coeffs: *init,
        energy: start_energy,
        evals: 1,
        converged: false,
    };
    let mut x = init.to_params();
    for _ in 0..=opts.restarts {
        let r = nelder_mead(objective, &x, &sopts);
        best.evals += r.evals;
        let coeffs = AnsatzCoeffs::from_params(&r.x)
            .ok_or_else(|| CdwError::Quadrature("simplex left the admissible region".into()))?;
        if r.fx <= best.energy {
            best.coeffs = coeffs;
            best.energy = r.fx;
        }
        best.converged = r.converged;
        // restart from the projected point so the flat radial directions reset
        x = best.coeffs.to_params();
    }
    Ok(best)
}

/// How successive sweep points are seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Each point also starts from the previous point's optimum.
    WarmStart,
    /// Points are independent and evaluated in parallel.
    ColdStart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    /// Drive time `Θ/a_D`; NaN when `a_D = 0`.
    pub time: f64,
    pub energy: f64,
    pub mean_phi: f64,
    pub converged: bool,
    pub coeffs: AnsatzCoeffs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_COLUMNS: [&str; 15] = [
    "theta", "E_min", "mean_Phi", "converged", "b_-2", "b_-1", "b_0", "b_1", "b_2", "c_-2", "c_-1", "c_0", "c_1",
    "c_2", "alpha",
];

impl SweepResult {
    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.energy).collect()
    }

    pub fn mean_phases(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_phi).collect()
    }

    pub fn to_table(&self) -> CurveTable {
        let mut t = CurveTable::new(SWEEP_COLUMNS);
        for r in &self.rows {
            let mut row = vec![r.theta, r.energy, r.mean_phi, if r.converged { 1.0 } else { 0.0 }];
            row.extend_from_slice(&r.coeffs.b);
            row.extend_from_slice(&r.coeffs.c);
            row.push(r.coeffs.alpha);
            t.push_row(row).expect("fixed arity");
        }
        t
    }
}

/// Uniform grid of `n` points over `[lo, hi]`.
pub fn theta_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CdwError::domain("theta grid needs n >= 2 and lo < hi"));
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * h }).collect())
}

/// Deterministic seeds for one sweep point.
fn fixed_seeds(theta: f64, opts: &MinimizerOptions, index: usize) -> Result<Vec<AnsatzCoeffs>> {
    let mut seeds = vec![
        AnsatzCoeffs::single_well(0, opts.alpha0)?,
        AnsatzCoeffs::uniform(opts.alpha0)?,
    ];
    let nearest = (theta / (2.0 * PI)).round().clamp(-2.0, 2.0) as i32;
    if nearest != 0 {
        seeds.push(AnsatzCoeffs::single_well(nearest, opts.alpha0)?);
    }
    if opts.random_seeds > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(index as u64);
        for _ in 0..opts.random_seeds {
            let b: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let c: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let alpha = opts.alpha0 * (rng.gen_range(-1.0..1.0f64)).exp();
            if let Ok(a) = AnsatzCoeffs::new(b, c, alpha) {
                seeds.push(a);
            }
        }
    }
    Ok(seeds)
}

fn best_of(
    p: &PhysicalParams,
    theta: f64,
    rule: &CompositeRule,
    seeds: &[AnsatzCoeffs],
    opts: &MinimizerOptions,
) -> Result<Minimum> {
    let results: Vec<Result<Minimum>> = seeds
        .par_iter()
        .map(|s| minimize_with_rule(p, theta, rule, s, opts))
        .collect();
    let mut best: Option<Minimum> = None;
    for r in results {
        let m = r?;
        // first seed wins ties, which keeps the choice deterministic
        if best.is_none_or(|b| m.energy < b.energy) {
            best = Some(m);
        }
    }
    best.ok_or_else(|| CdwError::domain("no seeds"))
}

/// Minimizes the energy at every Θ on the grid.
pub fn sweep_theta(
    p: &PhysicalParams,
    drive: &FieldDriveParams,
    grid: &[f64],
    q: &QuadratureSpec,
    opts: &MinimizerOptions,
    mode: SweepMode,
) -> Result<SweepResult> {
    p.validate()?;
    drive.validate()?;
    if grid.is_empty() {
        return Err(CdwError::domain("theta grid is empty"));
    }
    if grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CdwError::domain("theta grid must be finite and strictly increasing"));
    }
    let rule = q.rule()?;
    let row = |theta: f64, m: Minimum| -> Result<SweepRow> {
        Ok(SweepRow {
            theta,
            time: if drive.a_d != 0.0 { theta / drive.a_d } else { f64::NAN },
            energy: m.energy,
            mean_phi: phase_with_rule(&m.coeffs, &rule)?,
            converged: m.converged,
            coeffs: m.coeffs,
        })
    };

    let rows = match mode {
        SweepMode::ColdStart => grid
            .par_iter()
            .enumerate()
            .map(|(i, &theta)| {
                let seeds = fixed_seeds(theta, opts, i)?;
                row(theta, best_of(p, theta, &rule, &seeds, opts)?)
            })
            .collect::<Result<Vec<_>>>()?,
        SweepMode::WarmStart => {
            let mut rows: Vec<SweepRow> = Vec::with_capacity(grid.len());
            for (i, &theta) in grid.iter().enumerate() {
                let mut seeds = fixed_seeds(theta, opts, i)?;
                if let Some(prev) = rows.last() {
                    seeds.push(prev.coeffs);
                }
                rows.push(row(theta, best_of(p, theta, &rule, &seeds, opts)?)?);
            }
            rows
        }
    };
    Ok(SweepResult { rows })
}

/// Strict interior local minima after collapsing runs of equal values.
pub fn count_local_minima(values: &[f64]) -> usize {
    let mut v: Vec<f64> = Vec::with_capacity(values.len());
    for &x in values {
        if v.last() != Some(&x) {
            v.push(x);
        }
    }
    v.windows(3).filter(|w| w[1] < w[0] && w[1] < w[2]).count()
}

/// Steps between flat stretches of a staircase.
///
/// Consecutive samples closer than `flat_tol` belong to the same plateau;
/// plateaus shorter than two samples are ignored. Each returned value is the
/// signed change from the end of one plateau to the start of the next.
pub fn plateau_jumps(values: &[f64], flat_tol: f64) -> Vec<f64> {
    let mut plateaus: Vec<(f64, f64)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let breaks = i == values.len() || (values[i] - values[i - 1]).abs() >= flat_tol;
        if breaks {
            if i - start >= 2 {
                plateaus.push((values[start], values[i - 1]));
            }
            start = i;
        }
    }
    plateaus.windows(2).map(|w| w[1].0 - w[0].1).collect()
}

/// Number of plateau jumps within `rel_tol` of a full `2π`.
pub fn count_tunneling_jumps(values: &[f64], flat_tol: f64, rel_tol: f64) -> usize {
    plateau_jumps(values, flat_tol)
        .iter()
        .filter(|j| (j.abs() - 2.0 * PI).abs() <= rel_tol * 2.0 * PI)
        .count()
}
