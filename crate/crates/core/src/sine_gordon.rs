//! Pendulum chain, its sine-Gordon continuum limit and the kink solution.
//!
//! The chain obeys
//! `φ̈_i = ω₀²·(φ_{i+1} − 2φ_i + φ_{i−1}) − ω₁²·sin φ_i`
//! with both end sites clamped. With lattice spacing `d` and `v = ω₀·d`
//! the continuum limit in `z = ω₁·x/v`, `τ = ω₁·t` is
//! `φ_ττ − φ_zz + sin φ = 0`.

use std::f64::consts::PI;

use crate::error::{ensure_positive, CdwError, Result};
use crate::table::CurveTable;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub phi: Vec<f64>,
    pub phi_dot: Vec<f64>,
    pub omega0_sq: f64,
    pub omega1_sq: f64,
}

impl ChainState {
    pub fn new(phi: Vec<f64>, phi_dot: Vec<f64>, omega0_sq: f64, omega1_sq: f64) -> Result<Self> {
        if phi.len() != phi_dot.len() {
            return Err(CdwError::domain("phi and phi_dot lengths differ"));
        }
        if phi.len() < 3 {
            return Err(CdwError::domain("a chain needs at least 3 sites"));
        }
        if !(omega0_sq >= 0.0 && omega1_sq >= 0.0) {
            return Err(CdwError::domain("frequencies squared must be >= 0"));
        }
        if phi.iter().chain(&phi_dot).any(|v| !v.is_finite()) {
            return Err(CdwError::domain("chain state must be finite"));
        }
        Ok(ChainState {
            phi,
            phi_dot,
            omega0_sq,
            omega1_sq,
        })
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Kinetic plus potential energy per `m·l²`:
    /// `Σ ½φ̇² + ½ω₀² Σ (φ_{i+1} − φ_i)² + ω₁² Σ (1 − cos φ_i)`.
    pub fn energy(&self) -> f64 {
        let kinetic: f64 = self.phi_dot.iter().map(|v| 0.5 * v * v).sum();
        let spring: f64 = self
            .phi
            .windows(2)
            .map(|w| 0.5 * self.omega0_sq * (w[1] - w[0]).powi(2))
            .sum();
        let gravity: f64 = self.phi.iter().map(|p| self.omega1_sq * (1.0 - p.cos())).sum();
        kinetic + spring + gravity
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkSpec {
    pub beta: f64,
    /// `+1` kink, `−1` antikink.
    pub sign: i8,
}

impl KinkSpec {
    pub fn new(beta: f64, sign: i8) -> Result<Self> {
        let k = KinkSpec { beta, sign };
        k.validate()?;
        Ok(k)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta.abs() < 1.0) {
            return Err(CdwError::domain(format!("|beta| must be < 1, got {}", self.beta)));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(CdwError::domain("sign must be +1 or -1"));
        }
        Ok(())
    }

    fn gamma_inv(&self) -> f64 {
        (1.0 - self.beta * self.beta).sqrt()
    }
}

/// `4·arctan(exp(±(z + β·τ)/√(1 − β²)))`, in `(0, 2π)`.
pub fn kink_phase(z: f64, tau: f64, k: KinkSpec) -> Result<f64> {
    k.validate()?;
    Ok(kink_unchecked(z, tau, k))
}

fn kink_unchecked(z: f64, tau: f64, k: KinkSpec) -> f64 {
    let u = f64::from(k.sign) * (z + k.beta * tau) / k.gamma_inv();
    4.0 * u.exp().atan()
}

/// `∂φ/∂τ` of the kink.
fn kink_rate(z: f64, tau: f64, k: KinkSpec) -> f64 {
    let g = k.gamma_inv();
    let u = f64::from(k.sign) * (z + k.beta * tau) / g;
    2.0 * f64::from(k.sign) * k.beta / (g * u.cosh())
}

/// `(x, t) → (ω₁·x/v, ω₁·t)`.
pub fn nondimensionalize(x: f64, t: f64, v: f64, omega1: f64) -> Result<(f64, f64)> {
    ensure_positive("v", v)?;
    ensure_positive("omega1", omega1)?;
    Ok((omega1 * x / v, omega1 * t))
}

pub fn dimensionalize(z: f64, tau: f64, v: f64, omega1: f64) -> Result<(f64, f64)> {
    ensure_positive("v", v)?;
    ensure_positive("omega1", omega1)?;
    Ok((z * v / omega1, tau / omega1))
}

/// Central-difference residual of `φ_ττ − φ_zz + sin φ` at the interior
/// points of the middle level.
pub fn sine_gordon_residual(levels: [&[f64]; 3], dz: f64, dtau: f64) -> Result<Vec<f64>> {
    ensure_positive("dz", dz)?;
    ensure_positive("dtau", dtau)?;
    let [before, now, after] = levels;
    let n = now.len();
    if n < 3 {
        return Err(CdwError::domain("residual needs at least 3 spatial points"));
    }
    if before.len() != n || after.len() != n {
        return Err(CdwError::domain("time levels have different lengths"));
    }
    let (it2, iz2) = (1.0 / (dtau * dtau), 1.0 / (dz * dz));
    Ok((1..n - 1)
        .map(|i| {
            (after[i] - 2.0 * now[i] + before[i]) * it2 - (now[i + 1] - 2.0 * now[i] + now[i - 1]) * iz2
                + now[i].sin()
        })
        .collect())
}

/// Chain accelerations; clamped end sites get zero.
pub fn chain_acceleration(s: &ChainState) -> Vec<f64> {
    let mut acc = vec![0.0; s.len()];
    accelerate(&s.phi, s.omega0_sq, s.omega1_sq, &mut acc);
    acc
}

fn accelerate(phi: &[f64], w0: f64, w1: f64, out: &mut [f64]) {
    let n = phi.len();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for i in 1..n - 1 {
        out[i] = w0 * (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) - w1 * phi[i].sin();
    }
}

/// Snapshot of the chain at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub state: ChainState,
}

/// Classical fourth-order Runge-Kutta on `(φ, φ̇)`. Returns the initial
/// state and every `stride`-th step (plus the final step).
pub fn integrate_chain_rk4(s: &ChainState, dt: f64, steps: usize, stride: usize) -> Result<Vec<Snapshot>> {
    ensure_positive("dt", dt)?;
    if steps == 0 {
        return Err(CdwError::domain("steps must be >= 1"));
    }
    let stride = stride.max(1);
    let n = s.len();
    let (w0, w1) = (s.omega0_sq, s.omega1_sq);
    let mut phi = s.phi.clone();
    let mut vel = s.phi_dot.clone();
    vel[0] = 0.0;
    vel[n - 1] = 0.0;

    let mut k1a = vec![0.0; n];
    let mut k2a = vec![0.0; n];
    let mut k3a = vec![0.0; n];
    let mut k4a = vec![0.0; n];
    let mut tmp_phi = vec![0.0; n];
    let mut v2 = vec![0.0; n];
    let mut v3 = vec![0.0; n];
    let mut v4 = vec![0.0; n];

    let mut out = vec![Snapshot {
        t: 0.0,
        state: s.clone(),
    }];
    let h = dt;
    for step in 1..=steps {
        accelerate(&phi, w0, w1, &mut k1a);

        for i in 0..n {
            tmp_phi[i] = phi[i] + 0.5 * h * vel[i];
            v2[i] = vel[i] + 0.5 * h * k1a[i];
        }
        accelerate(&tmp_phi, w0, w1, &mut k2a);

        for i in 0..n {
            tmp_phi[i] = phi[i] + 0.5 * h * v2[i];
            v3[i] = vel[i] + 0.5 * h * k2a[i];
        }
        accelerate(&tmp_phi, w0, w1, &mut k3a);

        for i in 0..n {
            tmp_phi[i] = phi[i] + h * v3[i];
            v4[i] = vel[i] + h * k3a[i];
        }
        accelerate(&tmp_phi, w0, w1, &mut k4a);

        for i in 0..n {
            phi[i] += h / 6.0 * (vel[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            vel[i] += h / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
        }
        if phi.iter().chain(&vel).any(|v| !v.is_finite()) {
            return Err(CdwError::Overflow { step });
        }
        if step % stride == 0 || step == steps {
            out.push(Snapshot {
                t: step as f64 * dt,
                state: ChainState {
                    phi: phi.clone(),
                    phi_dot: vel.clone(),
                    omega0_sq: w0,
                    omega1_sq: w1,
                },
            });
        }
    }
    Ok(out)
}

/// Lattice layout for a discretized kink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkLattice {
    pub sites: usize,
    /// Lattice spacing `d`.
    pub spacing: f64,
    pub omega0_sq: f64,
    pub omega1_sq: f64,
    /// Position of the `φ = π` crossing at `t = 0`.
    pub center: f64,
}

impl KinkLattice {
    /// Continuum wave speed `v = ω₀·d`.
    pub fn wave_speed(&self) -> f64 {
        self.omega0_sq.sqrt() * self.spacing
    }

    /// Kink width `√(1 − β²)·v/ω₁` measured in lattice sites.
    pub fn width_in_sites(&self, beta: f64) -> f64 {
        (1.0 - beta * beta).sqrt() * self.omega0_sq.sqrt() / self.omega1_sq.sqrt()
    }
}

/// Samples the analytic kink and its analytic time derivative on the
/// lattice; the end sites are pinned to the asymptotic values.
pub fn kink_chain_state(lat: &KinkLattice, k: KinkSpec) -> Result<ChainState> {
    k.validate()?;
    if lat.sites < 3 {
        return Err(CdwError::domain("a chain needs at least 3 sites"));
    }
    ensure_positive("spacing", lat.spacing)?;
    ensure_positive("omega0_sq", lat.omega0_sq)?;
    ensure_positive("omega1_sq", lat.omega1_sq)?;
    let v = lat.wave_speed();
    let w1 = lat.omega1_sq.sqrt();
    let mut phi = Vec::with_capacity(lat.sites);
    let mut vel = Vec::with_capacity(lat.sites);
    for i in 0..lat.sites {
        let x = i as f64 * lat.spacing - lat.center;
        let z = w1 * x / v;
        phi.push(kink_unchecked(z, 0.0, k));
        vel.push(w1 * kink_rate(z, 0.0, k));
    }
    let (lo, hi) = if k.sign == 1 { (0.0, 2.0 * PI) } else { (2.0 * PI, 0.0) };
    let last = lat.sites - 1;
    phi[0] = lo;
    phi[last] = hi;
    vel[0] = 0.0;
    vel[last] = 0.0;
    ChainState::new(phi, vel, lat.omega0_sq, lat.omega1_sq)
}

/// Position of the single interior `φ = π` crossing, linearly interpolated.
pub fn pi_crossing(phi: &[f64], dx_lattice: f64) -> Result<f64> {
    let mut found = None;
    for i in 0..phi.len().saturating_sub(1) {
        let (a, b) = (phi[i] - PI, phi[i + 1] - PI);
        let crosses = (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0);
        if crosses {
            if found.is_some() {
                return Err(CdwError::Diagnostic("more than one pi crossing".into()));
            }
            found = Some(i as f64 + a / (a - b));
        }
    }
    found
        .map(|pos| pos * dx_lattice)
        .ok_or_else(|| CdwError::Diagnostic("no pi crossing".into()))
}

/// Least-squares slope of the crossing position against time.
pub fn kink_velocity_estimate(snapshots: &[ChainState], dx_lattice: f64, dt_snapshot: f64) -> Result<f64> {
    ensure_positive("dx_lattice", dx_lattice)?;
    ensure_positive("dt_snapshot", dt_snapshot)?;
    if snapshots.len() < 2 {
        return Err(CdwError::Diagnostic("need at least two snapshots".into()));
    }
    let xs = snapshots
        .iter()
        .map(|s| pi_crossing(&s.phi, dx_lattice))
        .collect::<Result<Vec<f64>>>()?;
    let n = xs.len() as f64;
    let ts: Vec<f64> = (0..xs.len()).map(|i| i as f64 * dt_snapshot).collect();
    let tm = ts.iter().sum::<f64>() / n;
    let xm = xs.iter().sum::<f64>() / n;
    let num: f64 = ts.iter().zip(&xs).map(|(t, x)| (t - tm) * (x - xm)).sum();
    let den: f64 = ts.iter().map(|t| (t - tm).powi(2)).sum();
    Ok(num / den)
}

/// `π·(tanh b(x − x_a) + tanh b(x_b − x))`.
pub fn thin_wall_profile(x: f64, b: f64, x_a: f64, x_b: f64) -> Result<f64> {
    ensure_positive("b", b)?;
    if !(x_a < x_b) {
        return Err(CdwError::domain("x_a must be below x_b"));
    }
    Ok(thin_wall_unchecked(x, b, x_a, x_b))
}

#[inline]
pub(crate) fn thin_wall_unchecked(x: f64, b: f64, x_a: f64, x_b: f64) -> f64 {
    PI * ((b * (x - x_a)).tanh() + (b * (x_b - x)).tanh())
}

/// Long-format table `t,site,phi,phi_dot`.
pub fn snapshots_table(snaps: &[Snapshot]) -> CurveTable {
    let mut table = CurveTable::new(["t", "site", "phi", "phi_dot"]);
    for s in snaps {
        for (i, (p, v)) in s.state.phi.iter().zip(&s.state.phi_dot).enumerate() {
            table
                .push_row(vec![s.t, i as f64, *p, *v])
                .expect("fixed arity");
        }
    }
    table
}
