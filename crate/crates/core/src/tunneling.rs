//! Closed-form soliton tunneling current and its ingredients.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{ensure_finite, ensure_positive, CdwError, Result};
use crate::quadrature::CompositeRule;
use crate::sine_gordon::thin_wall_unchecked;
use crate::table::CurveTable;

pub use crate::special::{erf, erfc};

/// Soliton/antisoliton pair seen as two tanh walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub l: f64,
    pub b: f64,
    pub x_a: f64,
    pub x_b: f64,
    pub n1: f64,
}

impl PairGeometry {
    /// Walls at `∓L/2`.
    pub fn centered(l: f64, b: f64, n1: f64) -> Result<Self> {
        let g = PairGeometry {
            l,
            b,
            x_a: -0.5 * l,
            x_b: 0.5 * l,
            n1,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("L", self.l)?;
        ensure_positive("b", self.b)?;
        ensure_finite("x_a", self.x_a)?;
        ensure_finite("x_b", self.x_b)?;
        if ((self.x_b - self.x_a) - self.l).abs() > 1e-12 * self.l {
            return Err(CdwError::domain("x_b - x_a must equal L"));
        }
        if !(self.n1 > 0.0 && self.n1 < 1.0) {
            return Err(CdwError::domain(format!("n1 must lie in (0, 1), got {}", self.n1)));
        }
        Ok(())
    }

    /// Upper limit `√(L²/2π)` of the wavefunctional normalization integral.
    pub fn norm_upper_limit(&self) -> f64 {
        self.l / (2.0 * PI).sqrt()
    }
}

/// Which bracket reading of the current formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentForm {
    /// `cosh(√(2E/E_T c_v) − √(E_T c_v/E))`
    CoshOfDifference,
    /// `cosh √(2E/E_T c_v) − cosh √(E_T c_v/E)`
    DifferenceOfCosh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentParams {
    pub e_t: f64,
    pub c_v: f64,
    pub c_tilde: f64,
    pub g_p: f64,
    pub gate_zener: bool,
    pub form: CurrentForm,
}

impl Default for CurrentParams {
    fn default() -> Self {
        CurrentParams {
            e_t: 1.0,
            c_v: 1.0,
            c_tilde: 1.0,
            g_p: 1.0,
            gate_zener: true,
            form: CurrentForm::CoshOfDifference,
        }
    }
}

impl CurrentParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("E_T", self.e_t)?;
        ensure_positive("c_v", self.c_v)?;
        ensure_positive("C_tilde", self.c_tilde)?;
        ensure_positive("G_p", self.g_p)
    }
}

/// `C = 1/√(∫₀^upper exp(−2·a·φ²) dφ)` in closed form.
pub fn gaussian_norm_constant(a_exp: f64, upper: f64) -> Result<f64> {
    ensure_positive("a_exp", a_exp)?;
    if !(upper > 0.0) {
        return Err(CdwError::domain(format!("upper must be positive, got {upper}")));
    }
    let a = 2.0 * a_exp;
    let integral = 0.5 * (PI / a).sqrt() * erf(upper * a.sqrt());
    Ok(1.0 / integral.sqrt())
}

/// `√(2/π)·sin(kL/2)/k`, the transform of a unit box of width `L`.
pub fn soliton_fourier(k: f64, l: f64) -> Result<f64> {
    ensure_positive("L", l)?;
    ensure_finite("k", k)?;
    Ok(soliton_fourier_unchecked(k, l))
}

fn soliton_fourier_unchecked(k: f64, l: f64) -> f64 {
    let c = (2.0 / PI).sqrt();
    if k.abs() < 1e-12 * (2.0 * PI / l) {
        c * 0.5 * l
    } else {
        c * (0.5 * k * l).sin() / k
    }
}

/// `k_n = 2πn/box` for `n = 1..=count`.
pub fn mode_wavenumbers(box_len: f64, count: usize) -> Result<Vec<f64>> {
    ensure_positive("box", box_len)?;
    Ok((1..=count).map(|n| 2.0 * PI * n as f64 / box_len).collect())
}

/// One sampled wavenumber of the thin-wall transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub k: f64,
    pub numeric: f64,
    pub exact: f64,
}

impl FourierMode {
    pub fn relative_deviation(&self) -> f64 {
        ((self.numeric - self.exact) / self.exact).abs()
    }
}

/// Transforms the thin-wall pair profile divided by `2π` with
/// `(1/√2π)∫ f(x) e^{−ikx} dx` on the first `n_modes` wavenumbers `2πj/box`
/// at which the sharp-wall transform [`soliton_fourier`] does not vanish.
pub fn thin_wall_fourier_modes(g: &PairGeometry, n_modes: usize, box_len: f64) -> Result<Vec<FourierMode>> {
    g.validate()?;
    if g.b * g.l < 100.0 {
        return Err(CdwError::domain(format!("b*L = {} is below 100", g.b * g.l)));
    }
    if !(box_len >= 10.0 * g.l) || !box_len.is_finite() {
        return Err(CdwError::domain("box must be at least 10 L"));
    }
    if n_modes == 0 {
        return Err(CdwError::domain("n_modes must be >= 1"));
    }
    let centered = PairGeometry::centered(g.l, g.b, g.n1)?;
    let rule = fourier_rule(&centered, box_len)?;
    let profile: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&x| thin_wall_unchecked(x, centered.b, centered.x_a, centered.x_b) / (2.0 * PI))
        .collect();

    let mut modes = Vec::with_capacity(n_modes);
    let mut j = 1usize;
    while modes.len() < n_modes {
        let k = 2.0 * PI * j as f64 / box_len;
        j += 1;
        if (0.5 * k * g.l).sin().abs() < 1e-9 {
            continue;
        }
        // even profile: twice the cosine transform over the right half
        let half: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .zip(&profile)
            .map(|((&x, &w), &f)| w * f * (k * x).cos())
            .sum();
        modes.push(FourierMode {
            k,
            numeric: 2.0 * half / (2.0 * PI).sqrt(),
            exact: soliton_fourier_unchecked(k, g.l),
        });
    }
    Ok(modes)
}

/// Largest relative deviation returned by [`thin_wall_fourier_modes`].
pub fn thin_wall_fourier_check(g: &PairGeometry, n_modes: usize, box_len: f64) -> Result<f64> {
    Ok(thin_wall_fourier_modes(g, n_modes, box_len)?
        .iter()
        .map(FourierMode::relative_deviation)
        .fold(0.0, f64::max))
}

pub const FOURIER_COLUMNS: [&str; 4] = ["k", "numeric", "exact", "rel_dev"];

pub fn fourier_table(modes: &[FourierMode]) -> CurveTable {
    let mut t = CurveTable::new(FOURIER_COLUMNS);
    for m in modes {
        t.push_row(vec![m.k, m.numeric, m.exact, m.relative_deviation()])
            .expect("fixed arity");
    }
    t
}

/// `[0, box/2]` with dense panels across the wall at `L/2`.
fn fourier_rule(g: &PairGeometry, box_len: f64) -> Result<CompositeRule> {
    let w = 40.0 / g.b;
    let lo = 0.5 * g.l - w;
    let hi = 0.5 * g.l + w;
    Ok(CompositeRule::join([
        CompositeRule::uniform(0.0, lo, 64, 16)?,
        CompositeRule::uniform(lo, hi, 256, 16)?,
        CompositeRule::uniform(hi, 0.5 * box_len, 64, 16)?,
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentKind {
    Initial,
    Final,
}

/// `(2π/L)²·Σ|φ(k_n)|²`, times `(1 − n₁²)` for the final state.
pub fn momentum_exponent(phi_k: &[f64], l: f64, n1: f64, which: ExponentKind) -> Result<f64> {
    if phi_k.is_empty() {
        return Err(CdwError::domain("amplitude sequence is empty"));
    }
    ensure_positive("L", l)?;
    let s: f64 = phi_k.iter().map(|v| v * v).sum();
    let base = (2.0 * PI / l).powi(2) * s;
    match which {
        ExponentKind::Initial => Ok(base),
        ExponentKind::Final => {
            if !(n1 > 0.0 && n1 < 1.0) {
                return Err(CdwError::domain(format!("n1 must lie in (0, 1), got {n1}")));
            }
            Ok(base * (1.0 - n1 * n1))
        }
    }
}

/// Soliton-pair tunneling current.
pub fn current_beckwith(e: f64, cp: &CurrentParams) -> Result<f64> {
    cp.validate()?;
    if !(e > 0.0 && e.is_finite()) {
        return Err(CdwError::domain(format!("field must be positive, got {e}")));
    }
    let r = cp.e_t * cp.c_v / e;
    let drive = (2.0 / r).sqrt();
    let barrier = r.sqrt();
    let d = drive - barrier;
    let value = match cp.form {
        // cosh(d)·e^{−r} without overflowing cosh
        CurrentForm::CoshOfDifference => 0.5 * ((d - r).exp() + (-d - r).exp()),
        CurrentForm::DifferenceOfCosh => (drive.cosh() - barrier.cosh()) * (-r).exp(),
    };
    Ok(cp.c_tilde * value)
}

/// Zener form `G_p (E − E_T) exp(−E_T/E)`, gated per `cp.gate_zener`.
pub fn current_zener(e: f64, cp: &CurrentParams) -> Result<f64> {
    current_zener_with(e, cp, cp.gate_zener)
}

pub fn current_zener_with(e: f64, cp: &CurrentParams, gated: bool) -> Result<f64> {
    cp.validate()?;
    if !(e >= 0.0 && e.is_finite()) {
        return Err(CdwError::domain(format!("field must be >= 0, got {e}")));
    }
    if gated && e <= cp.e_t {
        return Ok(0.0);
    }
    if e == 0.0 {
        // exp(−E_T/E) → 0 faster than the prefactor grows
        return Ok(0.0);
    }
    Ok(cp.g_p * (e - cp.e_t) * (-cp.e_t / e).exp())
}

/// `L = 2Δ_s/(e*·E)`.
pub fn pair_separation(e: f64, delta_s: f64, e_star: f64) -> Result<f64> {
    ensure_positive("E", e)?;
    ensure_positive("delta_s", delta_s)?;
    ensure_positive("e_star", e_star)?;
    Ok(2.0 * delta_s / (e_star * e))
}

/// `L/x̄ = c_v·E_T/E`.
pub fn separation_ratio(e: f64, cp: &CurrentParams) -> Result<f64> {
    cp.validate()?;
    ensure_positive("E", e)?;
    Ok(cp.c_v * cp.e_t / e)
}

/// Harmonic displacement `x̄ = E·(q/m)/ω²`.
pub fn harmonic_reference(e: f64, omega: f64, m_charge_ratio: f64) -> Result<f64> {
    ensure_positive("omega", omega)?;
    ensure_finite("E", e)?;
    ensure_finite("charge/mass", m_charge_ratio)?;
    Ok(e * m_charge_ratio / (omega * omega))
}

/// Gap scale `α ≈ 1/L`.
pub fn gap_alpha(l: f64) -> Result<f64> {
    ensure_positive("L", l)?;
    Ok(1.0 / l)
}

pub const IV_COLUMNS: [&str; 4] = ["E", "I_beckwith", "I_zener_gated", "I_zener_ungated"];

/// Current-field table. Points where a current is undefined are NaN.
pub fn iv_curve(e_grid: &[f64], cp: &CurrentParams) -> Result<CurveTable> {
    cp.validate()?;
    if e_grid.is_empty() {
        return Err(CdwError::domain("field grid is empty"));
    }
    if e_grid.iter().any(|e| !(e.is_finite() && *e > 0.0)) || e_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CdwError::domain("field grid must be positive and strictly increasing"));
    }
    let rows: Vec<Vec<f64>> = e_grid
        .par_iter()
        .map(|&e| {
            vec![
                e,
                current_beckwith(e, cp).unwrap_or(f64::NAN),
                current_zener_with(e, cp, true).unwrap_or(f64::NAN),
                current_zener_with(e, cp, false).unwrap_or(f64::NAN),
            ]
        })
        .collect();
    let mut t = CurveTable::new(IV_COLUMNS);
    for r in rows {
        t.push_row(r)?;
    }
    Ok(t)
}
