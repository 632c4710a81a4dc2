//! Physical constants and potential-energy expressions.
//!
//! Everything here is a pure function of its arguments. Units are
//! dimensionless with `hbar = 1` unless overridden.

use std::f64::consts::PI;

use crate::error::{ensure_finite, ensure_positive, CdwError, Result};

/// Model constants shared by the single-chain, multi-chain and two-chain
/// computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Inertial coefficient of the single-chain model.
    pub d: f64,
    /// Pinning frequency squared; `d * omega_p_sq` is the pinning energy.
    pub omega_p_sq: f64,
    /// Electrostatic (charging) coefficient of the single chain.
    pub mu_e: f64,
    /// Driving phase offset.
    pub theta: f64,
    /// Inertial coefficient of the multi-chain model.
    pub d1: f64,
    /// Pinning energy of each chain.
    pub e1: f64,
    /// Charging energy of each chain.
    pub e2: f64,
    /// Nearest-neighbour inter-chain coupling.
    pub delta_prime: f64,
    pub hbar: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            d: 10.0,
            omega_p_sq: 1.0,
            mu_e: 0.12,
            theta: 0.0,
            d1: 174.091,
            e1: 1e-5,
            e2: 1e-6,
            delta_prime: 0.005,
            hbar: 1.0,
        }
    }
}

/// Window for the charging-to-pinning ratio observed in devices.
pub const EXPERIMENTAL_RATIO_RANGE: (f64, f64) = (0.01, 0.015);

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("D", self.d),
            ("omega_p_sq", self.omega_p_sq),
            ("mu_E", self.mu_e),
            ("theta", self.theta),
            ("D1", self.d1),
            ("E1", self.e1),
            ("E2", self.e2),
            ("delta_prime", self.delta_prime),
            ("hbar", self.hbar),
        ] {
            ensure_finite(name, v)?;
        }
        ensure_positive("D", self.d)?;
        ensure_positive("D1", self.d1)?;
        ensure_positive("hbar", self.hbar)?;
        for (name, v) in [
            ("omega_p_sq", self.omega_p_sq),
            ("mu_E", self.mu_e),
            ("E1", self.e1),
            ("E2", self.e2),
            ("delta_prime", self.delta_prime),
        ] {
            if v < 0.0 {
                return Err(CdwError::domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// `mu_E / (D * omega_p_sq)`.
    pub fn charging_ratio(&self) -> f64 {
        self.mu_e / (self.d * self.omega_p_sq)
    }

    /// Checks the device-regime window `0.01 < ratio <= 0.015` on top of
    /// [`validate`](Self::validate).
    pub fn validate_experimental(&self) -> Result<()> {
        self.validate()?;
        let r = self.charging_ratio();
        let (lo, hi) = EXPERIMENTAL_RATIO_RANGE;
        if r > lo && r <= hi {
            Ok(())
        } else {
            Err(CdwError::domain(format!(
                "mu_E/(D*omega_p_sq) = {r} outside the experimental window ({lo}, {hi}]"
            )))
        }
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        PhysicalParams { theta, ..*self }
    }
}

/// Applied-field and drive constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldDriveParams {
    /// Effective charge, two electron charges.
    pub e_star: f64,
    pub e_applied: f64,
    pub e_threshold: f64,
    pub c_v: f64,
    /// Drive frequency: `theta(t) = a_d * t`.
    pub a_d: f64,
    pub g_p: f64,
    pub delta_s: f64,
}

impl Default for FieldDriveParams {
    fn default() -> Self {
        FieldDriveParams {
            e_star: 2.0,
            e_applied: 0.0,
            e_threshold: 1.0,
            c_v: 1.0,
            a_d: 0.67,
            g_p: 1.0,
            delta_s: 1.0,
        }
    }
}

impl FieldDriveParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("e_star", self.e_star),
            ("E_applied", self.e_applied),
            ("E_threshold", self.e_threshold),
            ("c_v", self.c_v),
            ("a_D", self.a_d),
            ("G_p", self.g_p),
            ("delta_s", self.delta_s),
        ] {
            ensure_finite(name, v)?;
        }
        ensure_positive("E_threshold", self.e_threshold)?;
        ensure_positive("c_v", self.c_v)?;
        ensure_positive("G_p", self.g_p)?;
        ensure_positive("delta_s", self.delta_s)?;
        if self.e_applied < 0.0 {
            return Err(CdwError::domain("E_applied must be >= 0"));
        }
        Ok(())
    }

    /// Driving phase at time `t`.
    pub fn theta_at(&self, t: f64) -> f64 {
        self.a_d * t
    }
}

/// Tilted washboard: `½·mu_E·(φ − Θ)² + ½·D·ω_p²·(1 − cos φ)`.
pub fn washboard_potential(phi: f64, p: &PhysicalParams) -> Result<f64> {
    ensure_finite("phi", phi)?;
    Ok(washboard_unchecked(phi, p))
}

#[inline]
pub(crate) fn washboard_unchecked(phi: f64, p: &PhysicalParams) -> f64 {
    let dphi = phi - p.theta;
    0.5 * p.mu_e * dphi * dphi + 0.5 * p.d * p.omega_p_sq * (1.0 - phi.cos())
}

/// Open-chain multi-chain potential with cosine nearest-neighbour coupling.
pub fn multichain_potential(phis: &[f64], p: &PhysicalParams) -> Result<f64> {
    check_chain(phis)?;
    Ok(multichain_unchecked(phis, p))
}

#[inline]
pub(crate) fn multichain_unchecked(phis: &[f64], p: &PhysicalParams) -> f64 {
    let onsite: f64 = phis
        .iter()
        .map(|&phi| {
            let dphi = phi - p.theta;
            p.e1 * (1.0 - phi.cos()) + p.e2 * dphi * dphi
        })
        .sum();
    let coupling: f64 = phis
        .windows(2)
        .map(|w| p.delta_prime * (1.0 - (w[1] - w[0]).cos()))
        .sum();
    onsite + coupling
}

/// Nearest-neighbour quadratic reduction of the coupling; drops the
/// charging term.
pub fn quadratic_coupling_approx(phis: &[f64], p: &PhysicalParams) -> Result<f64> {
    check_chain(phis)?;
    let pinning: f64 = phis.iter().map(|phi| p.e1 * (1.0 - phi.cos())).sum();
    let coupling: f64 = phis
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            0.5 * p.delta_prime * d * d
        })
        .sum();
    Ok(pinning + coupling)
}

fn check_chain(phis: &[f64]) -> Result<()> {
    if phis.len() < 2 {
        return Err(CdwError::domain(format!(
            "a chain needs at least 2 phases, got {}",
            phis.len()
        )));
    }
    for &phi in phis {
        ensure_finite("phi", phi)?;
    }
    Ok(())
}

/// Extended sine-Gordon style potential about `phi0`.
pub fn extended_potential(phi: f64, phi0: f64, c1: f64, c2: f64) -> Result<f64> {
    for (name, v) in [("phi", phi), ("phi0", phi0), ("C1", c1), ("C2", c2)] {
        ensure_finite(name, v)?;
    }
    let d = phi - phi0;
    let s = phi * phi - phi0 * phi0;
    Ok(c1 * d * d - 4.0 * c2 * phi * phi0 * d * d + c2 * s * s)
}

/// `Θ = 2π·E/E*`.
pub fn driving_theta(e: f64, e_star_field: f64) -> Result<f64> {
    ensure_positive("E*", e_star_field)?;
    ensure_finite("E", e)?;
    Ok(2.0 * PI * e / e_star_field)
}

/// `E_T = E*/2`, the field at which `Θ` reaches π.
pub fn threshold_field(e_star_field: f64) -> Result<f64> {
    ensure_positive("E*", e_star_field)?;
    Ok(0.5 * e_star_field)
}
