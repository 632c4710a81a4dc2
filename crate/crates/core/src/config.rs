//! Flat `key = value` run configuration.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{CdwError, Result};
use crate::evolver::{Boundary, SchemeKind};
use crate::model::{FieldDriveParams, PhysicalParams};
use crate::tunneling::CurrentForm;
use crate::variational::{MinimizerOptions, QuadratureSpec, SweepMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SingleChain,
    PendulumKink,
    VariationalSweep,
    IvCurve,
    FourierCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::SingleChain,
        Experiment::PendulumKink,
        Experiment::VariationalSweep,
        Experiment::IvCurve,
        Experiment::FourierCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SingleChain => "single-chain",
            Experiment::PendulumKink => "pendulum-kink",
            Experiment::VariationalSweep => "variational-sweep",
            Experiment::IvCurve => "iv-curve",
            Experiment::FourierCheck => "fourier-check",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Experiment::ALL.into_iter().find(|e| e.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleChainConfig {
    pub scheme: SchemeKind,
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_c: f64,
    pub alpha0: f64,
    pub dt: f64,
    pub steps: usize,
    pub boundary: Boundary,
    pub jacobi_sweeps: usize,
}

impl Default for SingleChainConfig {
    fn default() -> Self {
        SingleChainConfig {
            scheme: SchemeKind::CrankNicolsonStandard,
            points: 257,
            x_min: -4.0 * PI,
            x_max: 4.0 * PI,
            x_c: 0.0,
            alpha0: 1.0,
            dt: 0.01,
            steps: 1000,
            boundary: Boundary::Dirichlet,
            jacobi_sweeps: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PendulumConfig {
    pub sites: usize,
    pub spacing: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub beta: f64,
    pub sign: i8,
    pub dt: f64,
    pub steps: usize,
    pub stride: usize,
}

impl Default for PendulumConfig {
    fn default() -> Self {
        PendulumConfig {
            sites: 2000,
            spacing: 1.0,
            omega0: 40.0,
            omega1: 1.0,
            beta: 0.5,
            sign: 1,
            dt: 1e-3,
            steps: 10_000,
            stride: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theta_min: f64,
    pub theta_max: f64,
    pub points: usize,
    pub mode: SweepMode,
    pub quadrature: QuadratureSpec,
    pub minimizer: MinimizerOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            theta_min: -5.0 * PI,
            theta_max: 5.0 * PI,
            points: 101,
            mode: SweepMode::WarmStart,
            quadrature: QuadratureSpec::default(),
            minimizer: MinimizerOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvConfig {
    pub c_tilde: f64,
    pub gate_zener: bool,
    pub form: CurrentForm,
    /// Upper end of the field grid; `5·E_T·c_v` when unset.
    pub e_max: Option<f64>,
    pub points: usize,
}

impl Default for IvConfig {
    fn default() -> Self {
        IvConfig {
            c_tilde: 1.0,
            gate_zener: true,
            form: CurrentForm::CoshOfDifference,
            e_max: None,
            points: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierConfig {
    pub l: f64,
    pub b: f64,
    pub n1: f64,
    pub modes: usize,
    pub box_len: f64,
}

impl Default for FourierConfig {
    fn default() -> Self {
        FourierConfig {
            l: 1.0,
            b: 1e4,
            n1: 0.5,
            modes: 10,
            box_len: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub output: PathBuf,
    pub seed: u64,
    pub params: PhysicalParams,
    pub experimental_regime: bool,
    pub drive: FieldDriveParams,
    pub chain: SingleChainConfig,
    pub pendulum: PendulumConfig,
    pub variational: SweepConfig,
    pub current: IvConfig,
    pub fourier: FourierConfig,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        RunConfig {
            experiment,
            output: PathBuf::from(format!("{}.csv", experiment.name())),
            seed: 0,
            params: PhysicalParams::default(),
            experimental_regime: false,
            drive: FieldDriveParams::default(),
            chain: SingleChainConfig::default(),
            pendulum: PendulumConfig::default(),
            variational: SweepConfig::default(),
            current: IvConfig::default(),
            fourier: FourierConfig::default(),
        }
    }

    /// Applies one `key = value` entry. `experiment` is handled by the parser.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let v = value;
        match key {
            "output" => self.output = PathBuf::from(v),
            "seed" => self.seed = num(v)?,

            "D" => self.params.d = num(v)?,
            "omega_p_sq" => self.params.omega_p_sq = num(v)?,
            "mu_E" => self.params.mu_e = num(v)?,
            "theta" => self.params.theta = num(v)?,
            "D1" => self.params.d1 = num(v)?,
            "E1" => self.params.e1 = num(v)?,
            "E2" => self.params.e2 = num(v)?,
            "delta_prime" => self.params.delta_prime = num(v)?,
            "hbar" => self.params.hbar = num(v)?,
            "experimental_regime" => self.experimental_regime = flag(v)?,

            "e_star" => self.drive.e_star = num(v)?,
            "E_applied" => self.drive.e_applied = num(v)?,
            "E_threshold" => self.drive.e_threshold = num(v)?,
            "c_v" => self.drive.c_v = num(v)?,
            "a_D" => self.drive.a_d = num(v)?,
            "G_p" => self.drive.g_p = num(v)?,
            "delta_s" => self.drive.delta_s = num(v)?,

            "chain.scheme" => {
                self.chain.scheme =
                    SchemeKind::from_name(v).ok_or_else(|| format!("unknown scheme {v:?}"))?
            }
            "chain.points" => self.chain.points = num(v)?,
            "chain.x_min" => self.chain.x_min = num(v)?,
            "chain.x_max" => self.chain.x_max = num(v)?,
            "chain.x_c" => self.chain.x_c = num(v)?,
            "chain.alpha0" => self.chain.alpha0 = num(v)?,
            "chain.dt" => self.chain.dt = num(v)?,
            "chain.steps" => self.chain.steps = num(v)?,
            "chain.boundary" => {
                self.chain.boundary = match v {
                    "dirichlet" => Boundary::Dirichlet,
                    "periodic" => Boundary::Periodic,
                    _ => return Err(format!("unknown boundary {v:?}")),
                }
            }
            "chain.jacobi_sweeps" => self.chain.jacobi_sweeps = num(v)?,

            "pendulum.sites" => self.pendulum.sites = num(v)?,
            "pendulum.spacing" => self.pendulum.spacing = num(v)?,
            "pendulum.omega0" => self.pendulum.omega0 = num(v)?,
            "pendulum.omega1" => self.pendulum.omega1 = num(v)?,
            "pendulum.beta" => self.pendulum.beta = num(v)?,
            "pendulum.sign" => self.pendulum.sign = num(v)?,
            "pendulum.dt" => self.pendulum.dt = num(v)?,
            "pendulum.steps" => self.pendulum.steps = num(v)?,
            "pendulum.stride" => self.pendulum.stride = num(v)?,

            "variational.eta" => self.variational.quadrature.eta = num(v)?,
            "variational.panels" => self.variational.quadrature.panels = num(v)?,
            "variational.order" => self.variational.quadrature.order = num(v)?,
            "variational.theta_min" => self.variational.theta_min = num(v)?,
            "variational.theta_max" => self.variational.theta_max = num(v)?,
            "variational.points" => self.variational.points = num(v)?,
            "variational.mode" => {
                self.variational.mode = match v {
                    "warm" => SweepMode::WarmStart,
                    "cold" => SweepMode::ColdStart,
                    _ => return Err(format!("unknown sweep mode {v:?}")),
                }
            }
            "variational.alpha0" => self.variational.minimizer.alpha0 = num(v)?,
            "variational.coeff_step" => self.variational.minimizer.coeff_step = num(v)?,
            "variational.log_alpha_step" => self.variational.minimizer.log_alpha_step = num(v)?,
            "variational.max_evals" => self.variational.minimizer.max_evals = num(v)?,
            "variational.ftol" => self.variational.minimizer.ftol = num(v)?,
            "variational.xtol" => self.variational.minimizer.xtol = num(v)?,
            "variational.restarts" => self.variational.minimizer.restarts = num(v)?,
            "variational.random_seeds" => self.variational.minimizer.random_seeds = num(v)?,

            "current.C_tilde" => self.current.c_tilde = num(v)?,
            "current.gate_zener" => self.current.gate_zener = flag(v)?,
            "current.form" => {
                self.current.form = match v {
                    "cosh-of-difference" => CurrentForm::CoshOfDifference,
                    "difference-of-cosh" => CurrentForm::DifferenceOfCosh,
                    _ => return Err(format!("unknown current form {v:?}")),
                }
            }
            "current.E_max" => self.current.e_max = Some(num(v)?),
            "current.points" => self.current.points = num(v)?,

            "fourier.L" => self.fourier.l = num(v)?,
            "fourier.b" => self.fourier.b = num(v)?,
            "fourier.n1" => self.fourier.n1 = num(v)?,
            "fourier.modes" => self.fourier.modes = num(v)?,
            "fourier.box" => self.fourier.box_len = num(v)?,

            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}

fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("malformed value {v:?}"))
}

fn flag(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got {v:?}")),
    }
}

/// One `key = value` entry with its 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits config text into entries, skipping blanks and `#` comments.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| CdwError::config(line, format!("expected key = value, got {body:?}")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CdwError::config(line, "empty key"));
        }
        out.push(Entry {
            line,
            key: k.to_string(),
            value: v.to_string(),
        });
    }
    Ok(out)
}

/// Parses a `--set key=value` override. Overrides report line 0.
pub fn parse_override(s: &str) -> Result<Entry> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CdwError::config(0, format!("override {s:?} is not key=value")))?;
    Ok(Entry {
        line: 0,
        key: k.trim().to_string(),
        value: v.trim().to_string(),
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    build_config(parse_entries(text)?)
}

/// Builds a config from entries; later entries win.
pub fn build_config(entries: Vec<Entry>) -> Result<RunConfig> {
    let exp_entry = entries.iter().rev().find(|e| e.key == "experiment");
    let experiment = match exp_entry {
        Some(e) => Experiment::from_name(&e.value)
            .ok_or_else(|| CdwError::config(e.line, format!("unknown experiment {:?}", e.value)))?,
        None => {
            let last = entries.last().map_or(0, |e| e.line);
            return Err(CdwError::config(last, "missing experiment"));
        }
    };
    let mut cfg = RunConfig::new(experiment);
    for e in &entries {
        if e.key == "experiment" {
            continue;
        }
        cfg.set(&e.key, &e.value).map_err(|d| CdwError::config(e.line, d))?;
    }
    cfg.variational.minimizer.seed = cfg.seed;
    Ok(cfg)
}
