use thiserror::Error;

pub type Result<T> = std::result::Result<T, CdwError>;

/// Every failure the library can report.
///
/// The CLI maps each variant to an exit status and prints
/// `error: <code>: <detail>` using [`CdwError::code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CdwError {
    #[error("{0}")]
    Domain(String),

    #[error("non-finite value at step {step}")]
    Overflow { step: usize },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("no convergence after {evals} evaluations (best energy {best_energy:e})")]
    Convergence { evals: usize, best_energy: f64 },

    #[error("{0}")]
    Diagnostic(String),

    #[error("line {line}: {detail}")]
    Config { line: usize, detail: String },

    #[error("{0}")]
    Io(String),
}

impl CdwError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CdwError::Domain(msg.into())
    }

    pub fn config(line: usize, detail: impl Into<String>) -> Self {
        CdwError::Config {
            line,
            detail: detail.into(),
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CdwError::Domain(_) => "domain",
            CdwError::Overflow { .. } => "overflow",
            CdwError::Quadrature(_) => "quadrature",
            CdwError::Convergence { .. } => "convergence",
            CdwError::Diagnostic(_) => "diagnostic",
            CdwError::Config { .. } => "config",
            CdwError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for CdwError {
    fn from(e: std::io::Error) -> Self {
        CdwError::Io(e.to_string())
    }
}

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CdwError::domain(format!("{name} must be finite, got {v}")))
    }
}

pub(crate) fn ensure_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CdwError::domain(format!("{name} must be positive, got {v}")))
    }
}
