use std::path::PathBuf;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("potential is singular at t = {t} ns (denominator {denominator:e})")]
    Singularity { t: f64, denominator: f64 },

    #[error("realness condition violated: C - A - L + 1/4 = {value:e} < 0")]
    Realness { value: f64 },

    #[error("complex zeta1: A + M = {value:e} > 0")]
    ComplexZeta { value: f64 },

    #[error("no closed-form NU reduction: {0}")]
    NoClosedForm(String),

    #[error("no NU branch satisfies the selection policy ({0})")]
    BranchSelection(String),

    #[error("pole at n + 1/R = 0 for level {n}")]
    Pole { n: usize },

    #[error("wavefunction argument s = {s} outside (0, 1)")]
    Domain { s: f64 },

    #[error("non-finite normalization integral ({0})")]
    Integrability(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("registry line {line} (`{row}`): {reason}")]
    RegistryParse {
        line: usize,
        row: String,
        reason: String,
    },

    #[error("molecule `{name}` invalid: {reason}")]
    Validation { name: String, reason: String },

    #[error("unknown molecule `{0}`")]
    UnknownMolecule(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_)
                | Error::NoClosedForm(_)
                | Error::BranchSelection(_)
                | Error::Integrability(_)
                | Error::Singularity { .. }
                | Error::Realness { .. }
                | Error::ComplexZeta { .. }
                | Error::Pole { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
