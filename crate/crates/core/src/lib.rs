//! Eigenvalues and eigenfunctions of the improved deformed exponential-type
//! potential in the time domain, by the Nikiforov-Uvarov method, with a
//! finite-difference cross-check and report generation.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod nu;
pub mod oracle;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod report;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use potential::{
    derive_coefficients, evaluate_potential, level_coefficients, BetaVariant, DerivedCoefficients, LevelCoefficients,
    MoleculeParams, PotentialConfig, SolutionDomain,
};
pub use spectrum::{compute_spectrum, momentum_eigenvalue, EigenvalueVariant, SpectrumResult};
pub use units::UnitSystem;
