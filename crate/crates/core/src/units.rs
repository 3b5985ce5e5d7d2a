//! Physical constants and the unit system shared by every module.
//!
//! Energies are in eV, times in ns, masses are carried as rest energies
//! `mc²` in eV, and momenta as `cP` in eV (reported as eV/c). Working with
//! `c = 1` this way keeps the speed of light out of every formula.

use serde::Deserialize;
use std::path::Path;

use crate::error::{Error, Result};

/// Reduced Planck constant, CODATA 2018, in eV·ns.
pub const HBAR_EV_NS: f64 = 6.582119569e-7;

/// Rest energy of one atomic mass unit, CODATA 2018, in eV.
pub const AMU_TO_EV_PER_C2: f64 = 931.49410242e6;

/// The pair of constants the rest of the crate needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar_ev_ns: f64,
    amu_to_ev_per_c2: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsSection {
    hbar_ev_ns: Option<f64>,
    amu_to_ev_per_c2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    #[serde(default)]
    constants: ConstantsSection,
}

impl UnitSystem {
    pub const CODATA_2018: UnitSystem = UnitSystem {
        hbar_ev_ns: HBAR_EV_NS,
        amu_to_ev_per_c2: AMU_TO_EV_PER_C2,
    };

    pub fn new(hbar_ev_ns: f64, amu_to_ev_per_c2: f64) -> Result<Self> {
        for (name, v) in [
            ("hbar_ev_ns", hbar_ev_ns),
            ("amu_to_ev_per_c2", amu_to_ev_per_c2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("{v} must be finite and > 0")));
            }
        }
        Ok(Self {
            hbar_ev_ns,
            amu_to_ev_per_c2,
        })
    }

    pub fn hbar_ev_ns(&self) -> f64 {
        self.hbar_ev_ns
    }

    pub fn amu_to_ev_per_c2(&self) -> f64 {
        self.amu_to_ev_per_c2
    }

    /// Rest energy `mc²` (eV) of a mass given in atomic mass units.
    pub fn mass_energy(&self, mu_amu: f64) -> Result<f64> {
        if !(mu_amu.is_finite() && mu_amu > 0.0) {
            return Err(Error::invalid("mu", format!("{mu_amu} a.m.u. must be finite and > 0")));
        }
        Ok(mu_amu * self.amu_to_ev_per_c2)
    }

    /// Coefficient `ħ²/(2mc²)` of `-d²/dt²` in the time-momentum equation, eV·ns².
    pub fn kinetic_coefficient(&self, mc2_ev: f64) -> f64 {
        self.hbar_ev_ns * self.hbar_ev_ns / (2.0 * mc2_ev)
    }

    /// Parses the `[constants]` section of a TOML document. Missing keys
    /// keep their CODATA 2018 defaults.
    ///
    /// ```toml
    /// [constants]
    /// hbar_ev_ns = 6.582119569e-7
    /// amu_to_ev_per_c2 = 931.49410242e6
    /// ```
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        let d = Self::CODATA_2018;
        Self::new(
            file.constants.hbar_ev_ns.unwrap_or(d.hbar_ev_ns),
            file.constants.amu_to_ev_per_c2.unwrap_or(d.amu_to_ev_per_c2),
        )
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&src)
    }
}
