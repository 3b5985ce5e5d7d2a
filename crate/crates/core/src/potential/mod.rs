//! The improved deformed exponential-type potential (IDEP) and the
//! dimensionless coefficients that put its time-momentum equation into
//! Nikiforov-Uvarov form.
//!
//! With `s = e^{2α(t−t₀)}/q` and `ε = e^{2α(tₑ−t₀)}/q` the potential reads
//! `V = Dₑ (ε − s)² / (1 − s)²`, and the equation becomes
//!
//! ```text
//! ψ'' + (1 − s)/(s(1 − s)) ψ' + (−ζ₁² + ζ₂ s − ζ₃ s²)/(s²(1 − s)²) ψ = 0
//! ```
//!
//! with `ζ₁² = −(A+M)`, `ζ₂ = −(C+2M)`, `ζ₃ = −(L+M)` and `M = −cPₙ/β`.

mod registry;

pub use registry::{default_registry, find_molecule, load_molecule_registry, DEFAULT_REGISTRY};

use std::fmt;

use crate::error::{Error, Result};
use crate::nu::NuProblem;
use crate::poly::Poly;
use crate::units::UnitSystem;

/// Absolute threshold on `q − e^{2α(t−t₀)}` below which the potential is
/// treated as singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-30;

/// Spectroscopic constants of one diatomic molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeParams {
    pub name: String,
    /// Dissociation energy, eV.
    pub de: f64,
    /// Equilibrium time, ns.
    pub te: f64,
    /// Reduced mass, a.m.u.
    pub mu: f64,
    /// Reference time, ns.
    pub t0: f64,
    /// Deformation parameter.
    pub q: f64,
}

impl MoleculeParams {
    pub fn new(name: impl Into<String>, de: f64, te: f64, mu: f64, t0: f64, q: f64) -> Result<Self> {
        let m = Self {
            name: name.into(),
            de,
            te,
            mu,
            t0,
            q,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::Validation {
            name: self.name.clone(),
            reason,
        };
        for (label, v) in [
            ("De", self.de),
            ("te", self.te),
            ("mu", self.mu),
            ("t0", self.t0),
            ("q", self.q),
        ] {
            if !v.is_finite() {
                return Err(bad(format!("{label} = {v} is not finite")));
            }
        }
        for (label, v) in [("De", self.de), ("te", self.te), ("mu", self.mu), ("t0", self.t0)] {
            if v <= 0.0 {
                return Err(bad(format!("{label} = {v} must be > 0")));
            }
        }
        if self.q == 0.0 {
            return Err(bad("q must be non-zero".into()));
        }
        Ok(())
    }
}

/// Which reading of `β` to use.
///
/// `AsPrinted` is `−2ħα²/mc²`, which does not carry units of energy.
/// `DimensionCorrected` is `−2ħ²α²/mc²`, the value that actually results
/// from the change of variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BetaVariant {
    AsPrinted,
    #[default]
    DimensionCorrected,
}

impl BetaVariant {
    pub fn label(self) -> &'static str {
        match self {
            BetaVariant::AsPrinted => "as-printed",
            BetaVariant::DimensionCorrected => "dimension-corrected",
        }
    }
}

impl fmt::Display for BetaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for BetaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(BetaVariant::AsPrinted),
            "dimension-corrected" => Ok(BetaVariant::DimensionCorrected),
            other => Err(Error::invalid("beta", format!("unknown beta variant `{other}`"))),
        }
    }
}

/// One IDEP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialConfig {
    pub molecule: MoleculeParams,
    /// Exponential parameter, ns⁻¹.
    pub alpha: f64,
    pub beta_variant: BetaVariant,
}

impl PotentialConfig {
    pub fn new(molecule: MoleculeParams, alpha: f64, beta_variant: BetaVariant) -> Result<Self> {
        molecule.validate()?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("{alpha} ns^-1 must be finite and > 0")));
        }
        Ok(Self {
            molecule,
            alpha,
            beta_variant,
        })
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        let mut m = self.molecule.clone();
        m.q = q;
        Self::new(m, self.alpha, self.beta_variant)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.molecule.clone(), alpha, self.beta_variant)
    }

    /// `e^{2α(tₑ−t₀)}`
    pub fn e_te(&self) -> f64 {
        (2.0 * self.alpha * (self.molecule.te - self.molecule.t0)).exp()
    }

    /// Value `ε = e^{2α(tₑ−t₀)}/q` of `s` at the well minimum.
    pub fn s_equilibrium(&self) -> f64 {
        self.e_te() / self.molecule.q
    }

    /// Maps a time to the NU variable `s = e^{2α(t−t₀)}/q`.
    pub fn s_of_t(&self, t: f64) -> f64 {
        (2.0 * self.alpha * (t - self.molecule.t0)).exp() / self.molecule.q
    }

    /// The s-interval covered by real `t`.
    pub fn solution_domain(&self) -> SolutionDomain {
        if self.molecule.q < 0.0 {
            SolutionDomain::NegativeAxis
        } else {
            SolutionDomain::UnitInterval
        }
    }

    /// Time of the pole `q = e^{2α(t−t₀)}`, present only for `q > 0`.
    pub fn pole_time(&self) -> Option<f64> {
        let m = &self.molecule;
        (m.q > 0.0).then(|| m.t0 + m.q.ln() / (2.0 * self.alpha))
    }

    /// `V(t → −∞) = Dₑ ε²` and `V(t → +∞) = Dₑ` (the latter only for `q < 0`).
    pub fn asymptotes(&self) -> (f64, Option<f64>) {
        let e = self.s_equilibrium();
        let de = self.molecule.de;
        (de * e * e, (self.molecule.q < 0.0).then_some(de))
    }

    /// Second derivative `V''(tₑ)` in eV/ns².
    pub fn equilibrium_curvature(&self) -> f64 {
        let e = self.s_equilibrium();
        8.0 * self.molecule.de * self.alpha * self.alpha * e * e / ((1.0 - e) * (1.0 - e))
    }
}

/// `V(t) = Dₑ[1 − (q − e^{2α(tₑ−t₀)})/(q − e^{2α(t−t₀)})]²`, in eV.
pub fn evaluate_potential(config: &PotentialConfig, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::invalid("t", format!("{t} is not finite")));
    }
    let m = &config.molecule;
    let a2 = 2.0 * config.alpha;
    let u = (a2 * (t - m.t0)).exp();
    let den = m.q - u;
    if den.abs() < SINGULARITY_TOLERANCE {
        return Err(Error::Singularity { t, denominator: den });
    }
    // 1 − (q − E)/(q − u) = (E − u)/(q − u), with E − u = −E·expm1(2α(t − tₑ)).
    let ratio = if u.is_infinite() {
        1.0
    } else {
        -config.e_te() * (a2 * (t - m.te)).exp_m1() / den
    };
    let ratio = if ratio.is_finite() { ratio } else { 1.0 };
    Ok(m.de * ratio * ratio)
}

/// Which part of the real line `s` ranges over for real times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionDomain {
    /// `q > 0`, `t` below the pole: `s ∈ (0, 1)`.
    UnitInterval,
    /// `q < 0`: `s ∈ (−∞, 0)`.
    NegativeAxis,
}

impl SolutionDomain {
    pub fn interval(self) -> (f64, f64) {
        match self {
            SolutionDomain::UnitInterval => (0.0, 1.0),
            SolutionDomain::NegativeAxis => (f64::NEG_INFINITY, 0.0),
        }
    }
}

/// Dimensionless NU inputs of one IDEP instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    /// eV, always negative.
    pub beta: f64,
    pub l: f64,
    pub a: f64,
    pub c: f64,
    /// `1/R − 1/2 = √(C − A − L + 1/4)`.
    pub r_inv_minus_half: f64,
    pub r: f64,
    pub domain: SolutionDomain,
    pub beta_variant: BetaVariant,
}

impl DerivedCoefficients {
    /// Builds coefficients directly from dimensionless values, for synthetic
    /// problems that do not come from a molecule.
    pub fn from_dimensionless(beta: f64, a: f64, c: f64, l: f64, domain: SolutionDomain) -> Result<Self> {
        if !(beta.is_finite() && beta < 0.0) {
            return Err(Error::invalid("beta", format!("{beta} must be finite and < 0")));
        }
        Self::assemble(beta, a, c, l, c - a - l + 0.25, domain, BetaVariant::DimensionCorrected)
    }

    fn assemble(
        beta: f64,
        a: f64,
        c: f64,
        l: f64,
        realness: f64,
        domain: SolutionDomain,
        beta_variant: BetaVariant,
    ) -> Result<Self> {
        if !(realness >= 0.0) {
            return Err(Error::Realness { value: realness });
        }
        let w = realness.sqrt();
        Ok(Self {
            beta,
            l,
            a,
            c,
            r_inv_minus_half: w,
            r: 1.0 / (w + 0.5),
            domain,
            beta_variant,
        })
    }

    pub fn inv_r(&self) -> f64 {
        self.r_inv_minus_half + 0.5
    }

    /// `M = −cPₙ/β`
    pub fn m_of_momentum(&self, cpn: f64) -> f64 {
        -cpn / self.beta
    }

    pub fn momentum_of_m(&self, m: f64) -> f64 {
        -self.beta * m
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.c.abs()).max(self.l.abs())
    }
}

/// Computes `β`, `L`, `A`, `C` and `R` for a potential instance.
pub fn derive_coefficients(config: &PotentialConfig, units: &UnitSystem) -> Result<DerivedCoefficients> {
    let m = &config.molecule;
    let mc2 = units.mass_energy(m.mu)?;
    let hbar = units.hbar_ev_ns();
    let alpha2 = config.alpha * config.alpha;
    let beta = match config.beta_variant {
        BetaVariant::AsPrinted => -2.0 * hbar * alpha2 / mc2,
        BetaVariant::DimensionCorrected => -2.0 * hbar * hbar * alpha2 / mc2,
    };
    let l = m.de / beta;
    let a = m.de * (4.0 * config.alpha * (m.te - m.t0)).exp() / (m.q * m.q * beta);
    let c = 2.0 * m.de * config.e_te() / (m.q * beta);
    // C − A − L = −Dₑ(1 − ε)²/β, evaluated without cancellation.
    let e = config.s_equilibrium();
    let realness = -m.de * (1.0 - e) * (1.0 - e) / beta + 0.25;
    DerivedCoefficients::assemble(beta, a, c, l, realness, config.solution_domain(), config.beta_variant)
}

/// Per-level quantities `M`, `ζ₁ ≥ 0`, `ζ₂`, `ζ₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCoefficients {
    pub n: usize,
    pub m: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub zeta3: f64,
}

impl LevelCoefficients {
    pub fn from_m(coeffs: &DerivedCoefficients, n: usize, m: f64) -> Result<Self> {
        let sum = coeffs.a + m;
        if sum > 0.0 {
            return Err(Error::ComplexZeta { value: sum });
        }
        Ok(Self {
            n,
            m,
            zeta1: (-sum).sqrt(),
            zeta2: -(coeffs.c + 2.0 * m),
            zeta3: -(coeffs.l + m),
        })
    }

    /// `σ̃(s) = −ζ₁² + ζ₂ s − ζ₃ s²`
    pub fn tilde_sigma(&self) -> Poly {
        Poly::new(-self.zeta1 * self.zeta1, self.zeta2, -self.zeta3)
    }

    /// The NU form of the transformed equation on the given s-domain.
    pub fn nu_problem(&self, domain: SolutionDomain) -> NuProblem {
        NuProblem::new(
            Poly::linear(1.0, -1.0),
            Poly::new(0.0, 1.0, -1.0),
            self.tilde_sigma(),
            domain.interval(),
        )
        .expect("IDEP polynomials respect the NU degree bounds")
    }
}

/// Level coefficients for a given momentum eigenvalue `cPₙ` (eV).
pub fn level_coefficients(coeffs: &DerivedCoefficients, n: usize, cpn: f64) -> Result<LevelCoefficients> {
    LevelCoefficients::from_m(coeffs, n, coeffs.m_of_momentum(cpn))
}
