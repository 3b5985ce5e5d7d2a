//! Closed-form spectrum and eigenfunctions of the transformed equation.
//!
//! Three readings of the momentum eigenvalue are provided:
//!
//! * [`EigenvalueVariant::AsPrintedEq22`]: `A + β b²` with
//!   `b = (2A − C − n(n+1) − (2n+1)/R) / (2(n + 1/R))`, taken literally.
//! * [`EigenvalueVariant::BetaTimesA`]: `βA + β b²`, the same expression
//!   with the bare `A` given units of energy.
//! * [`EigenvalueVariant::QuantizationRoot`]: solves `λ(M) = λₙ(M)` for `M`
//!   by bisection, using the NU branch that is square integrable on the
//!   s-domain of the instance, then `cPₙ = −βM`.

use std::fmt;

use crate::error::{Error, Result};
use crate::nu::{reduce_with, BranchPolicy, NuReduction};
use crate::poly::Poly;
use crate::potential::{derive_coefficients, DerivedCoefficients, LevelCoefficients, PotentialConfig, SolutionDomain};
use crate::quadrature::GaussLegendre;
use crate::units::UnitSystem;

/// Relative width at which the quantisation bisection stops.
pub const ROOT_TOLERANCE: f64 = 1e-12;
const MAX_BISECTIONS: usize = 400;
// Doublings of the bracket below `M = −A`; ζ₁² beyond ~1e12 times the
// coefficient scale is out of f64 reach anyway.
const MAX_EXPANSIONS: usize = 40;

/// Default number of Gauss-Legendre points for normalisation.
pub const DEFAULT_QUADRATURE_ORDER: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EigenvalueVariant {
    AsPrintedEq22,
    BetaTimesA,
    #[default]
    QuantizationRoot,
}

impl EigenvalueVariant {
    pub const ALL: [EigenvalueVariant; 3] = [
        EigenvalueVariant::AsPrintedEq22,
        EigenvalueVariant::BetaTimesA,
        EigenvalueVariant::QuantizationRoot,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EigenvalueVariant::AsPrintedEq22 => "as-printed-eq22",
            EigenvalueVariant::BetaTimesA => "beta-times-a",
            EigenvalueVariant::QuantizationRoot => "quantization-root",
        }
    }
}

impl fmt::Display for EigenvalueVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for EigenvalueVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.label() == s)
            .ok_or_else(|| Error::invalid("variant", format!("unknown eigenvalue variant `{s}`")))
    }
}

/// Why a level has no eigenvalue under some variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Exclusion {
    /// `A + M > 0`: `ζ₁` would be complex.
    ComplexZeta { a_plus_m: f64 },
    /// The quantisation condition has no root with `ζ₁ ≥ 0`.
    NoRoot { at_zeta1_zero: f64 },
    /// A root exists but the eigenfunction is not square integrable.
    NotNormalizable { infinity_exponent: f64 },
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exclusion::ComplexZeta { a_plus_m } => write!(f, "A + M = {a_plus_m:e} > 0"),
            Exclusion::NoRoot { at_zeta1_zero } => {
                write!(f, "no root with zeta1 >= 0 (lambda - lambda_n = {at_zeta1_zero:e} at zeta1 = 0)")
            }
            Exclusion::NotNormalizable { infinity_exponent } => {
                write!(f, "not normalizable (growth exponent {infinity_exponent:e})")
            }
        }
    }
}

/// Result of solving the quantisation condition for one level.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedLevel {
    pub level: LevelCoefficients,
    pub cpn: f64,
    /// Exponent `ν` of `(1 − s)` in `φ = s^{ζ₁}(1 − s)^ν`.
    pub nu: f64,
    pub reduction: NuReduction,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Either an eigenvalue or the reason the level is excluded.
pub type LevelOutcome<T> = std::result::Result<T, Exclusion>;

fn branch_policy(domain: SolutionDomain) -> BranchPolicy {
    match domain {
        SolutionDomain::UnitInterval => BranchPolicy::NegativeTauSlope,
        SolutionDomain::NegativeAxis => BranchPolicy::DecayingAtInfinity,
    }
}

fn reduce_at(coeffs: &DerivedCoefficients, n: usize, m: f64) -> Result<(LevelCoefficients, NuReduction)> {
    let level = LevelCoefficients::from_m(coeffs, n, m)?;
    let red = reduce_with(&level.nu_problem(coeffs.domain), branch_policy(coeffs.domain))?;
    Ok((level, red))
}

/// `λ(M) − λₙ(M)` on the admissible branch.
fn condition(coeffs: &DerivedCoefficients, n: usize, m: f64) -> Result<f64> {
    let (_, red) = reduce_at(coeffs, n, m)?;
    Ok(red.lambda() - red.lambda_n(n))
}

/// Solves `λ(M) = λₙ(M)` for `M ≤ −A` by bracket expansion and bisection.
pub fn solve_quantization(coeffs: &DerivedCoefficients, n: usize) -> Result<LevelOutcome<QuantizedLevel>> {
    let hi0 = -coeffs.a;
    let f_hi = condition(coeffs, n, hi0)?;
    let (mut lo, mut hi) = (hi0, hi0);
    let mut f_lo = f_hi;
    if f_hi != 0.0 {
        let mut step = coeffs.max_abs().max(1.0);
        let mut found = false;
        for _ in 0..MAX_EXPANSIONS {
            lo = hi0 - step;
            f_lo = condition(coeffs, n, lo)?;
            if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
                found = true;
                break;
            }
            // Move the upper end down so the bracket stays tight.
            hi = lo;
            step *= 2.0;
            if !step.is_finite() {
                break;
            }
        }
        if !found {
            return Ok(Err(Exclusion::NoRoot { at_zeta1_zero: f_hi }));
        }
    }

    let mut iterations = 0;
    let bracket0 = (lo, hi);
    let m = if f_lo == 0.0 {
        lo
    } else if f_hi == 0.0 && lo == hi {
        hi
    } else {
        let sign_lo = f_lo.signum();
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || (hi - lo) <= ROOT_TOLERANCE * mid.abs() + f64::MIN_POSITIVE {
                break mid;
            }
            if iterations >= MAX_BISECTIONS {
                return Err(Error::Numerical(format!(
                    "quantization bisection for n = {n} did not converge: bracket [{lo:e}, {hi:e}] after {iterations} steps"
                )));
            }
            iterations += 1;
            let f = condition(coeffs, n, mid)?;
            if f == 0.0 {
                break mid;
            }
            if f.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    };

    let (level, reduction) = reduce_at(coeffs, n, m)?;
    let branch = reduction.branch();
    let nu = -branch.pi.eval(1.0);
    if coeffs.domain == SolutionDomain::NegativeAxis {
        // ∫|ψ|² dt ∝ ∫|s|^{2(p + n) − 1} ds at s → −∞.
        let p = branch.phi_infinity_exponent.unwrap_or(f64::INFINITY) + n as f64;
        if p >= 0.0 {
            return Ok(Err(Exclusion::NotNormalizable { infinity_exponent: p }));
        }
    }
    Ok(Ok(QuantizedLevel {
        level,
        cpn: coeffs.momentum_of_m(m),
        nu,
        reduction,
        bracket: bracket0,
        iterations,
    }))
}

/// The bracket `b` the literal readings square.
fn printed_bracket(coeffs: &DerivedCoefficients, n: usize) -> Result<f64> {
    let nf = n as f64;
    let inv_r = coeffs.inv_r();
    let den = 2.0 * (nf + inv_r);
    if den == 0.0 {
        return Err(Error::Pole { n });
    }
    Ok((2.0 * coeffs.a - coeffs.c - nf * (nf + 1.0) - (2.0 * nf + 1.0) * inv_r) / den)
}

/// `cPₙ` (eV) under the chosen reading, or why the level is excluded.
pub fn momentum_eigenvalue(
    coeffs: &DerivedCoefficients,
    n: usize,
    variant: EigenvalueVariant,
) -> Result<LevelOutcome<f64>> {
    let literal = |cpn: f64| {
        let sum = coeffs.a + coeffs.m_of_momentum(cpn);
        if sum > 0.0 {
            Err(Exclusion::ComplexZeta { a_plus_m: sum })
        } else {
            Ok(cpn)
        }
    };
    match variant {
        EigenvalueVariant::AsPrintedEq22 => {
            let b = printed_bracket(coeffs, n)?;
            Ok(literal(coeffs.a + coeffs.beta * b * b))
        }
        EigenvalueVariant::BetaTimesA => {
            let b = printed_bracket(coeffs, n)?;
            Ok(literal(coeffs.beta * coeffs.a + coeffs.beta * b * b))
        }
        EigenvalueVariant::QuantizationRoot => Ok(solve_quantization(coeffs, n)?.map(|q| q.cpn)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLevel {
    pub n: usize,
    /// eV
    pub cpn: f64,
    /// eV/c; numerically equal to `cpn` with `c = 1`.
    pub pn: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub config: PotentialConfig,
    pub formula_variant: EigenvalueVariant,
    pub levels: Vec<SpectrumLevel>,
    pub excluded: Vec<(usize, Exclusion)>,
    /// Largest admitted `n`, or `None` if nothing was admitted.
    pub realness_cutoff: Option<usize>,
}

pub fn compute_spectrum(
    config: &PotentialConfig,
    units: &UnitSystem,
    levels: impl IntoIterator<Item = usize>,
    variant: EigenvalueVariant,
) -> Result<SpectrumResult> {
    let coeffs = derive_coefficients(config, units)?;
    let mut ns: Vec<usize> = levels.into_iter().collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    let mut excluded = Vec::new();
    for n in ns {
        match momentum_eigenvalue(&coeffs, n, variant)? {
            Ok(cpn) => out.push(SpectrumLevel { n, cpn, pn: cpn }),
            Err(why) => excluded.push((n, why)),
        }
    }
    let realness_cutoff = out.last().map(|l| l.n);
    Ok(SpectrumResult {
        config: config.clone(),
        formula_variant: variant,
        levels: out,
        excluded,
        realness_cutoff,
    })
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence in `n`.
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::invalid("jacobi", format!("parameters ({a}, {b}) must exceed -1")));
    }
    Ok(jacobi_unchecked(n, a, b, x))
}

fn jacobi_unchecked(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    let ab = a + b;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `d^m/dx^m P_n^{(a,b)}(x)`
fn jacobi_derivative(m: usize, n: usize, a: f64, b: f64, x: f64) -> f64 {
    if m > n {
        return 0.0;
    }
    let factor: f64 = (0..m).map(|j| 0.5 * (n as f64 + a + b + 1.0 + j as f64)).product();
    factor * jacobi_unchecked(n - m, a + m as f64, b + m as f64, x)
}

/// Shape of `ψₙ(s) = Bₙ s^{ζ₁}(1 − s)^ν P_n^{(2ζ₁, 2ν − 1)}(1 − 2s)` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSpec {
    pub n: usize,
    pub zeta1: f64,
    /// `ν = 1/R` on the unit interval.
    pub nu: f64,
    pub normalization: f64,
}

impl WavefunctionSpec {
    /// Unnormalised (`Bₙ = 1`) eigenfunction shape.
    pub fn new(n: usize, zeta1: f64, nu: f64) -> Result<Self> {
        if !(2.0 * zeta1 > -1.0) || !(2.0 * nu - 1.0 > -1.0) {
            return Err(Error::invalid(
                "wavefunction",
                format!("Jacobi parameters ({}, {}) must exceed -1", 2.0 * zeta1, 2.0 * nu - 1.0),
            ));
        }
        Ok(Self {
            n,
            zeta1,
            nu,
            normalization: 1.0,
        })
    }

    /// Normalised eigenfunction of a solved level.
    pub fn for_level(q: &QuantizedLevel, order: usize) -> Result<Self> {
        let spec = Self::new(q.level.n, q.level.zeta1, q.nu)?;
        spec.normalized(order)
    }

    pub fn normalized(mut self, order: usize) -> Result<Self> {
        self.normalization = 1.0;
        self.normalization = normalize(&self, order)?;
        Ok(self)
    }

    pub fn jacobi_parameters(&self) -> (f64, f64) {
        (2.0 * self.zeta1, 2.0 * self.nu - 1.0)
    }

    fn shape(&self, s: f64) -> f64 {
        let (a, b) = self.jacobi_parameters();
        s.powf(self.zeta1) * (1.0 - s).powf(self.nu) * jacobi_unchecked(self.n, a, b, 1.0 - 2.0 * s)
    }

    /// `(ψ, ψ', ψ'')` at `s`, differentiated analytically.
    pub fn derivatives(&self, s: f64) -> (f64, f64, f64) {
        let (a, b) = self.jacobi_parameters();
        let x = 1.0 - 2.0 * s;
        let (z, nu) = (self.zeta1, self.nu);
        let g = s.powf(z) * (1.0 - s).powf(nu);
        let lg1 = z / s - nu / (1.0 - s);
        let lg2 = lg1 * lg1 - z / (s * s) - nu / ((1.0 - s) * (1.0 - s));
        let p = jacobi_unchecked(self.n, a, b, x);
        let ps = -2.0 * jacobi_derivative(1, self.n, a, b, x);
        let pss = 4.0 * jacobi_derivative(2, self.n, a, b, x);
        let bn = self.normalization;
        (
            bn * g * p,
            bn * g * (lg1 * p + ps),
            bn * g * (lg2 * p + 2.0 * lg1 * ps + pss),
        )
    }
}

/// `ψₙ(s)` for `s ∈ (0, 1)`.
pub fn wavefunction(spec: &WavefunctionSpec, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain { s });
    }
    Ok(spec.normalization * spec.shape(s))
}

/// `Bₙ` making `∫₀¹ ψₙ² ds = 1`.
pub fn normalize(spec: &WavefunctionSpec, order: usize) -> Result<f64> {
    let unit = WavefunctionSpec {
        normalization: 1.0,
        ..*spec
    };
    normalization_constant(|s| unit.shape(s), order)
}

/// `1/√∫₀¹ f(s)² ds`, by Gauss-Legendre in `θ` with `s = sin²(θ/2)`. The
/// substitution flattens algebraic endpoint behaviour at `s = 0, 1`.
pub fn normalization_constant(f: impl Fn(f64) -> f64, order: usize) -> Result<f64> {
    let integral = integrate_unit_interval(|s| f(s).powi(2), order);
    if !(integral.is_finite() && integral > 0.0) {
        return Err(Error::Integrability(format!("integral of psi^2 = {integral}")));
    }
    Ok(1.0 / integral.sqrt())
}

/// `∫₀¹ g(s) ds` with `s = sin²(θ/2)`, `ds = sin(θ/2) cos(θ/2) dθ`.
pub fn integrate_unit_interval(g: impl Fn(f64) -> f64, order: usize) -> f64 {
    let rule = GaussLegendre::new(order);
    rule.integrate(0.0, std::f64::consts::PI, |theta| {
        let (sh, ch) = (0.5 * theta).sin_cos();
        g(sh * sh) * sh * ch
    })
}

/// `σ²ψ'' + στ̃ψ' + σ̃ψ` for the transformed equation, i.e. the equation
/// multiplied through by `s²(1 − s)²`.
pub fn transformed_residual(level: &LevelCoefficients, spec: &WavefunctionSpec, s: f64) -> f64 {
    let (psi, d1, d2) = spec.derivatives(s);
    let sigma = s * (1.0 - s);
    sigma * sigma * d2 + sigma * (1.0 - s) * d1 + level.tilde_sigma().eval(s) * psi
}

/// Magnitude the residual is measured against: the largest `σ̃` coefficient.
pub fn residual_scale(level: &LevelCoefficients) -> f64 {
    let Poly([a, b, c]) = level.tilde_sigma();
    a.abs().max(b.abs()).max(c.abs()).max(1.0)
}

#[cfg(test)]
mod tests;
