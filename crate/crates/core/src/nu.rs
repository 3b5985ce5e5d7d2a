//! Generic Nikiforov-Uvarov reduction of
//!
//! ```text
//! ψ'' + τ̃/σ ψ' + σ̃/σ² ψ = 0
//! ```
//!
//! with `deg τ̃ ≤ 1`, `deg σ, deg σ̃ ≤ 2`. The factorisation `ψ = φ(s) y(s)`
//! with `φ'/φ = Π/σ` leads to
//!
//! ```text
//! Π(s) = (σ' − τ̃)/2 ± √[((σ' − τ̃)/2)² − σ̃ + kσ]
//! ```
//!
//! where `k` is fixed by requiring the radicand to be a perfect square. Each
//! of the two `k` roots and two signs of the root gives one branch; every
//! branch carries `τ = τ̃ + 2Π`, `λ = k + Π'` and the exponents of `φ` at the
//! zeros of `σ`. The quantisation condition is `λ = λₙ = −nτ' − n(n−1)σ''/2`.

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Relative tolerance of every "is zero" test, scaled by the largest
/// input coefficient.
pub const ZERO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct NuProblem {
    tilde_tau: Poly,
    sigma: Poly,
    tilde_sigma: Poly,
    domain: (f64, f64),
}

impl NuProblem {
    pub fn new(tilde_tau: Poly, sigma: Poly, tilde_sigma: Poly, domain: (f64, f64)) -> Result<Self> {
        if tilde_tau.0[2] != 0.0 {
            return Err(Error::invalid("tilde_tau", "degree must be at most 1"));
        }
        if sigma.is_zero() {
            return Err(Error::invalid("sigma", "must not vanish identically"));
        }
        if !(domain.0 < domain.1) {
            return Err(Error::invalid("domain", format!("{domain:?} is empty")));
        }
        let all = [tilde_tau.0, sigma.0, tilde_sigma.0].concat();
        if all.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients", "must be finite"));
        }
        Ok(Self {
            tilde_tau,
            sigma,
            tilde_sigma,
            domain,
        })
    }

    pub fn tilde_tau(&self) -> Poly {
        self.tilde_tau
    }

    pub fn sigma(&self) -> Poly {
        self.sigma
    }

    pub fn tilde_sigma(&self) -> Poly {
        self.tilde_sigma
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn scale(&self) -> f64 {
        self.tilde_tau
            .max_abs_coeff()
            .max(self.sigma.max_abs_coeff())
            .max(self.tilde_sigma.max_abs_coeff())
            .max(1.0)
    }

    /// `(σ' − τ̃)/2`
    fn half_shift(&self) -> Poly {
        0.5 * (self.sigma.derivative() - self.tilde_tau)
    }

    /// The radicand `((σ' − τ̃)/2)² − σ̃ + kσ`.
    pub fn radicand(&self, k: f64) -> Poly {
        let [h0, h1, _] = self.half_shift().0;
        let [t0, t1, t2] = self.tilde_sigma.0;
        let [s0, s1, s2] = self.sigma.0;
        Poly::new(h0 * h0 - t0 + k * s0, 2.0 * h0 * h1 - t1 + k * s1, h1 * h1 - t2 + k * s2)
    }

    /// Discriminant of the radicand, zero exactly at the admissible `k`.
    pub fn discriminant(&self, k: f64) -> f64 {
        let [c0, c1, c2] = self.radicand(k).0;
        c1 * c1 - 4.0 * c0 * c2
    }
}

/// Exponent of `φ ∝ |s − r|^p` at one zero `r` of `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointExponent {
    pub root: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuBranch {
    pub k: f64,
    /// Sign in front of the square root.
    pub root_sign: f64,
    pub pi: Poly,
    pub tau: Poly,
    /// `λ = k + Π'`
    pub lambda: f64,
    pub phi_exponents: Vec<EndpointExponent>,
    /// `φ ∝ |s|^p` as `|s| → ∞`, when `deg σ = 2`.
    pub phi_infinity_exponent: Option<f64>,
}

impl NuBranch {
    pub fn tau_slope(&self) -> f64 {
        self.tau.0[1]
    }

    /// `λₙ = −nτ' − n(n−1)σ''/2`
    pub fn lambda_n(&self, n: usize, sigma: Poly) -> f64 {
        let n = n as f64;
        -n * self.tau_slope() - 0.5 * n * (n - 1.0) * sigma.derivative().derivative().0[0]
    }

    /// `φ(s) = exp ∫ Π/σ`, up to a constant factor.
    pub fn phi(&self, s: f64) -> f64 {
        self.phi_exponents
            .iter()
            .map(|e| (s - e.root).abs().powf(e.exponent))
            .product()
    }

    fn bounded_at(&self, endpoint: f64, tol: f64) -> bool {
        self.phi_exponents
            .iter()
            .filter(|e| same_point(e.root, endpoint))
            .all(|e| e.exponent >= -tol)
    }
}

fn same_point(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// How to pick one branch out of the four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchPolicy {
    /// Branches with `τ' < 0`; among them prefer those whose `φ` is bounded
    /// at every finite endpoint of the domain that is a zero of `σ`, then the
    /// most negative `τ'`.
    #[default]
    NegativeTauSlope,
    /// Branches bounded at every finite endpoint that is a zero of `σ`; pick
    /// the one whose `φ` falls off fastest as `|s| → ∞`. Meant for domains
    /// reaching infinity, where `τ' < 0` does not single out the
    /// square-integrable solution.
    DecayingAtInfinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuReduction {
    pub k_plus: f64,
    pub k_minus: f64,
    pub branches: Vec<NuBranch>,
    pub selected: usize,
    /// Indices of all branches passing the policy's primary filter.
    pub qualifying: Vec<usize>,
    pub policy: BranchPolicy,
    sigma: Poly,
}

impl NuReduction {
    pub fn branch(&self) -> &NuBranch {
        &self.branches[self.selected]
    }

    pub fn pi(&self) -> Poly {
        self.branch().pi
    }

    pub fn tau(&self) -> Poly {
        self.branch().tau
    }

    pub fn lambda(&self) -> f64 {
        self.branch().lambda
    }

    pub fn lambda_n(&self, n: usize) -> f64 {
        self.branch().lambda_n(n, self.sigma)
    }

    pub fn sigma(&self) -> Poly {
        self.sigma
    }
}

pub fn reduce(problem: &NuProblem) -> Result<NuReduction> {
    reduce_with(problem, BranchPolicy::NegativeTauSlope)
}

pub fn reduce_with(problem: &NuProblem, policy: BranchPolicy) -> Result<NuReduction> {
    let scale = problem.scale();
    let (k_plus, k_minus) = k_roots(problem)?;
    let h = problem.half_shift();
    let sigma = problem.sigma;
    let roots = sigma.real_roots();
    let dsigma = sigma.derivative();

    let mut branches = Vec::with_capacity(4);
    for k in [k_minus, k_plus] {
        let Some((u, v)) = square_root_of(problem.radicand(k), scale) else {
            continue;
        };
        for root_sign in [1.0, -1.0] {
            // Exactly linear by construction.
            let pi = Poly::linear(h.0[0] + root_sign * v, h.0[1] + root_sign * u);
            let tau = problem.tilde_tau + 2.0 * pi;
            let phi_exponents = roots
                .iter()
                .filter(|&&r| dsigma.eval(r) != 0.0)
                .map(|&r| EndpointExponent {
                    root: r,
                    exponent: pi.eval(r) / dsigma.eval(r),
                })
                .collect();
            let phi_infinity_exponent = (sigma.degree() == Some(2)).then(|| pi.0[1] / sigma.0[2]);
            branches.push(NuBranch {
                k,
                root_sign,
                pi,
                tau,
                lambda: k + pi.0[1],
                phi_exponents,
                phi_infinity_exponent,
            });
        }
    }
    if branches.is_empty() {
        return Err(Error::NoClosedForm(
            "radicand is not the square of a real polynomial for either k".into(),
        ));
    }

    // Π and τ scale like the square root of the input coefficients.
    let tol = ZERO_TOLERANCE * scale.sqrt();
    let finite_ends: Vec<f64> = [problem.domain.0, problem.domain.1]
        .into_iter()
        .filter(|e| e.is_finite())
        .collect();
    let bounded = |b: &NuBranch| finite_ends.iter().all(|&e| b.bounded_at(e, tol));

    let (qualifying, selected) = match policy {
        BranchPolicy::NegativeTauSlope => {
            let q: Vec<usize> = (0..branches.len())
                .filter(|&i| branches[i].tau_slope() < -tol)
                .collect();
            let pool: Vec<usize> = {
                let b: Vec<usize> = q.iter().copied().filter(|&i| bounded(&branches[i])).collect();
                if b.is_empty() {
                    q.clone()
                } else {
                    b
                }
            };
            let sel = pool.iter().copied().min_by(|&a, &b| {
                branches[a].tau_slope().total_cmp(&branches[b].tau_slope())
            });
            (q, sel)
        }
        BranchPolicy::DecayingAtInfinity => {
            let q: Vec<usize> = (0..branches.len())
                .filter(|&i| bounded(&branches[i]) && branches[i].phi_infinity_exponent.is_some())
                .collect();
            let sel = q.iter().copied().min_by(|&a, &b| {
                let ea = branches[a].phi_infinity_exponent.unwrap_or(f64::INFINITY);
                let eb = branches[b].phi_infinity_exponent.unwrap_or(f64::INFINITY);
                ea.total_cmp(&eb)
            });
            (q, sel)
        }
    };
    let selected = selected.ok_or_else(|| {
        Error::BranchSelection(format!(
            "{policy:?}; tau slopes {:?}",
            branches.iter().map(NuBranch::tau_slope).collect::<Vec<_>>()
        ))
    })?;

    Ok(NuReduction {
        k_plus,
        k_minus,
        branches,
        selected,
        qualifying,
        policy,
        sigma,
    })
}

/// Roots in `k` of the discriminant `c₁(k)² − 4c₀(k)c₂(k)`, larger first.
fn k_roots(problem: &NuProblem) -> Result<(f64, f64)> {
    let r0 = problem.radicand(0.0);
    let [a0, a1, a2] = r0.0;
    let [s0, s1, s2] = problem.sigma.0;
    let qa = s1 * s1 - 4.0 * s0 * s2;
    let qb = 2.0 * a1 * s1 - 4.0 * (a0 * s2 + a2 * s0);
    let qc = a1 * a1 - 4.0 * a0 * a2;

    let sigma_scale = problem.sigma.max_abs_coeff();
    if qa.abs() <= ZERO_TOLERANCE * sigma_scale * sigma_scale {
        if qb == 0.0 {
            return Err(Error::NoClosedForm("discriminant does not depend on k".into()));
        }
        let k = -qc / qb;
        return Ok((k, k));
    }
    let disc = qb * qb - 4.0 * qa * qc;
    let size = qb * qb + (4.0 * qa * qc).abs();
    if disc < -ZERO_TOLERANCE * size {
        return Err(Error::NoClosedForm(format!("no real k (discriminant {disc:e})")));
    }
    let root = disc.max(0.0).sqrt();
    let q = -0.5 * (qb + if qb >= 0.0 { root } else { -root });
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / qa, qc / q) };
    Ok((r1.max(r2), r1.min(r2)))
}

/// `(u, v)` with `(u s + v)² = c₂s² + c₁s + c₀`, normalised to `v ≥ 0`.
fn square_root_of(p: Poly, scale: f64) -> Option<(f64, f64)> {
    let [c0, c1, c2] = p.0;
    let tol = ZERO_TOLERANCE * p.max_abs_coeff().max(scale);
    if c0 < -tol || c2 < -tol {
        return None;
    }
    let (c0, c2) = (c0.max(0.0), c2.max(0.0));
    let (u, v) = if c0 >= c2 {
        let v = c0.sqrt();
        (if v > 0.0 { c1 / (2.0 * v) } else { c2.sqrt() }, v)
    } else {
        let u = c2.sqrt();
        (u, c1 / (2.0 * u))
    };
    if v < 0.0 || (v == 0.0 && u < 0.0) {
        Some((-u, -v))
    } else {
        Some((u, v))
    }
}

/// `(λ from k, λₙ)` for the selected branch; the level is an eigenstate
/// exactly when the two agree.
pub fn quantization_lambda(reduction: &NuReduction, n: usize) -> (f64, f64) {
    (reduction.lambda(), reduction.lambda_n(n))
}

/// Weight `ρ` solving Pearson's equation `(σρ)' = τρ`:
/// `ρ(s) = exp(γ₁s + γ₂s²/2) Π |s − rᵢ|^{pᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pub factors: Vec<EndpointExponent>,
    pub gamma1: f64,
    pub gamma2: f64,
    /// False when some exponent at a finite endpoint of the domain is ≤ −1.
    pub integrable: bool,
}

impl Weight {
    pub fn eval(&self, s: f64) -> f64 {
        let poly = self
            .factors
            .iter()
            .map(|f| (s - f.root).abs().powf(f.exponent))
            .product::<f64>();
        poly * (self.gamma1 * s + 0.5 * self.gamma2 * s * s).exp()
    }

    /// `ρ'/ρ`
    pub fn log_derivative(&self, s: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| f.exponent / (s - f.root))
            .sum::<f64>()
            + self.gamma1
            + self.gamma2 * s
    }
}

pub fn weight_function(reduction: &NuReduction, problem: &NuProblem) -> Result<Weight> {
    let sigma = problem.sigma;
    let g = reduction.tau() - sigma.derivative();
    let (factors, gamma1, gamma2) = match sigma.degree() {
        Some(2) => {
            let roots = sigma.real_roots();
            if roots.len() != 2 {
                return Err(Error::NoClosedForm("weight needs two distinct real zeros of sigma".into()));
            }
            let ds = sigma.derivative();
            let f = roots
                .iter()
                .map(|&r| EndpointExponent {
                    root: r,
                    exponent: g.eval(r) / ds.eval(r),
                })
                .collect();
            (f, 0.0, 0.0)
        }
        Some(1) => {
            let r = -sigma.0[0] / sigma.0[1];
            let f = vec![EndpointExponent {
                root: r,
                exponent: g.eval(r) / sigma.0[1],
            }];
            (f, g.0[1] / sigma.0[1], 0.0)
        }
        _ => (Vec::new(), g.0[0] / sigma.0[0], g.0[1] / sigma.0[0]),
    };
    let (lo, hi) = problem.domain;
    let integrable = factors
        .iter()
        .filter(|f| same_point(f.root, lo) || same_point(f.root, hi))
        .all(|f| f.exponent > -1.0);
    Ok(Weight {
        factors,
        gamma1,
        gamma2,
        integrable,
    })
}
