//! Finite-difference ground truth for `−T ψ'' + V(t) ψ = cP ψ`, `T = ħ²/2mc²`,
//! on a uniform grid with Dirichlet ends.

mod tridiag;

pub use tridiag::SymTridiagonal;

use crate::error::{Error, Result};
use crate::potential::{evaluate_potential, PotentialConfig};
use crate::units::UnitSystem;

pub const MIN_POINTS: usize = 64;

/// Grid sizes chosen by [`domain_advisor`] stay in this range.
pub const ADVISOR_POINTS: (usize, usize) = (2000, 20000);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Boundary {
    #[default]
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub num_points: usize,
    pub boundary: Boundary,
    /// `(t_max − t_min)/(num_points − 1)`
    pub h: f64,
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, num_points: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::invalid("grid", format!("need t_min < t_max, got [{t_min}, {t_max}]")));
        }
        if num_points < MIN_POINTS {
            return Err(Error::invalid("grid", format!("num_points = {num_points} < {MIN_POINTS}")));
        }
        Ok(Self {
            t_min,
            t_max,
            num_points,
            boundary: Boundary::Dirichlet,
            h: (t_max - t_min) / (num_points - 1) as f64,
        })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.num_points {
            self.t_max
        } else {
            self.t_min + i as f64 * self.h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.num_points).map(|i| self.point(i)).collect()
    }

    /// Same interval with roughly half the points (every other node).
    pub fn halved(&self) -> Result<Self> {
        Self::new(self.t_min, self.t_max, self.num_points.div_ceil(2))
    }

    pub fn with_points(&self, num_points: usize) -> Result<Self> {
        Self::new(self.t_min, self.t_max, num_points)
    }
}

/// Richardson estimate for one level from the coarse (half-resolution) solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelConvergence {
    pub coarse: f64,
    /// `E_h + (E_h − E_2h)/3`
    pub extrapolated: f64,
    /// `|E_h − E_2h|/3`
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub spec: GridSpec,
    /// Ascending, eV.
    pub eigenvalues: Vec<f64>,
    /// Unit 2-norm, `num_points` entries each with zero ends.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Empty when the half-resolution grid is too coarse for `count`.
    pub convergence: Vec<LevelConvergence>,
    pub bisection_steps: usize,
}

/// The discretised operator: kinetic coefficient plus sampled potential.
#[derive(Debug, Clone, PartialEq)]
pub struct GridHamiltonian {
    pub spec: GridSpec,
    pub kinetic: f64,
    /// `V` at every grid point, ends included.
    pub potential: Vec<f64>,
}

impl GridHamiltonian {
    pub fn new(spec: GridSpec, kinetic: f64, potential: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        if !(kinetic.is_finite() && kinetic > 0.0) {
            return Err(Error::invalid("kinetic", format!("must be positive, got {kinetic}")));
        }
        let potential = spec.points().into_iter().map(&potential).collect::<Result<Vec<f64>>>()?;
        if let Some(v) = potential.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("potential is {v} on the grid")));
        }
        Ok(Self {
            spec,
            kinetic,
            potential,
        })
    }

    pub fn for_config(config: &PotentialConfig, units: &UnitSystem, spec: GridSpec) -> Result<Self> {
        let mc2 = units.mass_energy(config.molecule.mu)?;
        Self::new(spec, units.kinetic_coefficient(mc2), |t| evaluate_potential(config, t))
    }

    /// Interior block; both off-diagonals are the same `−T/h²`.
    pub fn matrix(&self) -> Result<SymTridiagonal> {
        let h2 = self.spec.h * self.spec.h;
        let n = self.spec.num_points - 2;
        let diag = (1..=n).map(|i| 2.0 * self.kinetic / h2 + self.potential[i]).collect();
        SymTridiagonal::new(diag, vec![-self.kinetic / h2; n - 1])
    }

    /// `(Hψ)ᵢ` at interior points, using `psi[0]` and `psi[N−1]` as given.
    pub fn apply_interior(&self, psi: &[f64]) -> Vec<f64> {
        let h2 = self.spec.h * self.spec.h;
        (1..psi.len() - 1)
            .map(|i| -self.kinetic * (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) / h2 + self.potential[i] * psi[i])
            .collect()
    }

    /// Lowest `count` eigenpairs, without a convergence estimate.
    pub fn solve(&self, count: usize) -> Result<GridSolution> {
        let (eigenvalues, eigenvectors, steps) = self.lowest(count)?;
        Ok(GridSolution {
            spec: self.spec,
            eigenvalues,
            eigenvectors,
            convergence: Vec::new(),
            bisection_steps: steps,
        })
    }

    fn lowest(&self, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>, usize)> {
        if count == 0 || count > self.spec.num_points / 4 {
            return Err(Error::Precondition(format!(
                "count = {count} must be in 1..={}",
                self.spec.num_points / 4
            )));
        }
        let m = self.matrix()?;
        let mut values = Vec::with_capacity(count);
        let mut interior: Vec<Vec<f64>> = Vec::with_capacity(count);
        let mut steps = 0;
        for k in 0..count {
            let (lam, it) = m.eigenvalue(k)?;
            steps += it;
            if let Some(&prev) = values.last() {
                if lam <= prev {
                    return Err(Error::Numerical(format!(
                        "eigenvalues {} and {k} not resolved: {prev:e}, {lam:e}",
                        k - 1
                    )));
                }
            }
            let v = m.eigenvector(lam, &interior)?;
            values.push(lam);
            interior.push(v);
        }
        let vectors = interior
            .into_iter()
            .map(|v| {
                let mut full = Vec::with_capacity(v.len() + 2);
                full.push(0.0);
                full.extend(v);
                full.push(0.0);
                full
            })
            .collect();
        Ok((values, vectors, steps))
    }
}

/// Lowest `count` eigenpairs of `−T d²/dt² + V` on `spec`, with a Richardson
/// estimate from the half-resolution grid when that grid is fine enough.
pub fn solve_potential(
    spec: GridSpec,
    kinetic: f64,
    potential: impl Fn(f64) -> Result<f64>,
    count: usize,
) -> Result<GridSolution> {
    let mut sol = GridHamiltonian::new(spec, kinetic, &potential)?.solve(count)?;
    if let Ok(half) = spec.halved() {
        if count <= half.num_points / 4 {
            let coarse = GridHamiltonian::new(half, kinetic, &potential)?.solve(count)?;
            sol.convergence = sol
                .eigenvalues
                .iter()
                .zip(coarse.eigenvalues)
                .map(|(&fine, coarse)| LevelConvergence {
                    coarse,
                    extrapolated: fine + (fine - coarse) / 3.0,
                    error_estimate: (fine - coarse).abs() / 3.0,
                })
                .collect();
        }
    }
    Ok(sol)
}

/// Lowest `count` eigenpairs of the molecule's operator on `spec`.
pub fn solve_grid_spectrum(
    config: &PotentialConfig,
    units: &UnitSystem,
    spec: GridSpec,
    count: usize,
) -> Result<GridSolution> {
    let mc2 = units.mass_energy(config.molecule.mu)?;
    solve_potential(spec, units.kinetic_coefficient(mc2), |t| evaluate_potential(config, t), count)
}

/// `‖Hψ − cP ψ‖₂ / ‖ψ‖₂` over interior points.
pub fn residual_norm(config: &PotentialConfig, units: &UnitSystem, cpn: f64, psi: &[f64], spec: GridSpec) -> Result<f64> {
    residual_with(&GridHamiltonian::for_config(config, units, spec)?, cpn, psi)
}

pub fn residual_with(hamiltonian: &GridHamiltonian, cpn: f64, psi: &[f64]) -> Result<f64> {
    if psi.len() != hamiltonian.spec.num_points {
        return Err(Error::Precondition(format!(
            "psi has {} entries, grid has {}",
            psi.len(),
            hamiltonian.spec.num_points
        )));
    }
    let norm = psi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 1e-12) || !norm.is_finite() {
        return Err(Error::Degenerate(format!("psi norm {norm:e}")));
    }
    let hpsi = hamiltonian.apply_interior(psi);
    let defect: f64 = hpsi
        .iter()
        .zip(&psi[1..psi.len() - 1])
        .map(|(h, p)| (h - cpn * p).powi(2))
        .sum();
    Ok(defect.sqrt() / norm)
}

/// Box centred on `tₑ`, reaching the classical turning points at an energy
/// well above the low levels, padded, and resolved to about 1/30 of the
/// harmonic length `(T/V''(tₑ))^{1/4}`.
pub fn domain_advisor(config: &PotentialConfig, units: &UnitSystem) -> Result<GridSpec> {
    let te = config.molecule.te;
    let mc2 = units.mass_energy(config.molecule.mu)?;
    let kinetic = units.kinetic_coefficient(mc2);
    let curvature = config.equilibrium_curvature();
    let length = (kinetic / curvature).powf(0.25);
    let quantum = (2.0 * kinetic * curvature).sqrt();
    let (left, right) = config.asymptotes();
    let ceiling = left.min(right.unwrap_or(f64::INFINITY));
    let energy = (60.0 * quantum).min(0.9999 * ceiling);

    let upper = config.pole_time().unwrap_or(f64::INFINITY);
    let t_left = turning_point(config, te, -length, energy, f64::NEG_INFINITY)?;
    let t_right = turning_point(config, te, length, energy, upper)?;
    let pad = 0.3 * (t_right - t_left);
    let t_min = t_left - pad;
    let mut t_max = t_right + pad;
    if t_max >= upper {
        t_max = upper - 0.5 * (upper - t_right);
    }
    let target = length / 30.0;
    let n = ((t_max - t_min) / target).ceil() as usize + 1;
    let n = n.clamp(ADVISOR_POINTS.0, ADVISOR_POINTS.1);
    // Odd counts let the half-resolution grid nest.
    GridSpec::new(t_min, t_max, n | 1)
}

/// First `t` moving from `te` in steps of `step` (growing) with `V(t) ≥ energy`,
/// refined by bisection; stops short of `limit`.
fn turning_point(config: &PotentialConfig, te: f64, step: f64, energy: f64, limit: f64) -> Result<f64> {
    let mut inner = te;
    let mut stride = step;
    for _ in 0..200 {
        let mut outer = inner + stride;
        if (step > 0.0 && outer >= limit) || (step < 0.0 && outer <= limit) {
            outer = 0.5 * (inner + limit);
        }
        if evaluate_potential(config, outer)? >= energy {
            let (mut a, mut b) = (inner, outer);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if evaluate_potential(config, mid)? >= energy {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Ok(b);
        }
        inner = outer;
        stride *= 1.5;
    }
    Err(Error::Numerical(format!("no turning point at {energy:e} eV from t = {te}")))
}
