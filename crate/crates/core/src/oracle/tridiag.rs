//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 256;
const INVERSE_ITERATIONS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Precondition(format!(
                "tridiagonal shape: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Precondition("non-finite matrix entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    fn pivmin(&self) -> f64 {
        let emax = self.off.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) and the bisection steps used.
    pub fn eigenvalue(&self, k: usize) -> Result<(f64, usize)> {
        if k >= self.dim() {
            return Err(Error::Precondition(format!("eigenvalue index {k} >= dimension {}", self.dim())));
        }
        let (glo, ghi) = self.gershgorin();
        let pad = f64::EPSILON * glo.abs().max(ghi.abs()) + self.pivmin();
        let (mut lo, mut hi) = (glo - pad, ghi + pad);
        for it in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + self.pivmin() {
                return Ok((mid, it));
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::Numerical(format!(
            "bisection for eigenvalue {k} did not converge after {MAX_BISECTIONS} steps: [{lo:e}, {hi:e}]"
        )))
    }

    /// `y = A x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Unit eigenvector for `lambda`, orthogonalised against `previous`.
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.dim();
        let lu = ShiftedLu::new(self, lambda);
        // Fixed start vector for reproducibility.
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).sin()).collect();
        for _ in 0..INVERSE_ITERATIONS {
            orthogonalize(&mut x, previous);
            normalize(&mut x)?;
            x = lu.solve(&x);
        }
        orthogonalize(&mut x, previous);
        orthogonalize(&mut x, previous);
        normalize(&mut x)?;
        Ok(x)
    }
}

fn orthogonalize(x: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let d: f64 = x.iter().zip(b).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(b).for_each(|(a, b)| *a -= d * b);
    }
}

fn normalize(x: &mut [f64]) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Numerical(format!("inverse iteration produced a vector of norm {norm}")));
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(())
}

/// LU factors of `A − λI` with partial pivoting; `U` has two superdiagonals.
struct ShiftedLu {
    l: Vec<f64>,
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    swap: Vec<bool>,
}

impl ShiftedLu {
    fn new(a: &SymTridiagonal, lambda: f64) -> Self {
        let n = a.dim();
        let tiny = f64::EPSILON * a.norm_bound().max(f64::MIN_POSITIVE);
        let mut l = vec![0.0; n.saturating_sub(1)];
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut swap = vec![false; n.saturating_sub(1)];
        // Working row i: d on the diagonal, e right of it (the entry after
        // that is always zero once the previous column is eliminated).
        let mut d = a.diag[0] - lambda;
        let mut e = if n > 1 { a.off[0] } else { 0.0 };
        for i in 0..n - 1 {
            let below = a.off[i];
            let next_d = a.diag[i + 1] - lambda;
            let next_e = if i + 2 < n { a.off[i + 1] } else { 0.0 };
            if below.abs() > d.abs() {
                swap[i] = true;
                let m = d / below;
                l[i] = m;
                u0[i] = below;
                u1[i] = next_d;
                u2[i] = next_e;
                d = e - m * next_d;
                e = -m * next_e;
            } else {
                if d == 0.0 {
                    d = tiny;
                }
                let m = below / d;
                l[i] = m;
                u0[i] = d;
                u1[i] = e;
                d = next_d - m * e;
                e = next_e;
            }
        }
        u0[n - 1] = if d == 0.0 { tiny } else { d };
        Self { l, u0, u1, u2, swap }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y = b.to_vec();
        for i in 0..n - 1 {
            if self.swap[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.l[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            if i + 1 < n {
                v -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= self.u2[i] * x[i + 2];
            }
            x[i] = v / self.u0[i];
        }
        x
    }
}
