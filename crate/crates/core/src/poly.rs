//! Dense polynomials of degree at most two, constant term first.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Poly(pub [f64; 3]);

impl Poly {
    pub const ZERO: Poly = Poly([0.0; 3]);

    pub const fn new(c0: f64, c1: f64, c2: f64) -> Self {
        Poly([c0, c1, c2])
    }

    pub const fn linear(c0: f64, c1: f64) -> Self {
        Poly([c0, c1, 0.0])
    }

    pub fn coeffs(&self) -> [f64; 3] {
        self.0
    }

    /// Index of the highest non-zero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        (0..3).rev().find(|&i| self.0[i] != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, s: f64) -> f64 {
        let [c0, c1, c2] = self.0;
        c0 + s * (c1 + s * c2)
    }

    pub fn derivative(&self) -> Poly {
        Poly([self.0[1], 2.0 * self.0[2], 0.0])
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Real roots, ascending. Repeated roots are returned once.
    /// Complex roots yield an empty list.
    pub fn real_roots(&self) -> Vec<f64> {
        let [c0, c1, c2] = self.0;
        match self.degree() {
            Some(2) => {
                let disc = c1 * c1 - 4.0 * c2 * c0;
                if disc < 0.0 {
                    return Vec::new();
                }
                if disc == 0.0 {
                    return vec![-c1 / (2.0 * c2)];
                }
                // Cancellation-free form.
                let sgn = if c1 >= 0.0 { 1.0 } else { -1.0 };
                let q = -0.5 * (c1 + sgn * disc.sqrt());
                let (r1, r2) = if q == 0.0 {
                    let r = (-c0 / c2).sqrt();
                    (-r, r)
                } else {
                    (q / c2, c0 / q)
                };
                let mut v = vec![r1.min(r2), r1.max(r2)];
                v.dedup();
                v
            }
            Some(1) => vec![-c0 / c1],
            _ => Vec::new(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        Poly([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        self + (-o)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<Poly> for f64 {
    type Output = Poly;
    fn mul(self, p: Poly) -> Poly {
        Poly([self * p.0[0], self * p.0[1], self * p.0[2]])
    }
}
