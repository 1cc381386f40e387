//! Small real-coefficient polynomials and their complex roots.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

/// Coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn new(c: &[f64]) -> Self {
        Poly(c.to_vec())
    }

    pub fn zero() -> Self {
        Poly(vec![0.0])
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    /// Degree after dropping coefficients with |c| ≤ tol; `None` for zero.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        self.0.iter().rposition(|c| c.abs() > tol)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: C64) -> C64 {
        self.0
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    /// Complex roots of the polynomial truncated at `degree`, by
    /// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
    pub fn roots(&self, degree: usize) -> Vec<C64> {
        if degree == 0 {
            return Vec::new();
        }
        let trunc = Poly(self.0[..=degree].to_vec());
        let dp = trunc.derivative();
        let lead = trunc.coeff(degree).abs();
        // Cauchy bound sets the radius of the starting circle
        let bound = 1.0
            + trunc.0[..degree]
                .iter()
                .map(|c| c.abs() / lead)
                .fold(0.0, f64::max);
        let n = degree;
        let mut z: Vec<C64> = (0..n)
            .map(|k| {
                C64::from_polar(
                    0.5 * bound,
                    2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4,
                )
            })
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0_f64;
            for k in 0..n {
                let p = trunc.eval_c(z[k]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp.eval_c(z[k]);
                let rep: C64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| 1.0 / (z[k] - z[j]))
                    .sum();
                let step = ratio / (1.0 - ratio * rep);
                if step.is_finite() {
                    z[k] -= step;
                    moved = moved.max(step.norm() / (1.0 + z[k].norm()));
                }
            }
            if moved < 1e-16 {
                break;
            }
        }
        for r in z.iter_mut() {
            for _ in 0..2 {
                let d = dp.eval_c(*r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = trunc.eval_c(*r) / d;
                if step.is_finite() && step.norm() < 1e-3 * (1.0 + r.norm()) {
                    *r -= step;
                }
            }
        }
        z
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, b: &Poly) -> Poly {
        let n = self.0.len().max(b.0.len());
        Poly((0..n).map(|k| self.coeff(k) + b.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, b: &Poly) -> Poly {
        let n = self.0.len().max(b.0.len());
        Poly((0..n).map(|k| self.coeff(k) - b.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, b: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + b.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_roots_of_y4_plus_one() {
        let p = Poly::new(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let r = p.roots(4);
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.powu(4) + 1.0).norm() < 1e-14);
        }
        let r = Poly::new(&[1.0, 0.0, 2.0, 0.0, 1.0]).roots(4);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-7 && z.re.abs() < 1e-7);
        }
    }

    #[test]
    fn arithmetic() {
        let a = Poly::new(&[1.0, 1.0]);
        let b = &a * &a;
        assert_eq!(b, Poly::new(&[1.0, 2.0, 1.0]));
        assert_eq!(b.derivative(), Poly::new(&[2.0, 2.0]));
        assert_eq!((&b - &a).degree(0.0), Some(2));
        assert_eq!(b.eval(2.0), 9.0);
    }
}
