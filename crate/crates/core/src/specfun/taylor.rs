//! Analytic continuation of solutions of p₂(z) y″ + p₁(z) y′ + p₀(z) y = 0,
//! with polynomial coefficients of degree ≤ 2, by local Taylor expansions.
//!
//! Each step expands the solution about the current point, chooses a step
//! inside the disc of convergence that keeps the partial sums free of
//! cancellation, and renormalises the pair (y, y′) into a running exponent.

use num_complex::Complex64 as C64;

use super::FunPair;
use crate::error::{Error, Result};

const NTERMS: usize = 64;
const MAX_STEPS: usize = 4_000_000;

#[derive(Debug, Clone, Copy)]
pub struct LinearOde2 {
    pub p2: [C64; 3],
    pub p1: [C64; 3],
    pub p0: [C64; 3],
}

fn shift(p: &[C64; 3], z: C64) -> [C64; 3] {
    [p[0] + p[1] * z + p[2] * z * z, p[1] + 2.0 * p[2] * z, p[2]]
}

impl LinearOde2 {
    pub fn new(p2: [C64; 3], p1: [C64; 3], p0: [C64; 3]) -> Self {
        LinearOde2 { p2, p1, p0 }
    }

    pub fn real(p2: [f64; 3], p1: [f64; 3], p0: [f64; 3]) -> Self {
        let c = |a: [f64; 3]| a.map(|x| C64::new(x, 0.0));
        LinearOde2 {
            p2: c(p2),
            p1: c(p1),
            p0: c(p0),
        }
    }

    /// y″ at z given y and y′.
    pub fn second_derivative(&self, z: C64, y: C64, dy: C64) -> C64 {
        let e = |p: &[C64; 3]| p[0] + p[1] * z + p[2] * z * z;
        -(e(&self.p1) * dy + e(&self.p0) * y) / e(&self.p2)
    }

    /// Residual p₂y″ + p₁y′ + p₀y relative to the size of its terms.
    pub fn residual(&self, z: C64, y: C64, dy: C64, d2y: C64) -> f64 {
        let e = |p: &[C64; 3]| p[0] + p[1] * z + p[2] * z * z;
        let a = e(&self.p2) * d2y;
        let b = e(&self.p1) * dy;
        let c = e(&self.p0) * y;
        (a + b + c).norm() / (a.norm() + b.norm() + c.norm())
    }

    fn singular_points(&self) -> Vec<C64> {
        let [c, b, a] = self.p2;
        if a.norm() > 0.0 {
            let d = (b * b - 4.0 * a * c).sqrt();
            vec![(-b + d) / (2.0 * a), (-b - d) / (2.0 * a)]
        } else if b.norm() > 0.0 {
            vec![-c / b]
        } else {
            Vec::new()
        }
    }

    /// Taylor coefficients about z in the scaled variable τ = (ζ − z)/h.
    fn coefficients(&self, z: C64, h: C64, y: C64, dy: C64) -> [C64; NTERMS] {
        let mut p2 = shift(&self.p2, z);
        let mut p1 = shift(&self.p1, z);
        let mut p0 = shift(&self.p0, z);
        let mut hp = C64::new(1.0, 0.0);
        for j in 0..3 {
            p2[j] *= hp;
            p1[j] *= hp * h;
            p0[j] *= hp * h * h;
            hp *= h;
        }
        let mut c = [C64::new(0.0, 0.0); NTERMS];
        c[0] = y;
        c[1] = dy * h;
        let at = |c: &[C64; NTERMS], k: isize| {
            if k < 0 {
                C64::new(0.0, 0.0)
            } else {
                c[k as usize]
            }
        };
        for n in 0..NTERMS - 2 {
            let ni = n as isize;
            let nf = n as f64;
            let s = p2[1] * ((nf + 1.0) * nf) * c[n + 1]
                + p2[2] * (nf * (nf - 1.0)) * c[n]
                + p1[0] * (nf + 1.0) * c[n + 1]
                + p1[1] * nf * c[n]
                + p1[2] * (nf - 1.0) * at(&c, ni - 1)
                + p0[0] * c[n]
                + p0[1] * at(&c, ni - 1)
                + p0[2] * at(&c, ni - 2);
            c[n + 2] = -s / (p2[0] * ((nf + 2.0) * (nf + 1.0)));
        }
        c
    }

    /// Continues (y, y′) from `path[0]` through the remaining vertices.
    pub fn continue_along(&self, path: &[C64], start: FunPair) -> Result<FunPair> {
        let mut cur = start.normalized();
        for seg in path.windows(2) {
            cur = self.segment(seg[0], seg[1], cur)?;
        }
        Ok(cur)
    }

    fn segment(&self, from: C64, to: C64, start: FunPair) -> Result<FunPair> {
        let sing = self.singular_points();
        let mut z = from;
        let mut p = start;
        let total = (to - from).norm();
        if total == 0.0 {
            return Ok(p);
        }
        let dir = (to - from) / total;
        let mut h_prev = f64::INFINITY;
        for _ in 0..MAX_STEPS {
            let remaining = (to - z).norm();
            if remaining <= 1e-15 * total {
                return Ok(p);
            }
            let dist = sing
                .iter()
                .map(|s| (*s - z).norm())
                .fold(f64::INFINITY, f64::min);
            if dist < 1e-300 {
                return Err(Error::Numerical(
                    "continuation path hits a singular point".into(),
                ));
            }
            let mut h = remaining.min(0.5 * dist).min(2.0 * h_prev.max(1e-300));
            let mut accepted = None;
            while accepted.is_none() {
                if h < 1e-14 * total.max(1e-300) && h < 1e-290 {
                    return Err(Error::Numerical("continuation step size underflow".into()));
                }
                let hc = dir * h;
                let c = self.coefficients(z, hc, p.val, p.der);
                if c.iter().any(|x| !x.is_finite()) {
                    h /= 16.0;
                    continue;
                }
                accepted = accept_step(&c, hc);
                match accepted {
                    Some((_, _, tau)) => h *= tau,
                    None => h /= 4096.0,
                }
            }
            let (y, dy, _) = accepted.unwrap();
            h_prev = h;
            z = if (remaining - h).abs() <= 1e-15 * total {
                to
            } else {
                z + dir * h
            };
            p = FunPair {
                val: y,
                der: dy,
                scale: p.scale,
            }
            .normalized();
        }
        Err(Error::Numerical("continuation did not finish".into()))
    }
}

/// Sums the series at the largest τ = 2^−k ≤ 1 for which the tail is
/// negligible and the terms do not cancel; returns (y, y′, τ).
fn accept_step(c: &[C64; NTERMS], hc: C64) -> Option<(C64, C64, f64)> {
    let mut tau = 1.0_f64;
    for _ in 0..12 {
        let mut pw = 1.0;
        let mut sum = C64::new(0.0, 0.0);
        let mut dsum = C64::new(0.0, 0.0);
        let mut big = 0.0_f64;
        let mut dbig = 0.0_f64;
        for (k, ck) in c.iter().enumerate() {
            let t = ck * pw;
            sum += t;
            big = big.max(t.norm());
            if k > 0 {
                let dt = ck * (k as f64 * pw / tau);
                dsum += dt;
                dbig = dbig.max(dt.norm());
            }
            pw *= tau;
        }
        let tail = (c[NTERMS - 1] * tau.powi(NTERMS as i32 - 1)).norm()
            + (c[NTERMS - 2] * tau.powi(NTERMS as i32 - 2)).norm();
        let refv = sum.norm().max((dsum * tau).norm()).max(1e-300);
        let ok_tail = tail <= 1e-17 * big.max(dbig * tau);
        let ok_cancel = big <= 32.0 * refv && dbig * tau <= 32.0 * refv;
        if ok_tail && ok_cancel && sum.is_finite() && dsum.is_finite() {
            return Some((sum, dsum / hc, tau));
        }
        tau *= 0.5;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_solution() {
        // y″ − y = 0, y = e^z
        let ode = LinearOde2::real([1.0, 0.0, 0.0], [0.0; 3], [-1.0, 0.0, 0.0]);
        let one = C64::new(1.0, 0.0);
        let r = ode
            .continue_along(
                &[C64::new(0.0, 0.0), C64::new(30.0, 7.0)],
                FunPair::new(one, one),
            )
            .unwrap();
        assert!((r.scale + r.val.norm().ln() - 30.0).abs() < 1e-12);
        assert!(
            (r.val / r.val.norm() - C64::from_polar(1.0, 7.0)).norm() < 1e-12,
            "{r:?}"
        );
        assert!((r.log_derivative() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn oscillatory_solution() {
        // y″ + y = 0, y = cos z
        let ode = LinearOde2::real([1.0, 0.0, 0.0], [0.0; 3], [1.0, 0.0, 0.0]);
        let r = ode
            .continue_along(
                &[C64::new(0.0, 0.0), C64::new(200.0, 0.0)],
                FunPair::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            )
            .unwrap();
        assert!(
            (r.value().re - 200f64.cos()).abs() < 1e-12,
            "{r:?} {}",
            200f64.cos()
        );
        assert!((r.derivative().re + 200f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn euler_equation_near_singular_point() {
        // z² y″ + z y′ − 4 y = 0, y = z²; continue from 1 down to 1e-6
        let ode = LinearOde2::real([0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-4.0, 0.0, 0.0]);
        let r = ode
            .continue_along(
                &[C64::new(1.0, 0.0), C64::new(1e-6, 0.0)],
                FunPair::new(C64::new(1.0, 0.0), C64::new(2.0, 0.0)),
            )
            .unwrap();
        assert!((r.value().re - 1e-12).abs() < 1e-22);
        assert!((r.log_derivative().re - 2e6).abs() < 1e-4);
    }
}
