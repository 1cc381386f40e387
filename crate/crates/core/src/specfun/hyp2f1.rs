//! Gauss hypergeometric function ₂F₁(a, b; c; x) for real 0 ≤ x < 1:
//! Maclaurin series near the origin, continued along the hypergeometric
//! equation x(1−x) y″ + (c − (a+b+1)x) y′ − ab y = 0 toward x.

use num_complex::Complex64 as C64;

use super::taylor::LinearOde2;
use super::FunPair;
use crate::error::{Error, Result};

pub(crate) fn hyp_ode(a: C64, b: C64, c: C64) -> LinearOde2 {
    let z = C64::new(0.0, 0.0);
    LinearOde2::new(
        [z, C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
        [c, -(a + b + 1.0), z],
        [-a * b, z, z],
    )
}

fn series(a: C64, b: C64, c: C64, x: f64) -> Result<FunPair> {
    let mut t = C64::new(1.0, 0.0);
    let mut s = t;
    let mut ds = C64::new(0.0, 0.0);
    for k in 0..5000 {
        let kf = k as f64;
        let dt = t * (a + kf) * (b + kf) / (c + kf); // coefficient of x^k in the derivative
        ds += dt;
        t = dt * x / (kf + 1.0);
        s += t;
        if t.norm() < 1e-18 * s.norm()
            && dt.norm() * x < 1e-18 * ds.norm().max(s.norm())
            && kf > 2.0
        {
            return Ok(FunPair::new(s, ds));
        }
        if !t.is_finite() {
            break;
        }
    }
    Err(Error::Numerical(
        "hypergeometric series did not converge".into(),
    ))
}

/// ₂F₁(a, b; c; x) and its x-derivative.
pub fn hyp2f1(a: C64, b: C64, c: C64, x: f64) -> Result<FunPair> {
    if c.im == 0.0 && c.re <= 0.0 && c.re.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "c = {} is a non-positive integer",
            c.re
        )));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("hyp2f1 needs 0 ≤ x < 1, got {x}")));
    }
    // series start where consecutive terms shrink at least geometrically
    let growth = (a.norm() * b.norm() / c.norm()).max(a.norm() + b.norm() + 1.0);
    let x0 = x.min(0.25 / growth.max(1.0));
    let start = series(a, b, c, x0)?;
    if x0 == x {
        return Ok(start);
    }
    hyp_ode(a, b, c).continue_along(&[C64::new(x0, 0.0), C64::new(x, 0.0)], start)
}
