//! Whittaker W_{κ,μ}(z): asymptotic expansion at a large radius on the ray
//! through z, continued inward along the Whittaker equation
//! z² W″ + (−z²/4 + κ z + ¼ − μ²) W = 0.

use num_complex::Complex64 as C64;

use super::taylor::LinearOde2;
use super::FunPair;
use crate::error::{Error, Result};

pub(crate) fn whittaker_ode(kappa: C64, mu: C64) -> LinearOde2 {
    let z = C64::new(0.0, 0.0);
    LinearOde2::new(
        [z, z, C64::new(1.0, 0.0)],
        [z; 3],
        [C64::new(0.25, 0.0) - mu * mu, kappa, C64::new(-0.25, 0.0)],
    )
}

fn asymptotic(kappa: C64, mu: C64, z: C64) -> FunPair {
    let a = 0.5 + mu - kappa;
    let b = 0.5 - mu - kappa;
    let mut t = C64::new(1.0, 0.0);
    let mut s = t;
    let mut ds = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..2000 {
        let kf = k as f64;
        t *= (a + kf - 1.0) * (b + kf - 1.0) / (-kf * z);
        let size = t.norm();
        if size > last || size == 0.0 {
            break;
        }
        s += t;
        ds += -kf * t / z;
        last = size;
        if size < 1e-18 * s.norm() {
            break;
        }
    }
    // W = e^{−z/2} z^κ S, W′ = e^{−z/2} z^κ (S′ + (κ/z − ½) S)
    let der = ds + (kappa / z - 0.5) * s;
    let lp = -0.5 * z + kappa * z.ln();
    FunPair::new(s, der)
        .mul(C64::new(0.0, lp.im).exp())
        .with_scale(lp.re)
}

/// W_{κ,μ}(z) and its derivative for |arg z| < π.
pub fn whittaker_w(kappa: C64, mu: C64, z: C64) -> Result<FunPair> {
    let a = 0.5 + mu - kappa;
    if a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0 {
        return Err(Error::Pole(format!(
            "Γ(½+μ−κ) has a pole at ½+μ−κ = {}",
            a.re
        )));
    }
    if z.norm() == 0.0 || (z.im == 0.0 && z.re < 0.0) {
        return Err(Error::Domain(format!(
            "whittaker_w needs |arg z| < π, got {z}"
        )));
    }
    let r = (4.0 * (kappa.norm_sqr() + mu.norm_sqr() + 1.0))
        .max(30.0)
        .max(z.norm());
    let z0 = z * (r / z.norm());
    whittaker_ode(kappa, mu).continue_along(&[z0, z], asymptotic(kappa, mu, z0))
}
