//! Bessel functions of real or imaginary order.
//!
//! K_ν and H⁽²⁾_ν start from their Hankel expansions at a large radius and
//! are continued inward; I_ν and J_ν start from the ascending series near the
//! origin and are continued outward. In each case the continued solution is
//! the dominant one in the direction of travel.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::gamma::ln_gamma;
use super::taylor::LinearOde2;
use super::FunPair;
use crate::error::{Error, Result};

/// x² y″ + x y′ + (s x² − ν²) y = 0 with s = ±1.
fn bessel_ode(nu: C64, s: f64) -> LinearOde2 {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    LinearOde2::new([z, z, o], [z, o, z], [-nu * nu, z, o * s])
}

/// Coefficients a_k(ν) of the Hankel expansions, summed with the given
/// sign pattern: Σ σ^k a_k z^{−k} and its z-derivative.
fn hankel_sum(nu: f64, z: C64, sigma: C64) -> (C64, C64) {
    let mu = 4.0 * nu * nu;
    let mut a = C64::new(1.0, 0.0);
    let mut s = a;
    let mut ds = C64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..400 {
        let kf = k as f64;
        a *= sigma * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * z);
        let size = a.norm();
        if size > last && k > 2 * (nu.abs() as usize + 1) {
            break;
        }
        s += a;
        ds += -kf * a / z;
        last = size;
        if size < 1e-18 * s.norm() {
            break;
        }
    }
    (s, ds)
}

/// K_ν(x) and K′_ν(x) for real ν and Re x > 0.
pub fn bessel_k(nu: f64, x: C64) -> Result<FunPair> {
    if x.norm() == 0.0 || x.re <= 0.0 {
        return Err(Error::Domain(format!("bessel_k needs Re x > 0, got {x}")));
    }
    let r = x.norm().max(30.0).max(2.0 * nu * nu);
    let z0 = x * (r / x.norm());
    // K ~ √(π/2z) e^{−z} Σ a_k z^{−k}
    let (s, ds) = hankel_sum(nu, z0, C64::new(1.0, 0.0));
    let pre = (PI / (2.0 * z0)).sqrt();
    let val = pre * s;
    let der = pre * (ds - s * (1.0 + 0.5 / z0));
    let start = FunPair::new(val, der)
        .mul(C64::new(0.0, -z0.im).exp())
        .with_scale(-z0.re);
    bessel_ode(C64::new(nu, 0.0), -1.0).continue_along(&[z0, x], start)
}

/// H⁽²⁾_ν(x) = J_ν(x) − i N_ν(x) and its derivative for real ν, x > 0.
pub fn bessel_h2(nu: f64, x: f64) -> Result<FunPair> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_h2 needs x > 0, got {x}")));
    }
    let r = x.max(30.0).max(2.0 * nu * nu);
    let z0 = C64::new(r, 0.0);
    let i = C64::new(0.0, 1.0);
    let (s, ds) = hankel_sum(nu, z0, -i);
    let omega = r - 0.5 * nu * PI - 0.25 * PI;
    let ph = C64::from_polar(1.0, -omega);
    let pre = (2.0 / (PI * r)).sqrt();
    let val = pre * ph * s;
    let der = pre * ph * (ds - s * (i + 0.5 / r));
    let start = FunPair::new(val, der);
    bessel_ode(C64::new(nu, 0.0), 1.0).continue_along(&[z0, C64::new(x, 0.0)], start)
}

/// Ascending series (x/2)^ν Σ s^k (x/2)^{2k}/(k! Γ(k+ν+1)) with its derivative,
/// for s = +1 (I_ν) or −1 (J_ν).
fn ascending(nu: C64, x: f64, s: f64) -> FunPair {
    let q = 0.25 * x * x * s;
    let mut t = C64::new(1.0, 0.0);
    let mut sum = t;
    let mut dsum = nu * t;
    for k in 1..500 {
        let kf = k as f64;
        t *= q / (kf * (kf + nu));
        sum += t;
        dsum += (2.0 * kf + nu) * t;
        if t.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    // prefactor (x/2)^ν / Γ(ν+1), kept in log form
    let lp = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0);
    FunPair::new(sum, dsum / x)
        .mul(C64::new(0.0, lp.im).exp())
        .with_scale(lp.re)
}

fn outward(nu: C64, x: f64, s: f64) -> Result<FunPair> {
    let x0 = x.min(1.0);
    let start = ascending(nu, x0, s);
    if x0 == x {
        return Ok(start);
    }
    bessel_ode(nu, -s).continue_along(&[C64::new(x0, 0.0), C64::new(x, 0.0)], start)
}

fn is_negative_integer(nu: C64) -> Option<f64> {
    (nu.im == 0.0 && nu.re < 0.0 && nu.re.fract() == 0.0).then_some(-nu.re)
}

/// I_ν(x) and I′_ν(x) for complex ν (including imaginary order) and x > 0.
pub fn bessel_i(nu: C64, x: f64) -> Result<FunPair> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_i needs x > 0, got {x}")));
    }
    let nu = is_negative_integer(nu).map_or(nu, |n| C64::new(n, 0.0));
    outward(nu, x, 1.0)
}

/// (J_ν, N_ν) pairs for real ν and x > 0.
pub fn bessel_jn(nu: f64, x: f64) -> Result<(FunPair, FunPair)> {
    let h = bessel_h2(nu, x)?;
    let n = FunPair {
        val: C64::new(-h.val.im, 0.0),
        der: C64::new(-h.der.im, 0.0),
        scale: h.scale,
    };
    let j = match is_negative_integer(C64::new(nu, 0.0)) {
        Some(m) => {
            let sign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
            outward(C64::new(m, 0.0), x, -1.0)?.mul(C64::new(sign, 0.0))
        }
        None => outward(C64::new(nu, 0.0), x, -1.0)?,
    };
    let j = FunPair {
        val: C64::new(j.val.re, 0.0),
        der: C64::new(j.der.re, 0.0),
        scale: j.scale,
    };
    Ok((j, n.normalized()))
}
