//! Airy functions. Large |z| uses the asymptotic expansions (with the
//! three-term connection formula near the negative axis); smaller |z| is
//! reached by continuing the Airy equation y″ = z y inward along a ray
//! where Ai is recessive, or outward from the values at the origin.

use std::f64::consts::{FRAC_PI_3, PI};

use num_complex::Complex64 as C64;

use super::gamma::gamma;
use super::taylor::LinearOde2;
use super::FunPair;

const R_ASY: f64 = 10.0;

fn airy_ode() -> LinearOde2 {
    LinearOde2::real([1.0, 0.0, 0.0], [0.0; 3], [0.0, -1.0, 0.0])
}

/// Ai and Ai′ from the asymptotic series, valid for |arg z| ≤ 2π/3.
fn asymptotic(z: C64) -> FunPair {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let mut su = C64::new(1.0, 0.0);
    let mut sv = C64::new(1.0, 0.0);
    let mut u = 1.0;
    let mut zp = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zp *= -1.0 / zeta;
        let tu = zp * u;
        let tv = zp * v;
        let size = tu.norm().max(tv.norm());
        if size > last {
            break;
        }
        su += tu;
        sv += tv;
        last = size;
        if size < 1e-18 {
            break;
        }
    }
    let pre = 0.5 / PI.sqrt();
    let q = z.powf(0.25);
    // common factor e^{−ζ}
    let val = su * pre / q;
    let der = -sv * pre * q;
    FunPair {
        val,
        der,
        scale: 0.0,
    }
    .mul((-C64::new(0.0, zeta.im)).exp())
    .with_scale(-zeta.re)
}

/// Ai(z) and Ai′(z).
pub fn airy_ai(z: C64) -> FunPair {
    let r = z.norm();
    let arg = z.arg();
    if r >= R_ASY {
        if arg.abs() <= 2.0 * FRAC_PI_3 {
            return asymptotic(z);
        }
        // Ai(z) = −ω Ai(ωz) − ω² Ai(ω²z), ω = e^{2πi/3}
        let w = C64::from_polar(1.0, 2.0 * FRAC_PI_3);
        let w2 = w * w;
        let a = asymptotic(w * z);
        let b = asymptotic(w2 * z);
        let a = FunPair {
            val: -w * a.val,
            der: -w2 * a.der,
            scale: a.scale,
        };
        let b = FunPair {
            val: -w2 * b.val,
            der: -w * b.der,
            scale: b.scale,
        };
        return a.add(b).normalized();
    }
    let ode = airy_ode();
    if arg.abs() <= FRAC_PI_3 {
        let z0 = C64::from_polar(R_ASY, arg);
        return ode
            .continue_along(&[z0, z], asymptotic(z0))
            .expect("Airy continuation");
    }
    let a0 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
    let d0 = -(3f64.powf(-1.0 / 3.0)) / gamma(1.0 / 3.0);
    let start = FunPair::new(C64::new(a0, 0.0), C64::new(d0, 0.0));
    ode.continue_along(&[C64::new(0.0, 0.0), z], start)
        .expect("Airy continuation")
}

/// Bi(x) and Bi′(x) on the real axis, from Bi(x) = 2 Re[e^{iπ/6} Ai(x e^{2πi/3})].
pub fn airy_bi(x: f64) -> FunPair {
    let w = C64::from_polar(1.0, 2.0 * FRAC_PI_3);
    let a = airy_ai(w * x);
    let val = 2.0 * (C64::from_polar(1.0, PI / 6.0) * a.val).re;
    let der = 2.0 * (C64::from_polar(1.0, 5.0 * PI / 6.0) * a.der).re;
    FunPair {
        val: C64::new(val, 0.0),
        der: C64::new(der, 0.0),
        scale: a.scale,
    }
    .normalized()
}

/// (Ai + iBi)′/(Ai + iBi) at real x: real part (AiAi′ + BiBi′)/(Ai² + Bi²),
/// imaginary part 1/(π(Ai² + Bi²)) by the Wronskian. Both parts are formed
/// from real quantities so the imaginary part keeps its relative accuracy
/// where Bi dominates.
pub fn airy_log_derivative(x: f64) -> C64 {
    let a = airy_ai(C64::new(x, 0.0));
    let b = airy_bi(x);
    let s = a.scale.max(b.scale);
    let (fa, fb) = ((a.scale - s).exp(), (b.scale - s).exp());
    let (ai, aip) = (a.val.re * fa, a.der.re * fa);
    let (bi, bip) = (b.val.re * fb, b.der.re * fb);
    let den = ai * ai + bi * bi;
    C64::new((ai * aip + bi * bip) / den, (-2.0 * s).exp() / (PI * den))
}
