//! Complete elliptic integrals K and E by the arithmetic–geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Value of a complete integral and its derivative with respect to k².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    pub value: f64,
    pub dm: f64,
}

/// K(m) and E(m) for parameter m = k² < 1; negative m covers imaginary modulus.
pub fn elliptic_ke(m: f64) -> Result<(EllipticPair, EllipticPair)> {
    if !(m < 1.0) || !m.is_finite() {
        return Err(Error::Domain(format!("elliptic_ke needs k² < 1, got {m}")));
    }
    let mut a = 1.0_f64;
    let mut g = (1.0 - m).sqrt();
    let mut c = m.abs().sqrt();
    // Σ 2^{n−1} c_n², with c_0² = m (signed for negative m)
    let mut sum = 0.5 * m;
    let mut pw = 0.5;
    for _ in 0..60 {
        if c.abs() < 1e-17 * a {
            break;
        }
        let an = 0.5 * (a + g);
        c = 0.5 * (a - g);
        g = (a * g).sqrt();
        a = an;
        pw *= 2.0;
        sum += pw * c * c;
    }
    let k = FRAC_PI_2 / a;
    let e = k * (1.0 - sum);
    let dk = if m == 0.0 {
        FRAC_PI_2 / 4.0
    } else {
        (e - (1.0 - m) * k) / (2.0 * m * (1.0 - m))
    };
    let de = if m == 0.0 {
        -FRAC_PI_2 / 4.0
    } else {
        (e - k) / (2.0 * m)
    };
    Ok((
        EllipticPair { value: k, dm: dk },
        EllipticPair { value: e, dm: de },
    ))
}
