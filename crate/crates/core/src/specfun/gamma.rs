//! Complex Γ and ln Γ by the Lanczos approximation (g = 7, nine terms).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ln Γ(z); the imaginary part is correct modulo 2π, which is all that
/// exp(ln Γ) needs.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // reflection Γ(z)Γ(1−z) = π / sin(πz)
        return C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    if z.norm() > 30.0 {
        return stirling(z);
    }
    let z = z - 1.0;
    let mut x = C64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

fn stirling(z: C64) -> C64 {
    // Bernoulli terms B_2k / (2k(2k−1) z^(2k−1))
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let mut s = C64::new(0.0, 0.0);
    let mut p = zi;
    for b in B {
        s += b * p;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + s
}

/// ln sin(πz) without overflow for large |Im z|.
fn ln_sin_pi(z: C64) -> C64 {
    let w = z * PI;
    let i = C64::new(0.0, 1.0);
    if w.im.abs() < 1.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        // sin w = e^{−iw} (e^{2iw} − 1) / (2i)
        -i * w + ((2.0 * i * w).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        // sin w = e^{iw} (1 − e^{−2iw}) / (2i)
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - (2.0 * i).ln()
    }
}

pub fn gamma_c(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return C64::new(f64::INFINITY, 0.0);
    }
    ln_gamma(z).exp()
}

/// Real Γ(x).
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut s = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(C64::new(11.0, 0.0)).re - 3_628_800f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn known_thirds() {
        // Γ(1/3) Γ(2/3) = 2π/√3
        let p = gamma(1.0 / 3.0) * gamma(2.0 / 3.0);
        assert!((p - 2.0 * PI / 3f64.sqrt()).abs() < 1e-13);
        assert!((gamma(1.0 / 3.0) - 2.678_938_534_707_747_6).abs() < 1e-13);
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.3, 1.0, 5.0, 40.0, 300.0] {
            let lg = ln_gamma(C64::new(0.0, y));
            let expect = 0.5 * (PI / (y * (PI * y).sinh())).ln();
            let expect = if y > 100.0 {
                0.5 * ((2.0 * PI / y).ln() - PI * y)
            } else {
                expect
            };
            assert!(
                (lg.re - expect).abs() < 1e-10 * (1.0 + expect.abs()),
                "y={y}"
            );
        }
    }

    #[test]
    fn recurrence_in_complex_plane() {
        for z in [
            C64::new(0.7, 2.0),
            C64::new(-3.3, 0.4),
            C64::new(12.0, -35.0),
            C64::new(45.0, 5.0),
        ] {
            let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
            let d = C64::new(d.re, (d.im / (2.0 * PI)).fract() * 2.0 * PI);
            assert!(
                d.re.abs() < 1e-12 && (d.im.abs() < 1e-10 || (d.im.abs() - 2.0 * PI).abs() < 1e-10),
                "{z}"
            );
        }
    }
}
