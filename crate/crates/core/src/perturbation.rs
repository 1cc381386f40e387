//! Weak-disorder expansion Ω ≈ Ω₀ + Ω₂ + Ω₄ in powers of the covariances.
//!
//! The series is asymptotic, not convergent: it misses the exponentially
//! small terms that dominate Im Ω out of the band.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{DisorderModel, ALPHA, U, W};
use crate::sl2::{mu_continuum, mu_exact};

/// Covariance pairs (D_αα, D_ww, D_uu, D_αw, D_αu, D_wu) as index pairs.
const PAIRS: [(usize, usize); 6] = [
    (ALPHA, ALPHA),
    (W, W),
    (U, U),
    (ALPHA, W),
    (ALPHA, U),
    (W, U),
];

/// Coefficients multiplying each covariance in −8μ²Ω₂.
fn omega2_coefficients(a: f64, w: f64, u: f64, mu: C64) -> [C64; 6] {
    let c = |x: f64| C64::new(x, 0.0);
    [
        c(4.0 * w * w + u * u),
        c(4.0 * a * (a - u)),
        c(a * a),
        4.0 * (-u * mu + c(-2.0 * a * w + w * u)),
        2.0 * (2.0 * w * mu + c(-2.0 * w * w - a * u)),
        4.0 * a * (w - mu),
    ]
}

/// Ω₂ from the covariances and the clean exponent μ.
pub fn omega2(m: &DisorderModel) -> Result<C64> {
    let mu = mu_continuum(m.means);
    if mu.norm() == 0.0 {
        return Err(Error::Pole(
            "weak-disorder series is singular at the band edge (μ = 0)".into(),
        ));
    }
    let (a, w, u) = (m.means.alpha, m.means.w, m.means.u);
    let k = omega2_coefficients(a, w, u, mu);
    let s: C64 = PAIRS.iter().zip(k).map(|(&(i, j), c)| c * m.d(i, j)).sum();
    Ok(-s / (8.0 * mu * mu))
}

/// One monomial D_p D_q of −128μ⁵Ω₄ with its polynomial coefficient.
struct Term {
    p: usize,
    q: usize,
    coef: fn(f64, f64, f64, C64) -> C64,
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The 21 quadratic monomials of −128μ⁵Ω₄; p, q index [`PAIRS`].
const OMEGA4_TERMS: [Term; 21] = [
    Term {
        p: 0,
        q: 0,
        coef: |a, w, u, _| {
            re((4.0 * w * w + u * u) * (16.0 * a * a - 16.0 * a * u + 4.0 * w * w + 5.0 * u * u))
        },
    },
    Term {
        p: 1,
        q: 1,
        coef: |a, w, u, _| re(16.0 * a * (a - u) * (a * a - a * u + 4.0 * w * w)),
    },
    Term {
        p: 2,
        q: 2,
        coef: |a, _, _, _| re(5.0 * a.powi(4)),
    },
    Term {
        p: 3,
        q: 3,
        coef: |a, w, u, mu| {
            16.0 * (4.0 * u * w * (2.0 * a - u) * mu
                + re(
                    20.0 * a * a * w * w + a * a * u * u - 20.0 * a * w * w * u - a * u.powi(3)
                        + 4.0 * w * w * u * u,
                ))
        },
    },
    Term {
        p: 4,
        q: 4,
        coef: |a, w, u, mu| {
            4.0 * a
                * (-8.0 * w * (2.0 * a - u) * mu
                    + re(8.0 * a * a * u + 20.0 * a * w * w - 3.0 * a * u * u - 8.0 * u * w * w))
        },
    },
    Term {
        p: 5,
        q: 5,
        coef: |a, w, u, mu| 16.0 * a * a * (-4.0 * w * mu + re(a * a - a * u + 4.0 * w * w)),
    },
    Term {
        p: 0,
        q: 1,
        coef: |a, w, u, _| {
            re(8.0
                * (20.0 * a * a * w * w - a * a * u * u + a * u.powi(3) - 20.0 * a * u * w * w
                    + 6.0 * u * u * w * w))
        },
    },
    Term {
        p: 0,
        q: 2,
        coef: |a, w, u, _| {
            re(2.0
                * (8.0 * a.powi(3) * u + 12.0 * a * a * w * w - 3.0 * a * a * u * u
                    + 8.0 * w.powi(4)))
        },
    },
    Term {
        p: 0,
        q: 3,
        coef: |a, w, u, mu| {
            8.0 * (2.0 * a - u)
                * (-2.0 * u * (2.0 * a - u) * mu
                    - re(w * (8.0 * a * a - 8.0 * a * u + 5.0 * u * u + 12.0 * w * w)))
        },
    },
    Term {
        p: 0,
        q: 4,
        coef: |a, w, u, mu| {
            4.0 * (4.0 * w * (2.0 * a - u).powi(2) * mu
                + re(
                    -8.0 * a.powi(3) * u - 32.0 * a * a * w * w + 4.0 * a * a * u * u
                        - a * u.powi(3)
                        + 20.0 * a * u * w * w
                        - 8.0 * w.powi(4)
                        - 6.0 * u * u * w * w,
                ))
        },
    },
    Term {
        p: 0,
        q: 5,
        coef: |a, w, u, mu| {
            8.0 * (-2.0 * (2.0 * a - u) * (2.0 * w * w + a * u) * mu
                + re(w * (8.0 * a.powi(3) + 12.0 * a * w * w - 3.0 * a * u * u - 8.0 * u * w * w)))
        },
    },
    Term {
        p: 1,
        q: 2,
        coef: |a, w, u, _| re(8.0 * a * a * (-a * a + a * u + 6.0 * w * w)),
    },
    Term {
        p: 1,
        q: 3,
        coef: |a, w, u, mu| {
            32.0 * w
                * (-2.0 * w * u * mu
                    + re(
                        -6.0 * a.powi(3) + 9.0 * a * a * u - 4.0 * a * w * w - 3.0 * a * u * u
                            + 2.0 * u * w * w,
                    ))
        },
    },
    Term {
        p: 1,
        q: 4,
        coef: |a, w, u, mu| {
            16.0 * a
                * (4.0 * (a - u) * w * mu
                    + re(a * a * u - 10.0 * a * w * w - a * u * u + 4.0 * u * w * w))
        },
    },
    Term {
        p: 1,
        q: 5,
        coef: |a, w, u, mu| {
            32.0 * a * w * (-2.0 * w * mu + re(3.0 * a * a - 3.0 * a * u + 2.0 * w * w))
        },
    },
    Term {
        p: 2,
        q: 3,
        coef: |a, w, u, mu| {
            8.0 * a
                * (2.0 * (-2.0 * a * a + a * u + 2.0 * w * w) * mu
                    - re(w * (2.0 * a * a + 3.0 * a * u + 8.0 * w * w)))
        },
    },
    Term {
        p: 2,
        q: 4,
        coef: |a, w, u, mu| 4.0 * a * a * (4.0 * w * mu + re(-4.0 * a * a - a * u - 6.0 * w * w)),
    },
    Term {
        p: 2,
        q: 5,
        coef: |a, w, _, mu| 8.0 * a.powi(3) * (5.0 * w - 2.0 * mu),
    },
    Term {
        p: 3,
        q: 4,
        // the a·w³ weight (12, not 2) is pinned by the order-by-order recursion in the tests
        coef: |a, w, u, mu| {
            16.0 * (2.0 * (2.0 * a - u) * (a * u - 2.0 * w * w) * mu
                + re(w
                    * (8.0 * a.powi(3) - 4.0 * a * a * u + a * u * u + 12.0 * a * w * w
                        - 4.0 * u * w * w)))
        },
    },
    Term {
        p: 3,
        q: 5,
        coef: |a, w, u, mu| {
            32.0 * (4.0 * w.powi(3) * mu
                + re(-4.0 * a.powi(4) + 5.0 * a.powi(3) * u
                    - 2.0 * a * a * w * w
                    - a * a * u * u
                    - 4.0 * w.powi(4)))
        },
    },
    Term {
        p: 4,
        q: 5,
        coef: |a, w, u, mu| {
            16.0 * a
                * (2.0 * (2.0 * a * a - a * u + 2.0 * w * w) * mu
                    + re(w * (-6.0 * a * a + a * u - 4.0 * w * w)))
        },
    },
];

/// Number of quadratic monomials in Ω₄.
pub fn omega4_monomial_count() -> usize {
    OMEGA4_TERMS.len()
}

pub fn omega4(m: &DisorderModel) -> Result<C64> {
    let mu = mu_continuum(m.means);
    if mu.norm() == 0.0 {
        return Err(Error::Pole(
            "weak-disorder series is singular at the band edge (μ = 0)".into(),
        ));
    }
    let (a, w, u) = (m.means.alpha, m.means.w, m.means.u);
    let d = PAIRS.map(|(i, j)| m.d(i, j));
    let s: C64 = OMEGA4_TERMS
        .iter()
        .map(|t| (t.coef)(a, w, u, mu) * d[t.p] * d[t.q])
        .sum();
    Ok(-s / (128.0 * mu.powi(5)))
}

/// Σ_{k ≤ order} Ω_k with order ∈ {0, 2, 4}.
pub fn omega_weak(m: &DisorderModel, order: u32) -> Result<C64> {
    let mu = mu_continuum(m.means);
    if mu.norm() == 0.0 {
        return Err(Error::Pole(
            "weak-disorder series is singular at the band edge (μ = 0)".into(),
        ));
    }
    match order {
        0 => Ok(mu),
        2 => Ok(mu + omega2(m)?),
        4 => Ok(mu + omega2(m)? + omega4(m)?),
        _ => Err(Error::Config(format!(
            "expansion order must be 0, 2 or 4, got {order}"
        ))),
    }
}

/// Second-order term for finite means, with μ from the trace of the mean
/// matrix.
pub fn omega2_general(m: &DisorderModel) -> Result<C64> {
    let (a, w, u) = (m.means.alpha, m.means.w, m.means.u);
    let mu = mu_exact(m.means);
    let sa = a.sin();
    let ca = a.cos();
    let sh = mu.sinh();
    let den = -8.0 * sa * sh * sh;
    if sa == 0.0 || sh.norm() < 1e-300 || !den.is_finite() {
        return Err(Error::Pole("sin ᾱ or sinh μ vanishes".into()));
    }
    let e2w = (2.0 * w).exp();
    let wm = C64::new(w, 0.0) - mu;
    let ch = wm.cosh() - ca;
    let s = sa * (u * u * e2w + 4.0 * w.sinh().powi(2)) * m.d_aa()
        + 4.0 * sa * sa * (sa - u * ca) * m.d_ww()
        + sa.powi(3) * e2w * m.d_uu()
        - 8.0 * ch * (1.0 - ca * (-w - mu).exp()) * m.d_aw()
        - 4.0 * sa * wm.exp() * ch * m.d_au()
        - 4.0 * sa * sa * (ca - wm.exp()) * m.d_wu();
    Ok(s / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::IwasawaParams;

    /// Ω₂, Ω₄ from the recursion R₀F₂ₖ = −QF′₂ₖ₋₂ − R₂F₂ₖ₋₂ + δₖ₁S₂ + 2Ω₂ₖ,
    /// with each F expanded in a Taylor series about the unstable zero z₋.
    fn recursive(m: &DisorderModel) -> (C64, C64) {
        use crate::coeffs::build_coefficients;
        const N: usize = 10;
        let c = build_coefficients(m);
        let (a, w) = (m.means.alpha, m.means.w);
        let mu = mu_continuum(m.means);
        let zm = (w - mu) / a;
        let zp = (w + mu) / a;
        // Taylor coefficients of a real polynomial about z₋
        let shift = |p: &crate::poly::Poly| -> Vec<C64> {
            let mut out = vec![C64::new(0.0, 0.0); N];
            let mut q: Vec<C64> = p.0.iter().map(|&x| C64::new(x, 0.0)).collect();
            for (k, slot) in out.iter_mut().enumerate() {
                if q.is_empty() {
                    break;
                }
                *slot = q
                    .iter()
                    .rev()
                    .fold(C64::new(0.0, 0.0), |acc, &c| acc * zm + c);
                // next Taylor coefficient: derivative divided by k+1
                q = q
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, &x)| x * j as f64 / (k + 1) as f64)
                    .collect();
            }
            out
        };
        let mul = |x: &[C64], y: &[C64]| -> Vec<C64> {
            let mut o = vec![C64::new(0.0, 0.0); N];
            for i in 0..N {
                for j in 0..N - i {
                    o[i + j] += x[i] * y[j];
                }
            }
            o
        };
        let der = |x: &[C64]| -> Vec<C64> {
            let mut o = vec![C64::new(0.0, 0.0); N];
            for k in 1..N {
                o[k - 1] = x[k] * k as f64;
            }
            o
        };
        // F₀ = 1/(y − z₊) = 1/(t + d), d = z₋ − z₊
        let d = zm - zp;
        let f0: Vec<C64> = (0..N)
            .map(|k| (-1.0f64).powi(k as i32) / d.powi(k as i32 + 1))
            .collect();
        let q = shift(&c.q);
        let r2 = shift(&c.r2);
        let s2 = shift(&c.s2);
        let step = |f: &[C64], extra: &[C64]| -> (C64, Vec<C64>) {
            let qf = mul(&q, &der(f));
            let rf = mul(&r2, f);
            let mut rhs: Vec<C64> = (0..N).map(|k| -qf[k] - rf[k] + extra[k]).collect();
            let omega = -0.5 * rhs[0];
            rhs[0] = C64::new(0.0, 0.0);
            // divide by R₀ = 2a t (t + d)
            let num: Vec<C64> = (0..N)
                .map(|k| {
                    if k + 1 < N {
                        rhs[k + 1]
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect();
            let mut inv = vec![C64::new(0.0, 0.0); N];
            for k in 0..N {
                inv[k] = (-1.0f64).powi(k as i32) / d.powi(k as i32 + 1) / (2.0 * a);
            }
            (omega, mul(&num, &inv))
        };
        let (o2, f2) = step(&f0, &s2);
        let (o4, _) = step(&f2, &[C64::new(0.0, 0.0); N]);
        (o2, o4)
    }

    fn generic() -> DisorderModel {
        DisorderModel::new(
            IwasawaParams::new(0.7, -0.3, 0.2),
            [[0.5, 0.1, 0.05], [0.1, 0.3, 0.07], [0.05, 0.07, 0.4]],
        )
        .unwrap()
    }

    #[test]
    fn matches_recursive_scheme() {
        for m in [
            generic(),
            generic().reflected(),
            DisorderModel::new(
                IwasawaParams::new(0.4, 0.2, 1.5),
                [[0.2, -0.05, 0.02], [-0.05, 0.6, 0.1], [0.02, 0.1, 0.3]],
            )
            .unwrap(),
        ] {
            let (o2, o4) = recursive(&m);
            let a2 = omega2(&m).unwrap();
            let a4 = omega4(&m).unwrap();
            assert!((o2 - a2).norm() < 1e-12 * (1.0 + a2.norm()), "{o2} vs {a2}");
            assert!((o4 - a4).norm() < 1e-11 * (1.0 + a4.norm()), "{o4} vs {a4}");
        }
    }

    #[test]
    fn monolithic_expansions() {
        let (a, w, u) = (0.6, 0.2, 0.1);
        let p = IwasawaParams::new(a, w, u);
        let mu = mu_continuum(p);
        let d = 0.3;
        let scalar = DisorderModel::diagonal(p, 0.0, 0.0, d).unwrap();
        assert!((omega2(&scalar).unwrap() + a * a * d / (8.0 * mu * mu)).norm() < 1e-14);
        assert!(
            (omega4(&scalar).unwrap() + 5.0 * a.powi(4) * d * d / (128.0 * mu.powi(5))).norm()
                < 1e-14
        );
        let susy = DisorderModel::diagonal(p, 0.0, d, 0.0).unwrap();
        assert!((omega2(&susy).unwrap() - a * (u - a) * d / (2.0 * mu * mu)).norm() < 1e-14);
        let dist = DisorderModel::diagonal(p, d, 0.0, 0.0).unwrap();
        let e4 = -(4.0 * w * w + u * u)
            * (4.0 * w * w + 5.0 * u * u - 16.0 * a * u + 16.0 * a * a)
            * d
            * d
            / (128.0 * mu.powi(5));
        assert!((omega4(&dist).unwrap() - e4).norm() < 1e-14);
        assert_eq!(omega4_monomial_count(), 21);
        assert_eq!(omega_weak(&scalar, 0).unwrap(), mu);
    }

    #[test]
    fn band_edge_is_a_pole() {
        let m = DisorderModel::diagonal(IwasawaParams::new(0.5, 0.0, 0.5), 0.0, 0.0, 0.1).unwrap();
        assert!(matches!(omega_weak(&m, 2), Err(Error::Pole(_))));
    }

    #[test]
    fn general_second_order_reduces_at_small_means() {
        let base = generic();
        let mut prev = f64::INFINITY;
        for s in [1e-1, 1e-2, 1e-3] {
            let mut m = base;
            m.means = IwasawaParams::new(base.means.alpha * s, base.means.w * s, base.means.u * s);
            let g = omega2_general(&m).unwrap();
            let c = omega2(&m).unwrap();
            let rel = (g - c).norm() / c.norm();
            assert!(rel < 2.0 * s, "s={s} rel={rel}");
            assert!(rel < prev);
            prev = rel;
        }
    }
}
