//! 2×2 unimodular matrices, the Iwasawa factorisation and the Möbius action
//! on the projective line.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const DET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    /// Builds a matrix and checks that it is unimodular.
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        let m = Mat2 { m11, m12, m21, m22 };
        let scale = 1.0_f64.max(m.frobenius_sq());
        if (m.det() - 1.0).abs() > DET_TOL * scale {
            return domain(format!("determinant {} is not 1", m.det()));
        }
        Ok(m)
    }

    pub fn rotation(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Mat2 {
            m11: c,
            m12: -s,
            m21: s,
            m22: c,
        }
    }

    pub fn stretch(w: f64) -> Self {
        Mat2 {
            m11: w.exp(),
            m12: 0.0,
            m21: 0.0,
            m22: (-w).exp(),
        }
    }

    pub fn shear(u: f64) -> Self {
        Mat2 {
            m11: 1.0,
            m12: u,
            m21: 0.0,
            m22: 1.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    /// Sum of squared entries, ‖M‖² in the Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.m11 * self.m11 + self.m12 * self.m12 + self.m21 * self.m21 + self.m22 * self.m22
    }

    pub fn apply_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, b: Mat2) -> Mat2 {
        Mat2 {
            m11: self.m11 * b.m11 + self.m12 * b.m21,
            m12: self.m11 * b.m12 + self.m12 * b.m22,
            m21: self.m21 * b.m11 + self.m22 * b.m21,
            m22: self.m21 * b.m12 + self.m22 * b.m22,
        }
    }
}

/// Iwasawa coordinates (α, w, u) of rotation(α)·diag(e^w, e^−w)·shear(u).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IwasawaParams {
    pub alpha: f64,
    pub w: f64,
    pub u: f64,
}

impl IwasawaParams {
    pub fn new(alpha: f64, w: f64, u: f64) -> Self {
        IwasawaParams { alpha, w, u }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.w, self.u]
    }
}

pub fn iwasawa_compose(p: IwasawaParams) -> Mat2 {
    let (s, c) = p.alpha.sin_cos();
    let e = p.w.exp();
    let ei = 1.0 / e;
    // rotation · [[e, e u], [0, 1/e]]
    Mat2 {
        m11: c * e,
        m12: c * e * p.u - s * ei,
        m21: s * e,
        m22: s * e * p.u + c * ei,
    }
}

/// Gram–Schmidt on the columns: the first column fixes α and w, the
/// projection of the second onto the first fixes u.
pub fn iwasawa_decompose(m: &Mat2) -> Result<IwasawaParams> {
    let scale = 1.0_f64.max(m.frobenius_sq());
    if (m.det() - 1.0).abs() > DET_TOL * scale {
        return domain(format!("determinant {} is not 1", m.det()));
    }
    let n2 = m.m11 * m.m11 + m.m21 * m.m21;
    let mut alpha = m.m21.atan2(m.m11);
    if alpha <= -PI {
        alpha += 2.0 * PI;
    }
    let w = 0.5 * n2.ln();
    let u = (m.m11 * m.m12 + m.m21 * m.m22) / n2;
    Ok(IwasawaParams { alpha, w, u })
}

/// A point of the real projective line; infinity is a value of its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectivePoint {
    Finite(f64),
    Infinity,
}

impl ProjectivePoint {
    /// Homogeneous coordinates (z, 1) or (1, 0).
    pub fn homogeneous(self) -> [f64; 2] {
        match self {
            ProjectivePoint::Finite(z) => [z, 1.0],
            ProjectivePoint::Infinity => [1.0, 0.0],
        }
    }

    pub fn from_homogeneous(v: [f64; 2]) -> Self {
        if v[1] == 0.0 {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite(v[0] / v[1])
        }
    }

    /// Angle φ = 2 arctan z in (−π, π], with infinity at π.
    pub fn angle(self) -> f64 {
        match self {
            ProjectivePoint::Finite(z) => 2.0 * z.atan(),
            ProjectivePoint::Infinity => PI,
        }
    }
}

pub fn moebius_apply(m: &Mat2, z: ProjectivePoint) -> ProjectivePoint {
    ProjectivePoint::from_homogeneous(m.apply_vec(z.homogeneous()))
}

/// Action on the upper half-plane, z ↦ (m11 z + m12)/(m21 z + m22).
pub fn moebius_apply_complex(m: &Mat2, z: C64) -> C64 {
    (z * m.m11 + m.m12) / (z * m.m21 + m.m22)
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn hyperbolic_distance(a: C64, b: C64) -> f64 {
    let num = (a.re - b.re).powi(2) + a.im * a.im + b.im * b.im;
    (num / (2.0 * a.im * b.im)).acosh()
}

/// Clean-system exponent: 2 cosh μ = tr M₀ with Re μ ≥ 0.
///
/// Inside the band the real part is infinitesimal; the sign of Im μ follows
/// the sense of rotation (the sign of the lower-left entry of M₀), so that a
/// pure rotation by ᾱ gives μ = iᾱ.
pub fn mu_exact(means: IwasawaParams) -> C64 {
    let m = iwasawa_compose(means);
    let t = 0.5 * m.trace();
    if t > 1.0 {
        C64::new(t.acosh(), 0.0)
    } else if t < -1.0 {
        C64::new((-t).acosh(), PI)
    } else {
        let sgn = if m.m21 < 0.0 { -1.0 } else { 1.0 };
        C64::new(0.0, sgn * t.acos())
    }
}

/// Continuum exponent μ = sqrt(w̄² + ᾱū − ᾱ²), same branch rule as
/// [`mu_exact`].
pub fn mu_continuum(means: IwasawaParams) -> C64 {
    let mu2 = mu_squared(means);
    if mu2 >= 0.0 {
        C64::new(mu2.sqrt(), 0.0)
    } else {
        let sgn = if means.alpha < 0.0 { -1.0 } else { 1.0 };
        C64::new(0.0, sgn * (-mu2).sqrt())
    }
}

pub fn mu_squared(means: IwasawaParams) -> f64 {
    let IwasawaParams { alpha: a, w, u } = means;
    w * w + a * u - a * a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn compose_examples() {
        let id = iwasawa_compose(IwasawaParams::default());
        assert_eq!(id, Mat2::IDENTITY);
        let r = iwasawa_compose(IwasawaParams::new(PI / 2.0, 0.0, 0.0));
        assert!(close(r.m11, 0.0, 1e-15) && close(r.m12, -1.0, 1e-15));
        assert!(close(r.m21, 1.0, 1e-15) && close(r.m22, 0.0, 1e-15));
        let d = iwasawa_compose(IwasawaParams::new(0.0, 2f64.ln(), 3.0));
        assert!(close(d.m11, 2.0, 1e-14) && close(d.m12, 6.0, 1e-14));
        assert!(close(d.m21, 0.0, 1e-15) && close(d.m22, 0.5, 1e-15));
    }

    #[test]
    fn compose_matches_factor_product() {
        let p = IwasawaParams::new(0.7, -0.3, 1.1);
        let a = iwasawa_compose(p);
        let b = Mat2::rotation(p.alpha) * Mat2::stretch(p.w) * Mat2::shear(p.u);
        for (x, y) in [
            (a.m11, b.m11),
            (a.m12, b.m12),
            (a.m21, b.m21),
            (a.m22, b.m22),
        ] {
            assert!(close(x, y, 1e-14));
        }
    }

    #[test]
    fn decompose_examples() {
        let p = iwasawa_decompose(&Mat2::IDENTITY).unwrap();
        assert_eq!(p, IwasawaParams::new(0.0, 0.0, 0.0));
        let p = iwasawa_decompose(&Mat2::new(0.0, -1.0, 1.0, 0.0).unwrap()).unwrap();
        assert!(
            close(p.alpha, PI / 2.0, 1e-15) && close(p.w, 0.0, 1e-15) && close(p.u, 0.0, 1e-15)
        );
        let p = iwasawa_decompose(&Mat2::new(2.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(close(p.alpha, 0.5f64.atan(), 1e-15));
        assert!(close(p.w, 0.5 * 5f64.ln(), 1e-15));
        assert!(close(p.u, 0.6, 1e-15));
    }

    #[test]
    fn decompose_rejects_non_unimodular() {
        let m = Mat2 {
            m11: 2.0,
            m12: 0.0,
            m21: 0.0,
            m22: 1.0,
        };
        assert!(iwasawa_decompose(&m).is_err());
        assert!(Mat2::new(2.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn alpha_branch_at_minus_pi() {
        let p = iwasawa_decompose(&Mat2::rotation(PI)).unwrap();
        assert!(close(p.alpha, PI, 1e-15));
    }

    #[test]
    fn moebius_examples() {
        let z = ProjectivePoint::Finite(0.7);
        assert_eq!(moebius_apply(&Mat2::IDENTITY, z), z);
        assert_eq!(
            moebius_apply(&Mat2::shear(2.5), z),
            ProjectivePoint::Finite(3.2)
        );
        let r = moebius_apply(&Mat2::rotation(PI / 2.0), ProjectivePoint::Finite(2.0));
        match r {
            ProjectivePoint::Finite(v) => assert!(close(v, -0.5, 1e-15)),
            _ => panic!(),
        }
    }

    #[test]
    fn moebius_poles_and_infinity() {
        let r = Mat2 {
            m11: 0.0,
            m12: -1.0,
            m21: 1.0,
            m22: 0.0,
        };
        assert_eq!(
            moebius_apply(&r, ProjectivePoint::Finite(0.0)),
            ProjectivePoint::Infinity
        );
        assert_eq!(
            moebius_apply(&r, ProjectivePoint::Infinity),
            ProjectivePoint::Finite(0.0)
        );
        assert_eq!(
            moebius_apply(&Mat2::shear(1.0), ProjectivePoint::Infinity),
            ProjectivePoint::Infinity
        );
    }

    #[test]
    fn mu_examples() {
        let m = mu_exact(IwasawaParams::new(0.0, 0.3, 0.0));
        assert!(close(m.re, 0.3, 1e-14) && m.im == 0.0);
        let m = mu_exact(IwasawaParams::new(PI / 3.0, 0.0, 0.0));
        assert!(close(m.re, 0.0, 1e-15) && close(m.im, PI / 3.0, 1e-14));
        let m = mu_exact(IwasawaParams::new(-PI / 3.0, 0.0, 0.0));
        assert!(close(m.im, -PI / 3.0, 1e-14));
        // (0.1, 0.05, 0.2): trace from the composed matrix, then acosh
        let p = IwasawaParams::new(0.1, 0.05, 0.2);
        let t = 0.1f64.sin() * 0.05f64.exp() * 0.2 + 2.0 * 0.1f64.cos() * 0.05f64.cosh();
        let m = mu_exact(p);
        assert!(t > 2.0 && m.im == 0.0);
        assert!(close(m.re, (0.5 * t).acosh(), 1e-14));
    }

    #[test]
    fn mu_continuum_examples() {
        assert!(close(
            mu_continuum(IwasawaParams::new(0.0, 0.3, 0.0)).re,
            0.3,
            1e-15
        ));
        assert_eq!(
            mu_continuum(IwasawaParams::new(0.1, 0.0, 0.1)),
            C64::new(0.0, 0.0)
        );
        assert!(close(
            mu_continuum(IwasawaParams::new(0.1, 0.0, 0.5)).re,
            0.2,
            1e-15
        ));
    }
}
