//! The nine continuum parameters and the characteristic exponent.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sl2::IwasawaParams;

pub const ALPHA: usize = 0;
pub const W: usize = 1;
pub const U: usize = 2;

/// Mean Iwasawa vector and covariance matrix, index order (α, w, u).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderModel {
    pub means: IwasawaParams,
    pub cov: [[f64; 3]; 3],
}

impl DisorderModel {
    /// Checks symmetry and positive semi-definiteness.
    pub fn new(means: IwasawaParams, cov: [[f64; 3]; 3]) -> Result<Self> {
        let m = DisorderModel { means, cov };
        m.validate()?;
        Ok(m)
    }

    /// Model with a diagonal covariance, D_αα, D_ww, D_uu.
    pub fn diagonal(means: IwasawaParams, d_aa: f64, d_ww: f64, d_uu: f64) -> Result<Self> {
        Self::new(
            means,
            [[d_aa, 0.0, 0.0], [0.0, d_ww, 0.0], [0.0, 0.0, d_uu]],
        )
    }

    pub fn no_disorder(means: IwasawaParams) -> Self {
        DisorderModel {
            means,
            cov: [[0.0; 3]; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = self
            .means
            .as_array()
            .into_iter()
            .chain(self.cov.iter().flatten().copied());
        if all.clone().any(|x| !x.is_finite()) {
            return domain("non-finite model parameter");
        }
        let scale = self.cov_scale().max(f64::MIN_POSITIVE);
        for i in 0..3 {
            for j in 0..i {
                if (self.cov[i][j] - self.cov[j][i]).abs() > 1e-14 * scale.max(1.0) {
                    return domain("covariance matrix is not symmetric");
                }
            }
        }
        let eig = SymmetricEigen::new(self.cov_matrix());
        if eig.eigenvalues.iter().any(|&l| l < -1e-12 * scale.max(1.0)) {
            return domain("covariance matrix is not positive semi-definite");
        }
        Ok(())
    }

    pub fn cov_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.cov[i][j])
    }

    /// Largest absolute covariance entry.
    pub fn cov_scale(&self) -> f64 {
        self.cov
            .iter()
            .flatten()
            .fold(0.0_f64, |a, &b| a.max(b.abs()))
    }

    pub fn mean_scale(&self) -> f64 {
        self.means
            .as_array()
            .iter()
            .fold(0.0_f64, |a, &b| a.max(b.abs()))
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.cov[i][j]
    }

    pub fn d_aa(&self) -> f64 {
        self.cov[ALPHA][ALPHA]
    }
    pub fn d_ww(&self) -> f64 {
        self.cov[W][W]
    }
    pub fn d_uu(&self) -> f64 {
        self.cov[U][U]
    }
    pub fn d_aw(&self) -> f64 {
        self.cov[ALPHA][W]
    }
    pub fn d_au(&self) -> f64 {
        self.cov[ALPHA][U]
    }
    pub fn d_wu(&self) -> f64 {
        self.cov[W][U]
    }

    /// All nine parameters multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut cov = self.cov;
        cov.iter_mut().flatten().for_each(|x| *x *= s);
        DisorderModel {
            means: IwasawaParams::new(s * self.means.alpha, s * self.means.w, s * self.means.u),
            cov,
        }
    }

    /// Covariances multiplied by `s`, means unchanged.
    pub fn with_cov_scaled(&self, s: f64) -> Self {
        let mut cov = self.cov;
        cov.iter_mut().flatten().for_each(|x| *x *= s);
        DisorderModel {
            means: self.means,
            cov,
        }
    }

    /// Image under z ↦ −z: (α, w, u) ↦ (−α, w, −u). Conjugates Ω.
    pub fn reflected(&self) -> Self {
        let sign = [-1.0, 1.0, -1.0];
        let mut cov = self.cov;
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] *= sign[i] * sign[j];
            }
        }
        DisorderModel {
            means: IwasawaParams::new(-self.means.alpha, self.means.w, -self.means.u),
            cov,
        }
    }

    pub fn set_cov(&mut self, i: usize, j: usize, v: f64) {
        self.cov[i][j] = v;
        self.cov[j][i] = v;
    }
}

/// Which computation produced an Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Closed,
    Hypergeometric,
    Expand,
    FokkerPlanck,
    MonteCarlo,
    Sde,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::Hypergeometric => "hypergeometric",
            Route::Expand => "expand",
            Route::FokkerPlanck => "fp",
            Route::MonteCarlo => "mc",
            Route::Sde => "sde",
        }
    }
}

/// Ω = γ + iπj together with the route that computed it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicExponent {
    pub omega: C64,
    pub route: Route,
}

impl CharacteristicExponent {
    pub fn new(omega: C64, route: Route) -> Self {
        CharacteristicExponent { omega, route }
    }

    pub fn gamma(&self) -> f64 {
        self.omega.re
    }

    pub fn j(&self) -> f64 {
        self.omega.im / std::f64::consts::PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indefinite_covariance() {
        let m = DisorderModel::new(
            IwasawaParams::default(),
            [[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        );
        assert!(m.is_err());
    }

    #[test]
    fn rejects_asymmetric_covariance() {
        let m = DisorderModel::new(
            IwasawaParams::default(),
            [[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        );
        assert!(m.is_err());
    }

    #[test]
    fn reflection_is_an_involution() {
        let mut m =
            DisorderModel::diagonal(IwasawaParams::new(0.3, -0.2, 0.5), 1.0, 2.0, 3.0).unwrap();
        m.set_cov(0, 1, 0.3);
        m.set_cov(1, 2, -0.4);
        let r = m.reflected();
        assert_eq!(r.d_aw(), -0.3);
        assert_eq!(r.d_wu(), 0.4);
        assert_eq!(r.reflected(), m);
    }
}
