//! Complex special functions used by the scaling formulas.
//!
//! Every kernel returns a [`FunPair`] holding the value and derivative with
//! a common real exponent, so that ratios such as logarithmic derivatives
//! stay finite where the functions themselves overflow.

pub mod airy;
pub mod bessel;
pub mod elliptic;
pub mod gamma;
pub mod hyp2f1;
pub mod quad;
pub mod taylor;
pub mod whittaker;

use num_complex::Complex64 as C64;

pub use airy::{airy_ai, airy_bi, airy_log_derivative};
pub use bessel::{bessel_h2, bessel_i, bessel_jn, bessel_k};
pub use elliptic::elliptic_ke;
pub use gamma::{gamma, ln_gamma};
pub use hyp2f1::hyp2f1;
pub use whittaker::whittaker_w;

/// Value and derivative, both multiplied by exp(`scale`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunPair {
    pub val: C64,
    pub der: C64,
    pub scale: f64,
}

impl FunPair {
    pub fn new(val: C64, der: C64) -> Self {
        FunPair {
            val,
            der,
            scale: 0.0,
        }
    }

    pub fn scaled(val: C64, der: C64, scale: f64) -> Self {
        FunPair { val, der, scale }.normalized()
    }

    pub fn value(&self) -> C64 {
        self.val * self.scale.exp()
    }

    pub fn derivative(&self) -> C64 {
        self.der * self.scale.exp()
    }

    pub fn log_derivative(&self) -> C64 {
        self.der / self.val
    }

    /// Moves the magnitude of the stored pair into `scale`.
    pub fn normalized(self) -> Self {
        let n = self.val.norm().max(self.der.norm());
        if n == 0.0 || !n.is_finite() {
            return self;
        }
        FunPair {
            val: self.val / n,
            der: self.der / n,
            scale: self.scale + n.ln(),
        }
    }

    /// Multiplies by exp(s) for real s.
    pub fn with_scale(self, s: f64) -> Self {
        FunPair {
            scale: self.scale + s,
            ..self
        }
        .normalized()
    }

    pub fn mul(self, c: C64) -> Self {
        FunPair {
            val: self.val * c,
            der: self.der * c,
            scale: self.scale,
        }
    }

    /// Sum of two pairs carried at different scales.
    pub fn add(self, o: FunPair) -> Self {
        let s = self.scale.max(o.scale);
        let fa = (self.scale - s).exp();
        let fb = (o.scale - s).exp();
        FunPair {
            val: self.val * fa + o.val * fb,
            der: self.der * fa + o.der * fb,
            scale: s,
        }
    }
}
