//! Characteristic exponent Ω = γ + iπj of products of random 2×2 unimodular
//! matrices close to the identity.
//!
//! Several independent routes compute the same quantity: closed-form
//! scaling formulas built on special functions, a stationary Fokker–Planck
//! solver, a weak-disorder series, and Monte Carlo simulation of the product.

pub mod closed_form;
pub mod coeffs;
pub mod config;
pub mod error;
pub mod fp_solver;
pub mod model;
pub mod model_maps;
pub mod monte_carlo;
pub mod perturbation;
pub mod poly;
pub mod sl2;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{CharacteristicExponent, DisorderModel, Route};
pub use num_complex::Complex64 as C64;
