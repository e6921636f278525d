//! Sigma-function expansion and Abelian-function identities for the cyclic
//! trigonal curve `y³ = x⁵ + λ₄x⁴ + λ₃x³ + λ₂x² + λ₁x + λ₀`.
//!
//! Everything is exact: coefficients are rationals, series carry a reliable
//! weight window, and identities are checked by clearing σ-denominators and
//! requiring an empty residual.

pub mod abelian;
pub mod cli;
pub mod curve;
pub mod error;
pub mod expr;
pub mod puiseux;
pub mod grading;
pub mod rational;
pub mod relations;
pub mod sigma;

pub use error::{Error, Result};
pub use rational::Rational;
