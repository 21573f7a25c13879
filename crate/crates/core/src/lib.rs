//! Supersymmetric partner Hamiltonians `H+ = AB`, `H- = BA` built from a
//! superpotential, their complex spectra, and checks of the spectral
//! relations between partners.
//!
//! The numeric core is generic over [`Real`] (`f32`, `f64`, `TwoFloat`);
//! the aliases below fix the precision.
//!
//! ```
//! use susyfactory::expr::ParamEnv;
//! use susyfactory::operator::{factor, Convention};
//!
//! let pair = factor(Convention::TypeI, &["i*x"], &ParamEnv::new()).unwrap();
//! assert_eq!(pair.h_plus.to_string(), "p^2 + x^2 + 1");
//! assert_eq!(pair.h_minus.to_string(), "p^2 + x^2 - 1");
//! ```

// `!(v > 0.0)` is how NaN gets rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// triangular solves read better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod analytic;
pub mod discretize;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod operator;
pub mod presets;
pub mod scalar;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;
pub use twofloat::TwoFloat;

pub type CoeffFn64 = operator::CoeffFn<f64>;
pub type DiffOperator64 = operator::DiffOperator<f64>;
pub type HamiltonianPair64 = operator::HamiltonianPair<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type OperatorMatrix64 = discretize::OperatorMatrix<f64>;

/// Double-double precision, for badly conditioned spectra.
pub type CoeffFnDD = operator::CoeffFn<TwoFloat>;
pub type DiffOperatorDD = operator::DiffOperator<TwoFloat>;
pub type HamiltonianPairDD = operator::HamiltonianPair<TwoFloat>;
pub type MatrixDD = linalg::Matrix<TwoFloat>;
pub type OperatorMatrixDD = discretize::OperatorMatrix<TwoFloat>;

pub type DiffOperator32 = operator::DiffOperator<f32>;
