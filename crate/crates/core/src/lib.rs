//! Quantum channels in Kraus form, error detection and correction with explicit
//! recovery synthesis, noise commutants and noiseless subsystems, and the
//! Deutsch and Deutsch–Jozsa algorithms, all as exact dense linear algebra.
//!
//! The numerical core is generic over the real scalar type ([`Real`], `f32` or
//! `f64`); the aliases below fix it to `f64`, which is what the tolerances used
//! throughout the crate assume.

pub mod algebra;
pub mod algorithms;
pub mod channels;
pub mod error;
pub mod io;
pub mod linalg;
pub mod qcore;
pub mod qec;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

/// Complex double.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix in double precision.
pub type Matrix = linalg::CMatrix<f64>;
/// Dense complex matrix in single precision.
pub type MatrixF32 = linalg::CMatrix<f32>;
pub type StateVector = qcore::StateVector<f64>;
pub type DensityOperator = qcore::DensityOperator<f64>;
pub type Measurement = qcore::Measurement<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type QuantumCode = qec::QuantumCode<f64>;
pub type OperatorSpace = algebra::OperatorSpace<f64>;
