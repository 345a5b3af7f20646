//! Symbolic and numeric toolkit for the extended noncommutative phase space
//! with coordinates `x`, momenta `p`, the noncommutativity tensor `theta` and
//! its conjugate momentum `pi`.

pub mod cli;
pub mod clifford;
pub mod constraints;
pub mod dfra;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oscillator;
pub mod quadrature;
pub mod reps;
pub mod scalar;
pub mod suites;
pub mod symcore;

pub use error::{Error, Result};
pub use scalar::GaussianRational;
