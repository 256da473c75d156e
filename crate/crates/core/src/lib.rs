//! Numerical toolkit for Riesz and Beurling transforms on periodic grids:
//! spectral multipliers, truncated and maximal quadrature, weak-type norms,
//! the auxiliary potentials `h` and `p`, and the dipole counterexample sweep.

pub use rustfft::num_complex::Complex64;

pub mod error;
mod fft;
pub mod grid;
pub mod battery;
pub mod commands;
pub mod config;
pub mod counterexample;
pub mod norms;
pub mod potentials;
pub mod quadrature;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{Field, GridSpec};
