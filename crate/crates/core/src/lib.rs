//! Spectra of O(D)-symmetric anharmonic oscillators continued to negative even
//! dimension: exact spectral polynomials, D-parametric perturbation series, and
//! large-order analysis of the series coefficients at arbitrary precision.

pub mod asymptotics;
pub mod bigfloat;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod hill;
pub mod potential;
pub mod reference;
pub mod roots;
pub mod series;
pub mod spectral;
pub mod spin;
pub mod verify;

pub use error::{Error, Result};
