//! Pseudo-spectral simulation and verification harness for two-dimensional
//! incompressible, density-dependent flow with odd viscosity on the torus.
//!
//! Every numerical kernel is generic over the scalar type ([`Real`]); the
//! aliases below fix it to `f64`, which is what the tolerances of the
//! verification suites are written for.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod littlewood_paley;
pub mod pressure;
pub mod random;
pub mod real;
pub mod spectral;
pub mod stepper;

pub use error::{Error, Result};
pub use real::Real;

pub type Grid = spectral::Grid<f64>;
pub type Scalar = spectral::SpectralScalar<f64>;
pub type Vector = spectral::SpectralVector<f64>;
pub type Physical = spectral::PhysicalField<f64>;
