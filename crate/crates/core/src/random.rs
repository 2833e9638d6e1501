//! Seeded band-limited random fields.
//!
//! Modes are drawn over the fixed wavenumber box `|k_i| ≤ band` in a fixed
//! order, independently of the grid, so a given seed describes the same
//! physical field on every grid that resolves the band.

use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use crate::error::Result;
use crate::real::Real;
use crate::spectral::{biot_savart, Grid, SpectralScalar, SpectralVector};

/// Mean-zero real field with spectrum weighted by `1/(1+|k|²)` and
/// `max |f| ≤ amplitude` (the sum of coefficient moduli equals `amplitude`).
pub fn random_scalar<T: Real, R: Rng + ?Sized>(
    grid: &Arc<Grid<T>>,
    band: i64,
    amplitude: T,
    rng: &mut R,
) -> SpectralScalar<T> {
    let mut modes = Vec::new();
    for k1 in -band..=band {
        for k2 in 0..=band {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let re: f64 = rng.random_range(-1.0..1.0);
            let im: f64 = rng.random_range(-1.0..1.0);
            let w = 1.0 / (1.0 + (k1 * k1 + k2 * k2) as f64);
            modes.push((k1, k2, re * w, im * w));
        }
    }
    let total: f64 = modes.iter().map(|&(_, _, re, im)| 2.0 * (re * re + im * im).sqrt()).sum();
    let mut f = SpectralScalar::zeros(grid);
    if total == 0.0 {
        return f;
    }
    let scale = amplitude.as_f64() / total;
    for (k1, k2, re, im) in modes {
        f.set_mode(k1, k2, Complex::new(T::lit(re * scale), T::lit(im * scale)));
    }
    f
}

/// Divergence-free velocity `u = biot_savart(ω)` for a random `ω` with
/// `max |ω| ≤ amplitude`.
pub fn random_velocity<T: Real, R: Rng + ?Sized>(
    grid: &Arc<Grid<T>>,
    band: i64,
    amplitude: T,
    rng: &mut R,
) -> Result<SpectralVector<T>> {
    biot_savart(&random_scalar(grid, band, amplitude, rng))
}
