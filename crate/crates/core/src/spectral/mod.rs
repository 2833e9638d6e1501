//! Periodic grid, Fourier transforms, vector calculus and dealiased
//! products on the torus `[0, 2π)²`.

mod calculus;
mod field;
mod grid;
pub mod sum;

pub use calculus::{biot_savart, leray_project};
pub use field::{PhysicalField, SpectralScalar, SpectralVector};
pub use grid::Grid;

use std::sync::Arc;

use crate::error::Result;
use crate::real::Real;

/// Forward transform of grid samples.
pub fn forward_transform<T: Real>(
    grid: &Arc<Grid<T>>,
    samples: &PhysicalField<T>,
) -> Result<SpectralScalar<T>> {
    SpectralScalar::forward_transform(grid, samples)
}

/// Inverse transform with Hermitian-symmetry check.
pub fn inverse_transform<T: Real>(f: &SpectralScalar<T>) -> Result<PhysicalField<T>> {
    f.inverse_transform()
}

pub fn dealiased_product<T: Real>(
    f: &SpectralScalar<T>,
    g: &SpectralScalar<T>,
) -> Result<SpectralScalar<T>> {
    f.dealiased_product(g)
}

/// Evaluates `f` on a grid refined by `factor` (zero-padded spectrum).
pub fn oversampled<T: Real>(f: &SpectralScalar<T>, factor: usize) -> Result<PhysicalField<T>> {
    let n = f.grid().n();
    if factor <= 1 {
        return Ok(f.to_physical());
    }
    let fine = Grid::new(n * factor)?;
    let mut g = SpectralScalar::zeros(&fine);
    let h = (n / 2) as i64;
    for k1 in -h + 1..h {
        for k2 in -h + 1..h {
            let c = f.coeff(k1, k2);
            if let Some(i) = fine.index_of(k1, k2) {
                g.coeffs_mut()[i] = c;
            }
        }
    }
    Ok(g.to_physical())
}
