use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{RunConfig, ScenarioConfig};
use crate::dynamics::FlowState;
use crate::error::Result;
use crate::random::{random_scalar, random_velocity};
use crate::real::Real;
use crate::spectral::{biot_savart, Grid, SpectralScalar, SpectralVector};

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `ρ ≡ 1`, `u = (0, sin x₁)`, built from exact Fourier coefficients.
pub fn steady_shear<T: Real>(grid: &Arc<Grid<T>>, epsilon: T, odd_sign: T) -> Result<FlowState<T>> {
    let mut u2 = SpectralScalar::zeros(grid);
    u2.set_mode(1, 0, c(0.0, -0.5));
    let u = SpectralVector::new(SpectralScalar::zeros(grid), u2)?;
    FlowState::homogeneous(u, epsilon, odd_sign)
}

/// `ρ = 1 + a cos x₁ cos x₂` and `u = biot_savart(ω₀)` with
/// `ω₀ = V(sin x₁ sin x₂ + ½ cos(x₁ + 2x₂))`.
pub fn density_wave<T: Real>(
    grid: &Arc<Grid<T>>,
    amplitude: T,
    vorticity: T,
    epsilon: T,
    odd_sign: T,
) -> Result<FlowState<T>> {
    let a = amplitude.as_f64();
    let v = vorticity.as_f64();
    let mut rho = SpectralScalar::zeros(grid);
    rho.set_mode(1, 1, c(a / 4.0, 0.0));
    rho.set_mode(1, -1, c(a / 4.0, 0.0));
    let mut omega = SpectralScalar::zeros(grid);
    omega.set_mode(1, 1, c(-v / 4.0, 0.0));
    omega.set_mode(1, -1, c(v / 4.0, 0.0));
    omega.set_mode(1, 2, c(v / 4.0, 0.0));
    FlowState::new(rho, biot_savart(&omega)?, epsilon, odd_sign)
}

/// Seeded band-limited state with `ρ ≥ 1 − rho_amplitude`.
pub fn random_bandlimited<T: Real>(
    grid: &Arc<Grid<T>>,
    band: i64,
    rho_amplitude: T,
    vorticity: T,
    epsilon: T,
    odd_sign: T,
    seed: u64,
) -> Result<FlowState<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = random_scalar(grid, band, rho_amplitude, &mut rng);
    let u = random_velocity(grid, band, vorticity, &mut rng)?;
    FlowState::new(rho, u, epsilon, odd_sign)
}

/// Initial state described by a validated configuration.
pub fn init_scenario(config: &RunConfig) -> Result<FlowState<f64>> {
    config.validate()?;
    let grid = Grid::new(config.grid_n)?;
    let (eps, sigma) = (config.epsilon, config.odd_sign);
    match config.scenario {
        ScenarioConfig::SteadyShear => steady_shear(&grid, eps, sigma),
        ScenarioConfig::DensityWave { amplitude, vorticity } => {
            density_wave(&grid, amplitude, vorticity, eps, sigma)
        }
        ScenarioConfig::RandomBandlimited {
            band,
            rho_amplitude,
            vorticity,
        } => random_bandlimited(&grid, band, rho_amplitude, vorticity, eps, sigma, config.seed),
    }
}
