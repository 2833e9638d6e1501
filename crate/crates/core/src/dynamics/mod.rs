//! Right-hand sides of the density-dependent system with odd viscosity
//!
//! ```text
//! ρ_t + u·∇ρ = 0,   ∇·u = 0,
//! ρ(u_t + u·∇u) + ∇π + σ ∇·(ρ∇u⊥) + εΔ²u = 0,
//! ```
//!
//! together with the equations satisfied by the good unknowns
//! `ω = curl u`, `η = curl(ρu)` and `θ = η − σΔρ`.
//!
//! `σ = odd_sign ∈ {−1, 0, 1}`; `σ = 0` is the plain non-homogeneous Euler
//! (or hyperviscous) system and serves as a reference.

mod rhs;
mod terms;

pub(crate) use rhs::{inviscid_forcing, weighted};
pub use rhs::{
    momentum_rhs, momentum_rhs_with, omega_rhs, omega_rhs_raw, residual_omega, residual_theta,
    split_forcing, theta_rhs, velocity_forcing,
};
pub use terms::{
    bilinear_b, bilinear_b_curl_form, eta_expanded, good_unknowns, odd_stress_divergence,
    odd_stress_divergence_expanded, trilinear_t, trilinear_t_expanded,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::spectral::{Grid, PhysicalField, SpectralScalar, SpectralVector};

/// Default lower bound on `ρ` below which evaluation aborts.
pub const DEFAULT_VACUUM_FLOOR: f64 = 1e-6;

/// State `(t, ρ, u)` with the parameters `ε` and `σ`.
///
/// `rho` stores `ρ − 1` so that the background density carries no
/// roundoff.
#[derive(Clone, Debug)]
pub struct FlowState<T: Real> {
    pub t: T,
    pub rho: SpectralScalar<T>,
    pub u: SpectralVector<T>,
    pub epsilon: T,
    pub odd_sign: T,
}

impl<T: Real> FlowState<T> {
    /// Validated constructor: common grid, `ε ≥ 0`, divergence-free `u`.
    pub fn new(
        rho_minus_one: SpectralScalar<T>,
        u: SpectralVector<T>,
        epsilon: T,
        odd_sign: T,
    ) -> Result<Self> {
        rho_minus_one.grid().check_same(u.grid())?;
        if !(epsilon >= T::zero()) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !odd_sign.is_finite() {
            return Err(Error::InvalidArgument("odd_sign must be finite".into()));
        }
        let rel = relative_divergence(&u);
        if rel > T::tol(1e-12) {
            return Err(Error::NotDivergenceFree {
                relative: rel.as_f64(),
            });
        }
        Ok(Self {
            t: T::zero(),
            rho: rho_minus_one,
            u: u.with_divergence_free(true),
            epsilon,
            odd_sign,
        })
    }

    /// `ρ ≡ 1`.
    pub fn homogeneous(u: SpectralVector<T>, epsilon: T, odd_sign: T) -> Result<Self> {
        let rho = SpectralScalar::zeros(u.grid());
        Self::new(rho, u, epsilon, odd_sign)
    }

    pub fn with_time(mut self, t: T) -> Self {
        self.t = t;
        self
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        self.rho.grid()
    }

    /// Grid samples of `ρ` (truncated to the dealiased band).
    pub fn rho_physical(&self) -> PhysicalField<T> {
        self.rho.phys().map(|v| v + T::one())
    }

    /// Copy with `ρ − 1` and `u` truncated to the dealiased band.
    pub fn dealiased(&self) -> Self {
        Self {
            rho: self.rho.dealiased(),
            u: self.u.dealiased(),
            ..self.clone()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.u.is_finite()
    }

    pub fn vorticity(&self) -> SpectralScalar<T> {
        self.u.curl()
    }
}

/// `‖∇·u‖ / ‖∇u‖` (zero for `u = 0`).
pub fn relative_divergence<T: Real>(u: &SpectralVector<T>) -> T {
    let div = u.divergence().l2_norm();
    let scale = (u.x1.gradient().l2_norm().powi(2) + u.x2.gradient().l2_norm().powi(2)).sqrt();
    if scale == T::zero() {
        div
    } else {
        div / scale
    }
}

/// Pointwise functions of `ρ` needed by every right-hand side, projected
/// onto the dealiased band.
#[derive(Clone, Debug)]
pub struct Density<T: Real> {
    /// `ρ − 1`, truncated.
    pub rho: SpectralScalar<T>,
    /// `𝐏(log ρ)`.
    pub log_rho: SpectralScalar<T>,
    /// `a = 𝐏(1/ρ)`.
    pub inv_rho: SpectralScalar<T>,
    /// Grid samples of `a`.
    pub inv_rho_phys: PhysicalField<T>,
    pub min: T,
    pub max: T,
}

impl<T: Real> Density<T> {
    pub fn new(rho_minus_one: &SpectralScalar<T>, floor: T, t: T) -> Result<Self> {
        let grid = rho_minus_one.grid();
        let rho = rho_minus_one.dealiased();
        let samples = rho.to_physical().map(|v| v + T::one());
        if !samples.all_finite() {
            return Err(Error::NonFinite {
                t: t.as_f64(),
                quantity: "density",
            });
        }
        let (min, max) = (samples.min(), samples.max());
        if min < floor || min <= T::zero() {
            return Err(Error::Vacuum {
                t: t.as_f64(),
                rho_min: min.as_f64(),
                floor: floor.as_f64(),
            });
        }
        let log_rho = SpectralScalar::from_physical_dealiased(grid, &samples.map(|v| v.ln()));
        let inv_rho = SpectralScalar::from_physical_dealiased(grid, &samples.map(|v| T::one() / v));
        let inv_rho_phys = inv_rho.to_physical();
        Ok(Self {
            rho,
            log_rho,
            inv_rho,
            inv_rho_phys,
            min,
            max,
        })
    }

    pub fn of(state: &FlowState<T>) -> Result<Self> {
        Self::new(&state.rho, T::lit(DEFAULT_VACUUM_FLOOR), state.t)
    }
}

/// `ω`, `η = curl(ρu)` and `θ = η − σΔρ`.
#[derive(Clone, Debug)]
pub struct GoodUnknowns<T: Real> {
    pub omega: SpectralScalar<T>,
    pub eta: SpectralScalar<T>,
    pub theta: SpectralScalar<T>,
}

/// Grid samples shared by several assemblies.
pub(crate) fn phys<T: Real>(f: &SpectralScalar<T>) -> PhysicalField<T> {
    f.phys()
}

/// `Σ aᵢ bᵢ` on the grid, transformed and truncated once.
pub(crate) fn sum_of_products<T: Real>(
    grid: &Arc<Grid<T>>,
    pairs: &[(&PhysicalField<T>, &PhysicalField<T>)],
) -> SpectralScalar<T> {
    let n = grid.n();
    let mut acc = PhysicalField::zeros(n);
    for (a, b) in pairs {
        for ((s, &x), &y) in acc.values_mut().iter_mut().zip(a.values()).zip(b.values()) {
            *s = *s + x * y;
        }
    }
    SpectralScalar::from_physical_dealiased(grid, &acc)
}
