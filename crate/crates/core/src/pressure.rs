//! Variable-coefficient elliptic solves for the pressure and the regular
//! part `∇(π − σρω)`.
//!
//! The unknown is the mean-zero potential `Π`, band-limited to the dealiased
//! range, so gradients are curl-free by construction. The discrete operator
//! `Π ↦ −∇·𝐏(a∇Π)` is symmetric and positive on that space; it is inverted
//! by conjugate gradients preconditioned with `(−Δ)⁻¹`.

use std::sync::Arc;

use crate::dynamics::{inviscid_forcing, phys, sum_of_products, velocity_forcing, weighted, Density, FlowState};
use crate::error::{Error, Result};
use crate::littlewood_paley::chi;
use crate::real::Real;
use crate::spectral::{oversampled, Grid, PhysicalField, SpectralScalar, SpectralVector};

pub const DEFAULT_TOLERANCE: f64 = 1e-11;
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    /// Relative L² residual target.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(DEFAULT_TOLERANCE),
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EllipticSolution<T: Real> {
    /// Mean-zero `Π`.
    pub potential: SpectralScalar<T>,
    /// `∇Π`.
    pub gradient: SpectralVector<T>,
    pub iterations: usize,
    /// Final relative residual `‖b − AΠ‖ / ‖b‖`, recomputed from scratch.
    pub residual: T,
    /// Lower bound `a_*` of the coefficient (2× oversampled minimum).
    pub a_min: T,
    /// `a_* ‖∇Π‖ / ‖F‖`; at most `1` up to solver tolerance.
    pub lax_milgram_ratio: T,
}

#[derive(Clone, Debug)]
pub struct PressureSolution<T: Real> {
    pub pi: SpectralScalar<T>,
    pub grad_pi: SpectralVector<T>,
    /// `∇(π − σρω)`; equals `∇(π − ρω)` for `σ = 1`.
    pub grad_pi_minus_rho_omega: SpectralVector<T>,
    pub iterations: usize,
    pub residual: T,
}

/// `Π ↦ −∇·𝐏(a∇Π)` with `a` given by grid samples.
fn apply<T: Real>(grid: &Arc<Grid<T>>, a: &PhysicalField<T>, p: &SpectralScalar<T>) -> SpectralScalar<T> {
    let w1 = sum_of_products(grid, &[(a, &phys(&p.d1()))]);
    let w2 = sum_of_products(grid, &[(a, &phys(&p.d2()))]);
    -&(&w1.d1() + &w2.d2())
}

pub(crate) struct Cg<T: Real> {
    pub potential: SpectralScalar<T>,
    pub iterations: usize,
    pub residual: T,
}

fn pcg<T: Real>(
    a: &PhysicalField<T>,
    rhs: &SpectralScalar<T>,
    opts: SolverOptions<T>,
    guess: Option<&SpectralScalar<T>>,
) -> Result<Cg<T>> {
    let grid = rhs.grid();
    let b_norm = rhs.l2_norm();
    if b_norm == T::zero() {
        return Ok(Cg {
            potential: SpectralScalar::zeros(grid),
            iterations: 0,
            residual: T::zero(),
        });
    }
    let mut x = match guess {
        Some(g) => {
            let mut g = g.dealiased();
            g.set_mean(T::zero());
            g
        }
        None => SpectralScalar::zeros(grid),
    };
    let mut r = rhs - &apply(grid, a, &x);
    let mut z = r.inverse_laplacian_mean_free();
    let mut p = z.clone();
    let mut rz = r.inner_unchecked(&z);
    let mut iterations = 0;
    while r.l2_norm() > opts.tol * b_norm {
        if iterations == opts.max_iter {
            return Err(Error::NotConverged {
                iterations,
                residual: (r.l2_norm() / b_norm).as_f64(),
            });
        }
        let ap = apply(grid, a, &p);
        let pap = p.inner_unchecked(&ap);
        if !(pap > T::zero()) {
            return Err(Error::NotConverged {
                iterations,
                residual: (r.l2_norm() / b_norm).as_f64(),
            });
        }
        let alpha = rz / pap;
        x = x.axpy(alpha, &p);
        r = r.axpy(-alpha, &ap);
        z = r.inverse_laplacian_mean_free();
        let rz_new = r.inner_unchecked(&z);
        p = z.axpy(rz_new / rz, &p);
        rz = rz_new;
        iterations += 1;
    }
    let residual = (rhs - &apply(grid, a, &x)).l2_norm() / b_norm;
    Ok(Cg {
        potential: x,
        iterations,
        residual,
    })
}

/// Solves `−∇·(a∇Π) = ∇·F` for mean-zero `Π` and returns `∇Π` with solver
/// metadata.
pub fn solve_elliptic<T: Real>(
    a: &SpectralScalar<T>,
    f: &SpectralVector<T>,
    tol: T,
    max_iter: usize,
) -> Result<EllipticSolution<T>> {
    solve_elliptic_from(a, f, SolverOptions { tol, max_iter }, None)
}

/// [`solve_elliptic`] with an optional initial guess for `Π`.
pub fn solve_elliptic_from<T: Real>(
    a: &SpectralScalar<T>,
    f: &SpectralVector<T>,
    opts: SolverOptions<T>,
    guess: Option<&SpectralScalar<T>>,
) -> Result<EllipticSolution<T>> {
    a.grid().check_same(f.grid())?;
    let a = a.dealiased();
    let a_min = oversampled(&a, 2)?.min();
    if !(a_min > T::zero()) {
        return Err(Error::NotCoercive { min: a_min.as_f64() });
    }
    let rhs = f.dealiased().divergence();
    let cg = pcg(&a.to_physical(), &rhs, opts, guess)?;
    let gradient = cg.potential.gradient();
    let f_norm = f.l2_norm();
    let lax_milgram_ratio = if f_norm == T::zero() {
        T::zero()
    } else {
        a_min * gradient.l2_norm() / f_norm
    };
    Ok(EllipticSolution {
        potential: cg.potential,
        gradient,
        iterations: cg.iterations,
        residual: cg.residual,
        a_min,
        lax_milgram_ratio,
    })
}

/// Pressure of `state` with default options and no initial guess.
pub fn solve_pressure<T: Real>(state: &FlowState<T>) -> Result<PressureSolution<T>> {
    let density = Density::of(state)?;
    let forcing = velocity_forcing(state, &density);
    solve_pressure_with(state, &density, &forcing, SolverOptions::default(), None)
}

/// Solves `−∇·(a∇π) = ∇·F` for the forcing `F` of [`velocity_forcing`].
pub fn solve_pressure_with<T: Real>(
    state: &FlowState<T>,
    density: &Density<T>,
    forcing: &SpectralVector<T>,
    opts: SolverOptions<T>,
    guess: Option<&SpectralScalar<T>>,
) -> Result<PressureSolution<T>> {
    let cg = pressure_potential(density, forcing, opts, guess)?;
    let grad_pi = cg.potential.gradient().with_divergence_free(false);
    let grad_pi_minus_rho_omega = if state.odd_sign == T::zero() {
        grad_pi.clone()
    } else {
        let omega = state.vorticity();
        let rho_omega = sum_of_products(state.grid(), &[(&state.rho_physical(), &phys(&omega))]);
        grad_pi.axpy(-state.odd_sign, &rho_omega.gradient())
    };
    Ok(PressureSolution {
        pi: cg.potential,
        grad_pi,
        grad_pi_minus_rho_omega,
        iterations: cg.iterations,
        residual: cg.residual,
    })
}

/// Mean-zero `π` for a given forcing, without the split.
pub(crate) fn pressure_potential<T: Real>(
    density: &Density<T>,
    forcing: &SpectralVector<T>,
    opts: SolverOptions<T>,
    guess: Option<&SpectralScalar<T>>,
) -> Result<Cg<T>> {
    let rhs = forcing.dealiased().divergence();
    pcg(&density.inv_rho_phys, &rhs, opts, guess)
}

/// `[ρ−1, Δ]ω = 𝐏((ρ−1)Δω) − Δ𝐏((ρ−1)ω)`.
pub fn commutator<T: Real>(rho_minus_one: &SpectralScalar<T>, omega: &SpectralScalar<T>) -> SpectralScalar<T> {
    let grid = omega.grid();
    let r = phys(rho_minus_one);
    let a = sum_of_products(grid, &[(&r, &phys(&omega.laplacian()))]);
    let b = sum_of_products(grid, &[(&r, &phys(omega))]).laplacian();
    &a - &b
}

/// `−2∇·(ω∇ρ) + ωΔρ`, the divergence form of [`commutator`].
pub fn commutator_divergence_form<T: Real>(
    rho_minus_one: &SpectralScalar<T>,
    omega: &SpectralScalar<T>,
) -> SpectralScalar<T> {
    let grid = omega.grid();
    let w = phys(omega);
    let flux = SpectralVector::new(
        sum_of_products(grid, &[(&w, &phys(&rho_minus_one.d1()))]),
        sum_of_products(grid, &[(&w, &phys(&rho_minus_one.d2()))]),
    )
    .expect("common grid");
    let local = sum_of_products(grid, &[(&w, &phys(&rho_minus_one.laplacian()))]);
    &flux.divergence().scale(-T::lit(2.0)) + &local
}

/// Source `Φ` of `−Δ(π − σρω) = Φ₁ + Φ₂ − σΦ₃ + Φ₄` with
/// `Φ₁ = −∇log ρ·∇π`, `Φ₂ = ρ∇·((u·∇)u + σ(∇log ρ·∇)u⊥)`,
/// `Φ₃ = [ρ−1, Δ]ω = −2∇ρ·∇ω − ωΔρ` and `Φ₄ = ερ∇·(aΔ²u)`.
pub fn phi_source<T: Real>(
    state: &FlowState<T>,
    density: &Density<T>,
    grad_pi: &SpectralVector<T>,
) -> SpectralScalar<T> {
    let grid = state.grid();
    let rho = state.rho_physical();
    let (l1, l2) = (phys(&density.log_rho.d1()), phys(&density.log_rho.d2()));
    let phi1 = -&sum_of_products(grid, &[(&l1, &phys(&grad_pi.x1)), (&l2, &phys(&grad_pi.x2))]);

    // ∇·F without the Δu⊥ part, which contributes −σρΔω and is folded into Φ₃.
    let mut flux = inviscid_forcing(state, density);
    if state.odd_sign != T::zero() {
        flux = flux.axpy(-state.odd_sign, &state.u.perp().laplacian());
    }
    let phi2 = sum_of_products(grid, &[(&rho, &phys(&flux.divergence()))]);

    let omega = state.vorticity();
    let (r1, r2) = (phys(&state.rho.d1()), phys(&state.rho.d2()));
    let phi3 = -&sum_of_products(
        grid,
        &[
            (&r1, &phys(&omega.d1().scale(T::lit(2.0)))),
            (&r2, &phys(&omega.d2().scale(T::lit(2.0)))),
            (&phys(&omega), &phys(&state.rho.laplacian())),
        ],
    );

    let mut phi = &(&phi1 + &phi2) - &phi3.scale(state.odd_sign);
    if state.epsilon != T::zero() {
        let ab = weighted(&density.inv_rho_phys, &state.u.bilaplacian());
        let phi4 = sum_of_products(grid, &[(&rho, &phys(&ab.divergence()))]);
        phi = phi.axpy(state.epsilon, &phi4);
    }
    phi
}

/// `∇(π − σρω)` assembled from `Φ`: the low block `Δ₋₁` is taken from the
/// direct difference in `pressure`, the rest is `∇(−Δ)⁻¹Φ`.
pub fn pressure_split_via_phi<T: Real>(
    state: &FlowState<T>,
    pressure: &PressureSolution<T>,
) -> Result<SpectralVector<T>> {
    state.grid().check_same(pressure.grad_pi.grid())?;
    let density = Density::of(state)?;
    let phi = phi_source(state, &density, &pressure.grad_pi);
    let two = T::lit(2.0);
    let high = phi
        .inverse_laplacian_mean_free()
        .gradient()
        .apply_multiplier(move |k1, k2| {
            let r = (k1 * k1 + k2 * k2).sqrt();
            num_complex::Complex::new(T::one() - chi(two * r), T::zero())
        });
    let low = pressure
        .grad_pi_minus_rho_omega
        .apply_multiplier(move |k1, k2| {
            let r = (k1 * k1 + k2 * k2).sqrt();
            num_complex::Complex::new(chi(two * r), T::zero())
        });
    Ok(&low + &high)
}
