//! Time derivatives of `u`, `θ` and `ω`, and the residuals comparing
//! independent assemblies of the same derivative.

use super::terms::{b_form, directional, trilinear_t};
use super::{good_unknowns, phys, sum_of_products, Density, FlowState};
use crate::error::Result;
use crate::pressure::PressureSolution;
use crate::real::Real;
use crate::spectral::{PhysicalField, SpectralScalar, SpectralVector};

/// Pressure-free part `F` of the momentum balance,
/// `u_t = −F − a∇π` with `a = 1/ρ`:
///
/// `F = (u·∇)u + σ(Δu⊥ + (∇log ρ·∇)u⊥) + ε a Δ²u`.
pub fn velocity_forcing<T: Real>(state: &FlowState<T>, density: &Density<T>) -> SpectralVector<T> {
    let f = inviscid_forcing(state, density);
    if state.epsilon == T::zero() {
        return f;
    }
    let visc = weighted(&density.inv_rho_phys, &state.u.bilaplacian());
    f.axpy(state.epsilon, &visc)
}

/// `F` without the hyperviscous term.
pub(crate) fn inviscid_forcing<T: Real>(state: &FlowState<T>, density: &Density<T>) -> SpectralVector<T> {
    let grid = state.grid();
    let u = &state.u;
    let (u1, u2) = (phys(&u.x1), phys(&u.x2));
    let transport = |f: &SpectralScalar<T>| {
        sum_of_products(grid, &[(&u1, &phys(&f.d1())), (&u2, &phys(&f.d2()))])
    };
    let f = SpectralVector::new(transport(&u.x1), transport(&u.x2)).expect("common grid");
    if state.odd_sign == T::zero() {
        return f;
    }
    let w = u.perp();
    let g = (phys(&density.log_rho.d1()), phys(&density.log_rho.d2()));
    let odd = &w.laplacian() + &directional(grid, &g, &w);
    f.axpy(state.odd_sign, &odd)
}

/// Forcing `F̃` of the split form `u_t = −F̃ − a∇(π − σρω)`:
///
/// `F̃ = (u·∇)u + σ((∇log ρ·∇)u⊥ + ω∇log ρ)`,
///
/// obtained from `Δu⊥ = −∇ω` for divergence-free `u`. It contains no
/// second derivatives of `u`.
pub fn split_forcing<T: Real>(state: &FlowState<T>, density: &Density<T>) -> SpectralVector<T> {
    let grid = state.grid();
    let u = &state.u;
    let (u1, u2) = (phys(&u.x1), phys(&u.x2));
    let transport = |f: &SpectralScalar<T>| {
        sum_of_products(grid, &[(&u1, &phys(&f.d1())), (&u2, &phys(&f.d2()))])
    };
    let f = SpectralVector::new(transport(&u.x1), transport(&u.x2)).expect("common grid");
    if state.odd_sign == T::zero() {
        return f;
    }
    let g = (phys(&density.log_rho.d1()), phys(&density.log_rho.d2()));
    let w = u.perp();
    let omega = phys(&state.vorticity());
    let odd = SpectralVector::new(
        sum_of_products(grid, &[(&g.0, &phys(&w.x1.d1())), (&g.1, &phys(&w.x1.d2())), (&omega, &g.0)]),
        sum_of_products(grid, &[(&g.0, &phys(&w.x2.d1())), (&g.1, &phys(&w.x2.d2())), (&omega, &g.1)]),
    )
    .expect("common grid");
    f.axpy(state.odd_sign, &odd)
}

/// `𝐏(a v)` componentwise for grid samples `a`.
pub(crate) fn weighted<T: Real>(a: &PhysicalField<T>, v: &SpectralVector<T>) -> SpectralVector<T> {
    let grid = v.grid();
    SpectralVector::new(
        sum_of_products(grid, &[(a, &phys(&v.x1))]),
        sum_of_products(grid, &[(a, &phys(&v.x2))]),
    )
    .expect("common grid")
}

/// `−F − 𝐏(a∇π)` from a precomputed forcing.
pub fn momentum_rhs_with<T: Real>(
    density: &Density<T>,
    forcing: &SpectralVector<T>,
    grad_pi: &SpectralVector<T>,
) -> SpectralVector<T> {
    -&(forcing + &weighted(&density.inv_rho_phys, grad_pi))
}

/// `u_t = −(u·∇)u − (1/ρ)∇π − σ[Δu⊥ + (∇log ρ·∇)u⊥] − (ε/ρ)Δ²u`.
pub fn momentum_rhs<T: Real>(state: &FlowState<T>, grad_pi: &SpectralVector<T>) -> Result<SpectralVector<T>> {
    state.grid().check_same(grad_pi.grid())?;
    let density = Density::of(state)?;
    let forcing = velocity_forcing(state, &density);
    Ok(momentum_rhs_with(&density, &forcing, grad_pi))
}

/// `θ_t = −u·∇θ + ½∇⊥ρ·∇|u|² + σ𝓑(∇u, ∇²ρ) − εΔ²ω`.
pub fn theta_rhs<T: Real>(state: &FlowState<T>) -> SpectralScalar<T> {
    let grid = state.grid();
    let gu = good_unknowns(state);
    let (u1, u2) = (phys(&state.u.x1), phys(&state.u.x2));
    let transport = sum_of_products(
        grid,
        &[(&u1, &phys(&gu.theta.d1())), (&u2, &phys(&gu.theta.d2()))],
    );
    let mut rhs = &trilinear_t(state).scale(T::lit(0.5)) - &transport;
    if state.odd_sign != T::zero() {
        rhs = rhs.axpy(state.odd_sign, &b_form(&state.u, &state.rho));
    }
    if state.epsilon != T::zero() {
        rhs = rhs.axpy(-state.epsilon, &gu.omega.bilaplacian());
    }
    rhs
}

fn omega_common<T: Real>(
    state: &FlowState<T>,
    density: &Density<T>,
    drift: &SpectralVector<T>,
    pressure_term: &SpectralVector<T>,
) -> SpectralScalar<T> {
    let grid = state.grid();
    let omega = state.vorticity();
    let ap = density.inv_rho.perp_gradient();
    let (ap1, ap2) = (phys(&ap.x1), phys(&ap.x2));
    let (d1, d2) = (phys(&drift.x1), phys(&drift.x2));
    let (w1, w2) = (phys(&omega.d1()), phys(&omega.d2()));
    let (p1, p2) = (phys(&pressure_term.x1), phys(&pressure_term.x2));
    let mut rhs = -&sum_of_products(grid, &[(&d1, &w1), (&d2, &w2), (&ap1, &p1), (&ap2, &p2)]);
    if state.odd_sign != T::zero() {
        rhs = rhs.axpy(-state.odd_sign, &b_form(&state.u, &density.log_rho));
    }
    if state.epsilon != T::zero() {
        let b = state.u.bilaplacian();
        let visc = sum_of_products(
            grid,
            &[
                (&density.inv_rho_phys, &phys(&omega.bilaplacian())),
                (&ap1, &phys(&b.x1)),
                (&ap2, &phys(&b.x2)),
            ],
        );
        rhs = rhs.axpy(-state.epsilon, &visc);
    }
    rhs
}

/// `ω_t = −(u − σ∇⊥log ρ)·∇ω − ∇⊥a·∇(π − σρω) − σ𝓑(∇u, ∇²log ρ)
///        − ε a Δ²ω − ε ∇⊥a·Δ²u`, with `a = 1/ρ`.
pub fn omega_rhs<T: Real>(state: &FlowState<T>, pressure: &PressureSolution<T>) -> Result<SpectralScalar<T>> {
    state.grid().check_same(pressure.grad_pi.grid())?;
    let density = Density::of(state)?;
    let drift = state
        .u
        .axpy(-state.odd_sign, &density.log_rho.perp_gradient());
    Ok(omega_common(state, &density, &drift, &pressure.grad_pi_minus_rho_omega))
}

/// Curl of the momentum equation before the cancellation:
/// `ω_t = −u·∇ω − ∇⊥a·∇π − σ𝓑(∇u, ∇²log ρ) − ε(aΔ²ω + ∇⊥a·Δ²u)`.
pub fn omega_rhs_raw<T: Real>(state: &FlowState<T>, pressure: &PressureSolution<T>) -> Result<SpectralScalar<T>> {
    state.grid().check_same(pressure.grad_pi.grid())?;
    let density = Density::of(state)?;
    Ok(omega_common(state, &density, &state.u, &pressure.grad_pi))
}

fn relative_gap<T: Real>(a: &SpectralScalar<T>, b: &SpectralScalar<T>) -> T {
    let scale = T::max(T::max(a.l2_norm(), b.l2_norm()), T::one());
    (a - b).l2_norm() / scale
}

/// Compares [`theta_rhs`] with `θ_t` obtained from `ρ_t = −∇·((ρ−1)u)`,
/// `u_t` = [`momentum_rhs`] and the product rule on `θ = curl(ρu) − σΔρ`.
pub fn residual_theta<T: Real>(state: &FlowState<T>, grad_pi: &SpectralVector<T>) -> Result<T> {
    let grid = state.grid();
    let a = theta_rhs(state);
    let ut = momentum_rhs(state, grad_pi)?;
    let (r, u1, u2) = (phys(&state.rho), phys(&state.u.x1), phys(&state.u.x2));
    let rho_t = -&SpectralVector::new(
        sum_of_products(grid, &[(&r, &u1)]),
        sum_of_products(grid, &[(&r, &u2)]),
    )
    .expect("common grid")
    .divergence();
    let rho = state.rho_physical();
    let rt = phys(&rho_t);
    let m_t = SpectralVector::new(
        sum_of_products(grid, &[(&rt, &u1), (&rho, &phys(&ut.x1))]),
        sum_of_products(grid, &[(&rt, &u2), (&rho, &phys(&ut.x2))]),
    )
    .expect("common grid");
    let b = m_t.curl().axpy(-state.odd_sign, &rho_t.laplacian());
    Ok(relative_gap(&a, &b))
}

/// Compares [`omega_rhs`] with the curl of [`momentum_rhs`].
pub fn residual_omega<T: Real>(state: &FlowState<T>, pressure: &PressureSolution<T>) -> Result<T> {
    let a = omega_rhs(state, pressure)?;
    let b = momentum_rhs(state, &pressure.grad_pi)?.curl();
    Ok(relative_gap(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::solve_pressure;
    use crate::random::{random_scalar, random_velocity};
    use crate::spectral::Grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shear_state(n: usize, eps: f64) -> FlowState<f64> {
        let g = Grid::<f64>::new(n).unwrap();
        let mut u2 = SpectralScalar::zeros(&g);
        u2.set_mode(1, 0, num_complex::Complex::new(0.0, -0.5));
        let u = SpectralVector::new(SpectralScalar::zeros(&g), u2).unwrap();
        FlowState::homogeneous(u, eps, 1.0).unwrap()
    }

    #[test]
    fn momentum_examples() {
        let s = shear_state(32, 0.0);
        let p = solve_pressure(&s).unwrap();
        assert!(momentum_rhs(&s, &p.grad_pi).unwrap().l2_norm() < 1e-12);

        let s = shear_state(32, 0.1);
        let p = solve_pressure(&s).unwrap();
        let ut = momentum_rhs(&s, &p.grad_pi).unwrap();
        assert!((&ut + &s.u.scale(0.1)).l2_norm() < 1e-12);

        let g = Grid::<f64>::new(32).unwrap();
        let r = SpectralScalar::from_fn(&g, |x, y| 0.3 * (x + y).cos());
        let s = FlowState::new(r, SpectralVector::zeros(&g), 0.01, 1.0).unwrap();
        let p = solve_pressure(&s).unwrap();
        assert_eq!(momentum_rhs(&s, &p.grad_pi).unwrap().l2_norm(), 0.0);
    }

    #[test]
    fn theta_examples() {
        let s = shear_state(32, 0.0);
        assert!(theta_rhs(&s).l2_norm() < 1e-12);

        let s = shear_state(32, 0.1);
        let expected = SpectralScalar::from_fn(s.grid(), |x, _| -0.1 * x.cos());
        assert!((&theta_rhs(&s) - &expected).l2_norm() < 1e-12);

        let g = Grid::<f64>::new(32).unwrap();
        let r = SpectralScalar::from_fn(&g, |x, _| 0.4 * x.sin());
        let s = FlowState::new(r, SpectralVector::zeros(&g), 0.0, 1.0).unwrap();
        assert_eq!(theta_rhs(&s).l2_norm(), 0.0);
    }

    #[test]
    fn omega_examples() {
        let s = shear_state(32, 0.0);
        let p = solve_pressure(&s).unwrap();
        assert!(omega_rhs(&s, &p).unwrap().l2_norm() < 1e-12);
        let s = shear_state(32, 0.1);
        let p = solve_pressure(&s).unwrap();
        let expected = SpectralScalar::from_fn(s.grid(), |x, _| -0.1 * x.cos());
        assert!((&omega_rhs(&s, &p).unwrap() - &expected).l2_norm() < 1e-12);
    }

    #[test]
    fn split_and_raw_vorticity_forms_agree() {
        let g = Grid::<f64>::new(128).unwrap();
        for seed in 0..4 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = random_scalar(&g, 6, 0.5, &mut rng);
            let u = random_velocity(&g, 6, 1.0, &mut rng).unwrap();
            for sigma in [-1.0, 0.0, 1.0] {
                let s = FlowState::new(r.clone(), u.clone(), 1e-3, sigma).unwrap();
                let p = solve_pressure(&s).unwrap();
                let a = omega_rhs(&s, &p).unwrap();
                let b = omega_rhs_raw(&s, &p).unwrap();
                assert!(relative_gap(&a, &b) < 1e-10, "seed {seed} sigma {sigma}");
            }
        }
    }

    #[test]
    fn residuals_small_on_resolved_states() {
        let g = Grid::<f64>::new(128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = random_scalar(&g, 6, 0.5, &mut rng);
        let u = random_velocity(&g, 6, 1.0, &mut rng).unwrap();
        for eps in [0.0, 1e-2] {
            let s = FlowState::new(r.clone(), u.clone(), eps, 1.0).unwrap();
            let p = solve_pressure(&s).unwrap();
            assert!(residual_theta(&s, &p.grad_pi).unwrap() < 1e-10);
            assert!(residual_omega(&s, &p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn omega_residual_detects_a_wrong_split() {
        let g = Grid::<f64>::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = random_scalar(&g, 4, 0.5, &mut rng);
        let u = random_velocity(&g, 4, 1.0, &mut rng).unwrap();
        let s = FlowState::new(r, u, 0.0, 1.0).unwrap();
        let mut p = solve_pressure(&s).unwrap();
        assert!(residual_omega(&s, &p).unwrap() < 1e-8);
        p.grad_pi_minus_rho_omega = p.grad_pi_minus_rho_omega.scale(1.01);
        assert!(residual_omega(&s, &p).unwrap() > 1e-5);
    }
}
