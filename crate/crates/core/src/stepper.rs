//! Explicit fourth-order Runge–Kutta integration of `(ρ, u)` with an
//! exponential integrating factor for the constant-coefficient part `εΔ²u`.
//!
//! Each stage solves for `q = π − σρω` rather than `π`, so that the odd term
//! enters only through first derivatives of `u` (see
//! [`split_forcing`](crate::dynamics::split_forcing)); carrying `σΔu⊥`
//! explicitly and cancelling it through the pressure is unstable once
//! `dt|k|²` exceeds the RK4 stability interval. The viscous term is split as
//! `−εΔ²u − ε(a−1)Δ²u`, the first handled by the factor and the second
//! explicit, and `ρ_t = −∇·((ρ−1)u)`. States and stage derivatives are kept
//! inside the dealiased band, and the velocity is re-projected onto
//! divergence-free fields at the end of every step.

use crate::dynamics::{phys, split_forcing, weighted, Density, FlowState, DEFAULT_VACUUM_FLOOR};
use crate::error::{Error, Result};
use crate::pressure::{pressure_potential, SolverOptions};
use crate::real::Real;
use crate::spectral::{leray_project, SpectralScalar, SpectralVector};

/// Upper bound returned by [`cfl_dt`] for states with nothing to resolve.
pub const DT_CAP: f64 = 1e6;
pub const DEFAULT_CFL_SAFETY: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheme {
    /// Integrating-factor RK4 (Lawson).
    #[default]
    Erk4If,
}

#[derive(Clone, Debug)]
pub struct StepperConfig<T: Real> {
    /// Fixed step; `None` recomputes `cfl_safety · cfl_dt` every step.
    pub dt: Option<T>,
    pub scheme: Scheme,
    pub cfl_safety: T,
    pub t_end: T,
    pub vacuum_floor: T,
    pub pressure: SolverOptions<T>,
    /// Observers are called every `observe_every` steps and at the end.
    pub observe_every: usize,
}

impl<T: Real> StepperConfig<T> {
    pub fn new(t_end: T) -> Self {
        Self {
            dt: None,
            scheme: Scheme::Erk4If,
            cfl_safety: T::lit(DEFAULT_CFL_SAFETY),
            t_end,
            vacuum_floor: T::lit(DEFAULT_VACUUM_FLOOR),
            pressure: SolverOptions::default(),
            observe_every: 1,
        }
    }

    pub fn with_dt(mut self, dt: T) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt > T::zero()) || !dt.is_finite() {
                return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "t_end must be finite and >= 0, got {}",
                self.t_end
            )));
        }
        if !(self.cfl_safety > T::zero() && self.cfl_safety <= T::one()) {
            return Err(Error::InvalidArgument(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        if !(self.vacuum_floor > T::zero()) {
            return Err(Error::InvalidArgument("vacuum_floor must be positive".into()));
        }
        Ok(())
    }
}

/// `exp(−ε|k|⁴ dt)`.
pub fn linear_factor<T: Real>(k1: T, k2: T, dt: T, epsilon: T) -> T {
    let k2s = k1 * k1 + k2 * k2;
    (-epsilon * k2s * k2s * dt).exp()
}

fn propagate<T: Real>(u: &SpectralVector<T>, dt: T, epsilon: T) -> SpectralVector<T> {
    if epsilon == T::zero() {
        return u.clone();
    }
    u.apply_multiplier(move |k1, k2| num_complex::Complex::new(linear_factor(k1, k2, dt, epsilon), T::zero()))
}

/// Stable step bound
/// `min(1/(k_max(‖u‖∞ + ‖∇⊥log ρ‖∞)), ρ_*/(ε k_max⁴ max|1/ρ − 1|))`
/// with `k_max = n/2`, capped at [`DT_CAP`]. No safety factor applied.
pub fn cfl_dt<T: Real>(state: &FlowState<T>) -> Result<T> {
    let density = Density::of(state)?;
    Ok(cfl_dt_with(state, &density))
}

fn cfl_dt_with<T: Real>(state: &FlowState<T>, density: &Density<T>) -> T {
    let k_max = T::count(state.grid().n()) / T::lit(2.0);
    let speed = state.u.magnitude().max_abs();
    let lg = density.log_rho.perp_gradient().magnitude().max_abs();
    let tiny = T::min_positive_value();
    let mut dt = T::one() / (k_max * (speed + lg) + tiny);
    if state.epsilon > T::zero() {
        let dev = density.inv_rho_phys.map(|a| (a - T::one()).mag()).max();
        let k4 = k_max.powi(4);
        dt = dt.min(density.min / (state.epsilon * k4 * dev + tiny));
    }
    dt.min(T::lit(DT_CAP))
}

/// Per-step metadata passed to observers.
#[derive(Clone, Copy, Debug)]
pub struct StepInfo<T> {
    pub step: usize,
    pub dt: T,
    /// Largest PCG iteration count over the stages of the last step.
    pub pressure_iterations: usize,
}

/// Receives snapshots during [`run`].
pub trait Observer<T: Real> {
    fn observe(&mut self, state: &FlowState<T>, info: &StepInfo<T>) -> Result<()>;
}

impl<T: Real, F: FnMut(&FlowState<T>, &StepInfo<T>) -> Result<()>> Observer<T> for F {
    fn observe(&mut self, state: &FlowState<T>, info: &StepInfo<T>) -> Result<()> {
        self(state, info)
    }
}

/// Integrator state carried between steps: the last pressure seeds the next
/// conjugate-gradient solve.
#[derive(Clone, Debug, Default)]
pub struct Stepper<T: Real> {
    guess: Option<SpectralScalar<T>>,
    last_iterations: usize,
}

struct Stage<T: Real> {
    du: SpectralVector<T>,
    drho: SpectralScalar<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new() -> Self {
        Self {
            guess: None,
            last_iterations: 0,
        }
    }

    /// Largest PCG iteration count in the most recent step.
    pub fn last_pressure_iterations(&self) -> usize {
        self.last_iterations
    }

    fn stage(&mut self, state: &FlowState<T>, config: &StepperConfig<T>) -> Result<Stage<T>> {
        let density = Density::new(&state.rho, config.vacuum_floor, state.t)?;
        let mut forcing = split_forcing(state, &density);
        if state.epsilon != T::zero() {
            let dev = density.inv_rho_phys.map(|a| a - T::one());
            forcing = forcing.axpy(state.epsilon, &weighted(&dev, &state.u.bilaplacian()));
        }
        let cg = pressure_potential(&density, &forcing, config.pressure, self.guess.as_ref())?;
        self.last_iterations = self.last_iterations.max(cg.iterations);
        let grad_pi = cg.potential.gradient();
        self.guess = Some(cg.potential);
        let du = -&(&forcing + &weighted(&density.inv_rho_phys, &grad_pi));
        let r = phys(&state.rho);
        let flux = weighted(&r, &state.u);
        let drho = -&flux.divergence();
        if !du.is_finite() || !drho.is_finite() {
            return Err(Error::NonFinite {
                t: state.t.as_f64(),
                quantity: "stage derivative",
            });
        }
        Ok(Stage {
            du: du.dealiased(),
            drho: drho.dealiased(),
        })
    }

    /// One step of length `dt`.
    pub fn step(&mut self, state: &FlowState<T>, dt: T, config: &StepperConfig<T>) -> Result<FlowState<T>> {
        let Scheme::Erk4If = config.scheme;
        self.last_iterations = 0;
        let eps = state.epsilon;
        let half = dt / T::lit(2.0);
        let sixth = dt / T::lit(6.0);
        let at = |t: T, rho: SpectralScalar<T>, u: SpectralVector<T>| FlowState {
            t,
            rho,
            u,
            ..state.clone()
        };

        // Modes outside the dealiased band carry no pressure and would see
        // the odd term as an undamped |k|² dispersion.
        let state = &state.dealiased();
        let k1 = self.stage(state, config)?;
        let e_half_u = propagate(&state.u, half, eps);
        let u2 = propagate(&state.u.axpy(half, &k1.du), half, eps);
        let s2 = at(state.t + half, state.rho.axpy(half, &k1.drho), u2);
        let k2 = self.stage(&s2, config)?;
        let u3 = e_half_u.axpy(half, &k2.du);
        let s3 = at(state.t + half, state.rho.axpy(half, &k2.drho), u3);
        let k3 = self.stage(&s3, config)?;
        let u4 = propagate(&state.u, dt, eps).axpy(dt, &propagate(&k3.du, half, eps));
        let s4 = at(state.t + dt, state.rho.axpy(dt, &k3.drho), u4);
        let k4 = self.stage(&s4, config)?;

        let mid = &k2.du + &k3.du;
        let u = propagate(&state.u.axpy(sixth, &k1.du), dt, eps)
            .axpy(T::lit(2.0) * sixth, &propagate(&mid, half, eps))
            .axpy(sixth, &k4.du);
        let rho_sum = &(&k1.drho + &k4.drho) + &(&k2.drho + &k3.drho).scale(T::lit(2.0));
        let rho = state.rho.axpy(sixth, &rho_sum);
        let (u, _) = leray_project(&u);

        let next = at(state.t + dt, rho, u);
        if !next.is_finite() {
            return Err(Error::NonFinite {
                t: next.t.as_f64(),
                quantity: "state",
            });
        }
        Density::new(&next.rho, config.vacuum_floor, next.t)?;
        Ok(next)
    }
}

/// Outcome of [`run`].
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub state: FlowState<T>,
    pub steps: usize,
    pub dt_min: T,
    pub dt_max: T,
}

/// Integrates from `initial` to `config.t_end`, calling every observer on
/// the initial state, every `observe_every` steps and on the final state.
/// The last step is shortened to land exactly on `t_end`.
pub fn run<T: Real>(
    initial: &FlowState<T>,
    config: &StepperConfig<T>,
    observers: &mut [&mut dyn Observer<T>],
) -> Result<Trajectory<T>> {
    config.validate()?;
    let mut state = initial.clone();
    let t_end = config.t_end;
    let mut stepper = Stepper::new();
    let mut steps = 0;
    let (mut dt_min, mut dt_max) = (T::infinity(), T::zero());
    let every = config.observe_every.max(1);
    let mut info = StepInfo {
        step: 0,
        dt: T::zero(),
        pressure_iterations: 0,
    };
    for obs in observers.iter_mut() {
        obs.observe(&state, &info)?;
    }
    let mut observed_last = true;
    while state.t < t_end {
        let nominal = match config.dt {
            Some(dt) => dt,
            None => {
                let density = Density::new(&state.rho, config.vacuum_floor, state.t)?;
                config.cfl_safety * cfl_dt_with(&state, &density)
            }
        };
        let remaining = t_end - state.t;
        // Avoid a sliver step from accumulated roundoff in t.
        let dt = if remaining <= nominal * (T::one() + T::lit(1e-9)) {
            remaining
        } else {
            nominal
        };
        let mut next = stepper.step(&state, dt, config)?;
        if dt == remaining {
            next.t = t_end;
        }
        state = next;
        steps += 1;
        dt_min = dt_min.min(dt);
        dt_max = dt_max.max(dt);
        info = StepInfo {
            step: steps,
            dt,
            pressure_iterations: stepper.last_pressure_iterations(),
        };
        observed_last = steps % every == 0;
        if observed_last {
            for obs in observers.iter_mut() {
                obs.observe(&state, &info)?;
            }
        }
    }
    if !observed_last {
        for obs in observers.iter_mut() {
            obs.observe(&state, &info)?;
        }
    }
    if steps == 0 {
        dt_min = T::zero();
    }
    Ok(Trajectory {
        state,
        steps,
        dt_min,
        dt_max,
    })
}

/// Number of equal steps of size at most `dt` covering `[0, t_end]`, and
/// the resulting step.
pub fn uniform_steps<T: Real>(t_end: T, dt: T) -> (usize, T) {
    if t_end == T::zero() {
        return (0, T::zero());
    }
    let k = (t_end / dt).ceil().to_usize().unwrap_or(1).max(1);
    (k, t_end / T::count(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_scalar, random_velocity};
    use crate::spectral::Grid;
    use num_complex::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shear(n: usize, eps: f64) -> FlowState<f64> {
        let g = Grid::<f64>::new(n).unwrap();
        let mut u2 = SpectralScalar::zeros(&g);
        u2.set_mode(1, 0, Complex::new(0.0, -0.5));
        let u = SpectralVector::new(SpectralScalar::zeros(&g), u2).unwrap();
        FlowState::homogeneous(u, eps, 1.0).unwrap()
    }

    #[test]
    fn linear_factor_examples() {
        assert_eq!(linear_factor(3.0f64, -2.0, 0.5, 0.0), 1.0);
        assert!((linear_factor(1.0, 0.0, 1.0, 0.1) - (-0.1f64).exp()).abs() < 1e-16);
        assert!((linear_factor(1.0f64, 0.0, 1.0, 0.1) - 0.904837).abs() < 1e-6);
        assert_eq!(linear_factor(0.0f64, 0.0, 1.0, 0.1), 1.0);
    }

    #[test]
    fn steady_shear_is_unchanged() {
        let s = shear(32, 0.0);
        let cfg = StepperConfig::new(1.0);
        let mut st = Stepper::new();
        let next = st.step(&s, 0.05, &cfg).unwrap();
        assert!((&next.u - &s.u).l2_norm() < 1e-10);
        assert_eq!(next.rho.max_abs_coeff(), 0.0);
    }

    #[test]
    fn single_mode_decay() {
        let s = shear(32, 0.1);
        let cfg = StepperConfig::new(1.0);
        let next = Stepper::new().step(&s, 0.01, &cfg).unwrap();
        let expected = s.u.scale((-0.001f64).exp());
        assert!((&next.u - &expected).l2_norm() < 1e-9);
    }

    #[test]
    fn zero_velocity_is_stationary() {
        let g = Grid::<f64>::new(32).unwrap();
        let mut r = SpectralScalar::zeros(&g);
        r.set_mode(1, 1, Complex::new(0.15, 0.0));
        let s = FlowState::new(r.clone(), SpectralVector::zeros(&g), 0.0, 1.0).unwrap();
        let next = Stepper::new().step(&s, 0.1, &StepperConfig::new(1.0)).unwrap();
        assert_eq!((&next.rho - &r).max_abs_coeff(), 0.0);
        assert_eq!(next.u.l2_norm(), 0.0);
    }

    #[test]
    fn cfl_examples() {
        let g = Grid::<f64>::new(128).unwrap();
        let s = FlowState::homogeneous(SpectralVector::zeros(&g), 0.0, 1.0).unwrap();
        assert_eq!(cfl_dt(&s).unwrap(), DT_CAP);
        let s = shear(128, 0.0);
        assert!((cfl_dt(&s).unwrap() - 1.0 / 64.0).abs() < 1e-12);
        let s2 = shear(256, 0.0);
        assert!((cfl_dt(&s2).unwrap() - 0.5 * cfl_dt(&s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn run_examples() {
        let s = shear(32, 0.0);
        let cfg = StepperConfig::new(0.0);
        let mut seen = Vec::new();
        let mut obs = |st: &FlowState<f64>, _: &StepInfo<f64>| {
            seen.push(st.t);
            Ok(())
        };
        let tr = run(&s, &cfg, &mut [&mut obs]).unwrap();
        assert_eq!(tr.steps, 0);
        assert_eq!(seen, vec![0.0]);

        let cfg = StepperConfig::new(1.0);
        let tr = run(&s, &cfg, &mut []).unwrap();
        assert_eq!(tr.state.t, 1.0);
        assert!((&tr.state.u - &s.u).l2_norm() <= 1e-8);
    }

    #[test]
    fn observer_cadence_and_clamping() {
        let s = shear(16, 0.0);
        let mut cfg = StepperConfig::new(1.0).with_dt(0.3);
        cfg.observe_every = 2;
        let mut seen = Vec::new();
        let mut obs = |st: &FlowState<f64>, i: &StepInfo<f64>| {
            seen.push((i.step, st.t));
            Ok(())
        };
        let tr = run(&s, &cfg, &mut [&mut obs]).unwrap();
        assert_eq!(tr.steps, 4);
        assert!((tr.dt_min - 0.1).abs() < 1e-12);
        let steps: Vec<usize> = seen.iter().map(|p| p.0).collect();
        assert_eq!(steps, vec![0, 2, 4]);
        assert_eq!(seen.last().unwrap().1, 1.0);
    }

    #[test]
    fn mean_density_and_divergence_preserved() {
        let g = Grid::<f64>::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_scalar(&g, 5, 0.4, &mut rng);
        let u = random_velocity(&g, 5, 1.0, &mut rng).unwrap();
        let s = FlowState::new(r, u, 1e-4, 1.0).unwrap();
        let cfg = StepperConfig::new(0.05).with_dt(0.01);
        let tr = run(&s, &cfg, &mut []).unwrap();
        assert!((tr.state.rho.mean() - s.rho.mean()).abs() < 1e-13);
        assert!(crate::dynamics::relative_divergence(&tr.state.u) < 1e-13);
    }

    #[test]
    fn vacuum_aborts_with_time() {
        let g = Grid::<f64>::new(32).unwrap();
        let r = SpectralScalar::from_fn(&g, |x, _| -0.9 * x.cos());
        let u = SpectralVector::from_fns(&g, |_, _| 1.0, |_, _| 0.0);
        let s = FlowState::new(r, u, 0.0, 0.0).unwrap();
        let mut cfg = StepperConfig::new(1.0).with_dt(0.1);
        cfg.vacuum_floor = 0.2;
        match run(&s, &cfg, &mut []) {
            Err(Error::Vacuum { t, .. }) => assert!(t >= 0.0),
            other => panic!("expected vacuum abort, got {other:?}"),
        }
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(StepperConfig::<f64>::new(-1.0).validate().is_err());
        assert!(StepperConfig::<f64>::new(1.0).with_dt(0.0).validate().is_err());
    }

    #[test]
    fn split_stage_matches_momentum_rhs() {
        use crate::dynamics::momentum_rhs;
        use crate::pressure::solve_pressure;
        let g = Grid::<f64>::new(128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let r = random_scalar(&g, 6, 0.5, &mut rng);
        let u = random_velocity(&g, 6, 1.0, &mut rng).unwrap();
        for (eps, sigma) in [(0.0, 1.0), (1e-3, -1.0), (1e-3, 0.0)] {
            let s = FlowState::new(r.clone(), u.clone(), eps, sigma).unwrap();
            let stage = Stepper::new().stage(&s, &StepperConfig::new(1.0)).unwrap();
            let du = stage.du.axpy(-eps, &s.u.bilaplacian());
            let p = solve_pressure(&s).unwrap();
            let reference = momentum_rhs(&s, &p.grad_pi).unwrap();
            let gap = (&du - &reference).l2_norm() / reference.l2_norm();
            assert!(gap < 1e-9, "eps {eps} sigma {sigma}: {gap}");
        }
    }
}
