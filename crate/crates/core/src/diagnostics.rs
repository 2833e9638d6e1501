//! Conservation checks, energy functionals, continuation integrands,
//! twin-run stability functionals and ε-sweeps.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{good_unknowns, residual_omega, residual_theta, FlowState};
use crate::error::{Error, Result};
use crate::littlewood_paley::{sobolev_norm, sobolev_norm_vector, SobolevBackend};
use crate::pressure::{solve_pressure, PressureSolution};
use crate::random::{random_scalar, random_velocity};
use crate::real::Real;
use crate::spectral::{oversampled, Grid, PhysicalField, SpectralScalar, SpectralVector};
use crate::stepper::{cfl_dt, uniform_steps, Observer, StepInfo, Stepper, StepperConfig};

/// Everything recorded at one observation time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord<T> {
    pub t: T,
    /// `‖√ρ u‖²`.
    pub kinetic: T,
    /// `‖ρ − 1‖`.
    pub rho_l2: T,
    pub rho_min: T,
    pub rho_max: T,
    pub energy_e: T,
    pub energy_f: T,
    pub energy_g: T,
    pub m_integrand: T,
    pub mtilde_integrand: T,
    pub theta_residual: T,
    pub omega_residual: T,
    pub pressure_iterations: usize,
}

impl<T: Real> DiagnosticsRecord<T> {
    /// Column names in output order.
    pub const FIELDS: [&'static str; 13] = [
        "t",
        "kinetic",
        "rho_l2",
        "rho_min",
        "rho_max",
        "E",
        "F",
        "G",
        "M_integrand",
        "Mtilde_integrand",
        "theta_residual",
        "omega_residual",
        "pressure_iterations",
    ];

    /// Real-valued columns in the order of [`Self::FIELDS`], without the
    /// trailing iteration count.
    pub fn values(&self) -> [T; 12] {
        [
            self.t,
            self.kinetic,
            self.rho_l2,
            self.rho_min,
            self.rho_max,
            self.energy_e,
            self.energy_f,
            self.energy_g,
            self.m_integrand,
            self.mtilde_integrand,
            self.theta_residual,
            self.omega_residual,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conservation<T> {
    pub kinetic: T,
    pub rho_l2: T,
    pub rho_min: T,
    pub rho_max: T,
}

/// Kinetic energy, `‖ρ−1‖` and the extrema of `ρ`, evaluated on the grid.
pub fn conservation_report<T: Real>(state: &FlowState<T>) -> Conservation<T> {
    let rho = state.rho.to_physical().map(|v| v + T::one());
    let (u1, u2) = (state.u.x1.to_physical(), state.u.x2.to_physical());
    let speed2 = u1.zip_map(&u2, |a, b| a * a + b * b);
    Conservation {
        kinetic: (&rho * &speed2).integral(),
        rho_l2: state.rho.l2_norm(),
        rho_min: rho.min(),
        rho_max: rho.max(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyFunctionals<T> {
    /// `‖ρ−1‖_{H^{s+1}} + ‖u‖_{H^s}`.
    pub e: T,
    /// `‖ρ−1‖ + ‖u‖ + ‖θ‖_{H^{s−1}} + ‖ω‖_{H^{s−1}}`.
    pub f: T,
    /// `‖ρ−1‖²_{H^s} + ‖u‖² + ‖ω‖²_{H^{s−1}} + ‖θ‖²_{H^{s−1}}`.
    pub g: T,
}

impl<T: Real> EnergyFunctionals<T> {
    /// `F / (E(1+E))` and `E / (F(1+F^{s−1}))`; both bounded by an
    /// unspecified constant. `NaN` when a denominator vanishes.
    pub fn equivalence_ratios(&self, s: T) -> (T, T) {
        let (e, f) = (self.e, self.f);
        let a = f / (e * (T::one() + e));
        let b = e / (f * (T::one() + f.powf(s - T::one())));
        (a, b)
    }
}

fn check_index<T: Real>(s: T) -> Result<()> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("Sobolev index must be positive, got {s}")));
    }
    Ok(())
}

/// `E`, `F` and `G` with the multiplier norm `‖(1+|k|²)^{s/2} f̂‖`.
/// Any `s > 0` is accepted; the estimates they come from need `s > 2`.
pub fn energy_functionals<T: Real>(state: &FlowState<T>, s: T) -> Result<EnergyFunctionals<T>> {
    check_index(s)?;
    let m = SobolevBackend::Multiplier;
    let one = T::one();
    let gu = good_unknowns(state);
    let rho_l2 = state.rho.l2_norm();
    let u_l2 = state.u.l2_norm();
    let theta = sobolev_norm(&gu.theta, s - one, m);
    let omega = sobolev_norm(&gu.omega, s - one, m);
    let e = sobolev_norm(&state.rho, s + one, m) + sobolev_norm_vector(&state.u, s, m);
    let f = rho_l2 + u_l2 + theta + omega;
    let rho_s = sobolev_norm(&state.rho, s, m);
    let g = rho_s * rho_s + u_l2 * u_l2 + omega * omega + theta * theta;
    Ok(EnergyFunctionals { e, f, g })
}

fn samples<T: Real>(f: &SpectralScalar<T>, factor: usize) -> Result<PhysicalField<T>> {
    oversampled(f, factor)
}

/// Pointwise Euclidean norm of a list of components, maximised.
fn sup_norm<T: Real>(components: &[SpectralScalar<T>], factor: usize) -> Result<T> {
    let mut acc: Option<PhysicalField<T>> = None;
    for c in components {
        let p = samples(c, factor)?;
        let sq = p.map(|v| v * v);
        acc = Some(match acc {
            None => sq,
            Some(a) => &a + &sq,
        });
    }
    Ok(acc.map_or(T::zero(), |a| a.max().sqrt()))
}

fn gradient_components<T: Real>(v: &SpectralVector<T>) -> [SpectralScalar<T>; 4] {
    [v.x1.d1(), v.x1.d2(), v.x2.d1(), v.x2.d2()]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuationIntegrands<T> {
    /// Uses `‖∇π‖_{L^∞}^{s/(s−1)}`.
    pub m: T,
    /// Uses `‖∇(π − σρω)‖_{L^∞}^{s/(s−1)}` and the exponent `max(2, s−1)`.
    pub mtilde: T,
}

/// `M` and `M̃` with sup-norms on the collocation grid.
pub fn continuation_monitor<T: Real>(
    state: &FlowState<T>,
    pressure: &PressureSolution<T>,
    s: T,
) -> Result<ContinuationIntegrands<T>> {
    continuation_monitor_oversampled(state, pressure, s, 1)
}

/// [`continuation_monitor`] with sup-norms taken on a grid refined by
/// `factor`.
pub fn continuation_monitor_oversampled<T: Real>(
    state: &FlowState<T>,
    pressure: &PressureSolution<T>,
    s: T,
    factor: usize,
) -> Result<ContinuationIntegrands<T>> {
    check_index(s)?;
    if s <= T::one() {
        return Err(Error::InvalidArgument(format!(
            "continuation integrands need s > 1, got {s}"
        )));
    }
    state.grid().check_same(pressure.grad_pi.grid())?;
    let one = T::one();
    let du = sup_norm(&gradient_components(&state.u), factor)?;
    let grad_rho = state.rho.gradient();
    let dr = sup_norm(&[grad_rho.x1, grad_rho.x2], factor)?;
    let lap = sup_norm(&[state.rho.laplacian()], factor)?;
    let gp = &pressure.grad_pi;
    let pi = sup_norm(&[gp.x1.clone(), gp.x2.clone()], factor)?;
    let q = &pressure.grad_pi_minus_rho_omega;
    let split = sup_norm(&[q.x1.clone(), q.x2.clone()], factor)?;
    let p = s / (s - one);
    let common = du * du + dr.powf(s) + lap;
    Ok(ContinuationIntegrands {
        m: common + dr.powf(s - one) * du + pi.powf(p),
        mtilde: common + dr.powf(T::max(T::lit(2.0), s - one)) * du + split.powf(p),
    })
}

/// Full record at the current state (solves the pressure).
pub fn diagnostics_record<T: Real>(state: &FlowState<T>, s: T) -> Result<DiagnosticsRecord<T>> {
    let pressure = solve_pressure(state)?;
    let c = conservation_report(state);
    let e = energy_functionals(state, s)?;
    let m = continuation_monitor(state, &pressure, s)?;
    Ok(DiagnosticsRecord {
        t: state.t,
        kinetic: c.kinetic,
        rho_l2: c.rho_l2,
        rho_min: c.rho_min,
        rho_max: c.rho_max,
        energy_e: e.e,
        energy_f: e.f,
        energy_g: e.g,
        m_integrand: m.m,
        mtilde_integrand: m.mtilde,
        theta_residual: residual_theta(state, &pressure.grad_pi)?,
        omega_residual: residual_omega(state, &pressure)?,
        pressure_iterations: pressure.iterations,
    })
}

/// Observer collecting a [`DiagnosticsRecord`] per observation.
#[derive(Clone, Debug)]
pub struct Recorder<T: Real> {
    pub s: T,
    pub records: Vec<DiagnosticsRecord<T>>,
}

impl<T: Real> Recorder<T> {
    pub fn new(s: T) -> Self {
        Self {
            s,
            records: Vec::new(),
        }
    }
}

impl<T: Real> Observer<T> for Recorder<T> {
    fn observe(&mut self, state: &FlowState<T>, _info: &StepInfo<T>) -> Result<()> {
        self.records.push(diagnostics_record(state, self.s)?);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityRecord<T> {
    pub t: T,
    /// `‖δρ‖² + ‖Δδρ‖² + ‖δu‖² + ‖δω‖²`.
    pub d: T,
    /// `‖δρ‖² + ‖δθ‖² + ‖δu‖² + ‖δω‖²`.
    pub theta: T,
    /// `‖σΔδρ − (δη − δθ)‖ / max(‖σΔδρ‖, 1)`; zero up to roundoff.
    pub identity_defect: T,
}

/// `D`, `Θ` and the definitional defect for two states at equal time.
pub fn stability_record<T: Real>(a: &FlowState<T>, b: &FlowState<T>) -> Result<StabilityRecord<T>> {
    a.grid().check_same(b.grid())?;
    let drho = &b.rho - &a.rho;
    let du = &b.u - &a.u;
    let (ga, gb) = (good_unknowns(a), good_unknowns(b));
    let domega = &gb.omega - &ga.omega;
    let dtheta = &gb.theta - &ga.theta;
    let deta = &gb.eta - &ga.eta;
    let lap = drho.laplacian();
    let sq = |x: T| x * x;
    let base = sq(drho.l2_norm()) + sq(du.l2_norm()) + sq(domega.l2_norm());
    let expected = lap.scale(a.odd_sign);
    let defect = (&expected - &(&deta - &dtheta)).l2_norm() / T::max(expected.l2_norm(), T::one());
    Ok(StabilityRecord {
        t: a.t,
        d: base + sq(lap.l2_norm()),
        theta: base + sq(dtheta.l2_norm()),
        identity_defect: defect,
    })
}

/// Initial perturbation `(δρ₀, δu₀)`, scaled by an amplitude before use.
#[derive(Clone, Debug)]
pub struct Perturbation<T: Real> {
    pub rho: SpectralScalar<T>,
    pub u: SpectralVector<T>,
}

impl<T: Real> Perturbation<T> {
    /// Seeded band-limited `δρ₀` and divergence-free `δu₀`, each of unit
    /// sup-norm bound.
    pub fn random(grid: &Arc<Grid<T>>, band: i64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self {
            rho: random_scalar(grid, band, T::one(), &mut rng),
            u: random_velocity(grid, band, T::one(), &mut rng)?,
        })
    }

    pub fn apply(&self, state: &FlowState<T>, amplitude: T) -> Result<FlowState<T>> {
        let rho = state.rho.axpy(amplitude, &self.rho);
        let u = state.u.axpy(amplitude, &self.u);
        Ok(FlowState::new(rho, u, state.epsilon, state.odd_sign)?.with_time(state.t))
    }
}

/// Step size shared by runs started from `states`: the configured `dt`, or
/// the smallest safe CFL step over the initial states, shrunk so that an
/// integer number of steps lands on `t_end`.
fn common_steps<T: Real>(states: &[&FlowState<T>], config: &StepperConfig<T>) -> Result<(usize, T)> {
    config.validate()?;
    let dt = match config.dt {
        Some(dt) => dt,
        None => {
            let mut dt = T::infinity();
            for s in states {
                dt = dt.min(config.cfl_safety * cfl_dt(s)?);
            }
            dt
        }
    };
    let span = config.t_end - states.first().map_or(T::zero(), |s| s.t);
    Ok(uniform_steps(span.max(T::zero()), dt))
}

/// Runs the base state and its perturbation with identical steps and
/// returns `D` and `Θ` at time zero and every `observe_every` steps.
pub fn twin_run_stability<T: Real>(
    base: &FlowState<T>,
    perturbation: &Perturbation<T>,
    amplitude: T,
    config: &StepperConfig<T>,
) -> Result<Vec<StabilityRecord<T>>> {
    let mut a = base.clone();
    let mut b = perturbation.apply(base, amplitude)?;
    let (steps, dt) = common_steps(&[&a, &b], config)?;
    let every = config.observe_every.max(1);
    let (mut sa, mut sb) = (Stepper::new(), Stepper::new());
    let mut out = vec![stability_record(&a, &b)?];
    for i in 1..=steps {
        a = sa.step(&a, dt, config)?;
        b = sb.step(&b, dt, config)?;
        if i == steps {
            a.t = config.t_end;
            b.t = a.t;
        }
        if i % every == 0 || i == steps {
            out.push(stability_record(&a, &b)?);
        }
    }
    Ok(out)
}

/// Pairwise distances between consecutive final states of an ε-sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable<T> {
    pub epsilons: Vec<T>,
    pub dt: T,
    pub steps: usize,
    /// `‖u_{εᵢ}(T) − u_{εᵢ₊₁}(T)‖`.
    pub u_distances: Vec<T>,
    /// `‖ρ_{εᵢ}(T) − ρ_{εᵢ₊₁}(T)‖`.
    pub rho_distances: Vec<T>,
}

impl<T: Real> SweepTable<T> {
    /// Each `u` distance is below its predecessor times `1 + slack`.
    pub fn is_decreasing(&self, slack: T) -> bool {
        self.u_distances
            .windows(2)
            .all(|w| w[1] <= w[0] * (T::one() + slack))
    }
}

/// Runs `initial` with each `ε` in `epsilons` (non-increasing, `≥ 0`) using
/// one common step size and tabulates the distances between neighbours.
pub fn epsilon_sweep<T: Real>(
    initial: &FlowState<T>,
    epsilons: &[T],
    config: &StepperConfig<T>,
) -> Result<SweepTable<T>> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("epsilon list is empty".into()));
    }
    if epsilons.iter().any(|&e| !(e >= T::zero())) || epsilons.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(
            "epsilon list must be non-increasing and non-negative".into(),
        ));
    }
    let starts = epsilons
        .iter()
        .map(|&e| FlowState {
            epsilon: e,
            ..initial.clone()
        })
        .collect::<Vec<_>>();
    let (steps, dt) = common_steps(&starts.iter().collect::<Vec<_>>(), config)?;
    let mut finals = Vec::with_capacity(starts.len());
    for s in starts {
        let mut stepper = Stepper::new();
        let mut cur = s;
        for _ in 0..steps {
            cur = stepper.step(&cur, dt, config)?;
        }
        finals.push(cur);
    }
    let (mut u_distances, mut rho_distances) = (Vec::new(), Vec::new());
    for w in finals.windows(2) {
        u_distances.push((&w[0].u - &w[1].u).l2_norm());
        rho_distances.push((&w[0].rho - &w[1].rho).l2_norm());
    }
    Ok(SweepTable {
        epsilons: epsilons.to_vec(),
        dt,
        steps,
        u_distances,
        rho_distances,
    })
}
