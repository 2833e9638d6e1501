//! Identity suites on seeded random states. Each suite is its own oracle:
//! it compares two assemblies of the same quantity, or checks an exact
//! identity or inequality.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{odd_stress_divergence, residual_omega, residual_theta, FlowState};
use crate::error::Result;
use crate::littlewood_paley::{sobolev_norm_vector, DyadicPartition, SobolevBackend};
use crate::pressure::{pressure_split_via_phi, solve_elliptic, solve_pressure, DEFAULT_MAX_ITER};
use crate::random::{random_scalar, random_velocity};
use crate::spectral::{Grid, SpectralScalar, SpectralVector};

pub const PARTITION_TOL: f64 = 1e-12;
pub const BONY_TOL: f64 = 1e-12;
pub const SKEW_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const SPLIT_TOL: f64 = 1e-8;
pub const LAX_MILGRAM_SLACK: f64 = 1e-9;

/// Amplitude of `ρ − 1` in the random states.
pub const STATE_RHO_AMPLITUDE: f64 = 0.3;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    /// Largest measured defect (for the Lax–Milgram suite, `ratio − 1`).
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteResult {
    fn new(name: &'static str, defects: &[f64], tolerance: f64) -> Self {
        let worst = defects.iter().copied().fold(0.0, f64::max);
        let finite = defects.iter().all(|d| d.is_finite());
        Self {
            name,
            cases: defects.len(),
            worst,
            tolerance,
            passed: finite && worst <= tolerance,
        }
    }
}

impl std::fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<14} cases={:<4} worst={:.3e} tol={:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub n: usize,
    pub seed: u64,
    pub cases: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n: 64,
            seed: 0,
            cases: 20,
        }
    }
}

/// Band of the random states: well inside the dealiased range so that the
/// residual suites measure identities rather than truncation.
pub fn state_band(n: usize) -> i64 {
    ((n / 32) as i64).max(2)
}

/// Random state number `case` of the stream started at `seed`.
pub fn random_state(grid: &Arc<Grid<f64>>, band: i64, seed: u64, case: usize) -> Result<FlowState<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(case as u64));
    let rho = random_scalar(grid, band, STATE_RHO_AMPLITUDE, &mut rng);
    let u = random_velocity(grid, band, 1.0, &mut rng)?;
    FlowState::new(rho, u, 0.0, 1.0)
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn partition_suite(grid: &Arc<Grid<f64>>) -> SuiteResult {
    let defect = DyadicPartition::new(grid).partition_defect();
    SuiteResult::new("partition", &[defect], PARTITION_TOL)
}

/// `uv = T_u v + T_v u + R(u, v)` relative to `‖uv‖`.
pub fn bony_suite(grid: &Arc<Grid<f64>>, seed: u64, cases: usize) -> Result<SuiteResult> {
    let p = DyadicPartition::new(grid);
    let band = (grid.dealias_cutoff() as i64 / 2).max(1);
    let mut r = rng(seed, 1);
    let mut defects = Vec::with_capacity(cases);
    for _ in 0..cases {
        let u = random_scalar(grid, band, 1.0, &mut r);
        let v = random_scalar(grid, band, 1.0, &mut r);
        let uv = u.dealiased_product(&v)?;
        let sum = &(&p.paraproduct(&u, &v)? + &p.paraproduct(&v, &u)?) + &p.remainder(&u, &v)?;
        defects.push((&sum - &uv).l2_norm() / uv.l2_norm());
    }
    Ok(SuiteResult::new("bony", &defects, BONY_TOL))
}

/// `|⟨∇·(ρ∇u⊥), u⟩| / ‖u‖²_{H¹}`.
pub fn skew_suite(grid: &Arc<Grid<f64>>, seed: u64, cases: usize) -> Result<SuiteResult> {
    let band = state_band(grid.n());
    let mut defects = Vec::with_capacity(cases);
    for case in 0..cases {
        let s = random_state(grid, band, seed ^ 2, case)?;
        let ip = odd_stress_divergence(&s).inner(&s.u)?;
        let h1 = sobolev_norm_vector(&s.u, 1.0, SobolevBackend::Multiplier);
        defects.push(ip.abs() / (h1 * h1));
    }
    Ok(SuiteResult::new("skew", &defects, SKEW_TOL))
}

/// `residual_theta` and `residual_omega` over the random states.
pub fn residual_suites(grid: &Arc<Grid<f64>>, band: i64, seed: u64, cases: usize) -> Result<[SuiteResult; 2]> {
    let (mut th, mut om) = (Vec::with_capacity(cases), Vec::with_capacity(cases));
    for case in 0..cases {
        let s = random_state(grid, band, seed ^ 3, case)?;
        let p = solve_pressure(&s)?;
        th.push(residual_theta(&s, &p.grad_pi)?);
        om.push(residual_omega(&s, &p)?);
    }
    Ok([
        SuiteResult::new("residual_theta", &th, RESIDUAL_TOL),
        SuiteResult::new("residual_omega", &om, RESIDUAL_TOL),
    ])
}

/// Direct `∇(π − ρω)` against the Φ assembly, relative.
pub fn split_suite(grid: &Arc<Grid<f64>>, band: i64, seed: u64, cases: usize) -> Result<SuiteResult> {
    let mut defects = Vec::with_capacity(cases);
    for case in 0..cases {
        let s = random_state(grid, band, seed ^ 4, case)?;
        let p = solve_pressure(&s)?;
        let via = pressure_split_via_phi(&s, &p)?;
        let direct = &p.grad_pi_minus_rho_omega;
        defects.push((&via - direct).l2_norm() / direct.l2_norm());
    }
    Ok(SuiteResult::new("pressure_split", &defects, SPLIT_TOL))
}

/// `a_*‖∇Π‖ ≤ ‖F‖` for `a = 1 + ½·noise`; the defect is `ratio − 1`.
pub fn lax_milgram_suite(grid: &Arc<Grid<f64>>, seed: u64, cases: usize) -> Result<SuiteResult> {
    let band = state_band(grid.n()) * 2;
    let mut r = rng(seed, 5);
    let mut defects = Vec::with_capacity(cases);
    for _ in 0..cases {
        let noise = random_scalar(grid, band, 0.5, &mut r);
        let a = &SpectralScalar::constant(grid, 1.0) + &noise;
        let f = SpectralVector::new(
            random_scalar(grid, band, 1.0, &mut r),
            random_scalar(grid, band, 1.0, &mut r),
        )?;
        let sol = solve_elliptic(&a, &f, 1e-12, DEFAULT_MAX_ITER)?;
        defects.push((sol.lax_milgram_ratio - 1.0).max(0.0));
    }
    Ok(SuiteResult::new("lax_milgram", &defects, LAX_MILGRAM_SLACK))
}

/// Every suite on an `n × n` grid.
pub fn run_suites(opts: VerifyOptions) -> Result<Vec<SuiteResult>> {
    let grid = Grid::new(opts.n)?;
    let band = state_band(opts.n);
    let [th, om] = residual_suites(&grid, band, opts.seed, opts.cases)?;
    Ok(vec![
        partition_suite(&grid),
        bony_suite(&grid, opts.seed, opts.cases)?,
        skew_suite(&grid, opts.seed, opts.cases)?,
        th,
        om,
        split_suite(&grid, band, opts.seed, opts.cases)?,
        lax_milgram_suite(&grid, opts.seed, opts.cases)?,
    ])
}
