//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any of them fails.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oddflow::diagnostics::{conservation_report, epsilon_sweep, twin_run_stability, Perturbation};
use oddflow::dynamics::FlowState;
use oddflow::io::verify::{
    bony_suite, lax_milgram_suite, partition_suite, residual_suites, skew_suite, split_suite,
};
use oddflow::io::{density_wave, steady_shear};
use oddflow::littlewood_paley::{DyadicPartition, SobolevBackend, BACKEND_RATIO_BOUNDS};
use oddflow::random::{random_scalar, random_velocity};
use oddflow::spectral::Grid;
use oddflow::stepper::{run, StepInfo, StepperConfig};
use oddflow::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn grid(n: usize) -> Arc<Grid<f64>> {
    Grid::new(n).expect("valid grid")
}

/// Largest relative drift of kinetic energy and `‖ρ−1‖`, and the smallest
/// grid value of `ρ`, over every step of an auto-CFL run to `t = 1`.
fn conservation_run(n: usize) -> Result<(f64, f64, f64)> {
    let state = density_wave(&grid(n), 0.5, 1.0, 0.0, 1.0)?;
    let c0 = conservation_report(&state);
    let (mut ek, mut er, mut rmin) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut watch = |s: &FlowState<f64>, _: &StepInfo<f64>| -> Result<()> {
        let c = conservation_report(s);
        ek = ek.max((c.kinetic - c0.kinetic).abs() / c0.kinetic);
        er = er.max((c.rho_l2 - c0.rho_l2).abs() / c0.rho_l2);
        rmin = rmin.min(c.rho_min);
        Ok(())
    };
    let mut config = StepperConfig::new(1.0);
    config.observe_every = 1;
    run(&state, &config, &mut [&mut watch])?;
    Ok((ek, er, rmin))
}

fn conservation() -> Result<[Outcome; 2]> {
    let (k128, r128, m128) = conservation_run(128)?;
    let (k192, r192, m192) = conservation_run(192)?;
    let energy = outcome(
        k128 <= 1e-6 && k192 < k128,
        format!("kinetic drift n=128 {k128:.3e}, n=192 {k192:.3e} (tol 1e-6, refinement must shrink it)"),
    )?;
    let rmin = m128.min(m192);
    let density = outcome(
        r128 <= 1e-5 && rmin >= 0.5 - 1e-4,
        format!("rho_l2 drift n=128 {r128:.3e} (n=192 {r192:.3e}, tol 1e-5), rho_min {rmin:.12} (floor 0.4999)"),
    )?;
    Ok([energy, density])
}

fn skew_symmetry() -> Result<Outcome> {
    let r = skew_suite(&grid(128), 3, 100)?;
    outcome(r.passed, format!("{} states, worst |<div(rho grad u_perp), u>|/|u|_H1^2 = {:.3e} (tol 1e-12)", r.cases, r.worst))
}

fn homogeneous_reduction() -> Result<Outcome> {
    let g = grid(128);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u = random_velocity(&g, 8, 1.0, &mut rng)?;
    let odd = FlowState::homogeneous(u.clone(), 0.0, 1.0)?;
    let euler = FlowState::homogeneous(u, 0.0, 0.0)?;
    let config = StepperConfig::new(1.0);
    let a = run(&odd, &config, &mut [])?;
    let b = run(&euler, &config, &mut [])?;
    let diff = (&a.state.u - &b.state.u).l2_norm();
    outcome(
        diff <= 1e-8 && a.steps == b.steps,
        format!("|u_odd - u_euler| = {diff:.3e} after {} steps (tol 1e-8)", a.steps),
    )
}

fn residuals() -> Result<Outcome> {
    let g = grid(128);
    let [th, om] = residual_suites(&g, 8, 5, 50)?;
    let [th_half, om_half] = residual_suites(&g, 4, 5, 50)?;
    let mut trend = Vec::new();
    for n in [64, 128, 256] {
        let [t, o] = residual_suites(&grid(n), 20, 6, 3)?;
        trend.push(t.worst.max(o.worst));
    }
    let full = th.worst.max(om.worst);
    let half = th_half.worst.max(om_half.worst);
    let decreasing = trend.windows(2).all(|w| w[1] < w[0]);
    outcome(
        full <= 1e-8 && half <= 1e-10 && decreasing,
        format!(
            "50 states band 8 worst {full:.3e} (tol 1e-8), band 4 worst {half:.3e} (tol 1e-10), \
             band 20 over n=64/128/256 {:.2e} {:.2e} {:.2e}",
            trend[0], trend[1], trend[2]
        ),
    )
}

fn pressure_split() -> Result<Outcome> {
    let r = split_suite(&grid(128), 8, 5, 50)?;
    outcome(r.passed, format!("{} states, worst relative gap {:.3e} (tol 1e-8)", r.cases, r.worst))
}

fn lax_milgram() -> Result<Outcome> {
    let r = lax_milgram_suite(&grid(64), 7, 100)?;
    outcome(r.passed, format!("{} instances, worst a_*|grad Pi|/|F| - 1 = {:.3e} (slack 1e-9)", r.cases, r.worst))
}

fn littlewood_paley() -> Result<Outcome> {
    let g = grid(128);
    let p = DyadicPartition::new(&g);
    let partition = partition_suite(&g);
    let bony = bony_suite(&g, 8, 20)?;

    // Block j lives on 2^(j-1) <= |k| <= 2^(j+1), so the gradient of each
    // block is pinned between the annulus radii.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bernstein_ok = true;
    for _ in 0..10 {
        let f = random_scalar(&g, 40, 1.0, &mut rng);
        for j in 0..=p.j_max() {
            let b = p.dyadic_block(&f, j)?;
            let (norm, grad) = (b.l2_norm(), b.gradient().l2_norm());
            if norm == 0.0 {
                continue;
            }
            let (lo, hi) = (2f64.powi(j - 1), 2f64.powi(j + 1));
            bernstein_ok &= lo * norm <= grad * (1.0 + 1e-14) && grad <= hi * norm * (1.0 + 1e-14);
        }
    }

    let (lo, hi) = BACKEND_RATIO_BOUNDS;
    let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
    for i in 0..50 {
        let f = random_scalar(&g, 2 + (i % 30) as i64, 1.0, &mut rng);
        for s in [-1.0, 0.0, 1.0, 2.0, 2.5, 3.0, 4.0] {
            let ratio = p.sobolev_norm(&f, s, SobolevBackend::Multiplier)?
                / p.sobolev_norm(&f, s, SobolevBackend::LpSum)?;
            rmin = rmin.min(ratio);
            rmax = rmax.max(ratio);
        }
    }
    let ratio_ok = rmin >= lo && rmax <= hi;
    outcome(
        partition.passed && bony.passed && bernstein_ok && ratio_ok,
        format!(
            "partition {:.1e}, bony {:.1e} (tol 1e-12), bernstein {}, backend ratio [{rmin:.3}, {rmax:.3}] in [{lo}, {hi}]",
            partition.worst,
            bony.worst,
            if bernstein_ok { "ok" } else { "violated" },
        ),
    )
}

fn steady_shear_exactness() -> Result<Outcome> {
    let g = grid(32);
    let inviscid = steady_shear(&g, 0.0, 1.0)?;
    let out = run(&inviscid, &StepperConfig::new(1.0), &mut [])?;
    let drift = (&out.state.u - &inviscid.u).l2_norm();

    let viscous = steady_shear(&g, 0.1, 1.0)?;
    let out = run(&viscous, &StepperConfig::new(1.0), &mut [])?;
    // u₂ = A sin x₁ has coefficient −iA/2 at k = (1, 0).
    let amplitude = -2.0 * out.state.u.x2.coeff(1, 0).im;
    let gap = (amplitude - (-0.1f64).exp()).abs();
    outcome(
        drift <= 1e-8 && gap <= 1e-6,
        format!("eps=0 |u(1)-u0| = {drift:.3e} (tol 1e-8), eps=0.1 amplitude gap {gap:.3e} (tol 1e-6)"),
    )
}

fn epsilon_limit() -> Result<Outcome> {
    let state = density_wave(&grid(32), 0.5, 1.0, 0.0, 1.0)?;
    let t = epsilon_sweep(&state, &[1e-2, 1e-3, 1e-4, 0.0], &StepperConfig::new(0.5))?;
    let d = &t.u_distances;
    let strict = d.windows(2).all(|w| w[1] < w[0]) && t.rho_distances.windows(2).all(|w| w[1] < w[0]);
    outcome(
        strict,
        format!(
            "u distances {:.3e} {:.3e} {:.3e}, rho distances {:.3e} {:.3e} {:.3e} ({} steps)",
            d[0], d[1], d[2], t.rho_distances[0], t.rho_distances[1], t.rho_distances[2], t.steps
        ),
    )
}

fn twin_scaling() -> Result<Outcome> {
    let state = density_wave(&grid(32), 0.5, 1.0, 0.0, 1.0)?;
    let pert = Perturbation::random(state.grid(), 4, 5)?;
    let a = 1e-3;
    let mut d = Vec::new();
    for amp in [2.0 * a, a, a / 2.0] {
        let records = twin_run_stability(&state, &pert, amp, &StepperConfig::new(0.5))?;
        d.push(records.last().expect("final record").d);
    }
    let (r1, r2) = (d[0] / d[1], d[1] / d[2]);
    let ok = [r1, r2].iter().all(|r| (r - 4.0).abs() <= 0.8);
    outcome(ok, format!("D(0.5) ratios {r1:.4} {r2:.4} (4 +- 20%)"))
}

fn temporal_order() -> Result<Outcome> {
    let state = density_wave(&grid(32), 0.5, 1.0, 0.0, 1.0)?;
    let h = 0.005;
    let mut finals = Vec::new();
    for dt in [4.0 * h, 2.0 * h, h] {
        finals.push(run(&state, &StepperConfig::new(0.5).with_dt(dt), &mut [])?.state);
    }
    let e1 = (&finals[0].u - &finals[1].u).l2_norm();
    let e2 = (&finals[1].u - &finals[2].u).l2_norm();
    let ratio = e1 / e2;
    outcome((ratio - 16.0).abs() <= 4.0, format!("refinement factor {ratio:.3} (16 +- 25%)"))
}

fn report(name: &str, started: Instant, result: Result<Outcome>) -> bool {
    let secs = started.elapsed().as_secs_f64();
    match result {
        Ok(o) => {
            println!("{} {name}: {} [{secs:.1}s]", if o.passed { "PASS" } else { "FAIL" }, o.detail);
            o.passed
        }
        Err(e) => {
            println!("FAIL {name}: error {e} [{secs:.1}s]");
            false
        }
    }
}

fn main() {
    // The default `cargo test` invocation passes harness flags; filtering by
    // name is not supported, so only `--list` is honoured.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut all = true;

    let t = Instant::now();
    match conservation() {
        Ok([energy, density]) => {
            all &= report("energy_conservation", t, Ok(energy));
            all &= report("density_norm_transport", t, Ok(density));
        }
        Err(e) => {
            println!("FAIL energy_conservation: error {e}");
            println!("FAIL density_norm_transport: error {e}");
            all = false;
        }
    }

    let checks: [(&str, fn() -> Result<Outcome>); 10] = [
        ("odd_term_skew_symmetry", skew_symmetry),
        ("homogeneous_reduction", homogeneous_reduction),
        ("good_unknown_residuals", residuals),
        ("pressure_split_consistency", pressure_split),
        ("lax_milgram_bound", lax_milgram),
        ("littlewood_paley_suite", littlewood_paley),
        ("steady_shear_exactness", steady_shear_exactness),
        ("epsilon_cauchy", epsilon_limit),
        ("twin_run_scaling", twin_scaling),
        ("temporal_convergence", temporal_order),
    ];
    for (name, check) in checks {
        let t = Instant::now();
        all &= report(name, t, check());
    }

    if all {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: some criteria failed");
        std::process::exit(1);
    }
}
