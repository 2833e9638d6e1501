use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use oddflow::diagnostics::{energy_functionals, epsilon_sweep, twin_run_stability, Perturbation};
use oddflow::io::verify::{run_suites, VerifyOptions};
use oddflow::io::{init_scenario, load_config, read_checkpoint, CsvObserver, RunConfig};
use oddflow::littlewood_paley::{sobolev_norm, sobolev_norm_vector, SobolevBackend};
use oddflow::stepper::run;
use oddflow::{Error, Result};

#[derive(Parser)]
#[command(name = "oddflow", version, about = "Spectral simulator for 2D density-dependent flow with odd viscosity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario, writing diagnostics CSV and checkpoints.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the identity suites on seeded random states.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
    /// Twin runs from the scenario and a seeded perturbation of it.
    Twin {
        #[arg(long)]
        config: PathBuf,
        /// Perturbation amplitude.
        #[arg(long, default_value_t = 1e-3)]
        amplitude: f64,
    },
    /// Runs the scenario for each epsilon and prints neighbour distances.
    SweepEps {
        #[arg(long)]
        config: PathBuf,
        /// Non-increasing list, e.g. `1e-2,1e-3,1e-4,0`.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3, 1e-4, 0.0])]
        eps: Vec<f64>,
    },
    /// Norm tables for a checkpoint.
    Norms {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Sobolev index of the energy functionals.
        #[arg(long, default_value_t = 2.5)]
        s: f64,
    },
}

/// Failures of the simulation exit with 2, everything else with 1.
fn exit_code(e: &Error) -> u8 {
    if e.is_runtime_abort() {
        2
    } else {
        1
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("ODDFLOW_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Config(format!("ODDFLOW_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot size thread pool: {e}")))
}

fn warn_index(s: f64) {
    if s <= 2.0 {
        eprintln!("warning: energy functionals are meant for s > 2, got s = {s}");
    }
}

fn cmd_run(config: PathBuf, output_dir: Option<PathBuf>) -> Result<()> {
    let mut cfg = load_config(&config)?;
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    warn_index(cfg.s);
    let state = init_scenario(&cfg)?;
    let mut obs = CsvObserver::new(&cfg.output_dir, cfg.s, cfg.checkpoint_every)?;
    let tr = run(&state, &cfg.stepper_config(), &mut [&mut obs])?;
    obs.finish(&tr.state, tr.steps)?;
    let first = obs.records.first().expect("initial record");
    let last = obs.records.last().expect("final record");
    println!("steps       {}", tr.steps);
    println!("dt          [{:.6e}, {:.6e}]", tr.dt_min, tr.dt_max);
    println!("t_end       {}", tr.state.t);
    println!("kinetic     {:.16e} -> {:.16e}", first.kinetic, last.kinetic);
    println!("rho_min     {:.16e} -> {:.16e}", first.rho_min, last.rho_min);
    println!("csv         {}", obs.csv_path().display());
    Ok(())
}

fn cmd_verify(seed: u64, n: usize, cases: usize) -> Result<bool> {
    let results = run_suites(VerifyOptions { n, seed, cases })?;
    for r in &results {
        println!("{r}");
    }
    Ok(results.iter().all(|r| r.passed))
}

fn perturbation(cfg: &RunConfig, grid: &std::sync::Arc<oddflow::Grid>) -> Result<Perturbation<f64>> {
    let band = ((cfg.grid_n / 8) as i64).clamp(1, 4);
    Perturbation::random(grid, band, cfg.seed.wrapping_add(1))
}

fn cmd_twin(config: PathBuf, amplitude: f64) -> Result<()> {
    let cfg = load_config(&config)?;
    let state = init_scenario(&cfg)?;
    let pert = perturbation(&cfg, state.grid())?;
    let out = twin_run_stability(&state, &pert, amplitude, &cfg.stepper_config())?;
    println!("t,D,Theta,identity_defect");
    for r in out {
        println!("{:.16e},{:.16e},{:.16e},{:.3e}", r.t, r.d, r.theta, r.identity_defect);
    }
    Ok(())
}

fn cmd_sweep(config: PathBuf, eps: Vec<f64>) -> Result<()> {
    let cfg = load_config(&config)?;
    let state = init_scenario(&cfg)?;
    let table = epsilon_sweep(&state, &eps, &cfg.stepper_config())?;
    println!("# dt = {:.6e}, steps = {}", table.dt, table.steps);
    println!("eps_i,eps_next,u_distance,rho_distance");
    for (i, (du, dr)) in table.u_distances.iter().zip(&table.rho_distances).enumerate() {
        println!("{:e},{:e},{:.16e},{:.16e}", eps[i], eps[i + 1], du, dr);
    }
    println!("# decreasing within 10%: {}", table.is_decreasing(0.1));
    Ok(())
}

fn cmd_norms(path: PathBuf, s: f64) -> Result<()> {
    warn_index(s);
    let state = read_checkpoint::<f64>(&path)?;
    println!("t = {}, n = {}, epsilon = {}, odd_sign = {}", state.t, state.grid().n(), state.epsilon, state.odd_sign);
    println!("{:>6} {:>24} {:>24} {:>24} {:>24}", "s", "rho-1 multiplier", "rho-1 lp_sum", "u multiplier", "u lp_sum");
    for k in [-1.0, 0.0, 1.0, 2.0, s, s + 1.0] {
        println!(
            "{:>6} {:>24.16e} {:>24.16e} {:>24.16e} {:>24.16e}",
            k,
            sobolev_norm(&state.rho, k, SobolevBackend::Multiplier),
            sobolev_norm(&state.rho, k, SobolevBackend::LpSum),
            sobolev_norm_vector(&state.u, k, SobolevBackend::Multiplier),
            sobolev_norm_vector(&state.u, k, SobolevBackend::LpSum),
        );
    }
    let e = energy_functionals(&state, s)?;
    let (r1, r2) = e.equivalence_ratios(s);
    println!("E = {:.16e}", e.e);
    println!("F = {:.16e}", e.f);
    println!("G = {:.16e}", e.g);
    println!("F/(E(1+E)) = {r1:.6e}, E/(F(1+F^(s-1))) = {r2:.6e}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Run { config, output_dir } => cmd_run(config, output_dir),
        Command::Verify { seed, n, cases } => match cmd_verify(seed, n, cases) {
            Ok(true) => Ok(()),
            Ok(false) => {
                eprintln!("error: verification failed");
                return ExitCode::from(2);
            }
            Err(e) => Err(e),
        },
        Command::Twin { config, amplitude } => cmd_twin(config, amplitude),
        Command::SweepEps { config, eps } => cmd_sweep(config, eps),
        Command::Norms { checkpoint, s } => cmd_norms(checkpoint, s),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
