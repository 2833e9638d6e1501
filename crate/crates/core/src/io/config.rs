use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::SolverOptions;
use crate::stepper::{StepperConfig, DEFAULT_CFL_SAFETY};

/// Initial datum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioConfig {
    /// `ρ ≡ 1`, `u = (0, sin x₁)`.
    SteadyShear,
    /// `ρ = 1 + a cos x₁ cos x₂`, `u` from
    /// `ω₀ = V(sin x₁ sin x₂ + ½ cos(x₁ + 2x₂))`.
    DensityWave {
        #[serde(default = "default_wave_amplitude")]
        amplitude: f64,
        #[serde(default = "one")]
        vorticity: f64,
    },
    /// Seeded band-limited `ρ − 1` with `max|ρ − 1| ≤ rho_amplitude` and
    /// `u = biot_savart(ω)` with `max|ω| ≤ vorticity`.
    RandomBandlimited {
        #[serde(default = "default_band")]
        band: i64,
        #[serde(default = "default_rho_amplitude")]
        rho_amplitude: f64,
        #[serde(default = "one")]
        vorticity: f64,
    },
}

fn default_wave_amplitude() -> f64 {
    0.5
}
fn default_band() -> i64 {
    4
}
fn default_rho_amplitude() -> f64 {
    0.3
}
fn one() -> f64 {
    1.0
}
fn default_cfl_safety() -> f64 {
    DEFAULT_CFL_SAFETY
}
fn default_odd_sign() -> f64 {
    1.0
}
fn default_s() -> f64 {
    2.5
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_observe_every() -> usize {
    10
}
fn default_vacuum_floor() -> f64 {
    crate::dynamics::DEFAULT_VACUUM_FLOOR
}

/// Contents of a run configuration file. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid_n: usize,
    pub t_end: f64,
    pub scenario: ScenarioConfig,
    /// Fixed step; absent or `null` selects the CFL step.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_cfl_safety")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_odd_sign")]
    pub odd_sign: f64,
    /// Sobolev index of the diagnostics.
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_observe_every")]
    pub observe_every: usize,
    /// `0` writes only the final checkpoint.
    #[serde(default)]
    pub checkpoint_every: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_vacuum_floor")]
    pub vacuum_floor: f64,
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{name}`: {msg}"))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 8 || self.grid_n % 2 != 0 {
            return Err(field("grid_n", format!("expected an even number >= 8, got {}", self.grid_n)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(field("t_end", format!("expected a finite value >= 0, got {}", self.t_end)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(field("dt", format!("expected a positive step, got {dt}")));
            }
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(field("cfl_safety", format!("expected a value in (0, 1], got {}", self.cfl_safety)));
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(field("epsilon", format!("expected a finite value >= 0, got {}", self.epsilon)));
        }
        if !self.odd_sign.is_finite() {
            return Err(field("odd_sign", "expected a finite value"));
        }
        if !(self.s > 1.0) || !self.s.is_finite() {
            return Err(field("s", format!("expected a value > 1, got {}", self.s)));
        }
        if self.observe_every == 0 {
            return Err(field("observe_every", "expected at least 1"));
        }
        if !(self.vacuum_floor > 0.0) {
            return Err(field("vacuum_floor", "expected a positive value"));
        }
        match self.scenario {
            ScenarioConfig::SteadyShear => {}
            ScenarioConfig::DensityWave { amplitude, vorticity } => {
                if !(amplitude > 0.0 && amplitude < 1.0) {
                    return Err(field(
                        "scenario.amplitude",
                        format!("expected a value in (0, 1) so that rho stays positive, got {amplitude}"),
                    ));
                }
                if !vorticity.is_finite() {
                    return Err(field("scenario.vorticity", "expected a finite value"));
                }
            }
            ScenarioConfig::RandomBandlimited {
                band,
                rho_amplitude,
                vorticity,
            } => {
                let max_band = (self.grid_n / 8) as i64;
                if band < 1 || band > max_band {
                    return Err(field(
                        "scenario.band",
                        format!("expected a value in [1, grid_n/8 = {max_band}], got {band}"),
                    ));
                }
                if !(rho_amplitude >= 0.0 && rho_amplitude < 1.0) {
                    return Err(field(
                        "scenario.rho_amplitude",
                        format!("expected a value in [0, 1) so that rho stays positive, got {rho_amplitude}"),
                    ));
                }
                if !vorticity.is_finite() {
                    return Err(field("scenario.vorticity", "expected a finite value"));
                }
            }
        }
        Ok(())
    }

    pub fn stepper_config(&self) -> StepperConfig<f64> {
        StepperConfig {
            dt: self.dt,
            cfl_safety: self.cfl_safety,
            vacuum_floor: self.vacuum_floor,
            pressure: SolverOptions::default(),
            observe_every: self.observe_every,
            ..StepperConfig::new(self.t_end)
        }
    }
}

/// Parses and validates a configuration from JSON text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
