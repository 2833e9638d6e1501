//! Run configuration, scenario library, checkpoints, CSV output and the
//! identity suites behind `oddflow verify`.

mod checkpoint;
mod config;
mod output;
mod scenario;
pub mod verify;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use config::{load_config, parse_config, RunConfig, ScenarioConfig};
pub use output::{write_diagnostics_csv, CsvObserver};
pub use scenario::{density_wave, init_scenario, random_bandlimited, steady_shear};
