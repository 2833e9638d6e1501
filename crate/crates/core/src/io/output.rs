use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::{diagnostics_record, DiagnosticsRecord};
use crate::dynamics::FlowState;
use crate::error::{Error, Result};
use crate::stepper::{Observer, StepInfo};

use super::checkpoint::write_checkpoint;

fn row(r: &DiagnosticsRecord<f64>) -> Vec<String> {
    let mut out: Vec<String> = r.values().iter().map(|v| format!("{v:.16e}")).collect();
    out.push(r.pressure_iterations.to_string());
    out
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

/// Writes `records` as CSV with a header naming every field, 17
/// significant digits per number.
pub fn write_diagnostics_csv(path: impl AsRef<Path>, records: &[DiagnosticsRecord<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(DiagnosticsRecord::<f64>::FIELDS).map_err(csv_error)?;
    for r in records {
        w.write_record(row(r)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn write_dat(path: &Path, records: &[DiagnosticsRecord<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {}", DiagnosticsRecord::<f64>::FIELDS.join(" "))?;
    for r in records {
        writeln!(w, "{}", row(r).join(" "))?;
    }
    w.flush()?;
    Ok(())
}

/// Observer that records diagnostics, writes checkpoints and, on
/// [`CsvObserver::finish`], the CSV file and its whitespace-separated
/// `.dat` twin.
pub struct CsvObserver {
    dir: PathBuf,
    s: f64,
    checkpoint_every: usize,
    pub records: Vec<DiagnosticsRecord<f64>>,
}

impl CsvObserver {
    pub fn new(dir: impl Into<PathBuf>, s: f64, checkpoint_every: usize) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            s,
            checkpoint_every,
            records: Vec::new(),
        })
    }

    pub fn csv_path(&self) -> PathBuf {
        self.dir.join("diagnostics.csv")
    }

    pub fn checkpoint_path(&self, step: usize) -> PathBuf {
        self.dir.join(format!("checkpoint_{step:08}.chk"))
    }

    /// Writes the CSV, the `.dat` alias and the final checkpoint.
    pub fn finish(&self, last: &FlowState<f64>, steps: usize) -> Result<()> {
        write_diagnostics_csv(self.csv_path(), &self.records)?;
        write_dat(&self.dir.join("diagnostics.dat"), &self.records)?;
        write_checkpoint(last, self.dir.join("final.chk"))?;
        if self.checkpoint_every > 0 && steps % self.checkpoint_every != 0 {
            write_checkpoint(last, self.checkpoint_path(steps))?;
        }
        Ok(())
    }
}

impl Observer<f64> for CsvObserver {
    fn observe(&mut self, state: &FlowState<f64>, info: &StepInfo<f64>) -> Result<()> {
        let mut r = diagnostics_record(state, self.s)?;
        if info.step > 0 {
            r.pressure_iterations = info.pressure_iterations;
        }
        self.records.push(r);
        if self.checkpoint_every > 0 && info.step % self.checkpoint_every == 0 {
            write_checkpoint(state, self.checkpoint_path(info.step))?;
        }
        Ok(())
    }
}
