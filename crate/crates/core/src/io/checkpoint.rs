//! Binary checkpoints: magic `ODD2D\0`, version and `n` as `u32`, then `t`,
//! `ε`, `σ` as `f64`, then the coefficients of `ρ − 1`, `u₁`, `u₂` as
//! `(re, im)` pairs of `f64`, all little-endian. Coefficients are stored in
//! FFT index order (row-major, `k₁` outer).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex;

use crate::dynamics::FlowState;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::spectral::{Grid, SpectralScalar, SpectralVector};

pub const CHECKPOINT_MAGIC: [u8; 6] = *b"ODD2D\0";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn write_checkpoint<T: Real>(state: &FlowState<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&CHECKPOINT_MAGIC)?;
    w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    let n = u32::try_from(state.grid().n()).map_err(|_| Error::Checkpoint("grid too large".into()))?;
    w.write_all(&n.to_le_bytes())?;
    for v in [state.t, state.epsilon, state.odd_sign] {
        w.write_all(&v.as_f64().to_le_bytes())?;
    }
    for f in [&state.rho, &state.u.x1, &state.u.x2] {
        for z in f.coeffs() {
            w.write_all(&z.re.as_f64().to_le_bytes())?;
            w.write_all(&z.im.as_f64().to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn take<const N: usize>(r: &mut impl Read, what: &str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Checkpoint(format!("truncated file while reading {what}")),
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

fn read_f64(r: &mut impl Read, what: &str) -> Result<f64> {
    Ok(f64::from_le_bytes(take::<8>(r, what)?))
}

pub fn read_checkpoint<T: Real>(path: impl AsRef<Path>) -> Result<FlowState<T>> {
    let mut r = BufReader::new(File::open(path)?);
    let magic = take::<6>(&mut r, "magic")?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::Checkpoint("bad magic: not an oddflow checkpoint".into()));
    }
    let version = u32::from_le_bytes(take::<4>(&mut r, "version")?);
    if version != CHECKPOINT_VERSION {
        return Err(Error::UnsupportedVersion {
            found: version,
            supported: CHECKPOINT_VERSION,
        });
    }
    let n = u32::from_le_bytes(take::<4>(&mut r, "grid size")?) as usize;
    let grid = Grid::<T>::new(n)?;
    let t = read_f64(&mut r, "time")?;
    let epsilon = read_f64(&mut r, "epsilon")?;
    let odd_sign = read_f64(&mut r, "odd_sign")?;
    let mut field = |what: &str| -> Result<SpectralScalar<T>> {
        let mut coeffs = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let re = read_f64(&mut r, what)?;
            let im = read_f64(&mut r, what)?;
            coeffs.push(Complex::new(T::lit(re), T::lit(im)));
        }
        // Stored Nyquist entries are signed zeros; keep their bits.
        let cleared = SpectralScalar::from_coeffs(&grid, coeffs.clone())?;
        if cleared.coeffs() != coeffs.as_slice() {
            return Err(Error::Checkpoint(format!("{what} has nonzero Nyquist coefficients")));
        }
        Ok(SpectralScalar::from_coeffs_raw(&grid, coeffs))
    };
    let rho = field("rho")?;
    let u1 = field("u1")?;
    let u2 = field("u2")?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Checkpoint("trailing bytes after coefficients".into()));
    }
    let u = SpectralVector::new(u1, u2)?;
    Ok(FlowState::new(rho, u, T::lit(epsilon), T::lit(odd_sign))?.with_time(T::lit(t)))
}
