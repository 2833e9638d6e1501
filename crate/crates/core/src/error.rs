use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {0}: expected an even number of points >= 8")]
    InvalidGrid(usize),

    #[error("grid mismatch: {left} vs {right} points per axis")]
    GridMismatch { left: usize, right: usize },

    #[error("sample array has {got} entries, grid expects {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("field is not Hermitian: imaginary residue {residue:.3e} after inverse transform")]
    NotHermitian { residue: f64 },

    #[error("inverse Laplacian of a field with nonzero mean {mean:.3e}")]
    NonZeroMean { mean: f64 },

    #[error("velocity is not divergence-free (relative divergence {relative:.3e})")]
    NotDivergenceFree { relative: f64 },

    #[error("dyadic index {index} outside [-1, {max}]")]
    BlockIndex { index: i32, max: i32 },

    #[error("elliptic coefficient not bounded below: min {min:.3e}")]
    NotCoercive { min: f64 },

    #[error("elliptic solve did not converge: {iterations} iterations, relative residual {residual:.3e}")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("vacuum at t = {t}: min rho = {rho_min:.6e} below floor {floor:.1e}")]
    Vacuum { t: f64, rho_min: f64, floor: f64 },

    #[error("non-finite {quantity} at t = {t}")]
    NonFinite { t: f64, quantity: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("unsupported checkpoint version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the simulation itself (as opposed to bad input).
    pub fn is_runtime_abort(&self) -> bool {
        matches!(
            self,
            Error::Vacuum { .. }
                | Error::NonFinite { .. }
                | Error::NotConverged { .. }
                | Error::NotCoercive { .. }
        )
    }
}
