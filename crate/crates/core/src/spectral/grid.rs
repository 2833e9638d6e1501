use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::real::Real;

/// Below this many points per axis the row transforms run serially.
const PARALLEL_MIN_N: usize = 64;

/// Uniform collocation grid on the torus `[0, 2π)²` with `n` points per axis.
///
/// Spectral storage is row-major over FFT index order: entry `i1 * n + i2`
/// holds the amplitude of `exp(i (k1 x1 + k2 x2))` with `k = wavenumber(i)`.
/// Physical samples use the same layout, `x_a = 2π j_a / n`.
pub struct Grid<T: Real> {
    n: usize,
    cutoff: usize,
    wavenumbers: Vec<T>,
    fft: Arc<dyn Fft<T>>,
    ifft: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize) -> Result<Arc<Self>> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidGrid(n));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let wavenumbers = (0..n)
            .map(|i| T::lit(wavenumber_of(i, n) as f64))
            .collect();
        Ok(Arc::new(Self {
            n,
            cutoff: (n - 1) / 3,
            wavenumbers,
            fft,
            ifft,
        }))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest retained `|k_i|` under the 2/3 rule, `⌊(n−1)/3⌋`, so that
    /// quadratic products never alias back into the retained band.
    #[inline]
    pub fn dealias_cutoff(&self) -> usize {
        self.cutoff
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed wavenumber of FFT index `i`; `n/2` is the Nyquist mode.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        wavenumber_of(i, self.n)
    }

    /// Wavenumber pair of flat index `idx`.
    #[inline]
    pub(crate) fn kk(&self, idx: usize) -> (T, T) {
        (self.wavenumbers[idx / self.n], self.wavenumbers[idx % self.n])
    }

    /// Flat index of the wavenumber pair, if representable and not Nyquist.
    pub fn index_of(&self, k1: i64, k2: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k1.abs() >= half || k2.abs() >= half {
            return None;
        }
        let wrap = |k: i64| if k < 0 { (k + self.n as i64) as usize } else { k as usize };
        Some(wrap(k1) * self.n + wrap(k2))
    }

    /// Inside the 2/3-rule band `max(|k1|, |k2|) <= cutoff`.
    #[inline]
    pub(crate) fn retained(&self, idx: usize) -> bool {
        let c = self.cutoff as i64;
        self.wavenumber(idx / self.n).abs() <= c && self.wavenumber(idx % self.n).abs() <= c
    }

    /// Flat index of `-k` for the mode at `idx`.
    #[inline]
    pub(crate) fn mirror(&self, idx: usize) -> usize {
        let n = self.n;
        let (i1, i2) = (idx / n, idx % n);
        ((n - i1) % n) * n + (n - i2) % n
    }

    /// Grid coordinate `2π j / n`.
    #[inline]
    pub fn coordinate(&self, j: usize) -> T {
        T::lit(2.0) * T::PI() * T::count(j) / T::count(self.n)
    }

    pub(crate) fn same(&self, other: &Self) -> bool {
        self.n == other.n
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// Unnormalised 2D DFT in place (`sign = -1` forward, `+1` inverse).
    pub(crate) fn fft2(&self, data: &mut [Complex<T>], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n);
        let plan = if inverse { &self.ifft } else { &self.fft };
        self.rows(plan.as_ref(), data);
        let mut t = transpose(data, n);
        self.rows(plan.as_ref(), &mut t);
        transpose_into(&t, data, n);
    }

    fn rows(&self, plan: &dyn Fft<T>, data: &mut [Complex<T>]) {
        let n = self.n;
        let scratch_len = plan.get_inplace_scratch_len();
        if n >= PARALLEL_MIN_N {
            data.par_chunks_mut(n).for_each_init(
                || vec![Complex::new(T::zero(), T::zero()); scratch_len],
                |scratch, row| plan.process_with_scratch(row, scratch),
            );
        } else {
            let mut scratch = vec![Complex::new(T::zero(), T::zero()); scratch_len];
            for row in data.chunks_mut(n) {
                plan.process_with_scratch(row, &mut scratch);
            }
        }
    }
}

fn wavenumber_of(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose<T: Copy>(src: &[T], n: usize) -> Vec<T> {
    let mut dst = src.to_vec();
    transpose_into(src, &mut dst, n);
    dst
}

fn transpose_into<T: Copy>(src: &[T], dst: &mut [T], n: usize) {
    const B: usize = 16;
    for ib in (0..n).step_by(B) {
        for jb in (0..n).step_by(B) {
            for i in ib..(ib + B).min(n) {
                for j in jb..(jb + B).min(n) {
                    dst[j * n + i] = src[i * n + j];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::<f64>::new(6).is_err());
        assert!(Grid::<f64>::new(31).is_err());
        assert!(Grid::<f64>::new(16).is_ok());
        assert!(Grid::<f64>::new(192).is_ok());
    }

    #[test]
    fn cutoff_is_two_thirds_rule() {
        assert_eq!(Grid::<f64>::new(64).unwrap().dealias_cutoff(), 21);
        assert_eq!(Grid::<f64>::new(128).unwrap().dealias_cutoff(), 42);
        assert_eq!(Grid::<f64>::new(192).unwrap().dealias_cutoff(), 63);
    }

    #[test]
    fn wavenumber_layout() {
        let g = Grid::<f64>::new(8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.index_of(-1, 2), Some(7 * 8 + 2));
        assert_eq!(g.index_of(4, 0), None);
        let idx = g.index_of(2, -3).unwrap();
        assert_eq!(g.mirror(idx), g.index_of(-2, 3).unwrap());
    }
}
