use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex;

use super::grid::Grid;
use super::sum::pairwise_sum_by;
use crate::error::{Error, Result};
use crate::real::Real;

/// Real samples on the collocation grid, row-major `j1 * n + j2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField<T: Real> {
    n: usize,
    values: Vec<T>,
}

impl<T: Real> PhysicalField<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![T::zero(); n * n],
        }
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self {
            n,
            values: vec![c; n * n],
        }
    }

    /// Samples `f(x1, x2)` at the grid points.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        let n = grid.n();
        let values = (0..n * n)
            .map(|idx| f(grid.coordinate(idx / n), grid.coordinate(idx % n)))
            .collect();
        Self { n, values }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn get(&self, j1: usize, j2: usize) -> T {
        self.values[j1 * self.n + j2]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.n, other.n, "physical field size mismatch");
        Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |m, &v| T::max(m, v.mag()))
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Grid quadrature of the integral over the torus.
    pub fn integral(&self) -> T {
        let cell = cell_area::<T>(self.n);
        pairwise_sum_by(self.values.len(), |i| self.values[i]) * cell
    }

    pub fn l2_norm(&self) -> T {
        let cell = cell_area::<T>(self.n);
        (pairwise_sum_by(self.values.len(), |i| self.values[i] * self.values[i]) * cell).sqrt()
    }

    /// `L^p` norm by grid quadrature; `p = +inf` gives the max norm.
    pub fn lp_norm(&self, p: T) -> T {
        if p.is_infinite() {
            return self.max_abs();
        }
        let cell = cell_area::<T>(self.n);
        let s = pairwise_sum_by(self.values.len(), |i| self.values[i].mag().powf(p));
        (s * cell).powf(T::one() / p)
    }
}

fn cell_area<T: Real>(n: usize) -> T {
    let h = T::lit(2.0) * T::PI() / T::count(n);
    h * h
}

macro_rules! physical_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a, T: Real> $tr<&'a PhysicalField<T>> for &'a PhysicalField<T> {
            type Output = PhysicalField<T>;
            fn $m(self, rhs: &'a PhysicalField<T>) -> PhysicalField<T> {
                self.zip_map(rhs, |a, b| a $op b)
            }
        }
    };
}
physical_binop!(Add, add, +);
physical_binop!(Sub, sub, -);
physical_binop!(Mul, mul, *);

/// Real periodic scalar field stored as Fourier amplitudes of `exp(i k·x)`.
///
/// Coefficient `(0,0)` is the mean; `‖f‖²_{L²} = (2π)² Σ |f̂(k)|²`.
/// Nyquist rows and columns are always zero.
#[derive(Clone, Debug)]
pub struct SpectralScalar<T: Real> {
    grid: Arc<Grid<T>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralScalar<T> {
    pub fn zeros(grid: &Arc<Grid<T>>) -> Self {
        Self {
            grid: Arc::clone(grid),
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    pub fn constant(grid: &Arc<Grid<T>>, c: T) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex::new(c, T::zero());
        f
    }

    /// Wraps raw coefficients; Nyquist entries are cleared.
    pub fn from_coeffs(grid: &Arc<Grid<T>>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        let mut f = Self {
            grid: Arc::clone(grid),
            coeffs,
        };
        f.clear_nyquist();
        Ok(f)
    }

    /// Takes `coeffs` as given; the caller guarantees zero Nyquist modes.
    pub(crate) fn from_coeffs_raw(grid: &Arc<Grid<T>>, coeffs: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self {
            grid: Arc::clone(grid),
            coeffs,
        }
    }

    /// Forward transform of grid samples.
    pub fn forward_transform(grid: &Arc<Grid<T>>, samples: &PhysicalField<T>) -> Result<Self> {
        if samples.n() != grid.n() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: samples.values().len(),
            });
        }
        Ok(Self::from_physical(grid, samples))
    }

    /// Transform of `f` sampled on the grid.
    pub fn from_fn(grid: &Arc<Grid<T>>, f: impl Fn(T, T) -> T) -> Self {
        Self::from_physical(grid, &PhysicalField::from_fn(grid, f))
    }

    pub(crate) fn from_physical(grid: &Arc<Grid<T>>, samples: &PhysicalField<T>) -> Self {
        debug_assert_eq!(samples.n(), grid.n());
        let mut data: Vec<Complex<T>> = samples
            .values()
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        grid.fft2(&mut data, false);
        let norm = T::one() / T::count(grid.len());
        for c in data.iter_mut() {
            *c = *c * norm;
        }
        let mut f = Self {
            grid: Arc::clone(grid),
            coeffs: data,
        };
        f.clear_nyquist();
        f
    }

    /// Transform of samples followed by 2/3-rule truncation.
    pub(crate) fn from_physical_dealiased(grid: &Arc<Grid<T>>, samples: &PhysicalField<T>) -> Self {
        let mut f = Self::from_physical(grid, samples);
        f.truncate();
        f
    }

    /// Inverse transform, rejecting fields whose imaginary part does not
    /// vanish (broken Hermitian symmetry).
    pub fn inverse_transform(&self) -> Result<PhysicalField<T>> {
        let data = self.inverse_complex();
        let scale = T::max(
            T::one(),
            data.iter().fold(T::zero(), |m, c| T::max(m, c.re.mag())),
        );
        let residue = data.iter().fold(T::zero(), |m, c| T::max(m, c.im.mag()));
        if residue > T::tol(1e-10) * scale {
            return Err(Error::NotHermitian {
                residue: residue.as_f64(),
            });
        }
        PhysicalField::new(self.grid.n(), data.into_iter().map(|c| c.re).collect())
    }

    /// Grid samples of the field (real part, no symmetry check).
    pub fn to_physical(&self) -> PhysicalField<T> {
        let data = self.inverse_complex();
        PhysicalField {
            n: self.grid.n(),
            values: data.into_iter().map(|c| c.re).collect(),
        }
    }

    /// Grid samples of the 2/3-truncated field; the input to every product.
    pub(crate) fn phys(&self) -> PhysicalField<T> {
        if self.is_dealiased() {
            self.to_physical()
        } else {
            self.dealiased().to_physical()
        }
    }

    fn inverse_complex(&self) -> Vec<Complex<T>> {
        let mut data = self.coeffs.clone();
        self.grid.fft2(&mut data, true);
        data
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Mutable coefficient access; callers must keep Hermitian symmetry.
    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    /// Amplitude of mode `(k1, k2)`; zero if not representable.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex<T> {
        self.grid
            .index_of(k1, k2)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Sets mode `k` to `c` and mode `-k` to its conjugate.
    pub fn set_mode(&mut self, k1: i64, k2: i64, c: Complex<T>) {
        if let (Some(i), Some(j)) = (self.grid.index_of(k1, k2), self.grid.index_of(-k1, -k2)) {
            self.coeffs[i] = c;
            self.coeffs[j] = c.conj();
            if i == j {
                self.coeffs[i] = Complex::new(c.re, T::zero());
            }
        }
    }

    #[inline]
    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    pub fn set_mean(&mut self, m: T) {
        self.coeffs[0] = Complex::new(m, T::zero());
    }

    /// Largest `|f̂(k) - conj f̂(-k)|` over all modes.
    pub fn hermitian_defect(&self) -> T {
        (0..self.coeffs.len()).fold(T::zero(), |m, i| {
            let j = self.grid.mirror(i);
            T::max(m, (self.coeffs[i] - self.coeffs[j].conj()).norm())
        })
    }

    /// `(2π) √(Σ |f̂|²)`.
    pub fn l2_norm(&self) -> T {
        T::lit(2.0) * T::PI() * self.norm_sqr_coeffs().sqrt()
    }

    pub(crate) fn norm_sqr_coeffs(&self) -> T {
        pairwise_sum_by(self.coeffs.len(), |i| self.coeffs[i].norm_sqr())
    }

    /// `⟨f, g⟩_{L²} = (2π)² Σ Re(f̂ conj ĝ)`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.grid.check_same(&other.grid)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Self) -> T {
        let two_pi = T::lit(2.0) * T::PI();
        let s = pairwise_sum_by(self.coeffs.len(), |i| {
            let (a, b) = (self.coeffs[i], other.coeffs[i]);
            a.re * b.re + a.im * b.im
        });
        two_pi * two_pi * s
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| T::max(m, c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Zero every mode outside the 2/3-rule band.
    pub fn truncate(&mut self) {
        for idx in 0..self.coeffs.len() {
            if !self.grid.retained(idx) {
                self.coeffs[idx] = Complex::new(T::zero(), T::zero());
            }
        }
    }

    pub fn dealiased(&self) -> Self {
        let mut f = self.clone();
        f.truncate();
        f
    }

    pub fn is_dealiased(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| self.grid.retained(i) || (c.re == T::zero() && c.im == T::zero()))
    }

    fn clear_nyquist(&mut self) {
        let n = self.grid.n();
        let h = n / 2;
        for i in 0..n {
            self.coeffs[h * n + i] = Complex::new(T::zero(), T::zero());
            self.coeffs[i * n + h] = Complex::new(T::zero(), T::zero());
        }
    }

    /// Applies the Fourier multiplier `m(k1, k2)` mode by mode.
    pub fn apply_multiplier(&self, m: impl Fn(T, T) -> Complex<T>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let (k1, k2) = self.grid.kk(idx);
                c * m(k1, k2)
            })
            .collect();
        Self {
            grid: Arc::clone(&self.grid),
            coeffs,
        }
    }

    /// Real radial multiplier `m(|k|)`.
    pub fn apply_radial(&self, m: impl Fn(T) -> T) -> Self {
        self.apply_multiplier(|k1, k2| Complex::new(m((k1 * k1 + k2 * k2).sqrt()), T::zero()))
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self.coeffs.iter().map(|&z| z * c).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: T, other: &Self) -> Self {
        assert!(self.grid.same(&other.grid), "grid mismatch");
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b * c)
                .collect(),
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.grid.same(&other.grid)
    }
}

impl<'a, T: Real> Add<&'a SpectralScalar<T>> for &'a SpectralScalar<T> {
    type Output = SpectralScalar<T>;
    fn add(self, rhs: &'a SpectralScalar<T>) -> SpectralScalar<T> {
        self.axpy(T::one(), rhs)
    }
}

impl<'a, T: Real> Sub<&'a SpectralScalar<T>> for &'a SpectralScalar<T> {
    type Output = SpectralScalar<T>;
    fn sub(self, rhs: &'a SpectralScalar<T>) -> SpectralScalar<T> {
        self.axpy(-T::one(), rhs)
    }
}

impl<T: Real> Neg for &SpectralScalar<T> {
    type Output = SpectralScalar<T>;
    fn neg(self) -> SpectralScalar<T> {
        self.scale(-T::one())
    }
}

impl<T: Real> AddAssign<&SpectralScalar<T>> for SpectralScalar<T> {
    fn add_assign(&mut self, rhs: &SpectralScalar<T>) {
        assert!(self.grid.same(&rhs.grid), "grid mismatch");
        for (a, &b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = *a + b;
        }
    }
}

impl<T: Real> SubAssign<&SpectralScalar<T>> for SpectralScalar<T> {
    fn sub_assign(&mut self, rhs: &SpectralScalar<T>) {
        assert!(self.grid.same(&rhs.grid), "grid mismatch");
        for (a, &b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = *a - b;
        }
    }
}

/// Planar vector field with two spectral components.
#[derive(Clone, Debug)]
pub struct SpectralVector<T: Real> {
    pub x1: SpectralScalar<T>,
    pub x2: SpectralScalar<T>,
    /// Advisory: set by constructions that guarantee `k·û(k) = 0`.
    pub divergence_free: bool,
}

impl<T: Real> SpectralVector<T> {
    pub fn new(x1: SpectralScalar<T>, x2: SpectralScalar<T>) -> Result<Self> {
        x1.grid.check_same(&x2.grid)?;
        Ok(Self {
            x1,
            x2,
            divergence_free: false,
        })
    }

    pub(crate) fn from_parts(x1: SpectralScalar<T>, x2: SpectralScalar<T>) -> Self {
        debug_assert!(x1.same_grid(&x2));
        Self {
            x1,
            x2,
            divergence_free: false,
        }
    }

    pub fn zeros(grid: &Arc<Grid<T>>) -> Self {
        Self {
            x1: SpectralScalar::zeros(grid),
            x2: SpectralScalar::zeros(grid),
            divergence_free: true,
        }
    }

    pub fn from_fns(
        grid: &Arc<Grid<T>>,
        f1: impl Fn(T, T) -> T,
        f2: impl Fn(T, T) -> T,
    ) -> Self {
        Self::from_parts(SpectralScalar::from_fn(grid, f1), SpectralScalar::from_fn(grid, f2))
    }

    pub fn with_divergence_free(mut self, flag: bool) -> Self {
        self.divergence_free = flag;
        self
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid<T>> {
        self.x1.grid()
    }

    /// Rotation by +90°: `(a1, a2) -> (-a2, a1)`.
    pub fn perp(&self) -> Self {
        Self::from_parts(-&self.x2, self.x1.clone()).with_divergence_free(false)
    }

    pub fn l2_norm(&self) -> T {
        (self.x1.norm_sqr_coeffs() + self.x2.norm_sqr_coeffs()).sqrt() * T::lit(2.0) * T::PI()
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        Ok(self.x1.inner(&other.x1)? + self.x2.inner(&other.x2)?)
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            x1: self.x1.scale(c),
            x2: self.x2.scale(c),
            divergence_free: self.divergence_free,
        }
    }

    pub fn axpy(&self, c: T, other: &Self) -> Self {
        Self {
            x1: self.x1.axpy(c, &other.x1),
            x2: self.x2.axpy(c, &other.x2),
            divergence_free: self.divergence_free && other.divergence_free,
        }
    }

    pub fn dealiased(&self) -> Self {
        Self {
            x1: self.x1.dealiased(),
            x2: self.x2.dealiased(),
            divergence_free: self.divergence_free,
        }
    }

    pub fn apply_multiplier(&self, m: impl Fn(T, T) -> Complex<T> + Copy) -> Self {
        Self::from_parts(self.x1.apply_multiplier(m), self.x2.apply_multiplier(m))
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// Pointwise Euclidean magnitude on the grid.
    pub fn magnitude(&self) -> PhysicalField<T> {
        let (a, b) = (self.x1.to_physical(), self.x2.to_physical());
        a.zip_map(&b, |p, q| (p * p + q * q).sqrt())
    }
}

impl<'a, T: Real> Add<&'a SpectralVector<T>> for &'a SpectralVector<T> {
    type Output = SpectralVector<T>;
    fn add(self, rhs: &'a SpectralVector<T>) -> SpectralVector<T> {
        self.axpy(T::one(), rhs)
    }
}

impl<'a, T: Real> Sub<&'a SpectralVector<T>> for &'a SpectralVector<T> {
    type Output = SpectralVector<T>;
    fn sub(self, rhs: &'a SpectralVector<T>) -> SpectralVector<T> {
        self.axpy(-T::one(), rhs)
    }
}

impl<T: Real> Neg for &SpectralVector<T> {
    type Output = SpectralVector<T>;
    fn neg(self) -> SpectralVector<T> {
        self.scale(-T::one())
    }
}
