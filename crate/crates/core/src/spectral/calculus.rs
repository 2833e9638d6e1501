//! Exact spectral differentiation and the operators built from it.

use num_complex::Complex;

use super::field::{SpectralScalar, SpectralVector};
use crate::error::{Error, Result};
use crate::real::Real;

#[inline]
fn ik<T: Real>(k: T) -> Complex<T> {
    Complex::new(T::zero(), k)
}

impl<T: Real> SpectralScalar<T> {
    pub fn d1(&self) -> Self {
        self.apply_multiplier(|k1, _| ik(k1))
    }

    pub fn d2(&self) -> Self {
        self.apply_multiplier(|_, k2| ik(k2))
    }

    /// `∇f = (∂₁f, ∂₂f)`.
    pub fn gradient(&self) -> SpectralVector<T> {
        SpectralVector::from_parts(self.d1(), self.d2())
    }

    /// `∇⊥f = (-∂₂f, ∂₁f)`; always divergence-free.
    pub fn perp_gradient(&self) -> SpectralVector<T> {
        SpectralVector::from_parts(-&self.d2(), self.d1()).with_divergence_free(true)
    }

    pub fn laplacian(&self) -> Self {
        self.apply_multiplier(|k1, k2| Complex::new(-(k1 * k1 + k2 * k2), T::zero()))
    }

    pub fn bilaplacian(&self) -> Self {
        self.apply_multiplier(|k1, k2| {
            let k2s = k1 * k1 + k2 * k2;
            Complex::new(k2s * k2s, T::zero())
        })
    }

    /// `(-Δ)⁻¹f` for mean-zero `f`; the result is mean-zero.
    pub fn inverse_laplacian(&self) -> Result<Self> {
        let mean = self.mean();
        let scale = T::max(self.max_abs_coeff(), T::one());
        if mean.mag() > T::tol(1e-12) * scale {
            return Err(Error::NonZeroMean {
                mean: mean.as_f64(),
            });
        }
        Ok(self.inverse_laplacian_mean_free())
    }

    /// `(-Δ)⁻¹` on the nonzero modes; the mean is dropped.
    pub(crate) fn inverse_laplacian_mean_free(&self) -> Self {
        self.apply_multiplier(|k1, k2| {
            let k2s = k1 * k1 + k2 * k2;
            if k2s == T::zero() {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::one() / k2s, T::zero())
            }
        })
    }

    /// 2/3-rule product: both inputs truncated, product formed on the grid,
    /// output truncated.
    pub fn dealiased_product(&self, other: &Self) -> Result<Self> {
        self.grid().check_same(other.grid())?;
        Ok(self.product_unchecked(other))
    }

    pub(crate) fn product_unchecked(&self, other: &Self) -> Self {
        let p = &self.phys() * &other.phys();
        SpectralScalar::from_physical_dealiased(self.grid(), &p)
    }
}

impl<T: Real> SpectralVector<T> {
    /// `∇·F = ∂₁F₁ + ∂₂F₂`.
    pub fn divergence(&self) -> SpectralScalar<T> {
        &self.x1.d1() + &self.x2.d2()
    }

    /// `curl F = ∇⊥·F = ∂₁F₂ − ∂₂F₁`.
    pub fn curl(&self) -> SpectralScalar<T> {
        &self.x2.d1() - &self.x1.d2()
    }

    pub fn laplacian(&self) -> Self {
        SpectralVector::from_parts(self.x1.laplacian(), self.x2.laplacian())
            .with_divergence_free(self.divergence_free)
    }

    pub fn bilaplacian(&self) -> Self {
        SpectralVector::from_parts(self.x1.bilaplacian(), self.x2.bilaplacian())
            .with_divergence_free(self.divergence_free)
    }

    /// Largest `|k·F̂(k)| / |F̂(k)|` over nonzero modes.
    pub fn divergence_defect(&self) -> T {
        let grid = self.grid();
        let (a, b) = (self.x1.coeffs(), self.x2.coeffs());
        (0..grid.len()).fold(T::zero(), |m, idx| {
            let (k1, k2) = grid.kk(idx);
            let amp = (a[idx].norm_sqr() + b[idx].norm_sqr()).sqrt();
            let kn = (k1 * k1 + k2 * k2).sqrt();
            if amp == T::zero() || kn == T::zero() {
                m
            } else {
                T::max(m, (a[idx] * k1 + b[idx] * k2).norm() / (amp * kn))
            }
        })
    }
}

/// Biot–Savart law `u = −∇⊥(−Δ)⁻¹ω`.
pub fn biot_savart<T: Real>(omega: &SpectralScalar<T>) -> Result<SpectralVector<T>> {
    let psi = omega.inverse_laplacian()?;
    Ok((-&psi.perp_gradient()).with_divergence_free(true))
}

/// Helmholtz–Leray split `F = 𝐏F + ℚF` with `𝐏 = Id + ∇(−Δ)⁻¹∇·`.
///
/// The mean mode is kept in the divergence-free part.
pub fn leray_project<T: Real>(f: &SpectralVector<T>) -> (SpectralVector<T>, SpectralVector<T>) {
    let grid = f.grid();
    let (a, b) = (f.x1.coeffs(), f.x2.coeffs());
    let mut p1 = f.x1.clone();
    let mut p2 = f.x2.clone();
    {
        let (c1, c2) = (p1.coeffs_mut(), p2.coeffs_mut());
        for idx in 0..grid.len() {
            let (k1, k2) = grid.kk(idx);
            let k2s = k1 * k1 + k2 * k2;
            if k2s == T::zero() {
                continue;
            }
            let dot = (a[idx] * k1 + b[idx] * k2) / k2s;
            c1[idx] = a[idx] - dot * k1;
            c2[idx] = b[idx] - dot * k2;
        }
    }
    let p = SpectralVector::from_parts(p1, p2).with_divergence_free(true);
    let q = f - &p;
    (p, q)
}
