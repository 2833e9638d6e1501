//! Building blocks: the odd stress, the bilinear form `𝓑`, the trilinear
//! term and the good unknowns.

use super::{phys, relative_divergence, sum_of_products, FlowState, GoodUnknowns};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::spectral::{PhysicalField, SpectralScalar, SpectralVector};

/// `σ ∇·(ρ∇u⊥)` in divergence form: `Σ_j ∂_j 𝐏(ρ ∂_j u⊥)`.
pub fn odd_stress_divergence<T: Real>(state: &FlowState<T>) -> SpectralVector<T> {
    let grid = state.grid();
    let rho = state.rho_physical();
    let w = state.u.perp();
    let component = |wi: &SpectralScalar<T>| {
        let f1 = sum_of_products(grid, &[(&rho, &phys(&wi.d1()))]);
        let f2 = sum_of_products(grid, &[(&rho, &phys(&wi.d2()))]);
        &f1.d1() + &f2.d2()
    };
    SpectralVector::new(component(&w.x1), component(&w.x2))
        .expect("components share the state grid")
        .scale(state.odd_sign)
}

/// `σ (ρΔu⊥ + (∇ρ·∇)u⊥)`, the expanded form of [`odd_stress_divergence`].
pub fn odd_stress_divergence_expanded<T: Real>(state: &FlowState<T>) -> SpectralVector<T> {
    let grid = state.grid();
    let rho = state.rho_physical();
    let (r1, r2) = (phys(&state.rho.d1()), phys(&state.rho.d2()));
    let w = state.u.perp();
    let component = |wi: &SpectralScalar<T>| {
        sum_of_products(
            grid,
            &[
                (&rho, &phys(&wi.laplacian())),
                (&r1, &phys(&wi.d1())),
                (&r2, &phys(&wi.d2())),
            ],
        )
    };
    SpectralVector::new(component(&w.x1), component(&w.x2))
        .expect("components share the state grid")
        .scale(state.odd_sign)
}

/// `𝓑(∇v, ∇²α) = ∂₁∂₂α (∂₁v₂ + ∂₂v₁) + ∂₁v₁ (∂₁²α − ∂₂²α)` for divergence-free `v`.
pub fn bilinear_b<T: Real>(v: &SpectralVector<T>, alpha: &SpectralScalar<T>) -> Result<SpectralScalar<T>> {
    v.grid().check_same(alpha.grid())?;
    let rel = relative_divergence(v);
    if rel > T::tol(1e-10) {
        return Err(Error::NotDivergenceFree {
            relative: rel.as_f64(),
        });
    }
    Ok(b_form(v, alpha))
}

pub(crate) fn b_form<T: Real>(v: &SpectralVector<T>, alpha: &SpectralScalar<T>) -> SpectralScalar<T> {
    let a1 = alpha.d1();
    let a12 = phys(&a1.d2());
    let a11 = a1.d1();
    let a22 = alpha.d2().d2();
    let diff = phys(&(&a11 - &a22));
    let shear = phys(&(&v.x2.d1() + &v.x1.d2()));
    let stretch = phys(&v.x1.d1());
    sum_of_products(alpha.grid(), &[(&a12, &shear), (&stretch, &diff)])
}

/// `curl((∇α·∇)v⊥)`, which equals `𝓑(∇v, ∇²α)` when `∇·v = 0`.
pub fn bilinear_b_curl_form<T: Real>(
    v: &SpectralVector<T>,
    alpha: &SpectralScalar<T>,
) -> Result<SpectralScalar<T>> {
    v.grid().check_same(alpha.grid())?;
    let g = (phys(&alpha.d1()), phys(&alpha.d2()));
    let w = v.perp();
    let transport = directional(alpha.grid(), &g, &w);
    Ok(transport.curl())
}

/// `(g·∇)w` with `g` given by grid samples.
pub(crate) fn directional<T: Real>(
    grid: &std::sync::Arc<crate::spectral::Grid<T>>,
    g: &(PhysicalField<T>, PhysicalField<T>),
    w: &SpectralVector<T>,
) -> SpectralVector<T> {
    let c = |wi: &SpectralScalar<T>| {
        sum_of_products(grid, &[(&g.0, &phys(&wi.d1())), (&g.1, &phys(&wi.d2()))])
    };
    SpectralVector::new(c(&w.x1), c(&w.x2)).expect("common grid")
}

/// `∇⊥ρ·∇|u|²`, with `|u|²` formed as a dealiased product.
pub fn trilinear_t<T: Real>(state: &FlowState<T>) -> SpectralScalar<T> {
    let grid = state.grid();
    let (u1, u2) = (phys(&state.u.x1), phys(&state.u.x2));
    let q = sum_of_products(grid, &[(&u1, &u1), (&u2, &u2)]);
    let rp = state.rho.perp_gradient();
    sum_of_products(
        grid,
        &[
            (&phys(&rp.x1), &phys(&q.d1())),
            (&phys(&rp.x2), &phys(&q.d2())),
        ],
    )
}

/// `−2 (u₂ ∂₁u·∇ρ − u₁ ∂₂u·∇ρ)`, the expanded cubic form of [`trilinear_t`].
pub fn trilinear_t_expanded<T: Real>(state: &FlowState<T>) -> SpectralScalar<T> {
    let grid = state.grid();
    let u = &state.u;
    let (u1, u2) = (phys(&u.x1), phys(&u.x2));
    let (r1, r2) = (phys(&state.rho.d1()), phys(&state.rho.d2()));
    let d = |f: &SpectralScalar<T>| (phys(&f.d1()), phys(&f.d2()));
    let (u1_1, u1_2) = d(&u.x1);
    let (u2_1, u2_2) = d(&u.x2);
    let two = T::lit(2.0);
    let values = (0..u1.values().len())
        .map(|i| {
            let g1 = u1_1.values()[i] * r1.values()[i] + u2_1.values()[i] * r2.values()[i];
            let g2 = u1_2.values()[i] * r1.values()[i] + u2_2.values()[i] * r2.values()[i];
            -two * (u2.values()[i] * g1 - u1.values()[i] * g2)
        })
        .collect();
    let p = PhysicalField::new(grid.n(), values).expect("grid-sized samples");
    SpectralScalar::from_physical_dealiased(grid, &p)
}

/// `ω = curl u`, `η = curl 𝐏(ρu)`, `θ = η − σΔρ`.
pub fn good_unknowns<T: Real>(state: &FlowState<T>) -> GoodUnknowns<T> {
    let grid = state.grid();
    let rho = state.rho_physical();
    let m = SpectralVector::new(
        sum_of_products(grid, &[(&rho, &phys(&state.u.x1))]),
        sum_of_products(grid, &[(&rho, &phys(&state.u.x2))]),
    )
    .expect("common grid");
    let omega = state.u.curl();
    let eta = m.curl();
    let theta = eta.axpy(-state.odd_sign, &state.rho.laplacian());
    GoodUnknowns { omega, eta, theta }
}

/// `η = 𝐏(ρω) + 𝐏(∇⊥ρ·u)`.
pub fn eta_expanded<T: Real>(state: &FlowState<T>) -> SpectralScalar<T> {
    let grid = state.grid();
    let rho = state.rho_physical();
    let omega = phys(&state.u.curl());
    let rp = state.rho.perp_gradient();
    sum_of_products(
        grid,
        &[
            (&rho, &omega),
            (&phys(&rp.x1), &phys(&state.u.x1)),
            (&phys(&rp.x2), &phys(&state.u.x2)),
        ],
    )
}
