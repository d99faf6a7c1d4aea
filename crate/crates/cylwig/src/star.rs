//! Moyal and generalized star products on the cylinder, Moyal and
//! Poisson brackets, and star-genvalue residuals.
//!
//! The primary backend is the operator route: f ⋆ g is the symbol of
//! W[𝒦](f)·W[𝒦](g). At truncation this is exact for 𝒦 = 1 (the symbol
//! map is an exact right inverse of quantization), so the homomorphism
//! quantize(f ⋆ g) = quantize(f)·quantize(g) and associativity hold to
//! round-off. The triple-trace backend evaluates the defining double
//! quadrature over (Θ', n'), (Θ'', n'') independently and agrees with the
//! operator route on band interiors.

use crate::core::{CylinderFunction, CylinderOperator, Error, Result, C64};
use crate::kernels::{check_kernel_conditions, Flag, Kernel};
use crate::quantizer::{k_hat_apply, quantize, weyl_symbol, KHatMode, SymbolSolver};
use nalgebra::DMatrix;
#[cfg(test)]
use nalgebra::DVector;
use std::f64::consts::PI;

/// Star product backend selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarBackend {
    OperatorRoute,
    TripleTrace,
}

fn require_invertible(kernel: &Kernel, l_range: i64, tol: f64) -> Result<()> {
    if kernel.name() == "weyl" {
        return Ok(());
    }
    let nonvanishing = match kernel.flags().nonvanishing {
        Flag::True => true,
        Flag::False => false,
        Flag::Unknown => check_kernel_conditions(kernel, l_range, 64, tol)?
            .nonvanishing
            .ok,
    };
    if nonvanishing {
        Ok(())
    } else {
        Err(Error::NonInvertibleKernel(
            kernel.name().to_string(),
            "the generalized star product needs an invertible kernel operator".into(),
        ))
    }
}

/// Generalized star product f ⋆_[𝒦] g via the operator route
/// W⁻¹[𝒦](W[𝒦](f)·W[𝒦](g)).
pub fn star_product(
    kernel: &Kernel,
    f: &CylinderFunction,
    g: &CylinderFunction,
) -> Result<CylinderFunction> {
    f.check_compatible(g)?;
    require_invertible(kernel, f.band().dim() as i64, 1e-10)?;
    let wf = quantize(kernel, f)?;
    let wg = quantize(kernel, g)?;
    let prod = wf.mul(&wg)?;
    weyl_symbol(kernel, &prod, f.grid(), f.hbar(), 1e-10)
}

/// 𝒦 = 1 Moyal star product from the triple-trace integral: the double
/// quadrature Σ∫Σ∫ f(Θ',n') g(Θ'',n'') Tr{Ω̃(Θ,n) Ω[1](Θ',n') Ω[1](Θ'',n'')}
/// dΘ'dΘ''/(2π)², evaluated with the trace factored by bilinearity; the
/// outer factor is the truncation dual Ω̃ of the quantizer family (the
/// finite-band stand-in for the third Ω[1], see `SymbolSolver`).
pub fn star_product_trace(
    f: &CylinderFunction,
    g: &CylinderFunction,
) -> Result<CylinderFunction> {
    f.check_compatible(g)?;
    let band = *f.band();
    let grid = f.grid();
    let dim = band.dim();
    let kernel = Kernel::weyl();
    let scale = C64::new(grid.weight() / (2.0 * PI), 0.0);

    // Inner quadratures: A = Σ∫ f Ω dΘ'/2π, B = Σ∫ g Ω dΘ''/2π, built by
    // brute-force accumulation of quantizer matrices (independent of the
    // diagonal-by-diagonal path used by `quantize`).
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    let mut b = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..grid.len() {
        for n in band.iter() {
            let om = crate::quantizer::gsw_quantizer(&kernel, grid.point(j), n, band)?;
            let fv = f.value(j, n)? * scale;
            let gv = g.value(j, n)? * scale;
            a += om.matrix().map(|z| z * fv);
            b += om.matrix().map(|z| z * gv);
        }
    }
    let prod = CylinderOperator::new(band, &a * &b)?;
    // Outer trace against the dual family.
    let solver = SymbolSolver::new(band);
    let mut out = CylinderFunction::zeros(grid.clone(), band, f.hbar());
    for j in 0..grid.len() {
        for (ni, n) in band.iter().enumerate() {
            let dual = solver.dual_operator(grid.point(j), n)?;
            out.values_mut()[(j, ni)] = dual.trace_product(&prod)?;
        }
    }
    Ok(out)
}

/// Generalized Moyal bracket {f, g}_M = (f ⋆ g − g ⋆ f)/(iħ).
pub fn moyal_bracket(
    kernel: &Kernel,
    f: &CylinderFunction,
    g: &CylinderFunction,
    hbar: f64,
) -> Result<CylinderFunction> {
    let fg = star_product(kernel, f, g)?;
    let gf = star_product(kernel, g, f)?;
    let inv_ih = C64::new(0.0, -1.0 / hbar); // 1/(iħ)
    fg.axpy(inv_ih, &gf, -inv_ih)
}

/// Classical Poisson bracket ∂_Θf ∂_Lg − ∂_Lf ∂_Θg with spectral ∂_Θ and
/// central-difference ∂_L on the lattice L = nħ (one-sided at the band
/// edges).
pub fn poisson_bracket(f: &CylinderFunction, g: &CylinderFunction) -> Result<CylinderFunction> {
    f.check_compatible(g)?;
    if f.band().dim() < 5 {
        return Err(Error::BandTooSmall(f.band().dim(), 5));
    }
    let ft = d_theta(f)?;
    let fl = d_momentum(f);
    let gt = d_theta(g)?;
    let gl = d_momentum(g);
    let term1 = ft.pointwise_mul(&gl)?;
    let term2 = fl.pointwise_mul(&gt)?;
    term1.axpy(C64::new(1.0, 0.0), &term2, C64::new(-1.0, 0.0))
}

/// Spectral angular derivative: multiply mode l by il.
fn d_theta(f: &CylinderFunction) -> Result<CylinderFunction> {
    let m = f.grid().len();
    if m % 2 == 0 {
        return Err(Error::GridMustBeOdd(m));
    }
    let l_max = (m as i64 - 1) / 2;
    let mut modes = Vec::new();
    for l in -l_max..=l_max {
        if l == 0 {
            continue;
        }
        let mut c = f.fourier_coeff(l);
        for v in c.iter_mut() {
            *v *= C64::new(0.0, l as f64);
        }
        modes.push((l, c));
    }
    CylinderFunction::from_modes(f.grid().clone(), *f.band(), f.hbar(), &modes)
}

/// ∂/∂L by central differences on the momentum lattice (spacing ħ).
fn d_momentum(f: &CylinderFunction) -> CylinderFunction {
    let dim = f.band().dim();
    let h = f.hbar();
    let mut out = CylinderFunction::zeros(f.grid().clone(), *f.band(), h);
    let v = f.values();
    for j in 0..f.grid().len() {
        for c in 0..dim {
            out.values_mut()[(j, c)] = if c == 0 {
                (v[(j, 1)] - v[(j, 0)]) / C64::new(h, 0.0)
            } else if c == dim - 1 {
                (v[(j, dim - 1)] - v[(j, dim - 2)]) / C64::new(h, 0.0)
            } else {
                (v[(j, c + 1)] - v[(j, c - 1)]) / C64::new(2.0 * h, 0.0)
            };
        }
    }
    out
}

/// Max-norm of the star-genvalue residual f ⋆ ϱ_W − Λ ϱ_W on the
/// guard-band interior. For 𝒦 = 1 this is the plain Moyal form; a
/// general invertible kernel is reduced to it by
/// (K̂ᵀ f) ⋆ (K̂⁻¹ ϱ_W) = Λ K̂⁻¹ ϱ_W.
pub fn stargen_residual(
    kernel: &Kernel,
    f_sym: &CylinderFunction,
    rho_w: &CylinderFunction,
    lambda: f64,
    guard: usize,
) -> Result<f64> {
    f_sym.check_compatible(rho_w)?;
    let weyl = Kernel::weyl();
    let (f1, rho1) = if kernel.name() == "weyl" {
        (f_sym.clone(), rho_w.clone())
    } else {
        require_invertible(kernel, f_sym.band().dim() as i64, 1e-10)?;
        (
            k_hat_apply(kernel, f_sym, KHatMode::Transpose, 1e-10)?,
            k_hat_apply(kernel, rho_w, KHatMode::Inverse, 1e-10)?,
        )
    };
    let star = star_product(&weyl, &f1, &rho1)?;
    let resid = star.axpy(C64::new(1.0, 0.0), &rho1, C64::new(-lambda, 0.0))?;
    Ok(resid.max_abs_interior(guard))
}
