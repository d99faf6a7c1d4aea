//! Generalized Weyl quantization on the cylinder phase space S¹ × ℝ.
//!
//! A particle on a circle (or equivalently the number-phase degree of
//! freedom of a single field mode) lives on the cylindrical phase space
//! with a compact angle Θ ∈ [-π, π) and a discrete conjugate momentum
//! n ∈ ℤ (in units of ħ). This crate implements:
//!
//! * a family of quantizers Ω[𝒦](Θ, n) parametrized by a kernel 𝒦(σ, l),
//!   including the Weyl kernel 𝒦 = 1 and the symmetric kernel
//!   𝒦_S = cos(σ l / 2);
//! * quantization of phase-space symbols, recovery of symbols from
//!   operators, and the induced star product with its ħ → 0 limit;
//! * Wigner functions on the cylinder, marginals, expectation values,
//!   and reconstruction of the density matrix from the Wigner function;
//! * the number-phase Wigner function of quantum optics obtained by
//!   embedding Fock-space states in the cylinder framework, together
//!   with analytic reference formulas for coherent, squeezed, thermal
//!   and Fock-cat states.

pub mod core;
pub mod kernels;
pub mod quantizer;
pub mod star;
pub mod wigner;
pub mod numberphase;
pub mod states;
pub mod cli;

pub use crate::core::{
    AngleGrid, Config, CylinderFunction, CylinderOperator, DensityOperator, Error, MomentumBand,
    Result, C64,
};
