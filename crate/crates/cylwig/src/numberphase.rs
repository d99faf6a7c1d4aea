//! Fock-space embedding into the circle Hilbert space and the
//! number-phase Wigner function, together with phase states, phase and
//! number distributions, and POV interval probabilities.
//!
//! The number-phase Wigner function is the cylinder Wigner function of
//! the embedded state evaluated at Θ = −φ. That reflection is applied in
//! exactly one place (this module); all cylinder-side code is
//! reflection-free.

use crate::core::{
    AngleGrid, CylinderOperator, DensityOperator, Error, MomentumBand, Result, C64,
};
use crate::kernels::{check_admissibility, Flag, Kernel};
use crate::wigner::wigner_function;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Default tail-mass allowance for truncated analytic families.
pub const TAIL_ALLOWANCE: f64 = 1e-8;

/// A truncated Fock-space state vector with amplitudes c_0..c_{N_F}.
#[derive(Debug, Clone)]
pub struct FockVector {
    n_f: usize,
    amplitudes: DVector<C64>,
    tail_mass: f64,
}

impl FockVector {
    /// A normalized vector (Σ|c_n|² = 1 to `tol`), zero recorded tail.
    pub fn new(amplitudes: DVector<C64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("empty Fock vector".into()));
        }
        let norm2: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "Fock vector norm² = {norm2}, expected 1"
            )));
        }
        Ok(Self {
            n_f: amplitudes.len() - 1,
            amplitudes,
            tail_mass: 0.0,
        })
    }

    /// A truncation of an analytic family: `tail_mass` is the discarded
    /// probability beyond N_F, refused above the allowance so that
    /// downstream identity failures stay attributable.
    pub fn truncated(
        amplitudes: DVector<C64>,
        tail_mass: f64,
        allowance: Option<f64>,
    ) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("empty Fock vector".into()));
        }
        let allowance = allowance.unwrap_or(TAIL_ALLOWANCE);
        if tail_mass > allowance {
            return Err(Error::TailMass {
                tail: tail_mass,
                allowance,
            });
        }
        Ok(Self {
            n_f: amplitudes.len() - 1,
            amplitudes,
            tail_mass,
        })
    }

    /// An unnormalized vector (e.g. a phase state); no invariant checks.
    pub fn raw(amplitudes: DVector<C64>) -> Self {
        Self {
            n_f: amplitudes.len().saturating_sub(1),
            amplitudes,
            tail_mass: 0.0,
        }
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// The pure density |ψ⟩⟨ψ| (normalizing), as a FockDensity.
    pub fn density(&self, tol: f64) -> Result<FockDensity> {
        let n = self.amplitudes.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v = self.amplitudes.map(|c| c / C64::new(n, 0.0));
        let m = &v * v.adjoint();
        FockDensity::new(m, tol)
    }
}

/// A density matrix ϱ_{jk}, 0 ≤ j,k ≤ N_F (Hermitian, PSD, unit trace).
#[derive(Debug, Clone)]
pub struct FockDensity {
    n_f: usize,
    matrix: DMatrix<C64>,
}

impl FockDensity {
    pub fn new(matrix: DMatrix<C64>, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.is_empty() {
            return Err(Error::ShapeMismatch {
                expect_rows: matrix.nrows(),
                expect_cols: matrix.nrows(),
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let n_f = matrix.nrows() - 1;
        // reuse the density-operator invariant checks
        let band = MomentumBand::fock(n_f as u32);
        let op = CylinderOperator::new(band, matrix)?;
        let rho = DensityOperator::new(op, tol)?;
        Ok(Self {
            n_f,
            matrix: rho.matrix().clone(),
        })
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }
}

/// Embed a Fock vector into a cylinder band covering [0, N_F]; entries
/// below 0 (if the band extends there) stay zero.
pub fn embed_vector(psi: &FockVector, band: MomentumBand) -> Result<DVector<C64>> {
    if !band.contains(0) || !band.contains(psi.n_f as i64) {
        return Err(Error::BandTooSmall(band.dim(), psi.n_f + 1));
    }
    let mut v = DVector::zeros(band.dim());
    for n in 0..=psi.n_f {
        v[band.index(n as i64)?] = psi.amplitudes[n];
    }
    Ok(v)
}

/// Embed a Fock density matrix as a cylinder density operator.
pub fn embed_density(rho: &FockDensity, band: MomentumBand) -> Result<DensityOperator> {
    if !band.contains(0) || !band.contains(rho.n_f as i64) {
        return Err(Error::BandTooSmall(band.dim(), rho.n_f + 1));
    }
    let mut m = DMatrix::zeros(band.dim(), band.dim());
    for j in 0..=rho.n_f {
        for k in 0..=rho.n_f {
            m[(band.index(j as i64)?, band.index(k as i64)?)] = rho.matrix[(j, k)];
        }
    }
    DensityOperator::new(CylinderOperator::new(band, m)?, 1e-10)
}

/// Project a cylinder operator back onto the Fock block 0..=N_F (the Π̂
/// direction: negative indices are truncated).
pub fn project(op: &CylinderOperator, n_f: usize, tol: f64) -> Result<FockDensity> {
    let band = op.band();
    if !band.contains(0) || !band.contains(n_f as i64) {
        return Err(Error::BandTooSmall(band.dim(), n_f + 1));
    }
    let m = DMatrix::from_fn(n_f + 1, n_f + 1, |j, k| {
        op.matrix()[(
            band.index(j as i64).expect("contained"),
            band.index(k as i64).expect("contained"),
        )]
    });
    FockDensity::new(m, tol)
}

/// The number-phase Wigner function W(φ_j, n), n = 0..N_F, real-valued.
#[derive(Debug, Clone)]
pub struct NumberPhaseWigner {
    grid: AngleGrid,
    n_f: usize,
    values: DMatrix<f64>,
    kernel_name: String,
    max_imag: f64,
}

impl NumberPhaseWigner {
    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    /// rows = φ_j, columns = n
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn value(&self, j: usize, n: usize) -> f64 {
        self.values[(j, n)]
    }

    pub fn kernel_name(&self) -> &str {
        &self.kernel_name
    }

    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }
}

/// Gate: the kernel must produce a quantizer vanishing on negative
/// levels (checked analytically for the built-ins, numerically for
/// custom kernels).
pub fn require_admissible(kernel: &Kernel, n_f: usize, tol: f64) -> Result<()> {
    match kernel.flags().admissible {
        Flag::True => Ok(()),
        _ => {
            let report = check_admissibility(kernel, n_f as i64 + 2, 4, tol)?;
            if report.ok {
                Ok(())
            } else {
                let (j, k, n) = report.witness.unwrap_or((0, 0, -1));
                Err(Error::NotAdmissible {
                    name: kernel.name().to_string(),
                    l: j - k,
                    two_mu: j + k - 2 * n,
                    value: report.worst.into(),
                })
            }
        }
    }
}

/// Number-phase Wigner function for the default (symmetric) kernel:
/// W(φ,n) = (1/2π) Re[Σ_k e^{i(n−k)φ} ⟨k|ϱ̂|n⟩].
pub fn number_phase_wigner(rho: &FockDensity, grid: &AngleGrid) -> Result<NumberPhaseWigner> {
    number_phase_wigner_with_kernel(&Kernel::symmetric(), rho, grid)
}

/// Number-phase Wigner function for an arbitrary admissible kernel,
/// computed through the cylinder pipeline and reflected Θ = −φ.
pub fn number_phase_wigner_with_kernel(
    kernel: &Kernel,
    rho: &FockDensity,
    grid: &AngleGrid,
) -> Result<NumberPhaseWigner> {
    require_admissible(kernel, rho.n_f, 1e-10)?;
    let n_f = rho.n_f;
    let m = grid.len();
    if kernel.name() == "symmetric" {
        // direct formula (identical to the reflected cylinder route)
        let mut values = DMatrix::zeros(m, n_f + 1);
        for j in 0..m {
            let phi = grid.point(j);
            for n in 0..=n_f {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..=n_f {
                    s += C64::new(0.0, (n as f64 - k as f64) * phi).exp()
                        * rho.matrix[(k, n)];
                }
                values[(j, n)] = s.re / (2.0 * PI);
            }
        }
        return Ok(NumberPhaseWigner {
            grid: grid.clone(),
            n_f,
            values,
            kernel_name: kernel.name().to_string(),
            max_imag: 0.0,
        });
    }
    // generic route: embed, run the cylinder pipeline, reflect φ → −φ,
    // which on the uniform grid Θ_j = −π + 2πj/M is the index map
    // j ↦ (M − j) mod M
    let band = MomentumBand::fock(n_f as u32);
    let embedded = embed_density(rho, band)?;
    let w = wigner_function(kernel, &embedded, grid, 1.0)?;
    let mut values = DMatrix::zeros(m, n_f + 1);
    for j in 0..m {
        let jr = (m - j) % m;
        for n in 0..=n_f {
            values[(j, n)] = w.value(jr, n as i64)?;
        }
    }
    Ok(NumberPhaseWigner {
        grid: grid.clone(),
        n_f,
        values,
        kernel_name: kernel.name().to_string(),
        max_imag: w.max_imag(),
    })
}

/// The (unnormalized) phase state: amplitudes e^{inφ}/√(2π), n = 0..N_F.
pub fn phase_state(phi: f64, n_f: usize) -> FockVector {
    let amps = DVector::from_fn(n_f + 1, |n, _| {
        C64::new(0.0, n as f64 * phi).exp() / C64::new((2.0 * PI).sqrt(), 0.0)
    });
    FockVector::raw(amps)
}

/// Phase probability distribution P(φ_j) = ⟨φ|ϱ̂|φ⟩
/// = (1/2π){1 + 2 Re[Σ_{k<n} e^{i(n−k)φ} ϱ_{kn}]}.
pub fn phase_distribution(rho: &FockDensity, grid: &AngleGrid) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    for (j, p) in out.iter_mut().enumerate() {
        let phi = grid.point(j);
        let mut s = C64::new(0.0, 0.0);
        for k in 0..=rho.n_f {
            for n in (k + 1)..=rho.n_f {
                s += C64::new(0.0, (n - k) as f64 * phi).exp() * rho.matrix[(k, n)];
            }
        }
        *p = (1.0 + 2.0 * s.re) / (2.0 * PI);
    }
    out
}

/// Photon number probability distribution 𝒫(n) = ϱ_{nn}.
pub fn number_distribution(rho: &FockDensity) -> Vec<f64> {
    (0..=rho.n_f).map(|n| rho.matrix[(n, n)].re).collect()
}

/// Expectation of a phase observable f(φ) sampled on the grid:
/// ∫ f(φ) P(φ) dφ by the exact uniform quadrature.
pub fn phase_expectation(f: &[f64], rho: &FockDensity, grid: &AngleGrid) -> Result<f64> {
    if f.len() != grid.len() {
        return Err(Error::GridMismatch(f.len(), grid.len()));
    }
    let p = phase_distribution(rho, grid);
    Ok(f.iter()
        .zip(p.iter())
        .map(|(a, b)| a * b)
        .sum::<f64>()
        * grid.weight())
}

/// POV-measure interval probability Tr{ϱ̂ M₀([a,b])} = ∫_a^b P(φ) dφ,
/// integrating the finitely many Fourier modes of P analytically.
pub fn pov_interval_probability(rho: &FockDensity, a: f64, b: f64) -> Result<f64> {
    if !(-PI..PI).contains(&a) && a != -PI || b <= a || b > PI {
        return Err(Error::InvalidParameter(format!(
            "invalid phase interval [{a}, {b}] (need −π ≤ a < b ≤ π)"
        )));
    }
    // P(φ) = Σ_d p_d e^{idφ}, p_0 = 1/2π, p_d = (1/2π)Σ_k ϱ_{k,k+d} (d>0),
    // p_{-d} = p_d^*
    let mut total = (b - a) / (2.0 * PI);
    for d in 1..=rho.n_f {
        let mut pd = C64::new(0.0, 0.0);
        for k in 0..=(rho.n_f - d) {
            pd += rho.matrix[(k, k + d)];
        }
        pd /= C64::new(2.0 * PI, 0.0);
        // ∫_a^b (p_d e^{idφ} + c.c.) dφ = 2 Re[p_d (e^{idb} − e^{ida})/(id)]
        let id = C64::new(0.0, d as f64);
        let seg = (C64::new(0.0, d as f64 * b).exp() - C64::new(0.0, d as f64 * a).exp()) / id;
        total += 2.0 * (pd * seg).re;
    }
    Ok(total)
}
