//! Shared types: configuration, angle grids, momentum bands, phase-space
//! functions, operators, and density operators.

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("angle grid needs at least 3 points, got {0}")]
    GridTooSmall(usize),
    #[error("angle grid failed the quadrature exactness check at mode {mode}: |sum| = {residual:e}")]
    GridNotExact { mode: i64, residual: f64 },
    #[error("momentum band is empty: n_min = {n_min} > n_max = {n_max}")]
    EmptyBand { n_min: i64, n_max: i64 },
    #[error("momentum band mismatch: [{0}, {1}] vs [{2}, {3}]")]
    BandMismatch(i64, i64, i64, i64),
    #[error("angle grid mismatch: {0} vs {1} points")]
    GridMismatch(usize, usize),
    #[error("operation requires an odd number of grid points, got {0}")]
    GridMustBeOdd(usize),
    #[error("angle grid too coarse for band of dimension {dim}: need at least {need} points, got {got}")]
    GridTooCoarse { dim: usize, need: usize, got: usize },
    #[error("momentum index {0} is outside the band [{1}, {2}]")]
    OutOfBand(i64, i64, i64),
    #[error("value array has wrong shape: expected {expect_rows}x{expect_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expect_rows: usize,
        expect_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("kernel '{0}' does not admit a symbol map: {1}")]
    NonInvertibleKernel(String, String),
    #[error("kernel '{name}' multiplier vanishes (|K| = {magnitude:e} < {tol:e}) at sigma = {sigma}, l = {l}")]
    MultiplierVanishes {
        name: String,
        sigma: f64,
        l: i64,
        magnitude: f64,
        tol: f64,
    },
    #[error("kernel '{name}' fails the number-phase admissibility condition: I_K({l}, {two_mu}/2) = {value} (must match 2 pi delta for integer arguments and vanish for half-odd ones)")]
    NotAdmissible {
        name: String,
        l: i64,
        two_mu: i64,
        value: C64,
    },
    #[error("density operator is not Hermitian: max |rho - rho^dag| = {0:e}")]
    NotHermitian(f64),
    #[error("density operator is not positive semidefinite: min eigenvalue = {0:e}")]
    NotPositive(f64),
    #[error("density operator trace is {0} (must be 1 within tolerance)")]
    BadTrace(f64),
    #[error("state truncation too severe: tail mass {tail:e} exceeds allowance {allowance:e} (increase the Fock cutoff)")]
    TailMass { tail: f64, allowance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("band too small for this operation: dimension {0} < {1}")]
    BandTooSmall(usize, usize),
    #[error("could not parse state spec '{0}': {1}")]
    BadStateSpec(String, String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Global numerical configuration.
#[derive(Debug, Clone)]
pub struct Config {
    /// Planck constant; the momentum is L = n ħ.
    pub hbar: f64,
    /// Default tolerance for validity checks.
    pub tol: f64,
    /// Number of Gauss-Legendre nodes for kernel moment integrals.
    pub quad_nodes: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            hbar: 1.0,
            tol: 1e-10,
            quad_nodes: 257,
        }
    }
}

/// Uniform quadrature grid on the angle circle [-π, π).
///
/// Points are Θ_j = -π + 2πj/M with weight 2π/M each; this trapezoid rule
/// integrates e^{imΘ} exactly for all |m| < M, which is the property the
/// Fourier manipulations in this crate rely on. The property is asserted
/// at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    points: Vec<f64>,
}

impl AngleGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::GridTooSmall(m));
        }
        let points: Vec<f64> = (0..m).map(|j| -PI + 2.0 * PI * j as f64 / m as f64).collect();
        // Quadrature exactness: sum_j e^{i k Θ_j} must vanish for 0 < k < M.
        for k in 1..m as i64 {
            let mut s = C64::new(0.0, 0.0);
            for &t in &points {
                s += C64::new(0.0, k as f64 * t).exp();
            }
            if s.norm() > 1e-8 * m as f64 {
                return Err(Error::GridNotExact {
                    mode: k,
                    residual: s.norm(),
                });
            }
        }
        Ok(AngleGrid { points })
    }

    /// Smallest odd grid that resolves products of symbols on a band of
    /// dimension `dim`: at least 4·dim + 1 points.
    pub fn for_band(band: &MomentumBand) -> Result<Self> {
        let mut m = 4 * band.dim() + 1;
        if m % 2 == 0 {
            m += 1;
        }
        AngleGrid::new(m)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> f64 {
        self.points[j]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Quadrature weight 2π/M shared by all nodes.
    pub fn weight(&self) -> f64 {
        2.0 * PI / self.points.len() as f64
    }
}

/// Contiguous block of momentum quantum numbers n_min ..= n_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentumBand {
    n_min: i64,
    n_max: i64,
}

impl MomentumBand {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::EmptyBand { n_min, n_max });
        }
        Ok(MomentumBand { n_min, n_max })
    }

    /// Symmetric band [-n, n].
    pub fn symmetric(n: u32) -> Self {
        MomentumBand {
            n_min: -(n as i64),
            n_max: n as i64,
        }
    }

    /// Fock band [0, n_max], the natural home of embedded optical states.
    pub fn fock(n_max: u32) -> Self {
        MomentumBand {
            n_min: 0,
            n_max: n_max as i64,
        }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.n_min && n <= self.n_max
    }

    pub fn index(&self, n: i64) -> Result<usize> {
        if !self.contains(n) {
            return Err(Error::OutOfBand(n, self.n_min, self.n_max));
        }
        Ok((n - self.n_min) as usize)
    }

    pub fn n_at(&self, idx: usize) -> i64 {
        self.n_min + idx as i64
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }

    fn check_match(&self, other: &MomentumBand) -> Result<()> {
        if self != other {
            return Err(Error::BandMismatch(
                self.n_min,
                self.n_max,
                other.n_min,
                other.n_max,
            ));
        }
        Ok(())
    }
}

/// A phase-space function sampled on AngleGrid × MomentumBand.
///
/// Values are stored with the angle index as the row and the momentum
/// index as the column.
#[derive(Debug, Clone)]
pub struct CylinderFunction {
    grid: AngleGrid,
    band: MomentumBand,
    values: DMatrix<C64>,
    hbar: f64,
}

impl CylinderFunction {
    pub fn new(grid: AngleGrid, band: MomentumBand, values: DMatrix<C64>, hbar: f64) -> Result<Self> {
        if values.nrows() != grid.len() || values.ncols() != band.dim() {
            return Err(Error::ShapeMismatch {
                expect_rows: grid.len(),
                expect_cols: band.dim(),
                rows: values.nrows(),
                cols: values.ncols(),
            });
        }
        Ok(CylinderFunction {
            grid,
            band,
            values,
            hbar,
        })
    }

    pub fn from_fn<F>(grid: AngleGrid, band: MomentumBand, hbar: f64, f: F) -> Self
    where
        F: Fn(f64, i64) -> C64,
    {
        let values = DMatrix::from_fn(grid.len(), band.dim(), |j, c| {
            f(grid.point(j), band.n_at(c))
        });
        CylinderFunction {
            grid,
            band,
            values,
            hbar,
        }
    }

    pub fn zeros(grid: AngleGrid, band: MomentumBand, hbar: f64) -> Self {
        let values = DMatrix::zeros(grid.len(), band.dim());
        CylinderFunction {
            grid,
            band,
            values,
            hbar,
        }
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn band(&self) -> &MomentumBand {
        &self.band
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn values(&self) -> &DMatrix<C64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.values
    }

    /// Value at grid point j, momentum n.
    pub fn value(&self, j: usize, n: i64) -> Result<C64> {
        Ok(self.values[(j, self.band.index(n)?)])
    }

    /// Angular Fourier coefficient f̂(l, ·) = (1/2π) ∫ f(Θ, ·) e^{-ilΘ} dΘ
    /// by the grid quadrature, returned as a vector over the band.
    pub fn fourier_coeff(&self, l: i64) -> DVector<C64> {
        let w = self.grid.weight() / (2.0 * PI);
        let mut out = DVector::zeros(self.band.dim());
        for j in 0..self.grid.len() {
            let ph = C64::new(0.0, -(l as f64) * self.grid.point(j)).exp() * w;
            for c in 0..self.band.dim() {
                out[c] += ph * self.values[(j, c)];
            }
        }
        out
    }

    /// Rebuild grid values from angular modes: f(Θ, n) = Σ_l c_l(n) e^{ilΘ}.
    pub fn from_modes(
        grid: AngleGrid,
        band: MomentumBand,
        hbar: f64,
        modes: &[(i64, DVector<C64>)],
    ) -> Result<Self> {
        let mut out = CylinderFunction::zeros(grid, band, hbar);
        for (l, coeffs) in modes {
            if coeffs.len() != out.band.dim() {
                return Err(Error::ShapeMismatch {
                    expect_rows: out.grid.len(),
                    expect_cols: out.band.dim(),
                    rows: 1,
                    cols: coeffs.len(),
                });
            }
            for j in 0..out.grid.len() {
                let ph = C64::new(0.0, *l as f64 * out.grid.point(j)).exp();
                for c in 0..out.band.dim() {
                    out.values[(j, c)] += ph * coeffs[c];
                }
            }
        }
        Ok(out)
    }

    /// Phase-space integral Σ_n ∫ f(Θ, n) dΘ by the grid quadrature.
    pub fn integrate(&self) -> C64 {
        self.values.sum() * C64::new(self.grid.weight(), 0.0)
    }

    /// Largest absolute imaginary part over the grid.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Largest absolute value over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute value restricted to momenta at least `guard`
    /// indices away from either band edge.
    pub fn max_abs_interior(&self, guard: usize) -> f64 {
        let dim = self.band.dim();
        let mut out = 0.0f64;
        for c in 0..dim {
            if c < guard || c + guard >= dim {
                continue;
            }
            for j in 0..self.grid.len() {
                out = out.max(self.values[(j, c)].norm());
            }
        }
        out
    }

    pub fn check_compatible(&self, other: &CylinderFunction) -> Result<()> {
        self.band.check_match(&other.band)?;
        if self.grid.len() != other.grid.len() {
            return Err(Error::GridMismatch(self.grid.len(), other.grid.len()));
        }
        Ok(())
    }

    /// Pointwise linear combination a·self + b·other.
    pub fn axpy(&self, a: C64, other: &CylinderFunction, b: C64) -> Result<CylinderFunction> {
        self.check_compatible(other)?;
        let values = self.values.map(|z| a * z) + other.values.map(|z| b * z);
        CylinderFunction::new(self.grid.clone(), self.band, values, self.hbar)
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &CylinderFunction) -> Result<CylinderFunction> {
        self.check_compatible(other)?;
        let values = self.values.component_mul(&other.values);
        CylinderFunction::new(self.grid.clone(), self.band, values, self.hbar)
    }
}

/// A linear operator on the band Hilbert space span{|n⟩ : n ∈ band}.
#[derive(Debug, Clone)]
pub struct CylinderOperator {
    band: MomentumBand,
    matrix: DMatrix<C64>,
}

impl CylinderOperator {
    pub fn new(band: MomentumBand, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != band.dim() || matrix.ncols() != band.dim() {
            return Err(Error::ShapeMismatch {
                expect_rows: band.dim(),
                expect_cols: band.dim(),
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(CylinderOperator { band, matrix })
    }

    pub fn zeros(band: MomentumBand) -> Self {
        let matrix = DMatrix::zeros(band.dim(), band.dim());
        CylinderOperator { band, matrix }
    }

    pub fn identity(band: MomentumBand) -> Self {
        let matrix = DMatrix::identity(band.dim(), band.dim());
        CylinderOperator { band, matrix }
    }

    /// Projector |n⟩⟨n|.
    pub fn number_projector(band: MomentumBand, n: i64) -> Result<Self> {
        let idx = band.index(n)?;
        let mut op = CylinderOperator::zeros(band);
        op.matrix[(idx, idx)] = C64::new(1.0, 0.0);
        Ok(op)
    }

    pub fn band(&self) -> &MomentumBand {
        &self.band
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.matrix
    }

    /// Matrix element ⟨j|A|k⟩ in momentum labels.
    pub fn element(&self, j: i64, k: i64) -> Result<C64> {
        Ok(self.matrix[(self.band.index(j)?, self.band.index(k)?)])
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diagonal().sum()
    }

    pub fn adjoint(&self) -> CylinderOperator {
        CylinderOperator {
            band: self.band,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn mul(&self, other: &CylinderOperator) -> Result<CylinderOperator> {
        self.band.check_match(&other.band)?;
        Ok(CylinderOperator {
            band: self.band,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn axpy(&self, a: C64, other: &CylinderOperator, b: C64) -> Result<CylinderOperator> {
        self.band.check_match(&other.band)?;
        Ok(CylinderOperator {
            band: self.band,
            matrix: self.matrix.map(|z| a * z) + other.matrix.map(|z| b * z),
        })
    }

    pub fn scale(&self, a: C64) -> CylinderOperator {
        CylinderOperator {
            band: self.band,
            matrix: self.matrix.map(|z| a * z),
        }
    }

    /// Tr{self · other}.
    pub fn trace_product(&self, other: &CylinderOperator) -> Result<C64> {
        self.band.check_match(&other.band)?;
        let mut s = C64::new(0.0, 0.0);
        for a in 0..self.matrix.nrows() {
            for b in 0..self.matrix.ncols() {
                s += self.matrix[(a, b)] * other.matrix[(b, a)];
            }
        }
        Ok(s)
    }

    /// Max-norm distance from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.matrix - self.matrix.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to another operator.
    pub fn distance(&self, other: &CylinderOperator) -> Result<f64> {
        self.band.check_match(&other.band)?;
        let d = &self.matrix - &other.matrix;
        Ok(d.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

/// A validated density operator: Hermitian, positive semidefinite, unit
/// trace, all within the supplied tolerance.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: CylinderOperator,
}

impl DensityOperator {
    pub fn new(op: CylinderOperator, tol: f64) -> Result<Self> {
        let herm = op.hermiticity_defect();
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::BadTrace(tr.re));
        }
        // Symmetrize before the eigenvalue check so roundoff in the input
        // cannot produce spurious complex eigenvalues.
        let sym = op.matrix().map(|z| z * C64::new(0.5, 0.0))
            + op.matrix().adjoint().map(|z| z * C64::new(0.5, 0.0));
        let eig = sym.symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(DensityOperator { op })
    }

    /// Pure state ϱ = |ψ⟩⟨ψ| from band-indexed amplitudes (normalized here).
    pub fn pure(band: MomentumBand, amplitudes: &DVector<C64>) -> Result<Self> {
        if amplitudes.len() != band.dim() {
            return Err(Error::ShapeMismatch {
                expect_rows: band.dim(),
                expect_cols: 1,
                rows: amplitudes.len(),
                cols: 1,
            });
        }
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let psi = amplitudes.map(|z| z / C64::new(norm, 0.0));
        let matrix = DMatrix::from_fn(band.dim(), band.dim(), |a, b| psi[a] * psi[b].conj());
        Ok(DensityOperator {
            op: CylinderOperator::new(band, matrix)?,
        })
    }

    pub fn operator(&self) -> &CylinderOperator {
        &self.op
    }

    pub fn band(&self) -> &MomentumBand {
        self.op.band()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.op.matrix()
    }
}
