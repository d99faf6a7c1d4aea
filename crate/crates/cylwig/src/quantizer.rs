//! The generalized Stratonovich-Weyl quantizer Ω[𝒦](Θ, n), quantization
//! and dequantization of symbols, and the kernel operator K̂ as a Fourier
//! multiplier.
//!
//! All quantizer matrix elements route through one pinned formula,
//!
//!   ⟨j|Ω[𝒦](Θ, n)|k⟩ = (1/2π) · e^{-i(j-k)Θ} · I_K(j-k, (j+k)/2 - n),
//!
//! where I_K is the kernel half moment. Dequantization inverts
//! quantization diagonal-by-diagonal: on a finite band the textbook trace
//! formula Tr{Ω[1] Â} picks up O(1/dim) truncation error on odd
//! off-diagonals, so the symbol map instead solves the quantization
//! system exactly per angular mode, selecting the solution with minimal
//! band-edge mass. This makes quantize ∘ symbol the identity for every
//! operator and symbol ∘ quantize the identity on functions supported
//! away from the band edges.

use crate::core::{
    AngleGrid, CylinderFunction, CylinderOperator, Error, MomentumBand, Result, C64,
};
use crate::kernels::{check_kernel_conditions, Flag, Kernel};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// The unitary U(σ, l) with ⟨k+l|U|k⟩ = e^{iσ(k + l/2)}, truncated to the
/// band.
pub fn u_operator(sigma: f64, l: i64, band: MomentumBand) -> Result<CylinderOperator> {
    let dim = band.dim() as i64;
    if l.abs() > dim - 1 {
        return Err(Error::InvalidParameter(format!(
            "u_operator: |l| = {} exceeds band dimension - 1 = {}",
            l.abs(),
            dim - 1
        )));
    }
    let mut op = CylinderOperator::zeros(band);
    for k in band.iter() {
        if !band.contains(k + l) {
            continue;
        }
        let row = band.index(k + l)?;
        let col = band.index(k)?;
        let phase = sigma * (k as f64 + l as f64 / 2.0);
        op.matrix_mut()[(row, col)] = C64::new(0.0, phase).exp();
    }
    Ok(op)
}

/// Matrix of the GSW quantizer Ω[𝒦](Θ, n) from the pinned entry formula.
fn quantizer_matrix(kernel: &Kernel, theta: f64, n: i64, band: MomentumBand) -> DMatrix<C64> {
    let dim = band.dim();
    DMatrix::from_fn(dim, dim, |ji, ki| {
        let j = band.n_at(ji);
        let k = band.n_at(ki);
        let l = j - k;
        let moment = kernel.half_moment(l, j + k - 2 * n);
        C64::new(0.0, -(l as f64) * theta).exp() * moment / C64::new(2.0 * PI, 0.0)
    })
}

/// Closed form of Ω[𝒦_S](Θ, n): ½ e^{-i(j-k)Θ}(δ_{jn} + δ_{kn}).
fn symmetric_quantizer_matrix(theta: f64, n: i64, band: MomentumBand) -> DMatrix<C64> {
    let dim = band.dim();
    DMatrix::from_fn(dim, dim, |ji, ki| {
        let j = band.n_at(ji);
        let k = band.n_at(ki);
        let mut w = 0.0;
        if j == n {
            w += 0.5;
        }
        if k == n {
            w += 0.5;
        }
        if w == 0.0 {
            return C64::new(0.0, 0.0);
        }
        C64::new(0.0, -((j - k) as f64) * theta).exp() * C64::new(w, 0.0)
    })
}

/// GSW quantizer Ω[𝒦](Θ, n) on the band; the symmetric kernel takes its
/// delta closed form (the generic formula agrees, see tests).
pub fn gsw_quantizer(
    kernel: &Kernel,
    theta: f64,
    n: i64,
    band: MomentumBand,
) -> Result<CylinderOperator> {
    band.index(n)?;
    let matrix = if kernel.name() == "symmetric" {
        symmetric_quantizer_matrix(theta, n, band)
    } else {
        quantizer_matrix(kernel, theta, n, band)
    };
    CylinderOperator::new(band, matrix)
}

/// Lazily materialized family {Ω[𝒦](Θ_j, n)} over a grid × band.
pub struct QuantizerSet {
    kernel: Kernel,
    grid: AngleGrid,
    band: MomentumBand,
    cells: Vec<OnceLock<CylinderOperator>>,
}

impl QuantizerSet {
    pub fn new(kernel: Kernel, grid: AngleGrid, band: MomentumBand) -> Self {
        let mut cells = Vec::new();
        cells.resize_with(grid.len() * band.dim(), OnceLock::new);
        QuantizerSet {
            kernel,
            grid,
            band,
        cells,
        }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn band(&self) -> &MomentumBand {
        &self.band
    }

    /// Ω[𝒦](Θ_j, n), computed on first access (idempotent, safe under
    /// concurrent first access).
    pub fn operator(&self, j: usize, n: i64) -> Result<&CylinderOperator> {
        let n_idx = self.band.index(n)?;
        let cell = &self.cells[j * self.band.dim() + n_idx];
        Ok(cell.get_or_init(|| {
            gsw_quantizer(&self.kernel, self.grid.point(j), n, self.band)
                .expect("n validated above")
        }))
    }
}

/// Minimum angle-grid size for exact quantization on a band.
fn check_grid_for_band(grid: &AngleGrid, band: &MomentumBand) -> Result<()> {
    let need = 2 * band.dim() - 1;
    if grid.len() < need {
        return Err(Error::GridTooCoarse {
            dim: band.dim(),
            need,
            got: grid.len(),
        });
    }
    Ok(())
}

/// Quantization W[𝒦](f) = Σ_n ∫ f(Θ, nħ) Ω[𝒦](Θ, n) dΘ / 2π by exact
/// quadrature, assembled diagonal-by-diagonal from the entry formula.
pub fn quantize(kernel: &Kernel, f: &CylinderFunction) -> Result<CylinderOperator> {
    let band = *f.band();
    check_grid_for_band(f.grid(), &band)?;
    let dim = band.dim() as i64;
    let mut w = DMatrix::<C64>::zeros(band.dim(), band.dim());
    for l in -(dim - 1)..=(dim - 1) {
        let fhat = f.fourier_coeff(l);
        for ji in 0..band.dim() {
            let ki = ji as i64 - l;
            if ki < 0 || ki >= dim {
                continue;
            }
            let ki = ki as usize;
            let j = band.n_at(ji);
            let k = band.n_at(ki);
            let mut s = C64::new(0.0, 0.0);
            for (ni, n) in band.iter().enumerate() {
                s += fhat[ni] * kernel.half_moment(l, j + k - 2 * n);
            }
            w[(ji, ki)] = s / C64::new(2.0 * PI, 0.0);
        }
    }
    CylinderOperator::new(band, w)
}

/// Per-mode exact inverse of the 𝒦 = 1 quantization map on a finite band
/// ("dual quantizer"). For each angular mode l the quantization diagonal
/// is T_l c = d with T_l[s, n] = I₁(2s - 2n)/2π; even modes are permutation
/// systems, odd modes are solved exactly with the free band-edge mass
/// minimized (KKT system). The resulting right inverses satisfy
/// T_l S_l = I, so quantize ∘ symbol is the identity on all operators.
pub struct SymbolSolver {
    band: MomentumBand,
    /// mats[(l + dim - 1) as usize]: dim × (dim - |l|) map from diagonal
    /// data to mode coefficients.
    mats: Vec<DMatrix<f64>>,
}

impl SymbolSolver {
    pub fn new(band: MomentumBand) -> Self {
        let dim = band.dim();
        let mut mats = Vec::with_capacity(2 * dim - 1);
        for l in -(dim as i64 - 1)..=(dim as i64 - 1) {
            mats.push(Self::mode_matrix(dim, l));
        }
        SymbolSolver { band, mats }
    }

    fn mode_matrix(dim: usize, l: i64) -> DMatrix<f64> {
        let la = l.unsigned_abs() as usize;
        let p = dim - la;
        if l % 2 == 0 {
            // I₁(2s - 2n) = 2π δ_{n, s}: embed the diagonal data at n = s.
            let mut s = DMatrix::zeros(dim, p);
            for si in 0..p {
                s[(si + la / 2, si)] = 1.0;
            }
            return s;
        }
        // Odd mode: minimize ‖E c‖ subject to T c = d, with E selecting the
        // (|l|+1)/2 outermost coordinates on each side of the band.
        let m = (la + 1) / 2;
        let mut t = DMatrix::<f64>::zeros(p, dim);
        for si in 0..p {
            for ni in 0..dim {
                // two_s = 2·si + |l| (up to the band offset, which cancels)
                let two_mu = 2 * si as i64 + la as i64 - 2 * ni as i64;
                t[(si, ni)] = crate::kernels::i1_moment(two_mu) / (2.0 * PI);
            }
        }
        let size = dim + p;
        let mut kkt = DMatrix::<f64>::zeros(size, size);
        for ni in 0..dim {
            if ni < m || ni + m >= dim {
                kkt[(ni, ni)] = 1.0; // EᵀE
            }
        }
        for si in 0..p {
            for ni in 0..dim {
                kkt[(ni, dim + si)] = t[(si, ni)];
                kkt[(dim + si, ni)] = t[(si, ni)];
            }
        }
        let mut rhs = DMatrix::<f64>::zeros(size, p);
        for si in 0..p {
            rhs[(dim + si, si)] = 1.0;
        }
        let sol = kkt
            .lu()
            .solve(&rhs)
            .expect("band-edge KKT system is nonsingular");
        sol.rows(0, dim).into_owned()
    }

    pub fn band(&self) -> &MomentumBand {
        &self.band
    }

    fn mode_mat(&self, l: i64) -> &DMatrix<f64> {
        &self.mats[(l + self.band.dim() as i64 - 1) as usize]
    }

    /// The 𝒦 = 1 Weyl symbol of A on the grid.
    pub fn symbol(&self, a: &CylinderOperator, grid: &AngleGrid, hbar: f64) -> Result<CylinderFunction> {
        if a.band() != &self.band {
            return Err(Error::BandMismatch(
                a.band().n_min(),
                a.band().n_max(),
                self.band.n_min(),
                self.band.n_max(),
            ));
        }
        check_grid_for_band(grid, &self.band)?;
        let dim = self.band.dim();
        let mut modes = Vec::new();
        for l in -(dim as i64 - 1)..=(dim as i64 - 1) {
            let la = l.unsigned_abs() as usize;
            let p = dim - la;
            // Diagonal j - k = l of A.
            let mut d = DVector::<C64>::zeros(p);
            for si in 0..p {
                let ji = si + l.max(0) as usize;
                let ki = si + (-l).max(0) as usize;
                d[si] = a.matrix()[(ji, ki)];
            }
            let s = self.mode_mat(l);
            let mut c = DVector::<C64>::zeros(dim);
            for ni in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for si in 0..p {
                    acc += C64::new(s[(ni, si)], 0.0) * d[si];
                }
                c[ni] = acc;
            }
            modes.push((l, c));
        }
        CylinderFunction::from_modes(grid.clone(), self.band, hbar, &modes)
    }

    /// The dual quantizer Ω̃(Θ, n): the unique family with
    /// Tr{Ω̃(Θ, n) Â} = symbol(Â)(Θ, n) for the 𝒦 = 1 symbol above. It
    /// coincides with Ω[1] in the infinite-band limit.
    pub fn dual_operator(&self, theta: f64, n: i64) -> Result<CylinderOperator> {
        let ni = self.band.index(n)?;
        let dim = self.band.dim();
        let mut mat = DMatrix::<C64>::zeros(dim, dim);
        for l in -(dim as i64 - 1)..=(dim as i64 - 1) {
            let la = l.unsigned_abs() as usize;
            let p = dim - la;
            let s = self.mode_mat(l);
            let phase = C64::new(0.0, l as f64 * theta).exp();
            for si in 0..p {
                let ji = si + l.max(0) as usize;
                let ki = si + (-l).max(0) as usize;
                // Tr{Ω̃ Â} reads A[(ji, ki)] through Ω̃[(ki, ji)].
                mat[(ki, ji)] += phase * C64::new(s[(ni, si)], 0.0);
            }
        }
        CylinderOperator::new(self.band, mat)
    }
}

/// Multiplier mode for [`k_hat_apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KHatMode {
    Plain,
    Transpose,
    Inverse,
    InverseTranspose,
}

/// Apply the kernel operator K̂ (or its transpose / inverses) to a
/// phase-space function as an exact Fourier multiplier: Θ → l by discrete
/// Fourier series, n → σ at exactly dim uniform σ nodes (a bijection for
/// band-supported sequences). On the mode e^{i(lΘ + σn)} the plain
/// operator multiplies by 𝒦(-σ, -l) and the transpose by 𝒦(σ, l).
pub fn k_hat_apply(
    kernel: &Kernel,
    f: &CylinderFunction,
    mode: KHatMode,
    tol: f64,
) -> Result<CylinderFunction> {
    let m = f.grid().len();
    if m % 2 == 0 {
        return Err(Error::GridMustBeOdd(m));
    }
    let band = *f.band();
    let dim = band.dim();
    let l_max = (m as i64 - 1) / 2;
    let sigmas: Vec<f64> = (0..dim)
        .map(|i| -PI + 2.0 * PI * i as f64 / dim as f64)
        .collect();
    let mut modes = Vec::new();
    for l in -l_max..=l_max {
        let fhat = f.fourier_coeff(l);
        // n → σ
        let mut g = vec![C64::new(0.0, 0.0); dim];
        for (mi, &sigma) in sigmas.iter().enumerate() {
            for (ni, n) in band.iter().enumerate() {
                g[mi] += fhat[ni] * C64::new(0.0, -sigma * n as f64).exp();
            }
        }
        // multiply
        for (mi, &sigma) in sigmas.iter().enumerate() {
            let base = match mode {
                KHatMode::Plain | KHatMode::Inverse => kernel.eval(-sigma, -l),
                KHatMode::Transpose | KHatMode::InverseTranspose => kernel.eval(sigma, l),
            };
            let mult = match mode {
                KHatMode::Plain | KHatMode::Transpose => base,
                KHatMode::Inverse | KHatMode::InverseTranspose => {
                    if base.norm() < tol {
                        return Err(Error::MultiplierVanishes {
                            name: kernel.name().to_string(),
                            sigma,
                            l,
                            magnitude: base.norm(),
                            tol,
                        });
                    }
                    C64::new(1.0, 0.0) / base
                }
            };
            g[mi] *= mult;
        }
        // σ → n
        let mut out = DVector::<C64>::zeros(dim);
        for (ni, n) in band.iter().enumerate() {
            for (mi, &sigma) in sigmas.iter().enumerate() {
                out[ni] += g[mi] * C64::new(0.0, sigma * n as f64).exp();
            }
            out[ni] /= C64::new(dim as f64, 0.0);
        }
        modes.push((l, out));
    }
    CylinderFunction::from_modes(f.grid().clone(), band, f.hbar(), &modes)
}

/// Generalized Weyl symbol of Â for the kernel 𝒦.
///
/// 𝒦 = 1 uses the exact per-mode inverse ([`SymbolSolver`]); a general
/// nonvanishing kernel applies (K̂ᵀ)⁻¹ to the 𝒦 = 1 symbol. Kernels whose
/// multiplier vanishes (e.g. the symmetric kernel) are rejected: for
/// density operators under 𝒦_S use the wigner module's reconstruction,
/// which does not need the inverse.
pub fn weyl_symbol(
    kernel: &Kernel,
    a: &CylinderOperator,
    grid: &AngleGrid,
    hbar: f64,
    tol: f64,
) -> Result<CylinderFunction> {
    let solver = SymbolSolver::new(*a.band());
    let s1 = solver.symbol(a, grid, hbar)?;
    if kernel.name() == "weyl" {
        return Ok(s1);
    }
    let nonvanishing = match kernel.flags().nonvanishing {
        Flag::True => true,
        Flag::False => false,
        Flag::Unknown => {
            let report = check_kernel_conditions(kernel, a.band().dim() as i64, 64, tol)?;
            report.nonvanishing.ok
        }
    };
    if !nonvanishing {
        return Err(Error::NonInvertibleKernel(
            kernel.name().to_string(),
            "kernel multiplier has zeros, so the symbol map does not exist; \
             for density operators under the symmetric kernel use \
             wigner::reconstruct_density"
                .into(),
        ));
    }
    k_hat_apply(kernel, &s1, KHatMode::InverseTranspose, tol)
}

/// Report for the U(σ, l) trace identities in smeared form.
#[derive(Debug, Clone)]
pub struct TraceIdentityReport {
    /// max |Tr U(σ, l)| over probes with l ≠ 0 (must vanish exactly).
    pub offdiag_trace_worst: f64,
    /// worst |pairing − g(0)| for (1/2π)∫ g(σ) Tr U(σ, 0) dσ with trig
    /// polynomials g of degree ≤ the symmetric half-width.
    pub dirichlet_pairing_worst: f64,
    /// max |Tr{U†(σ,l) U(σ',l')}| over probes with l ≠ l'.
    pub orthogonality_offdiag_worst: f64,
    /// worst |pairing − g(0)| for the l = l' (even l) smeared form of the
    /// U-orthogonality identity.
    pub orthogonality_pairing_worst: f64,
    pub ok: bool,
}

/// Check Tr U(σ, l) = 2π δ_{l0} δ^{(S)}(σ) and the U-orthogonality
/// relation in smeared (distribution-paired) form on the largest
/// symmetric sub-band.
pub fn trace_identity_report(band: MomentumBand, tol: f64) -> Result<TraceIdentityReport> {
    let half = band.n_min().abs().min(band.n_max());
    let sym = MomentumBand::new(-half, half)?;
    let n = half;

    // l ≠ 0: strictly off-diagonal, trace must be exactly zero.
    let mut offdiag = 0.0f64;
    for l in 1..=(sym.dim() as i64 - 1) {
        for s in [-2.1, -0.3, 0.0, 0.7, 3.0] {
            for ll in [l, -l] {
                offdiag = offdiag.max(u_operator(s, ll, sym)?.trace().norm());
            }
        }
    }

    // Test polynomial g(σ) = Σ ĝ_m e^{imσ} of degree D ≤ N.
    let deg = n.min(2);
    let coeffs: Vec<(i64, C64)> = (-deg..=deg)
        .map(|mm| (mm, C64::new(1.0 / (1.0 + mm.abs() as f64), 0.1 * mm as f64)))
        .collect();
    let g = |s: f64| -> C64 {
        coeffs
            .iter()
            .map(|&(mm, c)| c * C64::new(0.0, mm as f64 * s).exp())
            .sum()
    };
    let g0: C64 = coeffs.iter().map(|&(_, c)| c).sum();

    // (1/2π) ∫ g(σ) Tr U(σ, 0) dσ = g(0) when deg g ≤ N.
    let m_sigma = (2 * (n + deg) + 3) as usize;
    let qgrid = AngleGrid::new(m_sigma)?;
    let mut pairing = C64::new(0.0, 0.0);
    for j in 0..qgrid.len() {
        let s = qgrid.point(j);
        pairing += g(s) * u_operator(s, 0, sym)?.trace() * C64::new(qgrid.weight() / (2.0 * PI), 0.0);
    }
    let dirichlet_worst = (pairing - g0).norm();

    // Orthogonality: l ≠ l' exactly zero.
    let mut ortho_off = 0.0f64;
    for (l, lp) in [(0i64, 1i64), (1, 2), (-1, 2), (0, 2)] {
        if l.abs() > n || lp.abs() > n {
            continue;
        }
        for s in [-1.0, 0.4] {
            for sp in [0.0, 2.2] {
                let tr = u_operator(s, l, sym)?
                    .adjoint()
                    .trace_product(&u_operator(sp, lp, sym)?)?;
                ortho_off = ortho_off.max(tr.norm());
            }
        }
    }

    // l = l' even: (1/2π) ∫ g(σ−σ') Tr{U†(σ,l)U(σ',l)} dσ' = g(0) for
    // deg g ≤ N − |l|/2 (half-integer prefactors keep odd l outside the
    // periodic pairing).
    let mut ortho_pair = 0.0f64;
    for l in [0i64, 2] {
        if l / 2 + deg > n {
            continue;
        }
        let sigma0 = 0.9;
        let u0 = u_operator(sigma0, l, sym)?.adjoint();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..qgrid.len() {
            let delta = qgrid.point(j);
            // σ' = σ0 − δ wraps around the circle; U entries are 2π-periodic
            // in σ only through e^{iσ(k + l/2)}, periodic for even l.
            let up = u_operator(sigma0 - delta, l, sym)?;
            acc += g(delta) * u0.trace_product(&up)? * C64::new(qgrid.weight() / (2.0 * PI), 0.0);
        }
        ortho_pair = ortho_pair.max((acc - g0).norm());
    }

    let ok = offdiag <= tol && dirichlet_worst <= tol && ortho_off <= tol && ortho_pair <= tol;
    Ok(TraceIdentityReport {
        offdiag_trace_worst: offdiag,
        dirichlet_pairing_worst: dirichlet_worst,
        orthogonality_offdiag_worst: ortho_off,
        orthogonality_pairing_worst: ortho_pair,
        ok,
    })
}

/// One verdict of the quantizer property report.
#[derive(Debug, Clone, Copy)]
pub struct PropertyVerdict {
    pub worst: f64,
    pub ok: bool,
}

/// Structural properties of the quantizer family on a grid × band.
#[derive(Debug, Clone)]
pub struct QuantizerPropertyReport {
    pub kernel: String,
    /// |Tr Ω(Θ, n) − 1| over all grid points and n.
    pub unit_trace: PropertyVerdict,
    /// ‖Ω − Ω†‖_max over all grid points and n.
    pub hermiticity: PropertyVerdict,
    /// Σ_n Ω(Θ, n)/2π vs the angle projector entries e^{-i(j-k)Θ}/2π
    /// (exact at truncation only for kernels with delta-sharp moments,
    /// e.g. 𝒦_S; for 𝒦 = 1 this converges like 1/dim).
    pub angle_projector: PropertyVerdict,
    /// (1/2π)∫ Ω(Θ, n) dΘ vs |n⟩⟨n|.
    pub momentum_projector: PropertyVerdict,
    /// Smeared overlap identity: Tr{Ω(Θ,n)Ω(Θ',n')} paired with a
    /// band-limited test function of Θ−Θ', compared against the kernel
    /// product integral, on interior (n, n').
    pub overlap_smeared: PropertyVerdict,
}

/// Verify the quantizer family properties (unit trace, Hermiticity, both
/// marginal projector identities, and the smeared overlap identity).
pub fn quantizer_property_report(
    kernel: &Kernel,
    grid: &AngleGrid,
    band: MomentumBand,
    tol: f64,
) -> Result<QuantizerPropertyReport> {
    check_grid_for_band(grid, &band)?;
    let set = QuantizerSet::new(kernel.clone(), grid.clone(), band);
    let dim = band.dim();

    let mut trace_worst = 0.0f64;
    let mut herm_worst = 0.0f64;
    let mut angle_worst = 0.0f64;
    for j in 0..grid.len() {
        let theta = grid.point(j);
        let mut sum = DMatrix::<C64>::zeros(dim, dim);
        for n in band.iter() {
            let om = set.operator(j, n)?;
            trace_worst = trace_worst.max((om.trace() - C64::new(1.0, 0.0)).norm());
            herm_worst = herm_worst.max(om.hermiticity_defect());
            sum += om.matrix();
        }
        for ji in 0..dim {
            for ki in 0..dim {
                let l = (band.n_at(ji) - band.n_at(ki)) as f64;
                let expect = C64::new(0.0, -l * theta).exp();
                angle_worst = angle_worst.max((sum[(ji, ki)] - expect).norm());
            }
        }
    }
    // normalize: both sides carry 1/2π
    angle_worst /= 2.0 * PI;

    let mut momentum_worst = 0.0f64;
    for n in band.iter() {
        let mut avg = DMatrix::<C64>::zeros(dim, dim);
        for j in 0..grid.len() {
            avg += set.operator(j, n)?.matrix().map(|z| {
                z * C64::new(grid.weight() / (2.0 * PI), 0.0)
            });
        }
        let ni = band.index(n)?;
        for ji in 0..dim {
            for ki in 0..dim {
                let expect = if ji == ni && ki == ni {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                momentum_worst = momentum_worst.max((avg[(ji, ki)] - expect).norm());
            }
        }
    }

    // Smeared overlap identity with g(δ) of degree 2, interior (n, n').
    let deg = 2i64;
    let coeffs: Vec<(i64, C64)> = (-deg..=deg)
        .map(|mm| (mm, C64::new(0.7 / (1.0 + mm.abs() as f64), 0.05 * mm as f64)))
        .collect();
    let g = |d: f64| -> C64 {
        coeffs
            .iter()
            .map(|&(mm, c)| c * C64::new(0.0, mm as f64 * d).exp())
            .sum()
    };
    // RHS mode integrals J(l, Δn) = ∫ 𝒦(σ,l)𝒦(−σ,−l) e^{iσΔn} dσ by
    // Gauss-Legendre quadrature of the product kernel.
    let (nodes, weights) = crate::kernels::gauss_legendre(257);
    let j_int = |l: i64, dn: i64| -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (&x, &w) in nodes.iter().zip(weights.iter()) {
            let sigma = PI * x;
            s += kernel.eval(sigma, l)
                * kernel.eval(-sigma, -l)
                * C64::new(0.0, sigma * dn as f64).exp()
                * C64::new(PI * w, 0.0);
        }
        s
    };
    let margin = (deg as usize + 1).min(dim / 2);
    let mut overlap_worst = 0.0f64;
    for ni in margin..dim.saturating_sub(margin) {
        for npi in margin..dim.saturating_sub(margin) {
            let n = band.n_at(ni);
            let np = band.n_at(npi);
            if (n - np).abs() > 3 {
                continue;
            }
            // LHS pairing: (1/2π) ∫ g(Θ) Tr{Ω(Θ,n)Ω(0,n')} dΘ
            let om0 = gsw_quantizer(kernel, 0.0, np, band)?;
            let mut lhs = C64::new(0.0, 0.0);
            for j in 0..grid.len() {
                let tr = set.operator(j, n)?.trace_product(&om0)?;
                lhs += g(grid.point(j)) * tr * C64::new(grid.weight() / (2.0 * PI), 0.0);
            }
            // RHS pairing: (1/2π) Σ_l ĝ_{-l} J(l, n - n') with ĝ from the
            // explicit coefficients.
            let mut rhs = C64::new(0.0, 0.0);
            for &(mm, c) in &coeffs {
                // mode e^{imδ} of g pairs the l = -m term of the RHS series
                rhs += c * j_int(-mm, n - np) / C64::new(2.0 * PI, 0.0);
            }
            overlap_worst = overlap_worst.max((lhs - rhs).norm());
        }
    }

    Ok(QuantizerPropertyReport {
        kernel: kernel.name().to_string(),
        unit_trace: PropertyVerdict {
            worst: trace_worst,
            ok: trace_worst <= tol,
        },
        hermiticity: PropertyVerdict {
            worst: herm_worst,
            ok: herm_worst <= tol,
        },
        angle_projector: PropertyVerdict {
            worst: angle_worst,
            ok: angle_worst <= tol,
        },
        momentum_projector: PropertyVerdict {
            worst: momentum_worst,
            ok: momentum_worst <= tol,
        },
        overlap_smeared: PropertyVerdict {
            worst: overlap_worst,
            ok: overlap_worst <= tol,
        },
    })
}
