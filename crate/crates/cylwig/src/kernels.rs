//! Quantization kernels 𝒦(σ, l), their half-integer σ-moments
//! I_K(l, μ) = ∫_{-π}^{π} 𝒦(σ, l) e^{iσμ} dσ, and checks of the
//! structural conditions a kernel must satisfy.

use crate::core::{Error, Result, C64};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

/// Kernel evaluation 𝒦(σ, l).
pub type KernelEval = Arc<dyn Fn(f64, i64) -> C64 + Send + Sync>;
/// Analytic half moment I_K(l, μ); μ is passed doubled (two_mu = 2μ) so
/// half-integers stay exact.
pub type HalfMomentFn = Arc<dyn Fn(i64, i64) -> C64 + Send + Sync>;

/// Three-valued condition flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    True,
    False,
    Unknown,
}

/// A priori knowledge about a kernel; `Unknown` entries are resolved by
/// [`check_kernel_conditions`] / [`check_admissibility`].
#[derive(Debug, Clone, Copy)]
pub struct KernelFlags {
    /// 𝒦(0, l) = 1 for all l — Θ-functions quantize to f(Θ̂).
    pub cond_theta: Flag,
    /// 𝒦(σ, 0) = 1 — L-functions quantize to f(L̂).
    pub cond_l: Flag,
    /// 𝒦*(σ, l) = 𝒦(-σ, -l) — real symbols quantize to Hermitian operators.
    pub cond_sym: Flag,
    /// |𝒦(σ, l)| > 0 everywhere — the symbol map inverts the quantizer.
    pub nonvanishing: Flag,
    /// Half moments vanish on the negative-n sector — the kernel is usable
    /// for number-phase Wigner functions on n ≥ 0.
    pub admissible: Flag,
}

impl KernelFlags {
    pub fn unknown() -> Self {
        KernelFlags {
            cond_theta: Flag::Unknown,
            cond_l: Flag::Unknown,
            cond_sym: Flag::Unknown,
            nonvanishing: Flag::Unknown,
            admissible: Flag::Unknown,
        }
    }
}

/// The moment I₁(μ) = ∫_{-π}^{π} e^{iσμ} dσ of the constant kernel, with
/// μ = two_mu / 2, evaluated by exact case analysis: 2π at μ = 0, zero at
/// other integers, ±4/two_mu at half-odd μ.
pub fn i1_moment(two_mu: i64) -> f64 {
    if two_mu == 0 {
        2.0 * PI
    } else if two_mu % 2 == 0 {
        0.0
    } else {
        // 2 sin(πμ)/μ is even in μ; for half-odd μ it equals
        // 4·(−1)^{(|two_mu|−1)/2} / |two_mu|.
        let a = two_mu.abs();
        let sign = if ((a - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        4.0 * sign / a as f64
    }
}

/// A quantization kernel with optional analytic moments.
#[derive(Clone)]
pub struct Kernel {
    name: String,
    eval: KernelEval,
    analytic_half_moment: Option<HalfMomentFn>,
    quad_nodes: usize,
    flags: KernelFlags,
}

impl std::fmt::Debug for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.name)
            .field("quad_nodes", &self.quad_nodes)
            .field("flags", &self.flags)
            .finish()
    }
}

impl Kernel {
    /// The Weyl kernel 𝒦 ≡ 1.
    pub fn weyl() -> Self {
        Kernel {
            name: "weyl".into(),
            eval: Arc::new(|_, _| C64::new(1.0, 0.0)),
            analytic_half_moment: Some(Arc::new(|_, two_mu| C64::new(i1_moment(two_mu), 0.0))),
            quad_nodes: 257,
            flags: KernelFlags {
                cond_theta: Flag::True,
                cond_l: Flag::True,
                cond_sym: Flag::True,
                nonvanishing: Flag::True,
                admissible: Flag::False,
            },
        }
    }

    /// The symmetric-ordering kernel 𝒦_S(σ, l) = cos(σ l / 2).
    pub fn symmetric() -> Self {
        Kernel {
            name: "symmetric".into(),
            eval: Arc::new(|sigma, l| C64::new((sigma * l as f64 / 2.0).cos(), 0.0)),
            analytic_half_moment: Some(Arc::new(|l, two_mu| {
                // cos(σl/2) e^{iσμ} averages the 𝒦=1 moments at μ ± l/2.
                C64::new(0.5 * (i1_moment(two_mu + l) + i1_moment(two_mu - l)), 0.0)
            })),
            quad_nodes: 257,
            flags: KernelFlags {
                cond_theta: Flag::True,
                cond_l: Flag::True,
                cond_sym: Flag::True,
                nonvanishing: Flag::False,
                admissible: Flag::True,
            },
        }
    }

    /// A user-supplied kernel; moments fall back to Gauss-Legendre
    /// quadrature with `quad_nodes` nodes, and all flags start unknown.
    pub fn custom(name: impl Into<String>, eval: KernelEval, quad_nodes: usize) -> Result<Self> {
        if quad_nodes < 3 || quad_nodes % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "quad_nodes must be odd and at least 3, got {quad_nodes}"
            )));
        }
        Ok(Kernel {
            name: name.into(),
            eval,
            analytic_half_moment: None,
            quad_nodes,
            flags: KernelFlags::unknown(),
        })
    }

    /// Builtin kernels by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "weyl" => Ok(Kernel::weyl()),
            "symmetric" => Ok(Kernel::symmetric()),
            other => Err(Error::InvalidParameter(format!(
                "unknown kernel '{other}' (builtin kernels: weyl, symmetric)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> &KernelFlags {
        &self.flags
    }

    pub fn set_flags(&mut self, flags: KernelFlags) {
        self.flags = flags;
    }

    pub fn eval(&self, sigma: f64, l: i64) -> C64 {
        (self.eval)(sigma, l)
    }

    /// I_K(l, μ) with μ = two_mu / 2: analytic when available, otherwise
    /// Gauss-Legendre quadrature of the defining integral.
    pub fn half_moment(&self, l: i64, two_mu: i64) -> C64 {
        if let Some(hm) = &self.analytic_half_moment {
            return hm(l, two_mu);
        }
        self.half_moment_quadrature(l, two_mu)
    }

    /// The quadrature route, always available (used to cross-check
    /// analytic moments).
    pub fn half_moment_quadrature(&self, l: i64, two_mu: i64) -> C64 {
        let (nodes, weights) = gauss_legendre(self.quad_nodes);
        let mu = two_mu as f64 / 2.0;
        let mut s = C64::new(0.0, 0.0);
        for (&x, &w) in nodes.iter().zip(weights.iter()) {
            let sigma = PI * x;
            s += (self.eval)(sigma, l) * C64::new(0.0, sigma * mu).exp() * C64::new(PI * w, 0.0);
        }
        s
    }
}

/// Verdict for one kernel condition: `ok` iff `worst` ≤ tol, with a
/// witnessing probe point.
#[derive(Debug, Clone, Copy)]
pub struct ConditionVerdict {
    pub ok: bool,
    pub worst: f64,
    pub witness_sigma: f64,
    pub witness_l: i64,
}

/// Report of the structural kernel conditions on a probe lattice.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub name: String,
    pub cond_theta: ConditionVerdict,
    pub cond_l: ConditionVerdict,
    pub cond_sym: ConditionVerdict,
    /// `worst` here is the *minimum* of |𝒦| over the lattice; `ok` iff it
    /// stays ≥ tol.
    pub nonvanishing: ConditionVerdict,
}

/// Check 𝒦(0,l) = 1, 𝒦(σ,0) = 1, 𝒦*(σ,l) = 𝒦(-σ,-l) and |𝒦| ≥ tol on the
/// closed probe lattice σ_j = -π + 2πj/σ_probes (j = 0..=σ_probes),
/// |l| ≤ l_range.
pub fn check_kernel_conditions(
    kernel: &Kernel,
    l_range: i64,
    sigma_probes: usize,
    tol: f64,
) -> Result<KernelReport> {
    if l_range < 1 {
        return Err(Error::InvalidParameter("l_range must be >= 1".into()));
    }
    if sigma_probes < 2 {
        return Err(Error::InvalidParameter("sigma_probes must be >= 2".into()));
    }
    let sigmas: Vec<f64> = (0..=sigma_probes)
        .map(|j| -PI + 2.0 * PI * j as f64 / sigma_probes as f64)
        .collect();

    let mut theta = ConditionVerdict {
        ok: true,
        worst: 0.0,
        witness_sigma: 0.0,
        witness_l: 0,
    };
    for l in -l_range..=l_range {
        let v = (kernel.eval(0.0, l) - C64::new(1.0, 0.0)).norm();
        if v > theta.worst {
            theta.worst = v;
            theta.witness_l = l;
        }
    }
    theta.ok = theta.worst <= tol;

    let mut cond_l = ConditionVerdict {
        ok: true,
        worst: 0.0,
        witness_sigma: 0.0,
        witness_l: 0,
    };
    for &s in &sigmas {
        let v = (kernel.eval(s, 0) - C64::new(1.0, 0.0)).norm();
        if v > cond_l.worst {
            cond_l.worst = v;
            cond_l.witness_sigma = s;
        }
    }
    cond_l.ok = cond_l.worst <= tol;

    let mut sym = ConditionVerdict {
        ok: true,
        worst: 0.0,
        witness_sigma: 0.0,
        witness_l: 0,
    };
    for &s in &sigmas {
        for l in -l_range..=l_range {
            let v = (kernel.eval(s, l).conj() - kernel.eval(-s, -l)).norm();
            if v > sym.worst {
                sym.worst = v;
                sym.witness_sigma = s;
                sym.witness_l = l;
            }
        }
    }
    sym.ok = sym.worst <= tol;

    let mut nonv = ConditionVerdict {
        ok: true,
        worst: f64::INFINITY,
        witness_sigma: 0.0,
        witness_l: 0,
    };
    for &s in &sigmas {
        for l in -l_range..=l_range {
            let v = kernel.eval(s, l).norm();
            if v < nonv.worst {
                nonv.worst = v;
                nonv.witness_sigma = s;
                nonv.witness_l = l;
            }
        }
    }
    nonv.ok = nonv.worst >= tol;

    Ok(KernelReport {
        name: kernel.name().to_string(),
        cond_theta: theta,
        cond_l,
        cond_sym: sym,
        nonvanishing: nonv,
    })
}

/// Admissibility scan result.
#[derive(Debug, Clone, Copy)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub worst: f64,
    /// Witnessing (j, k, n) with the largest |I_K(j−k, (j+k)/2 − n)|.
    pub witness: Option<(i64, i64, i64)>,
}

/// Check the number-phase admissibility condition: I_K(j−k, (j+k)/2 − n)
/// must vanish for all 0 ≤ j,k ≤ j_max and −n_depth ≤ n < 0, so that the
/// quantizer never leaks out of the physical sector n ≥ 0.
pub fn check_admissibility(
    kernel: &Kernel,
    j_max: i64,
    n_depth: i64,
    tol: f64,
) -> Result<AdmissibilityReport> {
    if j_max < 0 || n_depth < 1 {
        return Err(Error::InvalidParameter(
            "check_admissibility needs j_max >= 0 and n_depth >= 1".into(),
        ));
    }
    let mut worst = 0.0f64;
    let mut witness = None;
    for j in 0..=j_max {
        for k in 0..=j_max {
            for n in -n_depth..0 {
                let v = kernel.half_moment(j - k, j + k - 2 * n).norm();
                if v > worst {
                    worst = v;
                    witness = Some((j, k, n));
                }
            }
        }
    }
    Ok(AdmissibilityReport {
        ok: worst <= tol,
        worst,
        witness,
    })
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Arc<Vec<f64>>, Arc<Vec<f64>>) {
    // Computing the rule costs O(n²); memoize per node count since the
    // moment quadratures call this in tight loops.
    static CACHE: std::sync::OnceLock<std::sync::Mutex<HashMap<usize, (Arc<Vec<f64>>, Arc<Vec<f64>>)>>> =
        std::sync::OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = gauss_legendre_compute(n);
    let rule = (Arc::new(rule.0), Arc::new(rule.1));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

fn gauss_legendre_compute(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root (descending).
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
