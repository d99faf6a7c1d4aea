//! Analytic state families (Fock, coherent, squeezed, thermal, Fock cat),
//! their closed-form number-phase Wigner functions, and figure data
//! tables. The closed forms serve as independent oracles for the generic
//! pipeline.

use crate::core::{Error, Result, C64};
use crate::numberphase::{FockDensity, FockVector};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Maximum Hermite degree accepted by the recurrence (overflow guard).
pub const HERMITE_MAX: usize = 512;

/// A parsed state family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// |N⟩
    Fock { n: usize },
    /// α = |α| e^{i·arg}
    Coherent { abs: f64, arg: f64 },
    /// coherent amplitude α = |α| e^{i·arg}, squeeze ζ = r e^{iθ}
    Squeezed { abs: f64, arg: f64, r: f64, theta: f64 },
    /// diagonal geometric density with parameter βħω > 0
    Thermal { bho: f64 },
    /// cos η |N⟩ + e^{iφ₀} sin η |N′⟩
    FockCat {
        eta: f64,
        phi0: f64,
        n: usize,
        nprime: usize,
    },
}

fn wrap_phase(x: f64) -> f64 {
    let mut y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y -= 2.0 * PI;
    }
    y
}

impl StateSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            StateSpec::Fock { .. } => Ok(()),
            StateSpec::Coherent { abs, .. } => {
                if *abs < 0.0 || !abs.is_finite() {
                    Err(Error::InvalidParameter("coherent |α| must be ≥ 0".into()))
                } else {
                    Ok(())
                }
            }
            StateSpec::Squeezed { abs, r, .. } => {
                if *abs < 0.0 || !abs.is_finite() {
                    Err(Error::InvalidParameter("squeezed |α| must be ≥ 0".into()))
                } else if *r < 0.0 || !r.is_finite() {
                    Err(Error::InvalidParameter("squeeze r must be ≥ 0".into()))
                } else {
                    Ok(())
                }
            }
            StateSpec::Thermal { bho } => {
                if *bho > 0.0 && bho.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("thermal bho must be > 0".into()))
                }
            }
            StateSpec::FockCat { n, nprime, eta, .. } => {
                if n == nprime {
                    Err(Error::InvalidParameter("cat requires N ≠ Nprime".into()))
                } else if !eta.is_finite() {
                    Err(Error::InvalidParameter("cat eta must be finite".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn parse_fields(s: &str) -> std::result::Result<std::collections::BTreeMap<String, String>, String> {
    let mut map = std::collections::BTreeMap::new();
    for field in s.split(',') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| format!("field '{field}' is not key=value"))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn get_f64(
    map: &std::collections::BTreeMap<String, String>,
    key: &str,
) -> std::result::Result<f64, String> {
    map.get(key)
        .ok_or_else(|| format!("missing field '{key}'"))?
        .parse::<f64>()
        .map_err(|e| format!("field '{key}': {e}"))
}

fn get_usize(
    map: &std::collections::BTreeMap<String, String>,
    key: &str,
) -> std::result::Result<usize, String> {
    map.get(key)
        .ok_or_else(|| format!("missing field '{key}'"))?
        .parse::<usize>()
        .map_err(|e| format!("field '{key}': {e}"))
}

impl FromStr for StateSpec {
    type Err = Error;

    /// Syntax (fields comma-separated, order-insensitive):
    /// `fock:N=3`, `coherent:abs=1.0,arg=0.0`,
    /// `squeezed:abs=0.0,arg=0.0,r=1.0,theta=0.0`,
    /// `thermal:bho=0.693147`, `cat:eta=0.31,phi0=0.0,N=0,Nprime=7`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::BadStateSpec(s.to_string(), msg);
        let (family, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("no ':' separator".into()))?;
        let map = parse_fields(rest).map_err(bad)?;
        let spec = match family.trim() {
            "fock" => StateSpec::Fock {
                n: get_usize(&map, "N").map_err(bad)?,
            },
            "coherent" => StateSpec::Coherent {
                abs: get_f64(&map, "abs").map_err(bad)?,
                arg: wrap_phase(get_f64(&map, "arg").map_err(bad)?),
            },
            "squeezed" => StateSpec::Squeezed {
                abs: get_f64(&map, "abs").map_err(bad)?,
                arg: wrap_phase(get_f64(&map, "arg").map_err(bad)?),
                r: get_f64(&map, "r").map_err(bad)?,
                theta: wrap_phase(get_f64(&map, "theta").map_err(bad)?),
            },
            "thermal" => StateSpec::Thermal {
                bho: get_f64(&map, "bho").map_err(bad)?,
            },
            "cat" => StateSpec::FockCat {
                eta: get_f64(&map, "eta").map_err(bad)?,
                phi0: wrap_phase(get_f64(&map, "phi0").map_err(bad)?),
                n: get_usize(&map, "N").map_err(bad)?,
                nprime: get_usize(&map, "Nprime").map_err(bad)?,
            },
            other => {
                return Err(bad(format!("unknown family '{other}'")));
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock { n } => write!(f, "fock:N={n}"),
            StateSpec::Coherent { abs, arg } => write!(f, "coherent:abs={abs},arg={arg}"),
            StateSpec::Squeezed { abs, arg, r, theta } => {
                write!(f, "squeezed:abs={abs},arg={arg},r={r},theta={theta}")
            }
            StateSpec::Thermal { bho } => write!(f, "thermal:bho={bho}"),
            StateSpec::FockCat {
                eta,
                phi0,
                n,
                nprime,
            } => write!(f, "cat:eta={eta},phi0={phi0},N={n},Nprime={nprime}"),
        }
    }
}

/// Result of building a state at truncation N_F.
#[derive(Debug, Clone)]
pub enum BuiltState {
    Pure(FockVector),
    Mixed(FockDensity),
}

impl BuiltState {
    pub fn density(&self, tol: f64) -> Result<FockDensity> {
        match self {
            BuiltState::Pure(v) => v.density(tol),
            BuiltState::Mixed(d) => Ok(d.clone()),
        }
    }

    pub fn tail_mass(&self) -> f64 {
        match self {
            BuiltState::Pure(v) => v.tail_mass(),
            BuiltState::Mixed(_) => 0.0,
        }
    }
}

/// Physicists' Hermite polynomial H_n(z) by the three-term recurrence
/// H_{n+1} = 2zH_n − 2nH_{n−1}.
pub fn hermite(n: usize, z: C64) -> Result<C64> {
    if n > HERMITE_MAX {
        return Err(Error::InvalidParameter(format!(
            "Hermite degree {n} exceeds the overflow guard {HERMITE_MAX}"
        )));
    }
    let mut hm1 = C64::new(0.0, 0.0);
    let mut h = C64::new(1.0, 0.0);
    for m in 0..n {
        let next = C64::new(2.0, 0.0) * z * h - C64::new(2.0 * m as f64, 0.0) * hm1;
        hm1 = h;
        h = next;
    }
    Ok(h)
}

/// Coherent-state amplitudes c_n = e^{−|α|²/2} αⁿ/√n!, truncated at N_F
/// and *not* renormalized (the tail mass is reported instead).
fn coherent_amplitudes(abs: f64, arg: f64, n_f: usize) -> DVector<C64> {
    let alpha = C64::from_polar(abs, arg);
    let mut amps = DVector::zeros(n_f + 1);
    let mut c = C64::new((-0.5 * abs * abs).exp(), 0.0);
    amps[0] = c;
    for n in 0..n_f {
        c = c * alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
        amps[n + 1] = c;
    }
    amps
}

/// Squeezed-state amplitudes ⟨n|α,ζ⟩, ζ = re^{iθ}, via the scaled
/// recurrence g_{n+1} = (2w·g_n − 2√n·t·g_{n−1})/√(n+1) with
/// t = ½e^{iθ}tanh r and w = (α + α*e^{iθ}tanh r)/2, where
/// g_n = t^{n/2}H_n(z)/√(n!). The recurrence never takes the square root
/// of t, so the branch ambiguity of the textbook formula does not arise;
/// r = 0 collapses to the coherent amplitudes exactly.
fn squeezed_amplitudes(abs: f64, arg: f64, r: f64, theta: f64, n_f: usize) -> DVector<C64> {
    let alpha = C64::from_polar(abs, arg);
    let t = C64::from_polar(0.5 * r.tanh(), theta);
    let w = (alpha + alpha.conj() * C64::from_polar(r.tanh(), theta)) * C64::new(0.5, 0.0);
    let pref = (C64::new(-0.5 * abs * abs, 0.0)
        - C64::new(0.5, 0.0) * alpha.conj() * alpha.conj() * C64::from_polar(r.tanh(), theta))
    .exp()
        / C64::new(r.cosh().sqrt(), 0.0);
    let mut amps = DVector::zeros(n_f + 1);
    let mut gm1 = C64::new(0.0, 0.0);
    let mut g = C64::new(1.0, 0.0);
    amps[0] = pref * g;
    for n in 0..n_f {
        let next = (C64::new(2.0, 0.0) * w * g
            - C64::new(2.0 * (n as f64).sqrt(), 0.0) * t * gm1)
            / C64::new(((n + 1) as f64).sqrt(), 0.0);
        gm1 = g;
        g = next;
        amps[n + 1] = pref * g;
    }
    amps
}

/// Build the state at truncation N_F. Pure families are returned as
/// truncated vectors (tail mass gated by `allowance`, default 1e-8);
/// the thermal family is a diagonal density renormalized over the
/// truncation so its invariants hold exactly.
pub fn build_state(spec: &StateSpec, n_f: usize, allowance: Option<f64>) -> Result<BuiltState> {
    spec.validate()?;
    match spec {
        StateSpec::Fock { n } => {
            if *n > n_f {
                return Err(Error::BandTooSmall(n_f + 1, n + 1));
            }
            let mut amps = DVector::zeros(n_f + 1);
            amps[*n] = C64::new(1.0, 0.0);
            Ok(BuiltState::Pure(FockVector::truncated(amps, 0.0, allowance)?))
        }
        StateSpec::Coherent { abs, arg } => {
            let amps = coherent_amplitudes(*abs, *arg, n_f);
            let tail = (1.0 - amps.iter().map(|c| c.norm_sqr()).sum::<f64>()).max(0.0);
            Ok(BuiltState::Pure(FockVector::truncated(amps, tail, allowance)?))
        }
        StateSpec::Squeezed { abs, arg, r, theta } => {
            if n_f > HERMITE_MAX {
                return Err(Error::InvalidParameter(format!(
                    "squeezed truncation {n_f} exceeds the recurrence guard {HERMITE_MAX}"
                )));
            }
            let amps = squeezed_amplitudes(*abs, *arg, *r, *theta, n_f);
            let tail = (1.0 - amps.iter().map(|c| c.norm_sqr()).sum::<f64>()).max(0.0);
            Ok(BuiltState::Pure(FockVector::truncated(amps, tail, allowance)?))
        }
        StateSpec::Thermal { bho } => {
            let q = (-bho).exp();
            let z: f64 = (0..=n_f).map(|n| q.powi(n as i32)).sum();
            let mut m = DMatrix::zeros(n_f + 1, n_f + 1);
            for n in 0..=n_f {
                m[(n, n)] = C64::new(q.powi(n as i32) / z, 0.0);
            }
            Ok(BuiltState::Mixed(FockDensity::new(m, 1e-10)?))
        }
        StateSpec::FockCat {
            eta,
            phi0,
            n,
            nprime,
        } => {
            let hi = (*n).max(*nprime);
            if hi > n_f {
                return Err(Error::BandTooSmall(n_f + 1, hi + 1));
            }
            let mut amps = DVector::zeros(n_f + 1);
            amps[*n] = C64::new(eta.cos(), 0.0);
            amps[*nprime] = C64::from_polar(eta.sin(), *phi0);
            Ok(BuiltState::Pure(FockVector::truncated(amps, 0.0, allowance)?))
        }
    }
}

/// Thermal truncation tail mass (probability beyond N_F before
/// renormalization): e^{−(N_F+1)βħω}.
pub fn thermal_tail_mass(bho: f64, n_f: usize) -> f64 {
    (-(n_f as f64 + 1.0) * bho).exp()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Closed-form number-phase Wigner function for the family, truncated at
/// N_F where the family's series is infinite. Independent of the
/// pipeline: evaluated from the published per-family formulas (with the
/// squeezed family's conjugated factor taken consistently with the
/// amplitude formula — see the comment inside).
pub fn exact_number_phase_wigner(
    spec: &StateSpec,
    n_f: usize,
    phi: f64,
    n: usize,
) -> Result<f64> {
    spec.validate()?;
    if n > n_f {
        return Err(Error::BandTooSmall(n_f + 1, n + 1));
    }
    match spec {
        StateSpec::Fock { n: level } => {
            Ok(if *level == n { 1.0 / (2.0 * PI) } else { 0.0 })
        }
        StateSpec::Coherent { abs, arg } => {
            // W = (|α|ⁿ e^{−|α|²} / 2π√n!)[cos(nψ)Σ_k a_k cos(kψ)
            //     + sin(nψ)Σ_k a_k sin(kψ)], ψ = φ − arg, a_k = |α|^k/√k!
            let psi = phi - arg;
            let pref = abs.powi(n as i32) * (-abs * abs).exp()
                / (2.0 * PI * factorial(n).sqrt());
            let mut cs = 0.0;
            let mut sn = 0.0;
            let mut a = 1.0; // |α|^k/√k!
            for k in 0..=n_f {
                cs += a * (k as f64 * psi).cos();
                sn += a * (k as f64 * psi).sin();
                a *= abs / ((k + 1) as f64).sqrt();
            }
            Ok(pref * ((n as f64 * psi).cos() * cs + (n as f64 * psi).sin() * sn))
        }
        StateSpec::Squeezed { abs, arg, r, theta } => {
            if *r == 0.0 {
                return exact_number_phase_wigner(
                    &StateSpec::Coherent {
                        abs: *abs,
                        arg: *arg,
                    },
                    n_f,
                    phi,
                    n,
                );
            }
            // W = (1/2π cosh r) Re[ conj(A_n) e^{inφ} Σ_k A_k e^{−ikφ} ],
            // A_m = (1/√m!) t^{m/2} e^{−½(|α|²+(α*)² e^{iθ}tanh r)} H_m(z),
            // t = ½e^{iθ}tanh r, z = (α + α* e^{iθ}tanh r)/√(2e^{iθ}tanh r).
            // Note: the second factor is the exact conjugate of the
            // amplitude formula; the published display conjugates its
            // Hermite argument inconsistently, which disagrees with
            // A_k = ⟨k|α,ζ⟩ itself — we keep the amplitude-consistent
            // form (validated against the pipeline oracle).
            if n_f > HERMITE_MAX {
                return Err(Error::InvalidParameter(format!(
                    "squeezed truncation {n_f} exceeds the recurrence guard {HERMITE_MAX}"
                )));
            }
            let alpha = C64::from_polar(*abs, *arg);
            let et = C64::from_polar(r.tanh(), *theta); // e^{iθ} tanh r
            let t = et * C64::new(0.5, 0.0);
            let z = (alpha + alpha.conj() * et) / (et * C64::new(2.0, 0.0)).sqrt();
            let expf = (C64::new(-0.5 * abs * abs, 0.0)
                - C64::new(0.5, 0.0) * alpha.conj() * alpha.conj() * et)
                .exp();
            let amp = |m: usize| -> Result<C64> {
                Ok(expf * t.powf(m as f64 / 2.0) * hermite(m, z)?
                    / C64::new(factorial(m).sqrt(), 0.0))
            };
            let a_n = amp(n)?;
            let mut series = C64::new(0.0, 0.0);
            for k in 0..=n_f {
                series += amp(k)? * C64::new(0.0, -(k as f64) * phi).exp();
            }
            let val = (a_n.conj() * C64::new(0.0, n as f64 * phi).exp() * series).re;
            Ok(val / (2.0 * PI * r.cosh()))
        }
        StateSpec::Thermal { bho } => {
            Ok((1.0 - (-bho).exp()) * (-(n as f64) * bho).exp() / (2.0 * PI))
        }
        StateSpec::FockCat {
            eta,
            phi0,
            n: nn,
            nprime,
        } => {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            let fringe = 0.5
                * (2.0 * eta).sin()
                * (((*nn as f64 - *nprime as f64) * phi) + phi0).cos()
                * (d(n, *nn) + d(n, *nprime));
            Ok((eta.cos().powi(2) * d(n, *nn) + eta.sin().powi(2) * d(n, *nprime) + fringe)
                / (2.0 * PI))
        }
    }
}

/// Squeezed-vacuum closed form: vanishes at odd n; at n = 2m it is
/// (1/2π cosh r)(√((2m)!)/m!)(−tanh r/2)^m Σ_l (√((2l)!)/l!)(−tanh r/2)^l
/// cos((m−l)(2φ−θ)), with the sum truncated at 2l ≤ N_F.
pub fn squeezed_vacuum_wigner(r: f64, theta: f64, n_f: usize, phi: f64, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    let coeff = |j: usize| factorial(2 * j).sqrt() / factorial(j) * (-r.tanh() / 2.0).powi(j as i32);
    let mut s = 0.0;
    for l in 0..=(n_f / 2) {
        s += coeff(l) * ((m as f64 - l as f64) * (2.0 * phi - theta)).cos();
    }
    coeff(m) * s / (2.0 * PI * r.cosh())
}

/// A figure-data table: named columns and numeric rows.
#[derive(Debug, Clone)]
pub struct FigureTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Data tables behind the standard figures:
/// - "max": peak value W(0, n) of ϕ=0 coherent states vs |α|, for several n
/// - "coh": coherent-state Wigner rows vs φ for |α| ∈ {0.1, 1, 5}
/// - "squeezed": squeezed-vacuum rows for r ∈ {0.6, 0.8, 1.0}
/// - "cat": the cat state η = π/10, N = 0, N′ = 7
pub fn figure_data(which: &str) -> Result<FigureTable> {
    let phi_sweep: Vec<f64> = (0..201)
        .map(|j| -PI + 2.0 * PI * j as f64 / 200.0)
        .collect();
    match which {
        "max" => {
            let n_f = 80;
            let mut rows = Vec::new();
            for &n in &[0usize, 5, 10, 20, 40] {
                for j in 0..=160 {
                    let a = j as f64 * 0.05;
                    let w = exact_number_phase_wigner(
                        &StateSpec::Coherent { abs: a, arg: 0.0 },
                        n_f,
                        0.0,
                        n,
                    )?;
                    rows.push(vec![a, n as f64, w]);
                }
            }
            Ok(FigureTable {
                columns: vec!["alpha".into(), "n".into(), "W".into()],
                rows,
            })
        }
        "coh" => {
            let n_f = 80;
            let mut rows = Vec::new();
            for &a in &[0.1, 1.0, 5.0] {
                for &n in &[0usize, 1, 2] {
                    for &phi in &phi_sweep {
                        let w = exact_number_phase_wigner(
                            &StateSpec::Coherent { abs: a, arg: 0.0 },
                            n_f,
                            phi,
                            n,
                        )?;
                        rows.push(vec![a, phi, n as f64, w]);
                    }
                }
            }
            Ok(FigureTable {
                columns: vec!["alpha".into(), "phi".into(), "n".into(), "W".into()],
                rows,
            })
        }
        "squeezed" => {
            let n_f = 80;
            let mut rows = Vec::new();
            for &r in &[0.6, 0.8, 1.0] {
                for &n in &[0usize, 2, 4] {
                    for &phi in &phi_sweep {
                        let w = squeezed_vacuum_wigner(r, 0.0, n_f, phi, n);
                        rows.push(vec![r, phi, n as f64, w]);
                    }
                }
            }
            Ok(FigureTable {
                columns: vec!["r".into(), "phi".into(), "n".into(), "W".into()],
                rows,
            })
        }
        "cat" => {
            let spec = StateSpec::FockCat {
                eta: PI / 10.0,
                phi0: 0.0,
                n: 0,
                nprime: 7,
            };
            let mut rows = Vec::new();
            for n in 0..=7usize {
                for &phi in &phi_sweep {
                    let w = exact_number_phase_wigner(&spec, 7, phi, n)?;
                    rows.push(vec![phi, n as f64, w]);
                }
            }
            Ok(FigureTable {
                columns: vec!["phi".into(), "n".into(), "W".into()],
                rows,
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown figure '{other}' (expected max|coh|squeezed|cat)"
        ))),
    }
}
