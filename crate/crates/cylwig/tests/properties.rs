//! Property-based invariants complementing the example-based suites.

use std::f64::consts::PI;

use proptest::prelude::*;

use cylwig::kernels::{i1_moment, Kernel};
use cylwig::numberphase::{pov_interval_probability, FockDensity};
use cylwig::states::StateSpec;
use nalgebra::DMatrix;
use cylwig::core::C64;

fn state_spec_strategy() -> impl Strategy<Value = StateSpec> {
    prop_oneof![
        (0usize..200).prop_map(|n| StateSpec::Fock { n }),
        (0.0f64..6.0, -PI..PI).prop_map(|(abs, arg)| StateSpec::Coherent { abs, arg }),
        (0.0f64..4.0, -PI..PI, 0.0f64..2.0, -PI..PI)
            .prop_map(|(abs, arg, r, theta)| StateSpec::Squeezed { abs, arg, r, theta }),
        (0.01f64..5.0).prop_map(|bho| StateSpec::Thermal { bho }),
        (0.0f64..PI, -PI..PI, 0usize..20, 0usize..20)
            .prop_filter("distinct levels", |(_, _, n, np)| n != np)
            .prop_map(|(eta, phi0, n, nprime)| StateSpec::FockCat { eta, phi0, n, nprime }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Display and FromStr are inverse on valid specs (up to the last-ulp
    /// rounding of the phase canonicalization applied on parse).
    #[test]
    fn state_spec_display_roundtrip(spec in state_spec_strategy()) {
        let rendered = spec.to_string();
        let parsed: StateSpec = rendered.parse().unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs());
        let ok = match (&spec, &parsed) {
            (StateSpec::Fock { n: a }, StateSpec::Fock { n: b }) => a == b,
            (
                StateSpec::Coherent { abs: a1, arg: a2 },
                StateSpec::Coherent { abs: b1, arg: b2 },
            ) => close(*a1, *b1) && close(*a2, *b2),
            (
                StateSpec::Squeezed { abs: a1, arg: a2, r: a3, theta: a4 },
                StateSpec::Squeezed { abs: b1, arg: b2, r: b3, theta: b4 },
            ) => close(*a1, *b1) && close(*a2, *b2) && close(*a3, *b3) && close(*a4, *b4),
            (StateSpec::Thermal { bho: a }, StateSpec::Thermal { bho: b }) => close(*a, *b),
            (
                StateSpec::FockCat { eta: a1, phi0: a2, n: a3, nprime: a4 },
                StateSpec::FockCat { eta: b1, phi0: b2, n: b3, nprime: b4 },
            ) => close(*a1, *b1) && close(*a2, *b2) && a3 == b3 && a4 == b4,
            _ => false,
        };
        prop_assert!(ok, "spec {spec} parsed back as {parsed}");
    }

    /// The half-integer moment of the flat kernel: zero at nonzero even
    /// arguments, 2π at zero, and |I₁(2μ)| = 4/|2μ| at odd arguments with
    /// alternating sign; the closed form must match direct quadrature.
    #[test]
    fn i1_moment_properties(two_mu in -41i64..=41) {
        let v = i1_moment(two_mu);
        if two_mu == 0 {
            prop_assert!((v - 2.0 * PI).abs() < 1e-12);
        } else if two_mu % 2 == 0 {
            prop_assert!(v.abs() < 1e-12);
        } else {
            let expect = 4.0 / two_mu.abs() as f64
                * if (two_mu.abs() - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((v - expect).abs() < 1e-12);
        }
        // quadrature cross-check through the kernel API
        let q = Kernel::weyl().half_moment_quadrature(0, two_mu);
        prop_assert!((v - q.re).abs() < 1e-9 && q.im.abs() < 1e-9);
    }

    /// POV phase-interval probabilities are additive over adjacent
    /// intervals and normalize over the full circle.
    #[test]
    fn pov_interval_additivity(
        seed in 0u64..1000,
        a in -PI..3.0f64,
        f1 in 0.01f64..0.45,
        f2 in 0.01f64..0.45,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dim = 7usize;
        let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let mut m = &g * g.adjoint();
        let tr: C64 = m.diagonal().iter().sum();
        m /= tr;
        let rho = FockDensity::new(m, 1e-9).unwrap();
        // strictly nested −π ≤ a < b < c ≤ π
        let b = a + f1 * (PI - a);
        let c = b + f2 * (PI - b);
        let pab = pov_interval_probability(&rho, a, b).unwrap();
        let pbc = pov_interval_probability(&rho, b, c).unwrap();
        let pac = pov_interval_probability(&rho, a, c).unwrap();
        prop_assert!((pab + pbc - pac).abs() < 1e-12);
        prop_assert!(pab >= -1e-12 && pbc >= -1e-12);
        let full = pov_interval_probability(&rho, -PI, PI).unwrap();
        prop_assert!((full - 1.0).abs() < 1e-12);
    }
}
