use std::f64::consts::PI;

use proptest::prelude::*;

use sl2_lyapunov::closed_form::{omega_closed, omega_hypergeometric, Family};
use sl2_lyapunov::coeffs::{build_coefficients, classify_zeros, exponents, ZeroLabel};
use sl2_lyapunov::config::{ModelConfig, SweepSpec};
use sl2_lyapunov::fp_solver::{omega_fp, stationary_density};
use sl2_lyapunov::sl2::{iwasawa_compose, iwasawa_decompose, IwasawaParams};
use sl2_lyapunov::DisorderModel;

/// Means in a box and a covariance L·Lᵀ with a lower-triangular L.
fn model_strategy() -> impl Strategy<Value = DisorderModel> {
    (
        prop::array::uniform3(-1.0..1.0f64),
        prop::array::uniform6(-0.8..0.8f64),
        prop::array::uniform3(0.3..1.0f64),
    )
        .prop_map(|(m, off, d)| {
            let l = [
                [d[0], 0.0, 0.0],
                [off[0], d[1], 0.0],
                [off[1], off[2], d[2]],
            ];
            let mut cov = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    cov[i][j] = (0..3).map(|k| l[i][k] * l[j][k]).sum();
                }
            }
            DisorderModel::new(IwasawaParams::new(m[0], m[1], m[2]), cov).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_conjugates_omega(m in model_strategy()) {
        let (Ok(a), Ok(b)) = (omega_closed(&m), omega_closed(&m.reflected())) else {
            return Ok(());
        };
        prop_assert!((a.omega - b.omega.conj()).norm() < 1e-9 * (1.0 + a.omega.norm()));
    }

    #[test]
    fn omega_is_homogeneous_of_degree_one(m in model_strategy(), s in prop::sample::select(vec![0.5, 2.0])) {
        let Ok(a) = omega_closed(&m) else { return Ok(()) };
        let b = omega_closed(&m.scaled(s)).unwrap();
        prop_assert!((b.omega - s * a.omega).norm() < 1e-9 * (s * a.omega).norm());
    }

    #[test]
    fn exponent_sums(m in model_strategy()) {
        let c = build_coefficients(&m);
        let z = classify_zeros(&c);
        prop_assume!(z.label == ZeroLabel::FourSimple);
        let a = exponents(&c, &z).unwrap();
        let total: num_complex::Complex64 = a.iter().sum();
        prop_assert!((total - 2.0).norm() < 1e-9);
        prop_assert!(((a[0] + a[1]).re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn iwasawa_round_trip(a in -3.1..3.1f64, w in -2.0..2.0f64, u in -5.0..5.0f64) {
        let p = iwasawa_decompose(&iwasawa_compose(IwasawaParams::new(a, w, u))).unwrap();
        prop_assert!((p.alpha - a).abs() < 1e-9 && (p.w - w).abs() < 1e-9 && (p.u - u).abs() < 1e-8);
    }

    #[test]
    fn sweep_parser_never_panics(s in "\\PC{0,40}") {
        let _ = SweepSpec::parse(&s);
    }

    #[test]
    fn sweep_values_hit_both_ends(a in -1e3..1e3f64, b in -1e3..1e3f64, n in 2usize..200) {
        let s = SweepSpec::parse(&format!("d_ww={a:e}:{b:e}:{n}")).unwrap();
        let v = s.values();
        prop_assert_eq!(v.len(), n);
        prop_assert_eq!((v[0], v[n - 1]), (a, b));
    }

    #[test]
    fn config_parser_never_panics(s in "\\PC{0,80}") {
        if let Ok(c) = ModelConfig::from_json(&s) {
            let _ = c.resolve();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn stationary_density_is_normalised_and_periodic(m in model_strategy()) {
        let d = stationary_density(&m, 2048).unwrap();
        prop_assert!(d.normalization_error < 1e-8);
        prop_assert!(d.density.iter().all(|&f| f >= 0.0));
        let (a, b) = (d.density[0], d.density[d.density.len() - 1]);
        prop_assert!((a - b).abs() < 1e-8 * a.max(1.0));
        prop_assert_eq!(d.phi[0], -PI);
        prop_assert_eq!(*d.phi.last().unwrap(), PI);
    }

    #[test]
    fn fp_matches_hypergeometric(m in model_strategy()) {
        let Ok(h) = omega_hypergeometric(&m) else { return Ok(()) };
        let fp = omega_fp(&m, 2048).unwrap().omega;
        prop_assert!((fp - h.omega).norm() < 1e-6 * (1.0 + h.omega.norm()));
    }
}

/// A monolithic model plus a tiny generic covariance reaches the
/// hypergeometric form; its value stays close to the special family.
#[test]
fn hypergeometric_is_continuous_across_degeneration() {
    let means = IwasawaParams::new(0.7, -0.3, 0.2);
    let bump = [[1.0, 0.3, 0.1], [0.3, 1.0, 0.2], [0.1, 0.2, 1.0]];
    for (cov, family) in [
        ([[0.0; 3], [0.0; 3], [0.0, 0.0, 0.8]], Family::Airy),
        ([[0.0; 3], [0.0, 0.6, 0.0], [0.0; 3]], Family::BesselJn),
        (
            [[0.0; 3], [0.0, 0.3, 0.1], [0.0, 0.1, 0.4]],
            Family::Whittaker,
        ),
    ] {
        let m = DisorderModel::new(means, cov).unwrap();
        let special = omega_closed(&m).unwrap();
        assert_eq!(special.family, family);
        let mut cov2 = cov;
        for i in 0..3 {
            for j in 0..3 {
                cov2[i][j] += 1e-6 * bump[i][j];
            }
        }
        let near = DisorderModel::new(means, cov2).unwrap();
        let h = omega_hypergeometric(&near).unwrap();
        assert!(
            (h.omega - special.omega).norm() < 1e-3,
            "{family:?}: {} vs {}",
            h.omega,
            special.omega
        );
    }
}
