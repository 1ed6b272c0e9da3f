mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use ncluster::correlators::{g_correlator_by_quadrature, on_lattice};
use ncluster::model::{critical_modes, finite_energy_density, mode_solution, spectral_gap};
use ncluster::{
    build_table, d2_energy_scan, energy_density, finite_ring_table, g_correlator, ModelParams,
    QuadratureSpec, RingSector,
};
use proptest::prelude::*;

fn p(n: usize, phi: f64) -> ModelParams {
    ModelParams::unit(n, phi).unwrap()
}

fn q(n: usize) -> QuadratureSpec {
    QuadratureSpec::for_model(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_matches_elliptic_closed_form(n in 0usize..6, phi in 0.0f64..FRAC_PI_2) {
        let e = energy_density(&p(n, phi), &q(n)).unwrap();
        prop_assert!((e - common::energy_closed_form(phi)).abs() < 1e-9, "{e}");
    }

    #[test]
    fn energy_scales_with_j(n in 0usize..4, phi in 0.0f64..FRAC_PI_2, j in 0.1f64..5.0) {
        let a = energy_density(&ModelParams::new(n, phi, j).unwrap(), &q(n)).unwrap();
        let b = energy_density(&p(n, phi), &q(n)).unwrap();
        prop_assert!((a - j * b).abs() < 1e-9 * j);
    }

    #[test]
    fn mode_vectors_are_normalized_ground_states(n in 0usize..5, phi in 0.0f64..FRAC_PI_2, k in 0.001f64..PI) {
        let m = mode_solution(&p(n, phi), k).unwrap();
        let h = m.paired_block();
        let v = [m.alpha, m.beta];
        prop_assert!((v[0].norm_sqr() + v[1].norm_sqr() - 1.0).abs() < 1e-12);
        let w = m.e_ground / 2.0;
        for row in 0..2 {
            let hv = h[row][0] * v[0] + h[row][1] * v[1];
            prop_assert!((hv - v[row] * (2.0 * w)).norm() < 1e-10, "row {row}");
        }
    }

    #[test]
    fn g_matches_trapezoid_sum(n in 0usize..5, phi in 0.0f64..1.5, m in -8i64..8) {
        prop_assume!((phi - FRAC_PI_4).abs() > 0.05);
        let r = m * (n as i64 + 1);
        let g = g_correlator(&p(n, phi), r, &q(n)).unwrap();
        let oracle = common::g_trapezoid(n, phi, r, 8192);
        prop_assert!((g - oracle).abs() < 1e-10, "{g} vs {oracle}");
    }

    #[test]
    fn selection_rule_zeros(n in 1usize..7, phi in 0.0f64..FRAC_PI_2, r in -40i64..40) {
        prop_assume!(!on_lattice(n, r));
        prop_assert_eq!(g_correlator(&p(n, phi), r, &q(n)).unwrap(), 0.0);
        let direct = g_correlator_by_quadrature(&p(n, phi), r, &q(n)).unwrap();
        prop_assert!(direct.abs() < 1e-9, "{direct}");
    }

    #[test]
    fn extension_rescales_ising_offsets(n in 1usize..6, phi in 0.0f64..FRAC_PI_2, m in -10i64..10) {
        let a = g_correlator(&p(n, phi), m * (n as i64 + 1), &q(n)).unwrap();
        let b = g_correlator(&p(0, phi), m, &q(0)).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn correlators_are_bounded(n in 0usize..4, phi in 0.0f64..FRAC_PI_2) {
        let t = build_table(&p(n, phi), 24, &q(n)).unwrap();
        for (_, g) in t.iter() {
            prop_assert!(g.abs() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn energy_limits() {
    for n in 0..6 {
        assert!((energy_density(&p(n, FRAC_PI_2), &q(n)).unwrap() + 1.0).abs() < 1e-10);
        assert!((energy_density(&p(n, 0.0), &q(n)).unwrap() + 1.0).abs() < 1e-10);
    }
    let e = energy_density(&p(1, FRAC_PI_4), &q(1)).unwrap();
    assert!((e + 2.0 * 2f64.sqrt() / PI).abs() < 1e-8);
}

#[test]
fn finite_ring_energy_converges() {
    let params = p(1, 0.5);
    let e = energy_density(&params, &q(1)).unwrap();
    let e200 = finite_energy_density(&params, 200, true).unwrap();
    assert!((e - e200).abs() < 1e-10);
}

#[test]
fn critical_correlators_match_closed_form() {
    for n in 0..4usize {
        let t = build_table(&p(n, FRAC_PI_4), 40, &q(n)).unwrap();
        for (r, g) in t.iter() {
            assert!((g - common::g_critical(n, r)).abs() < 1e-10, "n={n} r={r}");
        }
    }
}

#[test]
fn gap_closes_only_at_the_critical_angle() {
    assert_eq!(spectral_gap(&p(2, FRAC_PI_4)), 0.0);
    assert!(spectral_gap(&p(2, 0.7)) > 0.0);
    for n in 0..5usize {
        for k in critical_modes(n) {
            assert!(p(n, FRAC_PI_4).omega(k) < 1e-12);
        }
    }
}

#[test]
fn energy_peak_sits_at_the_critical_angle() {
    let grid: Vec<f64> = (0..61).map(|i| 0.7 + 0.003 * i as f64).collect();
    let scan = d2_energy_scan(2, &grid, 1e-3, &q(2)).unwrap();
    let (phi, _) = scan.peak().unwrap();
    assert!((phi - FRAC_PI_4).abs() <= 0.003, "{phi}");
}

#[test]
fn finite_rings_obey_the_selection_rule_when_commensurate() {
    let t = finite_ring_table(&p(2, 0.4), 12, RingSector::Antiperiodic).unwrap();
    for (r, g) in t.iter() {
        if !on_lattice(2, r) {
            assert!(g.abs() < 1e-14, "r={r}: {g}");
        }
    }
}

#[test]
fn rejects_out_of_range_parameters() {
    assert!(ModelParams::unit(1, -0.1).is_err());
    assert!(ModelParams::unit(1, 1.6).is_err());
    assert!(ModelParams::new(1, 0.3, 0.0).is_err());
    assert!(d2_energy_scan(1, &[], 1e-3, &q(1)).is_err());
    assert!(d2_energy_scan(1, &[0.5], -1.0, &q(1)).is_err());
}
