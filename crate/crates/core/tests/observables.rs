mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::{DMatrix, Matrix4};
use ncluster::entanglement::{
    block_entropy, concurrence, concurrence_general, multipartite_structure_report,
    pair_rdm_general, shannon2, two_spin_rdm, BlockGamma,
};
use ncluster::observables::{
    cluster_correlator, order_parameter, order_parameter_closed_form, pauli_expectation, sigma_z,
    xx, xx_pfaffian, yy, zz,
};
use ncluster::pauli::cluster_pair;
use ncluster::{build_table, Axis, CorrelatorTable, ModelParams, PauliString, QuadratureSpec};
use proptest::prelude::*;

fn table(n: usize, phi: f64, span: usize) -> CorrelatorTable {
    build_table(
        &ModelParams::unit(n, phi).unwrap(),
        span,
        &QuadratureSpec::for_model(n),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_point_functions_match_the_compiler(n in 0usize..4, phi in 0.0f64..FRAC_PI_2, r in 1i64..9) {
        let t = table(n, phi, 12);
        let pair = |a, b| pauli_expectation(&t, &PauliString::pair(0, a, r, b)).unwrap();
        prop_assert!((zz(&t, r).unwrap() - pair(Axis::Z, Axis::Z)).abs() < 1e-10);
        prop_assert!((xx(&t, r).unwrap() - pair(Axis::X, Axis::X)).abs() < 1e-10);
        prop_assert!((yy(&t, r).unwrap() - pair(Axis::Y, Axis::Y)).abs() < 1e-10);
        let z = pauli_expectation(&t, &PauliString::single(3, Axis::Z)).unwrap();
        prop_assert!((sigma_z(&t).unwrap() - z).abs() < 1e-12);
    }

    #[test]
    fn toeplitz_determinant_matches_lu(n in 0usize..4, phi in 0.0f64..FRAC_PI_2, r in 1i64..11) {
        let t = table(n, phi, 12);
        let k = r as usize;
        let m = DMatrix::from_fn(k, k, |i, j| t.get(i as i64 - j as i64 - 1).unwrap());
        prop_assert!((xx(&t, r).unwrap() - common::dense_det(&m)).abs() < 1e-10);
    }

    #[test]
    fn two_spin_states_are_physical(n in 0usize..4, phi in 0.0f64..FRAC_PI_2, r in 1i64..9) {
        let t = table(n, phi, 12);
        let rdm = two_spin_rdm(&t, r).unwrap();
        prop_assert!((rdm.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rdm.is_x_shaped());
        prop_assert!(rdm.eigenvalues().iter().all(|&l| l > -1e-10));
        let c = concurrence(&rdm);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((c - concurrence_general(&rdm.entries)).abs() < 1e-8);
        if r % (n as i64 + 1) != 0 {
            prop_assert!(rdm.is_diagonal());
            prop_assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn general_pair_state_reduces_to_x_form(n in 0usize..3, phi in 0.0f64..FRAC_PI_2, r in 1i64..6) {
        let t = table(n, phi, 12);
        let x = two_spin_rdm(&t, r).unwrap();
        let g = pair_rdm_general(&t, 0, r).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                prop_assert!((g[(a, b)].re - x.entries[(a, b)]).abs() < 1e-10);
                prop_assert!(g[(a, b)].im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn small_blocks_match_spin_states(n in 0usize..4, phi in 0.0f64..FRAC_PI_2) {
        let t = table(n, phi, 8);
        let z = sigma_z(&t).unwrap();
        prop_assert!((block_entropy(&t, 1).unwrap() - shannon2((1.0 + z) / 2.0)).abs() < 1e-10);
        let rho = two_spin_rdm(&t, 1).unwrap().entries;
        let rho = DMatrix::from_fn(4, 4, |i, j| rho[(i, j)]);
        prop_assert!((block_entropy(&t, 2).unwrap() - common::entropy_bits(&rho)).abs() < 1e-9);
    }

    #[test]
    fn block_spectrum_pairs_up(n in 0usize..4, phi in 0.0f64..FRAC_PI_2, m in 1usize..12) {
        let t = table(n, phi, 12);
        let gamma = BlockGamma::new(&t, m).unwrap();
        let h = gamma.hermitian_spectrum();
        let mut nu = gamma.spectrum.clone();
        nu.sort_by(f64::total_cmp);
        for (i, v) in nu.iter().enumerate() {
            prop_assert!((h[m + i] - v).abs() < 1e-10);
            prop_assert!((h[m - 1 - i] + v).abs() < 1e-10);
        }
    }

    #[test]
    fn entropy_is_subadditive_in_block_length(n in 0usize..3, phi in 0.0f64..FRAC_PI_2, m in 1usize..10) {
        let t = table(n, phi, 24);
        let s1 = block_entropy(&t, m).unwrap();
        let s2 = block_entropy(&t, 2 * m).unwrap();
        prop_assert!(s2 <= 2.0 * s1 + 1e-9);
        prop_assert!(s1 >= -1e-12 && s1 <= m as f64 + 1e-9);
    }
}

#[test]
fn toeplitz_and_pfaffian_routes_agree() {
    for n in 0..4usize {
        for phi in [0.2, 0.7, FRAC_PI_4, 1.1] {
            let t = table(n, phi, 16);
            for r in 1..=10 {
                let a = xx(&t, r).unwrap();
                let b = xx_pfaffian(&t, r).unwrap();
                assert!((a - b).abs() < 1e-9, "n={n} phi={phi} r={r}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn pure_cluster_state_is_fully_ordered() {
    for n in 0..4usize {
        let t = table(n, 0.0, 40);
        for r in 1..=8 {
            assert!(
                (cluster_correlator(&t, r).unwrap() - 1.0).abs() < 1e-12,
                "n={n} r={r}"
            );
        }
        let stab = ncluster::pauli::cluster_term(n, 2);
        assert!((pauli_expectation(&t, &stab).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn polarized_state_has_no_cluster_order() {
    for n in 0..4usize {
        let t = table(n, FRAC_PI_2, 40);
        assert!((sigma_z(&t).unwrap() + 1.0).abs() < 1e-12);
        for r in 1..=6 {
            assert!(cluster_correlator(&t, r).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn cluster_pair_sign_is_origin_independent() {
    let t = table(3, 0.4, 60);
    for r in 1..6 {
        let values: Vec<f64> = (0..4)
            .map(|j| {
                let (sign, s) = cluster_pair(3, j, r);
                sign * pauli_expectation(&t, &s).unwrap()
            })
            .collect();
        for v in &values {
            assert!((v - values[0]).abs() < 1e-12, "{values:?}");
        }
    }
}

#[test]
fn ising_order_parameter_matches_closed_form() {
    let params = ModelParams::unit(0, 0.4).unwrap();
    let res = order_parameter(&params, 200, &QuadratureSpec::for_model(0)).unwrap();
    let exact = order_parameter_closed_form(0, 0.4).unwrap();
    assert!(res.converged);
    assert!((res.extrapolated - exact).abs() < 1e-6);
    assert!(order_parameter_closed_form(0, 1.0).is_none());
}

#[test]
fn multipartite_premises_hold() {
    for n in 0..4usize {
        for phi in [0.3, FRAC_PI_4, 1.0] {
            let t = table(n, phi, 3 * (n + 2));
            let report = multipartite_structure_report(&t).unwrap();
            assert!(report.all_passed(), "{report:?}");
        }
    }
}

#[test]
fn concurrence_of_known_states() {
    let mut bell = Matrix4::zeros();
    bell[(0, 0)] = 0.5;
    bell[(3, 3)] = 0.5;
    bell[(0, 3)] = 0.5;
    bell[(3, 0)] = 0.5;
    assert!((concurrence_general(&bell) - 1.0).abs() < 1e-10);
    let mixed = Matrix4::identity() * 0.25;
    assert_eq!(concurrence_general(&mixed), 0.0);
}

#[test]
fn first_on_lattice_xx_factorizes() {
    for n in 0..5usize {
        for phi in [0.2, 0.6, 1.0, 1.4] {
            let t = table(n, phi, 2 * (n + 1));
            let s = n as i64 + 1;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expect = sign * t.get(-s).unwrap() * t.get(0).unwrap().powi(n as i32);
            assert!(
                (xx(&t, s).unwrap() - expect).abs() < 1e-12,
                "n={n} phi={phi}"
            );
        }
    }
}
