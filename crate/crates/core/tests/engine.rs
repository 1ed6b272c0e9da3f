mod common;

use nalgebra::DMatrix;
use ncluster::pauli::{cluster_pair, cluster_term, Majorana};
use ncluster::wick::{
    expectation, expectation_complex, monomial_expectation, pfaffian, pfaffian_dense,
    structured_determinant, ContractionMatrix,
};
use ncluster::{
    build_table, compile, Axis, Compiled, MajoranaMonomial, ModelParams, PauliString,
    QuadratureSpec,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

fn pauli_string(max_len: usize, max_site: i64) -> impl Strategy<Value = PauliString> {
    prop::collection::vec((0..max_site, axis()), 0..max_len).prop_map(PauliString::new)
}

/// Distinct sites, so the product is Hermitian.
fn hermitian_string(max_site: i64) -> impl Strategy<Value = PauliString> {
    prop::collection::btree_map(0..max_site, axis(), 0..7)
        .prop_map(|m| PauliString::new(m.into_iter().collect()))
}

fn skew(seed: u64, dim: usize) -> DMatrix<f64> {
    common::random_skew(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unitarity_compiles_to_identity(p in pauli_string(8, 6)) {
        let mut adjoint = p.clone();
        adjoint.factors.reverse();
        let Compiled::Monomial(m) = compile(&p.times(&adjoint)) else {
            panic!("p p^dagger is parity even");
        };
        prop_assert!(m.ops.is_empty(), "{m}");
        prop_assert!((m.prefactor - Complex64::new(1.0, 0.0)).norm() < 1e-15, "{m}");
    }

    #[test]
    fn odd_string_count_vanishes(p in pauli_string(8, 6)) {
        prop_assert_eq!(matches!(compile(&p), Compiled::ParityOdd), p.string_count() % 2 == 1);
    }

    #[test]
    fn compiled_monomials_are_canonical(p in pauli_string(8, 6)) {
        if let Compiled::Monomial(m) = compile(&p) {
            prop_assert!(m.ops.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(m.canonical(), m);
        }
    }

    #[test]
    fn canonical_order_preserves_value(
        ops in prop::collection::vec((0i64..4, any::<bool>()), 0..8),
        phi in 0.05f64..1.5,
    ) {
        let ops: Vec<Majorana> = ops
            .into_iter()
            .map(|(s, a)| if a { Majorana::a(s) } else { Majorana::b(s) })
            .collect();
        let mono = MajoranaMonomial::new(Complex64::new(1.0, 0.0), ops);
        let table = build_table(&ModelParams::unit(1, phi).unwrap(), 8, &QuadratureSpec::for_model(1)).unwrap();
        let raw = monomial_expectation(&mono, &table).unwrap();
        let canon = monomial_expectation(&mono.canonical(), &table).unwrap();
        prop_assert!((raw - canon).norm() < 1e-12, "{raw} vs {canon}");
    }

    #[test]
    fn hermitian_strings_have_real_expectations(p in hermitian_string(6), phi in 0.05f64..1.5) {
        let table = build_table(&ModelParams::unit(1, phi).unwrap(), 8, &QuadratureSpec::for_model(1)).unwrap();
        let z = expectation_complex(&compile(&p), &table).unwrap();
        prop_assert!(z.im.abs() < 1e-12, "{p}: {z}");
        prop_assert!(z.re.abs() <= 1.0 + 1e-12, "{p}: {z}");
    }

    #[test]
    fn expectations_are_translation_invariant(p in hermitian_string(5), shift in -4i64..4, phi in 0.05f64..1.5) {
        let table = build_table(&ModelParams::unit(2, phi).unwrap(), 10, &QuadratureSpec::for_model(2)).unwrap();
        let a = expectation(&compile(&p), &table).unwrap();
        let b = expectation(&compile(&p.shifted(shift)), &table).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn swapping_neighbours_flips_sign(seed in any::<u64>(), half in 1usize..5, at in 0usize..8) {
        let dim = 2 * half;
        let at = at % (dim - 1);
        let m = skew(seed, dim);
        let mut p: Vec<usize> = (0..dim).collect();
        p.swap(at, at + 1);
        let swapped = DMatrix::from_fn(dim, dim, |i, j| m[(p[i], p[j])]);
        let a = pfaffian_dense(m);
        let b = pfaffian_dense(swapped);
        prop_assert!((a + b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn pfaffian_is_homogeneous(seed in any::<u64>(), half in 1usize..6, scale in -3.0f64..3.0) {
        let m = skew(seed, 2 * half);
        let a = pfaffian_dense(m.clone());
        let b = pfaffian_dense(m * scale);
        let expect = a * scale.powi(half as i32);
        prop_assert!((b - expect).abs() < 1e-9 * expect.abs().max(1.0));
    }

    #[test]
    fn component_split_matches_dense(seed in any::<u64>(), half in 1usize..7, density in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = common::random_skew(&mut rng, 2 * half);
        for i in 0..2 * half {
            for j in i + 1..2 * half {
                if rand::Rng::random::<f64>(&mut rng) > density {
                    m[(i, j)] = 0.0;
                    m[(j, i)] = 0.0;
                }
            }
        }
        let split = pfaffian(&ContractionMatrix::new(m.clone()).unwrap());
        let brute = common::pfaffian_matchings(&m);
        prop_assert!((split - brute).abs() < 1e-10 * brute.abs().max(1.0), "{split} vs {brute}");
    }

    #[test]
    fn structured_determinant_matches_lu(seed in any::<u64>(), dim in 1usize..9, density in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(dim, dim, |_, _| {
            if rand::Rng::random::<f64>(&mut rng) < density {
                rand::Rng::random_range(&mut rng, -1.0..1.0)
            } else {
                0.0
            }
        });
        let a = structured_determinant(&m).unwrap();
        let b = common::dense_det(&m);
        prop_assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn pfaffian_squares_to_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..500 {
        let dim = 2 * (1 + trial % 8);
        let m = common::random_skew(&mut rng, dim);
        let pf = pfaffian_dense(m.clone());
        let det = common::dense_det(&m);
        assert!(
            (pf * pf - det).abs() <= 1e-8 * det.abs().max(1e-300),
            "dim {dim}: {} vs {det}",
            pf * pf
        );
    }
}

#[test]
fn pfaffian_matches_matching_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..500 {
        let dim = 2 * (1 + trial % 5);
        let m = common::random_skew(&mut rng, dim);
        let brute = common::pfaffian_matchings(&m);
        assert!((pfaffian_dense(m.clone()) - brute).abs() < 1e-9);
        assert!((pfaffian(&ContractionMatrix::new(m).unwrap()) - brute).abs() < 1e-9);
    }
}

#[test]
fn contraction_matrix_rejects_bad_input() {
    assert!(ContractionMatrix::new(DMatrix::zeros(3, 3)).is_err());
    assert!(ContractionMatrix::new(DMatrix::zeros(2, 4)).is_err());
    let mut m = DMatrix::zeros(2, 2);
    m[(0, 1)] = 1.0;
    assert!(ContractionMatrix::new(m).is_err());
}

#[test]
fn degenerate_pivots_give_zero() {
    assert_eq!(pfaffian_dense(DMatrix::zeros(4, 4)), 0.0);
    assert_eq!(
        pfaffian(&ContractionMatrix::new(DMatrix::zeros(6, 6)).unwrap()),
        0.0
    );
}

#[test]
fn cluster_terms_and_pairs_compile_to_short_monomials() {
    // x_j z..z x_{j+n+1} reduces to B_j A_{j+n+1}.
    for n in 0..5usize {
        let Compiled::Monomial(m) = compile(&cluster_term(n, 3)) else {
            panic!()
        };
        assert_eq!(m.ops, vec![Majorana::b(3), Majorana::a(3 + n as i64 + 1)]);
        assert_eq!(m.prefactor, Complex64::new(1.0, 0.0));
    }
    let (_, s) = cluster_pair(1, 0, 3);
    let Compiled::Monomial(m) = compile(&s) else {
        panic!()
    };
    assert_eq!(m.len(), 6, "{m}");
    assert!(m.is_parity_balanced());
}

#[test]
fn parses_and_prints_strings() {
    let p: PauliString = "x0 z1 y2".parse().unwrap();
    assert_eq!(p.to_string(), "x0 z1 y2");
    assert_eq!(p.window(), Some((0, 2)));
    assert!("q0".parse::<PauliString>().is_err());
    assert!("x".parse::<PauliString>().is_err());
    assert_eq!(PauliString::identity().to_string(), "1");
}
