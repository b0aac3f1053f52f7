use cosolve_core::fixpoint::gap_monotonicity;
use cosolve_core::mateq::{
    check_condition_i, check_conditions, check_self_map, probe_uniqueness, solve_common,
    EquationPair, EquationSpec, MapDescriptor, MapKind, Sign,
};
use cosolve_core::matrix::{ComplexMatrix, HermitianMatrix};
use cosolve_core::spectra::hermitian_trace_norm;
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

/// Small coefficients, an affine map with a positive floor, and `Q₁ = Q₂`:
/// every condition holds with room to spare on the ball of radius 4.
fn hypothesis_pair() -> EquationPair {
    let spec = EquationSpec::new(
        HermitianMatrix::from_diagonal(&[1.0, 2.0]),
        Sign::Plus,
        vec![ComplexMatrix::identity(2).scale(0.05)],
        MapKind::Affine { c: 0.05, d: 0.5 },
    )
    .unwrap();
    EquationPair::single(spec)
}

fn mixed_pair() -> EquationPair {
    let a = vec![
        ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.1, 0.05), Complex64::new(0.0, 0.02)],
            vec![Complex64::new(0.03, 0.0), Complex64::new(0.08, -0.01)],
        ])
        .unwrap(),
        ComplexMatrix::identity(2).scale(0.04),
    ];
    let q1 = HermitianMatrix::from_real_rows(&[&[1.5, 0.2], &[0.2, 1.0]]).unwrap();
    let q2 = HermitianMatrix::from_real_rows(&[&[1.4, 0.1], &[0.1, 1.1]]).unwrap();
    EquationPair::new(
        EquationSpec::new(q1, Sign::Plus, a.clone(), MapKind::SpectralTanh { c: 0.5 }).unwrap(),
        EquationSpec::new(q2, Sign::Minus, a, MapKind::ScaledIdentity { c: 0.2 }).unwrap(),
    )
    .unwrap()
}

#[test]
fn hypothesis_pair_passes_every_checker() {
    let pair = hypothesis_pair();
    let a = 4.0;
    let k1 = pair.auto_k1(a).unwrap();
    assert!((k1 - 0.7).abs() < 1e-15);
    let report = check_conditions(&pair, a, k1, 1e-6, 200, 42).unwrap();
    assert!(report.all_pass(), "{report:#?}");
    assert!(report.condition_i.margin_1 > 0.0);
    assert!(report.condition_ii.worst_pointwise_margin > 0.0);
    assert!(report.condition_iii.worst_margin > 0.0);
    assert!(report.sampled_not_proven);
}

#[test]
fn perturbations_flip_the_matching_checker() {
    let pair = hypothesis_pair();
    let report = check_conditions(&pair, 4.0, 0.7, 10.0, 200, 42).unwrap();
    assert!(report.condition_i.pass && !report.condition_iii.pass);

    let spec = EquationSpec::new(
        HermitianMatrix::from_diagonal(&[2.0, 2.0]),
        Sign::Plus,
        vec![ComplexMatrix::identity(2).scale(0.05)],
        MapKind::Affine { c: 0.05, d: 0.5 },
    )
    .unwrap();
    let heavy = EquationPair::single(spec);
    let report = check_condition_i(&heavy, 4.0, 0.7).unwrap();
    assert!(!report.pass);
    assert!(report.margin_1 < 0.0);
}

#[test]
fn uniqueness_and_solution_properties() {
    let pair = hypothesis_pair();
    let probe = probe_uniqueness(&pair, 4.0, TOL, 10_000, 5, 7);
    assert!(
        probe.all_converged() && probe.unique(),
        "{:?}",
        probe.flagged
    );

    let report = solve_common(&pair, 4.0, TOL, 10_000, None).unwrap();
    assert!(report.converged());
    assert!(report.residual_1.unwrap() <= TOL && report.residual_2.unwrap() <= TOL);
    assert!(report.positive_definite && report.within_ball);
    assert!(gap_monotonicity(&report.trace.gaps).is_monotone());
    assert!(report.trace.final_gap.unwrap() <= TOL);
}

#[test]
fn mixed_sign_pair_converges_to_a_common_point_only_if_one_exists() {
    // Distinct Q's and maps: the two equations have different solutions, so the
    // alternating iteration cannot settle on a common one.
    let pair = mixed_pair();
    let report = solve_common(&pair, 5.0, TOL, 2_000, None).unwrap();
    assert!(!report.converged());
    assert!(report.solution.is_none());
    assert!(report.residual_1.is_some());
}

#[test]
fn residual_examples() {
    let spec = EquationSpec::new(
        HermitianMatrix::identity(1),
        Sign::Plus,
        vec![ComplexMatrix::identity(1)],
        MapKind::ScaledIdentity { c: 0.5 },
    )
    .unwrap();
    assert_eq!(
        spec.residual(&HermitianMatrix::from_diagonal(&[2.0]))
            .unwrap(),
        0.0
    );
    assert_eq!(
        spec.residual(&HermitianMatrix::from_diagonal(&[0.0]))
            .unwrap(),
        1.0
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn self_map_under_condition_i(seed in any::<u64>(), c in -0.5f64..0.5, d in -0.3f64..0.3) {
        let spec = EquationSpec::new(
            HermitianMatrix::from_diagonal(&[0.8, 0.6, 0.4]),
            Sign::Plus,
            vec![ComplexMatrix::identity(3).scale(0.2), ComplexMatrix::identity(3).scale(0.1)],
            MapKind::Affine { c, d },
        )
        .unwrap();
        let pair = EquationPair::single(spec);
        let a = 3.0;
        let k1 = pair.auto_k1(a).unwrap();
        prop_assume!(check_condition_i(&pair, a, k1).unwrap().pass);
        let report = check_self_map(&pair, a, 100, seed).unwrap();
        prop_assert!(report.pass, "{:?}", report);
    }

    #[test]
    fn auto_k1_is_sound(seed in any::<u64>(), c in -3.0f64..3.0, d in -3.0f64..3.0, n in 1usize..=4) {
        for kind in [
            MapKind::Zero,
            MapKind::ScaledIdentity { c },
            MapKind::SpectralTanh { c },
            MapKind::Affine { c, d },
        ] {
            let report = MapDescriptor::auto(kind, 2.5).unwrap().check_k1_soundness(n, 100, seed).unwrap();
            prop_assert!(report.pass, "{:?}: {:?}", kind, report);
        }
    }

    #[test]
    fn checkers_are_deterministic(seed in any::<u64>()) {
        let pair = mixed_pair();
        let a = check_conditions(&pair, 5.0, 0.5, 1e-6, 30, seed).unwrap();
        let b = check_conditions(&pair, 5.0, 0.5, 1e-6, 30, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn converged_solutions_solve_both_equations(seed in any::<u64>(), c in 0.0f64..1.0) {
        let q = cosolve_core::mateq::random_hermitian(
            &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed), 2);
        let q = q.try_add(&HermitianMatrix::identity(2).scale(hermitian_trace_norm(&q).unwrap())).unwrap();
        let spec = EquationSpec::new(q, Sign::Plus, vec![ComplexMatrix::identity(2).scale(0.5)], MapKind::SpectralTanh { c }).unwrap();
        let pair = EquationPair::single(spec);
        let report = solve_common(&pair, 100.0, TOL, 10_000, None).unwrap();
        prop_assert!(report.converged());
        prop_assert!(report.residual_1.unwrap() <= TOL);
        prop_assert!(report.positive_definite);
    }
}
