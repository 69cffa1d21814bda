mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qladder_core::circuit::{
    capacitance_slope, gx_from_circuit, gz_from_circuit, transmon_splitting, ut_closed_form,
    ut_curve_for, ut_gamma, CouplerSpec, TransmonSpec,
};
use qladder_core::hamiltonians::{
    build_hfh, build_hqs, build_hqs_on, inverse_map_params, map_params, spectral_offset,
};
use qladder_core::jordan_wigner::check_algebra;
use qladder_core::ladder::{delinearize, linearize};
use qladder_core::protocols::{check_symmetries, number_commutators};
use qladder_core::solver::{dense_spectrum, krylov_evolve};
use qladder_core::{LadderParams, Pauli, PauliString, SectorBasis, StateVector};

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![
        Just(Pauli::X),
        Just(Pauli::Y),
        Just(Pauli::Z),
        Just(Pauli::Plus),
        Just(Pauli::Minus)
    ]
}

fn pauli_string(qubits: usize) -> impl Strategy<Value = PauliString> {
    (
        proptest::collection::btree_map(1..=qubits, pauli(), 0..=qubits),
        -2.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(f, re, im)| PauliString::from_factors(Complex64::new(re, im), f).unwrap())
}

fn disordered(n: usize) -> impl Strategy<Value = LadderParams> {
    (
        proptest::collection::vec(-2.0..2.0f64, 2 * n),
        proptest::collection::vec(-1.0..1.0f64, n - 1),
        proptest::collection::vec(-1.0..1.0f64, n - 1),
        proptest::collection::vec(-1.0..1.0f64, n),
    )
        .prop_map(move |(e, d, u, z)| LadderParams::new(n, e, d, u, z).unwrap())
}

fn uniform(max_n: usize) -> impl Strategy<Value = LadderParams> {
    (1..=max_n, -2.0..2.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(n, e, x, z)| LadderParams::uniform(n, e, x, z).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn realize_is_multiplicative(a in pauli_string(4), b in pauli_string(4)) {
        let prod = (&a * &b).realize(2).unwrap();
        let direct = a.realize(2).unwrap().matmul(&b.realize(2).unwrap()).unwrap();
        prop_assert!(prod.max_abs_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn adjoint_realizes_to_conjugate_transpose(a in pauli_string(4)) {
        let lhs = a.adjoint().realize(2).unwrap();
        let rhs = a.realize(2).unwrap().adjoint();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);
    }

    #[test]
    fn linear_index_round_trip(n in 1usize..20, k in 0usize..40) {
        let q = k % (2 * n) + 1;
        prop_assert_eq!(linearize(delinearize(q, n).unwrap(), n).unwrap(), q);
    }

    #[test]
    fn parameter_map_round_trip(p in uniform(6)) {
        let back = inverse_map_params(&map_params(&p).unwrap()).unwrap();
        let (e, x, z) = p.uniform_values().unwrap();
        let (e2, x2, z2) = back.uniform_values().unwrap();
        prop_assert!((e - e2).abs() < 1e-12 && (x - x2).abs() < 1e-12 && (z - z2).abs() < 1e-12);
    }

    #[test]
    fn equivalence_theorem(p in uniform(3)) {
        let qs = dense_spectrum(&build_hqs(&p).unwrap()).unwrap().eigenvalues;
        let e0 = spectral_offset(&p).unwrap();
        let fh = dense_spectrum(&build_hfh(&map_params(&p).unwrap()).unwrap()).unwrap().eigenvalues;
        for (a, b) in qs.iter().zip(&fh) {
            prop_assert!((a - b - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn numbers_conserved_under_any_disorder(p in disordered(3)) {
        let (up, down) = number_commutators(&build_hqs(&p).unwrap(), 3).unwrap();
        prop_assert!(up <= 1e-12 && down <= 1e-12);
    }

    #[test]
    fn projector_properties(p in disordered(3), up in 0usize..=3, down in 0usize..=3) {
        let basis = SectorBasis::new(3, up, down).unwrap();
        let proj = basis.projector().unwrap();
        prop_assert!(proj.matmul(&proj).unwrap().max_abs_diff(&proj).unwrap() == 0.0);
        let h = build_hqs(&p).unwrap();
        prop_assert!(h.commutator(&proj).unwrap().max_abs() < 1e-12);
        let block = build_hqs_on(&p, &basis).unwrap();
        prop_assert!(block.max_abs_diff(&basis.project_operator(&h).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn uniform_ladders_are_swap_symmetric(p in uniform(3)) {
        prop_assert!(check_symmetries(&p).unwrap().swap_violation <= 1e-12);
    }

    #[test]
    fn evolution_conserves_norm_and_energy(p in disordered(2), t in 0.0..30.0f64, seed in 0u64..16) {
        let h = build_hqs(&p).unwrap();
        let psi = StateVector::basis(16, seed as usize, None).unwrap();
        let e0 = h.expectation(psi.amplitudes()).unwrap().re;
        let out = krylov_evolve(&h, &psi, &[t]).unwrap();
        let s = &out.states[0];
        prop_assert!((s.norm() - 1.0).abs() < 1e-8);
        prop_assert!((h.expectation(s.amplitudes()).unwrap().re - e0).abs() < 1e-8);
    }

    #[test]
    fn splitting_decreases_with_flux(a in 0.0..3.0f64, b in 0.0..3.0f64) {
        prop_assume!((a - b).abs() > 1e-6);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let e = |phi| transmon_splitting(&TransmonSpec::new(0.2, 15.0, 1500.0, phi).unwrap()).unwrap();
        prop_assert!(e(lo) > e(hi));
    }

    #[test]
    fn gz_odd_in_each_flux(p1 in -3.0..3.0f64, p2 in -3.0..3.0f64, k in 0.01..0.99f64) {
        let c = CouplerSpec::new(k, 0.0).unwrap();
        let t = |phi| TransmonSpec::new(0.25, 12.5, 1250.0, phi).unwrap();
        let g = gz_from_circuit(&t(p1), &t(p2), &c).unwrap();
        prop_assert_eq!(gz_from_circuit(&t(-p1), &t(p2), &c).unwrap(), -g);
        prop_assert_eq!(gz_from_circuit(&t(p1), &t(-p2), &c).unwrap(), -g);
    }

    #[test]
    fn gx_linear_in_capacitance(eps in 0.1..10.0f64, cx in 0.0..0.2f64, s in 0.0..4.0f64) {
        let g1 = gx_from_circuit(eps, &CouplerSpec::new(0.5, cx).unwrap()).unwrap();
        let gs = gx_from_circuit(eps, &CouplerSpec::new(0.5, s * cx).unwrap()).unwrap();
        prop_assert!((gs - s * g1).abs() <= 1e-15 * gs.abs().max(1e-300));
    }

    #[test]
    fn universal_curve_from_pipeline(
        e_c in 0.05..0.5f64, ratio in 20.0..200.0f64, l_ratio in 10.0..1000.0f64,
        k in 0.05..0.95f64, cx in 0.001..0.1f64,
    ) {
        let e_j = ratio * e_c;
        let t = TransmonSpec::new(e_c, e_j, l_ratio * e_j, 0.0).unwrap();
        let c = CouplerSpec::new(k, cx).unwrap();
        let gamma = ut_gamma(&t, &c).unwrap();
        let grid: Vec<f64> = (0..40).map(|i| i as f64 * PI / 40.0).collect();
        for p in ut_curve_for(&t, &c, &grid).unwrap() {
            let want = gamma * ut_closed_form(p.phi);
            prop_assert!((p.u_over_t - want).abs() <= 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn inverse_error_is_quadratic(n in 2usize..10, l in 0.001..0.02f64) {
        let s = capacitance_slope(n, l, l / 10.0).unwrap();
        prop_assert!((s - 2.0).abs() < 0.1, "{}", s);
    }
}

#[test]
fn anticommutation_relations() {
    for n in 1..=5 {
        assert!(check_algebra(n).unwrap().max_deviation <= 1e-12, "n={n}");
    }
}
