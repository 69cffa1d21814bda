mod common;

use common::*;
use num_complex::Complex64;
use qladder_core::hamiltonians::{build_hfh, build_hqs, build_hqs_xx, map_params, spectral_offset};
use qladder_core::solver::{dense_spectrum, krylov_evolve, lanczos_extremal};
use qladder_core::{LadderParams, SectorBasis, StateVector, HubbardParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_disordered(n: usize, rng: &mut ChaCha8Rng) -> LadderParams {
    let mut draw = |k: usize| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    LadderParams::new(n, draw(2 * n), draw(n - 1), draw(n - 1), draw(n)).unwrap()
}

#[test]
fn ladder_matches_kronecker_build() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for _ in 0..4 {
            let p = random_disordered(n, &mut rng);
            let ours = build_hqs(&p).unwrap().to_dense();
            assert!((ours - dense_hqs(&p, false)).camax() < 1e-14);
            let ours_xx = build_hqs_xx(&p).unwrap().to_dense();
            assert!((ours_xx - dense_hqs(&p, true)).camax() < 1e-14);
        }
    }
}

#[test]
fn hubbard_matches_fock_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=3 {
        let hp = HubbardParams::new(n, rng.random_range(-1.0..1.0), rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0)).unwrap();
        let ours = build_hfh(&hp).unwrap().to_dense();
        assert!((ours - fock_hubbard(&hp)).camax() < 1e-14, "n={n}");
    }
}

#[test]
fn single_rung_spectra() {
    let p = LadderParams::uniform(1, 1.0, 0.0, 0.25).unwrap();
    let qs = dense_spectrum(&build_hqs(&p).unwrap()).unwrap().eigenvalues;
    assert!(max_diff(&qs, &[-0.75, -0.25, -0.25, 1.25]) < 1e-15);
    let hp = map_params(&p).unwrap();
    assert_eq!((hp.mu, hp.u), (-0.5, 1.0));
    let fh = eigvals(&fock_hubbard(&hp));
    assert!(max_diff(&fh, &[0.0, 0.5, 0.5, 2.0]) < 1e-15);
    assert_eq!(spectral_offset(&p).unwrap(), -0.75);
}

#[test]
fn equivalence_against_fock_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=3 {
        for _ in 0..5 {
            let p = LadderParams::uniform(n, rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).unwrap();
            let e0 = spectral_offset(&p).unwrap();
            let qs = eigvals(&dense_hqs(&p, false));
            let fh: Vec<f64> = eigvals(&fock_hubbard(&map_params(&p).unwrap())).iter().map(|e| e + e0).collect();
            assert!(max_diff(&qs, &fh) < 1e-10);
        }
    }
}

#[test]
fn krylov_matches_taylor_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let p = random_disordered(3, &mut rng);
    let h = build_hqs(&p).unwrap();
    let dense = h.to_dense();
    let mut amps: Vec<Complex64> = (0..64).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    let psi = StateVector::from_amplitudes(amps.clone(), None);
    let times = [0.0, 1.5, 12.0, 40.0];
    let out = krylov_evolve(&h, &psi, &times).unwrap();
    for (s, &t) in out.states.iter().zip(&times) {
        let want = expm_apply(&dense, t, &amps);
        let err = s.amplitudes().iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "t={t} err={err}");
    }
}

#[test]
fn lanczos_matches_dense_in_sectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let p = random_disordered(4, &mut rng);
    let h = build_hqs(&p).unwrap();
    for (u, d) in [(1, 1), (2, 1), (2, 2)] {
        let basis = SectorBasis::new(4, u, d).unwrap();
        let block = basis.project_operator(&h).unwrap();
        let want = eigvals(&block.to_dense());
        let got = lanczos_extremal(&h, 3, Some(&basis)).unwrap();
        assert_eq!(got.sector, Some((u, d)));
        assert!(max_diff(&got.eigenvalues, &want[..3]) < 1e-9);
    }
}

#[test]
fn sector_blocks_reassemble_full_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let p = random_disordered(3, &mut rng);
    let h = build_hqs(&p).unwrap();
    let mut all: Vec<f64> = SectorBasis::all(3)
        .unwrap()
        .iter()
        .flat_map(|b| eigvals(&b.project_operator(&h).unwrap().to_dense()))
        .collect();
    all.sort_by(f64::total_cmp);
    assert!(max_diff(&all, &eigvals(&h.to_dense())) < 1e-12);
}
