//! Randomized structural properties, each exercised on at least one hundred
//! independently drawn instances.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhsw_core::density::expand;
use qhsw_core::entropy::{relative_entropy, von_neumann_entropy, Ensemble};
use qhsw_core::linalg::{hermitian_eigen, hermitize, max_abs_diff, outer, CMatrix};
use qhsw_core::{chi_unitary_invariance_residual, random_state_vector, reconstruct, DensityMatrix};

const RESIDUAL_TOL: f64 = 1e-10;

fn random_mixed_state(d: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let k = rng.random_range(1..=3);
    let mut m = CMatrix::zeros(d, d);
    let mut weights = Vec::with_capacity(k);
    let mut total = 0.0;
    for _ in 0..k {
        let w: f64 = rng.random::<f64>() + 1e-3;
        weights.push(w);
        total += w;
    }
    for w in &mut weights {
        *w /= total;
    }
    for w in weights {
        m += outer(&random_state_vector(d, rng)).scale(w);
    }
    DensityMatrix::new(hermitize(&m)).expect("mixtures of pure states are valid")
}

fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let raw = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let (_, vecs) = hermitian_eigen(&hermitize(&(&raw + raw.adjoint())));
    vecs
}

#[test]
fn expansion_and_reconstruction_are_mutually_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut instances = 0;
    for d in 2..=5 {
        for _ in 0..30 {
            let rho = random_mixed_state(d, &mut rng);
            let coeffs = expand(&rho).unwrap();
            let back = reconstruct(&coeffs).unwrap();
            let residual = max_abs_diff(rho.matrix(), &back);
            assert!(
                residual < RESIDUAL_TOL,
                "round trip residual {residual} at d = {d}"
            );
            instances += 1;
        }
    }
    assert!(instances >= 100);
}

#[test]
fn expansion_coefficients_satisfy_the_conjugation_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut instances = 0;
    for d in 2..=5 {
        for _ in 0..30 {
            let rho = random_mixed_state(d, &mut rng);
            let coeffs = expand(&rho).unwrap();
            let residual = coeffs.hermiticity_residual();
            assert!(
                residual < RESIDUAL_TOL,
                "pairing residual {residual} at d = {d}"
            );
            instances += 1;
        }
    }
    assert!(instances >= 100);
}

#[test]
fn holevo_quantity_is_invariant_under_unitary_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut instances = 0;
    for d in 2..=3 {
        for _ in 0..50 {
            let states: Vec<DensityMatrix> =
                (0..3).map(|_| random_mixed_state(d, &mut rng)).collect();
            let raw: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let ensemble = Ensemble::new(probs, states).unwrap();
            let u = random_unitary(d, &mut rng);
            let residual = chi_unitary_invariance_residual(&ensemble, &u).unwrap();
            assert!(
                residual < RESIDUAL_TOL,
                "invariance residual {residual} at d = {d}"
            );
            instances += 1;
        }
    }
    assert!(instances >= 100);
}

#[test]
fn distance_to_the_maximally_mixed_state_complements_the_entropy() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut instances = 0;
    for d in 2..=4 {
        for _ in 0..40 {
            let rho = random_mixed_state(d, &mut rng);
            let uniform = DensityMatrix::maximally_mixed(d).unwrap();
            let dist = relative_entropy(&rho, &uniform).unwrap();
            let entropy = von_neumann_entropy(&rho).unwrap();
            let residual = (dist - ((d as f64).log2() - entropy)).abs();
            assert!(
                residual < RESIDUAL_TOL,
                "identity residual {residual} at d = {d}"
            );
            instances += 1;
        }
    }
    assert!(instances >= 100);
}
