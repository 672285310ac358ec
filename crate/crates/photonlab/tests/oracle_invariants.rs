//! Property tests for the Fock-space oracle: normalization, sector
//! bookkeeping, positivity, and the bounded-harmonic structure of every
//! likelihood curve.

use num_complex::Complex64;
use proptest::prelude::*;

use photonlab::fock::{apply_loss, apply_phase, exact_likelihood, ModeState};
use photonlab::trig::TrigPoly;

fn arb_mode_state() -> impl Strategy<Value = ModeState> {
    (1usize..=6)
        .prop_flat_map(|n| proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n + 1))
        .prop_filter_map("nonzero norm", |pairs| {
            let norm: f64 = pairs.iter().map(|(r, i)| r * r + i * i).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            let amps: Vec<Complex64> = pairs
                .iter()
                .map(|&(r, i)| Complex64::new(r / norm, i / norm))
                .collect();
            Some(ModeState::new(amps).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn likelihoods_normalize_and_respect_photon_count(
        state in arb_mode_state(),
        phi in 0.0..std::f64::consts::TAU,
        t0 in 0.0..=1.0f64,
        t1 in 0.0..=1.0f64,
    ) {
        let n = state.total_photons();
        let probs = exact_likelihood(&state, phi, t0, t1).unwrap();
        let total: f64 = probs.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-10, "total = {total}");
        for (event, p) in &probs {
            prop_assert!(*p > -1e-12);
            prop_assert!(event.detected() <= n);
        }
    }

    #[test]
    fn no_loss_conserves_the_photon_number(state in arb_mode_state(), phi in 0.0..6.0f64) {
        let n = state.total_photons();
        let probs = exact_likelihood(&state, phi, 1.0, 1.0).unwrap();
        for (event, p) in &probs {
            if event.detected() < n {
                prop_assert!(*p < 1e-14);
            }
        }
    }

    #[test]
    fn loss_sectors_are_hermitian_positive_and_normalized(
        state in arb_mode_state(),
        phi in 0.0..6.0f64,
        t0 in 0.0..=1.0f64,
        t1 in 0.0..=1.0f64,
    ) {
        let n = state.total_photons();
        let rho = apply_loss(&apply_phase(&state, phi), t0, t1).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        for (&(k0, k1), block) in rho.sectors() {
            prop_assert!(k0 + k1 <= n);
            let adjoint_gap = (block - block.adjoint()).norm();
            prop_assert!(adjoint_gap < 1e-10, "sector ({k0},{k1}) not hermitian: {adjoint_gap}");
            let eig = block.clone().try_symmetric_eigen(f64::EPSILON, 0).unwrap();
            for lambda in eig.eigenvalues.iter() {
                prop_assert!(*lambda > -1e-10, "negative eigenvalue {lambda}");
            }
        }
    }

    #[test]
    fn every_likelihood_is_a_bounded_trig_polynomial(
        state in arb_mode_state(),
        t0 in 0.0..=1.0f64,
        t1 in 0.0..=1.0f64,
    ) {
        // sample on 2N + 1 points, fit degree N, and the curve must be
        // reproduced everywhere
        let n = state.total_photons();
        let grid = 2 * n + 1;
        let events = photonlab::encoding::DetectionEvent::all(n);
        let mut rows = vec![Vec::with_capacity(grid); events.len()];
        for j in 0..grid {
            let phi = std::f64::consts::TAU * j as f64 / grid as f64;
            let probs = exact_likelihood(&state, phi, t0, t1).unwrap();
            for (row, event) in rows.iter_mut().zip(&events) {
                row.push(probs[event]);
            }
        }
        let polys: Vec<TrigPoly> = rows
            .iter()
            .map(|row| TrigPoly::fit_uniform(row, n).unwrap())
            .collect();
        for phi in [0.111, 1.234, 3.456, 5.678] {
            let probs = exact_likelihood(&state, phi, t0, t1).unwrap();
            for (poly, event) in polys.iter().zip(&events) {
                let gap = (poly.eval(phi) - probs[event]).abs();
                prop_assert!(gap < 1e-8, "{event} at phi={phi}: residual {gap}");
            }
        }
    }
}
