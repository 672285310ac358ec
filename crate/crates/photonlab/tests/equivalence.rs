//! Module-boundary contract: the circuit route (encode, synthesize, evolve,
//! decode) reproduces the Fock-space oracle, exactly on distributions and
//! statistically on samples.

use photonlab::circuit::{build, sample_detections, PreparedInput};
use photonlab::encoding::DetectionEvent;
use photonlab::fock::{exact_likelihood, InputKind};

const LOSS_SETTINGS: [(f64, f64); 4] = [(1.0, 1.0), (0.5, 0.5), (1.0, 0.5), (0.2, 0.8)];

fn paper_states() -> Vec<InputKind> {
    vec![
        InputKind::Noon(6),
        InputKind::MmPrime(5, 1),
        InputKind::MmPrime(4, 2),
        InputKind::HollandBurnett(6),
    ]
}

#[test]
fn circuit_distributions_equal_oracle_distributions() {
    for kind in paper_states() {
        let input = kind.build().unwrap();
        let prepared = PreparedInput::new(&input).unwrap();
        for &(t0, t1) in &LOSS_SETTINGS {
            for phi in [0.17, 1.03, 4.9] {
                let circuit_probs = prepared.event_probabilities(phi, t0, t1).unwrap();
                let oracle_probs = exact_likelihood(&input, phi, t0, t1).unwrap();
                for (event, p) in &oracle_probs {
                    let q = circuit_probs[event];
                    assert!(
                        (q - p).abs() < 1e-10,
                        "{} at phi={phi}, t=({t0},{t1}), {event}: circuit {q} vs oracle {p}",
                        kind.label()
                    );
                }
            }
        }
    }
}

#[test]
fn decoded_samples_reproduce_oracle_within_multinomial_error() {
    let kind = InputKind::HollandBurnett(6);
    let input = kind.build().unwrap();
    let (phi, t0, t1) = (0.83, 0.7, 0.45);
    let circuit = build(&input, phi, t0, t1).unwrap();
    let shots = 100_000u64;
    let counts = sample_detections(&circuit, shots, 1234).unwrap();
    assert_eq!(counts.values().sum::<u64>(), shots);
    let oracle = exact_likelihood(&input, phi, t0, t1).unwrap();
    for (event, p) in &oracle {
        let freq = counts.get(event).copied().unwrap_or(0) as f64 / shots as f64;
        assert!(
            (freq - p).abs() < 0.01,
            "{event}: frequency {freq} vs probability {p}"
        );
    }
}

#[test]
fn structurally_impossible_event_never_fires() {
    // D(3,3) has zero probability for |5::1> at t = 0.5; no amount of
    // sampling may produce it
    let input = InputKind::MmPrime(5, 1).build().unwrap();
    let circuit = build(&input, 0.77, 0.5, 0.5).unwrap();
    let counts = sample_detections(&circuit, 100_000, 55).unwrap();
    assert_eq!(
        counts.get(&DetectionEvent::new(3, 3)).copied().unwrap_or(0),
        0
    );
}

#[test]
fn sampled_table_tracks_exact_probabilities_at_full_shot_count() {
    use photonlab::estimation::{build_likelihoods, TableProvenance};
    let input = InputKind::MmPrime(5, 1).build().unwrap();
    let (t0, t1) = (0.5, 0.5);
    let n_grid = 64;
    let sampled = build_likelihoods(
        &input,
        t0,
        t1,
        n_grid,
        TableProvenance::Sampled {
            shots: 100_000,
            seed: 21,
        },
    )
    .unwrap();
    let exact = build_likelihoods(&input, t0, t1, n_grid, TableProvenance::Exact).unwrap();
    let mut worst = 0.0f64;
    for e in 0..sampled.events().len() {
        for j in 0..n_grid {
            let phi = sampled.grid_phi(j);
            worst = worst.max((sampled.fitted(e, phi) - exact.raw(e, j)).abs());
        }
    }
    assert!(worst < 0.01, "max |fitted - exact| = {worst}");
}

#[test]
fn relabeling_detectors_reflects_the_phase_for_noon() {
    // swapping D0 and D1 maps the distribution at phi to the one at 2 pi - phi
    let input = InputKind::Noon(6).build().unwrap();
    for phi in [0.31, 0.94, 2.2] {
        let direct = exact_likelihood(&input, phi, 0.5, 0.5).unwrap();
        let reflected = exact_likelihood(&input, std::f64::consts::TAU - phi, 0.5, 0.5).unwrap();
        for (event, p) in &direct {
            let swapped = DetectionEvent::new(event.n1(), event.n0());
            assert!(
                (reflected[&swapped] - p).abs() < 1e-12,
                "phi={phi}, {event}: {p} vs swapped {}",
                reflected[&swapped]
            );
        }
    }
}
