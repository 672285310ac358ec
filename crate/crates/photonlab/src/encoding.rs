//! Mapping between the two-mode Fock representation and the
//! two-qubits-per-photon circuit representation.
//!
//! Photon `p` (0-based) owns qubits `2p` and `2p + 1`. Before any loss the
//! pair is `|00>` for a lower-arm photon and `|11>` for an upper-arm photon;
//! the loss stage moves pairs to `|01>` (lost from the lower arm) or `|10>`
//! (lost from the upper arm). After the final beam splitter `|00>` / `|11>`
//! are read as a photon heading to detector D0 / D1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{binomial, ModeState};
use crate::qubit::QubitState;

/// Tolerance for the norm that may sit outside the bosonic-symmetric
/// subspace when decoding a qubit state back to mode amplitudes.
pub const SYMMETRIC_SUBSPACE_TOL: f64 = 1e-8;

/// Measurement outcome: `n0` photons at detector D0, `n1` at D1. Anything
/// missing from the total was lost in the arms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectionEvent {
    n0: usize,
    n1: usize,
}

impl DetectionEvent {
    pub fn new(n0: usize, n1: usize) -> Self {
        Self { n0, n1 }
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn detected(&self) -> usize {
        self.n0 + self.n1
    }

    pub fn lost(&self, total_photons: usize) -> usize {
        total_photons - self.detected()
    }

    /// Every event with `n0 + n1 <= total_photons`, in sorted order.
    pub fn all(total_photons: usize) -> Vec<Self> {
        let mut events = Vec::with_capacity((total_photons + 1) * (total_photons + 2) / 2);
        for n0 in 0..=total_photons {
            for n1 in 0..=(total_photons - n0) {
                events.push(Self { n0, n1 });
            }
        }
        events
    }
}

impl std::fmt::Display for DetectionEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D({},{})", self.n0, self.n1)
    }
}

/// Amplitude index of the arrangement where the photon pairs flagged in
/// `lower_mask` sit in `|00>` (lower arm) and the rest in `|11>`.
fn arrangement_index(lower_mask: usize, n_photons: usize) -> usize {
    let mut index = 0usize;
    for p in 0..n_photons {
        if lower_mask >> p & 1 == 0 {
            index |= 0b11 << (2 * p);
        }
    }
    index
}

/// Bosonic-symmetric qubit encoding of a mode state: each `|m>_l |N-m>_u`
/// component becomes the equal-weight sum over the `C(N, m)` distinct ways of
/// assigning `m` pairs to `|00>`, with weight `c_m / sqrt(C(N, m))`.
pub fn mode_to_qubit(state: &ModeState) -> QubitState {
    let n = state.total_photons();
    let mut amps = vec![Complex64::ZERO; 1 << (2 * n)];
    for mask in 0..(1usize << n) {
        let m = mask.count_ones() as usize;
        amps[arrangement_index(mask, n)] = state.amplitude(m) / binomial(n, m).sqrt();
    }
    QubitState::from_amplitudes(amps).expect("symmetrized encoding preserves the norm")
}

/// Inverse of [`mode_to_qubit`]. Fails if more than
/// [`SYMMETRIC_SUBSPACE_TOL`] of the state's norm lies outside the
/// no-loss bosonic-symmetric subspace.
pub fn qubit_to_mode(state: &QubitState) -> Result<ModeState> {
    let q = state.num_qubits();
    if !q.is_multiple_of(2) || q == 0 {
        return Err(Error::OddBitstring(q));
    }
    let n = q / 2;
    let amps = state.amplitudes();
    let mut coeffs = vec![Complex64::ZERO; n + 1];
    for mask in 0..(1usize << n) {
        let m = mask.count_ones() as usize;
        coeffs[m] += amps[arrangement_index(mask, n)];
    }
    for (m, c) in coeffs.iter_mut().enumerate() {
        *c /= binomial(n, m).sqrt();
    }
    // residual of the projection, computed amplitude by amplitude so that
    // symmetric states land at the f64 noise floor instead of the square
    // root of a cancellation error
    let mut reconstructed = vec![Complex64::ZERO; amps.len()];
    for mask in 0..(1usize << n) {
        let m = mask.count_ones() as usize;
        reconstructed[arrangement_index(mask, n)] = coeffs[m] / binomial(n, m).sqrt();
    }
    let residual = amps
        .iter()
        .zip(&reconstructed)
        .map(|(a, r)| (a - r).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > SYMMETRIC_SUBSPACE_TOL {
        return Err(Error::NotSymmetric(residual));
    }
    ModeState::new(coeffs)
}

/// Reads a measured bitstring pairwise: `00` counts toward D0, `11` toward
/// D1, `01`/`10` are lost photons.
pub fn decode_bitstring(bits: &str) -> Result<DetectionEvent> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::OddBitstring(bits.len()));
    }
    if let Some(bad) = bits.chars().find(|c| *c != '0' && *c != '1') {
        return Err(Error::BadBitstring(bad));
    }
    let bytes = bits.as_bytes();
    let mut n0 = 0;
    let mut n1 = 0;
    for pair in bytes.chunks_exact(2) {
        match pair {
            b"00" => n0 += 1,
            b"11" => n1 += 1,
            _ => {}
        }
    }
    Ok(DetectionEvent::new(n0, n1))
}

/// Same decoding applied to an amplitude index over `2 * n_photons` qubits.
pub fn decode_index(index: usize, n_photons: usize) -> DetectionEvent {
    let mut n0 = 0;
    let mut n1 = 0;
    for p in 0..n_photons {
        match index >> (2 * p) & 0b11 {
            0b00 => n0 += 1,
            0b11 => n1 += 1,
            _ => {}
        }
    }
    DetectionEvent::new(n0, n1)
}
