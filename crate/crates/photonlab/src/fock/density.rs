//! Loss-mixed two-mode states.
//!
//! Loss is modeled exactly as in the optical picture: each arm is coupled to
//! its own environment mode by a fictitious beam splitter (transmitted
//! amplitude `sqrt(t)`, reflected amplitude `i sqrt(1-t)`), and the
//! environment is traced out. Because the environment records how many
//! photons left each arm, the resulting density operator is block diagonal
//! over sectors labelled `(k0, k1)` = (photons lost from the lower arm,
//! photons lost from the upper arm), and each sector stays pure for a pure
//! input.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{binomial, factorial, ModeState};
use crate::encoding::DetectionEvent;
use crate::error::{Error, Result};

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Amplitude for `k` of `n` photons leaking into the environment through a
/// beam splitter of transmissivity `t`.
fn loss_amplitude(n: usize, k: usize, t: f64) -> Complex64 {
    let mag = binomial(n, k).sqrt() * t.powf((n - k) as f64 / 2.0) * (1.0 - t).powf(k as f64 / 2.0);
    I_POWERS[k % 4] * mag
}

/// Mixed two-mode state after photon loss, stored sector by sector.
///
/// Sector `(k0, k1)` holds a `(n_s + 1) x (n_s + 1)` density block over the
/// surviving basis `|s>_l |n_s - s>_u`, `n_s = N - k0 - k1`, where `s` counts
/// surviving lower-arm photons. Sector traces sum to 1.
#[derive(Clone, Debug)]
pub struct DensityState {
    total_photons: usize,
    sectors: BTreeMap<(usize, usize), DMatrix<Complex64>>,
}

impl DensityState {
    /// Applies the two fictitious beam splitters to `state` and traces out
    /// the environment modes.
    pub fn from_loss(state: &ModeState, t0: f64, t1: f64) -> Result<Self> {
        for t in [t0, t1] {
            if !(0.0..=1.0).contains(&t) || t.is_nan() {
                return Err(Error::BadTransmissivity(t));
            }
        }
        let n = state.total_photons();
        let mut sectors = BTreeMap::new();
        for k0 in 0..=n {
            for k1 in 0..=(n - k0) {
                let n_s = n - k0 - k1;
                let chi = DVector::from_fn(n_s + 1, |s, _| {
                    let m = s + k0; // lower-arm photons before loss
                    state.amplitude(m) * loss_amplitude(m, k0, t0) * loss_amplitude(n - m, k1, t1)
                });
                let weight: f64 = chi.iter().map(|c| c.norm_sqr()).sum();
                if weight == 0.0 {
                    continue;
                }
                sectors.insert((k0, k1), &chi * chi.adjoint());
            }
        }
        Ok(Self {
            total_photons: n,
            sectors,
        })
    }

    pub fn total_photons(&self) -> usize {
        self.total_photons
    }

    pub fn sectors(&self) -> &BTreeMap<(usize, usize), DMatrix<Complex64>> {
        &self.sectors
    }

    pub fn trace(&self) -> f64 {
        self.sectors
            .values()
            .map(|m| m.diagonal().iter().map(|c| c.re).sum::<f64>())
            .sum()
    }

    /// 50-50 beam splitter applied within every sector; sectors keep their
    /// labels since the splitter touches surviving photons only.
    pub fn apply_final_bs(&self) -> Self {
        let sectors = self
            .sectors
            .iter()
            .map(|(&(k0, k1), rho)| {
                let b = bs_matrix(self.total_photons - k0 - k1);
                ((k0, k1), &b * rho * b.adjoint())
            })
            .collect();
        Self {
            total_photons: self.total_photons,
            sectors,
        }
    }

    /// Diagonal readout in the photon-number basis. Sector `(k0, k1)` with
    /// `n_s` survivors contributes its diagonal to events `D(s, n_s - s)`;
    /// sectors that lost the same total merge because the detectors cannot
    /// tell which arm the photons left from. Every event with
    /// `n0 + n1 <= N` appears in the map.
    pub fn detection_probabilities(&self) -> BTreeMap<DetectionEvent, f64> {
        let n = self.total_photons;
        let mut probs: BTreeMap<DetectionEvent, f64> = DetectionEvent::all(n)
            .into_iter()
            .map(|e| (e, 0.0))
            .collect();
        for (&(k0, k1), rho) in &self.sectors {
            let n_s = n - k0 - k1;
            for s in 0..=n_s {
                let event = DetectionEvent::new(s, n_s - s);
                *probs.get_mut(&event).expect("event enumerated above") += rho[(s, s)].re;
            }
        }
        probs
    }

    /// Density blocks of the traced-out state grouped by surviving photon
    /// number: sectors `(k0, k1)` with equal `k0 + k1` live on the same
    /// two-mode subspace and add up. Index `n_tot` runs 0..=N; absent blocks
    /// are zero matrices.
    pub fn merged_blocks(&self) -> Vec<DMatrix<Complex64>> {
        let n = self.total_photons;
        let mut blocks: Vec<DMatrix<Complex64>> = (0..=n)
            .map(|n_tot| DMatrix::zeros(n_tot + 1, n_tot + 1))
            .collect();
        for (&(k0, k1), rho) in &self.sectors {
            let n_tot = n - k0 - k1;
            blocks[n_tot] += rho;
        }
        blocks
    }
}

/// Matrix of the 50-50 beam splitter on the `n`-photon two-mode subspace,
/// with the creation-operator convention
/// `a_l -> (a_0 + i a_1)/sqrt(2)`, `a_u -> (i a_0 + a_1)/sqrt(2)`.
/// Column `s` is the image of `|s>_l |n-s>_u` over `|s'>_0 |n-s'>_1`.
pub(crate) fn bs_matrix(n: usize) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let scale = 2f64.powf(-(n as f64) / 2.0);
    DMatrix::from_fn(n + 1, n + 1, |s_out, s_in| {
        // Coefficient of a_0^s_out a_1^(n-s_out) in (a_0 + i a_1)^s_in (i a_0 + a_1)^(n-s_in),
        // accumulated over the split j + k = s_out between the two factors.
        let mut coeff = Complex64::ZERO;
        for j in 0..=s_in.min(s_out) {
            let k = s_out - j;
            if k > n - s_in {
                continue;
            }
            coeff += binomial(s_in, j)
                * binomial(n - s_in, k)
                * i.powu((s_in - j) as u32)
                * i.powu(k as u32);
        }
        coeff * scale * (factorial(s_out) * factorial(n - s_out)).sqrt()
            / (factorial(s_in) * factorial(n - s_in)).sqrt()
    })
}
