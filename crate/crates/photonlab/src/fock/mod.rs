//! Exact two-mode Fock-space evolution: phase shift, photon loss through
//! fictitious beam splitters, the final 50-50 beam splitter, detection
//! likelihoods, operator expectations, and Fisher information.
//!
//! States carry a definite total photon number `N`; amplitudes are indexed by
//! the number of photons in the lower arm. This module is the independent
//! oracle the qubit-circuit simulator is validated against.

mod density;
mod fisher;
mod observable;

pub use density::DensityState;
pub use fisher::{classical_fisher, classical_fisher_curve, qfi, EIGENVALUE_CUTOFF, PROB_CUTOFF};
pub use observable::{expectation, expectation_curve, ObservableSpec};

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;

use crate::encoding::DetectionEvent;
use crate::error::{Error, Result};

/// Normalization tolerance shared by state constructors.
pub const NORM_TOL: f64 = 1e-10;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n as u128).product::<u128>() as f64
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as f64
}

/// Pure two-mode state with a definite total photon number.
///
/// `amplitude(m)` multiplies the basis state with `m` photons in the lower
/// arm and `total_photons - m` in the upper arm.
#[derive(Clone, Debug)]
pub struct ModeState {
    total_photons: usize,
    amps: Vec<Complex64>,
}

impl ModeState {
    /// Builds a state from raw amplitudes `c_0..c_N`; rejects vectors whose
    /// norm deviates from 1 by more than [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput(
                "amplitude vector must cover at least one photon (length N + 1 >= 2)".into(),
            ));
        }
        let norm_sq: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm_sq - 1.0).abs()));
        }
        Ok(Self {
            total_photons: amps.len() - 1,
            amps,
        })
    }

    pub fn total_photons(&self) -> usize {
        self.total_photons
    }

    pub fn amplitude(&self, m: usize) -> Complex64 {
        self.amps[m]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `|N::0>`: equal superposition of all photons in one arm or the other.
    pub fn noon(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("noon state needs N >= 1".into()));
        }
        let mut amps = vec![Complex64::ZERO; n + 1];
        let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = w;
        amps[n] = w;
        Ok(Self {
            total_photons: n,
            amps,
        })
    }

    /// `|m::m'>` with `m > m' >= 0`; total photons `m + m'`.
    pub fn mm_prime(m: usize, m_prime: usize) -> Result<Self> {
        if m <= m_prime {
            return Err(Error::InvalidInput(format!(
                "mm' state needs m > m' (got m = {m}, m' = {m_prime})"
            )));
        }
        let n = m + m_prime;
        let mut amps = vec![Complex64::ZERO; n + 1];
        let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[m] = w;
        amps[m_prime] = w;
        Ok(Self {
            total_photons: n,
            amps,
        })
    }

    /// Holland-Burnett state for even `n`: support on even lower-arm photon
    /// numbers `2k` with weight `sqrt((2k)! (n-2k)!) / (2^(n/2) k! (n/2-k)!)`.
    pub fn holland_burnett(n: usize) -> Result<Self> {
        if n < 1 || !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "holland-burnett state needs even N >= 2 (got {n})"
            )));
        }
        let half = n / 2;
        let mut amps = vec![Complex64::ZERO; n + 1];
        for k in 0..=half {
            let c = (factorial(2 * k) * factorial(n - 2 * k)).sqrt()
                / (2f64.powi(half as i32) * factorial(k) * factorial(half - k));
            amps[2 * k] = Complex64::new(c, 0.0);
        }
        let state = Self {
            total_photons: n,
            amps,
        };
        debug_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        Ok(state)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Named input-state families, as parsed from configuration.
#[derive(Clone, Debug, PartialEq)]
pub enum InputKind {
    Noon(usize),
    MmPrime(usize, usize),
    HollandBurnett(usize),
    Custom(Vec<Complex64>),
}

impl InputKind {
    pub fn build(&self) -> Result<ModeState> {
        match self {
            Self::Noon(n) => ModeState::noon(*n),
            Self::MmPrime(m, mp) => ModeState::mm_prime(*m, *mp),
            Self::HollandBurnett(n) => ModeState::holland_burnett(*n),
            Self::Custom(amps) => ModeState::new(amps.clone()),
        }
    }

    /// Short label used in CSV output and file names.
    pub fn label(&self) -> String {
        match self {
            Self::Noon(n) => format!("noon{n}"),
            Self::MmPrime(m, mp) => format!("mm{m}-{mp}"),
            Self::HollandBurnett(n) => format!("hb{n}"),
            Self::Custom(_) => "custom".into(),
        }
    }
}

impl FromStr for InputKind {
    type Err = Error;

    /// Accepts `noon:<N>`, `mm:<m>:<m'>`, `hb:<N>` and the shorthand names
    /// `noon6`, `mm51`, `mm42`, `hb6` for the four six-photon states.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noon6" => return Ok(Self::Noon(6)),
            "mm51" => return Ok(Self::MmPrime(5, 1)),
            "mm42" => return Ok(Self::MmPrime(4, 2)),
            "hb6" => return Ok(Self::HollandBurnett(6)),
            _ => {}
        }
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |v: &str| -> Result<usize> {
            v.parse()
                .map_err(|_| Error::BadConfig(format!("bad photon count {v:?} in state {s:?}")))
        };
        match parts.as_slice() {
            ["noon", n] => Ok(Self::Noon(parse(n)?)),
            ["mm", m, mp] => Ok(Self::MmPrime(parse(m)?, parse(mp)?)),
            ["hb", n] => Ok(Self::HollandBurnett(parse(n)?)),
            _ => Err(Error::BadConfig(format!(
                "unknown state {s:?}; expected noon:<N>, mm:<m>:<m'>, hb:<N> or one of noon6/mm51/mm42/hb6"
            ))),
        }
    }
}

/// Phase shift between the arms: `c_m -> exp(i (N - m) phi) c_m`, one factor
/// of `exp(i phi)` per upper-arm photon.
pub fn apply_phase(state: &ModeState, phi: f64) -> ModeState {
    let n = state.total_photons;
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(m, c)| c * Complex64::from_polar(1.0, (n - m) as f64 * phi))
        .collect();
    ModeState {
        total_photons: n,
        amps,
    }
}

/// Photon loss: couples each arm to an environment mode through a beam
/// splitter of transmissivity `t0` (lower) / `t1` (upper), then traces the
/// environment out. See [`DensityState::from_loss`].
pub fn apply_loss(state: &ModeState, t0: f64, t1: f64) -> Result<DensityState> {
    DensityState::from_loss(state, t0, t1)
}

/// Full detection-probability map for `input` at phase `phi` and loss
/// setting `(t0, t1)`: phase shift, loss, final beam splitter, then
/// photon-number readout. Every event with `n0 + n1 <= N` is present in the
/// result, including those with probability zero.
pub fn exact_likelihood(
    input: &ModeState,
    phi: f64,
    t0: f64,
    t1: f64,
) -> Result<BTreeMap<DetectionEvent, f64>> {
    let shifted = apply_phase(input, phi);
    let lossy = apply_loss(&shifted, t0, t1)?;
    Ok(lossy.apply_final_bs().detection_probabilities())
}
