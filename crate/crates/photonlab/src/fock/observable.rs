//! Alternative measurement operators: photon-number parity and the
//! two-mode exchange observable used for `|m::m'>` states.
//!
//! Both act on the light field right before the final beam splitter (the
//! beam splitter plus photon counters is the measurement they are compared
//! against). Operators preserve total photon number, so they decompose over
//! the same surviving-photon blocks as the loss-mixed state.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{apply_loss, apply_phase, ModeState};
use crate::error::{Error, Result};

/// Which operator to evaluate, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservableSpec {
    /// `i^N sum_k (-1)^k |k, N-k><N-k, k|` on the N-photon subspace.
    Parity { total_photons: usize },
    /// `sum_{r,s=0..m'} |m'-r, m-s><m-r, m'-s| + h.c.`, defined for
    /// `m > m' >= 0`.
    HuverA { m: usize, m_prime: usize },
}

impl ObservableSpec {
    pub fn parity(total_photons: usize) -> Self {
        Self::Parity { total_photons }
    }

    pub fn huver_a(m: usize, m_prime: usize) -> Result<Self> {
        if m <= m_prime {
            return Err(Error::InvalidInput(format!(
                "exchange observable needs m > m' (got m = {m}, m' = {m_prime})"
            )));
        }
        Ok(Self::HuverA { m, m_prime })
    }

    pub fn total_photons(&self) -> usize {
        match *self {
            Self::Parity { total_photons } => total_photons,
            Self::HuverA { m, m_prime } => m + m_prime,
        }
    }

    /// Matrix blocks indexed by surviving photon number `0..=n`; block `k`
    /// acts on the basis `|s>_l |k - s>_u`, `s = 0..=k`.
    fn blocks(&self, n: usize) -> Vec<DMatrix<Complex64>> {
        let mut blocks: Vec<DMatrix<Complex64>> =
            (0..=n).map(|k| DMatrix::zeros(k + 1, k + 1)).collect();
        match *self {
            Self::Parity { total_photons } => {
                let i_n = Complex64::new(0.0, 1.0).powu(total_photons as u32);
                let block = &mut blocks[total_photons];
                for k in 0..=total_photons {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    block[(k, total_photons - k)] += i_n * sign;
                }
            }
            Self::HuverA { m, m_prime } => {
                for r in 0..=m_prime {
                    for s in 0..=m_prime {
                        let n_tot = m + m_prime - r - s;
                        let block = &mut blocks[n_tot];
                        block[(m_prime - r, m - r)] += Complex64::ONE;
                        block[(m - r, m_prime - r)] += Complex64::ONE;
                    }
                }
            }
        }
        blocks
    }
}

/// Mean and variance of `obs` on the pre-beam-splitter state of `input`
/// after phase `phi` and loss `(t0, t1)`.
pub fn expectation(
    obs: &ObservableSpec,
    input: &ModeState,
    phi: f64,
    t0: f64,
    t1: f64,
) -> Result<(f64, f64)> {
    let n = input.total_photons();
    if obs.total_photons() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: obs.total_photons(),
        });
    }
    let rho = apply_loss(&apply_phase(input, phi), t0, t1)?;
    let state_blocks = rho.merged_blocks();
    let op_blocks = obs.blocks(n);

    let mut mean = Complex64::ZERO;
    let mut second = Complex64::ZERO;
    for (rho_b, op_b) in state_blocks.iter().zip(&op_blocks) {
        mean += (rho_b * op_b).trace();
        second += (rho_b * op_b * op_b).trace();
    }
    debug_assert!(
        mean.im.abs() < 1e-9,
        "expectation has imaginary residue {mean}"
    );
    let mean = mean.re;
    Ok((mean, second.re - mean * mean))
}

/// `(mean, variance)` of `obs` on `n_grid` equally spaced phases over
/// `[0, 2 pi)`, for error-propagation analyses.
pub fn expectation_curve(
    obs: &ObservableSpec,
    input: &ModeState,
    t0: f64,
    t1: f64,
    n_grid: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut means = Vec::with_capacity(n_grid);
    let mut vars = Vec::with_capacity(n_grid);
    for j in 0..n_grid {
        let phi = std::f64::consts::TAU * j as f64 / n_grid as f64;
        let (m, v) = expectation(obs, input, phi, t0, t1)?;
        means.push(m);
        vars.push(v);
    }
    Ok((means, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parity_of_lossless_noon_oscillates_at_6phi() {
        let noon = ModeState::noon(6).unwrap();
        let obs = ObservableSpec::parity(6);
        for j in 0..12 {
            let phi = 0.07 + 0.5 * j as f64;
            let (mean, var) = expectation(&obs, &noon, phi, 1.0, 1.0).unwrap();
            // sign convention aside, the magnitude envelope is cos(6 phi)
            assert_abs_diff_eq!(mean.abs(), (6.0 * phi).cos().abs(), epsilon = 1e-10);
            assert_abs_diff_eq!(var, 1.0 - mean * mean, epsilon = 1e-10);
        }
    }

    #[test]
    fn exchange_observable_reaches_one_over_m_minus_mprime() {
        // error propagation at the best phase gives 1/(m - m') without loss
        for (m, mp) in [(5usize, 1usize), (4, 2)] {
            let input = ModeState::mm_prime(m, mp).unwrap();
            let obs = ObservableSpec::huver_a(m, mp).unwrap();
            let delta = m - mp;
            let mut best = f64::INFINITY;
            for j in 0..720 {
                let phi = std::f64::consts::TAU * (j as f64 + 0.5) / 720.0;
                let (_, var) = expectation(&obs, &input, phi, 1.0, 1.0).unwrap();
                let h = 1e-6;
                let (mp1, _) = expectation(&obs, &input, phi + h, 1.0, 1.0).unwrap();
                let (mm1, _) = expectation(&obs, &input, phi - h, 1.0, 1.0).unwrap();
                let slope = (mp1 - mm1) / (2.0 * h);
                if slope.abs() > 1e-6 {
                    best = best.min(var.max(0.0).sqrt() / slope.abs());
                }
            }
            assert_abs_diff_eq!(best, 1.0 / delta as f64, epsilon = 2e-4);
        }
    }

    #[test]
    fn full_loss_freezes_every_expectation() {
        let input = ModeState::holland_burnett(6).unwrap();
        for obs in [
            ObservableSpec::parity(6),
            ObservableSpec::huver_a(4, 2).unwrap(),
        ] {
            let (m1, _) = expectation(&obs, &input, 0.3, 0.0, 0.0).unwrap();
            let (m2, _) = expectation(&obs, &input, 1.7, 0.0, 0.0).unwrap();
            assert_abs_diff_eq!(m1, m2, epsilon = 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let input = ModeState::noon(4).unwrap();
        assert!(expectation(&ObservableSpec::parity(6), &input, 0.1, 1.0, 1.0).is_err());
        let obs = ObservableSpec::huver_a(5, 1).unwrap();
        assert!(expectation(&obs, &input, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn huver_a_rejects_bad_parameters() {
        assert!(ObservableSpec::huver_a(2, 2).is_err());
        assert!(ObservableSpec::huver_a(1, 3).is_err());
        assert!(ObservableSpec::huver_a(5, 0).is_ok());
    }
}
