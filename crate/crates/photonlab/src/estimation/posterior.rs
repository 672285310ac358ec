//! Grid-based posterior distributions over the phase window and the
//! multiply-and-normalize update that folds in detection events.

use crate::encoding::DetectionEvent;
use crate::error::{Error, Result};
use crate::estimation::likelihood::LikelihoodTable;

/// Discretized distribution over `[window.0, window.1]`: point masses on an
/// equally spaced grid with trapezoid quadrature weights folded in, summing
/// to one.
#[derive(Clone, Debug)]
pub struct PosteriorDistribution {
    grid: Vec<f64>,
    masses: Vec<f64>,
}

impl PosteriorDistribution {
    /// Uniform prior over the window.
    pub fn uniform(window: (f64, f64), n_points: usize) -> Result<Self> {
        let (lo, hi) = window;
        if !lo.is_finite() || !hi.is_finite() || hi <= lo || n_points < 2 {
            return Err(Error::BadConfig(format!(
                "posterior window needs lo < hi and >= 2 points (got [{lo}, {hi}] with {n_points})"
            )));
        }
        let step = (hi - lo) / (n_points - 1) as f64;
        let grid: Vec<f64> = (0..n_points).map(|i| lo + step * i as f64).collect();
        let mut masses = vec![1.0; n_points];
        masses[0] = 0.5;
        masses[n_points - 1] = 0.5;
        let total: f64 = masses.iter().sum();
        for m in &mut masses {
            *m /= total;
        }
        Ok(Self { grid, masses })
    }

    /// Distribution from unnormalized log masses on `grid`.
    pub fn from_log_masses(grid: Vec<f64>, log_masses: &[f64]) -> Result<Self> {
        let peak = log_masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(Error::PosteriorUnderflow);
        }
        let mut masses: Vec<f64> = log_masses.iter().map(|l| (l - peak).exp()).collect();
        let total: f64 = masses.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::PosteriorUnderflow);
        }
        for m in &mut masses {
            *m /= total;
        }
        Ok(Self { grid, masses })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Posterior mean.
    pub fn mean(&self) -> f64 {
        self.grid
            .iter()
            .zip(&self.masses)
            .map(|(phi, m)| phi * m)
            .sum()
    }

    /// Posterior standard deviation.
    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        self.grid
            .iter()
            .zip(&self.masses)
            .map(|(phi, m)| (phi - mean).powi(2) * m)
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }
}

/// Point estimate of the phase: the posterior mean.
pub fn phi_hat(posterior: &PosteriorDistribution) -> f64 {
    posterior.mean()
}

/// Spread of the estimate: the posterior standard deviation.
pub fn delta_phi(posterior: &PosteriorDistribution) -> f64 {
    posterior.std_dev()
}

/// Folds a sequence of detection events into `prior`: multiply by the
/// event's likelihood curve and renormalize, accumulated in log space so
/// hundreds of updates cannot underflow. The product over events commutes,
/// so the result does not depend on their order.
pub fn bayesian_update(
    prior: &PosteriorDistribution,
    table: &LikelihoodTable,
    events: &[DetectionEvent],
) -> Result<PosteriorDistribution> {
    if events.is_empty() {
        return Ok(prior.clone());
    }
    let mut counts = vec![0u64; table.events().len()];
    for event in events {
        let idx = table.event_index(event).ok_or_else(|| {
            Error::InvalidInput(format!(
                "event {event} does not fit a {}-photon table",
                table.total_photons()
            ))
        })?;
        counts[idx] += 1;
    }
    let log_masses = accumulate_log_masses(prior, table, &counts);
    PosteriorDistribution::from_log_masses(prior.grid.clone(), &log_masses)
}

/// Log-space accumulation shared by [`bayesian_update`] and the experiment
/// loop (which starts from per-event counts directly).
pub(crate) fn accumulate_log_masses(
    prior: &PosteriorDistribution,
    table: &LikelihoodTable,
    counts: &[u64],
) -> Vec<f64> {
    prior
        .grid
        .iter()
        .zip(&prior.masses)
        .map(|(&phi, &prior_mass)| {
            let probs = table.event_probs(phi);
            let mut log_mass = prior_mass.ln();
            for (&c, &p) in counts.iter().zip(&probs) {
                if c > 0 {
                    log_mass += c as f64 * p.ln();
                }
            }
            log_mass
        })
        .collect()
}
