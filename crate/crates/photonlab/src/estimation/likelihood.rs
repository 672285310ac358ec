//! Likelihood tables: per-event detection probabilities as functions of
//! phase, on an equally spaced grid over `[0, 2 pi)`, with a fitted
//! trigonometric polynomial per event for evaluation anywhere.

use crate::circuit::{sample_events_from_state, PreparedInput};
use crate::encoding::DetectionEvent;
use crate::error::{Error, Result};
use crate::fock::{exact_likelihood, ModeState};
use crate::par;
use crate::trig::TrigPoly;

/// How a table's values were produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableProvenance {
    /// Oracle probabilities at every grid point.
    Exact,
    /// Circuit frequencies `R(n0, n1) / W` from `shots` runs per grid point.
    Sampled { shots: u64, seed: u64 },
}

/// Stream ids for grid point `j` start at `j << 32`, keeping per-point shot
/// batches on disjoint RNG streams.
const GRID_STREAM_SPAN: u64 = 1 << 32;

/// Detection likelihoods for one input state and loss setting.
#[derive(Clone, Debug)]
pub struct LikelihoodTable {
    total_photons: usize,
    events: Vec<DetectionEvent>,
    values: Vec<Vec<f64>>, // [event][grid point]
    polys: Vec<TrigPoly>,
    provenance: TableProvenance,
}

impl LikelihoodTable {
    pub fn total_photons(&self) -> usize {
        self.total_photons
    }

    pub fn events(&self) -> &[DetectionEvent] {
        &self.events
    }

    pub fn provenance(&self) -> TableProvenance {
        self.provenance
    }

    pub fn grid_len(&self) -> usize {
        self.values[0].len()
    }

    pub fn grid_phi(&self, j: usize) -> f64 {
        std::f64::consts::TAU * j as f64 / self.grid_len() as f64
    }

    pub fn event_index(&self, event: &DetectionEvent) -> Option<usize> {
        self.events.binary_search(event).ok()
    }

    /// Raw stored value (exact probability or sampled frequency) for event
    /// `e` at grid point `j`.
    pub fn raw(&self, e: usize, j: usize) -> f64 {
        self.values[e][j]
    }

    /// Fitted single-event curve at `phi`, clamped to be nonnegative. Not
    /// renormalized across events; see [`LikelihoodTable::event_probs`].
    pub fn fitted(&self, e: usize, phi: f64) -> f64 {
        self.polys[e].eval(phi).max(0.0)
    }

    /// Normalized event distribution at `phi`: fitted values clamped at zero
    /// and rescaled to sum to one, correcting the sampling noise that a
    /// per-event fit can introduce.
    pub fn event_probs(&self, phi: f64) -> Vec<f64> {
        let mut probs: Vec<f64> = self.polys.iter().map(|p| p.eval(phi).max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        if total > 0.0 {
            for p in &mut probs {
                *p /= total;
            }
        }
        probs
    }
}

/// Builds a [`LikelihoodTable`] on `n_grid` equally spaced phases.
///
/// `n_grid` must be at least `2 N + 1` so the degree-`N` trigonometric fit
/// is exact on noiseless data. Sampled tables evolve the prepared input once
/// per grid point and count `shots` detection draws; grid points run in
/// parallel on seed-derived RNG streams.
pub fn build_likelihoods(
    input: &ModeState,
    t0: f64,
    t1: f64,
    n_grid: usize,
    provenance: TableProvenance,
) -> Result<LikelihoodTable> {
    let n = input.total_photons();
    if n_grid < 2 * n + 1 {
        return Err(Error::GridTooSmall {
            got: n_grid,
            degree: n,
            needed: 2 * n + 1,
        });
    }
    let events = DetectionEvent::all(n);
    let columns: Vec<Vec<f64>> = match provenance {
        TableProvenance::Exact => {
            let results = par::map_indexed(n_grid, |j| {
                let phi = std::f64::consts::TAU * j as f64 / n_grid as f64;
                exact_likelihood(input, phi, t0, t1)
            });
            let mut columns = Vec::with_capacity(n_grid);
            for result in results {
                let probs = result?;
                columns.push(events.iter().map(|e| probs[e]).collect());
            }
            columns
        }
        TableProvenance::Sampled { shots, seed } => {
            let prepared = PreparedInput::new(input)?;
            let results = par::map_indexed(n_grid, |j| -> Result<Vec<f64>> {
                let phi = std::f64::consts::TAU * j as f64 / n_grid as f64;
                let state = prepared.evolve(phi, t0, t1)?;
                let counts =
                    sample_events_from_state(&state, n, shots, seed, j as u64 * GRID_STREAM_SPAN);
                Ok(events
                    .iter()
                    .map(|e| counts.get(e).copied().unwrap_or(0) as f64 / shots as f64)
                    .collect())
            });
            results.into_iter().collect::<Result<Vec<_>>>()?
        }
    };

    let values: Vec<Vec<f64>> = (0..events.len())
        .map(|e| columns.iter().map(|col| col[e]).collect())
        .collect();
    let polys = values
        .iter()
        .map(|row| TrigPoly::fit_uniform(row, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(LikelihoodTable {
        total_photons: n,
        events,
        values,
        polys,
        provenance,
    })
}
