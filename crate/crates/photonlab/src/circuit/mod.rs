//! Interferometer circuits: input-state synthesis followed by per-photon
//! phase, loss, and beam-splitter subroutines, plus detection sampling.
//!
//! Each photon owns one qubit pair. The three evolution stages apply the same
//! two-qubit subroutine to every pair:
//!
//! * phase: `|00> -> |00>`, `|11> -> e^{i phi} |11>`
//! * loss: `|00> -> sqrt(t0)|00> + i sqrt(1-t0)|01>`,
//!   `|11> -> sqrt(t1)|11> + i sqrt(1-t1)|10>`
//! * final beam splitter: `|00> -> (|00> + i|11>)/sqrt(2)`,
//!   `|11> -> (i|00> + |11>)/sqrt(2)`, lost pairs untouched
//!
//! Before the loss stage a pair can only be `|00>` or `|11>`, which lets the
//! phase stage act on a single qubit per pair.

mod synth;
mod text;

pub use synth::synthesize_input;

use std::collections::BTreeMap;

use crate::encoding::{decode_index, mode_to_qubit, DetectionEvent};
use crate::error::{Error, Result};
use crate::fock::ModeState;
use crate::par;
use crate::qubit::{GateOp, QubitState};
use crate::rng::{cumulative, sample_cumulative, stream_rng};

/// Weight allowed outside the ancilla-`|0>` subspace after state
/// preparation.
pub const ANCILLA_TOL: f64 = 1e-9;

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// Shots per RNG stream when sampling detections; the stream id is the batch
/// index, so counts do not depend on thread scheduling.
const SHOT_BATCH: u64 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Prep,
    Phase,
    Fbs,
    Bs,
}

/// Gate list over `2 N` data qubits plus scratch ancillas, with markers
/// separating the preparation, phase, loss, and beam-splitter stages.
#[derive(Clone, Debug)]
pub struct Circuit {
    num_data: usize,
    num_ancilla: usize,
    gates: Vec<GateOp>,
    prep_end: usize,
    phase_end: usize,
    fbs_end: usize,
}

impl Circuit {
    pub fn num_data_qubits(&self) -> usize {
        self.num_data
    }

    pub fn num_ancilla(&self) -> usize {
        self.num_ancilla
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data + self.num_ancilla
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn stage(&self, stage: Stage) -> &[GateOp] {
        match stage {
            Stage::Prep => &self.gates[..self.prep_end],
            Stage::Phase => &self.gates[self.prep_end..self.phase_end],
            Stage::Fbs => &self.gates[self.phase_end..self.fbs_end],
            Stage::Bs => &self.gates[self.fbs_end..],
        }
    }

    /// Runs the circuit on `|0...0>`.
    pub fn simulate(&self) -> Result<QubitState> {
        let mut state = QubitState::zero(self.num_qubits());
        state.apply_all(&self.gates)?;
        Ok(state)
    }

    /// Line-oriented text form; see [`Circuit::from_text`].
    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn from_text(input: &str) -> Result<Circuit> {
        text::from_text(input)
    }
}

/// Phase subroutine: one phase gate on the first qubit of each pair. Valid
/// because pairs only occupy `|00>`/`|11>` before the loss stage.
pub fn phase_stage(n_photons: usize, phi: f64) -> Vec<GateOp> {
    (0..n_photons)
        .map(|p| GateOp::U3 {
            target: 2 * p,
            theta: 0.0,
            phi: 0.0,
            lambda: phi,
        })
        .collect()
}

/// Loss subroutine: for each pair, rotate the second qubit by the
/// beam-splitter angle of the matching arm, selected by the first qubit.
pub fn fbs_stage(n_photons: usize, t0: f64, t1: f64) -> Result<Vec<GateOp>> {
    for t in [t0, t1] {
        if !(0.0..=1.0).contains(&t) || t.is_nan() {
            return Err(Error::BadTransmissivity(t));
        }
    }
    let theta0 = 2.0 * t0.sqrt().acos();
    let theta1 = 2.0 * t1.sqrt().acos();
    let mut gates = Vec::with_capacity(4 * n_photons);
    for p in 0..n_photons {
        let (a, b) = (2 * p, 2 * p + 1);
        gates.push(GateOp::X { target: a });
        gates.push(GateOp::Cu3 {
            control: a,
            target: b,
            theta: theta0,
            phi: FRAC_PI_2,
            lambda: -FRAC_PI_2,
        });
        gates.push(GateOp::X { target: a });
        gates.push(GateOp::Cu3 {
            control: a,
            target: b,
            theta: theta1,
            phi: FRAC_PI_2,
            lambda: -FRAC_PI_2,
        });
    }
    Ok(gates)
}

/// Final 50-50 beam splitter: conjugating by CX turns the two-qubit rotation
/// in span{|00>, |11>} into a one-qubit rotation selected on the second
/// qubit being 0, which leaves the lost-photon states |01>/|10> alone.
pub fn bs_stage(n_photons: usize) -> Vec<GateOp> {
    let mut gates = Vec::with_capacity(5 * n_photons);
    for p in 0..n_photons {
        let (a, b) = (2 * p, 2 * p + 1);
        gates.push(GateOp::Cx {
            control: a,
            target: b,
        });
        gates.push(GateOp::X { target: b });
        gates.push(GateOp::Cu3 {
            control: b,
            target: a,
            theta: FRAC_PI_2,
            phi: FRAC_PI_2,
            lambda: -FRAC_PI_2,
        });
        gates.push(GateOp::X { target: b });
        gates.push(GateOp::Cx {
            control: a,
            target: b,
        });
    }
    gates
}

/// Full interferometer circuit for `input` at phase `phi` and transmissivities
/// `(t0, t1)`: preparation, phase, loss, final beam splitter.
pub fn build(input: &ModeState, phi: f64, t0: f64, t1: f64) -> Result<Circuit> {
    let n = input.total_photons();
    let prep = synthesize_input(&mode_to_qubit(input))?;
    let mut gates = prep.gates.clone();
    let prep_end = gates.len();
    gates.extend(phase_stage(n, phi));
    let phase_end = gates.len();
    gates.extend(fbs_stage(n, t0, t1)?);
    let fbs_end = gates.len();
    gates.extend(bs_stage(n));
    Ok(Circuit {
        num_data: 2 * n,
        num_ancilla: prep.num_ancilla,
        gates,
        prep_end,
        phase_end,
        fbs_end,
    })
}

/// Input state prepared once and cached as a data-qubit state, so sweeps
/// over phase and loss settings skip the synthesis cost.
#[derive(Clone, Debug)]
pub struct PreparedInput {
    n_photons: usize,
    data_state: QubitState,
    ancilla_residual: f64,
    prep_gate_count: usize,
}

impl PreparedInput {
    pub fn new(input: &ModeState) -> Result<Self> {
        let n = input.total_photons();
        let prep = synthesize_input(&mode_to_qubit(input))?;
        let full = prep.simulate()?;
        let (data_state, residual) = full.project_upper_zero(2 * n);
        if residual > ANCILLA_TOL {
            return Err(Error::InvalidInput(format!(
                "ancillas left the |0> subspace with weight {residual:.3e}"
            )));
        }
        Ok(Self {
            n_photons: n,
            data_state,
            ancilla_residual: residual,
            prep_gate_count: prep.gates.len(),
        })
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn state(&self) -> &QubitState {
        &self.data_state
    }

    pub fn ancilla_residual(&self) -> f64 {
        self.ancilla_residual
    }

    pub fn prep_gate_count(&self) -> usize {
        self.prep_gate_count
    }

    /// State after the phase, loss, and beam-splitter stages.
    pub fn evolve(&self, phi: f64, t0: f64, t1: f64) -> Result<QubitState> {
        let mut state = self.data_state.clone();
        state.apply_all(&phase_stage(self.n_photons, phi))?;
        state.apply_all(&fbs_stage(self.n_photons, t0, t1)?)?;
        state.apply_all(&bs_stage(self.n_photons))?;
        Ok(state)
    }

    /// Exact detection distribution of the evolved circuit state, for
    /// comparisons that should not carry sampling noise.
    pub fn event_probabilities(
        &self,
        phi: f64,
        t0: f64,
        t1: f64,
    ) -> Result<BTreeMap<DetectionEvent, f64>> {
        let state = self.evolve(phi, t0, t1)?;
        Ok(event_distribution(&state, self.n_photons))
    }
}

/// Aggregates a state's Born distribution (over data qubits) into detection
/// events. `state` may carry ancillas above the `2 * n_photons` data qubits;
/// they are traced out.
pub fn event_distribution(state: &QubitState, n_photons: usize) -> BTreeMap<DetectionEvent, f64> {
    let probs = state.marginal_probabilities(2 * n_photons);
    let mut events: BTreeMap<DetectionEvent, f64> = DetectionEvent::all(n_photons)
        .into_iter()
        .map(|e| (e, 0.0))
        .collect();
    for (index, p) in probs.iter().enumerate() {
        *events
            .get_mut(&decode_index(index, n_photons))
            .expect("decoded event is within the enumerated set") += p;
    }
    events
}

/// Runs `shots` measurements of the circuit and tallies detection events.
/// Shot batches draw from independent RNG streams keyed by `(seed, batch)`,
/// so the counts are reproducible for a given seed at any thread count.
pub fn sample_detections(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
) -> Result<BTreeMap<DetectionEvent, u64>> {
    let state = circuit.simulate()?;
    let n_photons = circuit.num_data_qubits() / 2;
    Ok(sample_events_from_state(&state, n_photons, shots, seed, 0))
}

/// Sampling back end shared by [`sample_detections`] and the likelihood
/// builder: draws data-qubit Born outcomes, decodes pairwise, and counts.
/// Batch `b` draws from RNG stream `stream_base + b` under `seed`; callers
/// running several sampling jobs under one seed space their `stream_base`s
/// apart.
pub fn sample_events_from_state(
    state: &QubitState,
    n_photons: usize,
    shots: u64,
    seed: u64,
    stream_base: u64,
) -> BTreeMap<DetectionEvent, u64> {
    let probs = state.marginal_probabilities(2 * n_photons);
    let cum = cumulative(&probs);
    let n_batches = shots.div_ceil(SHOT_BATCH);
    let batch_counts = par::map_indexed(n_batches as usize, |b| {
        let b = b as u64;
        let batch_shots = SHOT_BATCH.min(shots - b * SHOT_BATCH);
        let mut rng = stream_rng(seed, stream_base + b);
        let mut counts: BTreeMap<DetectionEvent, u64> = BTreeMap::new();
        for _ in 0..batch_shots {
            let index = sample_cumulative(&cum, &mut rng);
            *counts.entry(decode_index(index, n_photons)).or_insert(0) += 1;
        }
        counts
    });
    let mut total: BTreeMap<DetectionEvent, u64> = BTreeMap::new();
    for counts in batch_counts {
        for (event, c) in counts {
            *total.entry(event).or_insert(0) += c;
        }
    }
    total
}
