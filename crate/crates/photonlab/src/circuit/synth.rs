//! Synthesis of the state-preparation unitary from the basis-gate set.
//!
//! The target is written as `sum_i c_i |psi_i>` over computational basis
//! states. X gates produce `|psi_1>`, then one two-level rotation per
//! additional term fixes the projection coefficients in order of descending
//! magnitude: the rotation on span{psi_i, psi_(i+1)} turns the running
//! residual on psi_i into `|c_i|` there and passes the remainder to
//! psi_(i+1). A final pass applies one controlled phase per term whose
//! coefficient is not real positive.
//!
//! Each two-level rotation walks a CX ladder from a pivot bit so the pair
//! differs in one qubit only, then applies a controlled u3 on the pivot.
//! The rotation only needs to act as identity on basis states that already
//! carry amplitude, so its control set is the smallest set of qubits (greedy
//! cover) distinguishing the pair from those states. Multi-controls are
//! lowered to CCX cascades that AND the controls into a chain of ancillas
//! and uncompute them afterwards, which keeps every ancilla at `|0>` outside
//! the cascade.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::qubit::{GateOp, QubitState};

/// Basis-state coefficients below this magnitude are treated as zero.
const TERM_TOL: f64 = 1e-12;

/// Phases smaller than this are not worth a phase-fix gate.
const PHASE_TOL: f64 = 1e-12;

struct Term {
    index: usize,
    mag: f64,
    phase: f64,
}

enum PlannedOp {
    /// Two-level rotation between `lo = x | (bit = 0)` and `hi = x | (bit = 1)`
    /// after the CX ladder, by angle `theta` in u3 convention.
    Rotation {
        ladder: Vec<usize>,
        pivot: usize,
        controls: Vec<(usize, bool)>,
        theta: f64,
    },
    /// Phase `angle` on the single basis state matching `controls` plus
    /// `target = target_bit`.
    PhaseFix {
        target: usize,
        target_bit: bool,
        controls: Vec<(usize, bool)>,
        angle: f64,
    },
}

impl PlannedOp {
    fn ancillas_needed(&self) -> usize {
        let controls = match self {
            PlannedOp::Rotation { controls, .. } => controls.len(),
            PlannedOp::PhaseFix { controls, .. } => controls.len(),
        };
        controls.saturating_sub(1)
    }
}

/// Smallest-effort set of qubit positions (excluding `exclude`) on which
/// every state in `protected` differs from `pattern`. Greedy cover: pick the
/// position separating the most remaining states until none are left.
fn distinguishing_controls(
    pattern: usize,
    protected: &[usize],
    num_qubits: usize,
    exclude: usize,
) -> Vec<(usize, bool)> {
    let mut uncovered: Vec<usize> = protected.to_vec();
    let mut controls = Vec::new();
    while !uncovered.is_empty() {
        let (best_pos, _) = (0..num_qubits)
            .filter(|&pos| pos != exclude && !controls.iter().any(|&(p, _)| p == pos))
            .map(|pos| {
                let covered = uncovered
                    .iter()
                    .filter(|&&y| (y ^ pattern) >> pos & 1 == 1)
                    .count();
                (pos, covered)
            })
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("protected states always differ somewhere");
        uncovered.retain(|&y| (y ^ pattern) >> best_pos & 1 == 0);
        controls.push((best_pos, pattern >> best_pos & 1 == 1));
    }
    controls.sort_unstable();
    controls
}

fn plan_rotation(terms: &[Term], i: usize, residual: f64, num_qubits: usize) -> PlannedOp {
    let b1 = terms[i].index;
    let b2 = terms[i + 1].index;
    let diff = b1 ^ b2;
    let pivot = diff.trailing_zeros() as usize;
    let ladder: Vec<usize> = (0..num_qubits)
        .filter(|&q| q != pivot && diff >> q & 1 == 1)
        .collect();
    let others_mask: usize = ladder.iter().map(|&q| 1usize << q).sum();

    // after the ladder the pair shares the bits of whichever member has
    // pivot = 0; already-prepared states with pivot = 1 get `others` flipped
    let lo_member = if b1 >> pivot & 1 == 0 { b1 } else { b2 };
    let protected: Vec<usize> = terms[..i]
        .iter()
        .map(|t| {
            if t.index >> pivot & 1 == 1 {
                t.index ^ others_mask
            } else {
                t.index
            }
        })
        .collect();
    let controls = distinguishing_controls(lo_member, &protected, num_qubits, pivot);

    let cos_alpha = (terms[i].mag / residual).clamp(-1.0, 1.0);
    let alpha = cos_alpha.acos();
    // residual sits on terms[i]; rotate it toward terms[i + 1]
    let theta = if b1 >> pivot & 1 == 0 {
        2.0 * alpha
    } else {
        -2.0 * alpha
    };
    PlannedOp::Rotation {
        ladder,
        pivot,
        controls,
        theta,
    }
}

fn plan_phase_fix(terms: &[Term], i: usize, num_qubits: usize) -> PlannedOp {
    let index = terms[i].index;
    let target = 0usize;
    let target_bit = index & 1 == 1;
    let clashes: Vec<usize> = terms
        .iter()
        .enumerate()
        .filter(|&(j, t)| j != i && (t.index & 1) == (index & 1))
        .map(|(_, t)| t.index)
        .collect();
    let controls = distinguishing_controls(index, &clashes, num_qubits, target);
    PlannedOp::PhaseFix {
        target,
        target_bit,
        controls,
        angle: terms[i].phase,
    }
}

/// Emits an X-wrapped, ancilla-cascaded controlled u3. `controls` pair each
/// qubit with the bit value that activates it.
fn emit_controlled_u3(
    gates: &mut Vec<GateOp>,
    controls: &[(usize, bool)],
    anc_base: usize,
    target: usize,
    theta: f64,
    phi: f64,
    lambda: f64,
) {
    for &(q, bit) in controls {
        if !bit {
            gates.push(GateOp::X { target: q });
        }
    }
    match controls.len() {
        0 => gates.push(GateOp::U3 {
            target,
            theta,
            phi,
            lambda,
        }),
        1 => gates.push(GateOp::Cu3 {
            control: controls[0].0,
            target,
            theta,
            phi,
            lambda,
        }),
        k => {
            let mut cascade = Vec::with_capacity(k - 1);
            cascade.push(GateOp::Ccx {
                control1: controls[0].0,
                control2: controls[1].0,
                target: anc_base,
            });
            for (j, &(q, _)) in controls.iter().enumerate().skip(2) {
                cascade.push(GateOp::Ccx {
                    control1: anc_base + j - 2,
                    control2: q,
                    target: anc_base + j - 1,
                });
            }
            gates.extend(cascade.iter().cloned());
            gates.push(GateOp::Cu3 {
                control: anc_base + k - 2,
                target,
                theta,
                phi,
                lambda,
            });
            gates.extend(cascade.iter().rev().cloned());
        }
    }
    for &(q, bit) in controls {
        if !bit {
            gates.push(GateOp::X { target: q });
        }
    }
}

/// Builds a preparation circuit taking `|0...0>` to `target` (up to global
/// phase) with fidelity limited only by floating-point rounding. Ancillas
/// used for multi-controls are returned to `|0>`.
pub fn synthesize_input(target: &QubitState) -> Result<Circuit> {
    let num_qubits = target.num_qubits();
    let norm = target.norm_sqr();
    if (norm - 1.0).abs() > crate::fock::NORM_TOL {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    let mut terms: Vec<Term> = target
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > TERM_TOL)
        .map(|(index, c)| Term {
            index,
            mag: c.norm(),
            phase: c.arg(),
        })
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyTarget);
    }
    terms.sort_by(|a, b| {
        b.mag
            .partial_cmp(&a.mag)
            .expect("magnitudes are finite")
            .then(a.index.cmp(&b.index))
    });

    let mut ops = Vec::new();
    let mut residual = 1.0f64;
    for i in 0..terms.len() - 1 {
        ops.push(plan_rotation(&terms, i, residual, num_qubits));
        residual = (residual * residual - terms[i].mag * terms[i].mag)
            .max(0.0)
            .sqrt();
    }
    for i in 0..terms.len() {
        if terms[i].phase.abs() > PHASE_TOL {
            ops.push(plan_phase_fix(&terms, i, num_qubits));
        }
    }

    let num_ancilla = ops
        .iter()
        .map(PlannedOp::ancillas_needed)
        .max()
        .unwrap_or(0);
    let anc_base = num_qubits;

    let mut gates = Vec::new();
    for q in 0..num_qubits {
        if terms[0].index >> q & 1 == 1 {
            gates.push(GateOp::X { target: q });
        }
    }
    for op in &ops {
        match op {
            PlannedOp::Rotation {
                ladder,
                pivot,
                controls,
                theta,
            } => {
                for &d in ladder {
                    gates.push(GateOp::Cx {
                        control: *pivot,
                        target: d,
                    });
                }
                emit_controlled_u3(&mut gates, controls, anc_base, *pivot, *theta, 0.0, 0.0);
                for &d in ladder.iter().rev() {
                    gates.push(GateOp::Cx {
                        control: *pivot,
                        target: d,
                    });
                }
            }
            PlannedOp::PhaseFix {
                target,
                target_bit,
                controls,
                angle,
            } => {
                if !target_bit {
                    gates.push(GateOp::X { target: *target });
                }
                emit_controlled_u3(&mut gates, controls, anc_base, *target, 0.0, 0.0, *angle);
                if !target_bit {
                    gates.push(GateOp::X { target: *target });
                }
            }
        }
    }

    let prep_end = gates.len();
    Ok(Circuit {
        num_data: num_qubits,
        num_ancilla,
        gates,
        prep_end,
        phase_end: prep_end,
        fbs_end: prep_end,
    })
}
