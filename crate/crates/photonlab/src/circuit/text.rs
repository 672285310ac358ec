//! Line-oriented circuit text format, for debugging and golden-file tests.
//!
//! ```text
//! qubits <data> <ancilla>
//! stage prep
//! x 3
//! cx 0 5
//! u3 2 <theta> <phi> <lambda>
//! stage phase
//! ...
//! ```
//!
//! One gate per line: kind, qubit indices, then angles. Angles print in
//! shortest round-trip form, so emitted text is byte-stable and parses back
//! to the exact same circuit.

use super::{Circuit, Stage};
use crate::error::{Error, Result};
use crate::qubit::GateOp;

fn gate_line(gate: &GateOp) -> String {
    match *gate {
        GateOp::X { target } => format!("x {target}"),
        GateOp::Z { target } => format!("z {target}"),
        GateOp::H { target } => format!("h {target}"),
        GateOp::U3 {
            target,
            theta,
            phi,
            lambda,
        } => {
            format!("u3 {target} {theta} {phi} {lambda}")
        }
        GateOp::Cx { control, target } => format!("cx {control} {target}"),
        GateOp::Cz { control, target } => format!("cz {control} {target}"),
        GateOp::Ch { control, target } => format!("ch {control} {target}"),
        GateOp::Cu3 {
            control,
            target,
            theta,
            phi,
            lambda,
        } => {
            format!("cu3 {control} {target} {theta} {phi} {lambda}")
        }
        GateOp::Ccx {
            control1,
            control2,
            target,
        } => {
            format!("ccx {control1} {control2} {target}")
        }
    }
}

pub(super) fn to_text(circuit: &Circuit) -> String {
    let mut out = format!(
        "qubits {} {}\n",
        circuit.num_data_qubits(),
        circuit.num_ancilla()
    );
    for (name, stage) in [
        ("prep", Stage::Prep),
        ("phase", Stage::Phase),
        ("fbs", Stage::Fbs),
        ("bs", Stage::Bs),
    ] {
        out.push_str("stage ");
        out.push_str(name);
        out.push('\n');
        for gate in circuit.stage(stage) {
            out.push_str(&gate_line(gate));
            out.push('\n');
        }
    }
    out
}

pub(super) fn from_text(input: &str) -> Result<Circuit> {
    let err = |line: usize, reason: &str| Error::CircuitParse {
        line: line + 1,
        reason: reason.to_string(),
    };

    let mut num_data = None;
    let mut num_ancilla = 0usize;
    let mut gates = Vec::new();
    let mut stage_ends = Vec::new();

    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let usize_at = |k: usize| -> Result<usize> {
            fields
                .get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| err(lineno, "expected a qubit index"))
        };
        let f64_at = |k: usize| -> Result<f64> {
            fields
                .get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| err(lineno, "expected an angle"))
        };
        let arity = |n: usize| -> Result<()> {
            if fields.len() == n + 1 {
                Ok(())
            } else {
                Err(err(lineno, "wrong number of fields"))
            }
        };
        match fields[0] {
            "qubits" => {
                arity(2)?;
                num_data = Some(usize_at(1)?);
                num_ancilla = usize_at(2)?;
            }
            "stage" => {
                if stage_ends.len() == 4 {
                    return Err(err(lineno, "more than four stages"));
                }
                stage_ends.push(gates.len());
            }
            kind => {
                let gate = match kind {
                    "x" => {
                        arity(1)?;
                        GateOp::X {
                            target: usize_at(1)?,
                        }
                    }
                    "z" => {
                        arity(1)?;
                        GateOp::Z {
                            target: usize_at(1)?,
                        }
                    }
                    "h" => {
                        arity(1)?;
                        GateOp::H {
                            target: usize_at(1)?,
                        }
                    }
                    "u3" => {
                        arity(4)?;
                        GateOp::U3 {
                            target: usize_at(1)?,
                            theta: f64_at(2)?,
                            phi: f64_at(3)?,
                            lambda: f64_at(4)?,
                        }
                    }
                    "cx" => {
                        arity(2)?;
                        GateOp::Cx {
                            control: usize_at(1)?,
                            target: usize_at(2)?,
                        }
                    }
                    "cz" => {
                        arity(2)?;
                        GateOp::Cz {
                            control: usize_at(1)?,
                            target: usize_at(2)?,
                        }
                    }
                    "ch" => {
                        arity(2)?;
                        GateOp::Ch {
                            control: usize_at(1)?,
                            target: usize_at(2)?,
                        }
                    }
                    "cu3" => {
                        arity(5)?;
                        GateOp::Cu3 {
                            control: usize_at(1)?,
                            target: usize_at(2)?,
                            theta: f64_at(3)?,
                            phi: f64_at(4)?,
                            lambda: f64_at(5)?,
                        }
                    }
                    "ccx" => {
                        arity(3)?;
                        GateOp::Ccx {
                            control1: usize_at(1)?,
                            control2: usize_at(2)?,
                            target: usize_at(3)?,
                        }
                    }
                    other => return Err(err(lineno, &format!("unknown gate {other:?}"))),
                };
                if stage_ends.is_empty() {
                    return Err(err(lineno, "gate before the first stage marker"));
                }
                gates.push(gate);
            }
        }
    }

    let num_data = num_data.ok_or_else(|| err(0, "missing qubits header"))?;
    if stage_ends.len() != 4 {
        return Err(err(0, "expected exactly four stage markers"));
    }
    let circuit = Circuit {
        num_data,
        num_ancilla,
        gates,
        prep_end: stage_ends[1],
        phase_end: stage_ends[2],
        fbs_end: stage_ends[3],
    };
    let num_qubits = circuit.num_qubits();
    for gate in &circuit.gates {
        for q in gate
            .controls()
            .iter()
            .chain(std::iter::once(&gate.target()))
        {
            if *q >= num_qubits {
                return Err(err(
                    0,
                    &format!("gate references qubit {q} of {num_qubits}"),
                ));
            }
        }
    }
    Ok(circuit)
}
