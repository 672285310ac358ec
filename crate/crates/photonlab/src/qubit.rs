//! Dense state-vector simulation over the basis-gate set
//! {X, Z, H, u3, CX, CZ, CH, CU3, CCX}.
//!
//! Qubit 0 is the least-significant bit of the amplitude index, so basis
//! state `|q0 q1 q2 ...>` written qubit-0-first corresponds to index
//! `q0 + 2 q1 + 4 q2 + ...`. Bitstrings returned by sampling follow the same
//! order: character `j` is qubit `j`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{cumulative, sample_cumulative};

type Mat2 = [[Complex64; 2]; 2];

/// One gate from the basis set. Angles are radians; `theta`, `phi`, `lambda`
/// parameterize the u3 matrix
/// `[[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]`.
#[derive(Clone, Debug, PartialEq)]
pub enum GateOp {
    X {
        target: usize,
    },
    Z {
        target: usize,
    },
    H {
        target: usize,
    },
    U3 {
        target: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Cx {
        control: usize,
        target: usize,
    },
    Cz {
        control: usize,
        target: usize,
    },
    Ch {
        control: usize,
        target: usize,
    },
    Cu3 {
        control: usize,
        target: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Ccx {
        control1: usize,
        control2: usize,
        target: usize,
    },
}

pub(crate) fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ]
}

const X_MAT: Mat2 = [
    [Complex64::ZERO, Complex64::ONE],
    [Complex64::ONE, Complex64::ZERO],
];
const Z_MAT: Mat2 = [
    [Complex64::ONE, Complex64::ZERO],
    [Complex64::ZERO, Complex64::new(-1.0, 0.0)],
];

fn h_mat() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

impl GateOp {
    pub fn target(&self) -> usize {
        match *self {
            GateOp::X { target }
            | GateOp::Z { target }
            | GateOp::H { target }
            | GateOp::U3 { target, .. }
            | GateOp::Cx { target, .. }
            | GateOp::Cz { target, .. }
            | GateOp::Ch { target, .. }
            | GateOp::Cu3 { target, .. }
            | GateOp::Ccx { target, .. } => target,
        }
    }

    pub fn controls(&self) -> Vec<usize> {
        match *self {
            GateOp::Cx { control, .. }
            | GateOp::Cz { control, .. }
            | GateOp::Ch { control, .. }
            | GateOp::Cu3 { control, .. } => vec![control],
            GateOp::Ccx {
                control1, control2, ..
            } => vec![control1, control2],
            _ => Vec::new(),
        }
    }

    /// Gate that undoes this one.
    pub fn inverse(&self) -> GateOp {
        match *self {
            GateOp::U3 {
                target,
                theta,
                phi,
                lambda,
            } => GateOp::U3 {
                target,
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            GateOp::Cu3 {
                control,
                target,
                theta,
                phi,
                lambda,
            } => GateOp::Cu3 {
                control,
                target,
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            ref g => g.clone(),
        }
    }

    fn unitary(&self) -> Mat2 {
        match *self {
            GateOp::X { .. } | GateOp::Cx { .. } | GateOp::Ccx { .. } => X_MAT,
            GateOp::Z { .. } | GateOp::Cz { .. } => Z_MAT,
            GateOp::H { .. } | GateOp::Ch { .. } => h_mat(),
            GateOp::U3 {
                theta, phi, lambda, ..
            }
            | GateOp::Cu3 {
                theta, phi, lambda, ..
            } => u3_matrix(theta, phi, lambda),
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let target = self.target();
        let controls = self.controls();
        for &q in controls.iter().chain(std::iter::once(&target)) {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
        }
        if controls.contains(&target) {
            return Err(Error::DuplicateQubit(target));
        }
        if let GateOp::Ccx {
            control1, control2, ..
        } = *self
        {
            if control1 == control2 {
                return Err(Error::DuplicateQubit(control1));
            }
        }
        Ok(())
    }
}

/// State vector over `num_qubits` qubits.
#[derive(Clone, Debug)]
pub struct QubitState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl QubitState {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        Self { num_qubits, amps }
    }

    /// Wraps a raw amplitude vector; the length must be a power of two and
    /// the norm must be 1 within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.max(1).next_power_of_two(),
                got: len,
            });
        }
        let norm_sq: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized((norm_sq - 1.0).abs()));
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Applies one basis gate in place.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let control_mask: usize = gate.controls().iter().map(|&c| 1usize << c).sum();
        self.apply_controlled_2x2(gate.target(), control_mask, gate.unitary());
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    fn apply_controlled_2x2(&mut self, target: usize, control_mask: usize, u: Mat2) {
        let step = 1usize << target;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for off in 0..step {
                let i0 = base | off;
                if i0 & control_mask == control_mask {
                    let i1 = i0 | step;
                    let a = self.amps[i0];
                    let b = self.amps[i1];
                    self.amps[i0] = u[0][0] * a + u[0][1] * b;
                    self.amps[i1] = u[1][0] * a + u[1][1] * b;
                }
            }
            base += step << 1;
        }
    }

    /// One computational-basis measurement outcome drawn from the Born
    /// distribution, as a bitstring with character `j` = qubit `j`.
    pub fn sample(&self, rng: &mut impl Rng) -> String {
        let idx = self.sample_index(rng);
        self.index_to_bits(idx)
    }

    pub fn sample_index(&self, rng: &mut impl Rng) -> usize {
        let cum = cumulative(&self.probabilities());
        sample_cumulative(&cum, rng)
    }

    pub fn index_to_bits(&self, index: usize) -> String {
        (0..self.num_qubits)
            .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Squared overlap `|<self|other>|^2`; insensitive to global phase.
    pub fn fidelity(&self, other: &QubitState) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }

    /// Probability distribution over the lowest `keep` qubits with the rest
    /// traced out (summed over).
    pub fn marginal_probabilities(&self, keep: usize) -> Vec<f64> {
        let size = 1usize << keep;
        let mut probs = vec![0.0; size];
        for (i, c) in self.amps.iter().enumerate() {
            probs[i & (size - 1)] += c.norm_sqr();
        }
        probs
    }

    /// Projects qubits `keep..` onto `|0>`, renormalizes, and returns the
    /// projected state together with the weight that was discarded.
    pub fn project_upper_zero(&self, keep: usize) -> (QubitState, f64) {
        let size = 1usize << keep;
        let mut amps: Vec<Complex64> = self.amps[..size.min(self.amps.len())].to_vec();
        amps.resize(size, Complex64::ZERO);
        let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let residual = self.norm_sqr() - kept;
        if kept > 0.0 {
            let scale = Complex64::new(1.0 / kept.sqrt(), 0.0);
            for a in &mut amps {
                *a *= scale;
            }
        }
        (
            QubitState {
                num_qubits: keep,
                amps,
            },
            residual,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn assert_state_close(s: &QubitState, expected: &[Complex64], eps: f64) {
        assert_eq!(s.amplitudes().len(), expected.len());
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < eps, "got {a}, expected {e}");
        }
    }

    #[test]
    fn u3_special_cases_match_fixed_gates() {
        let x = u3_matrix(std::f64::consts::PI, 0.0, std::f64::consts::PI);
        for r in 0..2 {
            for c in 0..2 {
                assert!((x[r][c] - X_MAT[r][c]).norm() < 1e-15);
            }
        }
        let id = u3_matrix(0.0, 0.0, 0.0);
        assert!((id[0][0] - Complex64::ONE).norm() < 1e-15);
        assert!((id[1][1] - Complex64::ONE).norm() < 1e-15);
        assert!(id[0][1].norm() < 1e-15 && id[1][0].norm() < 1e-15);
    }

    #[test]
    fn u3_pi_acts_as_x() {
        let mut s = QubitState::zero(1);
        s.apply(&GateOp::U3 {
            target: 0,
            theta: std::f64::consts::PI,
            phi: 0.0,
            lambda: std::f64::consts::PI,
        })
        .unwrap();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hadamard_makes_equal_superposition() {
        let mut s = QubitState::zero(1);
        s.apply(&GateOp::H { target: 0 }).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_state_close(&s, &[Complex64::new(h, 0.0), Complex64::new(h, 0.0)], 1e-15);
    }

    #[test]
    fn inactive_control_does_nothing() {
        let mut s = QubitState::zero(2);
        s.apply(&GateOp::Cx {
            control: 0,
            target: 1,
        })
        .unwrap();
        let mut expected = vec![Complex64::ZERO; 4];
        expected[0] = Complex64::ONE;
        assert_state_close(&s, &expected, 1e-15);

        // and the active case flips the target
        let mut s = QubitState::zero(2);
        s.apply(&GateOp::X { target: 0 }).unwrap();
        s.apply(&GateOp::Cx {
            control: 0,
            target: 1,
        })
        .unwrap();
        let mut expected = vec![Complex64::ZERO; 4];
        expected[3] = Complex64::ONE;
        assert_state_close(&s, &expected, 1e-15);
    }

    #[test]
    fn ccx_needs_both_controls() {
        let mut s = QubitState::zero(3);
        s.apply(&GateOp::X { target: 0 }).unwrap();
        s.apply(&GateOp::Ccx {
            control1: 0,
            control2: 1,
            target: 2,
        })
        .unwrap();
        assert_abs_diff_eq!(s.probabilities()[1], 1.0, epsilon = 1e-15);
        s.apply(&GateOp::X { target: 1 }).unwrap();
        s.apply(&GateOp::Ccx {
            control1: 0,
            control2: 1,
            target: 2,
        })
        .unwrap();
        assert_abs_diff_eq!(s.probabilities()[7], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn invalid_gates_are_rejected() {
        let mut s = QubitState::zero(2);
        assert!(matches!(
            s.apply(&GateOp::X { target: 2 }),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            s.apply(&GateOp::Cx {
                control: 1,
                target: 1
            }),
            Err(Error::DuplicateQubit(1))
        ));
        assert!(matches!(
            s.apply(&GateOp::Ccx {
                control1: 0,
                control2: 0,
                target: 1
            }),
            Err(Error::DuplicateQubit(0))
        ));
    }

    #[test]
    fn deterministic_basis_state_sampling() {
        let mut s = QubitState::zero(4);
        s.apply(&GateOp::X { target: 1 }).unwrap();
        s.apply(&GateOp::X { target: 2 }).unwrap();
        let mut rng = stream_rng(1, 0);
        assert_eq!(s.sample(&mut rng), "0110");
    }

    #[test]
    fn same_seed_same_bitstrings() {
        let mut s = QubitState::zero(3);
        for q in 0..3 {
            s.apply(&GateOp::H { target: q }).unwrap();
        }
        let draw = |seed| -> Vec<String> {
            let mut rng = stream_rng(seed, 0);
            (0..32).map(|_| s.sample(&mut rng)).collect()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }

    #[test]
    fn bell_state_sampling_is_balanced() {
        let mut s = QubitState::zero(2);
        s.apply(&GateOp::H { target: 0 }).unwrap();
        s.apply(&GateOp::Cx {
            control: 0,
            target: 1,
        })
        .unwrap();
        let mut rng = stream_rng(7, 0);
        let mut count00 = 0u32;
        let shots = 100_000;
        for _ in 0..shots {
            match s.sample_index(&mut rng) {
                0 => count00 += 1,
                3 => {}
                other => panic!("impossible outcome {other}"),
            }
        }
        // 3 sigma for a fair coin over 1e5 draws is ~0.0047
        assert!((count00 as f64 / shots as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn born_rule_chi_squared() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        // random 4-qubit state
        let mut rng = stream_rng(11, 0);
        let raw: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm: f64 = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = raw.iter().map(|c| c / norm).collect();
        let s = QubitState::from_amplitudes(amps).unwrap();

        let shots = 100_000usize;
        let mut counts = [0u64; 16];
        let mut sample_rng = stream_rng(12, 0);
        for _ in 0..shots {
            counts[s.sample_index(&mut sample_rng)] += 1;
        }
        let probs = s.probabilities();
        let mut stat = 0.0;
        let mut dof = 0.0;
        for (c, p) in counts.iter().zip(&probs) {
            let expected = p * shots as f64;
            if expected >= 5.0 {
                stat += (*c as f64 - expected).powi(2) / expected;
                dof += 1.0;
            }
        }
        let p_value = 1.0 - ChiSquared::new(dof - 1.0).unwrap().cdf(stat);
        assert!(p_value > 0.001, "chi-squared p = {p_value}, stat = {stat}");
    }

    #[test]
    fn fidelity_basics() {
        let mut a = QubitState::zero(2);
        a.apply(&GateOp::H { target: 0 }).unwrap();
        assert_abs_diff_eq!(a.fidelity(&a).unwrap(), 1.0, epsilon = 1e-15);

        // global phase is invisible
        let rotated = QubitState::from_amplitudes(
            a.amplitudes()
                .iter()
                .map(|c| c * Complex64::from_polar(1.0, 1.234))
                .collect(),
        )
        .unwrap();
        assert_abs_diff_eq!(a.fidelity(&rotated).unwrap(), 1.0, epsilon = 1e-12);

        let zero = QubitState::zero(1);
        let mut one = QubitState::zero(1);
        one.apply(&GateOp::X { target: 0 }).unwrap();
        assert_abs_diff_eq!(zero.fidelity(&one).unwrap(), 0.0, epsilon = 1e-15);
        assert!(zero.fidelity(&a).is_err());
    }

    #[test]
    fn project_upper_zero_strips_clean_ancillas() {
        let mut s = QubitState::zero(3);
        s.apply(&GateOp::H { target: 0 }).unwrap();
        s.apply(&GateOp::Cx {
            control: 0,
            target: 1,
        })
        .unwrap();
        let (data, residual) = s.project_upper_zero(2);
        assert_eq!(data.num_qubits(), 2);
        assert!(residual.abs() < 1e-15);
        assert_abs_diff_eq!(data.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    fn arb_gate(num_qubits: usize) -> impl Strategy<Value = GateOp> {
        let q = 0..num_qubits;
        let angles = -6.0..6.0f64;
        prop_oneof![
            q.clone().prop_map(|target| GateOp::X { target }),
            q.clone().prop_map(|target| GateOp::Z { target }),
            q.clone().prop_map(|target| GateOp::H { target }),
            (q.clone(), angles.clone(), angles.clone(), angles.clone()).prop_map(
                |(target, theta, phi, lambda)| GateOp::U3 {
                    target,
                    theta,
                    phi,
                    lambda
                }
            ),
            (q.clone(), q.clone()).prop_filter_map("distinct", |(c, t)| {
                (c != t).then_some(GateOp::Cx {
                    control: c,
                    target: t,
                })
            }),
            (q.clone(), q.clone()).prop_filter_map("distinct", |(c, t)| {
                (c != t).then_some(GateOp::Ch {
                    control: c,
                    target: t,
                })
            }),
            (q.clone(), q.clone(), angles.clone(), angles.clone(), angles).prop_filter_map(
                "distinct",
                |(c, t, theta, phi, lambda)| {
                    (c != t).then_some(GateOp::Cu3 {
                        control: c,
                        target: t,
                        theta,
                        phi,
                        lambda,
                    })
                }
            ),
            (q.clone(), q.clone(), q).prop_filter_map("distinct", |(c1, c2, t)| {
                (c1 != c2 && c1 != t && c2 != t).then_some(GateOp::Ccx {
                    control1: c1,
                    control2: c2,
                    target: t,
                })
            }),
        ]
    }

    fn arb_state(num_qubits: usize) -> impl Strategy<Value = QubitState> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << num_qubits).prop_filter_map(
            "nonzero norm",
            move |pairs| {
                let norm: f64 = pairs.iter().map(|(r, i)| r * r + i * i).sum::<f64>().sqrt();
                if norm < 1e-3 {
                    return None;
                }
                let amps = pairs
                    .iter()
                    .map(|&(r, i)| Complex64::new(r / norm, i / norm))
                    .collect();
                Some(QubitState::from_amplitudes(amps).unwrap())
            },
        )
    }

    proptest! {
        #[test]
        fn gate_then_inverse_is_identity(state in arb_state(4), gate in arb_gate(4)) {
            let mut s = state.clone();
            s.apply(&gate).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            s.apply(&gate.inverse()).unwrap();
            for (a, b) in s.amplitudes().iter().zip(state.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn gate_application_is_linear(u in arb_state(3), v in arb_state(3), gate in arb_gate(3)) {
            let (alpha, beta) = (Complex64::new(0.6, 0.2), Complex64::new(-0.3, 0.7));
            let mix: Vec<Complex64> = u
                .amplitudes()
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| alpha * a + beta * b)
                .collect();
            let mut mixed = QubitState { num_qubits: 3, amps: mix };
            mixed.apply(&gate).unwrap();

            let mut us = u.clone();
            us.apply(&gate).unwrap();
            let mut vs = v.clone();
            vs.apply(&gate).unwrap();
            for (m, (a, b)) in mixed
                .amplitudes()
                .iter()
                .zip(us.amplitudes().iter().zip(vs.amplitudes()))
            {
                prop_assert!((m - (alpha * a + beta * b)).norm() < 1e-12);
            }
        }
    }
}
