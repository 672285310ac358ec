//! Simulation and estimation toolkit for lossy two-arm interferometry with
//! definite-photon-number input states.
//!
//! The crate has two independent routes to the same physics and a statistics
//! layer on top:
//!
//! * [`fock`] — exact two-mode Fock-space evolution (phase shift, photon loss
//!   through fictitious beam splitters, final 50-50 beam splitter), detection
//!   likelihoods, operator expectations, and classical/quantum Fisher
//!   information. This is the ground-truth oracle.
//! * [`qubit`] + [`encoding`] + [`circuit`] — a dense state-vector simulator
//!   over a small basis-gate set, the two-qubits-per-photon encoding of the
//!   optical state, and synthesis of the full interferometer circuit whose
//!   sampled detection statistics must reproduce the oracle.
//! * [`estimation`] — likelihood tables (exact or sampled-and-fitted),
//!   grid-based Bayesian posterior updates, averaged-precision Monte Carlo,
//!   Fisher information extracted from posterior widths, and the
//!   Heisenberg / standard-interferometry precision bounds.
//!
//! All randomized routines take an explicit 64-bit seed and derive one
//! counter-based stream per work item, so results are identical whether the
//! `parallel` feature (rayon) is enabled or not, and for any thread count.

pub mod circuit;
pub mod encoding;
pub mod error;
pub mod estimation;
pub mod fock;
pub mod qubit;
pub mod rng;
pub mod trig;

pub(crate) mod par;

pub use error::{Error, Result};
