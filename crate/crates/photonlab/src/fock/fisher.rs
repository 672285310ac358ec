//! Classical Fisher information of the photon-counting measurement and the
//! quantum Fisher information of the loss-mixed state.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{apply_loss, apply_phase, exact_likelihood, ModeState};
use crate::error::{Error, Result};
use crate::trig::TrigPoly;

/// Probabilities below this are treated as structural zeros in the Fisher
/// sum.
pub const PROB_CUTOFF: f64 = 1e-12;

/// Eigenvalue-pair cutoff for the symmetric-logarithmic-derivative sum;
/// below the squared-amplitude noise floor of f64 at these dimensions.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Number of grid points used to fit likelihood curves; comfortably above
/// the 2N + 1 needed for exact recovery at N = 6.
const FIT_GRID: usize = 64;

fn likelihood_polys(input: &ModeState, t0: f64, t1: f64) -> Result<Vec<TrigPoly>> {
    let degree = input.total_photons();
    let events = crate::encoding::DetectionEvent::all(degree);
    let mut samples = vec![Vec::with_capacity(FIT_GRID); events.len()];
    for j in 0..FIT_GRID {
        let phi = std::f64::consts::TAU * j as f64 / FIT_GRID as f64;
        let probs = exact_likelihood(input, phi, t0, t1)?;
        for (row, event) in samples.iter_mut().zip(&events) {
            row.push(probs[event]);
        }
    }
    samples
        .iter()
        .map(|row| TrigPoly::fit_uniform(row, degree))
        .collect()
}

/// Fisher information of the photon-counting scheme at phase `phi`:
/// `sum_D (dP(D|phi)/dphi)^2 / P(D|phi)`.
///
/// Detection probabilities are exact trigonometric polynomials of degree at
/// most N, so the derivative comes from differentiating the fitted
/// polynomial; terms with `P < PROB_CUTOFF` are skipped.
pub fn classical_fisher(input: &ModeState, phi: f64, t0: f64, t1: f64) -> Result<f64> {
    Ok(classical_fisher_curve(input, &[phi], t0, t1)?[0])
}

/// [`classical_fisher`] evaluated at several phases with a single curve fit.
pub fn classical_fisher_curve(
    input: &ModeState,
    phis: &[f64],
    t0: f64,
    t1: f64,
) -> Result<Vec<f64>> {
    let polys = likelihood_polys(input, t0, t1)?;
    Ok(phis
        .iter()
        .map(|&phi| {
            polys
                .iter()
                .map(|poly| {
                    let p = poly.eval(phi);
                    if p < PROB_CUTOFF {
                        0.0
                    } else {
                        let dp = poly.deriv(phi);
                        dp * dp / p
                    }
                })
                .sum()
        })
        .collect())
}

/// Quantum Fisher information of the state before the final beam splitter,
/// from the symmetric logarithmic derivative:
/// `F_Q = 2 sum_{i,j} |<i| drho/dphi |j>|^2 / (lambda_i + lambda_j)`,
/// skipping eigenvalue pairs below [`EIGENVALUE_CUTOFF`].
///
/// The environment is traced out, so sectors that lost the same number of
/// photons are merged before diagonalizing: which arm a photon left from is
/// not available to any measurement on the light.
pub fn qfi(input: &ModeState, phi: f64, t0: f64, t1: f64) -> Result<f64> {
    let rho = apply_loss(&apply_phase(input, phi), t0, t1)?;
    let mut total = 0.0;
    for block in rho.merged_blocks() {
        if block.iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        total += block_qfi(&block)?;
    }
    Ok(total)
}

fn block_qfi(block: &DMatrix<Complex64>) -> Result<f64> {
    // Each entry carries the phase exp(i (s' - s) phi), so the derivative is
    // elementwise: d rho_{s s'} = i (s' - s) rho_{s s'}.
    let dim = block.nrows();
    let drho = DMatrix::from_fn(dim, dim, |s, sp| {
        Complex64::new(0.0, (sp as f64) - (s as f64)) * block[(s, sp)]
    });
    let eig = block
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::EigenFailed)?;
    let mut f = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
            if denom < EIGENVALUE_CUTOFF {
                continue;
            }
            let vi = eig.eigenvectors.column(i);
            let vj = eig.eigenvectors.column(j);
            let elem = (vi.adjoint() * &drho * vj)[(0, 0)];
            f += 2.0 * elem.norm_sqr() / denom;
        }
    }
    Ok(f)
}
