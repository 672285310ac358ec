//! Real trigonometric polynomials of bounded degree.
//!
//! Detection likelihoods in this setup are exactly trigonometric polynomials
//! of degree at most the photon number, so fitting one to samples on an
//! equally spaced grid over a full period recovers the curve exactly (up to
//! sampling noise) and gives an analytic derivative for Fisher-information
//! sums.

use crate::error::{Error, Result};

/// `f(x) = a0 + sum_k a[k] cos(k x) + b[k] sin(k x)`, `k = 1..=degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPoly {
    /// Least-squares fit of a degree-`degree` trigonometric polynomial to
    /// `values` sampled at `x_j = 2 pi j / n`, `j = 0..n`.
    ///
    /// On such a grid the basis functions are orthogonal as long as
    /// `n >= 2 * degree + 1`, so the projection below *is* the least-squares
    /// solution.
    pub fn fit_uniform(values: &[f64], degree: usize) -> Result<Self> {
        let n = values.len();
        if n < 2 * degree + 1 {
            return Err(Error::GridTooSmall {
                got: n,
                degree,
                needed: 2 * degree + 1,
            });
        }
        let nf = n as f64;
        let a0 = values.iter().sum::<f64>() / nf;
        let mut a = vec![0.0; degree];
        let mut b = vec![0.0; degree];
        for k in 1..=degree {
            let mut ak = 0.0;
            let mut bk = 0.0;
            for (j, &y) in values.iter().enumerate() {
                let x = std::f64::consts::TAU * j as f64 / nf;
                ak += y * (k as f64 * x).cos();
                bk += y * (k as f64 * x).sin();
            }
            // cos(kx) has squared norm n/2 on the grid, except k = n/2 where
            // it is n (and the sine column vanishes); values of k that large
            // are excluded by the n >= 2*degree + 1 check above.
            a[k - 1] = 2.0 * ak / nf;
            b[k - 1] = 2.0 * bk / nf;
        }
        Ok(Self { a0, a, b })
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn constant_term(&self) -> f64 {
        self.a0
    }

    /// Cosine/sine coefficients for harmonic `k >= 1`.
    pub fn harmonic(&self, k: usize) -> (f64, f64) {
        (self.a[k - 1], self.b[k - 1])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut y = self.a0;
        for k in 1..=self.a.len() {
            let kx = k as f64 * x;
            y += self.a[k - 1] * kx.cos() + self.b[k - 1] * kx.sin();
        }
        y
    }

    /// Analytic derivative at `x`.
    pub fn deriv(&self, x: f64) -> f64 {
        let mut y = 0.0;
        for k in 1..=self.a.len() {
            let kf = k as f64;
            let kx = kf * x;
            y += kf * (-self.a[k - 1] * kx.sin() + self.b[k - 1] * kx.cos());
        }
        y
    }

    /// Largest absolute coefficient among harmonics other than 0 and those
    /// listed in `keep`. Used to verify which harmonics a curve contains.
    pub fn residual_outside(&self, keep: &[usize]) -> f64 {
        (1..=self.a.len())
            .filter(|k| !keep.contains(k))
            .map(|k| self.a[k - 1].abs().max(self.b[k - 1].abs()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| f(std::f64::consts::TAU * j as f64 / n as f64))
            .collect()
    }

    #[test]
    fn recovers_exact_polynomial() {
        let f = |x: f64| 0.5 + 0.3 * (2.0 * x).cos() - 0.1 * (5.0 * x).sin();
        let p = TrigPoly::fit_uniform(&sample(f, 64), 6).unwrap();
        for i in 0..100 {
            let x = 0.0631 * i as f64;
            assert_abs_diff_eq!(p.eval(x), f(x), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(p.constant_term(), 0.5, epsilon = 1e-12);
        assert!(p.residual_outside(&[2, 5]) < 1e-12);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let f = |x: f64| 1.0 + (3.0 * x).cos() + 0.25 * x.sin();
        let p = TrigPoly::fit_uniform(&sample(f, 32), 4).unwrap();
        let h = 1e-5;
        for i in 0..20 {
            let x = 0.3 * i as f64;
            let fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(p.deriv(x), fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn rejects_short_grids() {
        let err = TrigPoly::fit_uniform(&[0.0; 12], 6).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { needed: 13, .. }));
    }
}
