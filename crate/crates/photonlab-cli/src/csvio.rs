//! CSV row types and the schema checks run before anything is written.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

#[derive(Serialize)]
pub struct LikelihoodRow {
    pub state: String,
    pub t0: f64,
    pub t1: f64,
    pub event_n0: usize,
    pub event_n1: usize,
    pub phi: f64,
    pub p_sampled: f64,
    pub p_fitted: f64,
    pub p_exact: f64,
}

#[derive(Serialize)]
pub struct SweepRow {
    pub state: String,
    pub t0: f64,
    pub t1: f64,
    pub avg_delta_phi: f64,
    pub std_error: f64,
    pub f_posterior: f64,
    pub f_exact: f64,
    pub f_q: f64,
    pub delta_phi_min: f64,
    pub sil: f64,
    pub hl: f64,
}

#[derive(Serialize)]
pub struct CompareRow {
    pub state: String,
    pub t0: f64,
    pub t1: f64,
    pub delta_phi_counting: f64,
    pub delta_phi_parity: f64,
    pub delta_phi_huver: f64,
    pub sil: f64,
    pub hl: f64,
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&v) {
        bail!("{name} = {v} is not a probability");
    }
    Ok(())
}

fn check_loss(t0: f64, t1: f64) -> Result<()> {
    for (name, t) in [("t0", t0), ("t1", t1)] {
        if !(0.0..=1.0).contains(&t) {
            bail!("{name} = {t} outside [0, 1]");
        }
    }
    Ok(())
}

/// Nonnegative and finite, except that precision columns may be infinite
/// (no information, or a diverging classical bound).
fn check_spread(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        bail!("{name} = {v} must be nonnegative");
    }
    Ok(())
}

pub fn validate_likelihood(rows: &[LikelihoodRow], total_photons: usize) -> Result<()> {
    for row in rows {
        check_loss(row.t0, row.t1)?;
        if row.event_n0 + row.event_n1 > total_photons {
            bail!(
                "event D({},{}) exceeds {total_photons} photons",
                row.event_n0,
                row.event_n1
            );
        }
        check_prob("p_sampled", row.p_sampled)?;
        check_prob("p_fitted", row.p_fitted)?;
        check_prob("p_exact", row.p_exact)?;
        if !row.phi.is_finite() {
            bail!("phi = {} is not finite", row.phi);
        }
    }
    Ok(())
}

pub fn validate_sweep(rows: &[SweepRow]) -> Result<()> {
    for row in rows {
        check_loss(row.t0, row.t1)?;
        check_spread("avg_delta_phi", row.avg_delta_phi)?;
        check_spread("std_error", row.std_error)?;
        check_spread("f_posterior", row.f_posterior)?;
        check_spread("f_exact", row.f_exact)?;
        check_spread("f_q", row.f_q)?;
        check_spread("delta_phi_min", row.delta_phi_min)?;
        check_spread("sil", row.sil)?;
        check_spread("hl", row.hl)?;
    }
    Ok(())
}

pub fn validate_compare(rows: &[CompareRow]) -> Result<()> {
    for row in rows {
        check_loss(row.t0, row.t1)?;
        check_spread("delta_phi_counting", row.delta_phi_counting)?;
        check_spread("delta_phi_parity", row.delta_phi_parity)?;
        check_spread("delta_phi_huver", row.delta_phi_huver)?;
        check_spread("sil", row.sil)?;
        check_spread("hl", row.hl)?;
    }
    Ok(())
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
