//! The three data-producing commands.

use anyhow::{Context, Result};
use photonlab::estimation::{
    bounds, build_likelihoods, run_experiments, scheme_precisions, TableProvenance,
};
use photonlab::fock::{classical_fisher, qfi, InputKind};

use crate::config::{LossMode, RunConfig};
use crate::csvio::{
    validate_compare, validate_likelihood, validate_sweep, write_csv, CompareRow, LikelihoodRow,
    SweepRow,
};
use crate::manifest::ManifestBuilder;

fn prepare_out_dir(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out)
        .with_context(|| format!("cannot create output directory {}", cfg.out.display()))
}

/// Per-event likelihood curves: sampled frequencies, the trig-polynomial fit,
/// and the exact probabilities, over the full phase grid. One file per state.
pub fn likelihood(cfg: &RunConfig) -> Result<()> {
    prepare_out_dir(cfg)?;
    let mut manifest = ManifestBuilder::new("likelihood");
    for kind in cfg.parse_states()? {
        let input = kind.build()?;
        let n = input.total_photons();
        let sampled = build_likelihoods(
            &input,
            cfg.t0,
            cfg.t1,
            cfg.grid,
            TableProvenance::Sampled {
                shots: cfg.shots,
                seed: cfg.seed,
            },
        )?;
        let exact = build_likelihoods(&input, cfg.t0, cfg.t1, cfg.grid, TableProvenance::Exact)?;

        let label = kind.label();
        let mut rows = Vec::with_capacity(sampled.events().len() * cfg.grid);
        for (e, event) in sampled.events().iter().enumerate() {
            for j in 0..cfg.grid {
                let phi = sampled.grid_phi(j);
                rows.push(LikelihoodRow {
                    state: label.clone(),
                    t0: cfg.t0,
                    t1: cfg.t1,
                    event_n0: event.n0(),
                    event_n1: event.n1(),
                    phi,
                    p_sampled: sampled.raw(e, j),
                    p_fitted: sampled.fitted(e, phi),
                    p_exact: exact.raw(e, j),
                });
            }
        }
        validate_likelihood(&rows, n)?;
        let path = cfg.out.join(format!(
            "likelihood_{label}_t0_{}_t1_{}.csv",
            cfg.t0, cfg.t1
        ));
        write_csv(&path, &rows)?;
        manifest.record(&path);
        println!("wrote {} ({} rows)", path.display(), rows.len());
    }
    let manifest_path = manifest.write(cfg)?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

/// Averaged precision and Fisher information over a loss grid, one row per
/// (state, transmissivity) cell.
pub fn sweep(cfg: &RunConfig) -> Result<()> {
    prepare_out_dir(cfg)?;
    let mut manifest = ManifestBuilder::new("sweep");
    let states = cfg.parse_states()?;
    let mut rows = Vec::with_capacity(states.len() * cfg.t_grid.len());
    for kind in &states {
        let input = kind.build()?;
        let n = input.total_photons();
        let phi_star = cfg.phi_star_for(kind)?;
        for &t in &cfg.t_grid {
            let (t0, t1) = match cfg.loss_mode {
                LossMode::Symmetric => (t, t),
                LossMode::Asymmetric => (1.0, t),
            };
            let stats = run_experiments(&cfg.experiment(kind, t0, t1)?)?;
            let avg = stats.avg_delta_phi();
            let fisher = stats.fisher_from_posterior();
            let f_exact = classical_fisher(&input, phi_star, t0, t1)?;
            let f_q = qfi(&input, phi_star, t0, t1)?;
            let (hl, sil) = bounds(n, t0, t1);
            rows.push(SweepRow {
                state: kind.label(),
                t0,
                t1,
                avg_delta_phi: avg.mean,
                std_error: avg.std_error,
                f_posterior: fisher.mean,
                f_exact,
                f_q,
                delta_phi_min: 1.0 / fisher.mean.sqrt(),
                sil,
                hl,
            });
            println!(
                "{} t0={t0} t1={t1}: avg_delta_phi = {:.5} +- {:.5}",
                kind.label(),
                avg.mean,
                avg.std_error
            );
        }
    }
    validate_sweep(&rows)?;
    let path = cfg.out.join(format!(
        "sweep_{}.csv",
        match cfg.loss_mode {
            LossMode::Symmetric => "symmetric",
            LossMode::Asymmetric => "asymmetric",
        }
    ));
    write_csv(&path, &rows)?;
    manifest.record(&path);
    let manifest_path = manifest.write(cfg)?;
    println!("wrote {} and {}", path.display(), manifest_path.display());
    Ok(())
}

/// Best achievable phase uncertainty of photon counting, parity detection,
/// and the exchange observable, over the loss grid. States outside the
/// `m::m'` family are skipped (the operators are not defined for them).
pub fn compare_schemes(cfg: &RunConfig) -> Result<()> {
    prepare_out_dir(cfg)?;
    let mut manifest = ManifestBuilder::new("compare-schemes");
    let mut rows = Vec::new();
    for kind in cfg.parse_states()? {
        let applicable = matches!(kind, InputKind::Noon(_) | InputKind::MmPrime(_, _));
        if !applicable {
            eprintln!(
                "skipping {}: parity and exchange operators need an m::m' state",
                kind.label()
            );
            continue;
        }
        let n = kind.build()?.total_photons();
        for &t in &cfg.t_grid {
            let (t0, t1) = match cfg.loss_mode {
                LossMode::Symmetric => (t, t),
                LossMode::Asymmetric => (1.0, t),
            };
            let precision = scheme_precisions(&kind, t0, t1)?;
            let (hl, sil) = bounds(n, t0, t1);
            rows.push(CompareRow {
                state: kind.label(),
                t0,
                t1,
                delta_phi_counting: precision.photon_counting,
                delta_phi_parity: precision.parity,
                delta_phi_huver: precision.huver,
                sil,
                hl,
            });
        }
    }
    validate_compare(&rows)?;
    let path = cfg.out.join("compare_schemes.csv");
    write_csv(&path, &rows)?;
    manifest.record(&path);
    let manifest_path = manifest.write(cfg)?;
    println!("wrote {} and {}", path.display(), manifest_path.display());
    Ok(())
}
