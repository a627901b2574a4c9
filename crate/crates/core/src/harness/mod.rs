//! Paired Monte Carlo regret experiments.
//!
//! For every sweep value and path index the harness samples one arrival
//! path, runs every policy on it and solves the hindsight LP. Regret is the
//! per-path difference `V^HO - V^π`, so policies are compared on identical
//! arrivals. Work items run in parallel, but results are gathered by index and
//! reduced in index order: the table is identical for any worker count.

mod spec;
mod table;

use rayon::prelude::*;
use thiserror::Error;

use crate::arrivals::sample_path;
use crate::lp::{solve_dlp, LpError, SimplexWorkspace};
use crate::model::{Instance, ModelError};
use crate::oracle::hindsight_value;
use crate::policies::{
    compute_schedule, run_policy_on_events, PolicyError, PolicyKind, RunOptions,
};
use crate::rng::{path_seed, ThinningStream};
use crate::stats::Estimate;

pub use spec::{ExperimentSpec, SweepAxis};
pub use table::{
    export_csv, fit_loglog_slope, write_csv, PathOutcome, RegretRow, RegretTable, SlopeFit,
    SweepResult, CSV_HEADER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("experiment spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("sweep value {sweep}, seed {seed}: {source}")]
    Run {
        sweep: f64,
        seed: u64,
        #[source]
        source: PolicyError,
    },
    #[error("sweep value {sweep}: {source}")]
    Setup {
        sweep: f64,
        #[source]
        source: PolicyError,
    },
    #[error("policy {0} is not part of this table")]
    MissingPolicy(PolicyKind),
    #[error("need at least 4 positive points for a slope fit, got {usable} (excluded sweep values {excluded:?})")]
    NonpositiveRegret { usable: usize, excluded: Vec<f64> },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Runs one path: hindsight value plus every policy's revenue.
fn run_path(
    spec: &ExperimentSpec,
    inst: &Instance,
    seed: u64,
    ws: &mut SimplexWorkspace,
) -> Result<PathOutcome, PolicyError> {
    let path = sample_path(inst, seed);
    let events = path.merge_events();
    let v_ho = hindsight_value(ws, inst, &path.totals()).map_err(PolicyError::from)?;
    let revenues = spec
        .policies
        .iter()
        .map(|p| {
            let mut thinning = ThinningStream::new(seed, p.policy_id);
            run_policy_on_events(p.kind, inst, &events, &mut thinning, RunOptions::default())
                .map(|r| r.revenue)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PathOutcome {
        seed,
        v_ho,
        revenues,
    })
}

/// Runs the experiment on `workers` threads (the rayon default when `None`).
pub fn run_experiment(
    spec: &ExperimentSpec,
    workers: Option<usize>,
) -> Result<RegretTable, HarnessError> {
    match workers {
        None => run_experiment_inner(spec),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?
            .install(|| run_experiment_inner(spec)),
    }
}

fn run_experiment_inner(spec: &ExperimentSpec) -> Result<RegretTable, HarnessError> {
    let values = spec.sweep.values();
    let needs_schedule = spec
        .policies
        .iter()
        .any(|p| matches!(p.kind, PolicyKind::Ir | PolicyKind::Irt));

    let mut instances = Vec::with_capacity(values.len());
    let mut dlp_values = Vec::with_capacity(values.len());
    for &v in values {
        let inst = spec.instance_at(v)?;
        if needs_schedule {
            compute_schedule(inst.horizon()).map_err(|e| HarnessError::Setup {
                sweep: v,
                source: e.into(),
            })?;
        }
        let dlp = solve_dlp(&inst).map_err(|e: LpError| HarnessError::Setup {
            sweep: v,
            source: e.into(),
        })?;
        dlp_values.push(dlp.value);
        instances.push(inst);
    }

    let n_paths = spec.num_paths;
    let outcomes: Vec<Result<PathOutcome, HarnessError>> = (0..values.len() * n_paths)
        .into_par_iter()
        .map_init(SimplexWorkspace::new, |ws, item| {
            let (s, i) = (item / n_paths, item % n_paths);
            let seed = path_seed(spec.base_seed, s as u64, i as u64);
            run_path(spec, &instances[s], seed, ws).map_err(|source| HarnessError::Run {
                sweep: values[s],
                seed,
                source,
            })
        })
        .collect();
    let mut outcomes = outcomes
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter();

    let sweeps = values
        .iter()
        .zip(dlp_values)
        .map(|(&value, v_dlp)| {
            let outcomes: Vec<PathOutcome> = outcomes.by_ref().take(n_paths).collect();
            SweepResult::from_outcomes(value, v_dlp, &spec.policies, outcomes)
        })
        .collect();

    Ok(RegretTable {
        policies: spec.policies.clone(),
        sweeps,
    })
}

/// Summary lines: regret at the first and last sweep value and the log-log
/// slope for each policy.
pub fn summarize(table: &RegretTable) -> Vec<String> {
    let (Some(first), Some(last)) = (table.sweeps.first(), table.sweeps.last()) else {
        return Vec::new();
    };
    table
        .policies
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let slope = match fit_loglog_slope(table, p.kind) {
                Ok(f) => format!("slope {:.3} (R² {:.3})", f.slope, f.r_squared),
                Err(_) => "slope n/a".to_string(),
            };
            let fmt = |s: &SweepResult| {
                let e: &Estimate = &s.rows[i].regret;
                format!("{:.3} ± {:.3} @ {}", e.mean, e.std_err, s.value)
            };
            format!(
                "{:<4} regret {} .. {}; {}",
                p.kind.name(),
                fmt(first),
                fmt(last),
                slope
            )
        })
        .collect()
}
