//! Admission-control heuristics built on the DLP.
//!
//! All five policies share one engine. The horizon is cut into epochs; at the
//! start of each epoch the policy solves
//!
//! ```text
//! max rᵀx  s.t.  A x ≤ C(t) / (T - t),  0 ≤ x ≤ λ
//! ```
//!
//! with the capacity remaining at that moment, and turns the solution into
//! acceptance probabilities (optionally thresholded). Within the epoch each
//! arriving class-`j` customer is accepted with that probability provided
//! its full resource requirement `A_j` still fits.
//!
//! | policy | epochs                          | thresholds             |
//! |--------|---------------------------------|------------------------|
//! | SPA    | one, `[0, T]`                   | none                   |
//! | FR     | unit periods `[t, t+1)`         | none                   |
//! | FRT    | unit periods                    | `(T - t)^(-1/4)`       |
//! | IR     | [`ResolveSchedule`]             | none                   |
//! | IRT    | [`ResolveSchedule`]             | `τ_u^(-1/4)`, `u < K`  |
//!
//! Exactly one uniform is drawn from the thinning stream per arrival, whether
//! or not it is needed, so all policies stay aligned on the same draws.

mod schedule;
mod trace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrivals::{ArrivalPath, MergedEvent};
use crate::lp::{LpError, SimplexWorkspace, DEFAULT_PIVOT_TOL};
use crate::model::Instance;
use crate::rng::ThinningStream;

pub use schedule::{compute_schedule, ResolveSchedule, ScheduleError};
pub use trace::write_trace_csv;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolicyError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("path has {path} classes but the instance has {instance}")]
    ClassMismatch { path: usize, instance: usize },
    #[error("unknown policy `{0}`; valid names: SPA, FR, IR, IRT, FRT")]
    UnknownPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyKind {
    #[serde(rename = "SPA")]
    Spa,
    #[serde(rename = "FR")]
    Fr,
    #[serde(rename = "IR")]
    Ir,
    #[serde(rename = "IRT")]
    Irt,
    #[serde(rename = "FRT")]
    Frt,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [Self::Spa, Self::Fr, Self::Ir, Self::Irt, Self::Frt];

    pub fn name(self) -> &'static str {
        match self {
            Self::Spa => "SPA",
            Self::Fr => "FR",
            Self::Ir => "IR",
            Self::Irt => "IRT",
            Self::Frt => "FRT",
        }
    }

    /// Default thinning stream key.
    pub fn default_id(self) -> u32 {
        self as u32
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| PolicyError::UnknownPolicy(s.to_string()))
    }
}

/// A policy plus the key of its thinning stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub policy_id: u32,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            policy_id: kind.default_id(),
        }
    }
}

/// LP re-solve at the start of an epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolve {
    pub time: f64,
    /// `C(t) / (T - t)`.
    pub rhs: Vec<f64>,
    pub x: Vec<f64>,
    pub threshold: Option<f64>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
    /// `A_j` did not fit in the remaining capacity.
    NoCapacity,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Accept => "accept",
            Self::Reject => "reject",
            Self::NoCapacity => "no_capacity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub time: f64,
    pub class: usize,
    pub decision: Decision,
    pub prob: f64,
    /// Remaining capacity after the decision.
    pub remaining: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub kind: PolicyKind,
    pub revenue: f64,
    pub accepted: Vec<u64>,
    pub remaining: Vec<f64>,
    /// Re-solves actually performed. Epochs without arrivals make no
    /// decisions and are skipped.
    pub resolves: Vec<Resolve>,
    pub trace: Option<Vec<TraceEvent>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub trace: bool,
}

#[derive(Debug, Clone, Copy)]
struct Epoch {
    start: f64,
    remaining_time: f64,
    threshold: Option<f64>,
}

fn epochs_for(kind: PolicyKind, horizon: f64) -> Result<Vec<Epoch>, PolicyError> {
    Ok(match kind {
        PolicyKind::Spa => vec![Epoch {
            start: 0.0,
            remaining_time: horizon,
            threshold: None,
        }],
        PolicyKind::Fr | PolicyKind::Frt => {
            let periods = (horizon.ceil() as usize).max(1);
            (0..periods)
                .map(|t| {
                    let start = t as f64;
                    let remaining_time = horizon - start;
                    Epoch {
                        start,
                        remaining_time,
                        threshold: (kind == PolicyKind::Frt).then(|| remaining_time.powf(-0.25)),
                    }
                })
                .collect()
        }
        PolicyKind::Ir | PolicyKind::Irt => {
            let sched = compute_schedule(horizon)?;
            epochs_from_schedule(&sched, kind == PolicyKind::Irt)
        }
    })
}

fn epochs_from_schedule(sched: &ResolveSchedule, thresholded: bool) -> Vec<Epoch> {
    (0..sched.num_epochs())
        .map(|u| Epoch {
            start: sched.start(u),
            remaining_time: sched.length(u),
            threshold: if thresholded {
                sched.threshold(u)
            } else {
                None
            },
        })
        .collect()
}

/// Turns an LP solution into acceptance probabilities. With a threshold
/// `θ`, classes with `x_j < λ_j θ` are rejected outright and classes with
/// `x_j > λ_j (1 - θ)` accepted outright; comparisons are strict.
pub fn acceptance_probabilities(
    x: &[f64],
    lambda: &[f64],
    threshold: Option<f64>,
    out: &mut Vec<f64>,
) {
    out.clear();
    out.extend(x.iter().zip(lambda).map(|(&xj, &lj)| match threshold {
        Some(th) if xj < lj * th => 0.0,
        Some(th) if xj > lj * (1.0 - th) => 1.0,
        _ => (xj / lj).clamp(0.0, 1.0),
    }));
}

fn simulate(
    kind: PolicyKind,
    inst: &Instance,
    events: &[MergedEvent],
    epochs: &[Epoch],
    thinning: &mut ThinningStream,
    options: RunOptions,
) -> Result<RunResult, PolicyError> {
    let n = inst.num_classes();
    let m = inst.num_resources();
    let bom = inst.bom();
    let lambda = inst.lambda();

    let mut remaining = inst.capacity().to_vec();
    let mut accepted = vec![0u64; n];
    let mut resolves = Vec::new();
    let mut trace = options.trace.then(Vec::new);

    let mut ws = SimplexWorkspace::new();
    let mut rhs = vec![0.0; m];
    let mut probs = vec![0.0; n];
    let mut epoch = 0usize;
    let mut solved: Option<usize> = None;

    for ev in events {
        while epoch + 1 < epochs.len() && epochs[epoch + 1].start <= ev.time {
            epoch += 1;
        }
        if solved != Some(epoch) {
            let e = epochs[epoch];
            for (b, c) in rhs.iter_mut().zip(&remaining) {
                *b = c / e.remaining_time;
            }
            ws.solve(inst.revenue(), bom, &rhs, lambda, DEFAULT_PIVOT_TOL)?;
            acceptance_probabilities(ws.x(), lambda, e.threshold, &mut probs);
            if options.trace {
                resolves.push(Resolve {
                    time: e.start,
                    rhs: rhs.clone(),
                    x: ws.x().to_vec(),
                    threshold: e.threshold,
                    probs: probs.clone(),
                });
            }
            solved = Some(epoch);
        }

        let j = ev.class;
        let coin = thinning.uniform();
        let fits = (0..m).all(|l| bom.get(l, j) <= remaining[l]);
        let decision = if !fits {
            Decision::NoCapacity
        } else if coin < probs[j] {
            for (l, c) in remaining.iter_mut().enumerate() {
                *c -= bom.get(l, j);
            }
            accepted[j] += 1;
            Decision::Accept
        } else {
            Decision::Reject
        };
        if let Some(t) = trace.as_mut() {
            t.push(TraceEvent {
                time: ev.time,
                class: j,
                decision,
                prob: probs[j],
                remaining: remaining.clone(),
            });
        }
    }

    let revenue = accepted
        .iter()
        .zip(inst.revenue())
        .map(|(&z, r)| z as f64 * r)
        .sum();
    Ok(RunResult {
        kind,
        revenue,
        accepted,
        remaining,
        resolves,
        trace,
    })
}

fn check_path(inst: &Instance, path: &ArrivalPath) -> Result<(), PolicyError> {
    if path.num_classes() != inst.num_classes() {
        return Err(PolicyError::ClassMismatch {
            path: path.num_classes(),
            instance: inst.num_classes(),
        });
    }
    Ok(())
}

/// Runs `kind` on an already merged event stream.
pub fn run_policy_on_events(
    kind: PolicyKind,
    inst: &Instance,
    events: &[MergedEvent],
    thinning: &mut ThinningStream,
    options: RunOptions,
) -> Result<RunResult, PolicyError> {
    let epochs = epochs_for(kind, inst.horizon())?;
    simulate(kind, inst, events, &epochs, thinning, options)
}

pub fn run_policy(
    kind: PolicyKind,
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
    options: RunOptions,
) -> Result<RunResult, PolicyError> {
    check_path(inst, path)?;
    run_policy_on_events(kind, inst, &path.merge_events(), thinning, options)
}

/// Static probabilistic allocation: one DLP solve at time 0.
pub fn run_spa(
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
) -> Result<RunResult, PolicyError> {
    run_policy(
        PolicyKind::Spa,
        inst,
        path,
        thinning,
        RunOptions { trace: true },
    )
}

/// Frequent re-solving: a fresh LP at every integer time.
pub fn run_fr(
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
) -> Result<RunResult, PolicyError> {
    run_policy(
        PolicyKind::Fr,
        inst,
        path,
        thinning,
        RunOptions { trace: true },
    )
}

/// Frequent re-solving with `(T - t)^(-1/4)` thresholds.
pub fn run_frt(
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
) -> Result<RunResult, PolicyError> {
    run_policy(
        PolicyKind::Frt,
        inst,
        path,
        thinning,
        RunOptions { trace: true },
    )
}

fn run_scheduled(
    kind: PolicyKind,
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
    sched: &ResolveSchedule,
) -> Result<RunResult, PolicyError> {
    check_path(inst, path)?;
    let epochs = epochs_from_schedule(sched, kind == PolicyKind::Irt);
    simulate(
        kind,
        inst,
        &path.merge_events(),
        &epochs,
        thinning,
        RunOptions { trace: true },
    )
}

/// Infrequent re-solving with thresholding.
pub fn run_irt(
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
    sched: &ResolveSchedule,
) -> Result<RunResult, PolicyError> {
    run_scheduled(PolicyKind::Irt, inst, path, thinning, sched)
}

/// The infrequent schedule without thresholds.
pub fn run_ir(
    inst: &Instance,
    path: &ArrivalPath,
    thinning: &mut ThinningStream,
    sched: &ResolveSchedule,
) -> Result<RunResult, PolicyError> {
    run_scheduled(PolicyKind::Ir, inst, path, thinning, sched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrivals::sample_path;
    use crate::model::Matrix;

    fn two_class(r1: f64, b: f64, horizon: f64) -> Instance {
        Instance::new(
            horizon,
            vec![1.0, 1.0],
            vec![r1, 1.0],
            Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![b * horizon],
        )
        .unwrap()
    }

    #[test]
    fn names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
        }
        assert_eq!("irt".parse::<PolicyKind>().unwrap(), PolicyKind::Irt);
        assert!(matches!(
            "bid-price".parse::<PolicyKind>(),
            Err(PolicyError::UnknownPolicy(_))
        ));
    }

    #[test]
    fn thresholds_follow_branches() {
        let mut p = Vec::new();
        // θ ≈ 0.119 at epoch 0 of T = 5000.
        let th = Some(5000f64.powf(-0.25));
        acceptance_probabilities(&[1.0, 0.0], &[1.0, 1.0], th, &mut p);
        assert_eq!(p, vec![1.0, 0.0]);
        acceptance_probabilities(&[0.5], &[1.0], th, &mut p);
        assert_eq!(p, vec![0.5]);
        acceptance_probabilities(&[0.05, 0.95], &[1.0, 1.0], th, &mut p);
        assert_eq!(p, vec![0.0, 1.0]);
        acceptance_probabilities(&[0.05], &[1.0], None, &mut p);
        assert_eq!(p, vec![0.05]);
        // θ = 1 at the last unit period: x < λ rejects, x = λ accepts.
        acceptance_probabilities(&[0.999, 1.0, 0.0], &[1.0, 1.0, 1.0], Some(1.0), &mut p);
        assert_eq!(p, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn spa_on_degenerate_instance() {
        let inst = two_class(2.0, 1.0, 1000.0);
        let path = sample_path(&inst, 11);
        let res = run_spa(&inst, &path, &mut ThinningStream::new(path.seed(), 0)).unwrap();
        let arrivals1 = path.class_times(0).len() as f64;
        assert_eq!(res.accepted[1], 0);
        assert_eq!(res.revenue, 2.0 * arrivals1.min(1000.0));
        assert_eq!(res.resolves.len(), 1);
        assert_eq!(res.resolves[0].probs, vec![1.0, 0.0]);
    }

    #[test]
    fn zero_capacity_earns_nothing() {
        let inst = two_class(2.0, 0.0, 200.0);
        let path = sample_path(&inst, 3);
        for kind in PolicyKind::ALL {
            let res = run_policy(
                kind,
                &inst,
                &path,
                &mut ThinningStream::new(3, 0),
                RunOptions::default(),
            )
            .unwrap();
            assert_eq!(res.revenue, 0.0, "{kind}");
            assert_eq!(res.accepted, vec![0, 0]);
        }
    }

    #[test]
    fn fr_last_period_uses_one_unit_of_time() {
        let inst = two_class(2.0, 1.0, 50.0);
        let path = sample_path(&inst, 5);
        let res = run_fr(&inst, &path, &mut ThinningStream::new(5, 1)).unwrap();
        for r in &res.resolves {
            assert_eq!(r.time, r.time.floor());
        }
        let trace = res.trace.unwrap();
        let cap_at = |t: f64| {
            trace
                .iter()
                .take_while(|e| e.time < t)
                .last()
                .map_or(50.0, |e| e.remaining[0])
        };
        if let Some(last) = res.resolves.iter().find(|r| r.time == 49.0) {
            assert_eq!(last.rhs[0], cap_at(49.0) / 1.0);
        }
        let first = &res.resolves[0];
        if first.time == 0.0 {
            assert_eq!(first.rhs, vec![1.0]);
        }
    }

    #[test]
    fn capacity_never_negative_and_consumption_matches() {
        let inst = Instance::new(
            300.0,
            vec![1.0; 5],
            vec![10.0, 3.0, 6.0, 1.0, 2.0],
            Matrix::from_rows(&[
                vec![1.0, 0.0, 1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 1.0, 1.0],
                vec![1.0, 1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0, 1.0],
            ])
            .unwrap(),
            vec![300.0; 4],
        )
        .unwrap();
        let path = sample_path(&inst, 77);
        for kind in PolicyKind::ALL {
            let res = run_policy(
                kind,
                &inst,
                &path,
                &mut ThinningStream::new(77, 9),
                RunOptions { trace: true },
            )
            .unwrap();
            let used = inst
                .bom()
                .mul_vec(&res.accepted.iter().map(|&z| z as f64).collect::<Vec<_>>());
            for l in 0..4 {
                assert!(res.remaining[l] >= 0.0);
                assert_eq!(used[l], inst.capacity()[l] - res.remaining[l]);
            }
            for e in res.trace.unwrap() {
                assert!(e.remaining.iter().all(|&c| c >= 0.0));
                assert!((0.0..=1.0).contains(&e.prob));
            }
        }
    }

    #[test]
    fn irt_first_epoch_matches_dlp() {
        let inst = two_class(2.0, 1.0, 5000.0);
        let path = sample_path(&inst, 8);
        let sched = compute_schedule(5000.0).unwrap();
        let res = run_irt(&inst, &path, &mut ThinningStream::new(8, 3), &sched).unwrap();
        let first = &res.resolves[0];
        assert_eq!(first.time, 0.0);
        assert_eq!(first.x, vec![1.0, 0.0]);
        assert_eq!(first.probs, vec![1.0, 0.0]);
        assert!(res.resolves.len() <= sched.num_epochs());
        assert_eq!(res.resolves.last().unwrap().threshold, None);
    }

    #[test]
    fn ir_equals_irt_when_solutions_sit_on_bounds() {
        // Ample capacity: every re-solve returns x = λ, where thresholding is
        // a no-op.
        let inst = two_class(2.0, 3.0, 400.0);
        let path = sample_path(&inst, 21);
        let sched = compute_schedule(400.0).unwrap();
        let irt = run_irt(&inst, &path, &mut ThinningStream::new(21, 0), &sched).unwrap();
        let ir = run_ir(&inst, &path, &mut ThinningStream::new(21, 0), &sched).unwrap();
        assert_eq!(irt.trace, ir.trace);
        assert_eq!(irt.revenue, ir.revenue);
    }

    #[test]
    fn class_mismatch_is_an_error() {
        let inst = two_class(2.0, 1.0, 10.0);
        let path = ArrivalPath::sample(&[1.0], 10.0, 0);
        assert!(matches!(
            run_spa(&inst, &path, &mut ThinningStream::new(0, 0)),
            Err(PolicyError::ClassMismatch {
                path: 1,
                instance: 2
            })
        ));
    }
}
