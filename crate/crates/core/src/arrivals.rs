//! Poisson arrival sample paths.

use std::io::{BufRead, Write};

use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Instance;
use crate::rng::arrival_rng;

#[derive(Debug, Error)]
pub enum ArrivalError {
    #[error("window ({t1}, {t2}] is not inside [0, {horizon}]")]
    WindowOutOfRange { t1: f64, t2: f64, horizon: f64 },
    #[error("class {class} out of range for {num_classes} classes")]
    ClassOutOfRange { class: usize, num_classes: usize },
    #[error("event time {time} outside [0, {horizon}]")]
    TimeOutOfRange { time: f64, horizon: f64 },
    #[error("path dump line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One arrival in the merged, time-ordered stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergedEvent {
    pub time: f64,
    pub class: usize,
}

/// Realized arrival times for every class over `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalPath {
    horizon: f64,
    seed: u64,
    times: Vec<Vec<f64>>,
}

impl ArrivalPath {
    /// Class `j` events are partial sums of `Exp(rates[j])` gaps, stopping at
    /// the first sum past `horizon`. Each class has its own substream of
    /// `seed`.
    pub fn sample(rates: &[f64], horizon: f64, seed: u64) -> Self {
        let times = rates
            .iter()
            .enumerate()
            .map(|(j, &rate)| {
                let mut out = Vec::with_capacity((rate * horizon * 1.1) as usize + 16);
                if horizon <= 0.0 {
                    return out;
                }
                let mut rng = arrival_rng(seed, j);
                let gap = Exp::new(rate).expect("rates are validated positive");
                let mut t = 0.0;
                loop {
                    let dt: f64 = gap.sample(&mut rng);
                    // Zero gaps would duplicate a time; they have probability
                    // zero but are skipped so times stay strictly increasing.
                    if dt <= 0.0 {
                        continue;
                    }
                    t += dt;
                    if t > horizon {
                        break;
                    }
                    out.push(t);
                }
                out
            })
            .collect();
        Self {
            horizon,
            seed,
            times,
        }
    }

    /// Builds a path from explicit events, e.g. a replayed dump.
    pub fn from_events(
        num_classes: usize,
        horizon: f64,
        seed: u64,
        events: impl IntoIterator<Item = MergedEvent>,
    ) -> Result<Self, ArrivalError> {
        let mut times = vec![Vec::new(); num_classes];
        for e in events {
            if e.class >= num_classes {
                return Err(ArrivalError::ClassOutOfRange {
                    class: e.class,
                    num_classes,
                });
            }
            if !(0.0..=horizon).contains(&e.time) {
                return Err(ArrivalError::TimeOutOfRange {
                    time: e.time,
                    horizon,
                });
            }
            times[e.class].push(e.time);
        }
        for t in &mut times {
            t.sort_by(f64::total_cmp);
        }
        Ok(Self {
            horizon,
            seed,
            times,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_classes(&self) -> usize {
        self.times.len()
    }

    pub fn class_times(&self, class: usize) -> &[f64] {
        &self.times[class]
    }

    /// `Λ_j(T)` for every class.
    pub fn totals(&self) -> Vec<f64> {
        self.times.iter().map(|t| t.len() as f64).collect()
    }

    pub fn len(&self) -> usize {
        self.times.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of class-`j` arrivals in `(t1, t2]`.
    pub fn count_in_window(&self, class: usize, t1: f64, t2: f64) -> Result<usize, ArrivalError> {
        if class >= self.num_classes() {
            return Err(ArrivalError::ClassOutOfRange {
                class,
                num_classes: self.num_classes(),
            });
        }
        if !(0.0 <= t1 && t1 <= t2 && t2 <= self.horizon) {
            return Err(ArrivalError::WindowOutOfRange {
                t1,
                t2,
                horizon: self.horizon,
            });
        }
        let times = &self.times[class];
        let upto = |t: f64| times.partition_point(|&s| s <= t);
        Ok(upto(t2) - upto(t1))
    }

    /// Time-ordered stream over all classes; equal times go in class order.
    pub fn merge_events(&self) -> Vec<MergedEvent> {
        let mut out = Vec::with_capacity(self.len());
        let mut heads = vec![0usize; self.times.len()];
        loop {
            let mut next: Option<(usize, f64)> = None;
            for (j, times) in self.times.iter().enumerate() {
                if let Some(&t) = times.get(heads[j]) {
                    if next.is_none_or(|(_, best)| t < best) {
                        next = Some((j, t));
                    }
                }
            }
            let Some((class, time)) = next else { break };
            heads[class] += 1;
            out.push(MergedEvent { time, class });
        }
        out
    }

    /// One JSON object per line: `{"time":…,"class":…}`.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<(), ArrivalError> {
        for e in self.merge_events() {
            serde_json::to_writer(&mut w, &e).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl(
        r: impl BufRead,
        num_classes: usize,
        horizon: f64,
        seed: u64,
    ) -> Result<Self, ArrivalError> {
        let mut events = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let e: MergedEvent = serde_json::from_str(&line).map_err(|e| ArrivalError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            events.push(e);
        }
        Self::from_events(num_classes, horizon, seed, events)
    }
}

pub fn sample_path(inst: &Instance, seed: u64) -> ArrivalPath {
    ArrivalPath::sample(inst.lambda(), inst.horizon(), seed)
}
