use std::io::Write;
use std::path::Path;

use super::HarnessError;
use crate::policies::{PolicyKind, PolicySpec};
use crate::stats::{fit_line, Estimate};

pub const CSV_HEADER: [&str; 7] = [
    "sweep",
    "policy",
    "mean_regret",
    "stderr",
    "n_paths",
    "v_dlp",
    "v_ho_hat",
];

/// One path of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PathOutcome {
    pub seed: u64,
    pub v_ho: f64,
    /// In the order of [`RegretTable::policies`].
    pub revenues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretRow {
    pub kind: PolicyKind,
    /// Paired `V^HO - V^π`.
    pub regret: Estimate,
    pub revenue: Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub value: f64,
    pub v_dlp: f64,
    pub v_ho: Estimate,
    pub rows: Vec<RegretRow>,
    pub outcomes: Vec<PathOutcome>,
}

impl SweepResult {
    pub(super) fn from_outcomes(
        value: f64,
        v_dlp: f64,
        policies: &[PolicySpec],
        outcomes: Vec<PathOutcome>,
    ) -> Self {
        let v_ho = Estimate::from_samples(&outcomes.iter().map(|o| o.v_ho).collect::<Vec<_>>());
        let rows = policies
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let revenue: Vec<f64> = outcomes.iter().map(|o| o.revenues[i]).collect();
                let regret: Vec<f64> = outcomes.iter().map(|o| o.v_ho - o.revenues[i]).collect();
                RegretRow {
                    kind: p.kind,
                    regret: Estimate::from_samples(&regret),
                    revenue: Estimate::from_samples(&revenue),
                }
            })
            .collect();
        Self {
            value,
            v_dlp,
            v_ho,
            rows,
            outcomes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTable {
    pub policies: Vec<PolicySpec>,
    pub sweeps: Vec<SweepResult>,
}

impl RegretTable {
    pub fn policy_index(&self, kind: PolicyKind) -> Result<usize, HarnessError> {
        self.policies
            .iter()
            .position(|p| p.kind == kind)
            .ok_or(HarnessError::MissingPolicy(kind))
    }

    pub fn regret(&self, sweep: usize, kind: PolicyKind) -> Result<Estimate, HarnessError> {
        Ok(self.sweeps[sweep].rows[self.policy_index(kind)?].regret)
    }

    /// `(sweep value, regret)` for one policy across the sweep.
    pub fn regret_series(&self, kind: PolicyKind) -> Result<Vec<(f64, Estimate)>, HarnessError> {
        let i = self.policy_index(kind)?;
        Ok(self
            .sweeps
            .iter()
            .map(|s| (s.value, s.rows[i].regret))
            .collect())
    }

    /// Paired estimate of `regret(a) - regret(b)`, i.e. `V^b - V^a` per path.
    pub fn regret_difference(
        &self,
        sweep: usize,
        a: PolicyKind,
        b: PolicyKind,
    ) -> Result<Estimate, HarnessError> {
        let (ia, ib) = (self.policy_index(a)?, self.policy_index(b)?);
        let diffs: Vec<f64> = self.sweeps[sweep]
            .outcomes
            .iter()
            .map(|o| o.revenues[ib] - o.revenues[ia])
            .collect();
        Ok(Estimate::from_samples(&diffs))
    }

    pub fn sweep_index(&self, value: f64) -> Option<usize> {
        self.sweeps
            .iter()
            .position(|s| (s.value - value).abs() <= 1e-9 * value.abs().max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Sweep values dropped because their mean regret was not positive.
    pub excluded: Vec<f64>,
}

/// Least-squares slope of `ln(mean regret)` against `ln(sweep value)`.
pub fn fit_loglog_slope(table: &RegretTable, kind: PolicyKind) -> Result<SlopeFit, HarnessError> {
    let series = table.regret_series(kind)?;
    let (pos, neg): (Vec<_>, Vec<_>) = series.iter().partition(|(_, e)| e.mean > 0.0);
    let excluded: Vec<f64> = neg.iter().map(|(v, _)| *v).collect();
    let points: Vec<(f64, f64)> = pos.iter().map(|(v, e)| (v.ln(), e.mean.ln())).collect();
    if points.len() < 4 {
        return Err(HarnessError::NonpositiveRegret {
            usable: points.len(),
            excluded,
        });
    }
    let fit = fit_line(&points).ok_or_else(|| HarnessError::NonpositiveRegret {
        usable: points.len(),
        excluded: excluded.clone(),
    })?;
    Ok(SlopeFit {
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        excluded,
    })
}

/// One row per `(sweep, policy)`, header [`CSV_HEADER`]. Numbers use the
/// shortest round-trip representation, so output is byte-stable.
pub fn export_csv(table: &RegretTable, w: impl Write) -> Result<(), HarnessError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for s in &table.sweeps {
        for row in &s.rows {
            out.write_record([
                s.value.to_string(),
                row.kind.name().to_string(),
                row.regret.mean.to_string(),
                row.regret.std_err.to_string(),
                row.regret.n.to_string(),
                s.v_dlp.to_string(),
                s.v_ho.mean.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv(table: &RegretTable, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path)?;
    export_csv(table, std::io::BufWriter::new(file))
}
