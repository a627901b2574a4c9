//! Upper bounds and exact references for policy revenue.
//!
//! * [`hindsight_optimum`]: the offline LP that knows every class's total
//!   arrivals on a path. Any policy's accepted counts are feasible for it, so
//!   it dominates every policy path by path.
//! * [`estimate_v_ho`]: Monte Carlo mean of the hindsight value.
//! * [`single_class_exact_optimum`]: for one class on one resource with unit
//!   consumption, accepting everyone while capacity lasts is optimal and earns
//!   `r · E[min(Λ(T), C)]`, computed here by summing Poisson probabilities.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::arrivals::{sample_path, ArrivalPath};
use crate::lp::{LpError, SimplexWorkspace, DEFAULT_PIVOT_TOL};
use crate::model::Instance;
use crate::stats::Estimate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("need at least two paths, got {0}")]
    TooFewPaths(usize),
    #[error("path has {path} classes but the instance has {instance}")]
    ClassMismatch { path: usize, instance: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HindsightSolution {
    pub value: f64,
    /// Continuous (LP) acceptance quantities.
    pub z: Vec<f64>,
}

/// `max rᵀz` s.t. `A z ≤ C`, `0 ≤ z ≤ Λ(T)`.
pub fn hindsight_optimum(
    inst: &Instance,
    path: &ArrivalPath,
) -> Result<HindsightSolution, OracleError> {
    if path.num_classes() != inst.num_classes() {
        return Err(OracleError::ClassMismatch {
            path: path.num_classes(),
            instance: inst.num_classes(),
        });
    }
    let mut ws = SimplexWorkspace::new();
    let value = hindsight_value(&mut ws, inst, &path.totals())?;
    Ok(HindsightSolution {
        value,
        z: ws.x().to_vec(),
    })
}

/// Hindsight value from realized totals, reusing `ws`. The solution is left
/// in `ws.x()`.
pub fn hindsight_value(
    ws: &mut SimplexWorkspace,
    inst: &Instance,
    totals: &[f64],
) -> Result<f64, LpError> {
    ws.solve(
        inst.revenue(),
        inst.bom(),
        inst.capacity(),
        totals,
        DEFAULT_PIVOT_TOL,
    )
}

/// Mean hindsight value over one path per seed.
pub fn estimate_v_ho(inst: &Instance, seeds: &[u64]) -> Result<Estimate, OracleError> {
    if seeds.len() < 2 {
        return Err(OracleError::TooFewPaths(seeds.len()));
    }
    let mut ws = SimplexWorkspace::new();
    let values = seeds
        .iter()
        .map(|&s| hindsight_value(&mut ws, inst, &sample_path(inst, s).totals()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Estimate::from_samples(&values))
}

/// Remaining Poisson lower-tail mass below which the sum stops.
const CDF_CUTOFF: f64 = 1e-12;

/// `r · E[min(Λ, C)]` for `Λ ~ Poisson(λT)`.
pub fn single_class_exact_optimum(
    lambda: f64,
    revenue: f64,
    capacity: f64,
    horizon: f64,
) -> Result<f64, OracleError> {
    let bad = |what: &str| Err(OracleError::ParameterOutOfRange(what.to_string()));
    if !(lambda > 0.0) || !lambda.is_finite() {
        return bad("rate must be positive and finite");
    }
    if !(revenue > 0.0) || !revenue.is_finite() {
        return bad("revenue must be positive and finite");
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return bad("horizon must be nonnegative and finite");
    }
    if !(capacity >= 0.0) {
        return bad("capacity must be nonnegative");
    }
    let mean = lambda * horizon;
    if capacity == 0.0 || mean == 0.0 {
        return Ok(0.0);
    }
    // Mass above C is negligible: the capacity never binds.
    if capacity > mean + 30.0 * mean.sqrt() + 30.0 {
        return Ok(revenue * mean);
    }

    // E[min(Λ, C)] = C - E[(C - Λ)⁺], summing k = ⌊C⌋ down to 0 with
    // p_{k-1} = p_k · k / mean.
    let top = capacity.floor();
    let mut p = (-mean + top * mean.ln() - ln_gamma(top + 1.0)).exp();
    let mut shortfall = 0.0;
    let mut k = top;
    loop {
        shortfall += (capacity - k) * p;
        if k == 0.0 {
            break;
        }
        let ratio = k / mean;
        p *= ratio;
        k -= 1.0;
        // Below the mode the pmf decays at least geometrically, so the mass
        // still to be summed is at most p / (1 - ratio).
        if ratio < 1.0 && p / (1.0 - ratio) < CDF_CUTOFF {
            break;
        }
    }
    Ok(revenue * (capacity - shortfall))
}
