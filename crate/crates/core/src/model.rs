//! Problem data for quantity-based network revenue management.
//!
//! An [`Instance`] describes `n` customer classes arriving as independent
//! Poisson processes over `[0, T]` and competing for `m` resources. Accepting
//! a class-`j` customer earns `r_j` and consumes `a_lj` units of resource `l`
//! (the bill-of-materials matrix). In the airline reading the entries of the
//! matrix are integers (seats per leg); the model accepts any nonnegative
//! reals.
//!
//! Instances are validated once and are immutable afterwards, so they can be
//! shared freely between simulation workers.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::lp::LpSolution;

/// Absolute tolerance used when classifying a DLP solution as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("arrival rate of class {class} must be positive, got {value}")]
    NonpositiveRate { class: usize, value: f64 },
    #[error("revenue of class {class} must be positive, got {value}")]
    NonpositiveRevenue { class: usize, value: f64 },
    #[error("capacity of resource {resource} must be nonnegative, got {value}")]
    NegativeCapacity { resource: usize, value: f64 },
    #[error("consumption a[{resource}][{class}] must be nonnegative, got {value}")]
    NegativeConsumption {
        resource: usize,
        class: usize,
        value: f64,
    },
    #[error("class {class} consumes no resource (all-zero column)")]
    ZeroColumn { class: usize },
    #[error("horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("non-finite value in `{0}`")]
    NonFinite(&'static str),
    #[error("solution has {got} entries but the instance has {expected} classes")]
    SolutionInstanceMismatch { expected: usize, got: usize },
    #[error("instance json: key `{key}`: {message}")]
    Parse { key: String, message: String },
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, ModelError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(ModelError::DimensionMismatch(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Unvalidated instance record, the shape of the JSON instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawInstance {
    pub horizon: f64,
    pub lambda: Vec<f64>,
    pub revenue: Vec<f64>,
    /// Row-major: `bom[l][j]` is the consumption of resource `l` by class `j`.
    pub bom: Vec<Vec<f64>>,
    pub capacity: Vec<f64>,
}

impl RawInstance {
    /// Parses the JSON instance schema. Errors name the offending key.
    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let value: Value = serde_json::from_str(text).map_err(|e| ModelError::Parse {
            key: "<document>".into(),
            message: e.to_string(),
        })?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self, ModelError> {
        let obj = value.as_object().ok_or_else(|| ModelError::Parse {
            key: "<document>".into(),
            message: "expected a JSON object".into(),
        })?;
        const KEYS: [&str; 5] = ["horizon", "lambda", "revenue", "bom", "capacity"];
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ModelError::Parse {
                key: k.clone(),
                message: format!("unknown key, expected one of {KEYS:?}"),
            });
        }
        Ok(Self {
            horizon: field(obj, "horizon")?,
            lambda: field(obj, "lambda")?,
            revenue: field(obj, "revenue")?,
            bom: field(obj, "bom")?,
            capacity: field(obj, "capacity")?,
        })
    }
}

fn field<T: serde::de::DeserializeOwned>(
    obj: &Map<String, Value>,
    key: &str,
) -> Result<T, ModelError> {
    let v = obj.get(key).ok_or_else(|| ModelError::Parse {
        key: key.into(),
        message: "missing".into(),
    })?;
    T::deserialize(v).map_err(|e| ModelError::Parse {
        key: key.into(),
        message: e.to_string(),
    })
}

/// A validated network revenue management instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    horizon: f64,
    lambda: Vec<f64>,
    revenue: Vec<f64>,
    bom: Matrix,
    capacity: Vec<f64>,
}

impl Instance {
    pub fn new(
        horizon: f64,
        lambda: Vec<f64>,
        revenue: Vec<f64>,
        bom: Matrix,
        capacity: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let n = lambda.len();
        let m = capacity.len();
        if n == 0 || m == 0 {
            return Err(ModelError::DimensionMismatch(format!(
                "need at least one class and one resource, got n={n}, m={m}"
            )));
        }
        if revenue.len() != n {
            return Err(ModelError::DimensionMismatch(format!(
                "revenue has {} entries, lambda has {n}",
                revenue.len()
            )));
        }
        if bom.rows() != m || bom.cols() != n {
            return Err(ModelError::DimensionMismatch(format!(
                "bom is {}x{}, expected {m}x{n}",
                bom.rows(),
                bom.cols()
            )));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(ModelError::InvalidHorizon(horizon));
        }
        for (name, vals) in [
            ("lambda", &lambda),
            ("revenue", &revenue),
            ("capacity", &capacity),
        ] {
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::NonFinite(name));
            }
        }
        if bom.data.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite("bom"));
        }
        if let Some((class, &value)) = lambda.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(ModelError::NonpositiveRate { class, value });
        }
        if let Some((class, &value)) = revenue.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(ModelError::NonpositiveRevenue { class, value });
        }
        if let Some((resource, &value)) = capacity.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(ModelError::NegativeCapacity { resource, value });
        }
        for l in 0..m {
            for j in 0..n {
                let value = bom.get(l, j);
                if value < 0.0 {
                    return Err(ModelError::NegativeConsumption {
                        resource: l,
                        class: j,
                        value,
                    });
                }
            }
        }
        if let Some(class) = (0..n).find(|&j| bom.column(j).all(|a| a == 0.0)) {
            return Err(ModelError::ZeroColumn { class });
        }
        Ok(Self {
            horizon,
            lambda,
            revenue,
            bom,
            capacity,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        validate_instance(RawInstance::from_json_str(text)?)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
    pub fn num_classes(&self) -> usize {
        self.lambda.len()
    }
    pub fn num_resources(&self) -> usize {
        self.capacity.len()
    }
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }
    pub fn revenue(&self) -> &[f64] {
        &self.revenue
    }
    pub fn bom(&self) -> &Matrix {
        &self.bom
    }
    pub fn capacity(&self) -> &[f64] {
        &self.capacity
    }

    /// Same demand and prices over a different horizon and capacity vector.
    pub fn with_horizon_and_capacity(
        &self,
        horizon: f64,
        capacity: Vec<f64>,
    ) -> Result<Self, ModelError> {
        Self::new(
            horizon,
            self.lambda.clone(),
            self.revenue.clone(),
            self.bom.clone(),
            capacity,
        )
    }

    /// Rescales the horizon, keeping the capacity rate `C / T` fixed.
    pub fn scaled_to_horizon(&self, horizon: f64) -> Result<Self, ModelError> {
        let b = capacity_rate(self);
        self.with_horizon_and_capacity(horizon, b.rates().iter().map(|r| r * horizon).collect())
    }

    /// Every resource gets capacity `rate * T`.
    pub fn with_uniform_capacity_rate(&self, rate: f64) -> Result<Self, ModelError> {
        let capacity = vec![rate * self.horizon; self.num_resources()];
        self.with_horizon_and_capacity(self.horizon, capacity)
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            horizon: self.horizon,
            lambda: self.lambda.clone(),
            revenue: self.revenue.clone(),
            bom: self.bom.to_rows(),
            capacity: self.capacity.clone(),
        }
    }
}

pub fn validate_instance(raw: RawInstance) -> Result<Instance, ModelError> {
    let bom = Matrix::from_rows(&raw.bom)?;
    // An empty bom has zero columns whatever n is; report it against n.
    if raw.bom.is_empty() && !raw.lambda.is_empty() {
        return Err(ModelError::DimensionMismatch(format!(
            "bom has no rows, expected {}",
            raw.capacity.len()
        )));
    }
    Instance::new(raw.horizon, raw.lambda, raw.revenue, bom, raw.capacity)
}

/// Capacity available per unit time, `b_l = C_l / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRate(Vec<f64>);

impl CapacityRate {
    pub fn rates(&self) -> &[f64] {
        &self.0
    }
}

pub fn capacity_rate(inst: &Instance) -> CapacityRate {
    CapacityRate(inst.capacity.iter().map(|c| c / inst.horizon).collect())
}

/// Count breakdown of the nondegeneracy condition for a DLP solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegeneracyReport {
    /// Classes with `x_j` at 0 or at `lambda_j`.
    pub at_bound: usize,
    /// Resources whose constraint holds with equality.
    pub binding: usize,
    pub num_classes: usize,
}

impl DegeneracyReport {
    pub fn is_nondegenerate(&self) -> bool {
        self.at_bound + self.binding == self.num_classes
    }
}

impl fmt::Display for DegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.at_bound + self.binding;
        let n = self.num_classes;
        let (verdict, rel) = match total.cmp(&n) {
            std::cmp::Ordering::Equal => ("nondegenerate", "="),
            std::cmp::Ordering::Greater => ("degenerate", ">"),
            std::cmp::Ordering::Less => ("degenerate", "<"),
        };
        write!(
            f,
            "{verdict} (counts {}+{}={total} {rel} n={n})",
            self.at_bound, self.binding
        )
    }
}

/// Classifies a DLP solution: nondegenerate iff the number of variables at a
/// bound plus the number of binding resource rows equals `n`.
pub fn is_nondegenerate(
    inst: &Instance,
    sol: &LpSolution,
    tol: f64,
) -> Result<DegeneracyReport, ModelError> {
    let n = inst.num_classes();
    let x = &sol.x;
    if x.len() != n {
        return Err(ModelError::SolutionInstanceMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let at_bound = x
        .iter()
        .zip(&inst.lambda)
        .filter(|(&xj, &lj)| xj <= tol || xj >= lj - tol)
        .count();
    let b = capacity_rate(inst);
    let binding = inst
        .bom
        .mul_vec(x)
        .iter()
        .zip(b.rates())
        .filter(|(ax, bl)| (*ax - *bl).abs() <= tol)
        .count();
    Ok(DegeneracyReport {
        at_bound,
        binding,
        num_classes: n,
    })
}
