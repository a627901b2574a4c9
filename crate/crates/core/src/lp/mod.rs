//! Bounded-variable linear programs of the form
//!
//! ```text
//! maximize  rᵀx   subject to  A x ≤ β,  0 ≤ x ≤ u
//! ```
//!
//! with `A ≥ 0`, `β ≥ 0` and `u ≥ 0`, so `x = 0` is always feasible and the
//! feasible region is a bounded polytope. Every benchmark and every re-solve
//! performed by the admission policies has this shape.

mod simplex;
mod vertex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{capacity_rate, Instance, Matrix};

pub use simplex::SimplexWorkspace;
pub use vertex::{enumerate_vertices_oracle, VertexOptimum, MAX_ORACLE_COLS, MAX_ORACLE_ROWS};

/// Pivot tolerance.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-9;
/// Tolerance for reporting binding rows and variables at a bound.
pub const CLASSIFY_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("lp dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("lp data invalid: {0}")]
    InvalidData(String),
    #[error("simplex failed to converge after {iterations} iterations")]
    NumericalFailure { iterations: usize },
    #[error("vertex enumeration limited to n <= {MAX_ORACLE_COLS}, m <= {MAX_ORACLE_ROWS}; got n={n}, m={m}")]
    TooLarge { n: usize, m: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Matrix,
    pub rhs: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(
        objective: Vec<f64>,
        constraints: Matrix,
        rhs: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, LpError> {
        let p = Self {
            objective,
            constraints,
            rhs,
            upper,
        };
        p.check()?;
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    fn check(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        let m = self.rhs.len();
        if self.upper.len() != n || self.constraints.cols() != n || self.constraints.rows() != m {
            return Err(LpError::DimensionMismatch(format!(
                "objective {n}, upper {}, rhs {m}, constraints {}x{}",
                self.upper.len(),
                self.constraints.rows(),
                self.constraints.cols()
            )));
        }
        let all = self
            .objective
            .iter()
            .chain(&self.rhs)
            .chain(&self.upper)
            .chain((0..m).flat_map(|r| self.constraints.row(r)));
        if all.clone().any(|v| !v.is_finite()) {
            return Err(LpError::InvalidData("non-finite entry".into()));
        }
        if self.rhs.iter().chain(&self.upper).any(|&v| v < 0.0) {
            return Err(LpError::InvalidData(
                "rhs and upper bounds must be nonnegative".into(),
            ));
        }
        if (0..m)
            .flat_map(|r| self.constraints.row(r))
            .any(|&v| v < 0.0)
        {
            return Err(LpError::InvalidData(
                "constraint matrix must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Largest violation of `A x ≤ β` and `0 ≤ x ≤ u`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .constraints
            .mul_vec(x)
            .iter()
            .zip(&self.rhs)
            .map(|(ax, b)| ax - b)
            .fold(0.0_f64, f64::max);
        let bounds = x
            .iter()
            .zip(&self.upper)
            .map(|(&xj, &uj)| (-xj).max(xj - uj))
            .fold(0.0_f64, f64::max);
        rows.max(bounds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundStatus {
    Lower,
    Upper,
    Interior,
}

/// Optimal vertex of an [`LpProblem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub binding_rows: Vec<usize>,
    pub at_bound: Vec<BoundStatus>,
    pub iterations: usize,
}

impl LpSolution {
    fn classify(p: &LpProblem, x: Vec<f64>, iterations: usize) -> Self {
        let objective_value = p.objective.iter().zip(&x).map(|(r, x)| r * x).sum();
        let binding_rows = p
            .constraints
            .mul_vec(&x)
            .iter()
            .zip(&p.rhs)
            .enumerate()
            .filter(|(_, (ax, b))| *b - *ax <= CLASSIFY_TOL)
            .map(|(i, _)| i)
            .collect();
        let at_bound = x
            .iter()
            .zip(&p.upper)
            .map(|(&xj, &uj)| {
                if xj <= CLASSIFY_TOL {
                    BoundStatus::Lower
                } else if xj >= uj - CLASSIFY_TOL {
                    BoundStatus::Upper
                } else {
                    BoundStatus::Interior
                }
            })
            .collect();
        Self {
            x,
            objective_value,
            binding_rows,
            at_bound,
            iterations,
        }
    }
}

/// Solves `p` with the dense bounded-variable simplex.
///
/// The pivot rule is deterministic, so identical inputs always give the same
/// vertex.
pub fn solve_bounded_lp(p: &LpProblem, tol: f64) -> Result<LpSolution, LpError> {
    p.check()?;
    let mut ws = SimplexWorkspace::new();
    ws.solve(&p.objective, &p.constraints, &p.rhs, &p.upper, tol)?;
    Ok(LpSolution::classify(p, ws.x().to_vec(), ws.iterations()))
}

/// The deterministic LP relaxation: `max T rᵀx` s.t. `A x ≤ C/T`, `0 ≤ x ≤ λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DlpSolution {
    pub problem: LpProblem,
    pub solution: LpSolution,
    /// `T` times the per-unit-time objective.
    pub value: f64,
}

pub fn dlp_problem(inst: &Instance) -> LpProblem {
    LpProblem {
        objective: inst.revenue().to_vec(),
        constraints: inst.bom().clone(),
        rhs: capacity_rate(inst).rates().to_vec(),
        upper: inst.lambda().to_vec(),
    }
}

pub fn solve_dlp(inst: &Instance) -> Result<DlpSolution, LpError> {
    let problem = dlp_problem(inst);
    let solution = solve_bounded_lp(&problem, DEFAULT_PIVOT_TOL)?;
    let value = inst.horizon() * solution.objective_value;
    Ok(DlpSolution {
        problem,
        solution,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(r: &[f64], a: &[Vec<f64>], beta: &[f64], u: &[f64]) -> LpProblem {
        LpProblem::new(
            r.to_vec(),
            Matrix::from_rows(a).unwrap(),
            beta.to_vec(),
            u.to_vec(),
        )
        .unwrap()
    }

    fn multi_resource() -> LpProblem {
        lp(
            &[10.0, 3.0, 6.0, 1.0, 2.0],
            &[
                vec![1.0, 0.0, 1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 1.0, 1.0],
                vec![1.0, 1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0, 1.0],
            ],
            &[1.0; 4],
            &[1.0; 5],
        )
    }

    #[test]
    fn two_class_lp() {
        let sol = solve_bounded_lp(
            &lp(&[2.0, 1.0], &[vec![1.0, 1.0]], &[1.0], &[1.0, 1.0]),
            1e-9,
        )
        .unwrap();
        assert_eq!(sol.x, vec![1.0, 0.0]);
        assert_eq!(sol.objective_value, 2.0);
        assert_eq!(sol.binding_rows, vec![0]);
        assert_eq!(sol.at_bound, vec![BoundStatus::Upper, BoundStatus::Lower]);
    }

    #[test]
    fn multi_resource_lp() {
        let p = multi_resource();
        let sol = solve_bounded_lp(&p, 1e-9).unwrap();
        assert_eq!(sol.x, vec![1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!((sol.objective_value - 12.0).abs() < 1e-12);
        let oracle = enumerate_vertices_oracle(&p).unwrap();
        assert!((oracle.value - 12.0).abs() < 1e-9);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let sol = solve_bounded_lp(
            &lp(&[2.0, 1.0], &[vec![1.0, 1.0]], &[0.0], &[1.0, 1.0]),
            1e-9,
        )
        .unwrap();
        assert_eq!(sol.x, vec![0.0, 0.0]);
        assert_eq!(sol.objective_value, 0.0);
    }

    #[test]
    fn interior_variable_when_resource_binds() {
        let sol = solve_bounded_lp(
            &lp(&[2.0, 1.0], &[vec![1.0, 1.0]], &[1.5], &[1.0, 1.0]),
            1e-9,
        )
        .unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-12 && (sol.x[1] - 0.5).abs() < 1e-12);
        assert_eq!(sol.at_bound[1], BoundStatus::Interior);
    }

    #[test]
    fn rejects_bad_data() {
        let bad = LpProblem::new(
            vec![1.0],
            Matrix::from_rows(&[vec![1.0]]).unwrap(),
            vec![-1.0],
            vec![1.0],
        );
        assert!(matches!(bad, Err(LpError::InvalidData(_))));
        let bad = LpProblem::new(
            vec![1.0, 2.0],
            Matrix::from_rows(&[vec![1.0]]).unwrap(),
            vec![1.0],
            vec![1.0],
        );
        assert!(matches!(bad, Err(LpError::DimensionMismatch(_))));
    }

    #[test]
    fn dlp_value_scales_with_horizon() {
        let inst = Instance::new(
            1000.0,
            vec![1.0, 1.0],
            vec![2.0, 1.0],
            Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap(),
            vec![1000.0],
        )
        .unwrap();
        assert!((solve_dlp(&inst).unwrap().value - 2000.0).abs() < 1e-9);
        let empty = inst.with_horizon_and_capacity(1000.0, vec![0.0]).unwrap();
        assert_eq!(solve_dlp(&empty).unwrap().value, 0.0);
    }

    #[test]
    fn solution_json_dump_round_trips() {
        let p = multi_resource();
        let sol = solve_bounded_lp(&p, 1e-9).unwrap();
        let text = serde_json::to_string(&(&p, &sol)).unwrap();
        let (p2, sol2): (LpProblem, LpSolution) = serde_json::from_str(&text).unwrap();
        assert_eq!((p, sol), (p2, sol2));
    }
}
