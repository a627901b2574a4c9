//! Dense primal simplex with bounded variables.
//!
//! Slacks start basic (`x = 0` is feasible since `β ≥ 0`), so no phase one is
//! needed. Nonbasic structural variables sit at their lower bound `0` or upper
//! bound `u_j`; slacks have no upper bound. Entering variables are chosen by
//! the largest reduced cost (lowest index on ties) until a run of degenerate
//! pivots trips the stall counter, after which Bland's rule is used for the
//! rest of the solve.

use super::LpError;
use crate::model::Matrix;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

/// Reusable scratch space; repeated solves of same-sized problems do not
/// allocate.
#[derive(Debug, Default, Clone)]
pub struct SimplexWorkspace {
    rows: usize,
    cols: usize,
    /// `B⁻¹ [A I]`, row-major, `rows × cols`.
    tableau: Vec<f64>,
    reduced: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    value: Vec<f64>,
    upper: Vec<f64>,
    num_structural: usize,
    iterations: usize,
}

impl SimplexWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Structural part of the last solution.
    pub fn x(&self) -> &[f64] {
        &self.value[..self.num_structural]
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    fn load(&mut self, r: &[f64], a: &Matrix, beta: &[f64], u: &[f64]) {
        let n = r.len();
        let m = beta.len();
        let cols = n + m;
        self.rows = m;
        self.cols = cols;
        self.num_structural = n;
        self.iterations = 0;

        self.tableau.clear();
        self.tableau.resize(m * cols, 0.0);
        for i in 0..m {
            let row = &mut self.tableau[i * cols..(i + 1) * cols];
            row[..n].copy_from_slice(a.row(i));
            row[n + i] = 1.0;
        }
        self.reduced.clear();
        self.reduced.extend_from_slice(r);
        self.reduced.resize(cols, 0.0);

        self.basis.clear();
        self.basis.extend(n..cols);
        self.state.clear();
        self.state.resize(n, VarState::AtLower);
        self.state.resize(cols, VarState::Basic);

        self.value.clear();
        self.value.resize(n, 0.0);
        self.value.extend_from_slice(beta);

        self.upper.clear();
        self.upper.extend_from_slice(u);
        self.upper.resize(cols, f64::INFINITY);
    }

    /// Solves `max rᵀx, A x ≤ β, 0 ≤ x ≤ u`; returns the objective value. The
    /// caller guarantees consistent dimensions and nonnegative `β`, `u`.
    pub fn solve(
        &mut self,
        r: &[f64],
        a: &Matrix,
        beta: &[f64],
        u: &[f64],
        tol: f64,
    ) -> Result<f64, LpError> {
        self.load(r, a, beta, u);
        let max_iterations = 50 * (self.cols + 1) + 1000;
        let mut stalled = 0usize;

        loop {
            if self.iterations >= max_iterations {
                return Err(LpError::NumericalFailure {
                    iterations: self.iterations,
                });
            }
            let bland = stalled >= STALL_LIMIT;
            let Some((enter, dir)) = self.choose_entering(tol, bland) else {
                break;
            };
            self.iterations += 1;

            let (step, leave_row) = self.ratio_test(enter, dir, tol);
            if !step.is_finite() {
                // The feasible region is bounded; an unbounded ray means the
                // tableau has lost accuracy.
                return Err(LpError::NumericalFailure {
                    iterations: self.iterations,
                });
            }
            stalled = if step <= tol { stalled + 1 } else { 0 };

            let delta = dir * step;
            let cols = self.cols;
            for i in 0..self.rows {
                let alpha = self.tableau[i * cols + enter];
                if alpha != 0.0 {
                    self.value[self.basis[i]] -= alpha * delta;
                }
            }
            self.value[enter] += delta;

            match leave_row {
                None => {
                    // Bound flip.
                    if dir > 0.0 {
                        self.state[enter] = VarState::AtUpper;
                        self.value[enter] = self.upper[enter];
                    } else {
                        self.state[enter] = VarState::AtLower;
                        self.value[enter] = 0.0;
                    }
                }
                Some((row, to_upper)) => {
                    let leaving = self.basis[row];
                    if to_upper {
                        self.state[leaving] = VarState::AtUpper;
                        self.value[leaving] = self.upper[leaving];
                    } else {
                        self.state[leaving] = VarState::AtLower;
                        self.value[leaving] = 0.0;
                    }
                    self.pivot(row, enter);
                    self.basis[row] = enter;
                    self.state[enter] = VarState::Basic;
                }
            }
        }

        self.polish();
        Ok(r.iter().zip(self.x()).map(|(a, b)| a * b).sum())
    }

    fn choose_entering(&self, tol: f64, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for k in 0..self.cols {
            let d = self.reduced[k];
            let dir = match self.state[k] {
                VarState::AtLower if d > tol => 1.0,
                VarState::AtUpper if d < -tol => -1.0,
                _ => continue,
            };
            if bland {
                return Some((k, dir));
            }
            if d.abs() > best_score {
                best_score = d.abs();
                best = Some((k, dir));
            }
        }
        best
    }

    /// Returns the step length and the blocking row (with whether the
    /// leaving variable exits at its upper bound), or `None` for a bound flip
    /// of the entering variable.
    fn ratio_test(&self, enter: usize, dir: f64, tol: f64) -> (f64, Option<(usize, bool)>) {
        let cols = self.cols;
        let mut best = f64::INFINITY;
        let mut best_row: Option<(usize, bool)> = None;
        for i in 0..self.rows {
            let alpha = dir * self.tableau[i * cols + enter];
            let var = self.basis[i];
            let (ratio, to_upper) = if alpha > tol {
                ((self.value[var].max(0.0)) / alpha, false)
            } else if alpha < -tol && self.upper[var].is_finite() {
                (
                    ((self.upper[var] - self.value[var]).max(0.0)) / -alpha,
                    true,
                )
            } else {
                continue;
            };
            let better = match best_row {
                None => true,
                Some((r, _)) => ratio < best - tol || (ratio <= best + tol && var < self.basis[r]),
            };
            if better {
                best = ratio;
                best_row = Some((i, to_upper));
            }
        }
        let flip = self.upper[enter];
        if flip <= best {
            return (flip, None);
        }
        (best, best_row)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.cols;
        let inv = 1.0 / self.tableau[row * cols + col];
        for v in &mut self.tableau[row * cols..(row + 1) * cols] {
            *v *= inv;
        }
        self.tableau[row * cols + col] = 1.0;
        let (before, rest) = self.tableau.split_at_mut(row * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for other in before
            .chunks_exact_mut(cols)
            .chain(after.chunks_exact_mut(cols))
        {
            let f = other[col];
            if f != 0.0 {
                for (o, p) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * p;
                }
                other[col] = 0.0;
            }
        }
        let f = self.reduced[col];
        if f != 0.0 {
            for (o, p) in self.reduced.iter_mut().zip(prow.iter()) {
                *o -= f * p;
            }
            self.reduced[col] = 0.0;
        }
    }

    /// Snaps round-off just outside (or just inside) a bound onto the bound.
    fn polish(&mut self) {
        const SNAP: f64 = 1e-12;
        for k in 0..self.num_structural {
            let u = self.upper[k];
            let v = &mut self.value[k];
            if *v < SNAP {
                *v = 0.0;
            } else if (*v - u).abs() < SNAP * u.max(1.0) || *v > u {
                *v = u;
            }
        }
    }
}
