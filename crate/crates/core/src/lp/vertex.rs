//! Brute-force optimum over all basic points of a small bounded LP. Used as
//! an independent check on the simplex; shares no code with it.

use super::{LpError, LpProblem};

pub const MAX_ORACLE_COLS: usize = 6;
pub const MAX_ORACLE_ROWS: usize = 4;

const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexOptimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Number of feasible basic points visited.
    pub feasible_vertices: usize,
}

/// Candidate active constraint: a resource row at equality, or a variable at
/// one of its bounds.
#[derive(Debug, Clone, Copy)]
enum Active {
    Row(usize),
    Lower(usize),
    Upper(usize),
}

pub fn enumerate_vertices_oracle(p: &LpProblem) -> Result<VertexOptimum, LpError> {
    let n = p.num_vars();
    let m = p.num_rows();
    if n > MAX_ORACLE_COLS || m > MAX_ORACLE_ROWS {
        return Err(LpError::TooLarge { n, m });
    }
    let candidates: Vec<Active> = (0..m)
        .map(Active::Row)
        .chain((0..n).map(Active::Lower))
        .chain((0..n).map(Active::Upper))
        .collect();

    let mut best = VertexOptimum {
        x: vec![0.0; n],
        value: 0.0,
        feasible_vertices: 0,
    };
    if n == 0 {
        best.feasible_vertices = 1;
        return Ok(best);
    }
    let mut found = false;
    for_each_combination(candidates.len(), n, |pick| {
        let mut mat = vec![vec![0.0; n + 1]; n];
        for (eq, &c) in mat.iter_mut().zip(pick) {
            match candidates[c] {
                Active::Row(l) => {
                    eq[..n].copy_from_slice(p.constraints.row(l));
                    eq[n] = p.rhs[l];
                }
                Active::Lower(j) => eq[j] = 1.0,
                Active::Upper(j) => {
                    eq[j] = 1.0;
                    eq[n] = p.upper[j];
                }
            }
        }
        let Some(x) = gauss_solve(mat) else { return };
        if p.max_violation(&x) > FEAS_TOL {
            return;
        }
        best.feasible_vertices += 1;
        let value: f64 = p.objective.iter().zip(&x).map(|(r, x)| r * x).sum();
        if !found || value > best.value {
            found = true;
            best.value = value;
            best.x = x;
        }
    });
    Ok(best)
}

/// Calls `f` with every `k`-subset of `0..len` in lexicographic order.
fn for_each_combination(len: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + len - k) else {
            return;
        };
        idx[i] += 1;
        for t in i + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Gaussian elimination with partial pivoting on an augmented `n × (n+1)`
/// system. `None` when singular.
fn gauss_solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}
