//! Solves the fluid LP of the bundled instances and classifies each
//! solution as degenerate or not, then cross-checks the simplex against
//! brute-force vertex enumeration.
//!
//! ```text
//! cargo run --release --example dlp_and_degeneracy
//! ```

use nrm_lab::lp::{dlp_problem, enumerate_vertices_oracle};
use nrm_lab::model::DEFAULT_DEGENERACY_TOL;
use nrm_lab::{is_nondegenerate, solve_dlp, Instance, Matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let two_class = Instance::new(
        1000.0,
        vec![1.0, 1.0],
        vec![2.0, 1.0],
        Matrix::from_rows(&[vec![1.0, 1.0]])?,
        vec![1000.0],
    )?;
    for b in [0.5, 1.0, 1.5, 2.0] {
        let inst = two_class.with_uniform_capacity_rate(b)?;
        let dlp = solve_dlp(&inst)?;
        let report = is_nondegenerate(&inst, &dlp.solution, DEFAULT_DEGENERACY_TOL)?;
        println!(
            "two-class b={b:<4} v_dlp={:<8} x*={:?}  {report}",
            dlp.value, dlp.solution.x
        );
    }

    let network = Instance::new(
        1000.0,
        vec![1.0; 5],
        vec![10.0, 3.0, 6.0, 1.0, 2.0],
        Matrix::from_rows(&[
            vec![1.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0],
        ])?,
        vec![1000.0; 4],
    )?;
    let dlp = solve_dlp(&network)?;
    let report = is_nondegenerate(&network, &dlp.solution, DEFAULT_DEGENERACY_TOL)?;
    println!(
        "network    v_dlp={} x*={:?}  {report}",
        dlp.value, dlp.solution.x
    );
    println!(
        "           binding rows {:?}, {} simplex iterations",
        dlp.solution.binding_rows, dlp.solution.iterations
    );

    let oracle = enumerate_vertices_oracle(&dlp_problem(&network))?;
    println!(
        "vertex enumeration: best of {} feasible vertices has value {} (x T = {})",
        oracle.feasible_vertices,
        oracle.value,
        oracle.value * network.horizon()
    );
    Ok(())
}
