//! The bounds every policy is measured against: the fluid value, the
//! estimated hindsight value, and in the single-class case the exact
//! optimum, whose gap to the fluid value grows like √T.
//!
//! ```text
//! cargo run --release --example hindsight_bounds
//! ```

use nrm_lab::oracle::{estimate_v_ho, single_class_exact_optimum};
use nrm_lab::rng::path_seed;
use nrm_lab::{solve_dlp, Instance, Matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("single class, λ = 1, C = T:");
    println!(
        "{:>6} {:>10} {:>12} {:>10} {:>14}",
        "T", "v_dlp", "exact", "gap", "0.1587√T-0.47"
    );
    for t in [10.0, 100.0, 1000.0, 10_000.0] {
        let exact = single_class_exact_optimum(1.0, 1.0, t, t)?;
        println!(
            "{t:>6} {t:>10} {exact:>12.4} {:>10.4} {:>14.4}",
            t - exact,
            0.1587 * f64::sqrt(t) - 0.4748
        );
    }

    println!("\ntwo classes, r = (2, 1), 1000 paths:");
    for b in [0.5, 1.0, 1.5] {
        let horizon = 1000.0;
        let inst = Instance::new(
            horizon,
            vec![1.0, 1.0],
            vec![2.0, 1.0],
            Matrix::from_rows(&[vec![1.0, 1.0]])?,
            vec![b * horizon],
        )?;
        let seeds: Vec<u64> = (0..1000).map(|i| path_seed(2024, 0, i)).collect();
        let v_ho = estimate_v_ho(&inst, &seeds)?;
        let v_dlp = solve_dlp(&inst)?.value;
        println!(
            "  b = {b}: v_dlp = {v_dlp:.1}, v_ho ≈ {:.2} ± {:.2}, gap {:.2}",
            v_ho.mean,
            v_ho.std_err,
            v_dlp - v_ho.mean
        );
    }
    Ok(())
}
