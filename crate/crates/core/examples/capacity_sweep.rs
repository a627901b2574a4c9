//! Regret of FR and IRT at a fixed horizon as the capacity rate `b` moves
//! through the degenerate point `b = 1`.
//!
//! ```text
//! cargo run --release --example capacity_sweep [paths]
//! ```

use nrm_lab::{run_experiment, ExperimentSpec, Instance, Matrix, PolicyKind, SweepAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(200);
    let horizon = 2000.0;
    let template = Instance::new(
        horizon,
        vec![1.0, 1.0],
        vec![2.0, 1.0],
        Matrix::from_rows(&[vec![1.0, 1.0]])?,
        vec![horizon],
    )?;
    let rates: Vec<f64> = (0..=12).map(|k| 0.7 + 0.05 * k as f64).collect();
    let spec = ExperimentSpec::with_kinds(
        template,
        SweepAxis::CapacityRate(rates),
        &[PolicyKind::Fr, PolicyKind::Irt],
        paths,
        5,
    )?;
    let table = run_experiment(&spec, None)?;
    println!("{:>5} {:>16} {:>16}", "b", "FR regret", "IRT regret");
    for (i, s) in table.sweeps.iter().enumerate() {
        let fr = table.regret(i, PolicyKind::Fr)?;
        let irt = table.regret(i, PolicyKind::Irt)?;
        println!(
            "{:>5.2} {:>9.3} ± {:<5.3} {:>9.3} ± {:<5.3}",
            s.value, fr.mean, fr.std_err, irt.mean, irt.std_err
        );
    }
    Ok(())
}
