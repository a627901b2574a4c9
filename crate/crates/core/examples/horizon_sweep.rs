//! Regret of all five policies as the horizon grows, on a degenerate
//! two-class instance, with log-log slope fits.
//!
//! ```text
//! cargo run --release --example horizon_sweep [paths] [out.csv]
//! ```

use nrm_lab::harness::{export_csv, fit_loglog_slope, summarize};
use nrm_lab::{run_experiment, ExperimentSpec, Instance, Matrix, PolicyKind, SweepAxis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let paths: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);
    let out = args.next();

    let template = Instance::new(
        500.0,
        vec![1.0, 1.0],
        vec![2.0, 1.0],
        Matrix::from_rows(&[vec![1.0, 1.0]])?,
        vec![500.0],
    )?;
    let horizons = vec![250.0, 500.0, 1000.0, 2000.0, 4000.0];
    let spec = ExperimentSpec::with_kinds(
        template,
        SweepAxis::Horizon(horizons),
        &PolicyKind::ALL,
        paths,
        11,
    )?;
    let table = run_experiment(&spec, None)?;
    for line in summarize(&table) {
        println!("{line}");
    }
    println!();
    for kind in PolicyKind::ALL {
        match fit_loglog_slope(&table, kind) {
            Ok(fit) => println!(
                "{kind:<4} log-log slope {:+.3} (R² {:.3})",
                fit.slope, fit.r_squared
            ),
            Err(e) => println!("{kind:<4} {e}"),
        }
    }
    if let Some(path) = out {
        export_csv(&table, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
