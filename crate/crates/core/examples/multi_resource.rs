//! A small airline-style network: five itineraries over four legs. Loads
//! the bundled fixture, reports the fluid solution and runs a short regret
//! experiment for all policies.
//!
//! ```text
//! cargo run --release --example multi_resource [paths]
//! ```

use nrm_lab::harness::summarize;
use nrm_lab::model::DEFAULT_DEGENERACY_TOL;
use nrm_lab::{
    is_nondegenerate, run_experiment, solve_dlp, ExperimentSpec, Instance, PolicyKind, SweepAxis,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(100);
    let file = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/instances/multi_resource.json"
    );
    let inst = Instance::from_json_str(&std::fs::read_to_string(file)?)?;

    let dlp = solve_dlp(&inst)?;
    println!(
        "legs x itineraries: {}x{}",
        inst.num_resources(),
        inst.num_classes()
    );
    println!("fares {:?}", inst.revenue());
    println!("x* = {:?}, v_dlp = {}", dlp.solution.x, dlp.value);
    println!(
        "{}",
        is_nondegenerate(&inst, &dlp.solution, DEFAULT_DEGENERACY_TOL)?
    );

    let spec = ExperimentSpec::with_kinds(
        inst,
        SweepAxis::Horizon(vec![500.0, 1000.0, 2000.0]),
        &PolicyKind::ALL,
        paths,
        70,
    )?;
    for line in summarize(&run_experiment(&spec, None)?) {
        println!("{line}");
    }
    Ok(())
}
