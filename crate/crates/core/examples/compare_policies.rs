//! Runs all five admission policies on the same arrival path and compares
//! their revenue with the hindsight optimum. With `--trace` it also prints
//! each re-solve of the chosen policy.
//!
//! ```text
//! cargo run --release --example compare_policies [seed] [--trace POLICY]
//! ```

use nrm_lab::oracle::hindsight_optimum;
use nrm_lab::{
    run_policy, sample_path, solve_dlp, Instance, Matrix, PolicyKind, RunOptions, ThinningStream,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed: u64 = args
        .first()
        .filter(|a| !a.starts_with("--"))
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(3);
    let traced: Option<PolicyKind> = args
        .iter()
        .position(|a| a == "--trace")
        .and_then(|i| args.get(i + 1))
        .map(|s| s.parse())
        .transpose()?;

    let inst = Instance::new(
        2000.0,
        vec![1.0, 1.0],
        vec![2.0, 1.0],
        Matrix::from_rows(&[vec![1.0, 1.0]])?,
        vec![2000.0],
    )?;
    let path = sample_path(&inst, seed);
    let ho = hindsight_optimum(&inst, &path)?;
    println!("T = {}, arrivals {:?}", inst.horizon(), path.totals());
    println!(
        "v_dlp = {}, hindsight optimum = {} at z = {:?}",
        solve_dlp(&inst)?.value,
        ho.value,
        ho.z
    );
    println!(
        "{:<4} {:>9} {:>8} {:>14} {:>8}",
        "", "revenue", "regret", "accepted", "resolves"
    );
    for kind in PolicyKind::ALL {
        let mut thinning = ThinningStream::new(seed, kind.default_id());
        let res = run_policy(
            kind,
            &inst,
            &path,
            &mut thinning,
            RunOptions { trace: true },
        )?;
        println!(
            "{kind:<4} {:>9} {:>8} {:>14} {:>8}",
            res.revenue,
            ho.value - res.revenue,
            format!("{:?}", res.accepted),
            res.resolves.len()
        );
        if traced == Some(kind) {
            for r in &res.resolves {
                println!(
                    "       t={:>9.3} rhs={:.4} x=({:.4}, {:.4}) threshold={:?} probs={:?}",
                    r.time, r.rhs[0], r.x[0], r.x[1], r.threshold, r.probs
                );
            }
        }
    }
    Ok(())
}
