//! Prints the infrequent re-solving schedule: epoch starts, remaining time
//! and the acceptance threshold used in each epoch.
//!
//! ```text
//! cargo run --release --example irt_schedule [horizon]
//! ```

use nrm_lab::policies::compute_schedule;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let horizon: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(5000.0);
    let sched = compute_schedule(horizon)?;
    println!(
        "T = {horizon}: K = {}, {} epochs",
        sched.last_epoch(),
        sched.num_epochs()
    );
    println!(
        "{:>3} {:>12} {:>12} {:>12} {:>10}",
        "u", "start", "end", "remaining", "threshold"
    );
    for u in 0..sched.num_epochs() {
        let th = sched
            .threshold(u)
            .map_or("-".to_string(), |t| format!("{t:.5}"));
        println!(
            "{u:>3} {:>12.4} {:>12.4} {:>12.4} {th:>10}",
            sched.start(u),
            sched.end(u),
            sched.length(u)
        );
    }
    Ok(())
}
