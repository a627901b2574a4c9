//! Samples seeded Poisson arrival paths, counts arrivals in windows, merges
//! the class streams and dumps a path as JSON lines.
//!
//! ```text
//! cargo run --release --example sample_paths [seed]
//! ```

use nrm_lab::rng::path_seed;
use nrm_lab::stats::Estimate;
use nrm_lab::ArrivalPath;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1);
    let rates = [1.0, 0.5];
    let path = ArrivalPath::sample(&rates, 100.0, seed);
    println!(
        "seed {seed}: totals {:?} over T = {}",
        path.totals(),
        path.horizon()
    );
    for (a, b) in [(0.0, 25.0), (25.0, 50.0), (50.0, 100.0)] {
        println!(
            "  window ({a}, {b}]: class 0 {:>3}, class 1 {:>3}",
            path.count_in_window(0, a, b)?,
            path.count_in_window(1, a, b)?
        );
    }
    println!("first merged events:");
    for e in path.merge_events().iter().take(5) {
        println!("  t = {:>8.4}  class {}", e.time, e.class);
    }

    // Total counts across many independent paths: mean and variance ≈ λT.
    let totals: Vec<f64> = (0..2000)
        .map(|i| {
            ArrivalPath::sample(&rates, 100.0, path_seed(seed, 0, i))
                .class_times(0)
                .len() as f64
        })
        .collect();
    let est = Estimate::from_samples(&totals);
    let (lo, hi) = est.ci95();
    println!(
        "class 0 count over 2000 paths: mean {:.2} (95% CI {lo:.2}..{hi:.2}), expected 100",
        est.mean
    );

    let mut dump = Vec::new();
    path.write_jsonl(&mut dump)?;
    let text = String::from_utf8(dump)?;
    println!(
        "JSONL dump, first line: {}",
        text.lines().next().unwrap_or("")
    );
    let back = ArrivalPath::read_jsonl(text.as_bytes(), rates.len(), path.horizon(), seed)?;
    assert_eq!(back, path);
    println!("dump round-trips exactly ({} lines)", text.lines().count());
    Ok(())
}
