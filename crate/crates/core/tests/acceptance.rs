//! Runs every acceptance criterion and prints one verdict line per
//! criterion. `ACCEPTANCE_WORKERS` sets the search worker count.
//!
//! Two criteria are known to be unattainable as stated and are expected
//! to print FAIL:
//! - 2: the exact symmetric search proves 96, not 90, at n = 44 (the
//!   witness passes an independent check); 90 is the optimum at n = 43.
//! - 8: the mixed-radix map into a cyclic group cannot keep zero-sum counts
//!   of arbitrary triples, since sums of three images never wrap around.
//!   Trapezoid-freeness, STPP validity and STPP witness counts are kept.
//!
//! The target fails if any other criterion fails, or if a blocked one
//! starts passing (so this list stays accurate).

use skewcorner::repro::{run_criterion, ReproOptions, CRITERIA};

const BLOCKED: [u32; 2] = [2, 8];

fn main() {
    let workers = std::env::var("ACCEPTANCE_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let opts = ReproOptions {
        workers,
        ..ReproOptions::default()
    };
    let mut unexpected = Vec::new();
    for (id, _) in CRITERIA {
        let outcome = run_criterion(id, &opts).expect("criterion runs");
        let blocked = BLOCKED.contains(&id);
        println!("{}{}", outcome.line(), if blocked { " [known blocked]" } else { "" });
        for d in &outcome.details {
            println!("    {d}");
        }
        if outcome.passed == blocked {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected verdicts: {unexpected:?}");
        std::process::exit(1);
    }
}
