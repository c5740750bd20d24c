//! Horizontal exploration of a long strip per boundary-oracle call: the
//! billiard accumulates displacement monotonically along each trajectory,
//! hit-and-run random-walks, giving roughly a factor six.
//!
//!     cargo run --release --example strip_efficiency

use std::collections::BTreeMap;

use bwalk::experiments::{run_scenario, Scenario};

fn main() -> bwalk::Result<()> {
    let scenario = Scenario::from_params("strip", &BTreeMap::new(), 0)?;
    let report = run_scenario(&scenario)?;
    let d = &report.diagnostics;
    println!(
        "strip 0 < x2 < 1, |x1| < 1000; {} walkers, {} BO each",
        d["walkers"], d["bo_per_walker"]
    );
    println!(
        "billiard walk : {:.4} mean |dx1| per BO",
        d["bw_shift_per_bo"].as_f64().unwrap()
    );
    println!(
        "hit-and-run   : {:.4} mean |dx1| per BO",
        d["hr_shift_per_bo"].as_f64().unwrap()
    );
    println!(
        "ratio         : {:.2} (theory: 6)",
        d["ratio"].as_f64().unwrap()
    );
    Ok(())
}
