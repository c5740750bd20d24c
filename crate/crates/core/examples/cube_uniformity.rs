//! Billiard Walk versus Hit-and-Run on the unit cube at a shared
//! boundary-oracle budget: slab chi-square tests and the cell-transition
//! statistic.
//!
//!     cargo run --release --example cube_uniformity

use std::collections::BTreeMap;

use bwalk::experiments::{run_scenario, Scenario};

fn main() -> bwalk::Result<()> {
    let scenario = Scenario::from_params("cube", &BTreeMap::new(), 0)?;
    let report = run_scenario(&scenario)?;
    let d = &report.diagnostics;

    println!("budget: 20000 BO, n = 10, tau = sqrt(10), R = 100");
    for tag in ["bw", "hr"] {
        println!(
            "{tag}: {} samples, {} BO, slab chi-square tests passed {}/10, stay-in-cell {:.3}",
            d[tag]["samples"],
            d[tag]["bo_calls"],
            d[tag]["slab_tests_passed"],
            d[tag]["stay_probability"].as_f64().unwrap(),
        );
        let stats: Vec<f64> = d[tag]["slab_chi_square"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        println!("    per-axis chi-square: {stats:.1?}  (10% band [3.3, 16.9])");
    }
    println!(
        "leave-cell reference for independent uniforms: {:.4}",
        d["reference_leave_probability"].as_f64().unwrap()
    );

    for c in &report.checks {
        println!(
            "[{}] {}: {:.4} (expected {} {:.4})",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.op,
            c.expected
        );
    }
    Ok(())
}
