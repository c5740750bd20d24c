//! Minimal usage: build a body, run a Billiard Walk chain, inspect the run.
//!
//!     cargo run --release --example sample_unit_cube

use bwalk::geometry::BodyDescriptor;
use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};

fn main() -> bwalk::Result<()> {
    let body = BodyDescriptor::UnitCube { n: 10 }.build()?;
    let cfg = SamplerConfig::for_body(&body, 42)?; // tau = diameter, R = 10 n
    let run = run_chain(&body, Sampler::Bw, &cfg, Budget::Samples(1000), None)?;

    println!("sampler          : billiard walk ({})", run.rng);
    println!("tau              : {:.4}", run.config.tau);
    println!("samples          : {}", run.samples.len());
    println!("boundary oracle  : {} calls", run.bo_calls);
    println!(
        "mean reflections : {:.2} per sample",
        run.mean_reflections()
    );
    println!(
        "all samples interior: {}",
        run.samples.iter().all(|p| body.contains(p))
    );

    let mean: Vec<f64> = (0..body.dim())
        .map(|i| run.samples.iter().map(|p| p[i]).sum::<f64>() / run.samples.len() as f64)
        .collect();
    println!("sample mean      : {mean:.3?} (uniform law: 0.5 per axis)");
    Ok(())
}
