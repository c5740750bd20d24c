//! Bodies from JSON descriptors and CSV sample export, the same formats the
//! `bwalk` command-line tool consumes and produces.
//!
//!     cargo run --release --example custom_body_json

use bwalk::experiments::{read_samples_csv, write_samples_csv};
use bwalk::geometry::BodyDescriptor;
use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};

fn main() -> bwalk::Result<()> {
    let json = r#"{
        "type": "polytope",
        "A": [[1, 1], [-1, 1], [1, -1], [-1, -1], [1, 0]],
        "b": [1, 1, 1, 1, 0.8]
    }"#;
    let descriptor: BodyDescriptor = serde_json::from_str(json)?;
    let body = descriptor.build()?;
    println!(
        "built {:?}: dim {}, bounded {}, diameter {:.4}",
        serde_json::to_string(&descriptor)?,
        body.dim(),
        body.bounded(),
        body.diameter().unwrap()
    );
    println!("interior point: {:?}", body.interior_point());

    let cfg = SamplerConfig::for_body(&body, 2)?;
    let run = run_chain(&body, Sampler::Hr, &cfg, Budget::Samples(5), None)?;

    let mut csv = Vec::new();
    write_samples_csv(&run.samples, &mut csv)?;
    print!("\nCSV export:\n{}", String::from_utf8_lossy(&csv));

    let path = std::env::temp_dir().join("bwalk_example_samples.csv");
    std::fs::write(&path, &csv)?;
    let back = read_samples_csv(&path)?;
    println!("round trip exact: {}", back == run.samples);
    Ok(())
}
