//! Rounding an ill-shaped polytope with the Dikin ellipsoid of its log
//! barrier: find the analytic center, apply T = H^{-1/2}, and sample in the
//! rounded coordinates.
//!
//!     cargo run --release --example dikin_preconditioning

use bwalk::geometry::BodyDescriptor;
use bwalk::precondition::{analytic_center, dikin_map, transform_polytope};
use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};

fn main() -> bwalk::Result<()> {
    // a 100:1 box
    let body = BodyDescriptor::Polytope {
        a: vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ],
        b: vec![0.01, 0.01, 1.0, 1.0],
    }
    .build()?;

    let center = analytic_center(&body, None, 1e-10)?;
    println!("analytic center: {center:.6?}");

    let map = dikin_map(&body)?;
    println!("hessian condition number: {:.3e}", map.cond_hessian);
    println!("det T: {:.3e}", map.det_transform);

    let image = transform_polytope(&body, &map)?;
    let image_map = dikin_map(&image)?;
    println!(
        "image condition number: {:.6} (rounded to a cube)",
        image_map.cond_hessian
    );

    // sample the rounded body and map the points back
    let cfg = SamplerConfig::for_body(&image, 11)?;
    let run = run_chain(&image, Sampler::Bw, &cfg, Budget::Samples(2000), None)?;
    let back: Vec<Vec<f64>> = run.samples.iter().map(|y| map.to_original(y)).collect();
    println!(
        "sampled {} points in the image; all map back inside: {}",
        back.len(),
        back.iter().all(|p| body.contains(p))
    );
    let mean_abs_x0 = back.iter().map(|p| p[0].abs()).sum::<f64>() / back.len() as f64;
    println!("mean |x1| of mapped samples: {mean_abs_x0:.5} (uniform law: 0.005)");
    Ok(())
}
