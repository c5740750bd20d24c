//! Uniformity over the standard simplex, where no affine change of
//! coordinates can help: chi-square over equal-volume nested shells and
//! nearest-vertex cells, plus the nested-simplex fraction curve.
//!
//!     cargo run --release --example simplex_uniformity

use bwalk::diagnostics::{
    chi_square_statistic, nested_shell_counts, nested_simplex_fraction, nested_simplex_partition,
    simplex_vertex_cells,
};
use bwalk::geometry::BodyDescriptor;
use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};

fn main() -> bwalk::Result<()> {
    let n = 10;
    let body = BodyDescriptor::StandardSimplex { n }.build()?;
    let budget = Budget::BoCalls(20_000);

    let bw_cfg = SamplerConfig::new(2.0 * std::f64::consts::SQRT_2, 1000, 3);
    let bw = run_chain(&body, Sampler::Bw, &bw_cfg, budget, None)?;
    let hr_cfg = SamplerConfig::new(1.0, 100, 4);
    let hr = run_chain(&body, Sampler::Hr, &hr_cfg, budget, None)?;

    let alphas = nested_simplex_partition(n, 10);
    for (tag, run) in [("bw", &bw), ("hr", &hr)] {
        let total = run.samples.len() as f64;
        let shells = nested_shell_counts(&run.samples, &alphas)?;
        let obs: Vec<f64> = shells.iter().map(|&c| c as f64).collect();
        let shell = chi_square_statistic(&obs, &[total / 10.0; 10])?.statistic;
        let cells = simplex_vertex_cells(&run.samples, n)?;
        let obs: Vec<f64> = cells.iter().map(|&c| c as f64).collect();
        let vertex = chi_square_statistic(&obs, &[total / 11.0; 11])?.statistic;
        println!(
            "{tag}: {:>5} samples from 20000 BO | shell chi2 {shell:>7.2} | vertex chi2 {vertex:>8.2}",
            run.samples.len()
        );
    }
    println!("(10% band for 9 dof: [3.3, 16.9]; hit-and-run piles up near its start)\n");

    // fraction of samples in the nested simplex S_alpha, n = 50
    let n = 50;
    let body = BodyDescriptor::StandardSimplex { n }.build()?;
    let cfg = SamplerConfig::new(std::f64::consts::SQRT_2, 500, 5);
    let bw = run_chain(&body, Sampler::Bw, &cfg, Budget::Samples(300), None)?;
    let hr = run_chain(&body, Sampler::Hr, &cfg, Budget::Samples(300), None)?;
    // alpha levels where the theoretical fraction is 1, 0.8, ..., 0.05
    let grid: Vec<f64> = [1.0, 0.8, 0.6, 0.4, 0.2, 0.05]
        .iter()
        .map(|f: &f64| (1.0 - f.powf(1.0 / n as f64)) / (n as f64 + 1.0))
        .collect();
    println!("f(alpha) = fraction of points with every coordinate >= alpha (n = 50, 300 points):");
    println!("{:>12} {:>10} {:>10} {:>10}", "alpha", "theory", "BW", "HR");
    let bw_curve = nested_simplex_fraction(&bw.samples, &grid)?;
    let hr_curve = nested_simplex_fraction(&hr.samples, &grid)?;
    for (b, h) in bw_curve.iter().zip(&hr_curve) {
        println!(
            "{:>12.3e} {:>10.3} {:>10.3} {:>10.3}",
            b.alpha, b.theoretical, b.empirical, h.empirical
        );
    }
    Ok(())
}
