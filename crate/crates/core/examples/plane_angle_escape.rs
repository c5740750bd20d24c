//! Corner escape from a plane angle: mean boundary events for the Billiard
//! Walk against mean Hit-and-Run iterations, with the hard reflection bound.
//!
//!     cargo run --release --example plane_angle_escape

use bwalk::diagnostics::escape::{angle_bw_escape, angle_hr_escape, HrEscapeRule, WedgeSlope};
use bwalk::rng::RandomStream;

fn main() -> bwalk::Result<()> {
    let trials = 5000;
    let slope = WedgeSlope::AtanHalf;
    println!("{trials} trials from (0, 0.1); counts are boundary events");
    println!("(wall reflections plus the final segment crossing x2 = 1)\n");
    println!(
        "{:>8} {:>18} {:>18} {:>14}",
        "alpha", "BW mean (std)", "HR mean (std)", "side bound"
    );
    for denom in [2.0, 4.0, 10.0, 50.0] {
        let alpha = std::f64::consts::PI / denom;
        let mut s1 = RandomStream::for_chain(1, 0);
        let bw = angle_bw_escape(alpha, trials, [0.0, 0.1], &mut s1, slope)?;
        let mut s2 = RandomStream::for_chain(1, 1);
        let hr = angle_hr_escape(
            alpha,
            trials,
            [0.0, 0.1],
            &mut s2,
            HrEscapeRule::CapEndpoint,
            slope,
            100_000,
        )?;
        let apex = 2.0 * slope.slope(alpha).atan();
        println!(
            "{:>8} {:>11.2} ({:.2}) {:>11.2} ({:.2}) {:>8} <= {}",
            format!("pi/{denom}"),
            bw.segments.mean,
            bw.segments.stddev,
            hr.mean,
            hr.stddev,
            bw.side_reflections.max,
            (std::f64::consts::PI / apex).ceil(),
        );
    }
    println!("\nthe billiard leaves every wedge within ceil(pi/apex) wall reflections;");
    println!("hit-and-run needs a random number of iterations with a heavy tail.");
    Ok(())
}
