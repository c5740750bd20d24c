//! Reflection blow-up in a concave cusp: the deterministic trajectory of
//! length 1 from (0.9, eps) along (-1, 0) bounces between the walls
//! `x_2 = +/- x_1^4`, and the count explodes as eps shrinks.
//!
//!     cargo run --release --example concave_cusp

use bwalk::diagnostics::escape::cusp_boundary_events;

fn main() -> bwalk::Result<()> {
    println!("{:>10} {:>18}", "eps", "boundary events");
    for eps in [1e-3, 5e-4, 4e-4, 3e-4, 2e-4, 1.1e-4, 1.01e-4] {
        match cusp_boundary_events([0.9, eps], [-1.0, 0.0], 1.0, 1_000_000)? {
            Some(events) => println!("{eps:>10.2e} {events:>18}"),
            None => println!("{eps:>10.2e} {:>18}", "> 1e6 (censored)"),
        }
    }
    println!("\nthis is why the walk caps reflections per trajectory (R) and restarts");
    println!("with a fresh direction instead of following such trajectories forever.");
    Ok(())
}
