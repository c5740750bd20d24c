//! Billiard Walk sampling over bounded open regions of `R^n`.
//!
//! The Billiard Walk is a Markov chain whose step travels an exponentially
//! distributed arclength along a specularly reflecting billiard trajectory
//! inside the region; its samples converge to the uniform distribution. The
//! crate pairs it with the classic Hit-and-Run walk as a baseline, and ships
//! the geometry oracles, Dikin-ellipsoid preconditioning, and statistical
//! diagnostics needed to compare the two on a shared boundary-oracle budget.
//!
//! ```
//! use bwalk::geometry::BodyDescriptor;
//! use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};
//!
//! let body = BodyDescriptor::UnitCube { n: 3 }.build().unwrap();
//! let cfg = SamplerConfig::for_body(&body, 42).unwrap();
//! let run = run_chain(&body, Sampler::Bw, &cfg, Budget::Samples(100), None).unwrap();
//! assert_eq!(run.samples.len(), 100);
//! assert!(run.samples.iter().all(|x| body.contains(x)));
//! ```
//!
//! See the `examples/` directory for one runnable example per capability
//! (cube uniformity, corner escape, concave cusp, strip efficiency, simplex
//! diagnostics, toroid sampling, preconditioning), and the `bwalk` binary for
//! the command-line interface.

pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod geometry;
mod linalg;
pub mod precondition;
pub mod rng;
pub mod samplers;

pub use error::{Error, Result};
