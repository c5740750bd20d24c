//! Deterministic, seedable random streams.
//!
//! A [`RandomStream`] supplies the three random primitives the samplers need:
//! uniform variates on `(0, 1]`, standard Gaussian vectors, and directions
//! uniform over the unit sphere. Streams are counter-based (ChaCha8 with a
//! per-chain stream id), so the same seed reproduces the same sequence
//! bit-for-bit, and sibling streams derived from `(seed, chain)` never share
//! state.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Identity of the generator and transforms, recorded in run reports.
pub const GENERATOR_ID: &str = "chacha8/u53-polar/v1";

/// A single-owner random stream. One stream per chain; never shared.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    chain: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// Stream for chain 0 of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::for_chain(seed, 0)
    }

    /// Independent stream identified by `(seed, chain)`.
    pub fn for_chain(seed: u64, chain: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chain);
        Self { seed, chain, rng }
    }

    /// Sibling stream with the same seed and a different chain index.
    pub fn sibling(&self, chain: u64) -> Self {
        Self::for_chain(self.seed, chain)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chain(&self) -> u64 {
        self.chain
    }

    pub fn generator_id(&self) -> &'static str {
        GENERATOR_ID
    }

    /// Uniform variate on `(0, 1]`.
    ///
    /// Zero is excluded so that `ln` of the result is always finite; one is
    /// included and maps to a zero-length trajectory, which is a valid
    /// degenerate step.
    pub fn uniform01(&mut self) -> f64 {
        // 53 high bits, shifted into (0, 2^53], then scaled.
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Vector of `n` independent standard normal components (Marsaglia polar).
    pub fn gaussian_vector(&mut self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let (a, b) = loop {
                let u = 2.0 * self.uniform01() - 1.0;
                let v = 2.0 * self.uniform01() - 1.0;
                let s = u * u + v * v;
                if s > 0.0 && s < 1.0 {
                    let f = (-2.0 * s.ln() / s).sqrt();
                    break (u * f, v * f);
                }
            };
            out.push(a);
            if out.len() < n {
                out.push(b);
            }
        }
        Ok(out)
    }

    /// Direction uniform over the unit sphere in `R^n`: `d = g / ||g||` for
    /// a Gaussian `g`. A degenerate all-zero draw is redrawn.
    pub fn unit_direction(&mut self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        loop {
            let mut g = self.gaussian_vector(n)?;
            let r = crate::linalg::normalize_mut(&mut g);
            if r > 1e-150 {
                return Ok(g);
            }
        }
    }

    /// Trajectory length `l = -tau * ln(xi)`, exponential with mean `tau`.
    pub fn trajectory_length(&mut self, tau: f64) -> Result<f64> {
        if tau.is_nan() || tau <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "trajectory-length scale tau must be positive, got {tau}"
            )));
        }
        Ok(exp_length(tau, self.uniform01()))
    }
}

pub(crate) fn exp_length(tau: f64, xi: f64) -> f64 {
    -tau * xi.ln()
}
