//! Billiard Walk and Hit-and-Run Markov chains with boundary-oracle
//! accounting.
//!
//! A Billiard Walk step draws a trajectory length `l = -tau ln(xi)` and a
//! uniform direction, then follows a specularly reflecting billiard path
//! until the arclength reaches `l`. Hitting a nonsmooth boundary point or
//! exceeding the reflection cap restarts the trajectory from the step's
//! start with a fresh direction and the same `l`. Every first-exit query
//! counts as one boundary-oracle (BO) call; a Hit-and-Run step costs exactly
//! two.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{reflect_direction, Body, ExitOutcome};
use crate::linalg::add_scaled;
use crate::rng::RandomStream;

/// Restarted trajectories per step before the walk is declared stuck.
pub const RESTART_CAP: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Sampler {
    Bw,
    Hr,
}

impl Sampler {
    pub fn name(self) -> &'static str {
        match self {
            Sampler::Bw => "bw",
            Sampler::Hr => "hr",
        }
    }
}

/// Sampler parameters: trajectory-length scale, reflection cap, seed.
///
/// `restart_fresh_length` controls what a restarted trajectory redraws. A
/// restart always redraws the direction; with this flag set (the default) it
/// redraws the length as well. Keeping the length is the literal
/// go-to-step-3 rule, but it can wedge a chain near a sharp corner, where no
/// direction completes a long trajectory within the reflection cap (the
/// simplex exhibits this at its reference parameters), so the workable rule
/// is the default and the literal one stays available for sensitivity
/// studies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub tau: f64,
    pub max_reflections: u32,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub restart_fresh_length: bool,
}

fn default_true() -> bool {
    true
}

impl SamplerConfig {
    pub fn new(tau: f64, max_reflections: u32, seed: u64) -> Self {
        Self {
            tau,
            max_reflections,
            seed,
            restart_fresh_length: true,
        }
    }

    /// Defaults: `tau` = body diameter, reflection cap `R = 10 n`.
    /// Unbounded bodies have no diameter, so `tau` must be user-supplied.
    pub fn for_body(body: &Body, seed: u64) -> Result<Self> {
        let tau = body
            .diameter()
            .ok_or_else(|| Error::UnsupportedBody("unbounded body has no default tau".into()))?;
        Ok(Self::new(tau, 10 * body.intrinsic_dim() as u32, seed))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        if self.max_reflections == 0 {
            return Err(Error::InvalidConfig(
                "reflection cap must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Mutable chain state: current point plus running counters.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub current: Vec<f64>,
    pub bo_calls: u64,
    pub reflections_last: u32,
    pub restarts_last: u32,
    pub samples_emitted: u64,
}

impl ChainState {
    pub fn new(start: Vec<f64>) -> Self {
        Self {
            current: start,
            bo_calls: 0,
            reflections_last: 0,
            restarts_last: 0,
            samples_emitted: 0,
        }
    }
}

/// Why a billiard trajectory was abandoned before reaching its arclength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbortReason {
    /// A point with nonsmooth boundary was met.
    NonsmoothHit,
    /// The reflection count exceeded the cap.
    ReflectionCap,
    /// Membership could not be re-established after a reflection.
    NumericalDrift,
}

/// Outcome of pure billiard propagation.
#[derive(Debug, Clone, PartialEq)]
pub enum Propagation {
    /// Reached the requested arclength strictly inside the body.
    Completed {
        end: Vec<f64>,
        direction: Vec<f64>,
        reflections: u32,
        bo_calls: u64,
    },
    Aborted {
        reason: AbortReason,
        reflections: u32,
        bo_calls: u64,
    },
    /// Left an unbounded body (no further boundary intersection).
    Escaped { reflections: u32, bo_calls: u64 },
}

/// Follows the billiard trajectory from `start` along `direction` until the
/// cumulative path length reaches `length`, reflecting at smooth boundary
/// hits. Each first-exit query costs one BO call; the call that proves the
/// final segment fits inside the body is included.
pub fn propagate(
    body: &Body,
    start: &[f64],
    direction: &[f64],
    length: f64,
    max_reflections: u32,
) -> Result<Propagation> {
    let mut x = start.to_vec();
    let mut d = direction.to_vec();
    let mut remaining = length;
    let mut reflections: u32 = 0;
    let mut bo_calls: u64 = 0;
    loop {
        let exit = body.first_exit(&x, &d)?;
        bo_calls += 1;
        let hit = match exit {
            ExitOutcome::Hit(h) => h,
            ExitOutcome::Escaped => {
                return Ok(Propagation::Escaped {
                    reflections,
                    bo_calls,
                })
            }
        };
        if hit.t >= remaining {
            let end = add_scaled(&x, remaining, &d);
            if !body.contains(&end) {
                return Ok(Propagation::Aborted {
                    reason: AbortReason::NumericalDrift,
                    reflections,
                    bo_calls,
                });
            }
            return Ok(Propagation::Completed {
                end,
                direction: d,
                reflections,
                bo_calls,
            });
        }
        if !hit.smooth {
            return Ok(Propagation::Aborted {
                reason: AbortReason::NonsmoothHit,
                reflections,
                bo_calls,
            });
        }
        if reflections >= max_reflections {
            return Ok(Propagation::Aborted {
                reason: AbortReason::ReflectionCap,
                reflections,
                bo_calls,
            });
        }
        // advance to the wall, reflect, and nudge back inside
        x = add_scaled(&x, hit.t, &d);
        remaining -= hit.t;
        d = reflect_direction(&d, &hit.normal);
        x = add_scaled(&x, body.eps_fwd(), &hit.normal);
        if !body.contains(&x) {
            return Ok(Propagation::Aborted {
                reason: AbortReason::NumericalDrift,
                reflections,
                bo_calls,
            });
        }
        reflections += 1;
    }
}

/// Reflections of one uncapped billiard ray until it escapes an unbounded
/// body, or `None` if the cap was reached first (censored).
pub fn billiard_escape(
    body: &Body,
    start: &[f64],
    direction: &[f64],
    cap: u32,
) -> Result<Option<u32>> {
    let mut x = start.to_vec();
    let mut d = direction.to_vec();
    let mut reflections = 0u32;
    loop {
        match body.first_exit(&x, &d)? {
            ExitOutcome::Escaped => return Ok(Some(reflections)),
            ExitOutcome::Hit(hit) => {
                if reflections >= cap {
                    return Ok(None);
                }
                x = add_scaled(&x, hit.t, &d);
                d = reflect_direction(&d, &hit.normal);
                x = add_scaled(&x, body.eps_fwd(), &hit.normal);
                if !body.contains(&x) {
                    return Ok(None);
                }
                reflections += 1;
            }
        }
    }
}

/// One Billiard Walk transition. Restarts (nonsmooth hit, reflection cap,
/// numerical drift) start over from the step's starting point with a fresh
/// direction; see [`SamplerConfig::restart_fresh_length`] for whether the
/// length is redrawn as well.
pub fn bw_step(
    body: &Body,
    state: &mut ChainState,
    stream: &mut RandomStream,
    cfg: &SamplerConfig,
) -> Result<Vec<f64>> {
    if !body.bounded() {
        return Err(Error::UnsupportedBody(
            "billiard walk requires a bounded body".into(),
        ));
    }
    let mut length = stream.trajectory_length(cfg.tau)?;
    let mut restarts = 0u32;
    loop {
        let direction = body.sample_direction(stream)?;
        match propagate(
            body,
            &state.current,
            &direction,
            length,
            cfg.max_reflections,
        )? {
            Propagation::Completed {
                end,
                reflections,
                bo_calls,
                ..
            } => {
                state.bo_calls += bo_calls;
                state.reflections_last = reflections;
                state.restarts_last = restarts;
                state.samples_emitted += 1;
                state.current = end.clone();
                return Ok(end);
            }
            Propagation::Aborted { bo_calls, .. } | Propagation::Escaped { bo_calls, .. } => {
                state.bo_calls += bo_calls;
                restarts += 1;
                if restarts >= RESTART_CAP {
                    return Err(Error::PathologicalGeometry {
                        restarts,
                        bo_calls: state.bo_calls,
                    });
                }
                if cfg.restart_fresh_length {
                    length = stream.trajectory_length(cfg.tau)?;
                }
            }
        }
    }
}

/// Uniform point on a chord `(t_under, t_over)` at the given quantile.
pub fn chord_point(t_under: f64, t_over: f64, quantile: f64) -> f64 {
    t_under + quantile * (t_over - t_under)
}

/// One Hit-and-Run transition: uniform direction, then a uniform point on
/// the chord through the current point. Costs two BO calls.
pub fn hr_step(body: &Body, state: &mut ChainState, stream: &mut RandomStream) -> Result<Vec<f64>> {
    let direction = body.sample_direction(stream)?;
    let chord = body.chord(&state.current, &direction)?;
    let Some((lo, hi)) = chord.finite() else {
        return Err(Error::UnsupportedBody(
            "hit-and-run requires the body to be bounded along the sampled line".into(),
        ));
    };
    state.bo_calls += 2;
    for _ in 0..64 {
        let u = chord_point(lo, hi, stream.uniform01());
        let p = add_scaled(&state.current, u, &direction);
        if body.contains(&p) {
            state.reflections_last = 0;
            state.restarts_last = 0;
            state.samples_emitted += 1;
            state.current = p.clone();
            return Ok(p);
        }
    }
    Err(Error::PathologicalGeometry {
        restarts: 64,
        bo_calls: state.bo_calls,
    })
}

/// Closed-form Billiard Walk endpoint in the unit cube: per coordinate,
/// `k_i = floor(x_i + l d_i)`, then `y_i = x_i + l d_i - k_i` when `k_i` is
/// even and `1 - (x_i + l d_i - k_i)` when odd (unfolded reflections).
pub fn cube_bw_step(x: &[f64], l: f64, d: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(d)
        .map(|(&xi, &di)| {
            let s = xi + l * di;
            let k = s.floor();
            let frac = s - k;
            if (k as i64) % 2 == 0 {
                frac
            } else {
                1.0 - frac
            }
        })
        .collect()
}

/// Stopping rule for [`run_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Samples(u64),
    /// Stop after the first sample whose completion meets or exceeds this
    /// many boundary-oracle calls.
    BoCalls(u64),
}

/// Full output of a single chain run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainRun {
    pub sampler: Sampler,
    pub config: SamplerConfig,
    pub rng: String,
    pub start: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub bo_calls: u64,
    pub reflections_per_sample: Vec<u32>,
    pub restarts_per_sample: Vec<u32>,
}

impl ChainRun {
    pub fn mean_reflections(&self) -> f64 {
        if self.reflections_per_sample.is_empty() {
            return 0.0;
        }
        self.reflections_per_sample
            .iter()
            .map(|&r| r as f64)
            .sum::<f64>()
            / self.reflections_per_sample.len() as f64
    }
}

/// Runs one chain until the budget is exhausted.
pub fn run_chain(
    body: &Body,
    sampler: Sampler,
    cfg: &SamplerConfig,
    budget: Budget,
    start: Option<&[f64]>,
) -> Result<ChainRun> {
    cfg.validate()?;
    let start = start.unwrap_or_else(|| body.interior_point()).to_vec();
    if !body.contains(&start) {
        return Err(Error::OriginNotInterior);
    }
    let mut stream = RandomStream::for_chain(cfg.seed, 0);
    let mut state = ChainState::new(start.clone());
    let mut samples = Vec::new();
    let mut reflections = Vec::new();
    let mut restarts = Vec::new();
    loop {
        match budget {
            Budget::Samples(n) => {
                if state.samples_emitted >= n {
                    break;
                }
            }
            Budget::BoCalls(n) => {
                if state.bo_calls >= n {
                    break;
                }
            }
        }
        let p = match sampler {
            Sampler::Bw => bw_step(body, &mut state, &mut stream, cfg)?,
            Sampler::Hr => hr_step(body, &mut state, &mut stream)?,
        };
        samples.push(p);
        reflections.push(state.reflections_last);
        restarts.push(state.restarts_last);
    }
    Ok(ChainRun {
        sampler,
        config: *cfg,
        rng: stream.generator_id().to_string(),
        start,
        samples,
        bo_calls: state.bo_calls,
        reflections_per_sample: reflections,
        restarts_per_sample: restarts,
    })
}
