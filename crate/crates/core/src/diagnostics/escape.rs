//! Corner-escape statistics for the plane angle and the positive orthant.
//!
//! Billiard trajectories leave a wedge of apex angle `alpha` after at most
//! `ceil(pi / alpha)` reflections and the positive orthant after at most `n`;
//! Hit-and-Run needs a random number of iterations. Escape from the angle is
//! detected when a trajectory segment (or a chord endpoint) crosses the line
//! `x_2 = 1`; escape from the orthant when a ray or chord no longer meets
//! the boundary.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{reflect_direction, Body, BodyDescriptor, ChordEnd};
use crate::linalg::{add_scaled, norm};
use crate::rng::RandomStream;
use crate::samplers::{billiard_escape, chord_point};

/// Per-trial counts with mean/spread over the uncensored trials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EscapeStats {
    pub counts: Vec<u32>,
    pub censored: usize,
    pub mean: f64,
    pub stddev: f64,
    pub max: u32,
}

impl EscapeStats {
    pub fn from_counts(counts: Vec<u32>, censored: usize) -> Self {
        let n = counts.len().max(1) as f64;
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
        let var = counts
            .iter()
            .map(|&c| (c as f64 - mean) * (c as f64 - mean))
            .sum::<f64>()
            / n;
        let max = counts.iter().copied().max().unwrap_or(0);
        Self {
            counts,
            censored,
            mean,
            stddev: var.sqrt(),
            max,
        }
    }

    /// Fraction of trials that escaped within `k` steps.
    pub fn escaped_within(&self, k: u32) -> f64 {
        let total = self.counts.len() + self.censored;
        if total == 0 {
            return 0.0;
        }
        self.counts.iter().filter(|&&c| c <= k).count() as f64 / total as f64
    }
}

/// Which event ends a Hit-and-Run angle trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HrEscapeRule {
    /// The chord of the capped triangle touches the line `x_2 = 1`.
    CapEndpoint,
    /// The chord of the uncapped wedge is unbounded.
    UnboundedChord,
}

/// Side-slope convention for the wedge `|x_1| < s * x_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WedgeSlope {
    /// `s = tan(alpha/2)`: the apex angle is exactly `alpha`, so the
    /// `ceil(pi/alpha)` reflection bound is sharp.
    TanHalf,
    /// `s = atan(alpha/2)`: the angle-table convention (its wedge is
    /// slightly narrower than `alpha` for large angles).
    AtanHalf,
}

impl WedgeSlope {
    pub fn slope(self, alpha: f64) -> f64 {
        match self {
            WedgeSlope::TanHalf => (alpha / 2.0).tan(),
            WedgeSlope::AtanHalf => (alpha / 2.0).atan(),
        }
    }
}

/// Billiard escape counts from the wedge of apex angle `alpha`: boundary
/// events of one uncapped trajectory from `start` until a segment crosses
/// `x_2 = 1`. `segments` counts every boundary-oracle event including the
/// final crossing segment; `side_reflections = segments - 1` counts wall
/// reflections only and never exceeds `ceil(pi / alpha)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleBwEscape {
    pub segments: EscapeStats,
    pub side_reflections: EscapeStats,
}

pub fn angle_bw_escape(
    alpha: f64,
    trials: usize,
    start: [f64; 2],
    stream: &mut RandomStream,
    slope: WedgeSlope,
) -> Result<AngleBwEscape> {
    let s = slope.slope(alpha);
    let sides = [[1.0, -s], [-1.0, -s]];
    let side_norm = (1.0 + s * s).sqrt();
    let cap = (std::f64::consts::PI / alpha).ceil() as u32 + 8;

    let mut segments = Vec::with_capacity(trials);
    let mut sides_only = Vec::with_capacity(trials);
    let mut censored = 0usize;
    'trial: for _ in 0..trials {
        let d0 = stream.unit_direction(2)?;
        let mut x = start;
        let mut d = [d0[0], d0[1]];
        let mut reflections = 0u32;
        loop {
            let eps = 1e-12 * (1.0 + norm(&x));
            let t_cap = if d[1] > 0.0 {
                (1.0 - x[1]) / d[1]
            } else {
                f64::INFINITY
            };
            let mut t_side = f64::INFINITY;
            let mut hit_side = 0usize;
            for (i, a) in sides.iter().enumerate() {
                let denom = a[0] * d[0] + a[1] * d[1];
                if denom > 1e-300 {
                    let t = -(a[0] * x[0] + a[1] * x[1]) / denom;
                    if t > eps && t < t_side {
                        t_side = t;
                        hit_side = i;
                    }
                }
            }
            if t_cap <= t_side {
                segments.push(reflections + 1);
                sides_only.push(reflections);
                continue 'trial;
            }
            if reflections >= cap {
                censored += 1;
                continue 'trial;
            }
            let a = sides[hit_side];
            let s = [-a[0] / side_norm, -a[1] / side_norm];
            x = [x[0] + t_side * d[0], x[1] + t_side * d[1]];
            let r = reflect_direction(&d, &s);
            d = [r[0], r[1]];
            x = [x[0] + 1e-12 * s[0], x[1] + 1e-12 * s[1]];
            reflections += 1;
        }
    }
    Ok(AngleBwEscape {
        segments: EscapeStats::from_counts(segments, censored),
        side_reflections: EscapeStats::from_counts(sides_only, censored),
    })
}

/// Hit-and-Run iterations to leave the angle, counting the escaping
/// iteration.
pub fn angle_hr_escape(
    alpha: f64,
    trials: usize,
    start: [f64; 2],
    stream: &mut RandomStream,
    rule: HrEscapeRule,
    slope: WedgeSlope,
    cap: u32,
) -> Result<EscapeStats> {
    match rule {
        HrEscapeRule::CapEndpoint => {
            angle_hr_cap_endpoint(alpha, trials, start, stream, slope, cap)
        }
        HrEscapeRule::UnboundedChord => angle_hr_wedge(alpha, trials, start, stream, slope, cap),
    }
}

fn angle_hr_cap_endpoint(
    alpha: f64,
    trials: usize,
    start: [f64; 2],
    stream: &mut RandomStream,
    slope: WedgeSlope,
    cap: u32,
) -> Result<EscapeStats> {
    let s = slope.slope(alpha);
    let body = BodyDescriptor::Polytope {
        a: vec![vec![1.0, -s], vec![-1.0, -s], vec![0.0, 1.0]],
        b: vec![0.0, 0.0, 1.0],
    }
    .build()?;
    let mut counts = Vec::with_capacity(trials);
    let mut censored = 0usize;
    'trial: for _ in 0..trials {
        let mut x = start.to_vec();
        for iter in 1..=cap {
            let d = stream.unit_direction(2)?;
            let chord = body.chord(&x, &d)?;
            let (lo, hi) = chord.finite().expect("triangle is bounded");
            let upper = (x[1] + lo * d[1]).max(x[1] + hi * d[1]);
            if upper >= 1.0 - 1e-9 {
                counts.push(iter);
                continue 'trial;
            }
            x = interior_chord_point(&body, &x, &d, lo, hi, stream);
        }
        censored += 1;
    }
    Ok(EscapeStats::from_counts(counts, censored))
}

fn angle_hr_wedge(
    alpha: f64,
    trials: usize,
    start: [f64; 2],
    stream: &mut RandomStream,
    slope: WedgeSlope,
    cap: u32,
) -> Result<EscapeStats> {
    let s = slope.slope(alpha);
    let body = BodyDescriptor::Polytope {
        a: vec![vec![1.0, -s], vec![-1.0, -s]],
        b: vec![0.0, 0.0],
    }
    .build()?;
    let mut counts = Vec::with_capacity(trials);
    let mut censored = 0usize;
    'trial: for _ in 0..trials {
        let mut x = start.to_vec();
        for iter in 1..=cap {
            let d = stream.unit_direction(2)?;
            let chord = body.chord(&x, &d)?;
            match (chord.t_under, chord.t_over) {
                (ChordEnd::Finite(lo), ChordEnd::Finite(hi)) => {
                    x = interior_chord_point(&body, &x, &d, lo, hi, stream);
                }
                _ => {
                    counts.push(iter);
                    continue 'trial;
                }
            }
        }
        censored += 1;
    }
    Ok(EscapeStats::from_counts(counts, censored))
}

fn interior_chord_point(
    body: &Body,
    x: &[f64],
    d: &[f64],
    lo: f64,
    hi: f64,
    stream: &mut RandomStream,
) -> Vec<f64> {
    for _ in 0..64 {
        let u = chord_point(lo, hi, stream.uniform01());
        let p = add_scaled(x, u, d);
        if body.contains(&p) {
            return p;
        }
    }
    x.to_vec()
}

/// Billiard reflections to leave the orthant, one uncapped ray per trial
/// from a uniform interior start.
pub fn orthant_bw_escape(
    n: usize,
    trials: usize,
    stream: &mut RandomStream,
) -> Result<EscapeStats> {
    let body = BodyDescriptor::Orthant { n }.build()?;
    let cap = n as u32 + 8;
    let mut counts = Vec::with_capacity(trials);
    let mut censored = 0usize;
    for _ in 0..trials {
        let start: Vec<f64> = (0..n).map(|_| stream.uniform01()).collect();
        let d = stream.unit_direction(n)?;
        match billiard_escape(&body, &start, &d, cap)? {
            Some(reflections) => counts.push(reflections),
            None => censored += 1,
        }
    }
    Ok(EscapeStats::from_counts(counts, censored))
}

/// Hit-and-Run iterations to leave the orthant: the trial escapes at the
/// first iteration whose chord is unbounded on either side.
pub fn orthant_hr_escape(
    n: usize,
    trials: usize,
    stream: &mut RandomStream,
    cap: u32,
) -> Result<EscapeStats> {
    let body = BodyDescriptor::Orthant { n }.build()?;
    let mut counts = Vec::with_capacity(trials);
    let mut censored = 0usize;
    'trial: for _ in 0..trials {
        let mut x: Vec<f64> = (0..n).map(|_| stream.uniform01()).collect();
        for iter in 1..=cap {
            let d = stream.unit_direction(n)?;
            let chord = body.chord(&x, &d)?;
            match (chord.t_under, chord.t_over) {
                (ChordEnd::Finite(lo), ChordEnd::Finite(hi)) => {
                    x = interior_chord_point(&body, &x, &d, lo, hi, stream);
                }
                _ => {
                    counts.push(iter);
                    continue 'trial;
                }
            }
        }
        censored += 1;
    }
    Ok(EscapeStats::from_counts(counts, censored))
}

/// Escape statistics for the corner bodies under either sampler. Angle
/// trials report billiard boundary events (including the final crossing
/// segment) or Hit-and-Run iterations under the cap-endpoint rule; orthant
/// trials report billiard reflections or Hit-and-Run iterations until an
/// unbounded chord.
pub fn escape_statistics(
    body: &BodyDescriptor,
    sampler: crate::samplers::Sampler,
    trials: usize,
    stream: &mut RandomStream,
) -> Result<EscapeStats> {
    use crate::samplers::Sampler;
    match (body, sampler) {
        (BodyDescriptor::AngleTriangle { alpha }, Sampler::Bw) => {
            Ok(angle_bw_escape(*alpha, trials, [0.0, 0.1], stream, WedgeSlope::TanHalf)?.segments)
        }
        (BodyDescriptor::AngleTriangle { alpha }, Sampler::Hr) => angle_hr_escape(
            *alpha,
            trials,
            [0.0, 0.1],
            stream,
            HrEscapeRule::CapEndpoint,
            WedgeSlope::TanHalf,
            100_000,
        ),
        (BodyDescriptor::Orthant { n }, Sampler::Bw) => orthant_bw_escape(*n, trials, stream),
        (BodyDescriptor::Orthant { n }, Sampler::Hr) => {
            orthant_hr_escape(*n, trials, stream, 10_000)
        }
        _ => Err(crate::error::Error::UnsupportedBody(
            "escape statistics are defined for the angle and the orthant".into(),
        )),
    }
}

/// Boundary events (wall reflections plus the final segment, i.e. BO calls)
/// to run the trajectory of length `length` inside the concave cusp from
/// `start` along `direction`, or `None` once `cap` reflections are exceeded
/// (censored).
pub fn cusp_boundary_events(
    start: [f64; 2],
    direction: [f64; 2],
    length: f64,
    cap: u32,
) -> Result<Option<u64>> {
    let body = BodyDescriptor::ConcaveCusp {}.build()?;
    match crate::samplers::propagate(&body, &start, &direction, length, cap)? {
        crate::samplers::Propagation::Completed { bo_calls, .. } => Ok(Some(bo_calls)),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::Sampler;

    #[test]
    fn dispatcher_covers_both_bodies_and_samplers() {
        let mut stream = RandomStream::new(1);
        let angle = BodyDescriptor::AngleTriangle {
            alpha: std::f64::consts::FRAC_PI_2,
        };
        let orthant = BodyDescriptor::Orthant { n: 3 };
        for body in [&angle, &orthant] {
            for sampler in [Sampler::Bw, Sampler::Hr] {
                let stats = escape_statistics(body, sampler, 200, &mut stream).unwrap();
                assert_eq!(stats.counts.len() + stats.censored, 200);
                assert!(stats.mean >= if sampler == Sampler::Hr { 1.0 } else { 0.0 });
            }
        }
        assert!(escape_statistics(
            &BodyDescriptor::UnitCube { n: 2 },
            Sampler::Bw,
            10,
            &mut stream
        )
        .is_err());
    }

    #[test]
    fn bw_side_reflections_respect_hard_bound() {
        let mut stream = RandomStream::new(3);
        for alpha in [
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::PI / 10.0,
        ] {
            let bound = (std::f64::consts::PI / alpha).ceil() as u32;
            let out =
                angle_bw_escape(alpha, 2000, [0.0, 0.1], &mut stream, WedgeSlope::TanHalf).unwrap();
            assert_eq!(out.segments.censored, 0);
            assert!(
                out.side_reflections.max <= bound,
                "alpha {alpha}: max {} > bound {bound}",
                out.side_reflections.max
            );
        }
    }

    #[test]
    fn orthant_bw_bound() {
        let mut stream = RandomStream::new(5);
        for n in [2usize, 5, 17] {
            let out = orthant_bw_escape(n, 500, &mut stream).unwrap();
            assert_eq!(out.censored, 0);
            assert!(out.max <= n as u32, "n {n}: max {}", out.max);
        }
    }

    #[test]
    fn hr_wedge_escape_is_geometric() {
        let alpha = std::f64::consts::FRAC_PI_2;
        let mut stream = RandomStream::new(7);
        let stats = angle_hr_escape(
            alpha,
            20_000,
            [0.0, 0.1],
            &mut stream,
            HrEscapeRule::UnboundedChord,
            WedgeSlope::TanHalf,
            10_000,
        )
        .unwrap();
        let p = alpha / std::f64::consts::PI;
        for k in [1u32, 3, 6] {
            let want = 1.0 - (1.0 - p).powi(k as i32);
            let got = stats.escaped_within(k);
            assert!((got - want).abs() < 0.02, "k {k}: {got} vs {want}");
        }
    }
}
