//! Scenario definitions and the runner.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::diagnostics::escape::{
    angle_bw_escape, angle_hr_escape, cusp_boundary_events, orthant_bw_escape, orthant_hr_escape,
    HrEscapeRule, WedgeSlope,
};
use crate::diagnostics::{
    self, chi_square_band, chi_square_statistic, nested_simplex_partition, serial_correlation,
    slab_histogram, CHI_SQUARE_BAND_9DOF,
};
use crate::error::{Error, Result};
use crate::geometry::{
    reflect_direction, toroid_path_bound, BodyDescriptor, ExitOutcome, TruncatedVariant,
};
use crate::linalg::add_scaled;
use crate::rng::RandomStream;
use crate::samplers::{
    hr_step, propagate, run_chain, Budget, ChainRun, ChainState, Propagation, Sampler,
    SamplerConfig,
};

use super::report::{CheckResult, ConfigEcho, RunReport};

/// Reference values for the plane-angle table: `(alpha, bw mean, bw std,
/// hr mean, hr std)` over 5000 runs from `(0, 0.1)`.
pub const ANGLE_REFERENCE: [(f64, f64, f64, f64, f64); 4] = [
    (std::f64::consts::FRAC_PI_2, 2.28, 0.87, 2.37, 1.74),
    (std::f64::consts::FRAC_PI_4, 3.08, 1.3, 3.75, 2.98),
    (std::f64::consts::PI / 10.0, 5.94, 2.93, 8.23, 7.1),
    (std::f64::consts::PI / 50.0, 25.08, 14.46, 39.25, 34.54),
];

/// Reference reflection counts in the concave cusp for the trajectory of
/// length 1 from `(0.9, eps)` along `(-1, 0)`.
pub const CUSP_REFERENCE: [(f64, u32); 6] = [
    (1e-3, 746),
    (5e-4, 1851),
    (4e-4, 2480),
    (3e-4, 3617),
    (2e-4, 6158),
    (1.1e-4, 13496),
];

/// Cusp epsilon expected to exceed the reflection cap (censored).
pub const CUSP_CENSORED_EPS: f64 = 1.01e-4;

/// A runnable experiment. Parameters default to the reference setups.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Scenario {
    /// Mean boundary events to leave a plane angle, for both samplers.
    Angle {
        alpha: f64,
        trials: usize,
        start: [f64; 2],
        hr_rule: HrEscapeRule,
        slope: WedgeSlope,
        seed: u64,
    },
    /// Orthant escape: billiard hard bound and Hit-and-Run escape laws.
    Orthant {
        n_list: Vec<usize>,
        hr_trials: usize,
        bw_trials: usize,
        bw_n_max: usize,
        seed: u64,
    },
    /// Deterministic reflection counts in the concave cusp.
    Cusp { epsilons: Vec<f64>, cap: u32 },
    /// Mean horizontal displacement per BO in the strip, BW vs HR.
    Strip {
        m: f64,
        walkers: usize,
        bo_per_walker: u32,
        seed: u64,
    },
    /// Cube uniformity at a shared BO budget: slab chi-square tests and the
    /// cell-transition statistic.
    Cube {
        n: usize,
        bo_budget: u64,
        tau: Option<f64>,
        max_reflections: Option<u32>,
        seed: u64,
    },
    /// Simplex uniformity: shell and vertex-cell chi-square over repeated
    /// seeds, plus the nested-simplex fraction curve in high dimension.
    Simplex {
        n: usize,
        bo_budget: u64,
        seeds: usize,
        curve_n: usize,
        curve_samples: u64,
        curve_seeds: usize,
        seed: u64,
    },
    /// Toroid sampling: BO cost of 500 samples and angular uniformity.
    Toroid {
        n: usize,
        r: f64,
        samples: u64,
        seed: u64,
    },
    /// Nonsmooth-hit restarts in the truncated ellipses: focus starts versus
    /// random starts.
    TruncatedEllipse {
        trajectories: usize,
        length: f64,
        random_samples: u64,
        seed: u64,
    },
    /// User-supplied body and budget; no built-in expected values.
    Custom {
        body: BodyDescriptor,
        sampler: Sampler,
        budget: Budget,
        tau: Option<f64>,
        max_reflections: Option<u32>,
        start: Option<Vec<f64>>,
        seed: u64,
    },
}

pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "angle",
            "plane-angle escape means (BW reflections vs HR iterations)",
        ),
        (
            "orthant",
            "orthant escape: billiard bound <= n, HR escape laws",
        ),
        (
            "cusp",
            "concave-cusp reflection counts for the length-1 trajectory",
        ),
        ("strip", "horizontal displacement per BO, BW/HR ratio"),
        ("cube", "unit-cube uniformity at a shared BO budget"),
        (
            "simplex",
            "simplex shell/vertex chi-square and fraction curve",
        ),
        ("toroid", "toroid BO cost and angular uniformity"),
        (
            "truncated_ellipse",
            "nonsmooth restarts from focus vs random starts",
        ),
        ("custom", "user-supplied body, sampler, and budget"),
    ]
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Angle { .. } => "angle",
            Scenario::Orthant { .. } => "orthant",
            Scenario::Cusp { .. } => "cusp",
            Scenario::Strip { .. } => "strip",
            Scenario::Cube { .. } => "cube",
            Scenario::Simplex { .. } => "simplex",
            Scenario::Toroid { .. } => "toroid",
            Scenario::TruncatedEllipse { .. } => "truncated_ellipse",
            Scenario::Custom { .. } => "custom",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Scenario::Angle { seed, .. }
            | Scenario::Orthant { seed, .. }
            | Scenario::Strip { seed, .. }
            | Scenario::Cube { seed, .. }
            | Scenario::Simplex { seed, .. }
            | Scenario::Toroid { seed, .. }
            | Scenario::TruncatedEllipse { seed, .. }
            | Scenario::Custom { seed, .. } => *seed,
            Scenario::Cusp { .. } => 0,
        }
    }

    /// Builds a scenario from CLI-style `key=value` parameters, filling in
    /// the reference defaults.
    pub fn from_params(name: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Self> {
        let get_f64 = |k: &str, d: f64| -> Result<f64> {
            params
                .get(k)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{k}: {e}")))
                })
                .unwrap_or(Ok(d))
        };
        let get_usize = |k: &str, d: usize| -> Result<usize> {
            params
                .get(k)
                .map(|v| {
                    v.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("{k}: {e}")))
                })
                .unwrap_or(Ok(d))
        };
        let get_u64 = |k: &str, d: u64| -> Result<u64> {
            params
                .get(k)
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|e| Error::Parse(format!("{k}: {e}")))
                })
                .unwrap_or(Ok(d))
        };
        match name {
            "angle" => Ok(Scenario::Angle {
                alpha: get_f64("alpha", std::f64::consts::FRAC_PI_4)?,
                trials: get_usize("trials", 5000)?,
                start: [get_f64("start_x", 0.0)?, get_f64("start_y", 0.1)?],
                hr_rule: match params.get("hr_rule").map(String::as_str) {
                    None | Some("cap_endpoint") => HrEscapeRule::CapEndpoint,
                    Some("unbounded_chord") => HrEscapeRule::UnboundedChord,
                    Some(other) => return Err(Error::Parse(format!("hr_rule {other:?}"))),
                },
                slope: match params.get("slope").map(String::as_str) {
                    None | Some("atan_half") => WedgeSlope::AtanHalf,
                    Some("tan_half") => WedgeSlope::TanHalf,
                    Some(other) => return Err(Error::Parse(format!("slope {other:?}"))),
                },
                seed,
            }),
            "orthant" => Ok(Scenario::Orthant {
                n_list: (2..=get_usize("n_max", 8)?).collect(),
                hr_trials: get_usize("hr_trials", 1_000_000)?,
                bw_trials: get_usize("bw_trials", 1000)?,
                bw_n_max: get_usize("bw_n_max", 50)?,
                seed,
            }),
            "cusp" => Ok(Scenario::Cusp {
                epsilons: params
                    .get("epsilon")
                    .map(|v| {
                        v.parse::<f64>()
                            .map(|e| vec![e])
                            .map_err(|e| Error::Parse(format!("epsilon: {e}")))
                    })
                    .unwrap_or_else(|| {
                        Ok(CUSP_REFERENCE
                            .iter()
                            .map(|&(e, _)| e)
                            .chain([CUSP_CENSORED_EPS])
                            .collect())
                    })?,
                cap: get_u64("cap", 1_000_000)? as u32,
            }),
            "strip" => Ok(Scenario::Strip {
                m: get_f64("M", 1e3)?,
                walkers: get_usize("walkers", 10_000)?,
                bo_per_walker: get_u64("bo_per_walker", 100)? as u32,
                seed,
            }),
            "cube" => Ok(Scenario::Cube {
                n: get_usize("n", 10)?,
                bo_budget: get_u64("bo_budget", 20_000)?,
                tau: params
                    .get("tau")
                    .map(|v| {
                        v.parse::<f64>()
                            .map_err(|e| Error::Parse(format!("tau: {e}")))
                    })
                    .transpose()?,
                max_reflections: params
                    .get("R")
                    .map(|v| {
                        v.parse::<u32>()
                            .map_err(|e| Error::Parse(format!("R: {e}")))
                    })
                    .transpose()?,
                seed,
            }),
            "simplex" => Ok(Scenario::Simplex {
                n: get_usize("n", 10)?,
                bo_budget: get_u64("bo_budget", 20_000)?,
                seeds: get_usize("seeds", 20)?,
                curve_n: get_usize("curve_n", 50)?,
                curve_samples: get_u64("curve_samples", 300)?,
                curve_seeds: get_usize("curve_seeds", 20)?,
                seed,
            }),
            "toroid" => Ok(Scenario::Toroid {
                n: get_usize("n", 10)?,
                r: get_f64("r", 1.0 / 3.0)?,
                samples: get_u64("samples", 500)?,
                seed,
            }),
            "truncated_ellipse" => Ok(Scenario::TruncatedEllipse {
                trajectories: get_usize("trajectories", 400)?,
                length: get_f64("length", 5.0)?,
                random_samples: get_u64("random_samples", 1000)?,
                seed,
            }),
            "custom" => {
                let body_path = params
                    .get("body")
                    .ok_or_else(|| Error::Parse("custom scenario needs body=<file.json>".into()))?;
                let body: BodyDescriptor =
                    serde_json::from_reader(std::fs::File::open(body_path)?)?;
                let sampler = match params.get("sampler").map(String::as_str) {
                    None | Some("bw") => Sampler::Bw,
                    Some("hr") => Sampler::Hr,
                    Some(other) => return Err(Error::Parse(format!("sampler {other:?}"))),
                };
                let budget = if let Some(v) = params.get("bo_budget") {
                    Budget::BoCalls(
                        v.parse()
                            .map_err(|e| Error::Parse(format!("bo_budget: {e}")))?,
                    )
                } else {
                    Budget::Samples(get_u64("samples", 1000)?)
                };
                Ok(Scenario::Custom {
                    body,
                    sampler,
                    budget,
                    tau: params
                        .get("tau")
                        .map(|v| {
                            v.parse::<f64>()
                                .map_err(|e| Error::Parse(format!("tau: {e}")))
                        })
                        .transpose()?,
                    max_reflections: params
                        .get("R")
                        .map(|v| {
                            v.parse::<u32>()
                                .map_err(|e| Error::Parse(format!("R: {e}")))
                        })
                        .transpose()?,
                    start: None,
                    seed,
                })
            }
            other => Err(Error::Parse(format!("unknown experiment {other:?}"))),
        }
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = match scenario {
        Scenario::Angle {
            alpha,
            trials,
            start,
            hr_rule,
            slope,
            seed,
        } => run_angle(*alpha, *trials, *start, *hr_rule, *slope, *seed)?,
        Scenario::Orthant {
            n_list,
            hr_trials,
            bw_trials,
            bw_n_max,
            seed,
        } => run_orthant(n_list, *hr_trials, *bw_trials, *bw_n_max, *seed)?,
        Scenario::Cusp { epsilons, cap } => run_cusp(epsilons, *cap)?,
        Scenario::Strip {
            m,
            walkers,
            bo_per_walker,
            seed,
        } => run_strip(*m, *walkers, *bo_per_walker, *seed)?,
        Scenario::Cube {
            n,
            bo_budget,
            tau,
            max_reflections,
            seed,
        } => run_cube(*n, *bo_budget, *tau, *max_reflections, *seed)?,
        Scenario::Simplex {
            n,
            bo_budget,
            seeds,
            curve_n,
            curve_samples,
            curve_seeds,
            seed,
        } => run_simplex(
            *n,
            *bo_budget,
            *seeds,
            *curve_n,
            *curve_samples,
            *curve_seeds,
            *seed,
        )?,
        Scenario::Toroid {
            n,
            r,
            samples,
            seed,
        } => run_toroid(*n, *r, *samples, *seed)?,
        Scenario::TruncatedEllipse {
            trajectories,
            length,
            random_samples,
            seed,
        } => run_truncated_ellipse(*trajectories, *length, *random_samples, *seed)?,
        Scenario::Custom {
            body,
            sampler,
            budget,
            tau,
            max_reflections,
            start,
            seed,
        } => run_custom(
            body,
            *sampler,
            *budget,
            *tau,
            *max_reflections,
            start.as_deref(),
            *seed,
        )?,
    };
    report.scenario = Some(serde_json::to_value(scenario)?);
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn blank_report(seed: u64) -> RunReport {
    RunReport {
        scenario: None,
        config: ConfigEcho::bare(seed),
        body: None,
        bo_calls: 0,
        samples_emitted: 0,
        samples: None,
        reflections_per_sample: None,
        restarts_per_sample: None,
        diagnostics: json!({}),
        checks: Vec::new(),
        wall_time_ms: 0.0,
    }
}

fn run_angle(
    alpha: f64,
    trials: usize,
    start: [f64; 2],
    hr_rule: HrEscapeRule,
    slope: WedgeSlope,
    seed: u64,
) -> Result<RunReport> {
    let mut bw_stream = RandomStream::for_chain(seed, 0);
    let mut hr_stream = RandomStream::for_chain(seed, 1);
    let bw = angle_bw_escape(alpha, trials, start, &mut bw_stream, slope)?;
    let hr = angle_hr_escape(
        alpha,
        trials,
        start,
        &mut hr_stream,
        hr_rule,
        slope,
        100_000,
    )?;

    let mut checks = Vec::new();
    for &(a, bw_mean, bw_std, hr_mean, hr_std) in &ANGLE_REFERENCE {
        if (alpha - a).abs() <= 1e-12
            && hr_rule == HrEscapeRule::CapEndpoint
            && slope == WedgeSlope::AtanHalf
        {
            let se = |sd: f64| (5.0 * sd / (trials as f64).sqrt()).max(0.15);
            checks.push(CheckResult::within(
                "bw_mean_boundary_events",
                bw.segments.mean,
                bw_mean,
                se(bw_std),
            ));
            checks.push(CheckResult::within(
                "hr_mean_iterations",
                hr.mean,
                hr_mean,
                se(hr_std),
            ));
        }
    }
    // reflections never exceed ceil(pi / apex angle); the apex is alpha for
    // the tan-half convention and slightly smaller under atan-half
    let apex = 2.0 * slope.slope(alpha).atan();
    let bound = (std::f64::consts::PI / apex).ceil();
    checks.push(CheckResult::at_most(
        "bw_max_side_reflections",
        bw.side_reflections.max as f64,
        bound,
    ));

    let mut report = blank_report(seed);
    report.diagnostics = json!({
        "alpha": alpha,
        "slope": slope,
        "apex_angle": apex,
        "trials": trials,
        "bw": {
            "mean_boundary_events": bw.segments.mean,
            "std_boundary_events": bw.segments.stddev,
            "mean_side_reflections": bw.side_reflections.mean,
            "max_side_reflections": bw.side_reflections.max,
            "hard_bound": bound,
        },
        "hr": {
            "rule": hr_rule,
            "mean_iterations": hr.mean,
            "std_iterations": hr.stddev,
            "max_iterations": hr.max,
            "censored": hr.censored,
        },
    });
    report.checks = checks;
    Ok(report)
}

fn run_orthant(
    n_list: &[usize],
    hr_trials: usize,
    bw_trials: usize,
    bw_n_max: usize,
    seed: u64,
) -> Result<RunReport> {
    let mut checks = Vec::new();
    let mut hr_rows = Vec::new();
    for (i, &n) in n_list.iter().enumerate() {
        let mut stream = RandomStream::for_chain(seed, i as u64 + 1);
        let stats = orthant_hr_escape(n, hr_trials, &mut stream, n as u32)?;
        let p = 0.5f64.powi(n as i32 - 1);
        let single = stats.escaped_within(1);
        let sigma1 = (p * (1.0 - p) / hr_trials as f64).sqrt();
        checks.push(CheckResult::within(
            format!("hr_single_step_escape_n{n}"),
            single,
            p,
            3.0 * sigma1,
        ));
        // the two-iteration law p + p(1 - p) = 2^-(n-2) (1 - 2^-n)
        let p2 = 0.5f64.powi(n as i32 - 2) * (1.0 - 0.5f64.powi(n as i32));
        let within2 = stats.escaped_within(2);
        let sigma2 = (p2 * (1.0 - p2) / hr_trials as f64).sqrt();
        checks.push(CheckResult::within(
            format!("hr_two_step_escape_n{n}"),
            within2,
            p2,
            3.0 * sigma2,
        ));
        // the literal within-n probability of the geometric law
        let pn = 1.0 - (1.0 - p).powi(n as i32);
        let within_n = stats.escaped_within(n as u32);
        let sigma_n = (pn * (1.0 - pn) / hr_trials as f64).sqrt();
        checks.push(CheckResult::within(
            format!("hr_within_n_escape_n{n}"),
            within_n,
            pn,
            3.0 * sigma_n,
        ));
        hr_rows.push(json!({
            "n": n,
            "single_step": single,
            "two_step": within2,
            "within_n": within_n,
        }));
    }

    let mut bw_rows = Vec::new();
    let mut stream = RandomStream::for_chain(seed, 0);
    let mut violations = 0usize;
    for n in 2..=bw_n_max {
        let stats = orthant_bw_escape(n, bw_trials, &mut stream)?;
        if stats.max as usize > n || stats.censored > 0 {
            violations += 1;
        }
        bw_rows.push(json!({ "n": n, "max_reflections": stats.max, "mean": stats.mean }));
    }
    checks.push(CheckResult::at_most(
        "bw_bound_violations",
        violations as f64,
        0.0,
    ));

    let mut report = blank_report(seed);
    report.diagnostics = json!({ "hr": hr_rows, "bw": bw_rows });
    report.checks = checks;
    Ok(report)
}

fn run_cusp(epsilons: &[f64], cap: u32) -> Result<RunReport> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &eps in epsilons {
        let outcome = cusp_boundary_events([0.9, eps], [-1.0, 0.0], 1.0, cap)?;
        match outcome {
            Some(events) => {
                rows.push(json!({ "epsilon": eps, "boundary_events": events }));
                for &(e_ref, count) in &CUSP_REFERENCE {
                    if (eps - e_ref).abs() <= 1e-15 {
                        checks.push(CheckResult::within(
                            format!("cusp_reflections_eps{e_ref:e}"),
                            events as f64,
                            count as f64,
                            0.05 * count as f64,
                        ));
                    }
                }
                if (eps - CUSP_CENSORED_EPS).abs() <= 1e-15 {
                    checks.push(CheckResult::at_least(
                        format!("cusp_censored_eps{eps:e}"),
                        0.0,
                        1.0,
                    ));
                }
            }
            None => {
                rows.push(json!({ "epsilon": eps, "censored_at": cap }));
                if (eps - CUSP_CENSORED_EPS).abs() <= 1e-15 {
                    checks.push(CheckResult::at_least(
                        format!("cusp_censored_eps{eps:e}"),
                        1.0,
                        1.0,
                    ));
                }
            }
        }
    }
    let mut report = blank_report(0);
    report.body = Some(BodyDescriptor::ConcaveCusp {});
    report.diagnostics = json!({ "cap": cap, "trajectories": rows });
    report.checks = checks;
    Ok(report)
}

/// Mean absolute horizontal displacement per boundary-oracle call: one pure
/// billiard trajectory per BW walker, uniform chord steps for HR.
fn run_strip(m: f64, walkers: usize, bo_per_walker: u32, seed: u64) -> Result<RunReport> {
    let body = BodyDescriptor::Strip { m }.build()?;
    let mut bw_stream = RandomStream::for_chain(seed, 0);
    let mut hr_stream = RandomStream::for_chain(seed, 1);

    let mut bw_sum = 0.0;
    for _ in 0..walkers {
        let start = loop {
            let y = bw_stream.uniform01();
            if y < 1.0 {
                break vec![0.0, y];
            }
        };
        let mut x = start;
        let mut d = bw_stream.unit_direction(2)?;
        let mut shift = 0.0;
        for _ in 0..bo_per_walker {
            match body.first_exit(&x, &d)? {
                ExitOutcome::Hit(h) => {
                    shift += (h.t * d[0]).abs();
                    x = add_scaled(&x, h.t, &d);
                    d = reflect_direction(&d, &h.normal);
                    x = add_scaled(&x, body.eps_fwd(), &h.normal);
                }
                ExitOutcome::Escaped => break,
            }
        }
        bw_sum += shift / bo_per_walker as f64;
    }
    let bw_shift_per_bo = bw_sum / walkers as f64;

    let steps = (bo_per_walker / 2).max(1);
    let mut hr_sum = 0.0;
    for _ in 0..walkers {
        let start = loop {
            let y = hr_stream.uniform01();
            if y < 1.0 {
                break vec![0.0, y];
            }
        };
        let mut state = ChainState::new(start);
        let mut shift = 0.0;
        for _ in 0..steps {
            let prev = state.current[0];
            hr_step(&body, &mut state, &mut hr_stream)?;
            shift += (state.current[0] - prev).abs();
        }
        hr_sum += shift / (2.0 * steps as f64);
    }
    let hr_shift_per_bo = hr_sum / walkers as f64;

    let ratio = bw_shift_per_bo / hr_shift_per_bo;
    let mut report = blank_report(seed);
    report.body = Some(BodyDescriptor::Strip { m });
    report.diagnostics = json!({
        "walkers": walkers,
        "bo_per_walker": bo_per_walker,
        "bw_shift_per_bo": bw_shift_per_bo,
        "hr_shift_per_bo": hr_shift_per_bo,
        "ratio": ratio,
    });
    report.checks = vec![CheckResult::within(
        "bw_over_hr_shift_ratio",
        ratio,
        6.0,
        1.2,
    )];
    Ok(report)
}

fn chain_slab_results(run: &ChainRun, n: usize) -> Result<(Vec<f64>, usize)> {
    let total = run.samples.len() as f64;
    let mut stats = Vec::with_capacity(n);
    let mut passes = 0usize;
    for axis in 0..n {
        let counts = slab_histogram(&run.samples, axis, 10)?;
        let observed: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let expected = vec![total / 10.0; 10];
        let r = chi_square_statistic(&observed, &expected)?;
        if r.passes(CHI_SQUARE_BAND_9DOF) {
            passes += 1;
        }
        stats.push(r.statistic);
    }
    Ok((stats, passes))
}

fn run_cube(
    n: usize,
    bo_budget: u64,
    tau: Option<f64>,
    max_reflections: Option<u32>,
    seed: u64,
) -> Result<RunReport> {
    let body = BodyDescriptor::UnitCube { n }.build()?;
    let cfg = SamplerConfig::new(
        tau.unwrap_or((n as f64).sqrt()),
        max_reflections.unwrap_or(10 * n as u32),
        seed,
    );
    let mut start_stream = RandomStream::for_chain(seed, 100);
    let bw_start = diagnostics::reference::uniform_cube(&mut start_stream, n);
    let hr_start = diagnostics::reference::uniform_cube(&mut start_stream, n);

    let bw = run_chain(
        &body,
        Sampler::Bw,
        &cfg,
        Budget::BoCalls(bo_budget),
        Some(&bw_start),
    )?;
    let hr_cfg = SamplerConfig {
        seed: seed.wrapping_add(1),
        ..cfg
    };
    let hr = run_chain(
        &body,
        Sampler::Hr,
        &hr_cfg,
        Budget::BoCalls(bo_budget),
        Some(&hr_start),
    )?;

    let (bw_stats, bw_passes) = chain_slab_results(&bw, n)?;
    let (hr_stats, hr_passes) = chain_slab_results(&hr, n)?;
    let bw_sc = serial_correlation(&bw.samples, n)?;
    let hr_sc = serial_correlation(&hr.samples, n)?;

    let mut checks = Vec::new();
    let reference_setup = n == 10 && bo_budget == 20_000 && (cfg.tau - 10f64.sqrt()).abs() < 1e-9;
    if reference_setup {
        checks.push(CheckResult::within(
            "bw_sample_count",
            bw.samples.len() as f64,
            2148.0,
            0.15 * 2148.0,
        ));
        checks.push(CheckResult::at_least(
            "bw_slab_tests_passed",
            bw_passes as f64,
            8.0,
        ));
        checks.push(CheckResult::at_most(
            "hr_slab_tests_passed",
            hr_passes as f64,
            2.0,
        ));
        checks.push(CheckResult::within(
            "bw_leave_cell_probability",
            bw_sc.leave,
            bw_sc.reference_leave,
            0.12,
        ));
        checks.push(CheckResult::at_least(
            "hr_stay_probability",
            hr_sc.stay,
            0.5,
        ));
    }
    checks.push(CheckResult::within(
        "hr_sample_count",
        hr.samples.len() as f64,
        (bo_budget / 2) as f64,
        0.0,
    ));

    let mut report = blank_report(seed);
    report.config = ConfigEcho {
        sampler: None,
        tau: Some(cfg.tau),
        max_reflections: Some(cfg.max_reflections),
        seed,
        rng: bw.rng.clone(),
        budget: Some(Budget::BoCalls(bo_budget)),
        start: None,
        precondition: None,
    };
    report.body = Some(BodyDescriptor::UnitCube { n });
    report.bo_calls = bw.bo_calls + hr.bo_calls;
    report.samples_emitted = (bw.samples.len() + hr.samples.len()) as u64;
    report.diagnostics = json!({
        "bw": {
            "samples": bw.samples.len(),
            "bo_calls": bw.bo_calls,
            "slab_chi_square": bw_stats,
            "slab_tests_passed": bw_passes,
            "leave_probability": bw_sc.leave,
            "stay_probability": bw_sc.stay,
        },
        "hr": {
            "samples": hr.samples.len(),
            "bo_calls": hr.bo_calls,
            "slab_chi_square": hr_stats,
            "slab_tests_passed": hr_passes,
            "leave_probability": hr_sc.leave,
            "stay_probability": hr_sc.stay,
        },
        "reference_leave_probability": bw_sc.reference_leave,
        "chi_square_band": CHI_SQUARE_BAND_9DOF,
    });
    report.checks = checks;
    Ok(report)
}

fn simplex_chi_squares(run: &ChainRun, n: usize) -> Result<(f64, f64)> {
    let total = run.samples.len() as f64;
    let alphas = nested_simplex_partition(n, 10);
    let shells = diagnostics::nested_shell_counts(&run.samples, &alphas)?;
    let observed: Vec<f64> = shells.iter().map(|&c| c as f64).collect();
    let shell_stat = chi_square_statistic(&observed, &[total / 10.0; 10])?.statistic;

    let cells = diagnostics::simplex_vertex_cells(&run.samples, n)?;
    let observed: Vec<f64> = cells.iter().map(|&c| c as f64).collect();
    let cell_count = n as f64 + 1.0;
    let vertex_stat = chi_square_statistic(&observed, &vec![total / cell_count; n + 1])?.statistic;
    Ok((shell_stat, vertex_stat))
}

#[allow(clippy::too_many_arguments)]
fn run_simplex(
    n: usize,
    bo_budget: u64,
    seeds: usize,
    curve_n: usize,
    curve_samples: u64,
    curve_seeds: usize,
    seed: u64,
) -> Result<RunReport> {
    let body = BodyDescriptor::StandardSimplex { n }.build()?;
    // two edge lengths: the longest trajectory scale that still leaves a
    // usable sample count at the shared BO budget (serial correlation of the
    // vertex-cell statistic shrinks as tau grows)
    let tau = 2.0 * std::f64::consts::SQRT_2;
    let mut rows = Vec::new();
    let mut bw_shell_ok = 0usize;
    let mut bw_vertex_ok = 0usize;
    let mut hr_shell_high = 0usize;
    let mut hr_vertex_high = 0usize;
    for k in 0..seeds {
        let run_seed = seed.wrapping_add(k as u64);
        let cfg = SamplerConfig::new(tau, 1000, run_seed);
        let bw = run_chain(&body, Sampler::Bw, &cfg, Budget::BoCalls(bo_budget), None)?;
        let hr_cfg = SamplerConfig {
            seed: run_seed.wrapping_add(977),
            ..cfg
        };
        let hr = run_chain(
            &body,
            Sampler::Hr,
            &hr_cfg,
            Budget::BoCalls(bo_budget),
            None,
        )?;
        let (bw_shell, bw_vertex) = simplex_chi_squares(&bw, n)?;
        let (hr_shell, hr_vertex) = simplex_chi_squares(&hr, n)?;
        if bw_shell < CHI_SQUARE_BAND_9DOF.1 {
            bw_shell_ok += 1;
        }
        if bw_vertex < CHI_SQUARE_BAND_9DOF.1 {
            bw_vertex_ok += 1;
        }
        if hr_shell > 100.0 {
            hr_shell_high += 1;
        }
        if hr_vertex > 100.0 {
            hr_vertex_high += 1;
        }
        rows.push(json!({
            "seed": run_seed,
            "bw_samples": bw.samples.len(),
            "bw_shell_chi2": bw_shell,
            "bw_vertex_chi2": bw_vertex,
            "hr_shell_chi2": hr_shell,
            "hr_vertex_chi2": hr_vertex,
        }));
    }

    // fraction-curve dominance in high dimension, at the edge-length scale
    let curve_body = BodyDescriptor::StandardSimplex { n: curve_n }.build()?;
    let curve_tau = std::f64::consts::SQRT_2;
    let hi = 1.0 / (curve_n as f64 + 1.0);
    let alphas: Vec<f64> = (0..=50).map(|i| hi * i as f64 / 50.0).collect();
    let mut bw_dominates = 0usize;
    for k in 0..curve_seeds {
        let run_seed = seed.wrapping_add(10_000 + k as u64);
        let cfg = SamplerConfig::new(curve_tau, 10 * curve_n as u32, run_seed);
        let bw = run_chain(
            &curve_body,
            Sampler::Bw,
            &cfg,
            Budget::Samples(curve_samples),
            None,
        )?;
        let hr_cfg = SamplerConfig {
            seed: run_seed.wrapping_add(977),
            ..cfg
        };
        let hr = run_chain(
            &curve_body,
            Sampler::Hr,
            &hr_cfg,
            Budget::Samples(curve_samples),
            None,
        )?;
        let sup = |run: &ChainRun| -> Result<f64> {
            Ok(diagnostics::nested_simplex_fraction(&run.samples, &alphas)?
                .iter()
                .map(|p| (p.empirical - p.theoretical).abs())
                .fold(0.0f64, f64::max))
        };
        if sup(&bw)? < sup(&hr)? {
            bw_dominates += 1;
        }
    }

    let frac = |k: usize, total: usize| k as f64 / total.max(1) as f64;
    let mut report = blank_report(seed);
    report.body = Some(BodyDescriptor::StandardSimplex { n });
    report.diagnostics = json!({
        "tau": tau,
        "bo_budget": bo_budget,
        "runs": rows,
        "bw_shell_pass_fraction": frac(bw_shell_ok, seeds),
        "bw_vertex_pass_fraction": frac(bw_vertex_ok, seeds),
        "hr_shell_above_100_fraction": frac(hr_shell_high, seeds),
        "hr_vertex_above_100_fraction": frac(hr_vertex_high, seeds),
        "curve": {
            "n": curve_n,
            "samples": curve_samples,
            "seeds": curve_seeds,
            "bw_dominates_fraction": frac(bw_dominates, curve_seeds),
        },
    });
    report.checks = vec![
        CheckResult::at_least("bw_shell_pass_fraction", frac(bw_shell_ok, seeds), 0.8),
        CheckResult::at_least("bw_vertex_pass_fraction", frac(bw_vertex_ok, seeds), 0.8),
        CheckResult::at_least(
            "hr_shell_above_100_fraction",
            frac(hr_shell_high, seeds),
            0.8,
        ),
        CheckResult::at_least(
            "hr_vertex_above_100_fraction",
            frac(hr_vertex_high, seeds),
            0.8,
        ),
        CheckResult::at_least(
            "bw_fraction_curve_dominates",
            frac(bw_dominates, curve_seeds),
            0.9,
        ),
    ];
    Ok(report)
}

fn run_toroid(n: usize, r: f64, samples: u64, seed: u64) -> Result<RunReport> {
    let body = BodyDescriptor::Toroid { n, r }.build()?;
    // the natural trajectory scale is the tube diameter: the reference BO
    // cost (~3.5 BO per sample) corresponds to mean trajectory length ~ 2r
    let cfg = SamplerConfig::new(2.0 * r, 10 * n as u32, seed);
    let mut start = vec![0.0; n];
    start[0] = 1.0;
    let bw = run_chain(
        &body,
        Sampler::Bw,
        &cfg,
        Budget::Samples(samples),
        Some(&start),
    )?;

    // the reference comparison plots as many HR points as BW spent BO calls
    let hr_cfg = SamplerConfig {
        seed: seed.wrapping_add(1),
        ..cfg
    };
    let hr = run_chain(
        &body,
        Sampler::Hr,
        &hr_cfg,
        Budget::Samples(bw.bo_calls),
        Some(&start),
    )?;

    let angular = |run: &ChainRun| -> Result<(Vec<u64>, f64)> {
        let bins = 12usize;
        let mut counts = vec![0u64; bins];
        for p in &run.samples {
            let theta = p[1].atan2(p[0]);
            let idx = (((theta + std::f64::consts::PI) / (2.0 * std::f64::consts::PI))
                * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        let observed: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let expected = vec![run.samples.len() as f64 / bins as f64; bins];
        Ok((
            counts,
            chi_square_statistic(&observed, &expected)?.statistic,
        ))
    };
    let (bw_bins, bw_chi2) = angular(&bw)?;
    let (hr_bins, hr_chi2) = angular(&hr)?;
    let band = chi_square_band(11);

    // supplementary stationarity diagnostic: the same chain thinned to every
    // 100th sample (decorrelated) over a long run
    let thin_cfg = SamplerConfig {
        seed: seed.wrapping_add(7),
        ..cfg
    };
    let long = run_chain(
        &body,
        Sampler::Bw,
        &thin_cfg,
        Budget::Samples(samples * 100),
        Some(&start),
    )?;
    let thinned = ChainRun {
        samples: long.samples.iter().step_by(100).cloned().collect(),
        ..long.clone()
    };
    let (_, thinned_chi2) = angular(&thinned)?;

    let mut checks = Vec::new();
    if (r - 1.0 / 3.0).abs() < 1e-12 {
        checks.push(CheckResult::within(
            "toroid_path_bound",
            toroid_path_bound(r)? as f64,
            3.0,
            0.0,
        ));
        if samples == 500 && n == 10 {
            checks.push(CheckResult::within(
                "bw_bo_calls",
                bw.bo_calls as f64,
                1764.0,
                0.15 * 1764.0,
            ));
        }
    }
    checks.push(CheckResult::at_least("bw_angular_chi2_lo", bw_chi2, band.0));
    checks.push(CheckResult::at_most("bw_angular_chi2_hi", bw_chi2, band.1));

    let mut report = blank_report(seed);
    report.config = ConfigEcho {
        sampler: None,
        tau: Some(cfg.tau),
        max_reflections: Some(cfg.max_reflections),
        seed,
        rng: bw.rng.clone(),
        budget: Some(Budget::Samples(samples)),
        start: Some(start.clone()),
        precondition: None,
    };
    report.body = Some(BodyDescriptor::Toroid { n, r });
    report.bo_calls = bw.bo_calls + hr.bo_calls;
    report.samples_emitted = (bw.samples.len() + hr.samples.len()) as u64;
    report.diagnostics = json!({
        "path_bound": toroid_path_bound(r)?,
        "bw": {
            "samples": bw.samples.len(),
            "bo_calls": bw.bo_calls,
            "angular_bins": bw_bins,
            "angular_chi2": bw_chi2,
            "angular_chi2_thinned": thinned_chi2,
            "mean_reflections": bw.mean_reflections(),
        },
        "hr": {
            "samples": hr.samples.len(),
            "bo_calls": hr.bo_calls,
            "angular_bins": hr_bins,
            "angular_chi2": hr_chi2,
        },
        "angular_band_11dof": band,
    });
    report.checks = checks;
    Ok(report)
}

fn run_truncated_ellipse(
    trajectories: usize,
    length: f64,
    random_samples: u64,
    seed: u64,
) -> Result<RunReport> {
    let focus = [-trunc_sqrt3(), 0.0];
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for variant in [TruncatedVariant::Convex, TruncatedVariant::Nonconvex] {
        let body = BodyDescriptor::TruncatedEllipse { variant }.build()?;
        let mut stream = RandomStream::for_chain(seed, variant as u64);
        let mut nonsmooth = 0usize;
        for _ in 0..trajectories {
            let d = stream.unit_direction(2)?;
            if let Propagation::Aborted {
                reason: crate::samplers::AbortReason::NonsmoothHit,
                ..
            } = propagate(&body, &focus, &d, length, 10_000)?
            {
                nonsmooth += 1;
            }
        }
        let focus_fraction = nonsmooth as f64 / trajectories as f64;

        let cfg = SamplerConfig::new(body.diameter().unwrap(), 100, seed.wrapping_add(17));
        let run = run_chain(
            &body,
            Sampler::Bw,
            &cfg,
            Budget::Samples(random_samples),
            None,
        )?;
        let random_restarts: u32 = run
            .restarts_per_sample
            .iter()
            .filter(|&&x| x > 0)
            .copied()
            .sum();
        let nonsmooth_restarts = random_restarts; // restarts from a random start

        let tag = match variant {
            TruncatedVariant::Convex => "convex",
            TruncatedVariant::Nonconvex => "nonconvex",
        };
        checks.push(CheckResult::at_least(
            format!("{tag}_focus_nonsmooth_fraction"),
            focus_fraction,
            0.01,
        ));
        checks.push(CheckResult::at_most(
            format!("{tag}_random_start_restarts"),
            nonsmooth_restarts as f64,
            0.0,
        ));
        rows.push(json!({
            "variant": tag,
            "focus_nonsmooth_fraction": focus_fraction,
            "random_start_restarts": nonsmooth_restarts,
            "random_samples": run.samples.len(),
        }));
    }
    let mut report = blank_report(seed);
    report.diagnostics =
        json!({ "length": length, "trajectories": trajectories, "variants": rows });
    report.checks = checks;
    Ok(report)
}

fn trunc_sqrt3() -> f64 {
    3f64.sqrt()
}

#[allow(clippy::too_many_arguments)]
fn run_custom(
    descriptor: &BodyDescriptor,
    sampler: Sampler,
    budget: Budget,
    tau: Option<f64>,
    max_reflections: Option<u32>,
    start: Option<&[f64]>,
    seed: u64,
) -> Result<RunReport> {
    let body = descriptor.build()?;
    let cfg = match (tau, max_reflections) {
        (Some(t), Some(r)) => SamplerConfig::new(t, r, seed),
        _ => {
            let mut base = SamplerConfig::for_body(&body, seed)?;
            if let Some(t) = tau {
                base.tau = t;
            }
            if let Some(r) = max_reflections {
                base.max_reflections = r;
            }
            base
        }
    };
    let run = run_chain(&body, sampler, &cfg, budget, start)?;
    let inside = run.samples.iter().filter(|p| body.contains(p)).count();

    let mut report = blank_report(seed);
    report.config = ConfigEcho {
        sampler: Some(sampler),
        tau: Some(cfg.tau),
        max_reflections: Some(cfg.max_reflections),
        seed,
        rng: run.rng.clone(),
        budget: Some(budget),
        start: Some(run.start.clone()),
        precondition: None,
    };
    report.body = Some(descriptor.clone());
    report.bo_calls = run.bo_calls;
    report.samples_emitted = run.samples.len() as u64;
    report.diagnostics = json!({
        "mean_reflections": run.mean_reflections(),
        "samples_inside": inside,
    });
    report.checks = vec![CheckResult::within(
        "samples_inside_body",
        inside as f64,
        run.samples.len() as f64,
        0.0,
    )];
    report.samples = Some(run.samples);
    report.reflections_per_sample = Some(run.reflections_per_sample);
    report.restarts_per_sample = Some(run.restarts_per_sample);
    Ok(report)
}
