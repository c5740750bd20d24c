//! Command-line front end: sample a body, run a named experiment, or list
//! the built-in bodies and experiments.
//!
//! Exit codes: 0 = success and all expected-value checks passed, 1 = a check
//! failed, 2 = usage or configuration error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use bwalk::experiments::{
    emit_report, list_experiments, run_scenario, CheckResult, ConfigEcho, OutputFormat, RunReport,
    Scenario,
};
use bwalk::geometry::BodyDescriptor;
use bwalk::precondition::{dikin_map, transform_polytope};
use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};

#[derive(Parser)]
#[command(name = "bwalk", about = "Billiard Walk and Hit-and-Run sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a body described by a JSON file.
    Sample {
        /// Body descriptor file, e.g. {"type":"unit_cube","n":10}
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_parser = parse_sampler, default_value = "bw")]
        sampler: Sampler,
        /// Trajectory-length scale; defaults to the body diameter.
        #[arg(long)]
        tau: Option<f64>,
        /// Reflection cap per trajectory; defaults to 10 n.
        #[arg(long)]
        max_reflections: Option<u32>,
        /// Number of samples to draw.
        #[arg(long, conflicts_with = "bo_budget")]
        samples: Option<u64>,
        /// Boundary-oracle budget instead of a sample count.
        #[arg(long)]
        bo_budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Apply Dikin-ellipsoid preconditioning (polytopes only).
        #[arg(long, value_parser = ["dikin"])]
        precondition: Option<String>,
        /// Starting point as comma-separated coordinates.
        #[arg(long)]
        start: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
        format: String,
    },
    /// Run a named experiment with reference defaults.
    Experiment {
        name: String,
        /// Scenario parameter overrides, repeatable: --param alpha=0.785
        #[arg(long = "param", value_parser = parse_key_val)]
        params: Vec<(String, String)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show the supported body descriptors with JSON examples.
    ListBodies,
    /// Show the built-in experiments.
    ListExperiments,
}

fn parse_sampler(s: &str) -> Result<Sampler, String> {
    match s {
        "bw" => Ok(Sampler::Bw),
        "hr" => Ok(Sampler::Hr),
        other => Err(format!("unknown sampler {other:?} (expected bw or hr)")),
    }
}

fn parse_key_val(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> bwalk::Result<bool> {
    match cli.command {
        Command::Sample {
            body,
            sampler,
            tau,
            max_reflections,
            samples,
            bo_budget,
            seed,
            precondition,
            start,
            out,
            format,
        } => {
            let started = Instant::now();
            let descriptor: BodyDescriptor = serde_json::from_reader(std::fs::File::open(&body)?)?;
            let built = descriptor.build()?;
            let budget = match (samples, bo_budget) {
                (_, Some(n)) => Budget::BoCalls(n),
                (Some(n), None) => Budget::Samples(n),
                (None, None) => Budget::Samples(1000),
            };
            let start_point: Option<Vec<f64>> = match &start {
                Some(s) => Some(
                    s.split(',')
                        .map(|v| {
                            v.trim()
                                .parse::<f64>()
                                .map_err(|e| bwalk::Error::Parse(format!("start: {e}")))
                        })
                        .collect::<bwalk::Result<_>>()?,
                ),
                None => None,
            };

            let cfg = match (tau, max_reflections) {
                (Some(t), Some(r)) => SamplerConfig::new(t, r, seed),
                _ => {
                    let mut base = SamplerConfig::for_body(&built, seed)?;
                    if let Some(t) = tau {
                        base.tau = t;
                    }
                    if let Some(r) = max_reflections {
                        base.max_reflections = r;
                    }
                    base
                }
            };
            cfg.validate()?;

            let (run, precond_summary, mapped) = if precondition.as_deref() == Some("dikin") {
                let map = dikin_map(&built)?;
                let image = transform_polytope(&built, &map)?;
                let image_cfg = SamplerConfig {
                    tau: image.diameter().unwrap_or(cfg.tau),
                    ..cfg
                };
                let run = run_chain(&image, sampler, &image_cfg, budget, None)?;
                let mapped: Vec<Vec<f64>> =
                    run.samples.iter().map(|y| map.to_original(y)).collect();
                (run, Some(map.summary()), Some(mapped))
            } else {
                let run = run_chain(&built, sampler, &cfg, budget, start_point.as_deref())?;
                (run, None, None)
            };

            let samples_out = mapped.unwrap_or_else(|| run.samples.clone());
            let inside = samples_out.iter().filter(|p| built.contains(p)).count();
            let report = RunReport {
                scenario: None,
                config: ConfigEcho {
                    sampler: Some(sampler),
                    tau: Some(run.config.tau),
                    max_reflections: Some(run.config.max_reflections),
                    seed,
                    rng: run.rng.clone(),
                    budget: Some(budget),
                    start: Some(run.start.clone()),
                    precondition: precond_summary,
                },
                body: Some(descriptor),
                bo_calls: run.bo_calls,
                samples_emitted: samples_out.len() as u64,
                samples: Some(samples_out),
                reflections_per_sample: Some(run.reflections_per_sample.clone()),
                restarts_per_sample: Some(run.restarts_per_sample.clone()),
                diagnostics: serde_json::json!({
                    "mean_reflections": run.mean_reflections(),
                    "samples_inside": inside,
                }),
                checks: vec![CheckResult::within(
                    "samples_inside_body",
                    inside as f64,
                    run.samples.len() as f64,
                    0.0,
                )],
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            write_out(&report, out, &format)?;
            Ok(report.all_checks_pass())
        }
        Command::Experiment {
            name,
            params,
            seed,
            out,
        } => {
            let map: BTreeMap<String, String> = params.into_iter().collect();
            let scenario = Scenario::from_params(&name, &map, seed)?;
            let report = run_scenario(&scenario)?;
            for check in &report.checks {
                let status = if check.pass { "pass" } else { "FAIL" };
                eprintln!(
                    "[{status}] {}: value {:.6} (expected {} {}, tol {})",
                    check.name, check.value, check.op, check.expected, check.tolerance
                );
            }
            write_out(&report, out, "json")?;
            Ok(report.all_checks_pass())
        }
        Command::ListBodies => {
            for (name, example) in body_examples() {
                println!("{name:20} {example}");
            }
            Ok(true)
        }
        Command::ListExperiments => {
            for (name, blurb) in list_experiments() {
                println!("{name:20} {blurb}");
            }
            Ok(true)
        }
    }
}

fn write_out(report: &RunReport, out: Option<PathBuf>, format: &str) -> bwalk::Result<()> {
    let format: OutputFormat = format.parse()?;
    match out {
        Some(path) => emit_report(report, format, &path),
        None => {
            match format {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(report)?);
                }
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    bwalk::experiments::write_samples_csv(
                        report.samples.as_deref().unwrap_or(&[]),
                        &mut buf,
                    )?;
                    print!("{}", String::from_utf8_lossy(&buf));
                }
            }
            Ok(())
        }
    }
}

fn body_examples() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "polytope",
            r#"{"type":"polytope","A":[[1,0],[-1,0],[0,1],[0,-1]],"b":[1,1,1,1]}"#,
        ),
        ("ball", r#"{"type":"ball","center":[0,0,0],"radius":1.0}"#),
        ("ellipsoid", r#"{"type":"ellipsoid","A":[[1,0],[0,4]]}"#),
        (
            "axis_box",
            r#"{"type":"axis_box","lower":[0,0],"upper":[2,1]}"#,
        ),
        ("unit_cube", r#"{"type":"unit_cube","n":10}"#),
        ("standard_simplex", r#"{"type":"standard_simplex","n":10}"#),
        ("toroid", r#"{"type":"toroid","n":10,"r":0.333}"#),
        ("strip", r#"{"type":"strip","M":1000.0}"#),
        ("orthant", r#"{"type":"orthant","n":2}"#),
        (
            "angle_triangle",
            r#"{"type":"angle_triangle","alpha":0.7853981633974483}"#,
        ),
        ("concave_cusp", r#"{"type":"concave_cusp"}"#),
        (
            "truncated_ellipse",
            r#"{"type":"truncated_ellipse","variant":"convex"}"#,
        ),
    ]
}
