//! Cross-cutting oracle and sampler invariants.

mod common;

use bwalk::geometry::{march_and_bisect, reflect_direction, Body, BodyDescriptor, ExitOutcome};
use bwalk::rng::RandomStream;
use bwalk::samplers::{hr_step, propagate, ChainState, Propagation};
use common::{boundary_residual, oracle_bodies, random_interior};
use proptest::prelude::*;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// First exits land on the boundary (residual within tolerance), a step back
/// along the ray stays interior, and stepping along the inward normal
/// re-enters the body.
#[test]
fn oracle_consistency_on_random_rays() {
    let mut stream = RandomStream::new(2024);
    for body in oracle_bodies() {
        let rays = 10_000;
        let scale = body.scale();
        for _ in 0..rays {
            let origin = random_interior(&body, &mut stream);
            let d = body.sample_direction(&mut stream).unwrap();
            let hit = match body.first_exit(&origin, &d).unwrap() {
                ExitOutcome::Hit(h) => h,
                ExitOutcome::Escaped => {
                    panic!("{:?}: bounded body escaped", body.descriptor())
                }
            };
            let hit_p: Vec<f64> = origin
                .iter()
                .zip(&d)
                .map(|(x, di)| x + hit.t * di)
                .collect();
            let res = boundary_residual(body.descriptor(), &hit_p);
            assert!(
                res <= 1e-9 * scale,
                "{:?}: residual {res:.3e} at {hit_p:?}",
                body.descriptor()
            );
            let back: Vec<f64> = origin
                .iter()
                .zip(&d)
                .map(|(x, di)| x + (hit.t - body.eps_fwd()) * di)
                .collect();
            assert!(
                body.contains(&back),
                "{:?}: point just before the hit is not interior",
                body.descriptor()
            );
            let reentry: Vec<f64> = hit_p
                .iter()
                .zip(&hit.normal)
                .map(|(x, s)| x + body.eps_fwd() * s)
                .collect();
            assert!(
                body.contains(&reentry),
                "{:?}: inward normal does not re-enter at {hit_p:?}",
                body.descriptor()
            );
        }
    }
}

#[test]
fn chord_matches_first_exit_on_convex_bodies() {
    let mut stream = RandomStream::new(55);
    for body in oracle_bodies() {
        let convex = !matches!(
            body.descriptor(),
            BodyDescriptor::Toroid { .. }
                | BodyDescriptor::ConcaveCusp {}
                | BodyDescriptor::TruncatedEllipse { .. }
        );
        if !convex {
            continue;
        }
        for _ in 0..10_000 {
            let p = random_interior(&body, &mut stream);
            let d = body.sample_direction(&mut stream).unwrap();
            let chord = body.chord(&p, &d).unwrap();
            let (_, t_over) = chord.finite().expect("bounded chord");
            match body.first_exit(&p, &d).unwrap() {
                ExitOutcome::Hit(h) => assert!(
                    (t_over - h.t).abs() <= 1e-10 * body.scale().max(1.0),
                    "{:?}: chord {t_over} vs exit {}",
                    body.descriptor(),
                    h.t
                ),
                ExitOutcome::Escaped => panic!("bounded body escaped"),
            }
        }
    }
}

/// Closed-form intersections agree with an independent march-and-bisect root
/// finder over the membership predicate on the curved bodies.
#[test]
fn curved_oracles_match_marching_bisection() {
    let mut stream = RandomStream::new(99);
    for body in oracle_bodies() {
        let curved = matches!(
            body.descriptor(),
            BodyDescriptor::Toroid { .. }
                | BodyDescriptor::ConcaveCusp {}
                | BodyDescriptor::TruncatedEllipse { .. }
        );
        if !curved {
            continue;
        }
        let step = 1e-4 * body.scale();
        for _ in 0..1000 {
            let p = random_interior(&body, &mut stream);
            let d = body.sample_direction(&mut stream).unwrap();
            let t_oracle = match body.first_exit(&p, &d).unwrap() {
                ExitOutcome::Hit(h) => h.t,
                ExitOutcome::Escaped => panic!("bounded body escaped"),
            };
            let t_march = march_and_bisect(|q| body.contains(q), &p, &d, step, 2.5 * body.scale())
                .expect("marching found no boundary");
            assert!(
                (t_oracle - t_march).abs() <= 1e-9 * body.scale().max(1.0),
                "{:?}: oracle {t_oracle} vs march {t_march}",
                body.descriptor()
            );
        }
    }
}

proptest! {
    #[test]
    fn reflection_properties(
        seed in 0u64..1_000_000,
        n in 2usize..40,
    ) {
        let mut stream = RandomStream::new(seed);
        let d = stream.unit_direction(n).unwrap();
        let s = stream.unit_direction(n).unwrap();
        let r = reflect_direction(&d, &s);
        prop_assert!((norm(&r) - 1.0).abs() <= 1e-12);
        // applying the same reflection twice restores the direction
        let rr = reflect_direction(&r, &s);
        for i in 0..n {
            prop_assert!((rr[i] - d[i]).abs() <= 1e-12);
        }
        // the normal component flips exactly
        prop_assert!((dot(&r, &s) + dot(&d, &s)).abs() <= 1e-12);
    }
}

#[test]
fn direction_norm_survives_long_trajectories() {
    // ~10^4 reflections inside the unit square
    let body = BodyDescriptor::UnitCube { n: 2 }.build().unwrap();
    let mut stream = RandomStream::new(7);
    let d = stream.unit_direction(2).unwrap();
    match propagate(&body, &[0.3, 0.7], &d, 6_000.0, 40_000).unwrap() {
        Propagation::Completed {
            direction,
            reflections,
            ..
        } => {
            assert!(reflections > 8_000, "only {reflections} reflections");
            assert!((norm(&direction) - 1.0).abs() <= 1e-9);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn trajectories_reverse_to_their_start() {
    let bodies = vec![
        BodyDescriptor::Ball {
            center: vec![0.0; 3],
            radius: 1.0,
        }
        .build()
        .unwrap(),
        BodyDescriptor::UnitCube { n: 5 }.build().unwrap(),
        BodyDescriptor::Toroid { n: 3, r: 1.0 / 3.0 }
            .build()
            .unwrap(),
        BodyDescriptor::TruncatedEllipse {
            variant: bwalk::geometry::TruncatedVariant::Nonconvex,
        }
        .build()
        .unwrap(),
        BodyDescriptor::StandardSimplex { n: 5 }.build().unwrap(),
    ];
    let mut stream = RandomStream::new(31);
    for body in bodies {
        let diam = body.diameter().unwrap();
        let mut reversed = 0;
        for _ in 0..200 {
            let start = random_interior(&body, &mut stream);
            let d = body.sample_direction(&mut stream).unwrap();
            let length = 2.0 * diam * stream.uniform01();
            if let Propagation::Completed { end, direction, .. } =
                propagate(&body, &start, &d, length, 100_000).unwrap()
            {
                let back: Vec<f64> = direction.iter().map(|v| -v).collect();
                if let Propagation::Completed { end: home, .. } =
                    propagate(&body, &end, &back, length, 100_000).unwrap()
                {
                    let err = home
                        .iter()
                        .zip(&start)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    assert!(
                        err <= 1e-9 * diam,
                        "{:?}: reversal error {err:.3e}",
                        body.descriptor()
                    );
                    reversed += 1;
                }
            }
        }
        assert!(
            reversed > 150,
            "too few reversible trajectories: {reversed}"
        );
    }
}

/// Simplex directions (sampled and reflected) stay in the hyperplane
/// `sum d_i = 0`, and facet normals match the ambient formula
/// `sqrt(1/(n(n+1))) [-1, ..., n, ..., -1]`.
#[test]
fn simplex_directions_live_in_the_hyperplane() {
    let n = 10;
    let body = BodyDescriptor::StandardSimplex { n }.build().unwrap();
    let mut stream = RandomStream::new(88);
    let f = (1.0 / (n as f64 * (n as f64 + 1.0))).sqrt();
    for _ in 0..1000 {
        let p = random_interior(&body, &mut stream);
        let d = body.sample_direction(&mut stream).unwrap();
        assert!(d.iter().sum::<f64>().abs() <= 1e-12);
        assert!((norm(&d) - 1.0).abs() <= 1e-12);
        let ExitOutcome::Hit(h) = body.first_exit(&p, &d).unwrap() else {
            panic!("simplex ray escaped");
        };
        assert!(h.normal.iter().sum::<f64>().abs() <= 1e-12);
        let k = h
            .normal
            .iter()
            .position(|&v| v > 0.0)
            .expect("one positive entry");
        for (i, &v) in h.normal.iter().enumerate() {
            let want = if i == k { n as f64 * f } else { -f };
            assert!((v - want).abs() <= 1e-12);
        }
        let refl = reflect_direction(&d, &h.normal);
        assert!(refl.iter().sum::<f64>().abs() <= 1e-12);
    }
}

/// Single Hit-and-Run steps through an interval are uniform on it.
#[test]
fn hr_single_step_uniform_on_interval() {
    let body = BodyDescriptor::AxisBox {
        lower: vec![0.0],
        upper: vec![1.0],
    }
    .build()
    .unwrap();
    let mut stream = RandomStream::new(63);
    let n = 100_000;
    let mut draws = Vec::with_capacity(n);
    for _ in 0..n {
        let mut state = ChainState::new(vec![0.5]);
        let p = hr_step(&body, &mut state, &mut stream).unwrap();
        draws.push(p[0]);
    }
    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ks: f64 = 0.0;
    for (i, x) in draws.iter().enumerate() {
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        ks = ks.max((x - lo).abs()).max((x - hi).abs());
    }
    assert!(ks < 0.01, "KS distance {ks}");
}

#[test]
fn scenario_reports_are_deterministic() {
    use bwalk::experiments::{run_scenario, Scenario};
    use std::collections::BTreeMap;
    let mut params = BTreeMap::new();
    params.insert("trials".to_string(), "500".to_string());
    let scenario = Scenario::from_params("angle", &params, 5).unwrap();
    let mut a = run_scenario(&scenario).unwrap();
    let mut b = run_scenario(&scenario).unwrap();
    a.wall_time_ms = 0.0;
    b.wall_time_ms = 0.0;
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

/// Chains never emit a point outside the body.
#[test]
fn emitted_samples_are_members() {
    use bwalk::samplers::{run_chain, Budget, Sampler, SamplerConfig};
    for body in oracle_bodies() {
        let cfg = SamplerConfig::for_body(&body, 8).unwrap();
        for sampler in [Sampler::Bw, Sampler::Hr] {
            let run = run_chain(&body, sampler, &cfg, Budget::Samples(2_000), None).unwrap();
            assert!(
                run.samples.iter().all(|p| body.contains(p)),
                "{:?} emitted an exterior point",
                body.descriptor()
            );
        }
    }
}

fn dikin_body(rows: Vec<(Vec<f64>, f64)>) -> Body {
    let (a, b): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    BodyDescriptor::Polytope { a, b }.build().unwrap()
}

/// Uniform samples of the preconditioned image, mapped back, pass the
/// slab frequency tests in original coordinates (the Jacobian is constant).
#[test]
fn dikin_pushforward_preserves_uniformity() {
    use bwalk::diagnostics::{chi_square_statistic, CHI_SQUARE_BAND_9DOF};
    use bwalk::precondition::{dikin_map, transform_polytope};

    let body = dikin_body(vec![
        (vec![1.0, 0.0], 1.0),
        (vec![-1.0, 0.0], 1.0),
        (vec![0.0, 1.0], 8.0),
        (vec![0.0, -1.0], 8.0),
    ]);
    let map = dikin_map(&body).unwrap();
    let image = transform_polytope(&body, &map).unwrap();

    // the image of a box is a cube: draw exact uniforms there and map back
    let mut stream = RandomStream::new(17);
    let side = 2f64.sqrt();
    let n_samples = 10_000;
    // the image is the square |y_i| < sqrt(2); sanity-check one facet
    assert!(image.contains(&[side - 1e-9, 0.0]));
    assert!(!image.contains(&[side + 1e-9, 0.0]));
    let samples: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| {
            let y: Vec<f64> = (0..2)
                .map(|_| side * (2.0 * stream.uniform01() - 1.0))
                .collect();
            map.to_original(&y)
        })
        .collect();
    for (axis, half) in [(0usize, 1.0f64), (1usize, 8.0f64)] {
        let mut counts = [0u64; 10];
        for p in &samples {
            assert!(body.contains(p));
            let u = (p[axis] + half) / (2.0 * half);
            counts[((u * 10.0) as usize).min(9)] += 1;
        }
        let observed: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let expected = vec![n_samples as f64 / 10.0; 10];
        let r = chi_square_statistic(&observed, &expected).unwrap();
        assert!(
            r.passes(CHI_SQUARE_BAND_9DOF),
            "axis {axis}: chi-square {}",
            r.statistic
        );
    }
}
