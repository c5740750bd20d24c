//! Shared helpers for the integration suites: independent interior-point
//! samplers and test-side boundary residuals.

#![allow(dead_code)]

use bwalk::geometry::{Body, BodyDescriptor, TruncatedVariant};
use bwalk::rng::RandomStream;

/// Axis-aligned bounding box for rejection sampling.
fn bounding_box(desc: &BodyDescriptor) -> (Vec<f64>, Vec<f64>) {
    match desc {
        BodyDescriptor::UnitCube { n } => (vec![0.0; *n], vec![1.0; *n]),
        BodyDescriptor::AxisBox { lower, upper } => (lower.clone(), upper.clone()),
        BodyDescriptor::Strip { m } => (vec![-m, 0.0], vec![*m, 1.0]),
        BodyDescriptor::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        ),
        BodyDescriptor::Ellipsoid { a } => {
            let half: Vec<f64> = (0..a.len()).map(|i| 1.0 / a[i][i].sqrt()).collect();
            (half.iter().map(|h| -h).collect(), half)
        }
        BodyDescriptor::Polytope { .. } => {
            // test polytopes live inside [-2, 2]^n
            let n = match desc {
                BodyDescriptor::Polytope { a, .. } => a[0].len(),
                _ => unreachable!(),
            };
            (vec![-2.0; n], vec![2.0; n])
        }
        BodyDescriptor::Toroid { n, r } => {
            let mut lower = vec![-(1.0 + r); *n];
            let mut upper = vec![1.0 + r; *n];
            for i in 2..*n {
                lower[i] = -r;
                upper[i] = *r;
            }
            (lower, upper)
        }
        BodyDescriptor::ConcaveCusp {} => (vec![0.0, -1.0], vec![1.0, 1.0]),
        BodyDescriptor::TruncatedEllipse { .. } => (vec![-2.0, -1.0], vec![2.0, 1.0]),
        BodyDescriptor::AngleTriangle { alpha } => {
            let t = (alpha / 2.0).tan();
            (vec![-t, 0.0], vec![t, 1.0])
        }
        BodyDescriptor::StandardSimplex { .. } | BodyDescriptor::Orthant { .. } => {
            unreachable!("sampled directly")
        }
    }
}

/// Uniform interior point, independent of the chain machinery.
pub fn random_interior(body: &Body, stream: &mut RandomStream) -> Vec<f64> {
    match body.descriptor() {
        BodyDescriptor::StandardSimplex { n } => loop {
            let p = bwalk::diagnostics::reference::uniform_simplex(stream, *n);
            if body.contains(&p) {
                return p;
            }
        },
        BodyDescriptor::Orthant { n } => (0..*n).map(|_| stream.uniform01()).collect(),
        desc => {
            let (lower, upper) = bounding_box(desc);
            loop {
                let p: Vec<f64> = lower
                    .iter()
                    .zip(&upper)
                    .map(|(l, u)| l + stream.uniform01() * (u - l))
                    .collect();
                if body.contains(&p) {
                    return p;
                }
            }
        }
    }
}

/// Distance-like residual of the nearest boundary surface, evaluated from
/// the defining inequalities (independent of the oracle implementation).
pub fn boundary_residual(desc: &BodyDescriptor, p: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    match desc {
        BodyDescriptor::UnitCube { .. } => p
            .iter()
            .map(|&x| x.abs().min((1.0 - x).abs()))
            .fold(f64::INFINITY, f64::min),
        BodyDescriptor::AxisBox { lower, upper } => p
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(&x, (&l, &u))| (x - l).abs().min((u - x).abs()))
            .fold(f64::INFINITY, f64::min),
        BodyDescriptor::Strip { m } => {
            let horiz = (p[0] + m).abs().min((m - p[0]).abs());
            horiz.min(p[1].abs()).min((1.0 - p[1]).abs())
        }
        BodyDescriptor::Polytope { a, b } => a
            .iter()
            .zip(b)
            .map(|(row, &bi)| {
                let d: f64 = row.iter().zip(p).map(|(r, x)| r * x).sum();
                (bi - d).abs() / norm(row)
            })
            .fold(f64::INFINITY, f64::min),
        BodyDescriptor::Ball { center, radius } => {
            let d: f64 = p
                .iter()
                .zip(center)
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
                .sqrt();
            (d - radius).abs()
        }
        BodyDescriptor::Ellipsoid { a } => {
            let q: f64 = p
                .iter()
                .enumerate()
                .map(|(i, &xi)| xi * a[i].iter().zip(p).map(|(c, x)| c * x).sum::<f64>())
                .sum();
            let grad: Vec<f64> = (0..p.len())
                .map(|i| 2.0 * a[i].iter().zip(p).map(|(c, x)| c * x).sum::<f64>())
                .collect();
            (q - 1.0).abs() / norm(&grad).max(1e-12)
        }
        BodyDescriptor::StandardSimplex { .. } => {
            p.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min)
        }
        BodyDescriptor::Toroid { r, .. } => {
            let rho = p[0].hypot(p[1]);
            let g = (rho - 1.0) * (rho - 1.0) + p[2..].iter().map(|x| x * x).sum::<f64>();
            (g.sqrt() - r).abs()
        }
        BodyDescriptor::ConcaveCusp {} => {
            let wall = p[0] * p[0] * p[0] * p[0];
            let gn = (1.0 + 16.0 * p[0].powi(6)).sqrt();
            ((p[1] - wall).abs() / gn)
                .min((p[1] + wall).abs() / gn)
                .min((1.0 - p[0]).abs())
        }
        BodyDescriptor::TruncatedEllipse { .. } => {
            let q = p[0] * p[0] / 4.0 + p[1] * p[1];
            let grad = (p[0] * p[0] / 4.0 + 4.0 * p[1] * p[1]).sqrt().max(1e-12);
            let s3 = 3f64.sqrt();
            ((q - 1.0).abs() / grad)
                .min((s3 - p[0] - p[1]).abs() / 2f64.sqrt())
                .min((s3 - p[0] + p[1]).abs() / 2f64.sqrt())
        }
        BodyDescriptor::Orthant { .. } => p.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min),
        BodyDescriptor::AngleTriangle { alpha } => {
            let t = (alpha / 2.0).tan();
            let n = (1.0 + t * t).sqrt();
            ((p[0] - t * p[1]).abs() / n)
                .min((-p[0] - t * p[1]).abs() / n)
                .min((1.0 - p[1]).abs())
        }
    }
}

/// The bounded bodies exercised by the oracle suites.
pub fn oracle_bodies() -> Vec<Body> {
    vec![
        BodyDescriptor::UnitCube { n: 3 }.build().unwrap(),
        BodyDescriptor::AxisBox {
            lower: vec![-1.0, 0.5, -3.0],
            upper: vec![2.0, 1.5, -1.0],
        }
        .build()
        .unwrap(),
        BodyDescriptor::Polytope {
            a: vec![
                vec![1.0, 1.0],
                vec![-1.0, 1.0],
                vec![1.0, -1.0],
                vec![-1.0, -1.0],
            ],
            b: vec![1.0, 1.0, 1.0, 1.0],
        }
        .build()
        .unwrap(),
        BodyDescriptor::Ball {
            center: vec![0.5, -1.0, 0.25],
            radius: 1.5,
        }
        .build()
        .unwrap(),
        BodyDescriptor::Ellipsoid {
            a: vec![vec![2.0, 0.3], vec![0.3, 1.0]],
        }
        .build()
        .unwrap(),
        BodyDescriptor::StandardSimplex { n: 5 }.build().unwrap(),
        BodyDescriptor::Toroid { n: 3, r: 1.0 / 3.0 }
            .build()
            .unwrap(),
        BodyDescriptor::ConcaveCusp {}.build().unwrap(),
        BodyDescriptor::TruncatedEllipse {
            variant: TruncatedVariant::Convex,
        }
        .build()
        .unwrap(),
        BodyDescriptor::TruncatedEllipse {
            variant: TruncatedVariant::Nonconvex,
        }
        .build()
        .unwrap(),
        BodyDescriptor::Strip { m: 5.0 }.build().unwrap(),
        BodyDescriptor::AngleTriangle {
            alpha: std::f64::consts::FRAC_PI_4,
        }
        .build()
        .unwrap(),
    ]
}
