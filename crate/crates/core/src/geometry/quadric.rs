//! Ball and ellipsoid oracles (closed-form quadratic intersections).

use crate::linalg::{dot, normalize_mut, sub};

use super::{BoundaryHit, Chord, ChordEnd, ExitOutcome};

pub(super) fn ball_contains(center: &[f64], radius: f64, p: &[f64]) -> bool {
    crate::linalg::dist(p, center) < radius
}

pub(super) fn ball_first_exit(
    center: &[f64],
    radius: f64,
    x: &[f64],
    d: &[f64],
    eps_fwd: f64,
) -> ExitOutcome {
    let w = sub(x, center);
    let b = dot(&w, d);
    let c0 = dot(&w, &w) - radius * radius;
    let disc = b * b - c0;
    if disc <= 0.0 {
        return ExitOutcome::Escaped;
    }
    let t = -b + disc.sqrt();
    if t <= eps_fwd {
        return ExitOutcome::Escaped;
    }
    let normal = (0..x.len())
        .map(|i| (center[i] - (x[i] + t * d[i])) / radius)
        .collect();
    ExitOutcome::Hit(BoundaryHit {
        t,
        normal,
        smooth: true,
    })
}

pub(super) fn ball_chord(center: &[f64], radius: f64, x: &[f64], d: &[f64]) -> Chord {
    let w = sub(x, center);
    let b = dot(&w, d);
    let c0 = dot(&w, &w) - radius * radius;
    let disc = (b * b - c0).max(0.0).sqrt();
    Chord {
        t_under: ChordEnd::Finite(-b - disc),
        t_over: ChordEnd::Finite(-b + disc),
    }
}

pub(super) fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, x)).collect()
}

fn quadform(a: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    a.iter().zip(x).map(|(row, &xi)| xi * dot(row, y)).sum()
}

pub(super) fn ellipsoid_contains(a: &[Vec<f64>], p: &[f64]) -> bool {
    quadform(a, p, p) < 1.0
}

fn ellipsoid_roots(a: &[Vec<f64>], x: &[f64], d: &[f64]) -> Option<(f64, f64)> {
    let qa = quadform(a, d, d);
    let qb = quadform(a, x, d);
    let qc = quadform(a, x, x) - 1.0;
    let disc = qb * qb - qa * qc;
    if disc <= 0.0 || qa <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some(((-qb - sq) / qa, (-qb + sq) / qa))
}

pub(super) fn ellipsoid_first_exit(
    a: &[Vec<f64>],
    x: &[f64],
    d: &[f64],
    eps_fwd: f64,
) -> ExitOutcome {
    let Some((_, t)) = ellipsoid_roots(a, x, d) else {
        return ExitOutcome::Escaped;
    };
    if t <= eps_fwd {
        return ExitOutcome::Escaped;
    }
    let hit: Vec<f64> = (0..x.len()).map(|i| x[i] + t * d[i]).collect();
    let mut normal: Vec<f64> = matvec(a, &hit).iter().map(|v| -v).collect();
    normalize_mut(&mut normal);
    ExitOutcome::Hit(BoundaryHit {
        t,
        normal,
        smooth: true,
    })
}

pub(super) fn ellipsoid_chord(a: &[Vec<f64>], x: &[f64], d: &[f64]) -> Chord {
    match ellipsoid_roots(a, x, d) {
        Some((lo, hi)) => Chord {
            t_under: ChordEnd::Finite(lo),
            t_over: ChordEnd::Finite(hi),
        },
        None => Chord {
            t_under: ChordEnd::Finite(0.0),
            t_over: ChordEnd::Finite(0.0),
        },
    }
}
