//! Standard simplex `{x in R^{n+1} : x_i > 0, sum x_i = 1}` in ambient
//! coordinates. Directions live in the hyperplane `sum d_i = 0`.

use super::{BoundaryHit, Chord, ChordEnd, ExitOutcome, FACET_TIE_REL};

const PLANE_TOL: f64 = 1e-9;

pub(super) fn contains(p: &[f64]) -> bool {
    p.iter().all(|&x| x > 0.0) && (p.iter().sum::<f64>() - 1.0).abs() <= PLANE_TOL
}

/// Inward unit normal of the facet `x_k = 0`, within the simplex hyperplane:
/// `sqrt(1/(n(n+1))) * [-1, ..., n at k, ..., -1]`.
pub(super) fn facet_normal(ambient: usize, k: usize) -> Vec<f64> {
    let n = (ambient - 1) as f64;
    let f = (1.0 / (n * (n + 1.0))).sqrt();
    (0..ambient)
        .map(|i| if i == k { n * f } else { -f })
        .collect()
}

pub(super) fn first_exit(x: &[f64], d: &[f64], eps_fwd: f64) -> ExitOutcome {
    let mut best = f64::INFINITY;
    let mut best_k = usize::MAX;
    let mut second = f64::INFINITY;
    for k in 0..x.len() {
        if d[k] < -1e-300 {
            let t = -x[k] / d[k];
            if t > eps_fwd {
                if t < best {
                    second = best;
                    best = t;
                    best_k = k;
                } else if t < second {
                    second = t;
                }
            }
        }
    }
    if best_k == usize::MAX {
        return ExitOutcome::Escaped;
    }
    let smooth = !(second.is_finite() && second - best <= FACET_TIE_REL * best);
    ExitOutcome::Hit(BoundaryHit {
        t: best,
        normal: facet_normal(x.len(), best_k),
        smooth,
    })
}

pub(super) fn chord(x: &[f64], d: &[f64]) -> Chord {
    let mut over = f64::INFINITY;
    let mut under = f64::NEG_INFINITY;
    for k in 0..x.len() {
        if d[k].abs() > 1e-300 {
            let t = -x[k] / d[k];
            if t > 0.0 {
                over = over.min(t);
            } else if t < 0.0 {
                under = under.max(t);
            }
        }
    }
    Chord {
        t_under: ChordEnd::from_finite(under),
        t_over: ChordEnd::from_finite(over),
    }
}

/// Projects an ambient vector onto the hyperplane `sum d_i = 0`.
pub(super) fn project_direction(d: &mut [f64]) {
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    for v in d.iter_mut() {
        *v -= mean;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, norm};

    #[test]
    fn facet_normal_is_unit_and_in_plane() {
        for ambient in [3, 11, 51] {
            for k in [0, 1, ambient - 1] {
                let s = facet_normal(ambient, k);
                assert!((norm(&s) - 1.0).abs() < 1e-12);
                assert!(s.iter().sum::<f64>().abs() < 1e-12);
                assert!(s[k] > 0.0);
            }
        }
    }

    #[test]
    fn exit_from_barycenter() {
        // n = 2 simplex in R^3, direction toward facet x_2 = 0.
        let x = [1.0 / 3.0; 3];
        let mut d = vec![1.0, 1.0, -2.0];
        project_direction(&mut d);
        let r = norm(&d);
        d.iter_mut().for_each(|v| *v /= r);
        match first_exit(&x, &d, 1e-12) {
            ExitOutcome::Hit(h) => {
                let hit: Vec<f64> = (0..3).map(|i| x[i] + h.t * d[i]).collect();
                assert!(hit[2].abs() < 1e-12);
                assert!(h.smooth);
                // normal formula at k = 2 for n = 2: sqrt(1/6) [-1, -1, 2]
                let f = (1.0f64 / 6.0).sqrt();
                assert!((h.normal[0] + f).abs() < 1e-12);
                assert!((h.normal[2] - 2.0 * f).abs() < 1e-12);
                // reflected direction stays in the hyperplane
                let refl = crate::geometry::reflect_direction(&d, &h.normal);
                assert!(refl.iter().sum::<f64>().abs() < 1e-12);
                assert!(dot(&refl, &h.normal) > 0.0);
            }
            ExitOutcome::Escaped => panic!("simplex ray escaped"),
        }
    }
}
