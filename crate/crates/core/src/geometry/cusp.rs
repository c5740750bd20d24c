//! Concave cusp `{(x_1, x_2) : -x_1^4 < x_2 < x_1^4, 0 < x_1 < 1}`.
//!
//! The walls `x_2 = +/- x_1^4` give quartic crossing equations along a ray;
//! the region pinches to a nonsmooth apex at the origin.

use crate::linalg::normalize_mut;

use super::roots::real_roots;
use super::{BoundaryHit, FACET_TIE_REL};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Surface {
    Upper,
    Lower,
    RightFace,
}

pub(super) fn contains(p: &[f64]) -> bool {
    let wall = p[0] * p[0] * p[0] * p[0];
    p[0] > 0.0 && p[0] < 1.0 && p[1] > -wall && p[1] < wall
}

pub(super) fn first_exit(x: &[f64], d: &[f64], eps_fwd: f64, scale: f64) -> Option<BoundaryHit> {
    let tol = 1e-9 * scale.max(1.0);
    let (a, bx) = (x[0], d[0]);
    let a2 = a * a;
    let a3 = a2 * a;
    // (x1 + t d1)^4 expanded
    let pow4 = [
        a2 * a2,
        4.0 * a3 * bx,
        6.0 * a2 * bx * bx,
        4.0 * a * bx * bx * bx,
        bx * bx * bx * bx,
    ];
    let upper = [x[1] - pow4[0], d[1] - pow4[1], -pow4[2], -pow4[3], -pow4[4]];
    let lower = [x[1] + pow4[0], d[1] + pow4[1], pow4[2], pow4[3], pow4[4]];

    let mut cands: Vec<(f64, Surface)> = Vec::new();
    for t in real_roots(&upper) {
        if t > eps_fwd {
            let x1 = a + t * bx;
            if (-tol..=1.0 + tol).contains(&x1) {
                cands.push((t, Surface::Upper));
            }
        }
    }
    for t in real_roots(&lower) {
        if t > eps_fwd {
            let x1 = a + t * bx;
            if (-tol..=1.0 + tol).contains(&x1) {
                cands.push((t, Surface::Lower));
            }
        }
    }
    if bx > 1e-300 {
        let t = (1.0 - a) / bx;
        if t > eps_fwd && (x[1] + t * d[1]).abs() <= 1.0 + tol {
            cands.push((t, Surface::RightFace));
        }
    }
    cands.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let &(t, surface) = cands.first()?;

    let hit = [x[0] + t * d[0], x[1] + t * d[1]];
    let tie = cands
        .iter()
        .skip(1)
        .any(|&(t2, s2)| s2 != surface && t2 - t <= FACET_TIE_REL * t);
    let near_apex = hit[0].hypot(hit[1]) <= tol;
    let near_rim = (hit[0] - 1.0).hypot(hit[1].abs() - 1.0) <= tol;
    let smooth = !(tie || near_apex || near_rim);

    let mut normal = match surface {
        Surface::Upper => vec![4.0 * hit[0] * hit[0] * hit[0], -1.0],
        Surface::Lower => vec![4.0 * hit[0] * hit[0] * hit[0], 1.0],
        Surface::RightFace => vec![-1.0, 0.0],
    };
    normalize_mut(&mut normal);
    Some(BoundaryHit { t, normal, smooth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        assert!(contains(&[0.9, 0.0]));
        assert!(contains(&[0.9, 0.6])); // 0.9^4 = 0.6561
        assert!(!contains(&[0.9, 0.66]));
        assert!(!contains(&[1.1, 0.0]));
        assert!(!contains(&[0.5, 0.0625])); // boundary itself excluded
    }

    #[test]
    fn first_wall_hit_moving_left() {
        // from (0.9, eps) along (-1, 0) the upper wall is met where x1^4 = eps
        let eps = 1e-3f64;
        let x = [0.9, eps];
        let d = [-1.0, 0.0];
        let hit = first_exit(&x, &d, 2e-12, 2.0).expect("hit");
        let expect = 0.9 - eps.powf(0.25);
        assert!((hit.t - expect).abs() < 1e-10, "t = {}", hit.t);
        assert!(hit.smooth);
        assert!(hit.normal[1] < 0.0); // upper wall pushes down
    }

    #[test]
    fn right_face_hit() {
        let x = [0.5, 0.0];
        let d = [1.0, 0.0];
        let hit = first_exit(&x, &d, 2e-12, 2.0).expect("hit");
        assert!((hit.t - 0.5).abs() < 1e-12);
        assert_eq!(hit.normal, vec![-1.0, 0.0]);
    }
}
