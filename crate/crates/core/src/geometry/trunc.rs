//! Truncated ellipses `x_1^2/4 + x_2^2 < 1` cut by `x_1 < sqrt(3) -/+ |x_2|`
//! (convex / nonconvex variants). The cut lines meet at the right focus
//! `(sqrt(3), 0)`, a nonsmooth corner.

use crate::linalg::normalize_mut;

use super::{BoundaryHit, FACET_TIE_REL};

pub(super) const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Surface {
    Ellipse,
    LinePlus,  // x1 + x2 = sqrt(3)
    LineMinus, // x1 - x2 = sqrt(3)
}

/// `x_2` of the point where the active cut line meets the ellipse.
pub(super) fn corner_y(convex: bool) -> f64 {
    let s2 = 2.0f64.sqrt();
    if convex {
        (SQRT3 + 2.0 * s2) / 5.0
    } else {
        (2.0 * s2 - SQRT3) / 5.0
    }
}

pub(super) fn corners(convex: bool) -> [[f64; 2]; 3] {
    let y = corner_y(convex);
    let x = if convex { SQRT3 - y } else { SQRT3 + y };
    [[SQRT3, 0.0], [x, y], [x, -y]]
}

fn in_ellipse(p: &[f64], tol: f64) -> bool {
    p[0] * p[0] / 4.0 + p[1] * p[1] <= 1.0 + tol
}

pub(super) fn contains(convex: bool, p: &[f64]) -> bool {
    if p[0] * p[0] / 4.0 + p[1] * p[1] >= 1.0 {
        return false;
    }
    if convex {
        p[0] + p[1] < SQRT3 && p[0] - p[1] < SQRT3
    } else {
        p[0] < SQRT3 + p[1].abs()
    }
}

pub(super) fn first_exit(
    convex: bool,
    x: &[f64],
    d: &[f64],
    eps_fwd: f64,
    scale: f64,
) -> Option<BoundaryHit> {
    let tol = 1e-9 * scale.max(1.0);
    let y_star = corner_y(convex);
    let mut cands: Vec<(f64, Surface)> = Vec::new();

    let qa = d[0] * d[0] / 4.0 + d[1] * d[1];
    let qb = x[0] * d[0] / 4.0 + x[1] * d[1];
    let qc = x[0] * x[0] / 4.0 + x[1] * x[1] - 1.0;
    let disc = qb * qb - qa * qc;
    if disc > 0.0 && qa > 0.0 {
        let sq = disc.sqrt();
        for t in [(-qb - sq) / qa, (-qb + sq) / qa] {
            if t > eps_fwd {
                let p = [x[0] + t * d[0], x[1] + t * d[1]];
                let cap_ok = if convex {
                    p[0] + p[1] <= SQRT3 + tol && p[0] - p[1] <= SQRT3 + tol
                } else {
                    p[0] <= SQRT3 + p[1].abs() + tol
                };
                if cap_ok {
                    cands.push((t, Surface::Ellipse));
                }
            }
        }
    }

    // x1 + x2 = sqrt(3)
    let denom = d[0] + d[1];
    if denom.abs() > 1e-300 {
        let t = (SQRT3 - x[0] - x[1]) / denom;
        if t > eps_fwd {
            let p = [x[0] + t * d[0], x[1] + t * d[1]];
            let ok = in_ellipse(&p, tol)
                && if convex {
                    p[0] - p[1] <= SQRT3 + tol
                } else {
                    (-y_star - tol..=tol).contains(&p[1])
                };
            if ok {
                cands.push((t, Surface::LinePlus));
            }
        }
    }
    // x1 - x2 = sqrt(3)
    let denom = d[0] - d[1];
    if denom.abs() > 1e-300 {
        let t = (SQRT3 - x[0] + x[1]) / denom;
        if t > eps_fwd {
            let p = [x[0] + t * d[0], x[1] + t * d[1]];
            let ok = in_ellipse(&p, tol)
                && if convex {
                    p[0] + p[1] <= SQRT3 + tol
                } else {
                    (-tol..=y_star + tol).contains(&p[1])
                };
            if ok {
                cands.push((t, Surface::LineMinus));
            }
        }
    }

    cands.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let &(t, surface) = cands.first()?;
    let hit = [x[0] + t * d[0], x[1] + t * d[1]];

    let tie = cands
        .iter()
        .skip(1)
        .any(|&(t2, s2)| s2 != surface && t2 - t <= FACET_TIE_REL * t.max(1e-12));
    let near_corner = corners(convex)
        .iter()
        .any(|c| (hit[0] - c[0]).hypot(hit[1] - c[1]) <= tol);
    let smooth = !(tie || near_corner);

    let mut normal = match surface {
        Surface::Ellipse => vec![-hit[0] / 2.0, -2.0 * hit[1]],
        Surface::LinePlus => vec![-1.0, -1.0],
        Surface::LineMinus => vec![-1.0, 1.0],
    };
    normalize_mut(&mut normal);
    Some(BoundaryHit { t, normal, smooth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_variants() {
        // (1.78, 0.1): inside the ellipse; the convex cut excludes it, the
        // nonconvex notch keeps it
        assert!(!contains(true, &[1.78, 0.1]));
        assert!(contains(false, &[1.78, 0.1]));
        assert!(contains(true, &[0.0, 0.0]));
        assert!(contains(false, &[0.0, 0.0]));
        assert!(!contains(true, &[2.1, 0.0]));
    }

    #[test]
    fn corner_points_lie_on_both_surfaces() {
        for convex in [true, false] {
            let y = corner_y(convex);
            let x = if convex { SQRT3 - y } else { SQRT3 + y };
            assert!((x * x / 4.0 + y * y - 1.0).abs() < 1e-12, "on ellipse");
        }
    }

    #[test]
    fn focus_ray_hits_corner_nonsmooth() {
        // from inside along +x1 toward the focus corner (sqrt3, 0)
        for convex in [true, false] {
            let x = [0.0, 0.0];
            let d = [1.0, 0.0];
            let hit = first_exit(convex, &x, &d, 1e-12, 4.0).expect("hit");
            assert!((hit.t - SQRT3).abs() < 1e-9, "t = {}", hit.t);
            assert!(!hit.smooth, "corner hit must be flagged nonsmooth");
        }
    }

    #[test]
    fn left_exit_is_smooth_ellipse() {
        let x = [0.0, 0.0];
        let d = [-1.0, 0.0];
        let hit = first_exit(true, &x, &d, 1e-12, 4.0).expect("hit");
        assert!((hit.t - 2.0).abs() < 1e-12);
        assert!(hit.smooth);
        assert!(hit.normal[0] > 0.99);
    }
}
