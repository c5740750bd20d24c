//! Ray and chord queries against halfspace systems `(a_i, x) < b_i` and
//! axis-aligned boxes.

use crate::linalg::dot;

use super::{BoundaryHit, Chord, ChordEnd, ExitOutcome, FACET_TIE_REL};

const DENOM_EPS: f64 = 1e-300;

#[derive(Debug, Clone)]
pub(super) struct RowSet {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    inv_norm: Vec<f64>,
}

impl RowSet {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        let inv_norm = a.iter().map(|row| 1.0 / crate::linalg::norm(row)).collect();
        Self { a, b, inv_norm }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.a
            .iter()
            .zip(&self.b)
            .all(|(row, &bi)| dot(row, p) < bi)
    }

    pub fn first_exit(&self, x: &[f64], d: &[f64], eps_fwd: f64) -> ExitOutcome {
        let mut best = f64::INFINITY;
        let mut best_i = usize::MAX;
        let mut second = f64::INFINITY;
        for (i, (row, &bi)) in self.a.iter().zip(&self.b).enumerate() {
            let denom = dot(row, d);
            if denom > DENOM_EPS {
                let t = (bi - dot(row, x)) / denom;
                if t > eps_fwd {
                    if t < best {
                        second = best;
                        best = t;
                        best_i = i;
                    } else if t < second {
                        second = t;
                    }
                }
            }
        }
        if best_i == usize::MAX {
            return ExitOutcome::Escaped;
        }
        let smooth = !(second.is_finite() && second - best <= FACET_TIE_REL * best);
        let normal = self.a[best_i]
            .iter()
            .map(|v| -v * self.inv_norm[best_i])
            .collect();
        ExitOutcome::Hit(BoundaryHit {
            t: best,
            normal,
            smooth,
        })
    }

    /// Segment bounds `t_under <= 0 <= t_over` of the line `x + t d` inside
    /// the system: `t_i = (b_i - (a_i, x)) / (a_i, d)`, upper end the smallest
    /// positive `t_i`, lower end the largest negative one. Rows parallel to
    /// the line are skipped.
    pub fn chord(&self, x: &[f64], d: &[f64]) -> Chord {
        let mut over = f64::INFINITY;
        let mut under = f64::NEG_INFINITY;
        for (row, &bi) in self.a.iter().zip(&self.b) {
            let denom = dot(row, d);
            if denom.abs() > DENOM_EPS {
                let t = (bi - dot(row, x)) / denom;
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
}

pub(super) fn box_contains(lower: &[f64], upper: &[f64], p: &[f64]) -> bool {
    p.iter()
        .zip(lower.iter().zip(upper))
        .all(|(&x, (&l, &u))| l < x && x < u)
}

pub(super) fn box_first_exit(
    lower: &[f64],
    upper: &[f64],
    x: &[f64],
    d: &[f64],
    eps_fwd: f64,
) -> ExitOutcome {
    let n = x.len();
    let mut best = f64::INFINITY;
    let mut best_axis = usize::MAX;
    let mut best_sign = 0.0;
    let mut second = f64::INFINITY;
    for i in 0..n {
        let (t, sign) = if d[i] > DENOM_EPS {
            ((upper[i] - x[i]) / d[i], -1.0)
        } else if d[i] < -DENOM_EPS {
            ((lower[i] - x[i]) / d[i], 1.0)
        } else {
            continue;
        };
        if t > eps_fwd {
            if t < best {
                second = best;
                best = t;
                best_axis = i;
                best_sign = sign;
            } else if t < second {
                second = t;
            }
        }
    }
    if best_axis == usize::MAX {
        return ExitOutcome::Escaped;
    }
    let smooth = !(second.is_finite() && second - best <= FACET_TIE_REL * best);
    let mut normal = vec![0.0; n];
    normal[best_axis] = best_sign;
    ExitOutcome::Hit(BoundaryHit {
        t: best,
        normal,
        smooth,
    })
}

pub(super) fn box_chord(lower: &[f64], upper: &[f64], x: &[f64], d: &[f64]) -> Chord {
    let mut over = f64::INFINITY;
    let mut under = f64::NEG_INFINITY;
    for i in 0..x.len() {
        if d[i].abs() > DENOM_EPS {
            let t1 = (upper[i] - x[i]) / d[i];
            let t2 = (lower[i] - x[i]) / d[i];
            let (hi, lo) = if t1 >= t2 { (t1, t2) } else { (t2, t1) };
            over = over.min(hi);
            under = under.max(lo);
        }
    }
    Chord {
        t_under: ChordEnd::from_finite(under),
        t_over: ChordEnd::from_finite(over),
    }
}
