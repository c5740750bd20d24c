//! Toroid `{x : ||x - c_x|| < r}` where `c_x` is the nearest point of the
//! unit circle in the `(x_1, x_2)` plane. Membership reduces to
//! `g(x) = (rho - 1)^2 + sum_{i>2} x_i^2 < r^2` with `rho = hypot(x_1, x_2)`.
//!
//! A ray crossing satisfies `(q + u + 1 - r^2)^2 = 4 q` with `q(t)` the
//! squared planar radius and `u(t)` the squared transverse norm, a quartic in
//! `t`; squaring introduces phantom roots with `q + u + 1 - r^2 < 0`, which
//! are filtered out.

use crate::linalg::{dot, normalize_mut};

use super::roots::{self, real_roots};
use super::BoundaryHit;

pub(super) fn g_val(p: &[f64]) -> f64 {
    let rho = p[0].hypot(p[1]);
    let mut g = (rho - 1.0) * (rho - 1.0);
    for &x in &p[2..] {
        g += x * x;
    }
    g
}

pub(super) fn contains(r: f64, p: &[f64]) -> bool {
    g_val(p) < r * r
}

pub(super) fn grad(p: &[f64]) -> Vec<f64> {
    let rho = p[0].hypot(p[1]);
    let mut g = vec![0.0; p.len()];
    if rho > 0.0 {
        let f = 2.0 * (rho - 1.0) / rho;
        g[0] = f * p[0];
        g[1] = f * p[1];
    }
    for i in 2..p.len() {
        g[i] = 2.0 * p[i];
    }
    g
}

pub(super) fn first_exit(
    r: f64,
    x: &[f64],
    d: &[f64],
    eps_fwd: f64,
    scale: f64,
) -> Option<BoundaryHit> {
    // q(t) = |planar(x) + t planar(d)|^2, s(t) = |x + t d|^2 + 1 - r^2
    let q = [
        x[0] * x[0] + x[1] * x[1],
        2.0 * (x[0] * d[0] + x[1] * d[1]),
        d[0] * d[0] + d[1] * d[1],
    ];
    let s = [dot(x, x) + 1.0 - r * r, 2.0 * dot(x, d), dot(d, d)];
    let p4 = [
        s[0] * s[0] - 4.0 * q[0],
        2.0 * s[0] * s[1] - 4.0 * q[1],
        s[1] * s[1] + 2.0 * s[0] * s[2] - 4.0 * q[2],
        2.0 * s[1] * s[2],
        s[2] * s[2],
    ];
    let h = |t: f64| -> f64 {
        let qt = roots::eval(&q, t);
        if qt <= 0.0 {
            return f64::NAN;
        }
        roots::eval(&s, t) - 2.0 * qt.sqrt()
    };
    let hp = |t: f64| -> f64 {
        let qt = roots::eval(&q, t);
        let qd = q[1] + 2.0 * q[2] * t;
        s[1] + 2.0 * s[2] * t - qd / qt.sqrt()
    };

    for mut t in real_roots(&p4) {
        if t <= eps_fwd {
            continue;
        }
        if roots::eval(&s, t) < -1e-9 {
            continue; // phantom branch from squaring
        }
        for _ in 0..3 {
            let f = h(t);
            if !f.is_finite() {
                break;
            }
            let fp = hp(t);
            if fp == 0.0 {
                break;
            }
            t -= f / fp;
        }
        if t <= eps_fwd {
            continue;
        }
        let res = h(t);
        if !res.is_finite() || res.abs() > 1e-7 * scale {
            continue;
        }
        let hit: Vec<f64> = (0..x.len()).map(|i| x[i] + t * d[i]).collect();
        return Some(BoundaryHit {
            t,
            normal: inward_normal(r, &hit, scale),
            smooth: true,
        });
    }
    None
}

pub(super) fn inward_normal(r: f64, hit: &[f64], scale: f64) -> Vec<f64> {
    let mut n: Vec<f64> = grad(hit).iter().map(|v| -v).collect();
    normalize_mut(&mut n);
    let probe: Vec<f64> = (0..hit.len())
        .map(|i| hit[i] + 1e-7 * scale * n[i])
        .collect();
    if !contains(r, &probe) {
        n.iter_mut().for_each(|v| *v = -*v);
    }
    n
}
