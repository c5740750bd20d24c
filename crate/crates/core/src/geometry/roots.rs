//! Real roots of low-degree polynomials.
//!
//! Roots are isolated by recursive derivative bracketing: the critical points
//! of a degree-d polynomial are the roots of its degree-(d-1) derivative, and
//! between consecutive critical points the polynomial is monotone, so each
//! sign change brackets exactly one root. Brackets are resolved by bisection
//! followed by a safeguarded Newton polish.

/// Evaluate `sum c[k] t^k` by Horner's rule.
pub(crate) fn eval(c: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for &ck in c.iter().rev() {
        acc = acc * t + ck;
    }
    acc
}

pub(crate) fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// All real roots in ascending order.
pub(crate) fn real_roots(c: &[f64]) -> Vec<f64> {
    let maxc = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if maxc == 0.0 {
        return Vec::new();
    }
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg].abs() <= 1e-14 * maxc {
        deg -= 1;
    }
    let c = &c[..=deg];
    match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => quadratic_roots(c[0], c[1], c[2]),
        _ => bracketed_roots(c),
    }
}

fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let mut out = if c1.abs() <= f64::MIN_POSITIVE {
        let r = (sq / (2.0 * c2.abs())).abs();
        if r == 0.0 {
            vec![0.0]
        } else {
            vec![-r, r]
        }
    } else {
        let q = -0.5 * (c1 + c1.signum() * sq);
        let r1 = q / c2;
        let r2 = c0 / q;
        if (r1 - r2).abs() <= 1e-14 * (1.0 + r1.abs()) {
            vec![r1]
        } else {
            vec![r1, r2]
        }
    };
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn bracketed_roots(c: &[f64]) -> Vec<f64> {
    let deg = c.len() - 1;
    let bound = 1.0 + c[..deg].iter().fold(0.0f64, |m, v| m.max(v.abs())) / c[deg].abs();
    let crit = real_roots(&derivative(c));
    let mut pts = Vec::with_capacity(crit.len() + 2);
    pts.push(-bound);
    pts.extend(crit.into_iter().filter(|t| t.abs() < bound));
    pts.push(bound);

    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let flo = eval(c, lo);
        let fhi = eval(c, hi);
        if flo == 0.0 {
            roots.push(lo);
        } else if flo * fhi < 0.0 {
            roots.push(refine(c, lo, hi, flo));
        }
    }
    if eval(c, bound) == 0.0 {
        roots.push(bound);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    roots
}

fn refine(c: &[f64], mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let dc = derivative(c);
    let mut t = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f = eval(c, t);
        let fp = eval(&dc, t);
        if fp == 0.0 {
            break;
        }
        let next = t - f / fp;
        if next.is_finite() && next >= lo && next <= hi {
            t = next;
        } else {
            break;
        }
    }
    t
}
