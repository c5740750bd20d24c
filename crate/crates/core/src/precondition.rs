//! Dikin-ellipsoid preconditioning of polytopes.
//!
//! For `Q = {x : (a_i, x) < b_i}` the log barrier is
//! `F(x) = -sum_i ln(b_i - (a_i, x))`. Damped Newton finds its minimum `x*`
//! (the analytic center); the Hessian there,
//! `H = sum_i a_i a_i^T / (b_i - (a_i, x*))^2`, defines the Dikin ellipsoid
//! `{x : (H (x - x*), x - x*) <= 1}`, which lies inside `Q`. Sampling in the
//! coordinates `y = T^{-1}(x - x*)` with `T = H^{-1/2}` rounds the body.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Body, BodyDescriptor};

pub const DEFAULT_TOL: f64 = 1e-8;
const MAX_NEWTON_ITERS: usize = 200;
const EIGENVALUE_FLOOR_REL: f64 = 1e-14;

/// Analytic center plus the barrier Hessian and its inverse square root.
#[derive(Debug, Clone)]
pub struct DikinMap {
    pub center: Vec<f64>,
    pub hessian: DMatrix<f64>,
    /// `T = H^{-1/2}`, symmetric.
    pub transform: DMatrix<f64>,
    pub cond_hessian: f64,
    pub det_transform: f64,
}

/// Summary numbers recorded in run reports.
#[derive(Debug, Clone, Serialize)]
pub struct DikinSummary {
    pub center: Vec<f64>,
    pub cond_hessian: f64,
    pub det_transform: f64,
}

impl DikinMap {
    /// Maps a point of the rounded body back to original coordinates:
    /// `x = x* + T y`.
    pub fn to_original(&self, y: &[f64]) -> Vec<f64> {
        let ty = &self.transform * DVector::from_column_slice(y);
        self.center
            .iter()
            .zip(ty.iter())
            .map(|(c, v)| c + v)
            .collect()
    }

    /// Maps an original-coordinate direction into the rounded body:
    /// `d' = T d`.
    pub fn push_direction(&self, d: &[f64]) -> Vec<f64> {
        (&self.transform * DVector::from_column_slice(d))
            .iter()
            .copied()
            .collect()
    }

    pub fn summary(&self) -> DikinSummary {
        DikinSummary {
            center: self.center.clone(),
            cond_hessian: self.cond_hessian,
            det_transform: self.det_transform,
        }
    }
}

fn polytope_rows(body: &Body) -> Result<(&[Vec<f64>], &[f64])> {
    let rows = body
        .polytope_rows()
        .ok_or_else(|| Error::UnsupportedBody("preconditioning is defined for polytopes".into()))?;
    if !body.bounded() {
        return Err(Error::UnsupportedBody(
            "unbounded polytope: the barrier has no minimum".into(),
        ));
    }
    Ok(rows)
}

fn residuals(a: &[Vec<f64>], b: &[f64], x: &DVector<f64>) -> Option<Vec<f64>> {
    let mut r = Vec::with_capacity(a.len());
    for (row, &bi) in a.iter().zip(b) {
        let ri = bi - row.iter().zip(x.iter()).map(|(c, v)| c * v).sum::<f64>();
        if ri <= 0.0 {
            return None;
        }
        r.push(ri);
    }
    Some(r)
}

fn barrier_value(r: &[f64]) -> f64 {
    -r.iter().map(|v| v.ln()).sum::<f64>()
}

fn gradient(a: &[Vec<f64>], r: &[f64], n: usize) -> DVector<f64> {
    let mut g = DVector::zeros(n);
    for (row, &ri) in a.iter().zip(r) {
        for (j, &c) in row.iter().enumerate() {
            g[j] += c / ri;
        }
    }
    g
}

fn hessian_at(a: &[Vec<f64>], r: &[f64], n: usize) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(n, n);
    for (row, &ri) in a.iter().zip(r) {
        let w = 1.0 / (ri * ri);
        for j in 0..n {
            if row[j] == 0.0 {
                continue;
            }
            for k in 0..n {
                h[(j, k)] += w * row[j] * row[k];
            }
        }
    }
    h
}

fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(ch) = nalgebra::Cholesky::new(h.clone()) {
        return Ok(ch.solve(g));
    }
    // fall back on an eigenvalue-floored pseudo-inverse
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    if lambda_max <= 0.0 {
        return Err(Error::RankDeficient);
    }
    let floor = EIGENVALUE_FLOOR_REL * lambda_max;
    if eig.eigenvalues.iter().any(|&l| l < floor) {
        return Err(Error::RankDeficient);
    }
    let mut y = eig.eigenvectors.transpose() * g;
    for (i, v) in y.iter_mut().enumerate() {
        *v /= eig.eigenvalues[i];
    }
    Ok(&eig.eigenvectors * y)
}

/// Approximate minimizer of the log barrier, to Newton decrement `tol`.
/// Starts from the supplied point or the body's interior point.
pub fn analytic_center(body: &Body, start: Option<&[f64]>, tol: f64) -> Result<Vec<f64>> {
    let (a, b) = polytope_rows(body)?;
    let n = body.dim();
    let start = start.unwrap_or_else(|| body.interior_point());
    let mut x = DVector::from_column_slice(start);
    let mut r = residuals(a, b, &x).ok_or(Error::OriginNotInterior)?;
    let mut decrement = f64::INFINITY;

    for _ in 0..MAX_NEWTON_ITERS {
        let g = gradient(a, &r, n);
        let h = hessian_at(a, &r, n);
        let step = solve_spd(&h, &g)?;
        decrement = g.dot(&step).max(0.0).sqrt();
        if decrement <= tol {
            return Ok(x.iter().copied().collect());
        }
        // damped Newton, halved further while infeasible or non-decreasing
        let mut t = (1.0 / (1.0 + decrement)).min(1.0);
        let f0 = barrier_value(&r);
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &x - t * &step;
            if let Some(rc) = residuals(a, b, &cand) {
                if barrier_value(&rc) <= f0 {
                    x = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::ConvergenceFailure {
                residual: decrement,
                iterations: MAX_NEWTON_ITERS,
            });
        }
    }
    Err(Error::ConvergenceFailure {
        residual: decrement,
        iterations: MAX_NEWTON_ITERS,
    })
}

/// Builds the Dikin map at the analytic center: `H` and `T = H^{-1/2}` via
/// symmetric eigendecomposition with a relative eigenvalue floor.
pub fn dikin_map(body: &Body) -> Result<DikinMap> {
    let center = analytic_center(body, None, DEFAULT_TOL)?;
    let (a, b) = polytope_rows(body)?;
    let n = body.dim();
    let xc = DVector::from_column_slice(&center);
    let r = residuals(a, b, &xc).ok_or(Error::OriginNotInterior)?;
    let h = hessian_at(a, &r, n);

    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let lambda_min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if lambda_max <= 0.0 || lambda_min < EIGENVALUE_FLOOR_REL * lambda_max {
        return Err(Error::RankDeficient);
    }
    let mut t = DMatrix::zeros(n, n);
    let mut det_t = 1.0;
    for i in 0..n {
        let inv_sqrt = 1.0 / eig.eigenvalues[i].sqrt();
        det_t *= inv_sqrt;
        let v = eig.eigenvectors.column(i);
        for j in 0..n {
            for k in 0..n {
                t[(j, k)] += inv_sqrt * v[j] * v[k];
            }
        }
    }
    Ok(DikinMap {
        center,
        hessian: h,
        transform: t,
        cond_hessian: lambda_max / lambda_min,
        det_transform: det_t,
    })
}

/// Image of the polytope under `y = T^{-1}(x - x*)`: rows `A' = A T`,
/// offsets `b' = b - A x*`. Straight lines map to straight lines and the
/// uniform measure is preserved up to the constant Jacobian `det T`, so
/// sampling in `y` and mapping back through [`DikinMap::to_original`] is
/// exact.
pub fn transform_polytope(body: &Body, map: &DikinMap) -> Result<Body> {
    let (a, b) = polytope_rows(body)?;
    let n = body.dim();
    let mut a_image = Vec::with_capacity(a.len());
    let mut b_image = Vec::with_capacity(b.len());
    for (row, &bi) in a.iter().zip(b) {
        let ar = map.push_direction(row); // T a_i (T symmetric)
        let shift: f64 = row.iter().zip(&map.center).map(|(c, x)| c * x).sum();
        a_image.push(ar);
        b_image.push(bi - shift);
    }
    let _ = n;
    BodyDescriptor::Polytope {
        a: a_image,
        b: b_image,
    }
    .build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BodyDescriptor;

    fn box_body(half: &[f64]) -> Body {
        let n = half.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            a.push(row.clone());
            b.push(half[i]);
            row[i] = -1.0;
            a.push(row);
            b.push(half[i]);
        }
        BodyDescriptor::Polytope { a, b }.build().unwrap()
    }

    #[test]
    fn symmetric_box_center_is_origin() {
        let body = box_body(&[1.0, 2.0, 3.0]);
        let x = analytic_center(&body, None, 1e-10).unwrap();
        for v in x {
            assert!(v.abs() < 1e-8, "center coordinate {v}");
        }
    }

    #[test]
    fn interval_center_and_hessian() {
        // 0 < x < 1 as rows x < 1, -x < 0
        let body = BodyDescriptor::Polytope {
            a: vec![vec![1.0], vec![-1.0]],
            b: vec![1.0, 0.0],
        }
        .build()
        .unwrap();
        let x = analytic_center(&body, None, 1e-10).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-8);
        let map = dikin_map(&body).unwrap();
        assert!((map.hessian[(0, 0)] - 8.0).abs() < 1e-6);
        assert!((map.transform[(0, 0)] - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-8);
    }

    #[test]
    fn triangle_center() {
        // x1 > 0, x2 > 0, x1 + x2 < 1
        let body = BodyDescriptor::Polytope {
            a: vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]],
            b: vec![0.0, 0.0, 1.0],
        }
        .build()
        .unwrap();
        let x = analytic_center(&body, None, 1e-10).unwrap();
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-8);
        assert!((x[1] - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn box_dikin_matrices() {
        let half = [1.0, 2.0, 0.5];
        let body = box_body(&half);
        let map = dikin_map(&body).unwrap();
        for (i, &h) in half.iter().enumerate() {
            assert!(
                (map.hessian[(i, i)] - 2.0 / (h * h)).abs() < 1e-6,
                "H[{i}][{i}]"
            );
            assert!(
                (map.transform[(i, i)] - h / 2f64.sqrt()).abs() < 1e-7,
                "T[{i}][{i}]"
            );
        }
        // T*T == H^{-1}
        let tt = &map.transform * &map.transform;
        let hinv = map.hessian.clone().try_inverse().unwrap();
        let rel = (&tt - &hinv).norm() / hinv.norm();
        assert!(rel < 1e-8, "relative error {rel}");
    }

    #[test]
    fn tangent_halfspaces_give_isotropic_map() {
        // 2-d unit disc approximated by 72 tangent lines
        let m = 72;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 0..m {
            let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            a.push(vec![th.cos(), th.sin()]);
            b.push(1.0);
        }
        let body = BodyDescriptor::Polytope { a, b }.build().unwrap();
        let map = dikin_map(&body).unwrap();
        assert!(map.cond_hessian < 1.0 + 1e-6, "cond {}", map.cond_hessian);
    }

    #[test]
    fn transform_rounds_box_to_cube() {
        let half = [1.0, 10.0];
        let body = box_body(&half);
        let map = dikin_map(&body).unwrap();
        let image = transform_polytope(&body, &map).unwrap();
        let (a, b) = image.polytope_rows().unwrap();
        // every facet at distance sqrt(2) in the image
        for (row, &bi) in a.iter().zip(b) {
            let dist = bi / crate::linalg::norm(row);
            assert!((dist - 2f64.sqrt()).abs() < 1e-7, "facet distance {dist}");
        }
        // idempotence up to conditioning
        let map2 = dikin_map(&image).unwrap();
        assert!(map2.cond_hessian < 1.0 + 1e-6);
    }

    #[test]
    fn dikin_ellipsoid_contained() {
        let body = BodyDescriptor::Polytope {
            a: vec![
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
                vec![1.0, 1.0],
                vec![1.0, -0.3],
            ],
            b: vec![0.0, 0.0, 1.0, 0.7],
        }
        .build()
        .unwrap();
        let map = dikin_map(&body).unwrap();
        let mut stream = crate::rng::RandomStream::new(4);
        for _ in 0..1000 {
            let u = stream.unit_direction(2).unwrap();
            let x = map.to_original(&u);
            assert!(body.contains(&x), "boundary point {x:?} escaped");
        }
    }

    #[test]
    fn unbounded_polytope_rejected() {
        let body = BodyDescriptor::Orthant { n: 2 }.build().unwrap();
        assert!(matches!(
            analytic_center(&body, None, 1e-8),
            Err(Error::UnsupportedBody(_))
        ));
    }
}
