//! Region descriptors and the Boundary Oracle.
//!
//! A [`Body`] is a validated, immutable sampling region. The oracle answers
//! first-exit ray queries ([`Body::first_exit`]) with inward unit normals and
//! a smooth/nonsmooth flag, two-sided chord queries ([`Body::chord`]), and
//! strict-interior membership tests ([`Body::contains`]). Bodies are built
//! from a serializable [`BodyDescriptor`] (`{"type": "polytope", "A": ...,
//! "b": ...}` and analogous forms).

mod cusp;
mod lp;
mod quadric;
mod roots;
mod rows;
mod simplex;
mod toroid;
mod trunc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, dot, norm, normalize_mut, sub};
use crate::rng::RandomStream;

use lp::LpResult;
use rows::RowSet;

/// Relative tolerance under which two facet-crossing parameters count as a
/// tie, i.e. a nonsmooth (edge/vertex) hit.
pub(crate) const FACET_TIE_REL: f64 = 1e-9;

/// Box bound for the auxiliary Chebyshev-center LP.
const CHEBYSHEV_BOX: f64 = 1e8;

/// Result of a first-exit query: travel distance, inward unit normal at the
/// hit point, and whether the boundary is smooth there.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryHit {
    pub t: f64,
    pub normal: Vec<f64>,
    pub smooth: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExitOutcome {
    Hit(BoundaryHit),
    /// No positive intersection; only unbounded bodies escape.
    Escaped,
}

impl ExitOutcome {
    pub fn hit(self) -> Option<BoundaryHit> {
        match self {
            ExitOutcome::Hit(h) => Some(h),
            ExitOutcome::Escaped => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChordEnd {
    Finite(f64),
    Escaped,
}

impl ChordEnd {
    pub(crate) fn from_finite(t: f64) -> Self {
        if t.is_finite() {
            ChordEnd::Finite(t)
        } else {
            ChordEnd::Escaped
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ChordEnd::Finite(t) => Some(t),
            ChordEnd::Escaped => None,
        }
    }
}

/// Two-sided boundary query along a line: `t_under <= 0 <= t_over`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub t_under: ChordEnd,
    pub t_over: ChordEnd,
}

impl Chord {
    /// Both endpoints, when the body is bounded along the line.
    pub fn finite(&self) -> Option<(f64, f64)> {
        Some((self.t_under.finite()?, self.t_over.finite()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncatedVariant {
    Convex,
    Nonconvex,
}

/// Declarative definition of a sampling region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodyDescriptor {
    /// `(a_i, x) < b_i` for every row.
    Polytope {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `x^T A x < 1` with `A` symmetric positive definite.
    Ellipsoid {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
    },
    AxisBox {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// `0 < x_i < 1`.
    UnitCube {
        n: usize,
    },
    /// `{x in R^{n+1} : x_i > 0, sum x_i = 1}`.
    StandardSimplex {
        n: usize,
    },
    /// Tube of radius `r` around the unit circle of the `(x_1, x_2)` plane.
    Toroid {
        n: usize,
        r: f64,
    },
    /// `0 < x_2 < 1`, `|x_1| < M`.
    Strip {
        #[serde(rename = "M")]
        m: f64,
    },
    /// `x > 0` componentwise; unbounded.
    Orthant {
        n: usize,
    },
    /// Wedge of apex angle `alpha` at the origin, capped by `x_2 < 1`.
    AngleTriangle {
        alpha: f64,
    },
    /// `-x_1^4 < x_2 < x_1^4`, `0 < x_1 < 1`.
    ConcaveCusp {},
    TruncatedEllipse {
        variant: TruncatedVariant,
    },
}

impl BodyDescriptor {
    pub fn build(&self) -> Result<Body> {
        build_body(self)
    }
}

#[derive(Debug, Clone)]
enum Geom {
    Rows(RowSet),
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Ellipsoid { a: Vec<Vec<f64>> },
    Simplex,
    Toroid { r: f64 },
    Cusp,
    Trunc { convex: bool },
}

/// Validated immutable sampling region with its boundary oracle.
#[derive(Debug, Clone)]
pub struct Body {
    descriptor: BodyDescriptor,
    geom: Geom,
    dim: usize,
    bounded: bool,
    diameter: Option<f64>,
    scale: f64,
    eps_fwd: f64,
    interior: Vec<f64>,
}

impl Body {
    pub fn descriptor(&self) -> &BodyDescriptor {
        &self.descriptor
    }

    /// Ambient dimension (simplex points live in `R^{n+1}`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the region itself (`n` for the simplex in `R^{n+1}`).
    pub fn intrinsic_dim(&self) -> usize {
        match self.geom {
            Geom::Simplex => self.dim - 1,
            _ => self.dim,
        }
    }

    pub fn bounded(&self) -> bool {
        self.bounded
    }

    /// Diameter estimate, used as the default trajectory-length scale.
    /// `None` for unbounded bodies.
    pub fn diameter(&self) -> Option<f64> {
        self.diameter
    }

    /// Forward epsilon: intersections with `t <= eps_fwd` are ignored so a
    /// trajectory restarting on a facet does not re-hit it.
    pub fn eps_fwd(&self) -> f64 {
        self.eps_fwd
    }

    /// Characteristic length (diameter, or 1 for unbounded bodies).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// A strictly interior point (Chebyshev center for polytopes, the
    /// barycenter or an equivalent for the named bodies).
    pub fn interior_point(&self) -> &[f64] {
        &self.interior
    }

    /// Strict-interior membership (regions are open sets).
    pub fn contains(&self, p: &[f64]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        match &self.geom {
            Geom::Rows(rs) => rs.contains(p),
            Geom::Box { lower, upper } => rows::box_contains(lower, upper, p),
            Geom::Ball { center, radius } => quadric::ball_contains(center, *radius, p),
            Geom::Ellipsoid { a } => quadric::ellipsoid_contains(a, p),
            Geom::Simplex => simplex::contains(p),
            Geom::Toroid { r } => toroid::contains(*r, p),
            Geom::Cusp => cusp::contains(p),
            Geom::Trunc { convex } => trunc::contains(*convex, p),
        }
    }

    /// First exit of the ray `origin + t * direction`, `t > eps_fwd`.
    pub fn first_exit(&self, origin: &[f64], direction: &[f64]) -> Result<ExitOutcome> {
        self.check_dim(origin)?;
        self.check_dim(direction)?;
        if !self.contains(origin) {
            return Err(Error::OriginNotInterior);
        }
        Ok(self.first_exit_unchecked(origin, direction))
    }

    fn first_exit_unchecked(&self, origin: &[f64], direction: &[f64]) -> ExitOutcome {
        let eps = self.eps_fwd;
        match &self.geom {
            Geom::Rows(rs) => rs.first_exit(origin, direction, eps),
            Geom::Box { lower, upper } => {
                rows::box_first_exit(lower, upper, origin, direction, eps)
            }
            Geom::Ball { center, radius } => {
                quadric::ball_first_exit(center, *radius, origin, direction, eps)
            }
            Geom::Ellipsoid { a } => quadric::ellipsoid_first_exit(a, origin, direction, eps),
            Geom::Simplex => simplex::first_exit(origin, direction, eps),
            Geom::Toroid { r } => {
                match toroid::first_exit(*r, origin, direction, eps, self.scale) {
                    Some(hit) => ExitOutcome::Hit(hit),
                    None => self.march_rescue(origin, direction),
                }
            }
            Geom::Cusp => match cusp::first_exit(origin, direction, eps, self.scale) {
                Some(hit) => ExitOutcome::Hit(hit),
                None => self.march_rescue(origin, direction),
            },
            Geom::Trunc { convex } => {
                match trunc::first_exit(*convex, origin, direction, eps, self.scale) {
                    Some(hit) => ExitOutcome::Hit(hit),
                    None => self.march_rescue(origin, direction),
                }
            }
        }
    }

    /// Fallback for bounded curved bodies when the closed-form candidates all
    /// fail numerically: march the membership predicate and bisect.
    fn march_rescue(&self, origin: &[f64], direction: &[f64]) -> ExitOutcome {
        if !self.bounded {
            return ExitOutcome::Escaped;
        }
        let max_t = 2.5 * self.scale;
        let step = 1e-3 * self.scale;
        let Some(t) = march_and_bisect(|p| self.contains(p), origin, direction, step, max_t) else {
            return ExitOutcome::Escaped;
        };
        let hit_p = add_scaled(origin, t, direction);
        let normal = match &self.geom {
            Geom::Toroid { r } => toroid::inward_normal(*r, &hit_p, self.scale),
            _ => {
                // point back along the ray; adequate for a last-resort path
                direction.iter().map(|v| -v).collect()
            }
        };
        ExitOutcome::Hit(BoundaryHit {
            t,
            normal,
            smooth: true,
        })
    }

    /// Two-sided boundary query along the line through `p` with direction
    /// `d`. For nonconvex bodies each side reports the first intersection.
    pub fn chord(&self, p: &[f64], d: &[f64]) -> Result<Chord> {
        self.check_dim(p)?;
        self.check_dim(d)?;
        if !self.contains(p) {
            return Err(Error::OriginNotInterior);
        }
        Ok(match &self.geom {
            Geom::Rows(rs) => rs.chord(p, d),
            Geom::Box { lower, upper } => rows::box_chord(lower, upper, p, d),
            Geom::Ball { center, radius } => quadric::ball_chord(center, *radius, p, d),
            Geom::Ellipsoid { a } => quadric::ellipsoid_chord(a, p, d),
            Geom::Simplex => simplex::chord(p, d),
            Geom::Toroid { .. } | Geom::Cusp | Geom::Trunc { .. } => {
                let over = match self.first_exit_unchecked(p, d) {
                    ExitOutcome::Hit(h) => ChordEnd::Finite(h.t),
                    ExitOutcome::Escaped => ChordEnd::Escaped,
                };
                let back: Vec<f64> = d.iter().map(|v| -v).collect();
                let under = match self.first_exit_unchecked(p, &back) {
                    ExitOutcome::Hit(h) => ChordEnd::Finite(-h.t),
                    ExitOutcome::Escaped => ChordEnd::Escaped,
                };
                Chord {
                    t_under: under,
                    t_over: over,
                }
            }
        })
    }

    /// Draws a direction appropriate for this body: uniform on the unit
    /// sphere, projected onto the hyperplane `sum d_i = 0` for the simplex.
    pub fn sample_direction(&self, stream: &mut RandomStream) -> Result<Vec<f64>> {
        match self.geom {
            Geom::Simplex => loop {
                let mut g = stream.gaussian_vector(self.dim)?;
                simplex::project_direction(&mut g);
                if normalize_mut(&mut g) > 1e-12 {
                    return Ok(g);
                }
            },
            _ => stream.unit_direction(self.dim),
        }
    }

    /// Halfspace rows `(A, b)` when the body is linearly constrained.
    pub fn polytope_rows(&self) -> Option<(&[Vec<f64>], &[f64])> {
        match &self.geom {
            Geom::Rows(rs) => Some((&rs.a, &rs.b)),
            _ => None,
        }
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// Specular reflection `d -> d - 2 (d, s) s` at an inward unit normal `s`.
pub fn reflect_direction(d: &[f64], s: &[f64]) -> Vec<f64> {
    let k = 2.0 * dot(d, s);
    d.iter().zip(s).map(|(di, si)| di - k * si).collect()
}

/// Piecewise-linear path bound for `Toroid { r }`:
/// `ceil(pi / (2 arccos((1 - r) / (1 + r)))) + 1`.
pub fn toroid_path_bound(r: f64) -> Result<u32> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "toroid radius must lie in (0, 1), got {r}"
        )));
    }
    let ratio = std::f64::consts::PI / (2.0 * ((1.0 - r) / (1.0 + r)).acos());
    Ok(ratio.ceil() as u32 + 1)
}

/// March the membership predicate along a ray until it flips, then bisect.
/// Used as a test oracle for the closed-form intersections and as a rescue
/// path for degenerate numerics.
pub fn march_and_bisect(
    contains: impl Fn(&[f64]) -> bool,
    origin: &[f64],
    direction: &[f64],
    step: f64,
    max_t: f64,
) -> Option<f64> {
    let mut prev = 0.0;
    let mut t = step;
    while t <= max_t {
        if !contains(&add_scaled(origin, t, direction)) {
            let (mut lo, mut hi) = (prev, t);
            for _ in 0..200 {
                if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if contains(&add_scaled(origin, mid, direction)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = t;
        t += step;
    }
    None
}

pub fn build_body(descriptor: &BodyDescriptor) -> Result<Body> {
    match descriptor {
        BodyDescriptor::Polytope { a, b } => build_polytope(descriptor.clone(), a, b),
        BodyDescriptor::Ball { center, radius } => {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(Error::InvalidConfig(format!("ball radius {radius}")));
            }
            check_finite(center)?;
            Ok(assemble(
                descriptor.clone(),
                Geom::Ball {
                    center: center.clone(),
                    radius: *radius,
                },
                center.len(),
                Some(2.0 * radius),
                center.clone(),
            ))
        }
        BodyDescriptor::Ellipsoid { a } => build_ellipsoid(descriptor.clone(), a),
        BodyDescriptor::AxisBox { lower, upper } => {
            build_box(descriptor.clone(), lower.clone(), upper.clone())
        }
        BodyDescriptor::UnitCube { n } => {
            if *n == 0 {
                return Err(Error::InvalidDimension { got: 0, min: 1 });
            }
            build_box(descriptor.clone(), vec![0.0; *n], vec![1.0; *n])
        }
        BodyDescriptor::Strip { m } => {
            if !(m.is_finite() && *m > 0.0) {
                return Err(Error::InvalidConfig(format!("strip half-width {m}")));
            }
            build_box(descriptor.clone(), vec![-m, 0.0], vec![*m, 1.0])
        }
        BodyDescriptor::StandardSimplex { n } => {
            if *n == 0 {
                return Err(Error::InvalidDimension { got: 0, min: 1 });
            }
            let ambient = n + 1;
            Ok(assemble(
                descriptor.clone(),
                Geom::Simplex,
                ambient,
                Some(std::f64::consts::SQRT_2),
                vec![1.0 / ambient as f64; ambient],
            ))
        }
        BodyDescriptor::Toroid { n, r } => {
            if *n < 2 {
                return Err(Error::InvalidDimension { got: *n, min: 2 });
            }
            if !(*r > 0.0 && *r < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "toroid radius must lie in (0, 1), got {r}"
                )));
            }
            let mut interior = vec![0.0; *n];
            interior[0] = 1.0;
            Ok(assemble(
                descriptor.clone(),
                Geom::Toroid { r: *r },
                *n,
                Some(2.0 * (1.0 + r)),
                interior,
            ))
        }
        BodyDescriptor::Orthant { n } => {
            if *n == 0 {
                return Err(Error::InvalidDimension { got: 0, min: 1 });
            }
            let mut a = vec![vec![0.0; *n]; *n];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = -1.0;
            }
            Ok(assemble(
                descriptor.clone(),
                Geom::Rows(RowSet::new(a, vec![0.0; *n])),
                *n,
                None,
                vec![1.0; *n],
            ))
        }
        BodyDescriptor::AngleTriangle { alpha } => {
            if !(*alpha > 0.0 && *alpha < std::f64::consts::PI) {
                return Err(Error::InvalidConfig(format!(
                    "apex angle must lie in (0, pi), got {alpha}"
                )));
            }
            let tan_half = (alpha / 2.0).tan();
            let a = vec![vec![1.0, -tan_half], vec![-1.0, -tan_half], vec![0.0, 1.0]];
            let b = vec![0.0, 0.0, 1.0];
            let diameter = (2.0 * tan_half).max((tan_half * tan_half + 1.0).sqrt());
            Ok(assemble(
                descriptor.clone(),
                Geom::Rows(RowSet::new(a, b)),
                2,
                Some(diameter),
                vec![0.0, 0.5],
            ))
        }
        BodyDescriptor::ConcaveCusp {} => Ok(assemble(
            descriptor.clone(),
            Geom::Cusp,
            2,
            Some(2.0),
            vec![0.8, 0.0],
        )),
        BodyDescriptor::TruncatedEllipse { variant } => {
            let convex = *variant == TruncatedVariant::Convex;
            let y = trunc::corner_y(convex);
            let x = if convex {
                trunc::SQRT3 - y
            } else {
                trunc::SQRT3 + y
            };
            let diameter = ((2.0 + x) * (2.0 + x) + y * y).sqrt();
            Ok(assemble(
                descriptor.clone(),
                Geom::Trunc { convex },
                2,
                Some(diameter),
                vec![0.0, 0.0],
            ))
        }
    }
}

fn assemble(
    descriptor: BodyDescriptor,
    geom: Geom,
    dim: usize,
    diameter: Option<f64>,
    interior: Vec<f64>,
) -> Body {
    let scale = diameter.unwrap_or(1.0);
    Body {
        descriptor,
        geom,
        dim,
        bounded: diameter.is_some(),
        diameter,
        scale,
        eps_fwd: 1e-12 * scale,
        interior,
    }
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidConfig("non-finite coordinate".into()));
    }
    Ok(())
}

fn build_box(descriptor: BodyDescriptor, lower: Vec<f64>, upper: Vec<f64>) -> Result<Body> {
    if lower.len() != upper.len() || lower.is_empty() {
        return Err(Error::InvalidConfig("box bounds length mismatch".into()));
    }
    check_finite(&lower)?;
    check_finite(&upper)?;
    if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
        return Err(Error::EmptyInterior);
    }
    let diameter = norm(&sub(&upper, &lower));
    let interior = lower
        .iter()
        .zip(&upper)
        .map(|(l, u)| 0.5 * (l + u))
        .collect();
    let dim = lower.len();
    Ok(assemble(
        descriptor,
        Geom::Box { lower, upper },
        dim,
        Some(diameter),
        interior,
    ))
}

fn build_ellipsoid(descriptor: BodyDescriptor, a: &[Vec<f64>]) -> Result<Body> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidConfig(
            "ellipsoid matrix must be square".into(),
        ));
    }
    for row in a {
        check_finite(row)?;
    }
    let maxabs = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if (v - a[j][i]).abs() > 1e-10 * maxabs {
                return Err(Error::NotPositiveDefinite);
            }
        }
    }
    let flat: Vec<f64> = a.iter().flatten().copied().collect();
    let m = nalgebra::DMatrix::from_row_slice(n, n, &flat);
    let eig = nalgebra::SymmetricEigen::new(m);
    let lambda_min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if lambda_min <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(assemble(
        descriptor,
        Geom::Ellipsoid { a: a.to_vec() },
        n,
        Some(2.0 / lambda_min.sqrt()),
        vec![0.0; n],
    ))
}

fn build_polytope(descriptor: BodyDescriptor, a: &[Vec<f64>], b: &[f64]) -> Result<Body> {
    let m = a.len();
    if m == 0 || b.len() != m {
        return Err(Error::InvalidConfig(
            "polytope needs matching A rows and b entries".into(),
        ));
    }
    let n = a[0].len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidConfig("ragged polytope rows".into()));
    }
    for row in a {
        check_finite(row)?;
        if norm(row) <= 0.0 {
            return Err(Error::InvalidConfig("zero polytope row".into()));
        }
    }
    check_finite(b)?;

    let interior = chebyshev_center(a, b)?;

    // Support LPs along every axis: boundedness and a bounding-box diameter.
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut bounded = true;
    'axes: for j in 0..n {
        for sign in [1.0, -1.0] {
            let mut c = vec![0.0; n];
            c[j] = sign;
            match lp::maximize(&c, a, b) {
                LpResult::Optimal { value, .. } => {
                    if sign > 0.0 {
                        upper[j] = value;
                    } else {
                        lower[j] = -value;
                    }
                }
                LpResult::Unbounded => {
                    bounded = false;
                    break 'axes;
                }
                LpResult::Infeasible => return Err(Error::EmptyInterior),
                LpResult::Stalled => {
                    return Err(Error::InvalidConfig("polytope support LP stalled".into()))
                }
            }
        }
    }
    let diameter = bounded.then(|| norm(&sub(&upper, &lower)));
    Ok(assemble(
        descriptor,
        Geom::Rows(RowSet::new(a.to_vec(), b.to_vec())),
        n,
        diameter,
        interior,
    ))
}

/// Chebyshev center of `(a_i, x) <= b_i` via a box-bounded auxiliary LP;
/// fails when the strict interior is empty.
fn chebyshev_center(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a[0].len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(a.len() + 2 * n + 1);
    let mut rhs: Vec<f64> = Vec::with_capacity(a.len() + 2 * n + 1);
    for (row, &bi) in a.iter().zip(b) {
        let mut r: Vec<f64> = row.clone();
        r.push(norm(row));
        rows.push(r);
        rhs.push(bi);
    }
    for j in 0..n {
        for sign in [1.0, -1.0] {
            let mut r = vec![0.0; n + 1];
            r[j] = sign;
            rows.push(r);
            rhs.push(CHEBYSHEV_BOX);
        }
    }
    let mut r = vec![0.0; n + 1];
    r[n] = 1.0;
    rows.push(r);
    rhs.push(CHEBYSHEV_BOX);

    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    match lp::maximize(&c, &rows, &rhs) {
        LpResult::Optimal { x, value } => {
            let center: Vec<f64> = x[..n].to_vec();
            let scale = 1.0 + norm(&center);
            if value <= 1e-9 * scale {
                return Err(Error::EmptyInterior);
            }
            Ok(center)
        }
        LpResult::Infeasible => Err(Error::EmptyInterior),
        LpResult::Unbounded | LpResult::Stalled => {
            Err(Error::InvalidConfig("chebyshev LP failed".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: &[f64]) -> Vec<f64> {
        let mut d = v.to_vec();
        normalize_mut(&mut d);
        d
    }

    #[test]
    fn unit_cube_metadata() {
        let b = BodyDescriptor::UnitCube { n: 3 }.build().unwrap();
        assert!(b.bounded());
        assert!((b.diameter().unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.dim(), 3);
    }

    #[test]
    fn contradictory_polytope_is_empty() {
        // x1 < 0 and -x1 < -1
        let d = BodyDescriptor::Polytope {
            a: vec![vec![1.0], vec![-1.0]],
            b: vec![0.0, -1.0],
        };
        assert!(matches!(d.build(), Err(Error::EmptyInterior)));
    }

    #[test]
    fn orthant_is_unbounded() {
        let b = BodyDescriptor::Orthant { n: 5 }.build().unwrap();
        assert!(!b.bounded());
        assert_eq!(b.diameter(), None);
    }

    #[test]
    fn membership_is_strict() {
        let cube = BodyDescriptor::UnitCube { n: 2 }.build().unwrap();
        assert!(cube.contains(&[0.5, 0.5]));
        assert!(!cube.contains(&[0.0, 0.5]));
        let simplex = BodyDescriptor::StandardSimplex { n: 2 }.build().unwrap();
        assert!(simplex.contains(&[1.0 / 3.0; 3]));
        assert!(!simplex.contains(&[0.5, 0.5, 0.0]));
    }

    #[test]
    fn cube_first_exit() {
        let b = BodyDescriptor::UnitCube { n: 2 }.build().unwrap();
        let h = b
            .first_exit(&[0.5, 0.5], &[1.0, 0.0])
            .unwrap()
            .hit()
            .unwrap();
        assert!((h.t - 0.5).abs() < 1e-12);
        assert_eq!(h.normal, vec![-1.0, 0.0]);
        assert!(h.smooth);
    }

    #[test]
    fn orthant_first_exit_and_escape() {
        let b = BodyDescriptor::Orthant { n: 2 }.build().unwrap();
        let d = unit(&[-1.0, -2.0]);
        let h = b.first_exit(&[1.0, 1.0], &d).unwrap().hit().unwrap();
        assert!((h.t - 5f64.sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(h.normal, vec![0.0, 1.0]);

        let d = unit(&[1.0, 2.0]);
        assert_eq!(b.first_exit(&[1.0, 1.0], &d).unwrap(), ExitOutcome::Escaped);
    }

    #[test]
    fn ball_exit_from_center() {
        let b = BodyDescriptor::Ball {
            center: vec![0.0; 3],
            radius: 1.0,
        }
        .build()
        .unwrap();
        let d = unit(&[0.3, -0.2, 0.9]);
        let h = b.first_exit(&[0.0; 3], &d).unwrap().hit().unwrap();
        assert!((h.t - 1.0).abs() < 1e-12);
        for (ni, di) in h.normal.iter().zip(&d) {
            assert!((ni + di).abs() < 1e-12);
        }
    }

    #[test]
    fn first_exit_requires_interior_origin() {
        let b = BodyDescriptor::UnitCube { n: 2 }.build().unwrap();
        assert!(matches!(
            b.first_exit(&[1.5, 0.5], &[1.0, 0.0]),
            Err(Error::OriginNotInterior)
        ));
    }

    #[test]
    fn cube_chord() {
        let b = BodyDescriptor::UnitCube { n: 2 }.build().unwrap();
        let c = b.chord(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        let (lo, hi) = c.finite().unwrap();
        assert!((lo + 0.5).abs() < 1e-12 && (hi - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diamond_polytope_chord() {
        let b = BodyDescriptor::Polytope {
            a: vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ],
            b: vec![1.0, 1.0, 1.0, 1.0],
        }
        .build()
        .unwrap();
        let d = unit(&[1.0, 1.0]);
        let (lo, hi) = b.chord(&[0.0, 0.0], &d).unwrap().finite().unwrap();
        assert!((hi - 2f64.sqrt()).abs() < 1e-12);
        assert!((lo + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ball_chord_off_center() {
        let b = BodyDescriptor::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        }
        .build()
        .unwrap();
        let (lo, hi) = b.chord(&[0.5, 0.0], &[1.0, 0.0]).unwrap().finite().unwrap();
        assert!((lo + 1.5).abs() < 1e-12);
        assert!((hi - 0.5).abs() < 1e-12);
    }

    #[test]
    fn orthant_chord_escapes() {
        let b = BodyDescriptor::Orthant { n: 2 }.build().unwrap();
        let d = unit(&[1.0, 1.0]);
        let c = b.chord(&[1.0, 1.0], &d).unwrap();
        assert_eq!(c.t_over, ChordEnd::Escaped);
        assert!(c.t_under.finite().is_some());
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(
            reflect_direction(&[1.0, 0.0], &[-1.0, 0.0]),
            vec![-1.0, 0.0]
        );
        assert_eq!(reflect_direction(&[1.0, 0.0], &[0.0, 1.0]), vec![1.0, 0.0]);
        let r = reflect_direction(
            &[
                std::f64::consts::FRAC_1_SQRT_2,
                -std::f64::consts::FRAC_1_SQRT_2,
            ],
            &[0.0, 1.0],
        );
        assert!((r[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn toroid_bound_values() {
        assert_eq!(toroid_path_bound(1.0 / 3.0).unwrap(), 3);
        assert_eq!(toroid_path_bound(0.1).unwrap(), 4);
        let just_below_one = f64::from_bits(1.0f64.to_bits() - 1);
        assert_eq!(toroid_path_bound(just_below_one).unwrap(), 2);
        assert!(toroid_path_bound(0.0).is_err());
        assert!(toroid_path_bound(1.0).is_err());
    }

    #[test]
    fn ellipsoid_build_and_exit() {
        let b = BodyDescriptor::Ellipsoid {
            a: vec![vec![1.0, 0.0], vec![0.0, 4.0]],
        }
        .build()
        .unwrap();
        // semi-axes 1 and 1/2, diameter 2
        assert!((b.diameter().unwrap() - 2.0).abs() < 1e-9);
        let h = b
            .first_exit(&[0.0, 0.0], &[0.0, 1.0])
            .unwrap()
            .hit()
            .unwrap();
        assert!((h.t - 0.5).abs() < 1e-12);

        let bad = BodyDescriptor::Ellipsoid {
            a: vec![vec![1.0, 0.0], vec![0.0, -1.0]],
        };
        assert!(matches!(bad.build(), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn polytope_chebyshev_interior() {
        // triangle x1 > 0, x2 > 0, x1 + x2 < 1
        let b = BodyDescriptor::Polytope {
            a: vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]],
            b: vec![0.0, 0.0, 1.0],
        }
        .build()
        .unwrap();
        assert!(b.contains(b.interior_point()));
        assert!(b.bounded());
    }

    #[test]
    fn descriptor_json_round_trip() {
        let d = BodyDescriptor::Polytope {
            a: vec![vec![1.0, 2.0]],
            b: vec![3.0],
        };
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"type\":\"polytope\""));
        assert!(s.contains("\"A\""));
        let back: BodyDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);

        let t: BodyDescriptor =
            serde_json::from_str(r#"{"type":"toroid","n":10,"r":0.3333}"#).unwrap();
        assert!(matches!(t, BodyDescriptor::Toroid { n: 10, .. }));
    }

    #[test]
    fn angle_triangle_build() {
        let b = BodyDescriptor::AngleTriangle {
            alpha: std::f64::consts::FRAC_PI_2,
        }
        .build()
        .unwrap();
        assert!(b.contains(&[0.0, 0.1]));
        assert!(!b.contains(&[0.2, 0.1]));
        assert!(b.contains(&[0.3, 0.5]));
    }
}
