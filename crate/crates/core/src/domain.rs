//! Convex planar domains with a C² boundary.
//!
//! Boundary points are addressed by the boundary arclength `s`, traversed
//! counterclockwise (interior on the left). Frames follow the convention
//! `T^S = J N^S` with `N^S` the outward unit normal and `J` the
//! counterclockwise quarter turn, so `T^S` is also the direction of
//! increasing `s`. Curvature `κ^S` is nonnegative.
//!
//! Internally every kind carries a smooth parametrization `u ↦ ζ(u)`; the
//! projection and billiard solvers work in `u` and only convert to `s` when a
//! frame is reported.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{minimize_bracketed, newton_polish, Jet};
use crate::scalar::Real;
use crate::spline::{ArcTable, PeriodicSpline};
use crate::vec2::Vec2;

/// Number of cached boundary samples used to seed global searches.
pub const COARSE_SAMPLES: usize = 256;
/// Number of starting points for nearest-point projection.
pub const PROJECTION_STARTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind<T> {
    /// `{ y ≥ 0 }`.
    HalfPlane,
    Disk { radius: T },
    Ellipse { a: T, b: T },
    Sampled { points: Vec<Vec2<T>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryFrame<T> {
    pub s: T,
    pub point: Vec2<T>,
    pub tangent: Vec2<T>,
    pub outward_normal: Vec2<T>,
    pub curvature: T,
    #[serde(skip)]
    pub(crate) u: T,
}

#[derive(Clone, Debug)]
enum Shape<T> {
    HalfPlane,
    Disk { r: T },
    Ellipse { a: T, b: T, arc: ArcTable<T> },
    Sampled { spline: PeriodicSpline<T>, arc: ArcTable<T> },
}

#[derive(Clone, Copy, Debug)]
struct Sample<T> {
    u: T,
    point: Vec2<T>,
}

/// A convex domain; immutable after construction and safe to share between threads.
#[derive(Clone, Debug)]
pub struct ConvexDomain<T> {
    kind: DomainKind<T>,
    shape: Shape<T>,
    boundary_length: T,
    coarse: Vec<Sample<T>>,
    /// Inward unit normal and offset of each edge of the coarse polygon.
    edges: Vec<(Vec2<T>, T)>,
}

impl<T: Real> ConvexDomain<T> {
    pub fn half_plane() -> Self {
        Self {
            kind: DomainKind::HalfPlane,
            shape: Shape::HalfPlane,
            boundary_length: T::infinity(),
            coarse: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn disk(radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::Input(format!("disk radius must be positive, got {radius}")));
        }
        let two_pi = T::PI() + T::PI();
        Ok(Self::with_coarse(
            DomainKind::Disk { radius },
            Shape::Disk { r: radius },
            two_pi * radius,
        ))
    }

    pub fn ellipse(a: T, b: T) -> Result<Self> {
        if !(a > T::zero() && b > T::zero() && a.is_finite() && b.is_finite()) {
            return Err(Error::Input(format!("ellipse semi-axes must be positive, got ({a}, {b})")));
        }
        let two_pi = T::PI() + T::PI();
        let panels = 512;
        let breaks = (0..=panels)
            .map(|k| two_pi * T::from_usize_lossy(k) / T::from_usize_lossy(panels))
            .collect();
        let arc = ArcTable::new(breaks, |u: T| (a * u.sin()).hypot(b * u.cos()));
        let len = arc.length();
        Ok(Self::with_coarse(DomainKind::Ellipse { a, b }, Shape::Ellipse { a, b, arc }, len))
    }

    /// Domain bounded by the periodic cubic spline through `points`, which
    /// must form a closed convex polygon (either orientation).
    pub fn sampled(points: Vec<Vec2<T>>) -> Result<Self> {
        if points.len() < 8 {
            return Err(Error::Input(format!(
                "sampled boundary needs at least 8 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Input("sampled boundary contains non-finite points".into()));
        }
        let mut pts = points.clone();
        if pts.first() == pts.last() {
            pts.pop();
        }
        let n = pts.len();
        let area2: T = (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum();
        if area2 < T::zero() {
            pts.reverse();
        }
        for i in 0..n {
            let e0 = pts[(i + 1) % n] - pts[i];
            let e1 = pts[(i + 2) % n] - pts[(i + 1) % n];
            if e0.norm() == T::zero() {
                return Err(Error::Input(format!("sampled boundary repeats point {i}")));
            }
            if e0.cross(e1) <= T::zero() {
                return Err(Error::Input(format!(
                    "sampled boundary is not strictly convex at point {}",
                    (i + 1) % n
                )));
            }
        }
        let spline = PeriodicSpline::new(&pts);
        let mut breaks = Vec::new();
        let sub = 4;
        for w in spline.knots().windows(2) {
            for j in 0..sub {
                breaks.push(w[0] + (w[1] - w[0]) * T::from_usize_lossy(j) / T::from_usize_lossy(sub));
            }
        }
        breaks.push(spline.period());
        let arc = ArcTable::new(breaks, |u: T| spline.eval(u).1.norm());
        let len = arc.length();
        let domain = Self::with_coarse(DomainKind::Sampled { points }, Shape::Sampled { spline, arc }, len);
        let dense = 8 * n.max(64);
        for k in 0..dense {
            let s = len * T::from_usize_lossy(k) / T::from_usize_lossy(dense);
            let f = domain.frame_u(domain.u_of_s(s));
            if f.curvature < -T::lit(1e-9) / len {
                return Err(Error::Input(format!(
                    "interpolated boundary is not convex near s = {}",
                    f.s
                )));
            }
        }
        Ok(domain)
    }

    fn with_coarse(kind: DomainKind<T>, shape: Shape<T>, boundary_length: T) -> Self {
        let mut d = Self { kind, shape, boundary_length, coarse: Vec::new(), edges: Vec::new() };
        d.coarse = (0..COARSE_SAMPLES)
            .map(|k| {
                let s = boundary_length * T::from_usize_lossy(k) / T::from_usize_lossy(COARSE_SAMPLES);
                let u = d.u_of_s(s);
                Sample { u, point: d.eval_u(u).0 }
            })
            .collect();
        let m = d.coarse.len();
        d.edges = (0..m)
            .map(|i| {
                let (a, b) = (d.coarse[i].point, d.coarse[(i + 1) % m].point);
                let n = (b - a).normalized().rot90();
                (n, n.dot(a))
            })
            .collect();
        d
    }

    pub fn kind(&self) -> &DomainKind<T> {
        &self.kind
    }

    /// Boundary length; `+∞` for the half-plane.
    pub fn boundary_length(&self) -> T {
        self.boundary_length
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self.shape, Shape::HalfPlane)
    }

    /// Characteristic length used to scale tolerances.
    pub fn scale(&self) -> T {
        match &self.shape {
            Shape::HalfPlane => T::one(),
            _ => self.boundary_length / (T::PI() + T::PI()),
        }
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        match &self.kind {
            DomainKind::HalfPlane => Ok(Self::half_plane()),
            DomainKind::Disk { radius } => Self::disk(*radius * factor),
            DomainKind::Ellipse { a, b } => Self::ellipse(*a * factor, *b * factor),
            DomainKind::Sampled { points } => Self::sampled(points.iter().map(|&p| p * factor).collect()),
        }
    }

    pub(crate) fn eval_u(&self, u: T) -> (Vec2<T>, Vec2<T>, Vec2<T>) {
        match &self.shape {
            Shape::HalfPlane => (Vec2::new(u, T::zero()), Vec2::new(T::one(), T::zero()), Vec2::zero()),
            Shape::Disk { r } => {
                let (s, c) = u.sin_cos();
                (
                    Vec2::new(*r * c, *r * s),
                    Vec2::new(-*r * s, *r * c),
                    Vec2::new(-*r * c, -*r * s),
                )
            }
            Shape::Ellipse { a, b, .. } => {
                let (s, c) = u.sin_cos();
                (
                    Vec2::new(*a * c, *b * s),
                    Vec2::new(-*a * s, *b * c),
                    Vec2::new(-*a * c, -*b * s),
                )
            }
            Shape::Sampled { spline, .. } => spline.eval(u),
        }
    }

    fn speed(&self, u: T) -> T {
        self.eval_u(u).1.norm()
    }

    pub(crate) fn s_of_u(&self, u: T) -> T {
        match &self.shape {
            Shape::HalfPlane => u,
            Shape::Disk { r } => {
                let two_pi = T::PI() + T::PI();
                let mut w = u % two_pi;
                if w < T::zero() {
                    w = w + two_pi;
                }
                *r * w
            }
            Shape::Ellipse { arc, .. } | Shape::Sampled { arc, .. } => arc.s_of_u(u, |v| self.speed(v)),
        }
    }

    pub(crate) fn u_of_s(&self, s: T) -> T {
        match &self.shape {
            Shape::HalfPlane => s,
            Shape::Disk { r } => {
                let mut w = s % self.boundary_length;
                if w < T::zero() {
                    w = w + self.boundary_length;
                }
                w / *r
            }
            Shape::Ellipse { arc, .. } | Shape::Sampled { arc, .. } => arc.u_of_s(s, |v| self.speed(v)),
        }
    }

    fn period_u(&self) -> Option<T> {
        match &self.shape {
            Shape::HalfPlane => None,
            Shape::Disk { .. } | Shape::Ellipse { .. } => Some(T::PI() + T::PI()),
            Shape::Sampled { arc, .. } => Some(arc.period()),
        }
    }

    pub(crate) fn frame_u(&self, u: T) -> BoundaryFrame<T> {
        let (p, d1, d2) = self.eval_u(u);
        let speed = d1.norm();
        let tangent = d1 / speed;
        let outward_normal = Vec2::new(tangent.y, -tangent.x);
        let curvature = match &self.shape {
            Shape::HalfPlane => T::zero(),
            Shape::Disk { r } => T::one() / *r,
            _ => d1.cross(d2) / (speed * speed * speed),
        };
        BoundaryFrame { s: self.s_of_u(u), point: p, tangent, outward_normal, curvature, u }
    }

    /// Position, frame and curvature at boundary arclength `s`.
    pub fn boundary_frame(&self, s: T) -> Result<BoundaryFrame<T>> {
        if !s.is_finite() {
            return Err(Error::Input(format!("boundary parameter must be finite, got {s}")));
        }
        Ok(self.frame_u(self.u_of_s(s)))
    }

    /// Turning angle of the boundary tangent, used to integrate `κ^S` along travelled arcs.
    pub(crate) fn tangent_angle(&self, frame: &BoundaryFrame<T>) -> T {
        frame.tangent.y.atan2(frame.tangent.x)
    }

    /// `∫ κ^S ds` over the shorter boundary arc between two frames.
    pub fn turning_between(&self, a: &BoundaryFrame<T>, b: &BoundaryFrame<T>) -> T {
        match self.shape {
            Shape::HalfPlane => T::zero(),
            _ => crate::scalar::wrap_angle(self.tangent_angle(b) - self.tangent_angle(a)).abs(),
        }
    }

    fn sq_dist_jet(&self, x: Vec2<T>, u: T) -> Jet<T> {
        let (p, d1, d2) = self.eval_u(u);
        let r = x - p;
        (r.norm_sq() * T::half(), -r.dot(d1), d1.norm_sq() - r.dot(d2))
    }

    /// Nearest boundary point to `x`.
    pub fn project(&self, x: Vec2<T>) -> Result<(BoundaryFrame<T>, T)> {
        if !x.is_finite() {
            return Err(Error::Input("projection point must be finite".into()));
        }
        let u = match &self.shape {
            Shape::HalfPlane => x.x,
            Shape::Disk { .. } => {
                if x.norm() == T::zero() {
                    T::zero()
                } else {
                    x.y.atan2(x.x)
                }
            }
            _ => self.project_global_u(x),
        };
        let f = self.frame_u(u);
        Ok((f, x.dist(f.point)))
    }

    fn project_global_u(&self, x: Vec2<T>) -> T {
        let stride = COARSE_SAMPLES / PROJECTION_STARTS;
        let starts: Vec<Sample<T>> = self.coarse.iter().step_by(stride).copied().collect();
        let m = starts.len();
        let d: Vec<T> = starts.iter().map(|s| s.point.dist(x)).collect();
        let period = self.period_u().unwrap();
        let mut best_u = starts[0].u;
        let mut best = T::infinity();
        for i in 0..m {
            let (prev, next) = (d[(i + m - 1) % m], d[(i + 1) % m]);
            if d[i] > prev || d[i] > next {
                continue;
            }
            let lo = unwrap_before(starts[(i + m - 1) % m].u, starts[i].u, period);
            let hi = unwrap_after(starts[(i + 1) % m].u, starts[i].u, period);
            let u = minimize_bracketed(|v| self.sq_dist_jet(x, v), lo, hi, 40);
            let val = self.sq_dist_jet(x, u).0;
            if val < best {
                best = val;
                best_u = u;
            }
        }
        best_u
    }

    /// Projection by Newton iteration seeded at boundary arclength `seed`,
    /// falling back to the global search if the iteration leaves the basin.
    pub fn project_near(&self, x: Vec2<T>, seed: T) -> Result<(BoundaryFrame<T>, T)> {
        match &self.shape {
            Shape::HalfPlane | Shape::Disk { .. } => return self.project(x),
            _ => {}
        }
        if !x.is_finite() || !seed.is_finite() {
            return Err(Error::Input("projection point must be finite".into()));
        }
        let mut u = self.u_of_s(seed);
        let mut best = self.sq_dist_jet(x, u).0;
        let span = self.period_u().unwrap() / T::from_usize_lossy(PROJECTION_STARTS);
        let (lo, hi) = (u - span, u + span);
        newton_polish(&|v| self.sq_dist_jet(x, v), &mut u, &mut best, lo, hi);
        let (_, g, h) = self.sq_dist_jet(x, u);
        let speed = self.speed(u);
        let converged = h > T::zero() && g.abs() <= T::lit(1e3) * T::epsilon() * speed * (T::one() + x.norm());
        if !converged {
            return self.project(x);
        }
        let f = self.frame_u(u);
        Ok((f, x.dist(f.point)))
    }

    /// Signed distance to the boundary, positive in the interior.
    pub fn interior_distance(&self, x: Vec2<T>) -> T {
        match &self.shape {
            Shape::HalfPlane => x.y,
            Shape::Disk { r } => *r - x.norm(),
            _ => match self.project(x) {
                Ok((f, d)) => {
                    if (x - f.point).dot(f.outward_normal) > T::zero() {
                        -d
                    } else {
                        d
                    }
                }
                Err(_) => T::nan(),
            },
        }
    }

    pub fn contains_interior(&self, x: Vec2<T>) -> bool {
        match &self.shape {
            Shape::Ellipse { a, b, .. } => (x.x / *a).powi(2) + (x.y / *b).powi(2) < T::one(),
            _ => self.deeper_than(x, T::zero()),
        }
    }

    /// Whether `x` lies in the interior at distance more than `depth` from
    /// the boundary. Cheap when `x` is well inside the coarse polygon.
    pub fn deeper_than(&self, x: Vec2<T>, depth: T) -> bool {
        match &self.shape {
            Shape::HalfPlane | Shape::Disk { .. } => self.interior_distance(x) > depth,
            _ => self.polygon_margin(x) > depth || self.interior_distance(x) > depth,
        }
    }

    /// Signed distance to the nearest edge line of the coarse inscribed
    /// polygon; a lower bound for the boundary distance when positive.
    fn polygon_margin(&self, x: Vec2<T>) -> T {
        let mut margin = T::infinity();
        for &(n, c) in &self.edges {
            margin = margin.min(n.dot(x) - c);
            if margin <= T::zero() {
                break;
            }
        }
        margin
    }

    /// Largest boundary curvature among boundary points within `radius` of any of `centers`.
    pub fn max_curvature_near(&self, centers: &[Vec2<T>], radius: T) -> T {
        match &self.shape {
            Shape::HalfPlane => T::zero(),
            Shape::Disk { r } => T::one() / *r,
            _ => {
                let dense = 4096;
                (0..dense)
                    .map(|k| {
                        let s = self.boundary_length * T::from_usize_lossy(k) / T::from_usize_lossy(dense);
                        self.frame_u(self.u_of_s(s))
                    })
                    .filter(|f| centers.iter().any(|c| c.dist(f.point) <= radius))
                    .map(|f| f.curvature)
                    .fold(T::zero(), T::max)
            }
        }
    }

    pub(crate) fn coarse_samples(&self) -> impl Iterator<Item = (T, Vec2<T>)> + '_ {
        self.coarse.iter().map(|s| (s.u, s.point))
    }

    pub(crate) fn period(&self) -> Option<T> {
        self.period_u()
    }
}

fn unwrap_before<T: Real>(prev: T, cur: T, period: T) -> T {
    if prev > cur {
        prev - period
    } else {
        prev
    }
}

fn unwrap_after<T: Real>(next: T, cur: T, period: T) -> T {
    if next < cur {
        next + period
    } else {
        next
    }
}

/// The angles relating two curve points, their frames and a boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleData<T> {
    pub alpha_x: T,
    pub alpha_y: T,
    pub beta_x: T,
    pub beta_y: T,
    pub theta_x: T,
    pub theta_y: T,
}

/// Angle `a ∈ (-π, π]` with `w = cos a · e_cos + sin a · e_sin` for unit `w`.
fn decompose<T: Real>(w: Vec2<T>, e_cos: Vec2<T>, e_sin: Vec2<T>) -> T {
    w.dot(e_sin).atan2(w.dot(e_cos))
}

fn unit_between<T: Real>(a: Vec2<T>, b: Vec2<T>, what: &'static str) -> Result<Vec2<T>> {
    let d = a - b;
    let n = d.norm();
    if !(n > T::zero()) {
        return Err(Error::Degenerate(what));
    }
    Ok(d / n)
}

/// `α` with `(x - y)/|x - y| = cos α (-J X) + sin α X`.
pub fn alpha_angle<T: Real>(x: Vec2<T>, y: Vec2<T>, dir: Vec2<T>) -> Result<T> {
    let w = unit_between(x, y, "alpha (x = y)")?;
    Ok(decompose(w, -dir.rot90(), dir))
}

/// `β` with `(p - z)/|p - z| = cos β (-J X) + sin β X`.
pub fn beta_angle<T: Real>(p: Vec2<T>, z: Vec2<T>, dir: Vec2<T>) -> Result<T> {
    let w = unit_between(p, z, "beta (point on the bounce)")?;
    Ok(decompose(w, -dir.rot90(), dir))
}

/// `θ` with `(p - z)/|p - z| = cos θ N^S_z + sin θ T^S_z`.
pub fn theta_angle<T: Real>(p: Vec2<T>, z: &BoundaryFrame<T>) -> Result<T> {
    let w = unit_between(p, z.point, "theta (point on the bounce)")?;
    Ok(decompose(w, z.outward_normal, z.tangent))
}

/// All six configuration angles for points `x, y`, boundary frame `z` and unit directions `X, Y`.
pub fn angles_at<T: Real>(
    x: Vec2<T>,
    y: Vec2<T>,
    z: &BoundaryFrame<T>,
    xdir: Vec2<T>,
    ydir: Vec2<T>,
) -> Result<AngleData<T>> {
    if x == y {
        return Err(Error::Degenerate("alpha_x/alpha_y (x = y)"));
    }
    if x == z.point {
        return Err(Error::Degenerate("beta_x/theta_x (x = z)"));
    }
    if y == z.point {
        return Err(Error::Degenerate("beta_y/theta_y (y = z)"));
    }
    Ok(AngleData {
        alpha_x: alpha_angle(x, y, xdir)?,
        alpha_y: alpha_angle(x, y, ydir)?,
        beta_x: beta_angle(x, z.point, xdir)?,
        beta_y: beta_angle(y, z.point, ydir)?,
        theta_x: theta_angle(x, z)?,
        theta_y: theta_angle(y, z)?,
    })
}

impl<T: Real> AngleData<T> {
    /// Largest deviation when the angles are substituted back into their
    /// defining decompositions.
    pub fn reconstruction_residual(
        &self,
        x: Vec2<T>,
        y: Vec2<T>,
        z: &BoundaryFrame<T>,
        xdir: Vec2<T>,
        ydir: Vec2<T>,
    ) -> T {
        let rebuild = |a: T, e_cos: Vec2<T>, e_sin: Vec2<T>| e_cos * a.cos() + e_sin * a.sin();
        let wxy = (x - y).normalized();
        let wx = (x - z.point).normalized();
        let wy = (y - z.point).normalized();
        let (nx, ny) = (-xdir.rot90(), -ydir.rot90());
        [
            (rebuild(self.alpha_x, nx, xdir) - wxy).norm(),
            (rebuild(self.alpha_y, ny, ydir) - wxy).norm(),
            (rebuild(self.beta_x, nx, xdir) - wx).norm(),
            (rebuild(self.beta_y, ny, ydir) - wy).norm(),
            (rebuild(self.theta_x, z.outward_normal, z.tangent) - wx).norm(),
            (rebuild(self.theta_y, z.outward_normal, z.tangent) - wy).norm(),
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn disk_frame_at_origin_parameter() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let f = d.boundary_frame(0.0).unwrap();
        assert_eq!(f.point, Vec2::new(1.0, 0.0));
        assert_eq!(f.outward_normal, Vec2::new(1.0, 0.0));
        assert_eq!(f.tangent, Vec2::new(0.0, 1.0));
        assert_eq!(f.curvature, 1.0);
    }

    #[test]
    fn half_plane_frame() {
        let d = ConvexDomain::<f64>::half_plane();
        let f = d.boundary_frame(2.0).unwrap();
        assert_eq!(f.point, Vec2::new(2.0, 0.0));
        assert_eq!(f.outward_normal, Vec2::new(0.0, -1.0));
        assert_eq!(f.tangent, Vec2::new(1.0, 0.0));
        assert_eq!(f.curvature, 0.0);
        assert!(d.boundary_length().is_infinite());
    }

    #[test]
    fn ellipse_vertex_curvature_matches_closed_form_and_differences() {
        let d = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let f = d.boundary_frame(0.0).unwrap();
        assert!(f.point.dist(Vec2::new(2.0, 0.0)) < 1e-12);
        assert!(close(f.curvature, 2.0, 1e-12));
        // turning rate of the tangent by central differences in s
        let h = 1e-4;
        let a = d.boundary_frame(-h).unwrap();
        let b = d.boundary_frame(h).unwrap();
        let fd: f64 = d.turning_between(&a, &b) / (2.0 * h);
        assert!(close(fd, 2.0, 1e-6), "fd curvature {fd}");
    }

    #[test]
    fn non_finite_parameter_is_rejected() {
        let d = ConvexDomain::disk(1.0).unwrap();
        assert!(matches!(d.boundary_frame(f64::NAN), Err(Error::Input(_))));
    }

    #[test]
    fn bounded_parameter_wraps() {
        let d = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let l = d.boundary_length();
        let a = d.boundary_frame(1.3).unwrap();
        let b = d.boundary_frame(1.3 + 2.0 * l).unwrap();
        assert!(a.point.dist(b.point) < 1e-12);
        assert!(close(a.s, b.s, 1e-9));
    }

    #[test]
    fn frames_are_orthonormal_with_tangent_equal_j_normal() {
        let pts: Vec<Vec2<f64>> = (0..40)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 40.0;
                Vec2::new(1.5 * t.cos(), 0.8 * t.sin())
            })
            .collect();
        let domains = [
            (ConvexDomain::disk(1.3).unwrap(), 1e-12),
            (ConvexDomain::ellipse(2.0, 0.7).unwrap(), 1e-12),
            (ConvexDomain::sampled(pts).unwrap(), 1e-8),
        ];
        for (d, tol) in &domains {
            for k in 0..97 {
                let f = d.boundary_frame(d.boundary_length() * k as f64 / 97.0).unwrap();
                assert!((f.tangent.norm() - 1.0).abs() < *tol);
                assert!((f.outward_normal.norm() - 1.0).abs() < *tol);
                assert!(f.tangent.dot(f.outward_normal).abs() < *tol);
                assert!(f.outward_normal.rot90().dist(f.tangent) < *tol);
                assert!(f.curvature > 0.0);
            }
        }
    }

    #[test]
    fn sampled_domain_rejects_nonconvex_polygon() {
        let mut pts: Vec<Vec2<f64>> = (0..12).map(|i| Vec2::polar(2.0 * PI * i as f64 / 12.0)).collect();
        pts[3] = pts[3] * 0.5;
        assert!(matches!(ConvexDomain::sampled(pts), Err(Error::Input(_))));
    }

    #[test]
    fn sampled_clockwise_input_is_reoriented() {
        let pts: Vec<Vec2<f64>> = (0..32).rev().map(|i| Vec2::polar(2.0 * PI * i as f64 / 32.0)).collect();
        let d = ConvexDomain::sampled(pts).unwrap();
        assert!(d.contains_interior(Vec2::new(0.1, 0.2)));
        assert!(!d.contains_interior(Vec2::new(1.1, 0.0)));
        assert!((d.boundary_length() - 2.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn projection_examples() {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let (f, dist) = disk.project(Vec2::new(0.5, 0.0)).unwrap();
        assert!(close(f.s, 0.0, 1e-15));
        assert!(close(dist, 0.5, 1e-15));

        let hp = ConvexDomain::<f64>::half_plane();
        let (f, dist) = hp.project(Vec2::new(3.0, 2.0)).unwrap();
        assert_eq!(f.point, Vec2::new(3.0, 0.0));
        assert_eq!(dist, 2.0);
    }

    #[test]
    fn ellipse_projection_matches_dense_scan() {
        let d = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let x = Vec2::new(1.9, 0.3);
        let (f, _) = d.project(x).unwrap();
        // brute-force oracle: 1e5 boundary samples in s, then a parabolic refinement
        let l = d.boundary_length();
        let n = 100_000;
        let dist = |s: f64| d.boundary_frame(s).unwrap().point.dist(x);
        let (k, _) = (0..n)
            .map(|k| (k, dist(l * k as f64 / n as f64)))
            .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        let h = l / n as f64;
        let s0 = l * k as f64 / n as f64;
        let (fm, f0, fp) = (dist(s0 - h), dist(s0), dist(s0 + h));
        let s_star = s0 + 0.5 * h * (fm - fp) / (fm - 2.0 * f0 + fp);
        let gap = (f.s - s_star).abs().min(l - (f.s - s_star).abs());
        assert!(gap < 1e-6, "projection s {} vs oracle {}", f.s, s_star);
    }

    #[test]
    fn projection_is_idempotent() {
        let d = ConvexDomain::ellipse(3.0, 0.5).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let x = Vec2::new(2.5 * t.cos() * 0.9, 0.4 * t.sin() * 0.9);
            let (f, _) = d.project(x).unwrap();
            let (g, dist) = d.project(f.point).unwrap();
            assert!(dist < 1e-12);
            let gap = (f.s - g.s).abs();
            assert!(gap.min(d.boundary_length() - gap) < 1e-10);
        }
    }

    #[test]
    fn local_projection_agrees_with_global() {
        let d = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let x = Vec2::new(1.2, 0.7);
        let (g, _) = d.project(x).unwrap();
        let (l, _): (BoundaryFrame<f64>, f64) = d.project_near(x, g.s + 0.05).unwrap();
        assert!((g.s - l.s).abs() < 1e-10_f64, "{} {}", g.s, l.s);
    }

    #[test]
    fn theta_for_point_above_flat_boundary() {
        let hp = ConvexDomain::<f64>::half_plane();
        let z = hp.boundary_frame(0.0).unwrap();
        let th = theta_angle(Vec2::new(0.0, 1.0), &z).unwrap();
        assert!(close(th, PI, 1e-15));
        assert!(th.cos() < 0.0);
    }

    #[test]
    fn alpha_for_diagonal_chord() {
        // -J X = (0,-1) for X = (1,0), so the chord direction (1,1)/√2 sits at 3π/4
        let a = alpha_angle(Vec2::new(1.0, 1.0), Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!(close(a, 3.0 * FRAC_PI_4, 1e-15));
        // X = (0,1) has -J X = (1,0): same chord sits at π/4
        let b = alpha_angle(Vec2::new(1.0, 1.0), Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        assert!(close(b, FRAC_PI_4, 1e-15));
    }

    #[test]
    fn equal_directions_give_equal_alphas() {
        let hp = ConvexDomain::<f64>::half_plane();
        let z = hp.boundary_frame(0.3).unwrap();
        let dir = Vec2::new(0.6, 0.8);
        let a = angles_at(Vec2::new(0.2, 1.0), Vec2::new(-0.4, 0.5), &z, dir, dir).unwrap();
        assert_eq!(a.alpha_x, a.alpha_y);
    }

    #[test]
    fn coincident_points_are_degenerate() {
        let hp = ConvexDomain::<f64>::half_plane();
        let z = hp.boundary_frame(0.0).unwrap();
        let p = Vec2::new(1.0, 1.0);
        let dir = Vec2::new(1.0, 0.0);
        assert!(matches!(angles_at(p, p, &z, dir, dir), Err(Error::Degenerate(_))));
        assert!(matches!(angles_at(p, z.point, &z, dir, dir), Err(Error::Degenerate(_))));
    }

    #[test]
    fn f32_domain_queries() {
        let d = ConvexDomain::<f32>::ellipse(2.0, 1.0).unwrap();
        let f = d.boundary_frame(0.0).unwrap();
        assert!((f.curvature - 2.0).abs() < 1e-3);
        let (p, dist) = d.project(Vec2::new(0.0, 0.5)).unwrap();
        assert!((dist - 0.5).abs() < 1e-4);
        assert!(p.point.dist(Vec2::new(0.0, 1.0)) < 1e-3);
    }
}
