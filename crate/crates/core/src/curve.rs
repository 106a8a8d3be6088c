//! Polylines with both endpoints on the boundary of a convex domain.
//!
//! Vertices `v_0 … v_N` with `v_0, v_N ∈ ∂Ω`. Curvature uses the reflected
//! completion at the ends: when `v_0` is the foot of `v_1` on the boundary, the
//! end edge is half of the edge to the mirror image of `v_1`, so the dual
//! length at `v_1` counts `|e_0|` twice. Tangents point from `v_0` towards
//! `v_N`; with the standard orientation the unit normal is `N = -J T`, so
//! `κ` is the counterclockwise turning rate of `T` and the flow moves `-κ N`.

use serde::Serialize;

use crate::billiard::{reflected_distance, ReflectedDistance};
use crate::domain::{BoundaryFrame, ConvexDomain};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Relative threshold (times `1/L`) below which a curvature value counts as zero for sign counts.
pub const ZERO_CURVATURE: f64 = 1e-9;
/// Default orthogonality tolerance at the endpoints (radians).
pub const TOL_ORTH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `N = -J T`.
    #[default]
    Standard,
    /// `N = J T`; curvature changes sign.
    Flipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TotalCurvature<T> {
    /// `∫|κ| ds`.
    pub total: T,
    pub vertex_count: usize,
    pub inflection_count: usize,
}

#[derive(Clone, Debug)]
pub struct DiscreteCurve<T> {
    vertices: Vec<Vec2<T>>,
    ends: [BoundaryFrame<T>; 2],
    orientation: Orientation,
    edge_lengths: Vec<T>,
    cumulative: Vec<T>,
    curvature: Vec<T>,
    dual: Vec<T>,
}

impl<T: Real> DiscreteCurve<T> {
    /// Validates `vertices` against `domain`: endpoints on the boundary within
    /// `1e-8 L`, interior vertices strictly inside, no degenerate edges, embedded.
    pub fn new(domain: &ConvexDomain<T>, vertices: Vec<Vec2<T>>) -> Result<Self> {
        Self::with_orientation(domain, vertices, Orientation::Standard)
    }

    pub fn with_orientation(
        domain: &ConvexDomain<T>,
        vertices: Vec<Vec2<T>>,
        orientation: Orientation,
    ) -> Result<Self> {
        if vertices.len() < 5 {
            return Err(Error::Input(format!("curve needs at least 5 vertices, got {}", vertices.len())));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("curve has non-finite vertices".into()));
        }
        let n = vertices.len() - 1;
        let (left, _) = domain.project(vertices[0])?;
        let (right, _) = domain.project(vertices[n])?;
        let curve = Self::assemble(vertices, [left, right], orientation)?;
        let tol = T::lit(1e-8) * curve.length();
        for (k, end) in [(0, &curve.ends[0]), (n, &curve.ends[1])] {
            let off = curve.vertices[k].dist(end.point);
            if off > tol {
                return Err(Error::Input(format!(
                    "endpoint {k} is {off} away from the boundary (tolerance {tol})"
                )));
            }
        }
        curve.check_interior(domain)?;
        if !curve.is_embedded() {
            return Err(Error::Mesh("curve is not embedded".into()));
        }
        Ok(curve)
    }

    /// Builds the tables and curvature without geometric validation.
    pub(crate) fn assemble(
        vertices: Vec<Vec2<T>>,
        ends: [BoundaryFrame<T>; 2],
        orientation: Orientation,
    ) -> Result<Self> {
        let n = vertices.len() - 1;
        let edge_lengths: Vec<T> = vertices.windows(2).map(|w| w[0].dist(w[1])).collect();
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(T::zero());
        for &e in &edge_lengths {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + e);
        }
        let length = cumulative[n];
        let floor = T::lit(1e-14) * length;
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::Mesh(format!("curve length {length} is not positive")));
        }
        if let Some(i) = edge_lengths.iter().position(|&e| !(e > floor)) {
            return Err(Error::Mesh(format!("edge {i} is degenerate (length {})", edge_lengths[i])));
        }
        let mut curve = Self {
            vertices,
            ends,
            orientation,
            edge_lengths,
            cumulative,
            curvature: Vec::new(),
            dual: Vec::new(),
        };
        curve.compute_curvature();
        Ok(curve)
    }

    fn compute_curvature(&mut self) {
        let n = self.vertices.len() - 1;
        let e = &self.edge_lengths;
        let sign = match self.orientation {
            Orientation::Standard => T::one(),
            Orientation::Flipped => -T::one(),
        };
        let mut kappa = vec![T::zero(); n + 1];
        let mut dual = vec![T::zero(); n + 1];
        for i in 1..n {
            let a = self.vertices[i] - self.vertices[i - 1];
            let b = self.vertices[i + 1] - self.vertices[i];
            let turn = a.cross(b).atan2(a.dot(b));
            let left = if i == 1 { e[0] + e[0] } else { e[i - 1] };
            let right = if i == n - 1 { e[n - 1] + e[n - 1] } else { e[i] };
            dual[i] = (left + right) * T::half();
            kappa[i] = sign * turn / dual[i];
        }
        let (s, l) = (&self.cumulative, self.length());
        kappa[0] = quadratic_at(
            [s[1], s[2], s[3]],
            [kappa[1], kappa[2], kappa[3]],
            T::zero(),
        )
        .0;
        kappa[n] = quadratic_at(
            [l - s[n - 1], l - s[n - 2], l - s[n - 3]],
            [kappa[n - 1], kappa[n - 2], kappa[n - 3]],
            T::zero(),
        )
        .0;
        self.curvature = kappa;
        self.dual = dual;
    }

    fn check_interior(&self, domain: &ConvexDomain<T>) -> Result<()> {
        let n = self.vertices.len() - 1;
        for i in 1..n {
            if !domain.contains_interior(self.vertices[i]) {
                return Err(Error::Input(format!("vertex {i} is not in the interior of the domain")));
            }
        }
        Ok(())
    }

    /// Same geometry with the other normal.
    pub fn flipped(&self) -> Self {
        let orientation = match self.orientation {
            Orientation::Standard => Orientation::Flipped,
            Orientation::Flipped => Orientation::Standard,
        };
        let mut c = self.clone();
        c.orientation = orientation;
        c.curvature.iter_mut().for_each(|k| *k = -*k);
        c
    }

    /// Same curve traversed from `v_N` to `v_0`, keeping the normal field.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let orientation = match self.orientation {
            Orientation::Standard => Orientation::Flipped,
            Orientation::Flipped => Orientation::Standard,
        };
        Self::assemble(vertices, [self.ends[1], self.ends[0]], orientation)
            .expect("reversal preserves a valid mesh")
    }

    pub fn vertices(&self) -> &[Vec2<T>] {
        &self.vertices
    }

    /// Index of the last vertex (`N`).
    pub fn last(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn endpoint_frames(&self) -> &[BoundaryFrame<T>; 2] {
        &self.ends
    }

    /// `(s_L, s_R)`.
    pub fn endpoint_params(&self) -> (T, T) {
        (self.ends[0].s, self.ends[1].s)
    }

    pub fn edge_lengths(&self) -> &[T] {
        &self.edge_lengths
    }

    pub fn cumulative_arclength(&self) -> &[T] {
        &self.cumulative
    }

    pub fn length(&self) -> T {
        *self.cumulative.last().unwrap()
    }

    /// Signed curvature per vertex; the two endpoint values are extrapolated.
    pub fn curvature(&self) -> &[T] {
        &self.curvature
    }

    /// Quadrature weights for the interior vertices (zero at the endpoints).
    pub fn dual_lengths(&self) -> &[T] {
        &self.dual
    }

    /// Largest edge length.
    pub fn h_max(&self) -> T {
        self.edge_lengths.iter().copied().fold(T::zero(), T::max)
    }

    /// Smallest edge length, counting each end edge as its mirrored double.
    pub fn h_min(&self) -> T {
        let n = self.last();
        self.edge_lengths
            .iter()
            .enumerate()
            .map(|(i, &e)| if i == 0 || i == n - 1 { e + e } else { e })
            .fold(T::infinity(), T::min)
    }

    /// Unit tangent at each vertex (edge direction at the ends, bisector inside).
    pub fn tangents(&self) -> Vec<Vec2<T>> {
        let n = self.last();
        let unit = |i: usize| (self.vertices[i + 1] - self.vertices[i]) / self.edge_lengths[i];
        (0..=n)
            .map(|i| {
                if i == 0 {
                    unit(0)
                } else if i == n {
                    unit(n - 1)
                } else {
                    (unit(i - 1) + unit(i)).normalized()
                }
            })
            .collect()
    }

    pub fn normals(&self) -> Vec<Vec2<T>> {
        self.tangents().into_iter().map(|t| self.normal_of(t)).collect()
    }

    pub(crate) fn normal_of(&self, t: Vec2<T>) -> Vec2<T> {
        match self.orientation {
            Orientation::Standard => -t.rot90(),
            Orientation::Flipped => t.rot90(),
        }
    }

    pub fn max_abs_curvature(&self) -> T {
        let n = self.last();
        self.curvature[1..n].iter().fold(T::zero(), |m, k| m.max(k.abs()))
    }

    /// `∫ κ² ds`.
    pub fn curvature_l2(&self) -> T {
        let n = self.last();
        (1..n).map(|i| self.curvature[i] * self.curvature[i] * self.dual[i]).sum()
    }

    pub fn total_curvature(&self) -> TotalCurvature<T> {
        let n = self.last();
        let total = (1..n).map(|i| self.curvature[i].abs() * self.dual[i]).sum();
        let kappa = &self.curvature[1..n];
        let zero = T::lit(ZERO_CURVATURE) / self.length();
        let diffs: Vec<T> = kappa.windows(2).map(|w| w[1] - w[0]).collect();
        TotalCurvature {
            total,
            vertex_count: sign_changes(&diffs, zero),
            inflection_count: sign_changes(kappa, zero),
        }
    }

    /// `|⟨T, T^S⟩|` at the left and right endpoint.
    pub fn orthogonality_residuals(&self) -> [T; 2] {
        let n = self.last();
        let t0 = (self.vertices[1] - self.vertices[0]) / self.edge_lengths[0];
        let t1 = (self.vertices[n] - self.vertices[n - 1]) / self.edge_lengths[n - 1];
        [t0.dot(self.ends[0].tangent).abs(), t1.dot(self.ends[1].tangent).abs()]
    }

    /// `⟨∇κ, N^S⟩ - κ^S κ` at each end, from the quadratic fit through the
    /// three nearest interior curvature values.
    pub fn neumann_residuals(&self) -> [T; 2] {
        let n = self.last();
        let (s, l, k) = (&self.cumulative, self.length(), &self.curvature);
        let (k0, dk0) = quadratic_at([s[1], s[2], s[3]], [k[1], k[2], k[3]], T::zero());
        let (k1, dk1) = quadratic_at(
            [l - s[n - 1], l - s[n - 2], l - s[n - 3]],
            [k[n - 1], k[n - 2], k[n - 3]],
            T::zero(),
        );
        // T = -N^S at the left end and T = N^S at the right end; dk1 is taken
        // in the reversed arclength, so both gradients pick up the same sign
        [-dk0 - self.ends[0].curvature * k0, -dk1 - self.ends[1].curvature * k1]
    }

    /// `ℓ(i, j)`.
    pub fn arclength(&self, i: usize, j: usize) -> T {
        (self.cumulative[i] - self.cumulative[j]).abs()
    }

    /// `d(i, j) = |v_i - v_j|`.
    pub fn chordlength(&self, i: usize, j: usize) -> T {
        self.vertices[i].dist(self.vertices[j])
    }

    /// The two single-endpoint routes `(via v_0, via v_N)`; they sum to `2L`.
    pub fn reflected_routes(&self, i: usize, j: usize) -> (T, T) {
        let via_left = self.cumulative[i] + self.cumulative[j];
        let l = self.length();
        (via_left, l + l - via_left)
    }

    /// `ℓ̃(i, j)`.
    pub fn reflected_arclength(&self, i: usize, j: usize) -> T {
        let (a, b) = self.reflected_routes(i, j);
        a.min(b)
    }

    /// No two non-adjacent edges touch.
    pub fn is_embedded(&self) -> bool {
        is_embedded(&self.vertices)
    }

    /// Distance from each vertex to the nearest endpoint, in arclength.
    pub fn distance_to_ends(&self, i: usize) -> T {
        self.cumulative[i].min(self.length() - self.cumulative[i])
    }
}

/// Value and derivative at `x` of the parabola through three points.
fn quadratic_at<T: Real>(xs: [T; 3], ys: [T; 3], x: T) -> (T, T) {
    let mut value = T::zero();
    let mut slope = T::zero();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let denom = (xs[i] - xs[j]) * (xs[i] - xs[k]);
        value = value + ys[i] * (x - xs[j]) * (x - xs[k]) / denom;
        slope = slope + ys[i] * ((x - xs[j]) + (x - xs[k])) / denom;
    }
    (value, slope)
}

fn sign_changes<T: Real>(values: &[T], zero: T) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for &v in values {
        if v.abs() <= zero {
            continue;
        }
        let pos = v > T::zero();
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

fn orient<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    (b - a).cross(c - a)
}

fn segments_touch<T: Real>(p1: Vec2<T>, p2: Vec2<T>, q1: Vec2<T>, q2: Vec2<T>) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let z = T::zero();
    if ((d1 > z && d2 < z) || (d1 < z && d2 > z)) && ((d3 > z && d4 < z) || (d3 < z && d4 > z)) {
        return true;
    }
    let on = |a: Vec2<T>, b: Vec2<T>, p: Vec2<T>| {
        p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    };
    (d1 == z && on(q1, q2, p1))
        || (d2 == z && on(q1, q2, p2))
        || (d3 == z && on(p1, p2, q1))
        || (d4 == z && on(p1, p2, q2))
}

/// Sweep over edges sorted by their left `x` extent.
pub(crate) fn is_embedded<T: Real>(vertices: &[Vec2<T>]) -> bool {
    let m = vertices.len() - 1;
    let span = |i: usize| {
        let (a, b) = (vertices[i], vertices[i + 1]);
        (a.x.min(b.x), a.x.max(b.x))
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| span(i).0.partial_cmp(&span(j).0).unwrap_or(std::cmp::Ordering::Equal));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let (lo, _) = span(i);
        active.retain(|&j| span(j).1 >= lo);
        for &j in &active {
            if i.abs_diff(j) < 2 {
                continue;
            }
            let (a, b) = (vertices[i], vertices[i + 1]);
            let (c, d) = (vertices[j], vertices[j + 1]);
            if a.y.max(b.y) < c.y.min(d.y) || c.y.max(d.y) < a.y.min(b.y) {
                continue;
            }
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
        active.push(i);
    }
    true
}

/// A point of the formal double: vertex index plus sheet sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signed {
    pub index: usize,
    pub positive: bool,
}

impl Signed {
    pub fn plus(index: usize) -> Self {
        Self { index, positive: true }
    }

    pub fn minus(index: usize) -> Self {
        Self { index, positive: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Classical,
    Reflected,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairValue<T> {
    /// `𝒍`.
    pub ell: T,
    /// `𝒅`.
    pub d: T,
    pub branch: Branch,
}

/// Two copies of a curve glued at its endpoints, with completed arclength `𝒍`
/// and chordlength `𝒅`.
#[derive(Clone, Copy, Debug)]
pub struct DoubledCurve<'a, T> {
    base: &'a DiscreteCurve<T>,
    domain: &'a ConvexDomain<T>,
}

impl<'a, T: Real> DoubledCurve<'a, T> {
    pub fn new(base: &'a DiscreteCurve<T>, domain: &'a ConvexDomain<T>) -> Self {
        Self { base, domain }
    }

    pub fn base(&self) -> &'a DiscreteCurve<T> {
        self.base
    }

    pub fn domain(&self) -> &'a ConvexDomain<T> {
        self.domain
    }

    /// `𝑳 = 2L`.
    pub fn doubled_length(&self) -> T {
        self.base.length() + self.base.length()
    }

    fn is_end(&self, i: usize) -> bool {
        i == 0 || i == self.base.last()
    }

    /// Pairs on one sheet, or involving an endpoint (which lies on both sheets).
    pub fn same_sheet(&self, a: Signed, b: Signed) -> bool {
        a.positive == b.positive || self.is_end(a.index) || self.is_end(b.index)
    }

    /// `𝒍(a, b)`.
    pub fn ell(&self, a: Signed, b: Signed) -> T {
        if self.same_sheet(a, b) {
            self.base.arclength(a.index, b.index)
        } else {
            self.base.reflected_arclength(a.index, b.index)
        }
    }

    /// `𝒍` and `𝒅`, with the billiard solution when the reflected branch applies.
    pub fn pair(&self, a: Signed, b: Signed) -> Result<(PairValue<T>, Option<ReflectedDistance<T>>)> {
        let (i, j) = (a.index, b.index);
        if self.same_sheet(a, b) {
            let value = PairValue {
                ell: self.base.arclength(i, j),
                d: self.base.chordlength(i, j),
                branch: Branch::Classical,
            };
            return Ok((value, None));
        }
        let v = self.base.vertices();
        let r = reflected_distance(self.domain, v[i], v[j])?;
        let value = PairValue { ell: self.base.reflected_arclength(i, j), d: r.distance, branch: Branch::Reflected };
        Ok((value, Some(r)))
    }

    /// `𝒅(a, b)`.
    pub fn d(&self, a: Signed, b: Signed) -> Result<T> {
        Ok(self.pair(a, b)?.0.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial;
    use std::f64::consts::PI;

    fn semicircle(m: usize) -> (ConvexDomain<f64>, DiscreteCurve<f64>) {
        let hp = ConvexDomain::half_plane();
        let c = initial::semicircle(&hp, 0.0, 1.0, m).unwrap();
        (hp, c)
    }

    #[test]
    fn semicircle_curvature_and_total() {
        let (_, c) = semicircle(400);
        let n = c.last();
        let err = c.curvature()[1..n].iter().map(|k| (k - 1.0).abs()).fold(0.0, f64::max);
        assert!(err < 5e-4, "curvature error {err}");
        let tc = c.total_curvature();
        assert!((tc.total - PI).abs() < 1e-12);
        assert_eq!(tc.inflection_count, 0);
    }

    #[test]
    fn curvature_error_is_second_order() {
        let errs: Vec<f64> = [50, 100, 200]
            .iter()
            .map(|&m| {
                let (_, c) = semicircle(m);
                let n = c.last();
                c.curvature()[1..n].iter().map(|k| (k - 1.0).abs()).fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 4.0).abs() < 0.2, "refinement ratio {ratio}");
        }
    }

    #[test]
    fn straight_chord_is_flat() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let mut v: Vec<Vec2<f64>> = (0..20).map(|k| Vec2::new((k as f64 + 0.5) / 10.0 - 1.0, 0.0)).collect();
        v.insert(0, Vec2::new(-1.0, 0.0));
        v.push(Vec2::new(1.0, 0.0));
        let c = DiscreteCurve::new(&d, v).unwrap();
        assert!(c.curvature().iter().all(|&k| k == 0.0));
        let tc = c.total_curvature();
        assert_eq!(tc.total, 0.0);
        assert_eq!(tc.inflection_count, 0);
        assert!((c.length() - 2.0).abs() < 1e-15);
        assert!((c.arclength(0, c.last()) - c.chordlength(0, c.last())).abs() < 1e-15);
    }

    #[test]
    fn flipping_normal_negates_curvature() {
        let (_, c) = semicircle(40);
        let f = c.flipped();
        for (a, b) in c.curvature().iter().zip(f.curvature()) {
            assert_eq!(*a, -*b);
        }
        let r = c.reversed();
        let n = c.last();
        for i in 0..=n {
            assert!((c.curvature()[i] - r.curvature()[n - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn one_hump_bump_has_two_inflections() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&d, PI, 0.0, 100, |t: f64| {
            let x = 2.0 * t - 1.0;
            0.1 * (1.0 - x * x).powi(2)
        })
        .unwrap();
        assert_eq!(c.total_curvature().inflection_count, 2);
    }

    #[test]
    fn semicircle_chords_match_circle_geometry() {
        let (_, c) = semicircle(64);
        let delta = PI / 64.0;
        let d = c.chordlength(3, 10);
        assert!((d - 2.0 * (7.0 * delta / 2.0).sin()).abs() < 1e-14);
    }

    #[test]
    fn reflected_arclength_examples() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let c = initial::chord(&d, PI, 0.0, 11).unwrap();
        assert_eq!(c.reflected_arclength(0, 0), 0.0);
        let mid = c.last() / 2;
        assert!((c.reflected_arclength(mid, mid) - c.length()).abs() < 1e-14);
        let (a, b) = c.reflected_routes(2, 7);
        assert!((a + b - 2.0 * c.length()).abs() < 1e-14);
    }

    #[test]
    fn self_intersection_is_detected() {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(3.0, 0.0),
        ];
        assert!(!is_embedded(&v));
        let v: Vec<Vec2<f64>> = (0..50).map(|i| Vec2::new(i as f64, (i as f64).sin())).collect();
        assert!(is_embedded(&v));
    }

    #[test]
    fn degenerate_edge_is_a_mesh_error() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let v = vec![
            Vec2::new(-1.0, 0.0),
            Vec2::new(-0.5, 0.0),
            Vec2::new(-0.5, 0.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
        ];
        assert!(matches!(DiscreteCurve::new(&d, v), Err(Error::Mesh(_))));
    }

    #[test]
    fn endpoint_off_boundary_is_rejected() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let v: Vec<Vec2<f64>> = (0..6).map(|i| Vec2::new(-0.9 + 0.36 * i as f64, 0.0)).collect();
        assert!(matches!(DiscreteCurve::new(&d, v), Err(Error::Input(_))));
    }

    #[test]
    fn doubled_values_follow_the_sign_rule() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&d, PI, 0.0, 12, |t: f64| 0.2 * (PI * t).sin()).unwrap();
        let dbl = DoubledCurve::new(&c, &d);
        let n = c.last();
        for i in 0..=n {
            for j in 0..=n {
                let (same, _) = dbl.pair(Signed::plus(i), Signed::plus(j)).unwrap();
                assert_eq!(same.ell, c.arclength(i, j));
                assert_eq!(same.d, c.chordlength(i, j));
                let (cross, _) = dbl.pair(Signed::plus(i), Signed::minus(j)).unwrap();
                if i == 0 || j == 0 || i == n || j == n {
                    assert_eq!(cross.d, c.chordlength(i, j));
                    assert!((cross.ell - c.reflected_arclength(i, j)).abs() < 1e-14);
                } else {
                    assert_eq!(cross.ell, c.reflected_arclength(i, j));
                    let r = reflected_distance(&d, c.vertices()[i], c.vertices()[j]).unwrap();
                    assert_eq!(cross.d, r.distance);
                }
                assert!(cross.ell <= dbl.doubled_length() / 2.0 + 1e-15);
            }
        }
    }
}
