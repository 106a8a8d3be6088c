//! Initial curves. Every constructor places `m` interior vertices and puts
//! the endpoints at the boundary feet of the first and last interior vertex.

use crate::curve::DiscreteCurve;
use crate::domain::ConvexDomain;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Completes interior vertices with their boundary feet as endpoints.
pub fn close_ends<T: Real>(domain: &ConvexDomain<T>, interior: Vec<Vec2<T>>) -> Result<DiscreteCurve<T>> {
    if interior.len() < 3 {
        return Err(Error::Input(format!("need at least 3 interior vertices, got {}", interior.len())));
    }
    let (left, _) = domain.project(interior[0])?;
    let (right, _) = domain.project(interior[interior.len() - 1])?;
    let mut vertices = Vec::with_capacity(interior.len() + 2);
    vertices.push(left.point);
    vertices.extend(interior);
    vertices.push(right.point);
    DiscreteCurve::new(domain, vertices)
}

/// Cell-centred sample fractions `(k - 1/2)/m`, `k = 1..=m`.
fn fractions<T: Real>(m: usize) -> impl Iterator<Item = T> {
    (1..=m).map(move |k| (T::from_usize_lossy(k) - T::half()) / T::from_usize_lossy(m))
}

/// Half-circle of `radius` centred at `(center_x, 0)` in the half-plane,
/// traversed counterclockwise so that its curvature is positive. The discrete
/// curve is half of the regular `2m`-gon inscribed in the circle.
pub fn semicircle<T: Real>(domain: &ConvexDomain<T>, center_x: T, radius: T, m: usize) -> Result<DiscreteCurve<T>> {
    if domain.is_bounded() {
        return Err(Error::Input("semicircle fixture needs the half-plane".into()));
    }
    if !(radius > T::zero()) {
        return Err(Error::Input(format!("radius must be positive, got {radius}")));
    }
    let c = Vec2::new(center_x, T::zero());
    let interior = fractions::<T>(m).map(|f| c + Vec2::polar(f * T::PI()) * radius).collect();
    close_ends(domain, interior)
}

/// Straight segment from `ζ(s_left)` to `ζ(s_right)`.
pub fn chord<T: Real>(domain: &ConvexDomain<T>, s_left: T, s_right: T, m: usize) -> Result<DiscreteCurve<T>> {
    perturbed_chord(domain, s_left, s_right, m, |_| T::zero())
}

/// Segment from `ζ(s_left)` to `ζ(s_right)` displaced along its left normal
/// by `offset(t)`, `t ∈ [0, 1]` the fraction along the segment.
pub fn perturbed_chord<T: Real>(
    domain: &ConvexDomain<T>,
    s_left: T,
    s_right: T,
    m: usize,
    offset: impl Fn(T) -> T,
) -> Result<DiscreteCurve<T>> {
    let a = domain.boundary_frame(s_left)?.point;
    let b = domain.boundary_frame(s_right)?.point;
    let dir = b - a;
    if !(dir.norm() > T::zero()) {
        return Err(Error::Input("chord endpoints coincide".into()));
    }
    let normal = dir.normalized().rot90();
    let interior = fractions::<T>(m).map(|t| a + dir * t + normal * offset(t)).collect();
    close_ends(domain, interior)
}

/// Small arc cutting off the boundary near `ζ(center)`:
/// `ζ(center + w cos u) - w sin u N^S(center + w cos u)` for `u ∈ (0, π)`.
/// It meets the boundary orthogonally at both ends.
pub fn boundary_arc<T: Real>(domain: &ConvexDomain<T>, center: T, half_width: T, m: usize) -> Result<DiscreteCurve<T>> {
    if !(half_width > T::zero()) {
        return Err(Error::Input(format!("half width must be positive, got {half_width}")));
    }
    if domain.is_bounded() && half_width + half_width >= domain.boundary_length() / T::two() {
        return Err(Error::Input("boundary arc covers too much of the boundary".into()));
    }
    let interior = fractions::<T>(m)
        .map(|f| {
            let u = f * T::PI();
            let frame = domain.boundary_frame(center + half_width * u.cos())?;
            Ok(frame.point - frame.outward_normal * (half_width * u.sin()))
        })
        .collect::<Result<Vec<_>>>()?;
    close_ends(domain, interior)
}
