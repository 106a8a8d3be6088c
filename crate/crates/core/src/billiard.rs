//! Reflected (single-bounce) distance between interior points.

use serde::Serialize;

use crate::domain::{alpha_angle, theta_angle, BoundaryFrame, ConvexDomain};
use crate::error::{Error, Result};
use crate::optimize::{minimize_bracketed, Jet};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Relative gap below which a second local minimum counts as a tie.
pub const MULTIPLICITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReflectedDistance<T> {
    /// `d̃ = d_x + d_y`.
    pub distance: T,
    pub bounce: BoundaryFrame<T>,
    /// `θ = θ_x`; Snell's law gives `θ_y = -θ`.
    pub theta: T,
    pub theta_y: T,
    pub d_x: T,
    pub d_y: T,
    /// Another boundary point realizes the same distance.
    pub multiple: bool,
}

impl<T: Real> ReflectedDistance<T> {
    pub fn snell_residual(&self) -> T {
        (self.theta.sin() + self.theta_y.sin()).abs()
    }
}

/// `d̃(x, y) = min_{z ∈ ∂Ω} |x - z| + |y - z|`.
///
/// The result is symmetric bit for bit: the pair is put into a canonical
/// order before solving and the per-point outputs are swapped back.
pub fn reflected_distance<T: Real>(
    domain: &ConvexDomain<T>,
    x: Vec2<T>,
    y: Vec2<T>,
) -> Result<ReflectedDistance<T>> {
    let floor = T::lit(1e-12) * domain.scale();
    for (name, p) in [("x", x), ("y", y)] {
        if !p.is_finite() {
            return Err(Error::Input(format!("{name} must be finite")));
        }
        if !domain.deeper_than(p, floor) {
            return Err(Error::Precondition(format!(
                "{name} = ({}, {}) is not in the interior (boundary distance {})",
                p.x,
                p.y,
                domain.interior_distance(p)
            )));
        }
    }
    let swapped = (y.x, y.y) < (x.x, x.y);
    let (a, b) = if swapped { (y, x) } else { (x, y) };
    let (frame, multiple) = if domain.is_bounded() {
        bounce_bounded(domain, a, b)
    } else {
        (bounce_half_plane(domain, a, b), false)
    };
    let d_a = a.dist(frame.point);
    let d_b = b.dist(frame.point);
    let th_a = theta_angle(a, &frame)?;
    let th_b = theta_angle(b, &frame)?;
    let distance = if domain.is_bounded() {
        d_a + d_b
    } else {
        // mirror image of b across y = 0
        (b.x - a.x).hypot(a.y + b.y)
    };
    let (d_x, d_y, theta, theta_y) = if swapped { (d_b, d_a, th_b, th_a) } else { (d_a, d_b, th_a, th_b) };
    Ok(ReflectedDistance { distance, bounce: frame, theta, theta_y, d_x, d_y, multiple })
}

fn bounce_half_plane<T: Real>(domain: &ConvexDomain<T>, a: Vec2<T>, b: Vec2<T>) -> BoundaryFrame<T> {
    let t = a.y / (a.y + b.y);
    domain.frame_u(a.x + t * (b.x - a.x))
}

fn path_jet<T: Real>(domain: &ConvexDomain<T>, a: Vec2<T>, b: Vec2<T>, u: T) -> Jet<T> {
    let (p, d1, d2) = domain.eval_u(u);
    let speed_sq = d1.norm_sq();
    let mut jet = (T::zero(), T::zero(), T::zero());
    for q in [a, b] {
        let r = q - p;
        let d = r.norm();
        let w = r / d;
        let wt = w.dot(d1);
        jet.0 = jet.0 + d;
        jet.1 = jet.1 - wt;
        jet.2 = jet.2 + (speed_sq - wt * wt) / d - w.dot(d2);
    }
    jet
}

fn bounce_bounded<T: Real>(domain: &ConvexDomain<T>, a: Vec2<T>, b: Vec2<T>) -> (BoundaryFrame<T>, bool) {
    let samples: Vec<(T, Vec2<T>)> = domain.coarse_samples().collect();
    let period = domain.period().expect("bounded domain has a periodic parameter");
    let m = samples.len();
    let vals: Vec<T> = samples.iter().map(|&(_, p)| a.dist(p) + b.dist(p)).collect();
    let mut minima: Vec<(T, T)> = Vec::new();
    for i in 0..m {
        let (prev, next) = (vals[(i + m - 1) % m], vals[(i + 1) % m]);
        if vals[i] > prev || vals[i] > next {
            continue;
        }
        let u = samples[i].0;
        let mut lo = samples[(i + m - 1) % m].0;
        if lo > u {
            lo = lo - period;
        }
        let mut hi = samples[(i + 1) % m].0;
        if hi < u {
            hi = hi + period;
        }
        let star = minimize_bracketed(|v| path_jet(domain, a, b, v), lo, hi, 40);
        minima.push((path_jet(domain, a, b, star).0, star));
    }
    let (best, best_u) = minima
        .iter()
        .copied()
        .fold((T::infinity(), T::zero()), |acc, v| if v.0 < acc.0 { v } else { acc });
    let tie = T::lit(MULTIPLICITY_TOL) * best;
    let sep = period / T::from_usize_lossy(m);
    let multiple = minima.iter().any(|&(v, u)| {
        let gap = crate::scalar::wrap_angle((u - best_u) / period * (T::PI() + T::PI())).abs() / (T::PI() + T::PI())
            * period;
        v - best <= tie && gap > sep
    });
    (domain.frame_u(best_u), multiple)
}

/// First and second variations of `d = |x - y|` along unit directions `X` (at `x`) and `Y` (at `y`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceVariations<T> {
    pub d: T,
    pub alpha_x: T,
    pub alpha_y: T,
    /// `∂ˣ_X d = sin α_x`.
    pub dx: T,
    /// `∂ʸ_Y d = -sin α_y`.
    pub dy: T,
    /// `∂ˣ_X∂ˣ_X d = cos² α_x / d`.
    pub dxx: T,
    /// `∂ʸ_Y∂ʸ_Y d = cos² α_y / d`.
    pub dyy: T,
    /// `∂ˣ_X∂ʸ_Y d = -cos α_x cos α_y / d`.
    pub dxy: T,
}

pub fn distance_variations<T: Real>(
    x: Vec2<T>,
    y: Vec2<T>,
    xdir: Vec2<T>,
    ydir: Vec2<T>,
) -> Result<DistanceVariations<T>> {
    if x == y {
        return Err(Error::Degenerate("distance variations on the diagonal (x = y)"));
    }
    let d = x.dist(y);
    let alpha_x = alpha_angle(x, y, xdir)?;
    let alpha_y = alpha_angle(x, y, ydir)?;
    let (sx, cx) = alpha_x.sin_cos();
    let (sy, cy) = alpha_y.sin_cos();
    Ok(DistanceVariations {
        d,
        alpha_x,
        alpha_y,
        dx: sx,
        dy: -sy,
        dxx: cx * cx / d,
        dyy: cy * cy / d,
        dxy: -cx * cy / d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn half_plane_mirror_example() {
        let hp = ConvexDomain::<f64>::half_plane();
        let r = reflected_distance(&hp, Vec2::new(0.0, 1.0), Vec2::new(2.0, 1.0)).unwrap();
        assert_eq!(r.distance, 8.0_f64.sqrt());
        assert_eq!(r.bounce.point, Vec2::new(1.0, 0.0));
        assert!(r.snell_residual() < 1e-15);
    }

    #[test]
    fn doubled_radius() {
        let d = ConvexDomain::<f64>::disk(1.0).unwrap();
        let p = Vec2::new(0.5, 0.0);
        let r = reflected_distance(&d, p, p).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-14);
        assert!(r.bounce.point.dist(Vec2::new(1.0, 0.0)) < 1e-7);
    }

    #[test]
    fn symmetric_disk_pair_bounces_at_diagonal() {
        let d = ConvexDomain::<f64>::disk(1.0).unwrap();
        let r = reflected_distance(&d, Vec2::new(0.5, 0.0), Vec2::new(0.0, 0.5)).unwrap();
        let z = Vec2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        let expected = 2.0 * Vec2::new(0.5, 0.0).dist(z);
        assert!((r.distance - expected).abs() < 1e-14);
        assert!((expected - 1.473_625_758_2).abs() < 1e-9);
        assert!(r.bounce.point.dist(z) < 1e-7);
    }

    #[test]
    fn boundary_point_violates_precondition() {
        let d = ConvexDomain::<f64>::disk(1.0).unwrap();
        let e = reflected_distance(&d, Vec2::new(1.0, 0.0), Vec2::new(0.0, 0.5));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn variations_examples() {
        let v = distance_variations(Vec2::new(1.0, 0.0), Vec2::<f64>::zero(), Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0))
            .unwrap();
        assert!((v.dx - 1.0).abs() < 1e-15);
        let v = distance_variations(Vec2::new(1.0, 0.0), Vec2::<f64>::zero(), Vec2::new(0.0, 1.0), Vec2::new(0.0, 1.0))
            .unwrap();
        assert!(v.dx.abs() < 1e-15);
        assert!((v.dxx - 1.0).abs() < 1e-15);
        assert!(matches!(
            distance_variations(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.0, 1.0)),
            Err(Error::Degenerate(_))
        ));
    }
}
