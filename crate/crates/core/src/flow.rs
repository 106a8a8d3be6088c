//! Explicit front tracking for free-boundary curve shortening flow.
//!
//! Interior vertices move by `-κ N dt`; each endpoint is then reset to the
//! boundary foot of its neighbour, which keeps the end edge parallel to the
//! boundary normal (orthogonal contact).

use serde::{Deserialize, Serialize};

use crate::chord_arc::{ComparisonFunction, PairScan};
use crate::curve::{DiscreteCurve, DoubledCurve, TOL_ORTH};
use crate::domain::{BoundaryFrame, ConvexDomain};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec2::Vec2;

/// Retries with a halved time step before a run is abandoned.
pub const MAX_RETRIES: usize = 20;
/// Edge-length ratio above which a remesh is triggered.
pub const REMESH_RATIO: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StopConfig<T> {
    /// Stop once the curve is shorter than this.
    pub length_below: Option<T>,
    /// Stop at this time.
    pub time_at: Option<T>,
    /// Stop at the first snapshot where `min 𝒁 < 0`.
    pub min_z_negative: bool,
    pub max_steps: Option<usize>,
}

impl<T> Default for StopConfig<T> {
    fn default() -> Self {
        Self { length_below: None, time_at: None, min_z_negative: false, max_steps: Some(2_000_000) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig<T> {
    /// `dt ≤ dt_safety · h_min²`.
    pub dt_safety: T,
    /// Mesh quality is inspected every this many steps.
    pub remesh_every: usize,
    /// Number of edges the remesher restores; `None` keeps the initial count.
    pub target_edge_count: Option<usize>,
    pub stop: StopConfig<T>,
    pub output_interval: T,
    /// Also snapshot whenever the length falls below this fraction of the
    /// length at the previous snapshot. Resolves the approach to extinction,
    /// where uniform time sampling is too coarse.
    pub output_length_ratio: Option<T>,
    pub tol_orth: T,
}

impl<T: Real> Default for FlowConfig<T> {
    fn default() -> Self {
        Self {
            dt_safety: T::lit(0.2),
            remesh_every: 100,
            target_edge_count: None,
            stop: StopConfig::default(),
            output_interval: T::lit(0.01),
            output_length_ratio: None,
            tol_orth: T::lit(TOL_ORTH),
        }
    }
}

impl<T: Real> FlowConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_safety > T::zero() && self.dt_safety <= T::half()) {
            return Err(Error::Config(format!("flow.dt_safety must lie in (0, 0.5], got {}", self.dt_safety)));
        }
        if let Some(n) = self.target_edge_count {
            if n < 8 {
                return Err(Error::Config(format!("flow.target_edge_count must be at least 8, got {n}")));
            }
        }
        if self.remesh_every == 0 {
            return Err(Error::Config("flow.remesh_every must be positive".into()));
        }
        if !(self.output_interval > T::zero()) {
            return Err(Error::Config("flow.output_interval must be positive".into()));
        }
        if let Some(r) = self.output_length_ratio {
            if !(r > T::zero() && r < T::one()) {
                return Err(Error::Config(format!("flow.output_length_ratio must lie in (0, 1), got {r}")));
            }
        }
        if !(self.tol_orth > T::zero()) {
            return Err(Error::Config("flow.tol_orth must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ChordConverged,
    ExtinctionSuspected,
    BudgetExhausted,
    /// The step could not be completed even after repeated halving.
    SingularitySuspected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics<T> {
    pub length: T,
    /// `∫ κ² ds`.
    pub curvature_l2: T,
    /// `(L(t + dt) - L(t)) / dt` for a trial step from this snapshot.
    pub length_rate: Option<T>,
    /// `K = ∫ |κ| ds`.
    pub total_curvature: T,
    /// `K̃`: boundary curvature still to be traversed by the endpoints.
    pub reflected_total_curvature: T,
    /// `𝑲 = K + K̃`.
    pub completed_total_curvature: T,
    /// Boundary curvature traversed by both endpoints since `t = 0`.
    pub boundary_travel: T,
    pub min_z: Option<T>,
    pub max_curvature_sq: T,
    /// `max κ² · (T_est - t)`.
    pub type_one: Option<T>,
    pub inflection_count: usize,
    pub vertex_count: usize,
    pub endpoint_params: (T, T),
    pub orthogonality: [T; 2],
    pub neumann: [T; 2],
    pub h_max: T,
    pub h_min: T,
    /// A remesh happened since the previous snapshot.
    pub remeshed: bool,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct Snapshot<T> {
    pub t: T,
    pub curve: DiscreteCurve<T>,
    pub diagnostics: Diagnostics<T>,
}

#[derive(Clone, Debug)]
pub struct FlowTrace<T> {
    pub domain: ConvexDomain<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub classification: Classification,
    pub failure: Option<String>,
    pub steps: usize,
    /// Largest relative length increase over a single accepted step.
    pub max_length_increase: T,
    pub initial_length: T,
    pub extinction: Option<ExtinctionEstimate<T>>,
}

impl<T: Real> FlowTrace<T> {
    pub fn times(&self) -> Vec<T> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &Snapshot<T> {
        self.snapshots.last().expect("trace has the initial snapshot")
    }
}

/// Largest admissible time step for `curve`.
pub fn cfl_dt<T: Real>(curve: &DiscreteCurve<T>, dt_safety: T) -> T {
    let h = curve.h_min();
    dt_safety * h * h
}

/// One explicit step. Returns the new curve and the boundary curvature
/// swept by each endpoint.
pub fn step<T: Real>(
    curve: &DiscreteCurve<T>,
    domain: &ConvexDomain<T>,
    dt: T,
    dt_safety: T,
) -> Result<(DiscreteCurve<T>, [T; 2])> {
    let limit = cfl_dt(curve, dt_safety);
    if !(dt > T::zero()) || dt > limit * (T::one() + T::lit(1e-12)) {
        return Err(Error::Precondition(format!("dt = {dt} violates the stability limit {limit}")));
    }
    let n = curve.last();
    let v = curve.vertices();
    let kappa = curve.curvature();
    let normals = curve.normals();
    let mut next = Vec::with_capacity(n + 1);
    next.push(v[0]);
    for i in 1..n {
        next.push(v[i] - normals[i] * (kappa[i] * dt));
    }
    next.push(v[n]);
    let ends = curve.endpoint_frames();
    let (left, _) = domain.project_near(next[1], ends[0].s)?;
    let (right, _) = domain.project_near(next[n - 1], ends[1].s)?;
    next[0] = left.point;
    next[n] = right.point;
    let out = finish(domain, next, [left, right], curve)?;
    let travel = [domain.turning_between(&ends[0], &left), domain.turning_between(&ends[1], &right)];
    Ok((out, travel))
}

fn finish<T: Real>(
    domain: &ConvexDomain<T>,
    vertices: Vec<Vec2<T>>,
    ends: [BoundaryFrame<T>; 2],
    like: &DiscreteCurve<T>,
) -> Result<DiscreteCurve<T>> {
    let n = vertices.len() - 1;
    for (i, p) in vertices.iter().enumerate().take(n).skip(1) {
        if !p.is_finite() || !domain.contains_interior(*p) {
            return Err(Error::Mesh(format!("vertex {i} left the domain")));
        }
    }
    let out = DiscreteCurve::assemble(vertices, ends, like.orientation())?;
    if !out.is_embedded() {
        return Err(Error::Mesh("curve is no longer embedded".into()));
    }
    Ok(out)
}

/// Resamples the polyline at arclengths `(k - 1/2) L / m`, `k = 1..=m`, and
/// closes the ends with boundary feet. Length does not increase.
pub fn remesh<T: Real>(curve: &DiscreteCurve<T>, domain: &ConvexDomain<T>, edges: usize) -> Result<DiscreteCurve<T>> {
    let m = edges - 1;
    let v = curve.vertices();
    let cum = curve.cumulative_arclength();
    let l = curve.length();
    let mut interior = Vec::with_capacity(m);
    let mut seg = 0;
    for k in 1..=m {
        let s = (T::from_usize_lossy(k) - T::half()) * l / T::from_usize_lossy(m);
        while seg + 1 < cum.len() - 1 && cum[seg + 1] < s {
            seg += 1;
        }
        let t = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        interior.push(v[seg].lerp(v[seg + 1], t));
    }
    let ends = curve.endpoint_frames();
    let (left, _) = domain.project_near(interior[0], ends[0].s)?;
    let (right, _) = domain.project_near(interior[m - 1], ends[1].s)?;
    let mut vertices = Vec::with_capacity(m + 2);
    vertices.push(left.point);
    vertices.extend(interior);
    vertices.push(right.point);
    finish(domain, vertices, [left, right], curve)
}

fn needs_remesh<T: Real>(curve: &DiscreteCurve<T>, edges: usize) -> bool {
    let e = curve.edge_lengths();
    let n = e.len();
    if n != edges {
        return true;
    }
    let inner = &e[1..n - 1];
    let (lo, hi) = inner.iter().fold((T::infinity(), T::zero()), |(a, b), &x| (a.min(x), b.max(x)));
    hi > lo * T::lit(REMESH_RATIO)
}

fn diagnose<T: Real>(
    curve: &DiscreteCurve<T>,
    domain: &ConvexDomain<T>,
    phi: Option<&ComparisonFunction<T>>,
    dt: T,
    dt_safety: T,
    travel: T,
    remeshed: bool,
    steps: usize,
) -> Result<Diagnostics<T>> {
    let tc = curve.total_curvature();
    let min_z = match phi {
        Some(p) => PairScan::new(&DoubledCurve::new(curve, domain))?.min_z(p).map(|(z, _)| z),
        None => None,
    };
    let trial = cfl_dt(curve, dt_safety).min(dt);
    let length_rate = step(curve, domain, trial, dt_safety).ok().map(|(c, _)| (c.length() - curve.length()) / trial);
    let max_k = curve.max_abs_curvature();
    Ok(Diagnostics {
        length: curve.length(),
        curvature_l2: curve.curvature_l2(),
        length_rate,
        total_curvature: tc.total,
        reflected_total_curvature: T::zero(),
        completed_total_curvature: tc.total,
        boundary_travel: travel,
        min_z,
        max_curvature_sq: max_k * max_k,
        type_one: None,
        inflection_count: tc.inflection_count,
        vertex_count: tc.vertex_count,
        endpoint_params: curve.endpoint_params(),
        orthogonality: curve.orthogonality_residuals(),
        neumann: curve.neumann_residuals(),
        h_max: curve.h_max(),
        h_min: curve.h_min(),
        remeshed,
        steps,
    })
}

fn converged<T: Real>(curve: &DiscreteCurve<T>, tol_orth: T) -> bool {
    let [a, b] = curve.orthogonality_residuals();
    curve.max_abs_curvature() * curve.length() < T::lit(1e-4) && a <= tol_orth && b <= tol_orth
}

/// Integrates from `initial` until a stop condition in `config` fires.
///
/// Step failures are retried with a halved time step; after
/// [`MAX_RETRIES`] failures the run ends as `SingularitySuspected` and the
/// trace up to that point is returned.
pub fn run<T: Real>(
    initial: &DiscreteCurve<T>,
    domain: &ConvexDomain<T>,
    config: &FlowConfig<T>,
    phi: Option<&ComparisonFunction<T>>,
) -> Result<FlowTrace<T>> {
    config.validate()?;
    let edges = config.target_edge_count.unwrap_or(initial.edge_lengths().len());
    let l0 = initial.length();
    let mut curve = initial.clone();
    let mut t = T::zero();
    let mut steps = 0usize;
    let mut travel = T::zero();
    let mut remeshed = false;
    let mut max_increase = T::zero();
    let first = diagnose(&curve, domain, phi, cfl_dt(&curve, config.dt_safety), config.dt_safety, travel, false, 0)?;
    let mut snapshots = vec![Snapshot { t, curve: curve.clone(), diagnostics: first }];
    let mut next_output = config.output_interval;
    let mut failure = None;
    let classification = loop {
        let last = &snapshots.last().unwrap().diagnostics;
        if config.stop.min_z_negative && last.min_z.is_some_and(|z| z < T::zero()) {
            break Classification::BudgetExhausted;
        }
        if converged(&curve, config.tol_orth) {
            break Classification::ChordConverged;
        }
        if config.stop.length_below.is_some_and(|lb| curve.length() < lb) || curve.h_min() < T::lit(1e-6) * l0 {
            break Classification::ExtinctionSuspected;
        }
        if config.stop.max_steps.is_some_and(|m| steps >= m) {
            break Classification::BudgetExhausted;
        }
        if config.stop.time_at.is_some_and(|ta| t >= ta) {
            break Classification::BudgetExhausted;
        }
        let mut dt = cfl_dt(&curve, config.dt_safety);
        let mut target = next_output;
        if let Some(ta) = config.stop.time_at {
            target = target.min(ta);
        }
        let landing = t + dt >= target;
        if landing {
            dt = target - t;
        }
        let mut attempt = 0;
        let (next, swept, used_dt) = loop {
            match step(&curve, domain, dt, config.dt_safety) {
                Ok((c, s)) => break (Some(c), s, dt),
                Err(e) => {
                    attempt += 1;
                    if attempt > MAX_RETRIES {
                        failure = Some(e.to_string());
                        break (None, [T::zero(); 2], dt);
                    }
                    dt = dt * T::half();
                }
            }
        };
        let Some(next) = next else {
            break Classification::SingularitySuspected;
        };
        let increase = (next.length() - curve.length()) / curve.length();
        max_increase = max_increase.max(increase);
        curve = next;
        travel = travel + swept[0] + swept[1];
        steps += 1;
        t = if landing && used_dt == target - t { target } else { t + used_dt };
        if steps.is_multiple_of(config.remesh_every) && needs_remesh(&curve, edges) {
            match remesh(&curve, domain, edges) {
                Ok(c) => {
                    curve = c;
                    remeshed = true;
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break Classification::SingularitySuspected;
                }
            }
        }
        let shrunk = config
            .output_length_ratio
            .is_some_and(|r| curve.length() < r * snapshots.last().unwrap().diagnostics.length);
        if t >= next_output || shrunk {
            let diag = diagnose(&curve, domain, phi, cfl_dt(&curve, config.dt_safety), config.dt_safety, travel, remeshed, steps)?;
            snapshots.push(Snapshot { t, curve: curve.clone(), diagnostics: diag });
            remeshed = false;
            while next_output <= t {
                next_output = next_output + config.output_interval;
            }
        }
    };
    if snapshots.last().unwrap().t < t {
        let diag = diagnose(&curve, domain, phi, cfl_dt(&curve, config.dt_safety), config.dt_safety, travel, remeshed, steps)?;
        snapshots.push(Snapshot { t, curve: curve.clone(), diagnostics: diag });
    }
    let total_travel = travel;
    for s in &mut snapshots {
        let d = &mut s.diagnostics;
        d.reflected_total_curvature = total_travel - d.boundary_travel;
        d.completed_total_curvature = d.total_curvature + d.reflected_total_curvature;
    }
    let mut trace = FlowTrace {
        domain: domain.clone(),
        snapshots,
        classification,
        failure,
        steps,
        max_length_increase: max_increase,
        initial_length: l0,
        extinction: None,
    };
    if classification == Classification::ExtinctionSuspected {
        if let Ok(est) = extinction_estimate(&trace) {
            trace.extinction = Some(est);
            for s in &mut trace.snapshots {
                if s.t < est.time {
                    s.diagnostics.type_one = Some(s.diagnostics.max_curvature_sq * (est.time - s.t));
                }
            }
        }
    }
    Ok(trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtinctionEstimate<T> {
    pub time: T,
    pub point: Vec2<T>,
    /// Standard error of `time` from the fit residuals.
    pub time_std_err: T,
}

/// Fits `L² = a + b t` over the final 20% of snapshots; `T = -a/b`. The
/// extinction point is the boundary foot of the last endpoint midpoint.
pub fn extinction_estimate<T: Real>(trace: &FlowTrace<T>) -> Result<ExtinctionEstimate<T>> {
    if trace.classification != Classification::ExtinctionSuspected {
        return Err(Error::Precondition(format!(
            "extinction estimate needs an extinction run, got {:?}",
            trace.classification
        )));
    }
    let n = trace.snapshots.len();
    let window = n.div_ceil(5);
    if window < 10 {
        return Err(Error::Estimation(format!("only {window} snapshots in the fit window (need 10)")));
    }
    let pts: Vec<(T, T)> = trace.snapshots[n - window..]
        .iter()
        .map(|s| (s.t, s.diagnostics.length * s.diagnostics.length))
        .collect();
    let m = T::from_usize_lossy(pts.len());
    let mt = pts.iter().map(|p| p.0).sum::<T>() / m;
    let my = pts.iter().map(|p| p.1).sum::<T>() / m;
    let sxy: T = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: T = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let b = sxy / sxx;
    if !(b < T::zero()) {
        return Err(Error::Estimation("squared length is not decreasing over the fit window".into()));
    }
    // T = mt - my/b, with my and b uncorrelated
    let time = mt - my / b;
    let rss: T = pts.iter().map(|p| (p.1 - my - b * (p.0 - mt)).powi(2)).sum();
    let s2 = rss / (m - T::two());
    let var = s2 / (m * b * b) + my * my * s2 / (sxx * b.powi(4));
    let c = &trace.last().curve;
    let v = c.vertices();
    let mid = (v[0] + v[c.last()]) * T::half();
    let (z, _) = trace.domain.project(mid)?;
    Ok(ExtinctionEstimate { time, point: z.point, time_std_err: var.sqrt() })
}

/// Last snapshot before `T_est` whose distance to it is at least twenty
/// standard errors of the estimate.
pub fn last_reliable<'a, T: Real>(trace: &'a FlowTrace<T>, est: &ExtinctionEstimate<T>) -> Option<&'a Snapshot<T>> {
    let margin = T::lit(20.0) * est.time_std_err;
    trace.snapshots.iter().rev().find(|s| est.time - s.t > margin)
}

/// A curve mapped by `p ↦ (p - z)/√(2(T - t))`, with its Hausdorff distance to
/// the unit half-circle in `{p : ⟨p, N^S(z)⟩ ≤ 0}`.
#[derive(Clone, Debug, Serialize)]
pub struct Rescaled<T> {
    pub vertices: Vec<Vec2<T>>,
    pub hausdorff: T,
}

pub fn rescale<T: Real>(
    curve: &DiscreteCurve<T>,
    domain: &ConvexDomain<T>,
    z: Vec2<T>,
    t_ext: T,
    t: T,
) -> Result<Rescaled<T>> {
    if !(t < t_ext) {
        return Err(Error::Precondition(format!("rescaling needs t < T, got t = {t}, T = {t_ext}")));
    }
    let scale = T::one() / (T::two() * (t_ext - t)).sqrt();
    let vertices: Vec<Vec2<T>> = curve.vertices().iter().map(|&p| (p - z) * scale).collect();
    let (frame, _) = domain.project(z)?;
    let hausdorff = hausdorff_to_half_circle(&vertices, frame.outward_normal);
    Ok(Rescaled { vertices, hausdorff })
}

/// Hausdorff distance between a polyline and the unit half-circle facing `-normal`.
pub fn hausdorff_to_half_circle<T: Real>(polyline: &[Vec2<T>], normal: Vec2<T>) -> T {
    let inward = -normal;
    let side = normal.rot90();
    let ends = [side, -side];
    let to_arc = |p: Vec2<T>| {
        let r = p.norm();
        if p.dot(inward) >= T::zero() && r > T::zero() {
            (r - T::one()).abs()
        } else {
            ends.iter().map(|&e| e.dist(p)).fold(T::infinity(), T::min)
        }
    };
    let forward = polyline.iter().map(|&p| to_arc(p)).fold(T::zero(), T::max);
    let samples = 2000;
    let backward = (0..=samples)
        .map(|k| {
            let a = T::PI() * (T::from_usize_lossy(k) / T::from_usize_lossy(samples) - T::half());
            let q = inward * a.cos() + side * a.sin();
            point_polyline_distance(q, polyline)
        })
        .fold(T::zero(), T::max);
    forward.max(backward)
}

pub(crate) fn point_segment_distance<T: Real>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sq();
    let t = if len2 > T::zero() { ((p - a).dot(ab) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
    p.dist(a + ab * t)
}

pub(crate) fn point_polyline_distance<T: Real>(p: Vec2<T>, polyline: &[Vec2<T>]) -> T {
    polyline
        .windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(T::infinity(), T::min)
}

/// Symmetric Hausdorff distance between two polylines (vertex-to-polyline both ways).
pub fn hausdorff_polylines<T: Real>(a: &[Vec2<T>], b: &[Vec2<T>]) -> T {
    let one = a.iter().map(|&p| point_polyline_distance(p, b)).fold(T::zero(), T::max);
    let two = b.iter().map(|&p| point_polyline_distance(p, a)).fold(T::zero(), T::max);
    one.max(two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial;
    use std::f64::consts::PI;

    #[test]
    fn stationary_diameter_does_not_move() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let c = initial::chord(&d, PI, 0.0, 50).unwrap();
        let dt = cfl_dt(&c, 0.2);
        let (next, _) = step(&c, &d, dt, 0.2).unwrap();
        for (a, b) in c.vertices().iter().zip(next.vertices()) {
            assert!(a.dist(*b) < 1e-12 * c.length());
        }
    }

    #[test]
    fn dt_above_stability_limit_is_rejected() {
        let hp = ConvexDomain::half_plane();
        let c = initial::semicircle(&hp, 0.0, 1.0, 100).unwrap();
        let dt = cfl_dt(&c, 0.2) * 2.0;
        assert!(matches!(step(&c, &hp, dt, 0.2), Err(Error::Precondition(_))));
    }

    #[test]
    fn semicircle_radius_after_short_time() {
        let hp = ConvexDomain::<f64>::half_plane();
        let c = initial::semicircle(&hp, 0.0, 1.0, 400).unwrap();
        let config = FlowConfig {
            output_interval: 1e-4,
            stop: StopConfig { time_at: Some(1e-4), ..StopConfig::default() },
            ..FlowConfig::default()
        };
        let trace = run(&c, &hp, &config, None).unwrap();
        let last = trace.last();
        assert!((last.t - 1e-4).abs() < 1e-15);
        let v = last.curve.vertices();
        let r = v[1..v.len() - 1].iter().map(|p| p.norm()).sum::<f64>() / (v.len() - 2) as f64;
        assert!((r - (1.0f64 - 2e-4).sqrt()).abs() < 1e-6, "radius {r}");
    }

    #[test]
    fn zero_step_budget_keeps_only_initial_snapshot() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&d, PI, 0.0, 40, |t: f64| 0.05 * (PI * t).sin()).unwrap();
        let config = FlowConfig {
            stop: StopConfig { max_steps: Some(0), ..StopConfig::default() },
            ..FlowConfig::default()
        };
        let trace = run(&c, &d, &config, None).unwrap();
        assert_eq!(trace.snapshots.len(), 1);
        assert_eq!(trace.classification, Classification::BudgetExhausted);
    }

    #[test]
    fn remesh_restores_count_without_growing_length() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let c = initial::perturbed_chord(&d, PI, 0.0, 30, |t: f64| 0.1 * (PI * t).sin()).unwrap();
        let r = remesh(&c, &d, 50).unwrap();
        assert_eq!(r.edge_lengths().len(), 50);
        assert!(r.length() <= c.length());
    }

    #[test]
    fn exact_half_circle_has_zero_distance() {
        let pts: Vec<Vec2<f64>> = (0..=400)
            .map(|k| Vec2::polar(PI * k as f64 / 400.0))
            .collect();
        let h = hausdorff_to_half_circle(&pts, Vec2::new(0.0, -1.0));
        assert!(h < 1e-4, "{h}");
        let shifted: Vec<Vec2<f64>> = pts.iter().map(|&p| p * 1.1).collect();
        assert!((hausdorff_to_half_circle(&shifted, Vec2::new(0.0, -1.0)) - 0.1).abs() < 1e-9);
    }
}
