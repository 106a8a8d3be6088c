//! Extended chord-arc profile, the two-point function `𝒁 = 𝒅 - 𝑳 φ(𝒍/𝑳)` and
//! the first/second derivative conditions at its zero minima.

use rayon::prelude::*;
use serde::Serialize;

use crate::billiard::ReflectedDistance;
use crate::curve::{Branch, DiscreteCurve, DoubledCurve, Orientation, Signed};
use crate::domain::{alpha_angle, beta_angle, AngleData, ConvexDomain};
use crate::error::{Error, Result};
use crate::scalar::{angle_gap, Real};
use crate::spline::UniformSpline;

/// Number of samples used for the admissibility checks on `φ`.
pub const ADMISSIBILITY_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiKind<T> {
    /// `c (sin((π - ε) ζ + ε/2) - sin(ε/2))`.
    Barrier { c: T, epsilon: T },
    /// `c e^{-4π²τ} sin(π ζ)`.
    ScaledSine { c: T, tau: T },
    /// Values on a uniform grid over `[0, 1]`, interpolated by a natural cubic spline.
    Custom { values: Vec<T> },
}

/// An admissible comparison function: symmetric about `1/2`, `|φ'| < 1`, strictly concave.
#[derive(Clone, Debug)]
pub struct ComparisonFunction<T> {
    kind: PhiKind<T>,
    spline: Option<UniformSpline<T>>,
}

impl<T: Real> ComparisonFunction<T> {
    pub fn new(kind: PhiKind<T>) -> Result<Self> {
        let spline = match &kind {
            PhiKind::Custom { values } => {
                if values.len() < 5 || values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Inadmissible("custom φ needs at least 5 finite values".into()));
                }
                Some(UniformSpline::new(values.clone()))
            }
            PhiKind::Barrier { c, epsilon } => {
                if !(c.is_finite() && epsilon.is_finite()) {
                    return Err(Error::Inadmissible("barrier parameters must be finite".into()));
                }
                None
            }
            PhiKind::ScaledSine { c, tau } => {
                if !(c.is_finite() && tau.is_finite()) {
                    return Err(Error::Inadmissible("scaled sine parameters must be finite".into()));
                }
                None
            }
        };
        let phi = Self { kind, spline };
        phi.check_admissible()?;
        Ok(phi)
    }

    pub fn barrier(c: T, epsilon: T) -> Result<Self> {
        Self::new(PhiKind::Barrier { c, epsilon })
    }

    pub fn scaled_sine(c: T, tau: T) -> Result<Self> {
        Self::new(PhiKind::ScaledSine { c, tau })
    }

    pub fn custom(values: Vec<T>) -> Result<Self> {
        Self::new(PhiKind::Custom { values })
    }

    pub fn kind(&self) -> &PhiKind<T> {
        &self.kind
    }

    /// `(φ, φ', φ'')` at `ζ`.
    pub fn jet(&self, zeta: T) -> (T, T, T) {
        match &self.kind {
            PhiKind::Barrier { c, epsilon } => {
                let w = T::PI() - *epsilon;
                let half = *epsilon * T::half();
                let (s, co) = (w * zeta + half).sin_cos();
                (*c * (s - half.sin()), *c * w * co, -*c * w * w * s)
            }
            PhiKind::ScaledSine { c, tau } => {
                let pi = T::PI();
                let amp = *c * (-T::lit(4.0) * pi * pi * *tau).exp();
                let (s, co) = (pi * zeta).sin_cos();
                (amp * s, amp * pi * co, -amp * pi * pi * s)
            }
            PhiKind::Custom { .. } => self.spline.as_ref().unwrap().eval(zeta),
        }
    }

    pub fn value(&self, zeta: T) -> T {
        self.jet(zeta).0
    }

    /// Samples properties (i)-(iii) and the consequences `φ' > 0`,
    /// `φ - ζ φ' > 0` on `[0, 1/2)`.
    pub fn check_admissible(&self) -> Result<()> {
        let n = ADMISSIBILITY_SAMPLES;
        let scale = (0..=n)
            .map(|k| self.value(T::from_usize_lossy(k) / T::from_usize_lossy(n)).abs())
            .fold(T::zero(), T::max);
        let sym_tol = T::lit(1e-9) * scale.max(T::min_positive_value());
        for k in 0..=n {
            let z = T::from_usize_lossy(k) / T::from_usize_lossy(n);
            let (v, d1, d2) = self.jet(z);
            let mirror = self.value(T::one() - z);
            if (mirror - v).abs() > sym_tol {
                return Err(Error::Inadmissible(format!("φ is not symmetric at ζ = {z}")));
            }
            if !(d1.abs() < T::one()) {
                return Err(Error::Inadmissible(format!("|φ'({z})| = {} is not below 1", d1.abs())));
            }
            let interior = k > 0 && k < n;
            if (interior && !(d2 < T::zero())) || d2 > T::zero() {
                return Err(Error::Inadmissible(format!("φ is not strictly concave at ζ = {z}")));
            }
            if k + k < n {
                if !(d1 > T::zero()) {
                    return Err(Error::Inadmissible(format!("φ'({z}) is not positive")));
                }
                let gap = v - z * d1;
                if (k > 0 && !(gap > T::zero())) || gap < -sym_tol {
                    return Err(Error::Inadmissible(format!("φ - ζφ' is not positive at ζ = {z}")));
                }
            }
        }
        Ok(())
    }

    /// Same shape with the amplitude `c` replaced (custom tables are rescaled).
    pub fn with_amplitude(&self, c: T) -> Result<Self> {
        match &self.kind {
            PhiKind::Barrier { epsilon, .. } => Self::barrier(c, *epsilon),
            PhiKind::ScaledSine { tau, .. } => Self::scaled_sine(c, *tau),
            PhiKind::Custom { values } => {
                let peak = values.iter().copied().fold(T::zero(), T::max);
                Self::custom(values.iter().map(|&v| v * c / peak).collect())
            }
        }
    }
}

/// One pair of the formal double with its completed arclength and chordlength.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairRecord<T> {
    pub x: Signed,
    pub y: Signed,
    pub ell: T,
    pub d: T,
    pub branch: Branch,
}

/// All off-diagonal pairs of the double, each unordered pair listed once.
///
/// Same-sheet pairs `i < j` are listed for one sheet only (the other sheet
/// repeats them); cross-sheet pairs are listed for interior `i ≤ j`, since a
/// cross pair with an endpoint coincides with a same-sheet pair.
#[derive(Clone, Debug)]
pub struct PairScan<T> {
    pub length: T,
    pub doubled_length: T,
    pub records: Vec<PairRecord<T>>,
}

impl<T: Real> PairScan<T> {
    pub fn new(doubled: &DoubledCurve<'_, T>) -> Result<Self> {
        let base = doubled.base();
        let n = base.last();
        let rows: Vec<Result<Vec<PairRecord<T>>>> = (0..=n)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::with_capacity(2 * (n - i) + 1);
                for j in i + 1..=n {
                    row.push(PairRecord {
                        x: Signed::plus(i),
                        y: Signed::plus(j),
                        ell: base.arclength(i, j),
                        d: base.chordlength(i, j),
                        branch: Branch::Classical,
                    });
                }
                if i >= 1 && i < n {
                    for j in i..n {
                        let (a, b) = (Signed::plus(i), Signed::minus(j));
                        let (value, _) = doubled.pair(a, b)?;
                        row.push(PairRecord { x: a, y: b, ell: value.ell, d: value.d, branch: value.branch });
                    }
                }
                Ok(row)
            })
            .collect();
        let mut records = Vec::new();
        for row in rows {
            records.extend(row?);
        }
        Ok(Self { length: base.length(), doubled_length: doubled.doubled_length(), records })
    }

    /// Lower envelope of `𝒅` over `n_bins` uniform bins of `𝒍 ∈ [0, 𝑳/2]`.
    pub fn profile_bins(&self, n_bins: usize) -> Vec<ProfileBin<T>> {
        let width = self.length / T::from_usize_lossy(n_bins);
        let mut bins: Vec<ProfileBin<T>> = (0..n_bins)
            .map(|k| ProfileBin {
                lo: width * T::from_usize_lossy(k),
                hi: width * T::from_usize_lossy(k + 1),
                delta: T::nan(),
                psi: T::infinity(),
                branch: None,
            })
            .collect();
        for r in &self.records {
            let k = (r.ell / width).floor().to_usize().unwrap_or(0).min(n_bins - 1);
            if r.d < bins[k].psi {
                bins[k].psi = r.d;
                bins[k].delta = r.ell;
                bins[k].branch = Some(r.branch);
            }
        }
        bins
    }

    /// `min 𝒁` and the index of its first minimizer.
    pub fn min_z(&self, phi: &ComparisonFunction<T>) -> Option<(T, usize)> {
        let big_l = self.doubled_length;
        self.argmin_by(|r| r.d - big_l * phi.value(r.ell / big_l))
    }

    /// `min 𝒅 / (𝑳 g(𝒍/𝑳))` over pairs with `𝒍 > 0`.
    pub fn min_ratio(&self, g: impl Fn(T) -> T) -> Option<(T, usize)> {
        let big_l = self.doubled_length;
        self.argmin_by(|r| if r.ell > T::zero() { r.d / (big_l * g(r.ell / big_l)) } else { T::infinity() })
    }

    fn argmin_by(&self, f: impl Fn(&PairRecord<T>) -> T) -> Option<(T, usize)> {
        let mut best: Option<(T, usize)> = None;
        for (k, r) in self.records.iter().enumerate() {
            let v = f(r);
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, k));
            }
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileBin<T> {
    pub lo: T,
    pub hi: T,
    /// `𝒍` of the pair attaining the bin minimum (NaN for empty bins).
    pub delta: T,
    /// `Ψ`; `+∞` for empty bins.
    pub psi: T,
    pub branch: Option<Branch>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizingPair<T> {
    pub record: PairRecord<T>,
    pub z: T,
    /// `α_x, α_y` for a classical pair.
    pub alpha: Option<(T, T)>,
    /// Full angle data and bounce for a reflected pair.
    pub angles: Option<AngleData<T>>,
    pub snell: Option<ReflectedDistance<T>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport<T> {
    pub doubled_length: T,
    pub bins: Vec<ProfileBin<T>>,
    pub min_z: Option<T>,
    pub argmin: Option<MinimizingPair<T>>,
}

impl<T: Real> ProfileReport<T> {
    /// Rows `(delta, psi, branch)` for non-empty bins.
    pub fn csv(&self) -> String {
        let mut out = String::from("delta,psi,branch\n");
        for b in self.bins.iter().filter(|b| b.psi.is_finite()) {
            let branch = match b.branch {
                Some(Branch::Classical) => "classical",
                Some(Branch::Reflected) => "reflected",
                None => "",
            };
            out.push_str(&format!("{:.17e},{:.17e},{}\n", b.delta.as_f64(), b.psi.as_f64(), branch));
        }
        out
    }
}

/// Tangent, normal and curvature in the `T = J N` frame of the vertex order.
struct Frames<T> {
    tangents: Vec<crate::vec2::Vec2<T>>,
    curvature: Vec<T>,
}

fn standard_frames<T: Real>(curve: &DiscreteCurve<T>) -> Frames<T> {
    let sign = match curve.orientation() {
        Orientation::Standard => T::one(),
        Orientation::Flipped => -T::one(),
    };
    Frames { tangents: curve.tangents(), curvature: curve.curvature().iter().map(|&k| k * sign).collect() }
}

/// Profile with `n_bins` bins, and `min 𝒁` with its minimizer when `phi` is given.
pub fn extended_profile<T: Real>(
    curve: &DiscreteCurve<T>,
    domain: &ConvexDomain<T>,
    n_bins: usize,
    phi: Option<&ComparisonFunction<T>>,
) -> Result<ProfileReport<T>> {
    if curve.vertices().len() < 9 {
        return Err(Error::Input("profile needs at least 8 edges".into()));
    }
    if n_bins < 16 {
        return Err(Error::Input(format!("profile needs at least 16 bins, got {n_bins}")));
    }
    let doubled = DoubledCurve::new(curve, domain);
    let scan = PairScan::new(&doubled)?;
    let bins = scan.profile_bins(n_bins);
    let (min_z, argmin) = match phi.and_then(|p| scan.min_z(p)) {
        Some((z, k)) => (Some(z), Some(describe_pair(&doubled, scan.records[k], z)?)),
        None => (None, None),
    };
    Ok(ProfileReport { doubled_length: scan.doubled_length, bins, min_z, argmin })
}

fn describe_pair<T: Real>(doubled: &DoubledCurve<'_, T>, record: PairRecord<T>, z: T) -> Result<MinimizingPair<T>> {
    let curve = doubled.base();
    let frames = standard_frames(curve);
    let v = curve.vertices();
    let (i, j) = (record.x.index, record.y.index);
    let mut out = MinimizingPair { record, z, alpha: None, angles: None, snell: None };
    match record.branch {
        Branch::Classical => {
            if v[i] != v[j] {
                out.alpha = Some((
                    alpha_angle(v[i], v[j], frames.tangents[i])?,
                    alpha_angle(v[i], v[j], frames.tangents[j])?,
                ));
            }
        }
        Branch::Reflected => {
            let (_, r) = doubled.pair(record.x, record.y)?;
            let r = r.expect("reflected pair carries a bounce");
            out.angles = Some(crate::domain::angles_at(
                v[i],
                v[j],
                &r.bounce,
                frames.tangents[i],
                frames.tangents[j],
            )?);
            out.snell = Some(r);
        }
    }
    Ok(out)
}

/// `𝒁(a, b)`.
pub fn evaluate_z<T: Real>(
    doubled: &DoubledCurve<'_, T>,
    phi: &ComparisonFunction<T>,
    a: Signed,
    b: Signed,
) -> Result<T> {
    let (value, _) = doubled.pair(a, b)?;
    let big_l = doubled.doubled_length();
    Ok(value.d - big_l * phi.value(value.ell / big_l))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimumCase {
    /// Same sheet, both points interior.
    Classical,
    /// Same sheet with an endpoint involved.
    Endpoint,
    /// Opposite sheets.
    Reflected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual<T> {
    pub name: &'static str,
    pub value: T,
    pub tolerance: T,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionRecord<T> {
    pub status: ConditionStatus,
    pub case: Option<MinimumCase>,
    pub reason: Option<String>,
    pub residuals: Vec<Residual<T>>,
    pub mesh_size: T,
}

impl<T: Real> ConditionRecord<T> {
    fn inconclusive(case: Option<MinimumCase>, reason: impl Into<String>, mesh_size: T) -> Self {
        Self { status: ConditionStatus::Inconclusive, case, reason: Some(reason.into()), residuals: Vec::new(), mesh_size }
    }
}

fn at_most<T: Real>(name: &'static str, value: T, tolerance: T) -> Residual<T> {
    Residual { name, value, tolerance, pass: value <= tolerance }
}

fn at_least<T: Real>(name: &'static str, value: T, tolerance: T) -> Residual<T> {
    Residual { name, value, tolerance, pass: value >= -tolerance }
}

/// Checks the angle identities and second-variation inequalities at the
/// minimizing pair of `report`. Tolerances are `10 h` with `h` the largest
/// edge; inequality tolerances are additionally scaled by the size of their terms.
pub fn check_minimum_conditions<T: Real>(
    curve: &DiscreteCurve<T>,
    domain: &ConvexDomain<T>,
    phi: &ComparisonFunction<T>,
    report: &ProfileReport<T>,
) -> Result<ConditionRecord<T>> {
    let h = curve.h_max();
    let tol = T::lit(10.0) * h;
    let (Some(min_z), Some(argmin)) = (report.min_z, report.argmin.as_ref()) else {
        return Ok(ConditionRecord::inconclusive(None, "profile has no minimizer for φ", h));
    };
    let big_l = report.doubled_length;
    if min_z.abs() > T::lit(1e-6) * big_l {
        return Ok(ConditionRecord::inconclusive(None, format!("min Z = {min_z} is not zero"), h));
    }
    let r = argmin.record;
    let n = curve.last();
    let is_end = |i: usize| i == 0 || i == n;
    let case = match r.branch {
        Branch::Reflected => MinimumCase::Reflected,
        Branch::Classical if is_end(r.x.index) || is_end(r.y.index) => MinimumCase::Endpoint,
        Branch::Classical => MinimumCase::Classical,
    };
    if r.ell < h + h {
        return Ok(ConditionRecord::inconclusive(Some(case), "minimizer sits at the diagonal", h));
    }
    if (r.ell - big_l * T::half()).abs() <= h {
        return Ok(ConditionRecord::inconclusive(Some(case), "minimizer sits at the crossover 𝒍 = 𝑳/2", h));
    }
    let zeta = r.ell / big_l;
    let (_, dphi, ddphi) = phi.jet(zeta);
    let mut residuals = Vec::new();
    match case {
        MinimumCase::Classical | MinimumCase::Endpoint => {
            let frames = standard_frames(curve);
            let cum = curve.cumulative_arclength();
            let (mut i, mut j) = (r.x.index, r.y.index);
            if cum[i] > cum[j] {
                std::mem::swap(&mut i, &mut j);
            }
            let v = curve.vertices();
            let ax = alpha_angle(v[i], v[j], frames.tangents[i])?;
            let ay = alpha_angle(v[i], v[j], frames.tangents[j])?;
            residuals.push(at_most("alpha_x + alpha_y - pi", angle_gap(ax + ay, T::PI()), tol));
            residuals.push(at_most("sin(alpha_x) + phi'", (ax.sin() + dphi).abs(), tol));
            let (kx, ky) = (frames.curvature[i], frames.curvature[j]);
            let terms = [-T::lit(4.0) * ddphi / big_l, -kx * ax.cos(), ky * ay.cos()];
            let value = terms.iter().copied().sum::<T>();
            let scale: T = terms.iter().map(|t| t.abs()).sum();
            residuals.push(at_least("second variation", value, tol * scale));
        }
        MinimumCase::Reflected => {
            let (mut i, mut j) = (r.x.index, r.y.index);
            let (via_left, _) = curve.reflected_routes(i, j);
            let work;
            let c = if via_left <= curve.length() {
                curve
            } else {
                // reparametrize from the other end so the route runs through v_0
                let mut vertices = curve.vertices().to_vec();
                vertices.reverse();
                let ends = curve.endpoint_frames();
                work = DiscreteCurve::assemble(vertices, [ends[1], ends[0]], Orientation::Standard)?;
                i = n - i;
                j = n - j;
                &work
            };
            let frames = standard_frames(c);
            let v = c.vertices();
            let bounce = crate::billiard::reflected_distance(domain, v[i], v[j])?;
            let z = bounce.bounce;
            let bx = beta_angle(v[i], z.point, frames.tangents[i])?;
            let by = beta_angle(v[j], z.point, frames.tangents[j])?;
            let theta = bounce.theta;
            residuals.push(at_most("beta_x - beta_y", angle_gap(bx, by), tol));
            residuals.push(at_most("theta_x + theta_y", angle_gap(theta, -bounce.theta_y), tol));
            residuals.push(at_most("sin(beta) - phi'", (bx.sin() - dphi).abs(), tol));
            let inv = T::one() / bounce.d_x + T::one() / bounce.d_y;
            let den = inv * theta.cos() + T::two() * z.curvature;
            residuals.push(Residual { name: "(1/d_x + 1/d_y) cos(theta) + 2 kappa_S", value: den, tolerance: T::zero(), pass: den < T::zero() });
            let (kx, ky) = (frames.curvature[i], frames.curvature[j]);
            let beta = bx;
            let terms = [
                -(kx + ky) * beta.cos(),
                inv * T::two() * z.curvature / den * (T::one() - dphi * dphi),
                -T::lit(4.0) * ddphi / big_l,
            ];
            let value = terms.iter().copied().sum::<T>();
            let scale: T = terms.iter().map(|t| t.abs()).sum();
            residuals.push(at_least("second variation", value, tol * scale));
        }
    }
    let status = if residuals.iter().all(|r| r.pass) { ConditionStatus::Pass } else { ConditionStatus::Fail };
    Ok(ConditionRecord { status, case: Some(case), reason: None, residuals, mesh_size: h })
}
