//! Periodic cubic spline through a closed polygon and an arclength table for
//! smooth periodic parametrizations.

use crate::scalar::Real;
use crate::vec2::Vec2;

#[derive(Clone, Debug)]
pub(crate) struct PeriodicSpline<T> {
    knots: Vec<T>,
    points: Vec<Vec2<T>>,
    second: Vec<Vec2<T>>,
}

impl<T: Real> PeriodicSpline<T> {
    /// Interpolates `points` (closed, first point not repeated) with a
    /// chord-length parametrization.
    pub(crate) fn new(points: &[Vec2<T>]) -> Self {
        let n = points.len();
        let mut knots = Vec::with_capacity(n + 1);
        knots.push(T::zero());
        for i in 0..n {
            let h = points[(i + 1) % n].dist(points[i]);
            knots.push(knots[i] + h);
        }
        let h = |i: usize| knots[i + 1] - knots[i];
        let six = T::lit(6.0);
        let mut sub = vec![T::zero(); n];
        let mut diag = vec![T::zero(); n];
        let mut sup = vec![T::zero(); n];
        let mut rhs = vec![Vec2::zero(); n];
        for i in 0..n {
            let hp = h((i + n - 1) % n);
            let hi = h(i);
            sub[i] = hp;
            diag[i] = T::two() * (hp + hi);
            sup[i] = hi;
            let fwd = (points[(i + 1) % n] - points[i]) / hi;
            let bwd = (points[i] - points[(i + n - 1) % n]) / hp;
            rhs[i] = (fwd - bwd) * six;
        }
        let second = solve_cyclic(&sub, &diag, &sup, &rhs);
        Self { knots, points: points.to_vec(), second }
    }

    pub(crate) fn period(&self) -> T {
        *self.knots.last().unwrap()
    }

    pub(crate) fn knots(&self) -> &[T] {
        &self.knots
    }

    /// Position, first and second derivative at parameter `t` (wrapped into the period).
    pub(crate) fn eval(&self, t: T) -> (Vec2<T>, Vec2<T>, Vec2<T>) {
        let n = self.points.len();
        let period = self.period();
        let mut t = t % period;
        if t < T::zero() {
            t = t + period;
        }
        let i = match self.knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        };
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = t1 - t0;
        let (p0, p1) = (self.points[i], self.points[(i + 1) % n]);
        let (m0, m1) = (self.second[i], self.second[(i + 1) % n]);
        let a = t1 - t;
        let b = t - t0;
        let six = T::lit(6.0);
        let c0 = p0 / h - m0 * (h / six);
        let c1 = p1 / h - m1 * (h / six);
        let pos = m0 * (a * a * a / (six * h)) + m1 * (b * b * b / (six * h)) + c0 * a + c1 * b;
        let d1 = m1 * (b * b / (T::two() * h)) - m0 * (a * a / (T::two() * h)) + c1 - c0;
        let d2 = m0 * (a / h) + m1 * (b / h);
        (pos, d1, d2)
    }
}

/// Solves a cyclic tridiagonal system with vector right-hand side
/// (Sherman-Morrison on top of the Thomas algorithm).
fn solve_cyclic<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let n = diag.len();
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let x = thomas(sub, &d, sup, rhs);
    let mut u = vec![Vec2::zero(); n];
    u[0] = Vec2::new(gamma, T::zero());
    u[n - 1] = Vec2::new(alpha, T::zero());
    let z = thomas(sub, &d, sup, &u);
    let num = x[0] + x[n - 1] * (beta / gamma);
    let den = T::one() + z[0].x + z[n - 1].x * beta / gamma;
    x.iter()
        .zip(&z)
        .map(|(&xi, zi)| xi - Vec2::new(num.x * zi.x / den, num.y * zi.x / den))
        .collect()
}

fn thomas<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![Vec2::zero(); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - d[i - 1] * sub[i]) / m;
    }
    let mut x = vec![Vec2::zero(); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - x[i + 1] * c[i];
    }
    x
}

/// Natural cubic spline through values on a uniform grid over `[0, 1]`.
#[derive(Clone, Debug)]
pub(crate) struct UniformSpline<T> {
    values: Vec<T>,
    second: Vec<T>,
}

impl<T: Real> UniformSpline<T> {
    /// `values.len() >= 3`.
    pub(crate) fn new(values: Vec<T>) -> Self {
        let n = values.len() - 1;
        let h = T::one() / T::from_usize_lossy(n);
        let mut second = vec![T::zero(); n + 1];
        if n >= 2 {
            let m = n - 1;
            let sub = vec![h; m];
            let diag = vec![T::lit(4.0) * h; m];
            let sup = vec![h; m];
            let six = T::lit(6.0);
            let rhs: Vec<Vec2<T>> = (1..n)
                .map(|i| Vec2::new(six * (values[i + 1] - values[i] - values[i] + values[i - 1]) / h, T::zero()))
                .collect();
            for (i, v) in thomas(&sub, &diag, &sup, &rhs).into_iter().enumerate() {
                second[i + 1] = v.x;
            }
        }
        Self { values, second }
    }

    /// Value, first and second derivative at `t ∈ [0, 1]`.
    pub(crate) fn eval(&self, t: T) -> (T, T, T) {
        let n = self.values.len() - 1;
        let nf = T::from_usize_lossy(n);
        let h = T::one() / nf;
        let i = (t * nf).floor().to_usize().unwrap_or(0).min(n - 1);
        let t0 = T::from_usize_lossy(i) * h;
        let b = t - t0;
        let a = h - b;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let six = T::lit(6.0);
        let c0 = y0 / h - m0 * h / six;
        let c1 = y1 / h - m1 * h / six;
        let v = m0 * a * a * a / (six * h) + m1 * b * b * b / (six * h) + c0 * a + c1 * b;
        let d1 = m1 * b * b / (T::two() * h) - m0 * a * a / (T::two() * h) + c1 - c0;
        let d2 = (m0 * a + m1 * b) / h;
        (v, d1, d2)
    }
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss-Legendre quadrature of `f` over `[a, b]`.
pub(crate) fn gauss_legendre<T: Real>(f: impl Fn(T) -> T, a: T, b: T) -> T {
    let mid = (a + b) * T::half();
    let half = (b - a) * T::half();
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(&x, &w)| T::lit(w) * f(mid + half * T::lit(x)))
        .sum::<T>()
        * half
}

/// Cumulative arclength over panels of a periodic parametrization.
#[derive(Clone, Debug)]
pub(crate) struct ArcTable<T> {
    breaks: Vec<T>,
    cumulative: Vec<T>,
}

impl<T: Real> ArcTable<T> {
    pub(crate) fn new(breaks: Vec<T>, speed: impl Fn(T) -> T) -> Self {
        let mut cumulative = Vec::with_capacity(breaks.len());
        cumulative.push(T::zero());
        for w in breaks.windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + gauss_legendre(&speed, w[0], w[1]));
        }
        Self { breaks, cumulative }
    }

    pub(crate) fn period(&self) -> T {
        *self.breaks.last().unwrap() - self.breaks[0]
    }

    pub(crate) fn length(&self) -> T {
        *self.cumulative.last().unwrap()
    }

    fn panel_of(table: &[T], v: T) -> usize {
        let n = table.len() - 1;
        match table.binary_search_by(|k| k.partial_cmp(&v).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }

    fn wrap(v: T, period: T) -> T {
        let mut r = v % period;
        if r < T::zero() {
            r = r + period;
        }
        r
    }

    /// Arclength from the parameter origin to `u` (wrapped into one period).
    pub(crate) fn s_of_u(&self, u: T, speed: impl Fn(T) -> T) -> T {
        let u = Self::wrap(u, self.period());
        let k = Self::panel_of(&self.breaks, u);
        self.cumulative[k] + gauss_legendre(speed, self.breaks[k], u)
    }

    /// Inverse of [`Self::s_of_u`].
    pub(crate) fn u_of_s(&self, s: T, speed: impl Fn(T) -> T) -> T {
        let s = Self::wrap(s, self.length());
        let k = Self::panel_of(&self.cumulative, s);
        let (u0, u1) = (self.breaks[k], self.breaks[k + 1]);
        let (s0, s1) = (self.cumulative[k], self.cumulative[k + 1]);
        let mut u = u0 + (s - s0) / (s1 - s0) * (u1 - u0);
        for _ in 0..12 {
            let f = s0 + gauss_legendre(&speed, u0, u) - s;
            let step = f / speed(u);
            u = (u - step).max(u0).min(u1);
            if step.abs() <= T::epsilon() * T::lit(4.0) * (T::one() + u.abs()) {
                break;
            }
        }
        u
    }
}
