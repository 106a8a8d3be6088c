//! One-dimensional minimization helpers shared by projection and the billiard solver.

use crate::scalar::Real;

/// Value, first and second derivative of a smooth 1D objective.
pub(crate) type Jet<T> = (T, T, T);

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[lo, hi]`: golden-section bracketing followed by a Newton
/// polish on the derivative, restricted to the final bracket.
pub(crate) fn minimize_bracketed<T: Real, F>(f: F, lo: T, hi: T, golden_iters: usize) -> T
where
    F: Fn(T) -> Jet<T>,
{
    let r = T::lit(INV_PHI);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c).0;
    let mut fd = f(d).0;
    for _ in 0..golden_iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d).0;
        }
    }
    let mut u = if fc <= fd { c } else { d };
    let (mut best, _, _) = f(u);
    // golden section only resolves the minimizer to about sqrt(eps), so the
    // bracket may have drifted off it; Newton gets the whole interval
    newton_polish(&f, &mut u, &mut best, lo, hi);
    u
}

pub(crate) fn newton_polish<T: Real, F>(f: &F, u: &mut T, best: &mut T, lo: T, hi: T)
where
    F: Fn(T) -> Jet<T>,
{
    let tol = T::epsilon() * T::lit(4.0) * (T::one() + u.abs());
    for _ in 0..30 {
        let (_, g, h) = f(*u);
        if !(h > T::zero()) || !g.is_finite() {
            break;
        }
        let next = (*u - g / h).max(lo).min(hi);
        let (fv, _, _) = f(next);
        let step = (next - *u).abs();
        // accept equal values: near the minimum the objective is flat to rounding
        if fv <= *best + T::epsilon() * best.abs().max(T::one()) * T::lit(8.0) {
            *u = next;
            *best = fv.min(*best);
        } else {
            break;
        }
        if step <= tol {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |u: f64| ((u - 0.3) * (u - 0.3), 2.0 * (u - 0.3), 2.0);
        let u = minimize_bracketed(f, -1.0, 2.0, 40);
        assert!((u - 0.3).abs() < 1e-14);
    }

    #[test]
    fn finds_edge_minimum() {
        let f = |u: f64| (u, 1.0, 0.0);
        let u = minimize_bracketed(f, 0.0, 1.0, 60);
        assert!(u < 1e-9);
    }
}
