//! Derivative-free local minimisation in two variables.

use crate::scalar::Real;

/// Outcome of [`nelder_mead`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum<T> {
    pub point: [T; 2],
    pub value: T,
    pub evaluations: usize,
}

/// Nelder–Mead simplex search started from `start` with initial edge `step`.
///
/// Stops when the spread of simplex values drops below `ftol` or after
/// `max_evals` evaluations. Non-finite values are treated as `+∞`, so `f` may
/// encode constraints that way.
pub fn nelder_mead<T: Real, F: FnMut([T; 2]) -> T>(
    mut f: F,
    start: [T; 2],
    step: T,
    ftol: T,
    max_evals: usize,
) -> Minimum<T> {
    let evals = std::cell::Cell::new(0usize);
    let mut g = |p: [T; 2]| {
        evals.set(evals.get() + 1);
        let v = f(p);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };
    let mut s = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut v = [g(s[0]), g(s[1]), g(s[2])];
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let lerp = |a: [T; 2], b: [T; 2], t: T| [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t];
    loop {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        s = [s[idx[0]], s[idx[1]], s[idx[2]]];
        v = [v[idx[0]], v[idx[1]], v[idx[2]]];
        let spread = (v[2] - v[0]).abs();
        if (v[2].is_finite() && spread <= ftol) || evals.get() >= max_evals {
            break;
        }
        let centroid = lerp(s[0], s[1], half);
        let reflected = lerp(s[2], centroid, two);
        let vr = g(reflected);
        if vr < v[0] {
            let expanded = lerp(s[2], centroid, T::lit(3.0));
            let ve = g(expanded);
            if ve < vr {
                s[2] = expanded;
                v[2] = ve;
            } else {
                s[2] = reflected;
                v[2] = vr;
            }
        } else if vr < v[1] {
            s[2] = reflected;
            v[2] = vr;
        } else {
            let contracted = if vr < v[2] {
                lerp(centroid, reflected, half)
            } else {
                lerp(centroid, s[2], half)
            };
            let vc = g(contracted);
            if vc < v[2].min(vr) {
                s[2] = contracted;
                v[2] = vc;
            } else {
                for k in 1..3 {
                    s[k] = lerp(s[0], s[k], half);
                    v[k] = g(s[k]);
                }
            }
        }
    }
    Minimum {
        point: s[0],
        value: v[0],
        evaluations: evals.get(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_rosenbrock_minimum() {
        let m = nelder_mead(
            |[x, y]: [f64; 2]| (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2),
            [-1.2, 1.0],
            0.5,
            1e-16,
            5000,
        );
        assert!((m.point[0] - 1.0).abs() < 1e-4 && (m.point[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn respects_infinite_walls() {
        let m = nelder_mead(
            |[x, y]: [f64; 2]| if x < 0.5 { f64::NAN } else { x * x + y * y },
            [2.0, 1.0],
            0.3,
            1e-14,
            2000,
        );
        assert!(m.point[0] >= 0.5);
        assert!((m.value - 0.25).abs() < 1e-5);
    }
}
