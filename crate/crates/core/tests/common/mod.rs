//! Oracles written independently of the library: plain formulas, Simpson's
//! rule and rejection sampling.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Length of the vertical segment from `y0·i` to `y1·i` in the metric `|dz|/y`.
pub fn vertical_length(y0: f64, y1: f64) -> f64 {
    simpson(|y| 1.0 / y, y0, y1, 2000)
}

/// `(z cos θ + sin θ) / (−z sin θ + cos θ)`.
pub fn rotation_formula(z: Complex64, theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    (z * c + s) / (-z * s + c)
}

/// `arccosh(1 + |z − w|² / (2 Im z Im w))`.
pub fn distance_acosh(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).acosh()
}

/// `2π (cosh r − 1)`.
pub fn ball_area_formula(r: f64) -> f64 {
    2.0 * std::f64::consts::PI * (r.cosh() - 1.0)
}

/// Hyperbolic area of `B(center, r)` by sampling `dx dy / y²` on the box
/// `|x − x₀| ≤ y₀ sinh r`, `y₀ e^{−r} ≤ y ≤ y₀ e^{r}`: `x` uniform, `1/y`
/// uniform. Returns the estimate and its standard error.
pub fn mc_ball_area<R: Rng>(center: Complex64, r: f64, n: usize, rng: &mut R) -> (f64, f64) {
    let half = center.im * r.sinh();
    let (ya, yb) = (center.im * (-r).exp(), center.im * r.exp());
    let box_measure = 2.0 * half * (1.0 / ya - 1.0 / yb);
    let mut hits = 0usize;
    for _ in 0..n {
        let x = center.re - half + 2.0 * half * rng.gen::<f64>();
        let inv = 1.0 / yb + (1.0 / ya - 1.0 / yb) * rng.gen::<f64>();
        if distance_acosh(center, Complex64::new(x, 1.0 / inv)) <= r {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    (box_measure * p, box_measure * (p * (1.0 - p) / n as f64).sqrt())
}

/// `∫_{ℍ²} amplitude · exp(−ρ(z, c)² / (2σ²)) dλ(z) = 2π ∫₀^∞ e^{−s²/(2σ²)} sinh s ds`.
pub fn gaussian_bump_integral(sigma: f64, amplitude: f64) -> f64 {
    let upper = 40.0 * sigma + 10.0;
    amplitude
        * 2.0
        * std::f64::consts::PI
        * simpson(|s| (-s * s / (2.0 * sigma * sigma)).exp() * s.sinh(), 0.0, upper, 200_000)
}
