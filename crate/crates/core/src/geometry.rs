//! The Poincaré upper half-plane: points, distance, balls and the local
//! doubling / approximate midpoint properties.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::Domain;
use crate::scalar::Real;

/// A point `re + i·im` of the open upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UhpPoint<T> {
    re: T,
    im: T,
}

impl<T: Real> UhpPoint<T> {
    /// Creates a point, rejecting `im ≤ 0` and non-finite coordinates.
    pub fn new(re: T, im: T) -> Result<Self> {
        if re.is_finite() && im.is_finite() && im > T::zero() {
            Ok(Self { re, im })
        } else {
            Err(Error::NotInUpperHalfPlane {
                re: re.as_f64(),
                im: im.as_f64(),
            })
        }
    }

    /// Callers guarantee `im > 0`.
    #[inline]
    pub(crate) fn new_unchecked(re: T, im: T) -> Self {
        debug_assert!(im > T::zero(), "im = {im:?}");
        Self { re, im }
    }

    /// The base point `i`, fixed by `SO(2)`.
    pub fn i() -> Self {
        Self {
            re: T::zero(),
            im: T::one(),
        }
    }

    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    #[inline]
    pub fn re(&self) -> T {
        self.re
    }

    #[inline]
    pub fn im(&self) -> T {
        self.im
    }

    #[inline]
    pub fn to_complex(&self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }

    /// Hyperbolic distance to `other`.
    #[inline]
    pub fn distance(&self, other: &Self) -> T {
        hyp_distance(self, other)
    }

    /// The point at geodesic distance `s ≥ 0` from `center` in direction `phi`.
    ///
    /// Directions are measured in the disk picture centred at `center`;
    /// `phi = 0` points straight up the vertical geodesic through `center`.
    /// The rotation `k(θ)` about `i` acts on these angles (for `center = i`)
    /// as `phi ↦ phi − 2θ`.
    pub fn from_polar(center: &Self, s: T, phi: T) -> Self {
        let (sin_phi, cos_phi) = phi.sin_cos();
        polar_point(center, (s / T::lit(2.0)).tanh(), sin_phi, cos_phi)
    }
}

/// Point with disk coordinate `t e^{iφ}` in the disk picture centred at `center`.
#[inline]
pub(crate) fn polar_point<T: Real>(center: &UhpPoint<T>, t: T, sin_phi: T, cos_phi: T) -> UhpPoint<T> {
    // Inverse Cayley map of w = t e^{iφ}: i (1 + w) / (1 − w).
    let wr = t * cos_phi;
    let wi = t * sin_phi;
    let den = (T::one() - wr) * (T::one() - wr) + wi * wi;
    let re0 = -T::lit(2.0) * wi / den;
    let im0 = (T::one() - t * t) / den;
    // x(center) = n(x_c) a(y_c) acts as ζ ↦ y_c ζ + x_c.
    UhpPoint::new_unchecked(center.re + center.im * re0, center.im * im0)
}

/// `k(−θ)·z = (z cos θ + sin θ) / (−z sin θ + cos θ)`, the hyperbolic rotation
/// about `i` by angle `2θ`, given `cos θ` and `sin θ`.
#[inline]
pub(crate) fn rotate_about_i<T: Real>(z: &UhpPoint<T>, cos: T, sin: T) -> UhpPoint<T> {
    // den = −z sin + cos, num = z cos + sin.
    let dr = cos - z.re * sin;
    let di = -z.im * sin;
    let nr = z.re * cos + sin;
    let ni = z.im * cos;
    let mod2 = dr * dr + di * di;
    let re = (nr * dr + ni * di) / mod2;
    // Im((az + b)/(cz + d)) = det · Im z / |cz + d|², with det = 1 here.
    let im = z.im / mod2;
    UhpPoint::new_unchecked(re, im)
}

/// Hyperbolic distance `arccosh(1 + |z − w|² / (2 Im z Im w))`.
///
/// Evaluated through the equivalent `2 asinh(|z − w| / (2 √(Im z Im w)))`,
/// which keeps full relative precision for nearby points.
#[inline]
pub fn hyp_distance<T: Real>(z: &UhpPoint<T>, w: &UhpPoint<T>) -> T {
    let dx = z.re - w.re;
    let dy = z.im - w.im;
    let chord = dx.hypot(dy);
    let two = T::lit(2.0);
    two * (chord / (two * (z.im * w.im).sqrt())).asinh()
}

/// The closed ball `{z : ρ(center, z) ≤ radius}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypBall<T> {
    center: UhpPoint<T>,
    radius: T,
}

impl<T: Real> HypBall<T> {
    pub fn new(center: UhpPoint<T>, radius: T) -> Result<Self> {
        if radius.is_finite() && radius > T::zero() {
            Ok(Self { center, radius })
        } else {
            Err(Error::InvalidRadius(radius.as_f64()))
        }
    }

    #[inline]
    pub fn center(&self) -> UhpPoint<T> {
        self.center
    }

    #[inline]
    pub fn radius(&self) -> T {
        self.radius
    }

    #[inline]
    pub fn contains(&self, z: &UhpPoint<T>) -> bool {
        hyp_distance(&self.center, z) <= self.radius
    }

    /// Closed-form area `2π(cosh r − 1) = 4π sinh²(r/2)`.
    pub fn area(&self) -> T {
        disk_area(self.radius)
    }

    /// Same ball with a different radius.
    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.center, radius)
    }
}

/// Area of a hyperbolic ball of radius `r`, `4π sinh²(r/2)`.
#[inline]
pub(crate) fn disk_area<T: Real>(r: T) -> T {
    let s = (r / T::lit(2.0)).sinh();
    T::lit(4.0) * T::PI() * s * s
}

/// Euclidean centre and radius of the circle bounding `ball`.
///
/// For centre `x₀ + i y₀` and hyperbolic radius `r` the boundary is the
/// Euclidean circle about `x₀ + i y₀ cosh r` of radius `y₀ sinh r`.
pub fn euclid_circle_of_hyp_ball<T: Real>(ball: &HypBall<T>) -> (UhpPoint<T>, T) {
    let c = ball.center;
    let r = ball.radius;
    (
        UhpPoint::new_unchecked(c.re, c.im * r.cosh()),
        c.im * r.sinh(),
    )
}

/// `λ`-measure of `{z : region(z)}` by deterministic quadrature over `domain`.
///
/// The region must lie inside the domain; nothing outside it is counted.
pub fn hyp_area<T, F>(region: F, domain: &Domain<T>) -> Result<T>
where
    T: Real,
    F: Fn(&UhpPoint<T>) -> bool,
{
    domain.validate()?;
    Ok(domain.integrate(|z| if region(z) { T::one() } else { T::zero() }))
}

/// Ratio `λ(B(z₀, 2r)) / λ(B(z₀, r))`.
///
/// Independent of `z₀` because `SL(2,ℝ)` acts transitively by isometries; the
/// areas are the closed-form ball areas, which gives `4 cosh²(r/2)`. The ratio
/// increases to infinity with `r`, so the plane is locally but not globally
/// doubling.
pub fn doubling_ratio<T: Real>(r: T) -> Result<T> {
    if !(r.is_finite() && r > T::zero()) {
        return Err(Error::InvalidRadius(r.as_f64()));
    }
    Ok(disk_area(r + r) / disk_area(r))
}

/// [`doubling_ratio`] with both areas obtained by quadrature of ball
/// indicators about `center` over `domain`.
pub fn doubling_ratio_with<T: Real>(center: &UhpPoint<T>, r: T, domain: &Domain<T>) -> Result<T> {
    let small = HypBall::new(*center, r)?;
    let big = HypBall::new(*center, r + r)?;
    let a_small = hyp_area(|z| small.contains(z), domain)?;
    let a_big = hyp_area(|z| big.contains(z), domain)?;
    Ok(a_big / a_small)
}

/// Standing assumptions on the metric measure space: the approximate midpoint
/// constants `R₀ ∈ [0,1)` and `β ∈ (1/2, 1)`, the atom radius bound `b` with
/// `b > R₀ / (1 − β)`, and the dilation factor `τ ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryAssumptions<T> {
    b: T,
    r0: T,
    beta_amp: T,
    tau: T,
}

impl<T: Real> GeometryAssumptions<T> {
    pub fn new(b: T, r0: T, beta_amp: T, tau: T) -> Result<Self> {
        let half = T::lit(0.5);
        if !(r0 >= T::zero() && r0 < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "R0 must lie in [0, 1), got {r0}"
            )));
        }
        if !(beta_amp > half && beta_amp < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "AMP beta must lie in (1/2, 1), got {beta_amp}"
            )));
        }
        if !(tau >= T::lit(2.0) && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau must be at least 2, got {tau}"
            )));
        }
        let threshold = r0 / (T::one() - beta_amp);
        if !(b > threshold && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "b = {b} must exceed R0 / (1 - beta) = {threshold}"
            )));
        }
        Ok(Self {
            b,
            r0,
            beta_amp,
            tau,
        })
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn beta_amp(&self) -> T {
        self.beta_amp
    }

    pub fn tau(&self) -> T {
        self.tau
    }
}

impl<T: Real> Default for GeometryAssumptions<T> {
    /// `R₀ = 0` (the plane is a path metric space), `β = 3/4`, `b = 1`, `τ = 2`.
    fn default() -> Self {
        Self {
            b: T::one(),
            r0: T::zero(),
            beta_amp: T::lit(0.75),
            tau: T::lit(2.0),
        }
    }
}

/// Inflation of the half-distance radius in [`amp_witness`].
pub const AMP_INFLATION: f64 = 1e-9;

/// A ball witnessing the approximate midpoint property for `z` and `w`.
///
/// The pair is moved isometrically so that `z` sits at `i` and the geodesic
/// through them becomes a diameter of the disk picture; the midpoint is read
/// off there and mapped back. The returned ball is centred at the geodesic
/// midpoint with radius `ρ(z, w)/2 · (1 + 1e-9)`.
pub fn amp_witness<T: Real>(
    z: &UhpPoint<T>,
    w: &UhpPoint<T>,
    assumptions: &GeometryAssumptions<T>,
) -> Result<HypBall<T>> {
    let d = hyp_distance(z, w);
    if !(d > assumptions.r0) {
        return Err(Error::PointsTooClose {
            distance: d.as_f64(),
            r0: assumptions.r0.as_f64(),
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let iu = Complex::new(T::zero(), T::one());
    // ζ ↦ (ζ − x_z) / y_z sends z to i.
    let w1 = (w.to_complex() - Complex::new(z.re, T::zero())) / z.im;
    // Cayley transform: i ↦ 0, and w1 lands at distance tanh(d/2) from 0.
    let c = (w1 - iu) / (w1 + iu);
    let direction = c / c.norm();
    let m_disk = direction * (d / T::lit(4.0)).tanh();
    let m1 = iu * (one + m_disk) / (one - m_disk);
    let mid = UhpPoint::new(z.re + z.im * m1.re, z.im * m1.im)?;
    let radius = d / T::lit(2.0) * (T::one() + T::lit(AMP_INFLATION));
    if !(radius < assumptions.beta_amp * d) {
        return Err(Error::InvalidParameter(format!(
            "beta = {} is too close to 1/2 for the inflated midpoint ball",
            assumptions.beta_amp
        )));
    }
    HypBall::new(mid, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{GeodesicDisk, HypRect};
    use std::f64::consts::{E, PI};

    fn p(re: f64, im: f64) -> UhpPoint<f64> {
        UhpPoint::new(re, im).unwrap()
    }

    #[test]
    fn rejects_points_off_the_half_plane() {
        assert!(UhpPoint::new(0.0, 0.0).is_err());
        assert!(UhpPoint::new(1.0, -2.0).is_err());
        assert!(UhpPoint::new(f64::NAN, 1.0).is_err());
        assert!(UhpPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn distance_identity_and_vertical_segment() {
        assert_eq!(hyp_distance(&UhpPoint::<f64>::i(), &UhpPoint::<f64>::i()), 0.0);
        // Oracle: ∫ |dz| / Im z along the vertical segment from i to e·i,
        // by composite Simpson with 2000 panels.
        let n = 2000;
        let h = (E - 1.0) / n as f64;
        let mut s = 1.0 + 1.0 / E;
        for k in 1..n {
            let y = 1.0 + k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } / y;
        }
        let oracle = s * h / 3.0;
        let d = hyp_distance(&UhpPoint::<f64>::i(), &p(0.0, E));
        assert!((d - oracle).abs() < 1e-9, "{d} vs {oracle}");
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn asinh_form_matches_arccosh_form() {
        let pts = [p(0.3, 0.2), p(-4.0, 7.0), p(1.0, 1e-3), p(2.0, 3.0)];
        for a in &pts {
            for b in &pts {
                let dx = a.re() - b.re();
                let dy = a.im() - b.im();
                let reference = (1.0 + (dx * dx + dy * dy) / (2.0 * a.im() * b.im())).acosh();
                assert!((hyp_distance(a, b) - reference).abs() < 1e-9 * (1.0 + reference));
            }
        }
    }

    #[test]
    fn ball_rejects_degenerate_radius() {
        assert!(HypBall::new(UhpPoint::<f64>::i(), 0.0).is_err());
        assert!(HypBall::new(UhpPoint::<f64>::i(), -1.0).is_err());
        assert!(HypBall::new(UhpPoint::<f64>::i(), f64::NAN).is_err());
    }

    #[test]
    fn euclidean_circle_of_ball_about_i() {
        let r = 0.8f64;
        let ball = HypBall::new(UhpPoint::<f64>::i(), r).unwrap();
        let (c, rad) = euclid_circle_of_hyp_ball(&ball);
        assert_eq!(c.re(), 0.0);
        assert!((c.im() - r.cosh()).abs() < 1e-15);
        assert!((rad - r.sinh()).abs() < 1e-15);
        // Degenerate limit.
        let tiny = HypBall::new(p(2.0, 3.0), 1e-12).unwrap();
        let (c, rad) = euclid_circle_of_hyp_ball(&tiny);
        assert!((c.im() - 3.0).abs() < 1e-12 && rad < 1e-11);
    }

    #[test]
    fn polar_points_are_at_requested_distance() {
        let c = p(-1.5, 0.4);
        for k in 0..50 {
            let s = 0.05 + 0.1 * k as f64;
            let phi = 0.37 * k as f64;
            let z = UhpPoint::from_polar(&c, s, phi);
            assert!((hyp_distance(&c, &z) - s).abs() < 1e-11 * (1.0 + s));
        }
        let up = UhpPoint::from_polar(&UhpPoint::<f64>::i(), 1.0, 0.0);
        assert!(up.re().abs() < 1e-15 && (up.im() - E).abs() < 1e-14);
    }

    #[test]
    fn rotation_about_i_matches_formula() {
        let z = p(0.7, 1.3);
        let th: f64 = 0.4;
        let zc = z.to_complex();
        let expect = (zc * th.cos() + th.sin()) / (-zc * th.sin() + th.cos());
        let got = rotate_about_i(&z, th.cos(), th.sin());
        assert!((got.to_complex() - expect).norm() < 1e-15);
    }

    #[test]
    fn area_of_empty_region_is_zero() {
        let rect = Domain::Rect(HypRect::new(-1.0, 1.0, 0.5, 2.0, 32, 32).unwrap());
        assert_eq!(hyp_area(|_| false, &rect).unwrap(), 0.0);
    }

    #[test]
    fn area_quadrature_of_unit_ball() {
        let ball = HypBall::new(UhpPoint::<f64>::i(), 1.0).unwrap();
        let exact = 2.0 * PI * (1.0f64.cosh() - 1.0);
        assert!((ball.area() - exact).abs() < 1e-14);
        // Disk grid equal to the ball: the integrand is smooth on every ray.
        let disk = Domain::Disk(GeodesicDisk::new(UhpPoint::<f64>::i(), 1.0, 24, 4).unwrap());
        let a = hyp_area(|z| ball.contains(z), &disk).unwrap();
        assert!((a - exact).abs() / exact < 1e-12, "{a}");
        let wider = Domain::Disk(GeodesicDisk::new(UhpPoint::<f64>::i(), 3.0, 3000, 4).unwrap());
        let a = hyp_area(|z| ball.contains(z), &wider).unwrap();
        assert!((a - exact).abs() / exact < 5e-3, "{a}");
        let rect = Domain::Rect(HypRect::new(-1.5, 1.5, 0.3, 3.0, 600, 600).unwrap());
        let a = hyp_area(|z| ball.contains(z), &rect).unwrap();
        assert!((a - exact).abs() / exact < 5e-3, "{a}");
    }

    #[test]
    fn doubling_ratio_closed_form_and_limits() {
        for r in [0.5, 1.0, 2.0] {
            let expected = 4.0 * (r / 2.0f64).cosh().powi(2);
            assert!((doubling_ratio(r).unwrap() - expected).abs() < 1e-12 * expected);
        }
        assert!((doubling_ratio(1e-6f64).unwrap() - 4.0).abs() < 1e-9);
        assert!(doubling_ratio(10.0f64).unwrap() > 100.0);
        assert!(doubling_ratio(0.0).is_err());
        assert!(doubling_ratio(-1.0).is_err());
        let mut last = 0.0;
        for k in 1..100 {
            let v = doubling_ratio(0.1 * k as f64).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn doubling_ratio_by_quadrature_is_centre_independent() {
        let r = 0.5;
        let expected = doubling_ratio(r).unwrap();
        for c in [UhpPoint::<f64>::i(), p(3.0, 0.2), p(-2.0, 5.0)] {
            let disk = Domain::Disk(GeodesicDisk::new(c, 2.0 * r, 3000, 4).unwrap());
            let q = doubling_ratio_with(&c, r, &disk).unwrap();
            assert!((q - expected).abs() / expected < 2e-3, "{q} vs {expected}");
        }
    }

    #[test]
    fn assumptions_are_validated() {
        assert!(GeometryAssumptions::new(1.0, 0.0, 0.75, 2.0).is_ok());
        assert!(GeometryAssumptions::new(1.0, 1.0, 0.75, 2.0).is_err());
        assert!(GeometryAssumptions::new(1.0, 0.1, 0.5, 2.0).is_err());
        assert!(GeometryAssumptions::new(1.0, 0.1, 0.75, 1.5).is_err());
        // b must exceed R0 / (1 − β) = 0.4.
        assert!(GeometryAssumptions::new(0.4, 0.1, 0.75, 2.0).is_err());
        assert!(GeometryAssumptions::new(0.41, 0.1, 0.75, 2.0).is_ok());
    }

    #[test]
    fn amp_witness_vertical_pair() {
        let a = GeometryAssumptions::default();
        let ball = amp_witness(&UhpPoint::<f64>::i(), &p(0.0, E * E), &a).unwrap();
        assert!((ball.center().re()).abs() < 1e-12);
        assert!((ball.center().im() - E).abs() < 1e-12);
        assert!((ball.radius() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn amp_witness_rejects_close_points() {
        let a = GeometryAssumptions::new(2.5, 0.5, 0.75, 2.0).unwrap();
        let z = p(1.0, 1.0);
        let w = p(1.1, 1.0);
        assert!(matches!(
            amp_witness(&z, &w, &a),
            Err(Error::PointsTooClose { .. })
        ));
        let d = GeometryAssumptions::default();
        assert!(amp_witness(&z, &z, &d).is_err());
    }
}
