//! `SL(2,ℝ)` and `O(2)`: matrices, the Möbius action on `ℍ²`, the matrices
//! `x(z)`, `k(θ)`, `v(θ)`, Iwasawa coordinates and Haar integration.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::geometry::UhpPoint;
use crate::quadrature::midpoints;
use crate::scalar::Real;

/// Real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    /// Inverse, or `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some(Self::new(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs())
    }

    /// Max entry of `|uᵀu − I|`.
    pub fn orthogonality_residual(&self) -> T {
        (self.transpose() * *self).max_abs_diff(&Self::identity())
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Mat2<T>;

    fn mul(self, o: Mat2<T>) -> Mat2<T> {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// An element of `SL(2,ℝ)`: a matrix with determinant 1.
///
/// Construction checks `|det − 1| ≤ 1e-12` and never renormalises; products and
/// inverses of elements stay in the group without re-checking.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SL2Element<T>(Mat2<T>);

impl<T: Real> SL2Element<T> {
    pub fn new(mat: Mat2<T>) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::NonFiniteMatrix);
        }
        let det = mat.det();
        if (det - T::one()).abs() > T::structural_tol() {
            return Err(Error::NotUnimodular(det.as_f64()));
        }
        Ok(Self(mat))
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    #[inline]
    pub fn mat(&self) -> &Mat2<T> {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let m = &self.0;
        Self(Mat2::new(m.d, -m.b, -m.c, m.a))
    }

    /// Möbius action `(az + b) / (cz + d)`.
    #[inline]
    pub fn act(&self, z: &UhpPoint<T>) -> UhpPoint<T> {
        let m = &self.0;
        act_unchecked(m, T::one(), z)
    }
}

impl<T: Real> Mul for SL2Element<T> {
    type Output = SL2Element<T>;

    fn mul(self, o: SL2Element<T>) -> SL2Element<T> {
        SL2Element(self.0 * o.0)
    }
}

#[inline]
fn act_unchecked<T: Real>(m: &Mat2<T>, det: T, z: &UhpPoint<T>) -> UhpPoint<T> {
    let (x, y) = (z.re(), z.im());
    // den = cz + d, num = az + b.
    let dr = m.c * x + m.d;
    let di = m.c * y;
    let nr = m.a * x + m.b;
    let ni = m.a * y;
    let mod2 = dr * dr + di * di;
    let re = (nr * dr + ni * di) / mod2;
    let im = det * y / mod2;
    UhpPoint::new_unchecked(re, im)
}

/// Möbius action of a real matrix with positive determinant.
///
/// Matrices with `det ≤ 0` do not preserve the upper half-plane and are
/// rejected; reflections enter only through [`conjugate_action`].
pub fn mobius_apply<T: Real>(g: &Mat2<T>, z: &UhpPoint<T>) -> Result<UhpPoint<T>> {
    if !g.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let det = g.det();
    if !(det > T::zero()) {
        return Err(Error::OrientationReversing(det.as_f64()));
    }
    let dr = g.c * z.re() + g.d;
    let di = g.c * z.im();
    if dr == T::zero() && di == T::zero() {
        return Err(Error::Pole);
    }
    let w = act_unchecked(g, det, z);
    UhpPoint::new(w.re(), w.im())
}

/// `x(z) = (Im z)^{-1/2} [[Im z, Re z], [0, 1]]`, the element with `x(z)·i = z`.
pub fn x_of_z<T: Real>(z: &UhpPoint<T>) -> SL2Element<T> {
    let s = z.im().sqrt();
    SL2Element(Mat2::new(s, z.re() / s, T::zero(), s.recip()))
}

/// Rotation `k(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn rotation_k<T: Real>(theta: T) -> SL2Element<T> {
    let (s, c) = theta.sin_cos();
    SL2Element(Mat2::new(c, -s, s, c))
}

/// Reflection `v(θ) = [[cos θ, sin θ], [sin θ, −cos θ]]`, across the line at
/// angle `θ/2`. Determinant −1, so it is not an element of `SL(2,ℝ)`.
pub fn reflection_v<T: Real>(theta: T) -> Mat2<T> {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, s, s, -c)
}

fn check_orthogonal<T: Real>(u: &Mat2<T>) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let res = u.orthogonality_residual();
    if res > T::structural_tol() {
        return Err(Error::NotOrthogonal(res.as_f64()));
    }
    Ok(())
}

/// `(u⁻¹ x(z) u)·i` for `u ∈ O(2)`.
///
/// Conjugation preserves the determinant, so `u⁻¹ x(z) u ∈ SL(2,ℝ)` even when
/// `det u = −1`. For `u = k(θ)` the result is
/// `k(−θ)·z = (z cos θ + sin θ) / (−z sin θ + cos θ)`.
///
/// For `u = v(θ)` the result is `k(θ)·(−z̄)`, the mirror image of `k(−θ)·z`
/// in the imaginary axis. It is not `k(−θ)·z`: at `θ = 0`,
/// `v(0) x(z) v(0) = [[√y, −x/√y], [0, 1/√y]]` sends `i` to `−x + iy`.
pub fn conjugate_action<T: Real>(u: &Mat2<T>, z: &UhpPoint<T>) -> Result<UhpPoint<T>> {
    check_orthogonal(u)?;
    let conj = u.transpose() * *x_of_z(z).mat() * *u;
    Ok(SL2Element(conj).act(&UhpPoint::i()))
}

/// Coordinates of `g = n(x) a(y) k(θ)` with `n(x) = [[1, x], [0, 1]]`,
/// `a(y) = diag(√y, 1/√y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IwasawaCoords<T> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

impl<T: Real> IwasawaCoords<T> {
    pub fn reconstruct(&self) -> SL2Element<T> {
        let s = self.y.sqrt();
        let na = Mat2::new(s, self.x / s, T::zero(), s.recip());
        SL2Element(na) * rotation_k(self.theta)
    }
}

/// Splits `g` as `n(x) a(y) k(θ)`; `x + iy = g·i` and `θ ∈ [0, 2π)`.
pub fn iwasawa_decompose<T: Real>(g: &SL2Element<T>) -> IwasawaCoords<T> {
    let z = g.act(&UhpPoint::i());
    let k = x_of_z(&z).inverse() * *g;
    let mut theta = k.0.c.atan2(k.0.a);
    if theta < T::zero() {
        theta = theta + T::TAU();
    }
    if theta >= T::TAU() {
        theta = T::zero();
    }
    IwasawaCoords {
        x: z.re(),
        y: z.im(),
        theta,
    }
}

/// Box in Iwasawa coordinates: `x ∈ [x0, x1]`, `y ∈ [y0, y1]` (log-spaced
/// nodes), `θ ∈ [0, 2π)`, with a midpoint node count per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarGrid<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
    pub nx: usize,
    pub ny: usize,
    pub ntheta: usize,
}

impl<T: Real> Default for HaarGrid<T> {
    /// `[−8, 8] × [e⁻⁴, e⁴] × [0, 2π)` with 128 nodes per axis.
    fn default() -> Self {
        Self {
            x0: T::lit(-8.0),
            x1: T::lit(8.0),
            y0: T::lit(-4.0).exp(),
            y1: T::lit(4.0).exp(),
            nx: 128,
            ny: 128,
            ntheta: 128,
        }
    }
}

impl<T: Real> HaarGrid<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.y0 > T::zero()) {
            return Err(Error::InvalidDomain(format!(
                "Haar box touches y = 0 (y0 = {})",
                self.y0
            )));
        }
        let finite = [self.x0, self.x1, self.y0, self.y1]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.x1 > self.x0 && self.y1 > self.y0) {
            return Err(Error::InvalidDomain("empty or non-finite Haar box".into()));
        }
        if self.nx == 0 || self.ny == 0 || self.ntheta == 0 {
            return Err(Error::InvalidDomain("zero node count".into()));
        }
        Ok(())
    }
}

/// `∫_G F dν` with `dν = (dx dy / y²)(dθ / 2π)` in Iwasawa coordinates.
///
/// This normalisation gives `SO(2)` total mass 1 and makes the disintegration
/// `∫_G F = ∫_{G/K} ∫_K F(xk) dk dλ` hold with constant 1.
pub fn haar_integrate<T, F>(f: F, grid: &HaarGrid<T>) -> Result<T>
where
    T: Real,
    F: Fn(&SL2Element<T>) -> T,
{
    grid.validate()?;
    let (xs, hx) = midpoints(grid.x0, grid.x1, grid.nx);
    let (ts, ht) = midpoints(grid.y0.ln(), grid.y1.ln(), grid.ny);
    let (thetas, hth) = midpoints(T::zero(), T::TAU(), grid.ntheta);
    let ks: Vec<Mat2<T>> = thetas.iter().map(|&t| rotation_k(t).0).collect();
    let base = hx * ht * hth / T::TAU();
    let mut total = T::zero();
    for &t in &ts {
        let s = (t / T::lit(2.0)).exp();
        let w = base / (t.exp());
        let mut row = T::zero();
        for &x in &xs {
            let na = Mat2::new(s, x / s, T::zero(), s.recip());
            let mut cell = T::zero();
            for k in &ks {
                cell = cell + f(&SL2Element(na * *k));
            }
            row = row + cell;
        }
        total = total + w * row;
    }
    Ok(total)
}

/// `(∫ F dν, ∫ F∘A_u dν)` with `A_u(g) = u⁻¹ g u`, `u ∈ O(2)`.
///
/// Agreement of the two values witnesses `mod A_u = 1`.
pub fn check_unimodular<T, F>(f: F, u: &Mat2<T>, grid: &HaarGrid<T>) -> Result<(T, T)>
where
    T: Real,
    F: Fn(&SL2Element<T>) -> T,
{
    check_orthogonal(u)?;
    let ut = u.transpose();
    let plain = haar_integrate(&f, grid)?;
    let conjugated = haar_integrate(|g| f(&SL2Element(ut * g.0 * *u)), grid)?;
    Ok((plain, conjugated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use std::f64::consts::FRAC_PI_2;

    fn p(re: f64, im: f64) -> UhpPoint<f64> {
        UhpPoint::new(re, im).unwrap()
    }

    #[test]
    fn sl2_construction_checks_determinant() {
        assert!(SL2Element::new(Mat2::new(2.0, 0.0, 0.0, 0.5)).is_ok());
        assert!(matches!(
            SL2Element::new(Mat2::new(2.0, 0.0, 0.0, 0.6)),
            Err(Error::NotUnimodular(_))
        ));
        assert!(SL2Element::new(Mat2::new(1.0 + 1e-9, 0.0, 0.0, 1.0)).is_err());
        assert!(SL2Element::new(Mat2::new(f64::NAN, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn mobius_basics() {
        let z = p(0.3, 2.0);
        assert_eq!(mobius_apply(&Mat2::identity(), &z).unwrap(), z);
        let t = Mat2::new(1.0, 1.0, 0.0, 1.0);
        let w = mobius_apply(&t, &UhpPoint::i()).unwrap();
        assert_eq!((w.re(), w.im()), (1.0, 1.0));
        for k in 0..16 {
            let th = 0.4 * k as f64;
            let w = rotation_k(th).act(&UhpPoint::i());
            assert!((w.re()).abs() < 1e-15 && (w.im() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mobius_rejects_reflections() {
        assert!(matches!(
            mobius_apply(&reflection_v(0.3), &UhpPoint::i()),
            Err(Error::OrientationReversing(_))
        ));
        assert!(mobius_apply(&Mat2::new(0.0, 0.0, 0.0, 0.0), &UhpPoint::i()).is_err());
    }

    #[test]
    fn positive_determinant_other_than_one() {
        // 2·I acts as the identity.
        let z = p(-1.0, 0.25);
        let w = mobius_apply(&Mat2::new(2.0, 0.0, 0.0, 2.0), &z).unwrap();
        assert!((w.re() - z.re()).abs() < 1e-15 && (w.im() - z.im()).abs() < 1e-15);
    }

    #[test]
    fn x_of_z_examples() {
        assert_eq!(*x_of_z(&UhpPoint::<f64>::i()).mat(), Mat2::identity());
        let m = *x_of_z(&p(0.0, 2.0)).mat();
        let r2 = 2.0f64.sqrt();
        assert!(m.max_abs_diff(&Mat2::new(r2, 0.0, 0.0, 1.0 / r2)) < 1e-15);
        let z = p(-3.5, 0.07);
        let back = x_of_z(&z).act(&UhpPoint::i());
        assert!((back.to_complex() - z.to_complex()).norm() < 1e-12);
        assert!((x_of_z(&z).mat().det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(*rotation_k(0.0f64).mat(), Mat2::identity());
        let q = *rotation_k(FRAC_PI_2).mat();
        assert!(q.max_abs_diff(&Mat2::new(0.0, -1.0, 1.0, 0.0)) < 1e-15);
        let prod = rotation_k(0.7) * rotation_k(-0.7);
        assert!(prod.mat().max_abs_diff(&Mat2::identity()) < 1e-14);
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflection_v(0.0f64), Mat2::new(1.0, 0.0, 0.0, -1.0));
        for k in 0..12 {
            let v = reflection_v(0.55 * k as f64);
            assert!((v.det() + 1.0).abs() < 1e-15);
            assert!((v * v).max_abs_diff(&Mat2::identity()) < 1e-15);
        }
    }

    #[test]
    fn conjugate_action_examples() {
        let z = p(0.4, 1.7);
        let th: f64 = 1.1;
        let zc = z.to_complex();
        let expect = (zc * th.cos() + th.sin()) / (-zc * th.sin() + th.cos());
        let by_rot = conjugate_action(rotation_k(th).mat(), &z).unwrap();
        let by_refl = conjugate_action(&reflection_v(th), &z).unwrap();
        assert!((by_rot.to_complex() - expect).norm() < 1e-12);
        let mirrored = p(-z.re(), z.im());
        let expect_refl = rotation_k(th).act(&mirrored);
        assert!((by_refl.to_complex() - expect_refl.to_complex()).norm() < 1e-12);
        assert!((by_refl.to_complex() - Complex::new(-expect.re, expect.im)).norm() < 1e-12);
        assert!((by_refl.to_complex() - expect).norm() > 0.1);
        let same = conjugate_action(&Mat2::identity(), &z).unwrap();
        assert!((same.to_complex() - zc).norm() < 1e-14);
        // Equals k(−θ)·z.
        let minus = rotation_k(-th).act(&z);
        assert!((by_rot.to_complex() - minus.to_complex()).norm() < 1e-12);
    }

    #[test]
    fn conjugate_action_rejects_non_orthogonal() {
        let bad = Mat2::new(1.0, 0.1, 0.0, 1.0);
        assert!(matches!(
            conjugate_action(&bad, &UhpPoint::i()),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn iwasawa_examples() {
        let id = iwasawa_decompose(&SL2Element::<f64>::identity());
        assert_eq!((id.x, id.y, id.theta), (0.0, 1.0, 0.0));
        let c = iwasawa_decompose(&rotation_k(2.0f64));
        assert!(c.x.abs() < 1e-15 && (c.y - 1.0).abs() < 1e-15 && (c.theta - 2.0).abs() < 1e-14);
        let g = x_of_z(&p(1.5, 0.3)) * rotation_k(5.0);
        let c = iwasawa_decompose(&g);
        assert!((c.x - 1.5).abs() < 1e-14 && (c.y - 0.3).abs() < 1e-14);
        assert!((c.theta - 5.0).abs() < 1e-13);
        assert!(c.reconstruct().mat().max_abs_diff(g.mat()) < 1e-10);
    }

    #[test]
    fn haar_box_indicator() {
        // ∫₀¹∫₁² dx dy / y² = 1/2, and θ integrates to 1.
        let grid = HaarGrid {
            x0: 0.0,
            x1: 1.0,
            y0: 1.0,
            y1: 2.0,
            nx: 4,
            ny: 4000,
            ntheta: 8,
        };
        let v = haar_integrate(|_| 1.0f64, &grid).unwrap();
        assert!((v - 0.5).abs() < 1e-7, "{v}");
        let bad = HaarGrid { y0: 0.0, ..grid };
        assert!(haar_integrate(|_| 1.0f64, &bad).is_err());
    }

    #[test]
    fn unimodular_identity_is_exact() {
        let grid = HaarGrid {
            nx: 16,
            ny: 16,
            ntheta: 8,
            ..HaarGrid::default()
        };
        let f = |g: &SL2Element<f64>| {
            let m = g.mat();
            (-(m.a - 1.0).powi(2) - m.b.powi(2) - m.c.powi(2) - (m.d - 1.0).powi(2)).exp()
        };
        let (a, b) = check_unimodular(f, &Mat2::identity(), &grid).unwrap();
        assert_eq!(a, b);
        assert!(check_unimodular(f, &Mat2::new(2.0, 0.0, 0.0, 1.0), &grid).is_err());
    }
}
