//! Quadrature domains for integrals against `dλ = dx dy / y²`, and Monte Carlo
//! area estimates by rejection sampling from `λ`.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{euclid_circle_of_hyp_ball, hyp_distance, polar_point, HypBall, UhpPoint};
use crate::scalar::Real;

/// Midpoints of `n` equal cells of `[lo, hi]`, with the cell width.
pub(crate) fn midpoints<T: Real>(lo: T, hi: T, n: usize) -> (Vec<T>, T) {
    let h = (hi - lo) / T::from_usize(n).unwrap();
    let half = T::lit(0.5);
    let nodes = (0..n)
        .map(|k| lo + (T::from_usize(k).unwrap() + half) * h)
        .collect();
    (nodes, h)
}

/// Euclidean rectangle `[x0, x1] × [y0, y1]` with `y0 > 0`, integrated by the
/// midpoint rule in `(x, ln y)` with `nx × ny` cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypRect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Real> HypRect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T, nx: usize, ny: usize) -> Result<Self> {
        let r = Self {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.x1, self.y0, self.y1]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidDomain("non-finite rectangle bounds".into()));
        }
        if !(self.y0 > T::zero()) {
            return Err(Error::InvalidDomain(format!(
                "rectangle touches the boundary y = 0 (y0 = {})",
                self.y0
            )));
        }
        if !(self.x1 > self.x0 && self.y1 > self.y0) {
            return Err(Error::InvalidDomain("empty rectangle".into()));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidDomain("zero node count".into()));
        }
        Ok(())
    }

    /// `λ`-measure of the rectangle, `(x1 − x0)(1/y0 − 1/y1)`.
    pub fn measure(&self) -> T {
        (self.x1 - self.x0) * (self.y0.recip() - self.y1.recip())
    }

    pub fn contains(&self, z: &UhpPoint<T>) -> bool {
        z.re() >= self.x0 && z.re() <= self.x1 && z.im() >= self.y0 && z.im() <= self.y1
    }

    /// Largest `R` with `B(c, R)` inside the rectangle (negative if `c` is outside).
    pub fn inscribed_radius(&self, c: &UhpPoint<T>) -> T {
        let (x, y) = (c.re(), c.im());
        let by_x = ((x - self.x0).min(self.x1 - x) / y).asinh();
        let by_bottom = (y / self.y0).ln();
        let by_top = (self.y1 / y).ln();
        by_x.min(by_bottom).min(by_top)
    }

    fn for_each_node<F: FnMut(&UhpPoint<T>, T)>(&self, mut f: F) {
        let (xs, hx) = midpoints(self.x0, self.x1, self.nx);
        let (ts, ht) = midpoints(self.y0.ln(), self.y1.ln(), self.ny);
        for &t in &ts {
            let y = t.exp();
            // dx dy / y² = dx dt / y.
            let w = hx * ht / y;
            for &x in &xs {
                f(&UhpPoint::new_unchecked(x, y), w);
            }
        }
    }
}

/// Geodesic disk `B(center, radius)` in polar coordinates `(s, φ)` about its
/// centre, `dλ = sinh s ds dφ`: Gauss–Legendre in `s` with `n_radial` nodes,
/// midpoint rule in `φ` with `n_angular` nodes.
///
/// Centred at `i`, hyperbolic rotations about `i` act as shifts in `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicDisk<T> {
    pub center: UhpPoint<T>,
    pub radius: T,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl<T: Real> GeodesicDisk<T> {
    pub fn new(center: UhpPoint<T>, radius: T, n_radial: usize, n_angular: usize) -> Result<Self> {
        let d = Self {
            center,
            radius,
            n_radial,
            n_angular,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > T::zero()) {
            return Err(Error::InvalidDomain(format!(
                "disk radius must be positive, got {}",
                self.radius
            )));
        }
        if self.n_radial == 0 || self.n_angular == 0 {
            return Err(Error::InvalidDomain("zero node count".into()));
        }
        Ok(())
    }

    pub fn inscribed_radius(&self, c: &UhpPoint<T>) -> T {
        self.radius - hyp_distance(&self.center, c)
    }

    fn for_each_node<F: FnMut(&UhpPoint<T>, T)>(&self, mut f: F) {
        let (phis, hphi) = midpoints(T::zero(), T::TAU(), self.n_angular);
        let trig: Vec<(T, T)> = phis.iter().map(|p| p.sin_cos()).collect();
        let c = self.center;
        let half = self.radius / T::lit(2.0);
        for (x, wx) in radial_rule(self.n_radial) {
            let s = half * (T::one() + T::lit(x));
            let w = half * T::lit(wx) * hphi * s.sinh();
            let t = (s / T::lit(2.0)).tanh();
            for &(sin_phi, cos_phi) in &trig {
                f(&polar_point(&c, t, sin_phi, cos_phi), w);
            }
        }
    }
}

fn radial_rule(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n).expect("node count checked by validate");
    GaussLegendre::new(n)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (x, w))
        .collect()
}

/// A region of `ℍ²` together with a quadrature rule for it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain<T> {
    Rect(HypRect<T>),
    Disk(GeodesicDisk<T>),
}

impl<T: Real> Domain<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Rect(r) => r.validate(),
            Domain::Disk(d) => d.validate(),
        }
    }

    /// Largest radius `R` with `B(c, R)` inside the domain.
    pub fn inscribed_radius(&self, c: &UhpPoint<T>) -> T {
        match self {
            Domain::Rect(r) => r.inscribed_radius(c),
            Domain::Disk(d) => d.inscribed_radius(c),
        }
    }

    pub fn contains(&self, z: &UhpPoint<T>) -> bool {
        match self {
            Domain::Rect(r) => r.contains(z),
            Domain::Disk(d) => hyp_distance(&d.center, z) <= d.radius,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Domain::Rect(r) => r.nx * r.ny,
            Domain::Disk(d) => d.n_radial * d.n_angular,
        }
    }

    /// Typical hyperbolic spacing between neighbouring nodes.
    pub fn resolution(&self) -> T {
        match self {
            Domain::Rect(r) => (r.y1 / r.y0).ln() / T::from_usize(r.ny).unwrap(),
            Domain::Disk(d) => d.radius / T::from_usize(d.n_radial).unwrap(),
        }
    }

    /// Visits every node with its quadrature weight, in a fixed order.
    pub fn for_each_node<F: FnMut(&UhpPoint<T>, T)>(&self, f: F) {
        match self {
            Domain::Rect(r) => r.for_each_node(f),
            Domain::Disk(d) => d.for_each_node(f),
        }
    }

    pub fn nodes(&self) -> Vec<(UhpPoint<T>, T)> {
        let mut out = Vec::with_capacity(self.node_count());
        self.for_each_node(|z, w| out.push((*z, w)));
        out
    }

    /// `∫ g dλ` over the domain.
    pub fn integrate<F: FnMut(&UhpPoint<T>) -> T>(&self, mut g: F) -> T {
        let mut acc = T::zero();
        self.for_each_node(|z, w| acc = acc + w * g(z));
        acc
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate<T> {
    pub value: T,
    pub std_err: T,
    pub samples: usize,
}

impl<T: Real> McEstimate<T> {
    /// `|value − reference|` in units of the standard error.
    pub fn z_score(&self, reference: T) -> T {
        (self.value - reference).abs() / self.std_err
    }
}

/// Draws a point from `λ` restricted to `rect` (normalised).
fn sample_rect<T: Real, R: Rng + ?Sized>(rect: &HypRect<T>, rng: &mut R) -> UhpPoint<T> {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    let x = rect.x0 + (rect.x1 - rect.x0) * T::lit(u);
    // 1/y is uniform on [1/y1, 1/y0].
    let inv = rect.y1.recip() + (rect.y0.recip() - rect.y1.recip()) * T::lit(v);
    UhpPoint::new_unchecked(x, inv.recip())
}

/// `λ(region ∩ rect)` by rejection sampling: `samples` points are drawn from
/// `λ` on the rectangle and the accepted fraction is scaled by `λ(rect)`.
pub fn monte_carlo_area<T, F, R>(
    region: F,
    rect: &HypRect<T>,
    samples: usize,
    rng: &mut R,
) -> Result<McEstimate<T>>
where
    T: Real,
    F: Fn(&UhpPoint<T>) -> bool,
    R: Rng + ?Sized,
{
    rect.validate()?;
    if samples == 0 {
        return Err(Error::InvalidParameter("zero Monte Carlo samples".into()));
    }
    let hits = (0..samples)
        .filter(|_| region(&sample_rect(rect, rng)))
        .count();
    let n = T::from_usize(samples).unwrap();
    let frac = T::from_usize(hits).unwrap() / n;
    let m = rect.measure();
    Ok(McEstimate {
        value: m * frac,
        std_err: m * (frac * (T::one() - frac) / n).sqrt(),
        samples,
    })
}

/// Area of `ball` by stratified rejection sampling.
///
/// The vertical extent of the ball is cut into `strata` log-spaced slabs; each
/// slab gets the tightest Euclidean bounding box of the ball and
/// `samples_per_stratum` draws. Slabs keep the acceptance rate bounded below
/// even for very large balls, whose area concentrates near `y → 0`.
pub fn monte_carlo_ball_area<T, R>(
    ball: &HypBall<T>,
    strata: usize,
    samples_per_stratum: usize,
    rng: &mut R,
) -> Result<McEstimate<T>>
where
    T: Real,
    R: Rng + ?Sized,
{
    if strata == 0 {
        return Err(Error::InvalidParameter("zero strata".into()));
    }
    let (ec, er) = euclid_circle_of_hyp_ball(ball);
    let lo = ball.center().im() * (-ball.radius()).exp();
    let hi = ball.center().im() * ball.radius().exp();
    let (lnlo, lnhi) = (lo.ln(), hi.ln());
    let step = (lnhi - lnlo) / T::from_usize(strata).unwrap();
    let mut value = T::zero();
    let mut var = T::zero();
    for k in 0..strata {
        let ya = (lnlo + step * T::from_usize(k).unwrap()).exp();
        let yb = (lnlo + step * T::from_usize(k + 1).unwrap()).exp();
        let nearest = ec.im().max(ya).min(yb);
        let dy = nearest - ec.im();
        let half = (er * er - dy * dy).max(T::zero()).sqrt();
        // A hair of slack so rounding at the rim never clips the ball.
        let half = half * (T::one() + T::lit(1e-12)) + T::min_positive_value();
        let rect = HypRect {
            x0: ec.re() - half,
            x1: ec.re() + half,
            y0: ya,
            y1: yb,
            nx: 1,
            ny: 1,
        };
        let est = monte_carlo_area(|z| ball.contains(z), &rect, samples_per_stratum, rng)?;
        value = value + est.value;
        var = var + est.std_err * est.std_err;
    }
    Ok(McEstimate {
        value,
        std_err: var.sqrt(),
        samples: strata * samples_per_stratum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rectangle_touching_boundary_is_rejected() {
        assert!(HypRect::new(-1.0, 1.0, 0.0, 1.0, 4, 4).is_err());
        assert!(HypRect::new(-1.0, 1.0, -0.5, 1.0, 4, 4).is_err());
        assert!(HypRect::new(1.0, -1.0, 0.5, 1.0, 4, 4).is_err());
    }

    #[test]
    fn rectangle_measure_by_quadrature() {
        let r = HypRect::new(0.0, 1.0, 1.0, 2.0, 8, 2000).unwrap();
        let q = Domain::Rect(r).integrate(|_| 1.0f64);
        assert!((q - 0.5).abs() < 1e-7, "{q}");
        assert!((r.measure() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn disk_measure_by_quadrature() {
        let d = GeodesicDisk::new(UhpPoint::new(3.0, 0.1).unwrap(), 2.0, 1000, 4).unwrap();
        let q = Domain::Disk(d).integrate(|_| 1.0f64);
        let exact = 2.0 * std::f64::consts::PI * (2.0f64.cosh() - 1.0);
        assert!((q - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn inscribed_radius_of_rectangle() {
        let r = HypRect::new(-8.0, 8.0, (-4.0f64).exp(), 4.0f64.exp(), 1, 1).unwrap();
        let ri = r.inscribed_radius(&UhpPoint::i());
        assert!((ri - 8.0f64.asinh().min(4.0)).abs() < 1e-15);
        let ball = HypBall::new(UhpPoint::i(), ri).unwrap();
        let (c, rad) = euclid_circle_of_hyp_ball(&ball);
        assert!(c.im() + rad <= r.y1 * (1.0 + 1e-12));
        assert!(rad <= 8.0 * (1.0 + 1e-12));
    }

    #[test]
    fn monte_carlo_unit_ball_within_three_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ball = HypBall::new(UhpPoint::i(), 1.0).unwrap();
        let est = monte_carlo_ball_area(&ball, 32, 20_000, &mut rng).unwrap();
        assert!(est.z_score(ball.area()) < 3.0, "{est:?}");
        assert!(est.std_err / est.value < 2e-3);
    }

    #[test]
    fn monte_carlo_rejects_empty_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = HypRect::new(0.0, 1.0, 1.0, 2.0, 1, 1).unwrap();
        assert!(monte_carlo_area(|_: &UhpPoint<f64>| true, &r, 0, &mut rng).is_err());
    }
}
