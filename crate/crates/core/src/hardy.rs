//! `(1,∞)`-atoms on `ℍ²`, finite atomic decompositions, and their images
//! under Hausdorff operators with purely atomic kernels.
//!
//! An atom `a` supported in `B = B(c, r)` satisfies
//!
//! 1. `supp a ⊆ B`, with `r ≤ b` for an `H¹_b` atom,
//! 2. `‖a‖_∞ ≤ 1 / λ(B)`,
//! 3. `∫ a dλ = 0`.
//!
//! Atoms here are piecewise constant on annuli about `c`. Rotations about `i`
//! are isometries of `ℍ²` preserving `λ`, so they map atoms to atoms without
//! rescaling, and `Σ |coef|` of a decomposition is unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{disk_area, hyp_distance, rotate_about_i, GeometryAssumptions, HypBall, UhpPoint};
use crate::operators::{Decay, FieldFunction, KernelMeasure};
use crate::scalar::Real;

/// Relative tolerance on the sup-bound and zero-mean conditions.
pub const ATOM_TOL: f64 = 1e-9;

/// Smallest admissible annulus area in [`make_radial_atom`], as a fraction of
/// the ball area.
pub const MIN_ANNULUS_FRACTION: f64 = 1e-6;

/// Points at distance `s` from the atom centre with `inner ≤ s < outer`
/// carry `value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialPiece<T> {
    pub inner: T,
    pub outer: T,
    pub value: T,
}

impl<T: Real> RadialPiece<T> {
    pub fn area(&self) -> T {
        disk_area(self.outer) - disk_area(self.inner)
    }
}

/// Piecewise-constant radial function with a designated support ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom<T> {
    ball: HypBall<T>,
    pieces: Vec<RadialPiece<T>>,
}

impl<T: Real> Atom<T> {
    /// Pieces must have `0 ≤ inner < outer`, finite values, and must not
    /// overlap. They are stored sorted by `inner`; the atom conditions are
    /// left to [`atom_check`].
    pub fn new(ball: HypBall<T>, mut pieces: Vec<RadialPiece<T>>) -> Result<Self> {
        for p in &pieces {
            if !(p.inner >= T::zero() && p.inner < p.outer && p.outer.is_finite() && p.value.is_finite()) {
                return Err(Error::DegenerateAtom(format!(
                    "bad piece [{}, {}) with value {}",
                    p.inner, p.outer, p.value
                )));
            }
        }
        pieces.sort_by(|a, b| a.inner.partial_cmp(&b.inner).unwrap());
        if pieces.windows(2).any(|w| w[1].inner < w[0].outer) {
            return Err(Error::DegenerateAtom("overlapping pieces".into()));
        }
        Ok(Self { ball, pieces })
    }

    pub fn ball(&self) -> &HypBall<T> {
        &self.ball
    }

    pub fn pieces(&self) -> &[RadialPiece<T>] {
        &self.pieces
    }

    pub fn eval(&self, z: &UhpPoint<T>) -> T {
        let s = hyp_distance(&self.ball.center(), z);
        self.pieces
            .iter()
            .find(|p| p.inner <= s && s < p.outer)
            .map_or(T::zero(), |p| p.value)
    }

    /// `∫ a dλ` from the closed-form annulus areas.
    pub fn integral(&self) -> T {
        self.pieces.iter().map(|p| p.value * p.area()).sum()
    }

    pub fn sup(&self) -> T {
        self.pieces.iter().map(|p| p.value.abs()).fold(T::zero(), T::max)
    }

    fn support_radius(&self) -> T {
        self.pieces.last().map_or(T::zero(), |p| p.outer)
    }

    pub fn to_field(&self) -> FieldFunction<T> {
        let a = self.clone();
        let decay = Decay::Compact {
            center: self.ball.center(),
            inner: self.pieces.first().map_or(T::zero(), |p| p.inner),
            outer: self.support_radius(),
        };
        FieldFunction::new(move |z| a.eval(z), decay)
    }
}

/// Outcome of [`atom_check`], condition by condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AtomReport {
    pub radius: f64,
    pub b: f64,
    /// Pieces inside the ball and radius at most `b`.
    pub support_ok: bool,
    /// `max(0, ‖a‖_∞ λ(B) − 1)`.
    pub sup_residual: f64,
    pub sup_ok: bool,
    /// `|∫ a dλ| / ∫ |a| dλ`, or 0 for the zero function.
    pub mean_residual: f64,
    pub mean_ok: bool,
}

impl AtomReport {
    pub fn pass(&self) -> bool {
        self.support_ok && self.sup_ok && self.mean_ok
    }
}

/// Parameters of the Hardy space `H¹_b` and of the dilation constant
/// `D_{τ,b}`.
///
/// The Lipschitz constant `κ_ρ` of the induced maps and the lower bound `C₁`
/// on `mod A(u)` are both 1 here, since rotations about `i` are isometries
/// preserving `λ`; hence `τ = max(2, κ_ρ / C₁) = 2` is the natural choice.
/// The constant `γ_{τ,b}` comparing `H¹_{τb}` with `H¹_b` is not known in
/// closed form and is left as `None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyConfig<T> {
    pub b: T,
    pub tau: T,
    pub d_tau_b: T,
    pub gamma_tau_b: Option<T>,
}

impl<T: Real> HardyConfig<T> {
    pub fn new(assumptions: &GeometryAssumptions<T>) -> Result<Self> {
        let (b, tau) = (assumptions.b(), assumptions.tau());
        Ok(Self {
            b,
            tau,
            d_tau_b: estimate_d_tau_b(tau, b)?,
            gamma_tau_b: None,
        })
    }
}

impl<T: Real> Default for HardyConfig<T> {
    fn default() -> Self {
        Self::new(&GeometryAssumptions::default()).expect("default assumptions are valid")
    }
}

/// Checks the three atom conditions; failures are reported, not raised.
pub fn atom_check<T: Real>(a: &Atom<T>, cfg: &HardyConfig<T>) -> AtomReport {
    let tol = T::lit(ATOM_TOL);
    let r = a.ball.radius();
    let support_ok = a.support_radius() <= r * (T::one() + T::epsilon()) && r <= cfg.b;
    let sup_residual = (a.sup() * a.ball.area() - T::one()).max(T::zero());
    let mass: T = a.pieces.iter().map(|p| p.value.abs() * p.area()).sum();
    let mean_residual = if mass > T::zero() {
        a.integral().abs() / mass
    } else {
        T::zero()
    };
    AtomReport {
        radius: r.as_f64(),
        b: cfg.b.as_f64(),
        support_ok,
        sup_residual: sup_residual.as_f64(),
        sup_ok: sup_residual <= tol,
        mean_residual: mean_residual.as_f64(),
        mean_ok: mean_residual <= tol,
    }
}

/// Two-piece atom: `α` on `B(center, r_inner)` and `β` on the annulus
/// `r_inner ≤ s < r`, with `α A_in + β A_ann = 0`. The piece of smaller area
/// takes the cap `±1/λ(B(center, r))`; `α > 0`.
pub fn make_radial_atom<T: Real>(center: UhpPoint<T>, r: T, r_inner: T) -> Result<Atom<T>> {
    if !(r_inner > T::zero() && r_inner < r && r.is_finite()) {
        return Err(Error::DegenerateAtom(format!(
            "need 0 < r_inner < r, got r_inner = {r_inner}, r = {r}"
        )));
    }
    let ball = HypBall::new(center, r)?;
    let total = ball.area();
    let a_in = disk_area(r_inner);
    let a_ann = total - a_in;
    if a_ann < total * T::lit(MIN_ANNULUS_FRACTION) {
        return Err(Error::DegenerateAtom(format!(
            "annulus area {a_ann} is below {MIN_ANNULUS_FRACTION} of the ball area"
        )));
    }
    let cap = total.recip();
    let (alpha, beta) = if a_in <= a_ann {
        (cap, -cap * a_in / a_ann)
    } else {
        (cap * a_ann / a_in, -cap)
    };
    Atom::new(
        ball,
        vec![
            RadialPiece {
                inner: T::zero(),
                outer: r_inner,
                value: alpha,
            },
            RadialPiece {
                inner: r_inner,
                outer: r,
                value: beta,
            },
        ],
    )
}

/// `a ∘ k(−θ)`, the atom moved by the rotation `z ↦ k(θ)·z` about `i`.
///
/// The map is an isometry preserving `λ`, so the image ball has the same
/// radius and the pieces and values carry over unchanged.
pub fn atom_pushforward<T: Real>(a: &Atom<T>, theta: T) -> Atom<T> {
    let (s, c) = theta.sin_cos();
    let center = rotate_about_i(&a.ball.center(), c, -s);
    Atom {
        ball: HypBall::new(center, a.ball.radius()).expect("radius already validated"),
        pieces: a.pieces.clone(),
    }
}

/// Finite sum `Σ αⱼ aⱼ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AtomicDecomposition<T> {
    pub terms: Vec<(T, Atom<T>)>,
}

impl<T: Real> AtomicDecomposition<T> {
    pub fn new(terms: Vec<(T, Atom<T>)>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, z: &UhpPoint<T>) -> T {
        self.terms.iter().map(|(c, a)| *c * a.eval(z)).sum()
    }

    /// The represented function, supported in a ball about `i`.
    pub fn to_field(&self) -> FieldFunction<T> {
        let i = UhpPoint::i();
        let outer = self
            .terms
            .iter()
            .map(|(_, a)| hyp_distance(&a.ball.center(), &i) + a.support_radius())
            .fold(T::zero(), T::max);
        let d = self.clone();
        FieldFunction::new(
            move |z| d.eval(z),
            Decay::Compact {
                center: i,
                inner: T::zero(),
                outer,
            },
        )
    }
}

/// `Σ |αⱼ|`, an upper bound for the `H¹` norm of the represented function.
pub fn h1_upper_bound<T: Real>(d: &AtomicDecomposition<T>) -> T {
    d.terms.iter().map(|(c, _)| c.abs()).sum()
}

/// Decomposition of `H g` for `g = Σ αⱼ aⱼ` and a purely atomic kernel
/// `Σ wᵢ δ_{θᵢ}`: the terms `(αⱼ wᵢ, aⱼ ∘ k(−θᵢ))`, ordered by kernel atom
/// and then by term.
pub fn hausdorff_on_decomposition<T: Real>(
    km: &KernelMeasure<T>,
    d: &AtomicDecomposition<T>,
) -> Result<AtomicDecomposition<T>> {
    if !km.is_atomic() {
        return Err(Error::NotAtomic);
    }
    let terms = km
        .atoms()
        .iter()
        .flat_map(|&(theta, w)| {
            d.terms
                .iter()
                .map(move |(alpha, a)| (*alpha * w, atom_pushforward(a, theta)))
        })
        .collect();
    Ok(AtomicDecomposition { terms })
}

/// Number of radii in the grid of [`estimate_d_tau_b`].
pub const D_TAU_B_GRID: usize = 256;

/// `sup_{0 < r ≤ b} λ(B(·, τr)) / λ(B(·, r))` over a log-spaced grid of
/// radii from `10⁻⁶ b` to `b`, with closed-form ball areas.
pub fn estimate_d_tau_b<T: Real>(tau: T, b: T) -> Result<T> {
    if !(tau >= T::one() && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be at least 1, got {tau}")));
    }
    if !(b > T::zero() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("b must be positive, got {b}")));
    }
    if tau == T::one() {
        return Ok(T::one());
    }
    let lo = (b * T::lit(1e-6)).ln();
    let step = (b.ln() - lo) / T::from_usize(D_TAU_B_GRID - 1).unwrap();
    Ok((0..D_TAU_B_GRID)
        .map(|k| {
            let r = if k == D_TAU_B_GRID - 1 {
                b
            } else {
                (lo + step * T::from_usize(k).unwrap()).exp()
            };
            disk_area(tau * r) / disk_area(r)
        })
        .fold(T::zero(), T::max))
}

/// JSON form of an atom: either the two-piece constructor
/// `{"center": [x, y], "radius": r, "inner_radius": r_in}` or explicit pieces
/// `{"center": [x, y], "radius": r, "pieces": [{"inner": 0, "outer": r1, "value": v}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomSpec {
    Radial {
        center: [f64; 2],
        radius: f64,
        inner_radius: f64,
    },
    Pieces {
        center: [f64; 2],
        radius: f64,
        pieces: Vec<RadialPiece<f64>>,
    },
}

impl AtomSpec {
    pub fn build<T: Real>(&self) -> Result<Atom<T>> {
        match self {
            AtomSpec::Radial {
                center,
                radius,
                inner_radius,
            } => make_radial_atom(point(center)?, T::lit(*radius), T::lit(*inner_radius)),
            AtomSpec::Pieces {
                center,
                radius,
                pieces,
            } => Atom::new(
                HypBall::new(point(center)?, T::lit(*radius))?,
                pieces
                    .iter()
                    .map(|p| RadialPiece {
                        inner: T::lit(p.inner),
                        outer: T::lit(p.outer),
                        value: T::lit(p.value),
                    })
                    .collect(),
            ),
        }
    }

    pub fn from_atom<T: Real>(a: &Atom<T>) -> Self {
        let c = a.ball.center();
        AtomSpec::Pieces {
            center: [c.re().as_f64(), c.im().as_f64()],
            radius: a.ball.radius().as_f64(),
            pieces: a
                .pieces
                .iter()
                .map(|p| RadialPiece {
                    inner: p.inner.as_f64(),
                    outer: p.outer.as_f64(),
                    value: p.value.as_f64(),
                })
                .collect(),
        }
    }
}

fn point<T: Real>(c: &[f64; 2]) -> Result<UhpPoint<T>> {
    UhpPoint::new(T::lit(c[0]), T::lit(c[1]))
}

/// One term `{"coef": α, "atom": {...}}` of a decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coef: f64,
    pub atom: AtomSpec,
}

/// JSON form of a decomposition: `{"terms": [{"coef": α, "atom": {...}}, ...]}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSpec {
    pub terms: Vec<TermSpec>,
}

impl DecompositionSpec {
    pub fn build<T: Real>(&self) -> Result<AtomicDecomposition<T>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((T::lit(t.coef), t.atom.build()?)))
            .collect::<Result<_>>()?;
        Ok(AtomicDecomposition { terms })
    }

    pub fn from_decomposition<T: Real>(d: &AtomicDecomposition<T>) -> Self {
        Self {
            terms: d
                .terms
                .iter()
                .map(|(c, a)| TermSpec {
                    coef: c.as_f64(),
                    atom: AtomSpec::from_atom(a),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::doubling_ratio;
    use crate::operators::kernel_l1_norm;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn p(re: f64, im: f64) -> UhpPoint<f64> {
        UhpPoint::new(re, im).unwrap()
    }

    #[test]
    fn radial_atom_passes() {
        let cfg = HardyConfig::default();
        let a = make_radial_atom(UhpPoint::<f64>::i(), 0.5, 0.25).unwrap();
        let r = atom_check(&a, &cfg);
        assert!(r.pass(), "{r:?}");
        assert!(r.sup_residual < 1e-9 && r.mean_residual < 1e-9);
        assert!((a.sup() * a.ball().area() - 1.0).abs() < 1e-12);
        // Large inner ball: the annulus carries the cap.
        let b = make_radial_atom(p(2.0, 0.3), 0.9, 0.8).unwrap();
        assert!(atom_check(&b, &cfg).pass());
        assert!((b.pieces()[1].value.abs() * b.ball().area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn failing_conditions_are_reported() {
        let cfg = HardyConfig::default();
        let ball = HypBall::new(UhpPoint::i(), 0.5).unwrap();
        let positive = Atom::new(
            ball,
            vec![RadialPiece {
                inner: 0.0,
                outer: 0.5,
                value: 0.5 / ball.area(),
            }],
        )
        .unwrap();
        let r = atom_check(&positive, &cfg);
        assert!(r.support_ok && r.sup_ok && !r.mean_ok);
        let wide = make_radial_atom(UhpPoint::i(), 2.0 * cfg.b, 0.5).unwrap();
        let r = atom_check(&wide, &cfg);
        assert!(!r.support_ok && r.sup_ok && r.mean_ok);
        let spill = Atom::new(
            ball,
            vec![RadialPiece {
                inner: 0.4,
                outer: 0.6,
                value: 0.0,
            }],
        )
        .unwrap();
        assert!(!atom_check(&spill, &cfg).support_ok);
    }

    #[test]
    fn degenerate_radii_are_rejected() {
        assert!(make_radial_atom(UhpPoint::i(), 0.5, 0.5).is_err());
        assert!(make_radial_atom(UhpPoint::i(), 0.5, 0.0).is_err());
        assert!(make_radial_atom(UhpPoint::i(), 0.5, 0.5 - 1e-9).is_err());
        assert!(make_radial_atom(UhpPoint::i(), 0.5, 0.49).is_ok());
    }

    #[test]
    fn pushforward_examples() {
        let cfg = HardyConfig::default();
        let a = make_radial_atom(p(0.3, 1.2), 0.5, 0.25).unwrap();
        assert_eq!(atom_pushforward(&a, 0.0), a);
        for k in 0..64 {
            let th = 2.0 * PI * k as f64 / 64.0;
            let b = atom_pushforward(&a, th);
            let (ra, rb) = (atom_check(&a, &cfg), atom_check(&b, &cfg));
            assert!(rb.pass());
            assert!((ra.mean_residual - rb.mean_residual).abs() < 1e-15);
            let z = p(-0.4, 0.9);
            let rotated = crate::geometry::rotate_about_i(&z, th.cos(), th.sin());
            assert!((b.eval(&z) - a.eval(&rotated)).abs() < 1e-12 || {
                // Points on a piece boundary may fall either way.
                let s = hyp_distance(&a.ball().center(), &rotated);
                (s - 0.25).abs() < 1e-9 || (s - 0.5).abs() < 1e-9
            });
        }
    }

    #[test]
    fn h1_bounds() {
        let a = make_radial_atom(UhpPoint::i(), 0.5, 0.25).unwrap();
        let one = AtomicDecomposition::new(vec![(1.0, a.clone())]);
        assert_eq!(h1_upper_bound(&one), 1.0);
        let three = AtomicDecomposition::new(vec![(0.5, a.clone()), (-0.25, a.clone()), (0.25, a.clone())]);
        assert_eq!(h1_upper_bound(&three), 1.0);
        assert_eq!(h1_upper_bound(&AtomicDecomposition::<f64>::default()), 0.0);
        let km = KernelMeasure::atomic(vec![(1.3, 1.0)]).unwrap();
        let rotated = hausdorff_on_decomposition(&km, &three).unwrap();
        assert_eq!(h1_upper_bound(&rotated), h1_upper_bound(&three));
    }

    #[test]
    fn decomposition_images() {
        let cfg = HardyConfig::default();
        let a = make_radial_atom(UhpPoint::i(), 0.5, 0.25).unwrap();
        let single = AtomicDecomposition::new(vec![(1.0, a.clone())]);
        let km = KernelMeasure::atomic(vec![(0.0, 0.3), (FRAC_PI_2, 0.7)]).unwrap();
        let out = hausdorff_on_decomposition(&km, &single).unwrap();
        assert!((h1_upper_bound(&out) - 1.0).abs() < 1e-15);
        let b = make_radial_atom(p(1.0, 0.5), 0.8, 0.3).unwrap();
        let d = AtomicDecomposition::new(vec![(1.0, a), (-2.0, b)]);
        let km = KernelMeasure::atomic(vec![(0.0, 0.5), (FRAC_PI_3, -0.5)]).unwrap();
        let out = hausdorff_on_decomposition(&km, &d).unwrap();
        assert_eq!(out.terms.len(), 4);
        assert!((h1_upper_bound(&out) - kernel_l1_norm(&km) * 3.0).abs() < 1e-15);
        assert!((h1_upper_bound(&out) - 3.0).abs() < 1e-15);
        assert!(out.terms.iter().all(|(_, a)| atom_check(a, &cfg).pass()));
        let dense = KernelMeasure::cesaro_uniform(16).unwrap();
        assert!(matches!(hausdorff_on_decomposition(&dense, &d), Err(Error::NotAtomic)));
    }

    #[test]
    fn dilation_constant() {
        for b in [0.3f64, 1.0, 2.5] {
            let d = estimate_d_tau_b(2.0, b).unwrap();
            assert!((d - doubling_ratio(b).unwrap()).abs() < 1e-12 * d);
        }
        assert!((estimate_d_tau_b(2.0, 1.0).unwrap() - 4.0 * 0.5f64.cosh().powi(2)).abs() < 1e-12);
        assert_eq!(estimate_d_tau_b(1.0, 3.0).unwrap(), 1.0);
        assert!(estimate_d_tau_b(10.0f64, 10.0).unwrap().is_finite());
        assert!(estimate_d_tau_b(2.0, 10.0).unwrap() > 10.0 * estimate_d_tau_b(2.0, 1.0).unwrap());
        assert!(estimate_d_tau_b(0.5, 1.0).is_err());
        assert!(estimate_d_tau_b(2.0, 0.0).is_err());
        let cfg = HardyConfig::<f64>::default();
        assert!(cfg.d_tau_b >= 1.0 && cfg.gamma_tau_b.is_none());
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"terms": [
            {"coef": 1.0, "atom": {"center": [0.0, 1.0], "radius": 0.5, "inner_radius": 0.25}},
            {"coef": -2.0, "atom": {"center": [1.0, 0.5], "radius": 0.8,
                "pieces": [{"inner": 0.0, "outer": 0.8, "value": 0.0}]}}
        ]}"#;
        let spec: DecompositionSpec = serde_json::from_str(json).unwrap();
        let d: AtomicDecomposition<f64> = spec.build().unwrap();
        assert_eq!(d.terms.len(), 2);
        let again: AtomicDecomposition<f64> = DecompositionSpec::from_decomposition(&d).build().unwrap();
        assert_eq!(again, d);
    }
}
