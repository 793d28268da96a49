//! `Lᵖ(ℍ², λ)` norms and numerical checks of `‖H f‖_p ≤ ‖Φ‖₁ ‖f‖_p`.
//!
//! Integrals run over a bounded [`Domain`]; the decay envelope attached to each
//! [`FieldFunction`] certifies that the part of `∫ |f|ᵖ dλ` left outside is
//! below [`TAIL_BOUND`].

use std::fmt;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::UhpPoint;
use crate::operators::{hausdorff_field, kernel_l1_norm, Decay, FieldFunction, KernelMeasure};
use crate::optimize::nelder_mead;
use crate::quadrature::{Domain, GeodesicDisk};
use crate::scalar::{FieldValue, Real};

/// Relative slack on both sides of every norm inequality.
pub const QUAD_EPSILON: f64 = 1e-3;

/// Largest admissible bound on the truncated part of `∫ |f|ᵖ dλ`.
pub const TAIL_BOUND: f64 = 1e-9;

/// Exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Exponent<T> {
    /// `p = +∞` maps to [`Exponent::Infinity`]; `p < 1` and NaN are rejected.
    pub fn new(p: T) -> Result<Self> {
        if p.is_nan() || p < T::one() {
            return Err(Error::InvalidParameter(format!("p must be at least 1, got {p}")));
        }
        Ok(if p.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn value(&self) -> T {
        match *self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => T::infinity(),
        }
    }
}

impl<T: Real> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// Finite exponents serialise as numbers, `∞` as the string `"inf"`.
impl<T: Real> Serialize for Exponent<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(p.as_f64()),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for Exponent<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Num(p) => p,
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "∞") => f64::INFINITY,
            Raw::Text(t) => return Err(serde::de::Error::custom(format!("bad exponent {t:?}"))),
        };
        Exponent::new(T::lit(p)).map_err(serde::de::Error::custom)
    }
}

/// Exponent and integration domain of an `Lᵖ` norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpConfig<T> {
    pub p: Exponent<T>,
    pub domain: Domain<T>,
}

impl<T: Real> LpConfig<T> {
    pub fn new(p: Exponent<T>, domain: Domain<T>) -> Result<Self> {
        domain.validate()?;
        Ok(Self { p, domain })
    }

    /// `p` on [`default_domain`].
    pub fn with_default_domain(p: Exponent<T>) -> Self {
        Self {
            p,
            domain: default_domain(),
        }
    }
}

/// Radius of [`default_domain`].
pub const DEFAULT_DISK_RADIUS: f64 = 6.5;
pub const DEFAULT_RADIAL_NODES: usize = 160;
pub const DEFAULT_ANGULAR_NODES: usize = 192;

/// Geodesic disk about `i` of radius 6.5 with 160 × 192 nodes.
pub fn default_domain<T: Real>() -> Domain<T> {
    Domain::Disk(GeodesicDisk {
        center: UhpPoint::i(),
        radius: T::lit(DEFAULT_DISK_RADIUS),
        n_radial: DEFAULT_RADIAL_NODES,
        n_angular: DEFAULT_ANGULAR_NODES,
    })
}

/// Bound on the part of `∫ |f|ᵖ dλ` (for `p = ∞`, of `|f|`) outside the domain.
///
/// Fails when the envelope is missing or reaches past the domain boundary.
pub fn tail_bound<T: Real>(decay: &Decay<T>, p: &Exponent<T>, domain: &Domain<T>) -> Result<T> {
    match *decay {
        Decay::Unbounded => Err(Error::InvalidParameter(
            "function has no decay envelope; its norm cannot be certified".into(),
        )),
        Decay::Compact { center, outer, .. } => {
            let r = domain.inscribed_radius(&center);
            if outer <= r {
                Ok(T::zero())
            } else {
                Err(Error::SupportOutsideDomain(format!(
                    "support radius {outer} exceeds inscribed radius {r}"
                )))
            }
        }
        Decay::Gaussian {
            center,
            outer,
            sigma,
            amplitude,
            ..
        } => {
            let r = domain.inscribed_radius(&center);
            if r <= outer {
                return Err(Error::SupportOutsideDomain(format!(
                    "decay band reaches {outer}, inscribed radius is {r}"
                )));
            }
            let two_s2 = T::lit(2.0) * sigma * sigma;
            let excess = r - outer;
            Ok(match *p {
                Exponent::Infinity => amplitude * (-(excess * excess) / two_s2).exp(),
                Exponent::Finite(p) => {
                    // ∫_R^∞ Aᵖ e^{−a(s−outer)²} 2π sinh s ds ≤ π Aᵖ ∫_R^∞ e^{s − a(s−outer)²} ds,
                    // a Gaussian integral after completing the square.
                    let a = p / two_s2;
                    let m = outer + (T::lit(2.0) * a).recip();
                    let x = (a.sqrt() * (r - m)).as_f64();
                    let peak = outer + (T::lit(4.0) * a).recip();
                    T::PI()
                        * amplitude.powf(p)
                        * peak.exp()
                        * T::lit(0.5)
                        * (T::PI() / a).sqrt()
                        * T::lit(libm::erfc(x))
                }
            })
        }
    }
}

fn check_fit<T: Real>(decay: &Decay<T>, p: &Exponent<T>, domain: &Domain<T>) -> Result<()> {
    domain.validate()?;
    let tail = tail_bound(decay, p, domain)?;
    if tail <= T::lit(TAIL_BOUND) {
        Ok(())
    } else {
        Err(Error::SupportOutsideDomain(format!(
            "tail bound {:e} for p = {p} exceeds {TAIL_BOUND:e}",
            tail.as_f64()
        )))
    }
}

/// Sampled moduli of a field on the nodes of a domain.
struct Samples<T> {
    values: Vec<T>,
    weights: Vec<T>,
    points: Vec<UhpPoint<T>>,
}

fn sample<T: Real, V: FieldValue<T>>(f: &FieldFunction<T, V>, domain: &Domain<T>) -> Result<(Samples<T>, Vec<V>)> {
    let n = domain.node_count();
    let mut raw = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    domain.for_each_node(|z, w| {
        raw.push(f.eval(z));
        weights.push(w);
        points.push(*z);
    });
    let s = moduli(&raw, weights, points)?;
    Ok((s, raw))
}

fn moduli<T: Real, V: FieldValue<T>>(raw: &[V], weights: Vec<T>, points: Vec<UhpPoint<T>>) -> Result<Samples<T>> {
    let values: Vec<T> = raw.iter().map(|v| v.modulus()).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("field value at a quadrature node".into()));
    }
    Ok(Samples {
        values,
        weights,
        points,
    })
}

/// `H f` at the nodes of a disk centred at `i`, from the values of `f` there.
///
/// In polar coordinates about `i`, `z ↦ k(−θ)·z` is the shift `φ ↦ φ + 2θ`.
/// On each ring `H f` is therefore the trigonometric interpolant of `f`
/// with Fourier coefficients multiplied by `K_m = Σ_j w_j e^{2imθ_j}`, the sum
/// running over the kernel's quadrature nodes.
fn ring_filtered<T: Real, V: FieldValue<T>>(km: &KernelMeasure<T>, f_vals: &[V], disk: &GeodesicDisk<T>) -> Vec<V> {
    let n = disk.n_angular;
    let nodes = km.quadrature_nodes();
    let multipliers: Vec<Complex<T>> = (0..n)
        .map(|k| {
            if 2 * k == n {
                // Nyquist mode: keep the real part so real data stays real.
                let m = T::from_usize(n).unwrap();
                let re: T = nodes.iter().map(|&(t, w)| w * (m * t).cos()).sum();
                return Complex::new(re, T::zero());
            }
            let m = if 2 * k < n {
                T::from_usize(k).unwrap()
            } else {
                -T::from_usize(n - k).unwrap()
            };
            nodes
                .iter()
                .map(|&(t, w)| {
                    let (s, c) = (T::lit(2.0) * m * t).sin_cos();
                    Complex::new(w * c, w * s)
                })
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        })
        .collect();
    let mut planner = FftPlanner::<T>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let scale = T::from_usize(n).unwrap().recip();
    let mut out = Vec::with_capacity(f_vals.len());
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
    for ring in f_vals.chunks(n) {
        for (b, v) in buf.iter_mut().zip(ring) {
            *b = v.into_complex();
        }
        forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&multipliers) {
            *b = *b * *k * scale;
        }
        inverse.process(&mut buf);
        out.extend(buf.iter().map(|c| V::from_complex(*c)));
    }
    out
}

/// Largest `|f|` near the best node, polished by a simplex search in `(x, ln y)`.
fn sup_norm<T: Real, V: FieldValue<T>>(
    f: &FieldFunction<T, V>,
    s: &Samples<T>,
    domain: &Domain<T>,
) -> T {
    let Some((k, &best)) = s
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
    else {
        return T::zero();
    };
    if best == T::zero() {
        return best;
    }
    let z0 = s.points[k];
    let m = nelder_mead(
        |[x, t]: [T; 2]| {
            let z = UhpPoint::new(x, t.exp());
            match z {
                Ok(z) if domain.contains(&z) => -f.eval(&z).modulus(),
                _ => T::infinity(),
            }
        },
        [z0.re(), z0.im().ln()],
        domain.resolution() * z0.im().min(T::one()),
        best * T::lit(1e-13),
        400,
    );
    best.max(-m.value)
}

fn finite_norm<T: Real>(s: &Samples<T>, p: T) -> T {
    let integral: T = s
        .values
        .iter()
        .zip(&s.weights)
        .map(|(v, w)| *w * v.powf(p))
        .sum();
    integral.powf(p.recip())
}

fn norm_from_samples<T: Real, V: FieldValue<T>>(
    f: &FieldFunction<T, V>,
    s: &Samples<T>,
    p: &Exponent<T>,
    domain: &Domain<T>,
) -> T {
    match *p {
        Exponent::Finite(p) if p == T::one() => s.values.iter().zip(&s.weights).map(|(v, w)| *v * *w).sum(),
        Exponent::Finite(p) => finite_norm(s, p),
        Exponent::Infinity => sup_norm(f, s, domain),
    }
}

/// `‖f‖_p = (∫ |f|ᵖ dλ)^{1/p}` over the configured domain.
///
/// For `p = ∞` the value is the largest `|f|` over the quadrature nodes,
/// locally polished by a simplex search; it approximates the essential
/// supremum from below.
pub fn lp_norm<T: Real, V: FieldValue<T>>(f: &FieldFunction<T, V>, cfg: &LpConfig<T>) -> Result<T> {
    check_fit(f.decay(), &cfg.p, &cfg.domain)?;
    let (s, _) = sample(f, &cfg.domain)?;
    Ok(norm_from_samples(f, &s, &cfg.p, &cfg.domain))
}

/// `‖f‖_p` for several exponents, sampling `f` once.
pub fn lp_norms<T: Real, V: FieldValue<T>>(
    f: &FieldFunction<T, V>,
    ps: &[Exponent<T>],
    domain: &Domain<T>,
) -> Result<Vec<T>> {
    for p in ps {
        check_fit(f.decay(), p, domain)?;
    }
    let (s, _) = sample(f, domain)?;
    Ok(ps.iter().map(|p| norm_from_samples(f, &s, p, domain)).collect())
}

/// Outcome of one check of `‖H f‖_p ≤ ‖Φ‖₁ ‖f‖_p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpBoundReport {
    pub p: Exponent<f64>,
    pub norm_f: f64,
    pub norm_hf: f64,
    pub kernel_l1: f64,
    /// `‖Φ‖₁ ‖f‖_p`.
    pub bound: f64,
    /// `‖H f‖_p / ‖f‖_p`, or 0 when `‖f‖_p = 0`.
    pub ratio: f64,
    /// `‖H f‖_p ≤ (1 + QUAD_EPSILON) · bound`.
    pub pass: bool,
}

impl LpBoundReport {
    fn new<T: Real>(p: &Exponent<T>, norm_f: T, norm_hf: T, l1: T) -> Self {
        let bound = l1 * norm_f;
        let ratio = if norm_f > T::zero() {
            norm_hf / norm_f
        } else {
            T::zero()
        };
        Self {
            p: match *p {
                Exponent::Finite(p) => Exponent::Finite(p.as_f64()),
                Exponent::Infinity => Exponent::Infinity,
            },
            norm_f: norm_f.as_f64(),
            norm_hf: norm_hf.as_f64(),
            kernel_l1: l1.as_f64(),
            bound: bound.as_f64(),
            ratio: ratio.as_f64(),
            pass: norm_hf <= (T::one() + T::lit(QUAD_EPSILON)) * bound,
        }
    }
}

/// Checks `‖H f‖_p ≤ ‖Φ‖₁ ‖f‖_p` for one exponent.
pub fn verify_lp_bound<T: Real, V: FieldValue<T>>(
    km: &KernelMeasure<T>,
    f: &FieldFunction<T, V>,
    cfg: &LpConfig<T>,
) -> Result<LpBoundReport> {
    Ok(verify_lp_bounds(km, f, &[cfg.p], &cfg.domain)?.remove(0))
}

/// Checks `‖H f‖_p ≤ ‖Φ‖₁ ‖f‖_p` for several exponents, sampling `f` and
/// `H f` once.
///
/// On a geodesic disk centred at `i` the samples of `H f` come from those of
/// `f` ring by ring through the FFT; elsewhere `H f` is evaluated pointwise.
pub fn verify_lp_bounds<T: Real, V: FieldValue<T>>(
    km: &KernelMeasure<T>,
    f: &FieldFunction<T, V>,
    ps: &[Exponent<T>],
    domain: &Domain<T>,
) -> Result<Vec<LpBoundReport>> {
    let hf = hausdorff_field(km, f);
    for p in ps {
        check_fit(f.decay(), p, domain)?;
        check_fit(hf.decay(), p, domain)?;
    }
    let l1 = kernel_l1_norm(km);
    let (sf, f_vals) = sample(f, domain)?;
    let shf = match domain {
        Domain::Disk(d) if d.center == UhpPoint::i() => {
            let hf_vals = ring_filtered(km, &f_vals, d);
            moduli(&hf_vals, sf.weights.clone(), sf.points.clone())?
        }
        _ => sample(&hf, domain)?.0,
    };
    Ok(ps
        .iter()
        .map(|p| {
            let nf = norm_from_samples(f, &sf, p, domain);
            let nhf = norm_from_samples(&hf, &shf, p, domain);
            LpBoundReport::new(p, nf, nhf, l1)
        })
        .collect())
}

/// `max ‖H f‖_p / ‖f‖_p` over a family: a lower bound on `‖H‖_{Lᵖ→Lᵖ}`.
///
/// Rejects an empty family and members of zero norm.
pub fn operator_norm_lower_bound<T: Real, V: FieldValue<T>>(
    km: &KernelMeasure<T>,
    p: Exponent<T>,
    family: &[FieldFunction<T, V>],
    domain: &Domain<T>,
) -> Result<T> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut best = T::zero();
    for f in family {
        let r = verify_lp_bounds(km, f, &[p], domain)?.remove(0);
        if r.norm_f <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        best = best.max(T::lit(r.ratio));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HypBall;
    use crate::quadrature::{GeodesicDisk, HypRect};

    fn disk(r: f64, nr: usize, na: usize) -> Domain<f64> {
        Domain::Disk(GeodesicDisk::new(UhpPoint::i(), r, nr, na).unwrap())
    }

    fn p(re: f64, im: f64) -> UhpPoint<f64> {
        UhpPoint::new(re, im).unwrap()
    }

    #[test]
    fn exponent_parsing() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(Exponent::new(f64::INFINITY).unwrap().is_infinite());
        let e: Vec<Exponent<f64>> = serde_json::from_str(r#"[1, 2.5, "inf"]"#).unwrap();
        assert_eq!(e, vec![Exponent::Finite(1.0), Exponent::Finite(2.5), Exponent::Infinity]);
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"[1.0,2.5,"inf"]"#);
        assert!(serde_json::from_str::<Exponent<f64>>("0.2").is_err());
    }

    #[test]
    fn indicator_norm_is_ball_area() {
        let f = FieldFunction::ball_indicator(HypBall::new(UhpPoint::i(), 1.0).unwrap());
        let cfg = LpConfig::new(Exponent::Finite(1.0), disk(1.0, 256, 64)).unwrap();
        let v = lp_norm(&f, &cfg).unwrap();
        assert!((v - 2.0 * std::f64::consts::PI * (1f64.cosh() - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn homogeneity_and_refinement() {
        let f = FieldFunction::gaussian_bump(p(0.3, 1.4), 0.5, 1.0).unwrap();
        let cfg = LpConfig::new(Exponent::Finite(2.0), disk(6.0, 160, 160)).unwrap();
        let a = lp_norm(&f, &cfg).unwrap();
        let b = lp_norm(&f.scaled(-3.0), &cfg).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
        let fine = LpConfig::new(Exponent::Finite(2.0), disk(6.0, 640, 640)).unwrap();
        let c = lp_norm(&f, &fine).unwrap();
        assert!(((a - c) / c).abs() < 1e-6, "{a} vs {c}");
    }

    #[test]
    fn support_and_decay_are_enforced() {
        let f = FieldFunction::ball_indicator(HypBall::new(p(0.0, 3.0), 1.0).unwrap());
        let cfg = LpConfig::new(Exponent::Finite(1.0), disk(1.5, 16, 16)).unwrap();
        assert!(matches!(lp_norm(&f, &cfg), Err(Error::SupportOutsideDomain(_))));
        let g = FieldFunction::gaussian_bump(UhpPoint::i(), 1.0, 1.0).unwrap();
        assert!(matches!(lp_norm(&g, &cfg), Err(Error::SupportOutsideDomain(_))));
        let cfg = LpConfig::new(Exponent::Finite(1.0), disk(10.0, 16, 16)).unwrap();
        assert!(lp_norm(&FieldFunction::<f64>::re_part(), &cfg).is_err());
    }

    #[test]
    fn rectangle_domain_norm() {
        let f = FieldFunction::gaussian_bump(UhpPoint::i(), 0.4, 1.0).unwrap();
        let rect = HypRect::new(-60.0, 60.0, (-7.0f64).exp(), 7f64.exp(), 1200, 700).unwrap();
        let cfg = LpConfig::new(Exponent::Finite(2.0), Domain::Rect(rect)).unwrap();
        let a = lp_norm(&f, &cfg).unwrap();
        let b = lp_norm(&f, &LpConfig::new(Exponent::Finite(2.0), disk(6.0, 256, 64)).unwrap()).unwrap();
        assert!(((a - b) / b).abs() < 1e-3, "{a} vs {b}");
    }

    #[test]
    fn sup_norm_is_polished() {
        let f = FieldFunction::gaussian_bump(p(0.123, 1.7), 0.5, 2.0).unwrap();
        let cfg = LpConfig::new(Exponent::Infinity, disk(6.0, 24, 24)).unwrap();
        let v = lp_norm(&f, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn single_atom_is_tight() {
        let km = KernelMeasure::atomic(vec![(0.7, 1.0)]).unwrap();
        let f = FieldFunction::gaussian_bump(p(0.5, 0.8), 0.45, 1.0).unwrap();
        let ps = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Infinity];
        for r in verify_lp_bounds(&km, &f, &ps, &disk(6.5, 192, 192)).unwrap() {
            assert!(r.pass);
            assert!((r.ratio - 1.0).abs() < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn ring_filter_matches_pointwise_operator() {
        let km = KernelMeasure::new(
            vec![crate::operators::DensityTerm::Cos {
                amplitude: 0.3,
                frequency: 2,
                phase: 0.4,
            }],
            vec![(0.3, 1.0), (2.5, -0.4)],
            512,
        )
        .unwrap();
        let f = FieldFunction::gaussian_bump(p(0.4, 1.6), 0.5, 1.0).unwrap();
        let dom = disk(4.0, 40, 128);
        let Domain::Disk(d) = dom else { unreachable!() };
        let (_, f_vals) = sample(&f, &dom).unwrap();
        let fast = ring_filtered(&km, &f_vals, &d);
        let hf = hausdorff_field(&km, &f);
        let worst = dom
            .nodes()
            .iter()
            .zip(&fast)
            .map(|((z, _), v)| (hf.eval(z) - v).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn lower_bound_rules() {
        let km = KernelMeasure::atomic(vec![(0.0, 1.0), (std::f64::consts::FRAC_PI_4, -1.0)]).unwrap();
        let dom = disk(6.5, 160, 160);
        assert!(matches!(
            operator_norm_lower_bound::<f64, f64>(&km, Exponent::Finite(2.0), &[], &dom),
            Err(Error::EmptyFamily)
        ));
        let zero = FieldFunction::gaussian_bump(p(0.0, 1.5), 0.5, 0.0).unwrap();
        assert!(matches!(
            operator_norm_lower_bound(&km, Exponent::Finite(2.0), &[zero], &dom),
            Err(Error::ZeroNorm)
        ));
        let fam = vec![
            FieldFunction::gaussian_bump(p(0.5, 1.5), 0.4, 1.0).unwrap(),
            FieldFunction::gaussian_bump(p(-0.8, 0.9), 0.5, 1.0).unwrap(),
        ];
        let lb = operator_norm_lower_bound(&km, Exponent::Finite(2.0), &fam, &dom).unwrap();
        assert!(lb > 0.0 && lb < 2.0, "{lb}");
    }
}
