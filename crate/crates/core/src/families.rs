//! Seeded random kernels, test functions and atoms.
//!
//! All draws go through [`seeded_rng`], a ChaCha8 stream, so a seed fixes
//! every family on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HypBall, UhpPoint};
use crate::hardy::{make_radial_atom, Atom, AtomicDecomposition};
use crate::operators::{DensityTerm, FieldFunction, KernelMeasure};
use crate::scalar::Real;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..std::f64::consts::TAU)
}

fn signed<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// A point at hyperbolic distance at most `max_dist` from `i`, uniform in
/// polar coordinates.
pub fn random_point<T: Real, R: Rng + ?Sized>(rng: &mut R, max_dist: f64) -> UhpPoint<T> {
    let s = rng.gen_range(0.0..=max_dist);
    let phi = angle(rng);
    UhpPoint::from_polar(&UhpPoint::i(), T::lit(s), T::lit(phi))
}

/// `n` point masses at distinct angles with weights of modulus in `[0.1, 1]`.
pub fn random_atoms<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::with_capacity(n);
    while out.len() < n {
        let t = T::lit(angle(rng));
        let w = T::lit(signed(rng, 0.1, 1.0));
        if out.iter().all(|(s, _)| *s != t) {
            out.push((t, w));
        }
    }
    out
}

/// Purely atomic kernel with 1 to 5 signed point masses.
pub fn random_atomic_kernel<T: Real, R: Rng + ?Sized>(rng: &mut R) -> KernelMeasure<T> {
    let n = rng.gen_range(1..=5);
    KernelMeasure::atomic(random_atoms(rng, n)).expect("distinct finite atoms")
}

/// Kernel drawn from four shapes in turn: signed atoms, uniform plus cosine
/// density, tabulated density, and a density with atoms.
pub fn random_kernel<T: Real, R: Rng + ?Sized>(rng: &mut R, nodes: usize) -> Result<KernelMeasure<T>> {
    let lit = T::lit;
    let cos_term = |rng: &mut R| DensityTerm::Cos {
        amplitude: lit(signed(rng, 0.05, 0.3)),
        frequency: rng.gen_range(1..=4),
        phase: lit(angle(rng)),
    };
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(1..=4);
            KernelMeasure::atomic(random_atoms(rng, n))
        }
        1 => {
            let c = lit(signed(rng, 0.02, 0.2));
            let cos = cos_term(rng);
            KernelMeasure::new(vec![DensityTerm::Uniform(c), cos], vec![], nodes)
        }
        2 => {
            let len = rng.gen_range(8..=32);
            let values = (0..len).map(|_| lit(rng.gen_range(-0.3..0.3))).collect();
            KernelMeasure::new(vec![DensityTerm::Table(values)], vec![], nodes)
        }
        _ => {
            let cos = cos_term(rng);
            let n = rng.gen_range(1..=2);
            let atoms = random_atoms(rng, n);
            KernelMeasure::new(vec![cos], atoms, nodes)
        }
    }
}

/// Gaussian bump with `σ ∈ [0.3, 0.55]`, centre within distance 1.2 of `i`
/// and amplitude of modulus in `[0.5, 2]`.
pub fn random_bump<T: Real, R: Rng + ?Sized>(rng: &mut R) -> FieldFunction<T> {
    let center = random_point(rng, 1.2);
    let sigma = T::lit(rng.gen_range(0.3..0.55));
    let amplitude = T::lit(signed(rng, 0.5, 2.0));
    FieldFunction::gaussian_bump(center, sigma, amplitude).expect("positive width")
}

/// Two-piece radial atom with radius in `[0.1 b, b]`, inner radius between
/// 20% and 80% of it, centred within distance 2 of `i`.
pub fn random_radial_atom<T: Real, R: Rng + ?Sized>(rng: &mut R, b: f64) -> Result<Atom<T>> {
    let r = rng.gen_range(0.1 * b..=b);
    let inner = r * rng.gen_range(0.2..0.8);
    make_radial_atom(random_point(rng, 2.0), T::lit(r), T::lit(inner))
}

/// `n` random radial atoms with coefficients of modulus in `[0.1, 2]`.
pub fn random_decomposition<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    b: f64,
    n: usize,
) -> Result<AtomicDecomposition<T>> {
    let terms = (0..n)
        .map(|_| {
            let c = T::lit(signed(rng, 0.1, 2.0));
            Ok((c, random_radial_atom(rng, b)?))
        })
        .collect::<Result<_>>()?;
    Ok(AtomicDecomposition::new(terms))
}

/// JSON form of a test function, tagged by `kind`:
///
/// - `{"kind": "gaussian", "center": [x, y], "sigma": s, "amplitude": a}`
/// - `{"kind": "indicator", "center": [x, y], "radius": r}`
/// - `{"kind": "re"}`, `{"kind": "im"}`, `{"kind": "constant", "value": c}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Gaussian {
        center: [f64; 2],
        sigma: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Indicator {
        center: [f64; 2],
        radius: f64,
    },
    Re,
    Im,
    Constant {
        value: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl FunctionSpec {
    pub fn build<T: Real>(&self) -> Result<FieldFunction<T>> {
        let pt = |c: &[f64; 2]| UhpPoint::new(T::lit(c[0]), T::lit(c[1]));
        match self {
            FunctionSpec::Gaussian {
                center,
                sigma,
                amplitude,
            } => FieldFunction::gaussian_bump(pt(center)?, T::lit(*sigma), T::lit(*amplitude)),
            FunctionSpec::Indicator { center, radius } => Ok(FieldFunction::ball_indicator(
                HypBall::new(pt(center)?, T::lit(*radius))?,
            )),
            FunctionSpec::Re => Ok(FieldFunction::re_part()),
            FunctionSpec::Im => Ok(FieldFunction::im_part()),
            FunctionSpec::Constant { value } if value.is_finite() => {
                Ok(FieldFunction::constant(T::lit(*value)))
            }
            FunctionSpec::Constant { value } => {
                Err(Error::InvalidParameter(format!("constant {value} is not finite")))
            }
        }
    }
}
