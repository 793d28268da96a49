//! Hausdorff operators on `ℍ²` and the hyperbolic Cesàro operator.
//!
//! The automorphism `g ↦ k(θ)⁻¹ g k(θ)` induces on `ℍ²` the rotation
//! `z ↦ k(−θ)·z` about `i`, so an operator built from rotations is
//! determined by a kernel measure on `[0, 2π)`:
//!
//! ```text
//! (H f)(z) = ∫₀^{2π} f(k(−θ)·z) ρ(θ) dθ + Σᵢ wᵢ f(k(−θᵢ)·z)
//! ```
//!
//! where `ρ = Φ₁ · dμ₁/dθ` is the density part and `(θᵢ, wᵢ)` are point masses.
//! The density part is integrated by the composite midpoint rule on a fixed
//! node count, which the kernel carries with it.
//!
//! Conjugation by a reflection `v(θ)` induces `z ↦ k(θ)·(−z̄)` instead, the
//! rotation followed by the mirror `z ↦ −z̄`. The reflection component of an
//! `O(2)` kernel therefore acts on `f(−z̄)`; see [`hausdorff_apply_general`].

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hyp_distance, rotate_about_i, UhpPoint};
use crate::quadrature::midpoints;
use crate::scalar::{FieldValue, Real};
use crate::sl2::{conjugate_action, reflection_v, rotation_k};

/// Default midpoint node count for density parts.
pub const DEFAULT_NODES: usize = 4096;

/// One additive term of a kernel density on `[0, 2π)`.
#[derive(Clone)]
pub enum DensityTerm<T> {
    /// Constant value.
    Uniform(T),
    /// `amplitude · cos(frequency · θ + phase)`.
    Cos {
        amplitude: T,
        frequency: u32,
        phase: T,
    },
    /// Samples at `θ_k = 2πk/n`, interpolated linearly and periodically.
    Table(Vec<T>),
    /// Arbitrary callable; not serialisable.
    Custom(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> DensityTerm<T> {
    pub fn eval(&self, theta: T) -> T {
        match self {
            DensityTerm::Uniform(c) => *c,
            DensityTerm::Cos {
                amplitude,
                frequency,
                phase,
            } => *amplitude * (T::from_u32(*frequency).unwrap() * theta + *phase).cos(),
            DensityTerm::Table(values) => {
                let n = values.len();
                if n == 0 {
                    return T::zero();
                }
                let mut wrapped = theta % T::TAU();
                if wrapped < T::zero() {
                    wrapped = wrapped + T::TAU();
                }
                let pos = wrapped / T::TAU() * T::from_usize(n).unwrap();
                let k = pos.floor();
                let frac = pos - k;
                let i0 = k.to_usize().unwrap_or(0) % n;
                let i1 = (i0 + 1) % n;
                values[i0] * (T::one() - frac) + values[i1] * frac
            }
            DensityTerm::Custom(f) => f(theta),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for DensityTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityTerm::Uniform(c) => f.debug_tuple("Uniform").field(c).finish(),
            DensityTerm::Cos {
                amplitude,
                frequency,
                phase,
            } => f
                .debug_struct("Cos")
                .field("amplitude", amplitude)
                .field("frequency", frequency)
                .field("phase", phase)
                .finish(),
            DensityTerm::Table(v) => f.debug_tuple("Table").field(&v.len()).finish(),
            DensityTerm::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Quadrature node of a kernel: `cos θ`, `sin θ` and the weight of `f(k(−θ)·z)`.
#[derive(Clone, Copy, Debug)]
struct Node<T> {
    theta: T,
    cos: T,
    sin: T,
    weight: T,
}

/// Kernel-measure pair `(Φ₁, μ₁)`: a density part plus finitely many point masses.
#[derive(Clone, Debug)]
pub struct KernelMeasure<T> {
    density: Vec<DensityTerm<T>>,
    atoms: Vec<(T, T)>,
    nodes: usize,
    cache: Arc<[Node<T>]>,
    density_nodes: usize,
}

impl<T: Real> KernelMeasure<T> {
    /// Builds a kernel; atom angles must be distinct and lie in `[0, 2π)`, and
    /// the density must be finite at every quadrature node.
    pub fn new(density: Vec<DensityTerm<T>>, atoms: Vec<(T, T)>, nodes: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::InvalidParameter("zero density nodes".into()));
        }
        for (k, &(theta, w)) in atoms.iter().enumerate() {
            if !(theta >= T::zero() && theta < T::TAU()) {
                return Err(Error::InvalidParameter(format!(
                    "atom angle {theta} outside [0, 2π)"
                )));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite(format!("atom weight at θ = {theta}")));
            }
            if atoms[..k].iter().any(|&(t, _)| t == theta) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate atom angle {theta}"
                )));
            }
        }
        let mut cache = Vec::new();
        if !density.is_empty() {
            let (thetas, h) = midpoints(T::zero(), T::TAU(), nodes);
            for theta in thetas {
                let value: T = density.iter().map(|d| d.eval(theta)).sum();
                if !value.is_finite() {
                    return Err(Error::NonFinite(format!("density at θ = {theta}")));
                }
                let (sin, cos) = theta.sin_cos();
                cache.push(Node {
                    theta,
                    cos,
                    sin,
                    weight: h * value,
                });
            }
        }
        let density_nodes = cache.len();
        for &(theta, weight) in &atoms {
            let (sin, cos) = theta.sin_cos();
            cache.push(Node {
                theta,
                cos,
                sin,
                weight,
            });
        }
        Ok(Self {
            density,
            atoms,
            nodes,
            cache: cache.into(),
            density_nodes,
        })
    }

    /// Kernel with only point masses.
    pub fn atomic(atoms: Vec<(T, T)>) -> Result<Self> {
        Self::new(Vec::new(), atoms, DEFAULT_NODES)
    }

    /// Kernel with density `c` and no point masses.
    pub fn uniform(c: T, nodes: usize) -> Result<Self> {
        Self::new(vec![DensityTerm::Uniform(c)], Vec::new(), nodes)
    }

    /// `dμ₁ = dθ / 2π` with `Φ₁ ≡ 1`: the rotational average about `i`.
    pub fn cesaro_uniform(nodes: usize) -> Result<Self> {
        Self::uniform(T::TAU().recip(), nodes)
    }

    /// The zero kernel.
    pub fn zero() -> Self {
        Self::new(Vec::new(), Vec::new(), DEFAULT_NODES).expect("empty kernel is valid")
    }

    pub fn density(&self) -> &[DensityTerm<T>] {
        &self.density
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_empty()
    }

    /// Density value at `theta` (sum of all terms).
    pub fn density_at(&self, theta: T) -> T {
        self.density.iter().map(|d| d.eval(theta)).sum()
    }

    /// Same kernel on a different density node count.
    pub fn with_nodes(&self, nodes: usize) -> Result<Self> {
        Self::new(self.density.clone(), self.atoms.clone(), nodes)
    }

    /// Signed total mass `∫ ρ dθ + Σ wᵢ` (midpoint rule for the density).
    pub fn total_mass(&self) -> T {
        self.cache.iter().map(|n| n.weight).sum()
    }

    /// Sum of two kernels: densities add termwise, coinciding atoms merge.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if !self.density.is_empty() && !other.density.is_empty() && self.nodes != other.nodes {
            return Err(Error::NodeMismatch(self.nodes, other.nodes));
        }
        let nodes = if self.density.is_empty() {
            other.nodes
        } else {
            self.nodes
        };
        let mut density = self.density.clone();
        density.extend(other.density.iter().cloned());
        let mut atoms = self.atoms.clone();
        for &(theta, w) in &other.atoms {
            match atoms.iter_mut().find(|(t, _)| *t == theta) {
                Some(slot) => slot.1 = slot.1 + w,
                None => atoms.push((theta, w)),
            }
        }
        Self::new(density, atoms, nodes)
    }

    /// Kernel scaled by `c`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        let density = self
            .density
            .iter()
            .map(|d| match d {
                DensityTerm::Uniform(v) => DensityTerm::Uniform(*v * c),
                DensityTerm::Cos {
                    amplitude,
                    frequency,
                    phase,
                } => DensityTerm::Cos {
                    amplitude: *amplitude * c,
                    frequency: *frequency,
                    phase: *phase,
                },
                DensityTerm::Table(v) => DensityTerm::Table(v.iter().map(|x| *x * c).collect()),
                DensityTerm::Custom(f) => {
                    let f = Arc::clone(f);
                    DensityTerm::Custom(Arc::new(move |t| c * f(t)))
                }
            })
            .collect();
        let atoms = self.atoms.iter().map(|&(t, w)| (t, w * c)).collect();
        Self::new(density, atoms, self.nodes)
    }

    /// Quadrature nodes as `(θ, weight)`: density nodes first, then atoms.
    pub fn quadrature_nodes(&self) -> Vec<(T, T)> {
        self.cache.iter().map(|n| (n.theta, n.weight)).collect()
    }

    fn density_cache(&self) -> &[Node<T>] {
        &self.cache[..self.density_nodes]
    }

    fn atom_cache(&self) -> &[Node<T>] {
        &self.cache[self.density_nodes..]
    }
}

impl<T: Real> Default for KernelMeasure<T> {
    fn default() -> Self {
        Self::zero()
    }
}

/// `‖Φ₁‖_{L¹(μ₁)} = ∫ |ρ| dθ + Σ |wᵢ|`, density part by the kernel's midpoint rule.
pub fn kernel_l1_norm<T: Real>(km: &KernelMeasure<T>) -> T {
    km.cache.iter().map(|n| n.weight.abs()).sum()
}

/// Envelope of a field function used to control quadrature truncation.
///
/// Both variants describe `|f(z)|` through `s = ρ(z, center)` and the band
/// `[inner, outer]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay<T> {
    /// `f(z) = 0` unless `inner ≤ s ≤ outer`.
    Compact {
        center: UhpPoint<T>,
        inner: T,
        outer: T,
    },
    /// `|f(z)| ≤ amplitude · exp(−dist(s, [inner, outer])² / (2σ²))`.
    Gaussian {
        center: UhpPoint<T>,
        inner: T,
        outer: T,
        sigma: T,
        amplitude: T,
    },
    /// No usable envelope; such functions can be evaluated but not normed.
    Unbounded,
}

impl<T: Real> Decay<T> {
    /// Envelope of `H f` given the envelope of `f` and `‖Φ‖₁`.
    ///
    /// Rotations about `i` move `ρ(·, c)` by at most `d = ρ(c, i)` in each
    /// direction, so every band widens by `d` and the result is centred at `i`.
    pub fn under_rotations_about_i(&self, l1: T) -> Self {
        let i = UhpPoint::i();
        match *self {
            Decay::Compact {
                center,
                inner,
                outer,
            } => {
                let d = hyp_distance(&center, &i);
                Decay::Compact {
                    center: i,
                    inner: (inner - d).max(T::zero()),
                    outer: outer + d,
                }
            }
            Decay::Gaussian {
                center,
                inner,
                outer,
                sigma,
                amplitude,
            } => {
                let d = hyp_distance(&center, &i);
                Decay::Gaussian {
                    center: i,
                    inner: (inner - d).max(T::zero()),
                    outer: outer + d,
                    sigma,
                    amplitude: amplitude * l1,
                }
            }
            Decay::Unbounded => Decay::Unbounded,
        }
    }

    /// Envelope of `a f + b g`, when the two envelopes share a centre.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        match (*self, *other) {
            (
                Decay::Compact {
                    center: c1,
                    inner: i1,
                    outer: o1,
                },
                Decay::Compact {
                    center: c2,
                    inner: i2,
                    outer: o2,
                },
            ) if c1 == c2 => Decay::Compact {
                center: c1,
                inner: i1.min(i2),
                outer: o1.max(o2),
            },
            (
                Decay::Gaussian {
                    center: c1,
                    inner: i1,
                    outer: o1,
                    sigma: s1,
                    amplitude: a1,
                },
                Decay::Gaussian {
                    center: c2,
                    inner: i2,
                    outer: o2,
                    sigma: s2,
                    amplitude: a2,
                },
            ) if c1 == c2 => Decay::Gaussian {
                center: c1,
                inner: i1.min(i2),
                outer: o1.max(o2),
                sigma: s1.max(s2),
                amplitude: a.abs() * a1 + b.abs() * a2,
            },
            _ => Decay::Unbounded,
        }
    }
}

/// A function on `ℍ²` with its decay envelope.
pub struct FieldFunction<T, V = T> {
    eval: Arc<dyn Fn(&UhpPoint<T>) -> V + Send + Sync>,
    decay: Decay<T>,
}

impl<T: Copy, V> Clone for FieldFunction<T, V> {
    fn clone(&self) -> Self {
        Self {
            eval: Arc::clone(&self.eval),
            decay: self.decay,
        }
    }
}

impl<T: Real, V: FieldValue<T>> FieldFunction<T, V> {
    pub fn new<F>(f: F, decay: Decay<T>) -> Self
    where
        F: Fn(&UhpPoint<T>) -> V + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            decay,
        }
    }

    #[inline]
    pub fn eval(&self, z: &UhpPoint<T>) -> V {
        (self.eval)(z)
    }

    pub fn decay(&self) -> &Decay<T> {
        &self.decay
    }

    /// `c · f`.
    pub fn scaled(&self, c: T) -> Self {
        let f = Arc::clone(&self.eval);
        let decay = self.decay.combine(c, &self.decay, T::zero());
        Self {
            eval: Arc::new(move |z| f(z) * c),
            decay,
        }
    }

    /// `z ↦ f(−z̄)`, the mirror image in the imaginary axis.
    pub fn mirrored(&self) -> Self {
        let f = Arc::clone(&self.eval);
        let mirror = |c: UhpPoint<T>| UhpPoint::new_unchecked(-c.re(), c.im());
        let decay = match self.decay {
            Decay::Compact {
                center,
                inner,
                outer,
            } => Decay::Compact {
                center: mirror(center),
                inner,
                outer,
            },
            Decay::Gaussian {
                center,
                inner,
                outer,
                sigma,
                amplitude,
            } => Decay::Gaussian {
                center: mirror(center),
                inner,
                outer,
                sigma,
                amplitude,
            },
            Decay::Unbounded => Decay::Unbounded,
        };
        Self {
            eval: Arc::new(move |z| f(&mirror(*z))),
            decay,
        }
    }

    /// `a · f + b · g`.
    pub fn linear_combination(a: T, f: &Self, b: T, g: &Self) -> Self {
        let (ef, eg) = (Arc::clone(&f.eval), Arc::clone(&g.eval));
        Self {
            eval: Arc::new(move |z| ef(z) * a + eg(z) * b),
            decay: f.decay.combine(a, &g.decay, b),
        }
    }
}

impl<T: Real> FieldFunction<T, T> {
    /// `amplitude · exp(−ρ(z, center)² / (2σ²))`.
    pub fn gaussian_bump(center: UhpPoint<T>, sigma: T, amplitude: T) -> Result<Self> {
        if !(sigma > T::zero() && sigma.is_finite() && amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bump needs sigma > 0 and finite amplitude (sigma = {sigma}, amplitude = {amplitude})"
            )));
        }
        let two_s2 = T::lit(2.0) * sigma * sigma;
        Ok(Self::new(
            move |z| {
                let r = hyp_distance(&center, z);
                amplitude * (-(r * r) / two_s2).exp()
            },
            Decay::Gaussian {
                center,
                inner: T::zero(),
                outer: T::zero(),
                sigma,
                amplitude: amplitude.abs(),
            },
        ))
    }

    /// `profile(ρ(z, center))` with a caller-declared envelope.
    pub fn radial<P>(center: UhpPoint<T>, profile: P, decay: Decay<T>) -> Self
    where
        P: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::new(move |z| profile(hyp_distance(&center, z)), decay)
    }

    /// Indicator of a closed hyperbolic ball.
    pub fn ball_indicator(ball: crate::geometry::HypBall<T>) -> Self {
        Self::new(
            move |z| if ball.contains(z) { T::one() } else { T::zero() },
            Decay::Compact {
                center: ball.center(),
                inner: T::zero(),
                outer: ball.radius(),
            },
        )
    }

    pub fn constant(c: T) -> Self {
        Self::new(move |_| c, Decay::Unbounded)
    }

    /// `z ↦ Re z`.
    pub fn re_part() -> Self {
        Self::new(|z| z.re(), Decay::Unbounded)
    }

    /// `z ↦ Im z`.
    pub fn im_part() -> Self {
        Self::new(|z| z.im(), Decay::Unbounded)
    }
}

#[inline]
fn sum_over_nodes<T: Real, V: FieldValue<T>>(
    nodes: &[Node<T>],
    f: &FieldFunction<T, V>,
    z: &UhpPoint<T>,
) -> V {
    let mut acc = V::zero();
    for n in nodes {
        if n.weight != T::zero() {
            acc = acc + f.eval(&rotate_about_i(z, n.cos, n.sin)) * n.weight;
        }
    }
    acc
}

fn finite<T: Real, V: FieldValue<T>>(v: V, what: &str) -> Result<V> {
    if v.modulus().is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

/// `(H f)(z) = ∫ ρ(θ) f(k(−θ)·z) dθ + Σ wᵢ f(k(−θᵢ)·z)`, with
/// `k(−θ)·z = (z cos θ + sin θ) / (−z sin θ + cos θ)`.
///
/// Fails only if `f` produces a non-finite value along the orbit of `z`.
pub fn hausdorff_apply<T: Real, V: FieldValue<T>>(
    km: &KernelMeasure<T>,
    f: &FieldFunction<T, V>,
    z: &UhpPoint<T>,
) -> Result<V> {
    let v = sum_over_nodes(km.density_cache(), f, z) + sum_over_nodes(km.atom_cache(), f, z);
    finite(v, "Hausdorff operator value")
}

/// Cesàro operator: [`hausdorff_apply`] with `Φ₁ ≡ 1`, so the kernel of `mu1`
/// is read as the measure `μ₁` itself. With [`KernelMeasure::cesaro_uniform`]
/// this is the average of `f` over the hyperbolic circle about `i` through `z`.
pub fn cesaro_apply<T: Real, V: FieldValue<T>>(
    mu1: &KernelMeasure<T>,
    f: &FieldFunction<T, V>,
    z: &UhpPoint<T>,
) -> Result<V> {
    hausdorff_apply(mu1, f, z)
}

/// `H f` as a field function, with envelope derived from that of `f`.
///
/// Non-finite values of `f` propagate into the returned values.
pub fn hausdorff_field<T: Real, V: FieldValue<T>>(
    km: &KernelMeasure<T>,
    f: &FieldFunction<T, V>,
) -> FieldFunction<T, V> {
    let decay = f.decay.under_rotations_about_i(kernel_l1_norm(km));
    let km = km.clone();
    let f = f.clone();
    FieldFunction::new(move |z| sum_over_nodes(&km.cache, &f, z), decay)
}

/// Kernel on `O(2)`, split over its two components `{k(θ)}` and `{v(θ)}`.
#[derive(Clone, Debug)]
pub struct O2Kernel<T> {
    pub rotations: KernelMeasure<T>,
    pub reflections: KernelMeasure<T>,
}

impl<T: Real> Default for O2Kernel<T> {
    fn default() -> Self {
        Self::new(KernelMeasure::zero(), KernelMeasure::zero())
    }
}

impl<T: Real> O2Kernel<T> {
    pub fn new(rotations: KernelMeasure<T>, reflections: KernelMeasure<T>) -> Self {
        Self {
            rotations,
            reflections,
        }
    }

    /// Sum of the two component kernels, read as a single rotation kernel.
    ///
    /// `hausdorff_apply(reduced, f, z)` equals [`hausdorff_apply_general`]
    /// when the reflection component vanishes or `f(−z̄) = f(z)`; in general
    /// the reflection part acts on the mirrored function instead.
    pub fn reduced(&self) -> Result<KernelMeasure<T>> {
        self.rotations.merge(&self.reflections)
    }
}

/// `(H f)(z) = ∫_{O(2)} Φ(u) f((u⁻¹ x(z) u)·i) dμ(u)`, evaluated literally
/// through [`conjugate_action`] on each component.
///
/// Equals `H_rot f + H_refl f̃` with `f̃(z) = f(−z̄)`, where `H_rot` and
/// `H_refl` are [`hausdorff_apply`] with the two component kernels.
pub fn hausdorff_apply_general<T: Real, V: FieldValue<T>>(
    kernel: &O2Kernel<T>,
    f: &FieldFunction<T, V>,
    z: &UhpPoint<T>,
) -> Result<V> {
    let mut acc = V::zero();
    for n in kernel.rotations.cache.iter() {
        let u = *rotation_k(n.theta).mat();
        acc = acc + f.eval(&conjugate_action(&u, z)?) * n.weight;
    }
    for n in kernel.reflections.cache.iter() {
        let u = reflection_v(n.theta);
        acc = acc + f.eval(&conjugate_action(&u, z)?) * n.weight;
    }
    finite(acc, "Hausdorff operator value")
}

/// Complex kernel `Φ = Φ_re + i Φ_im`, acting on real fields.
#[derive(Clone, Debug)]
pub struct ComplexKernel<T> {
    pub re: KernelMeasure<T>,
    pub im: KernelMeasure<T>,
}

impl<T: Real> ComplexKernel<T> {
    pub fn new(re: KernelMeasure<T>, im: KernelMeasure<T>) -> Result<Self> {
        if !re.density.is_empty() && !im.density.is_empty() && re.nodes != im.nodes {
            return Err(Error::NodeMismatch(re.nodes, im.nodes));
        }
        Ok(Self { re, im })
    }

    pub fn apply(&self, f: &FieldFunction<T, T>, z: &UhpPoint<T>) -> Result<Complex<T>> {
        Ok(Complex::new(
            hausdorff_apply(&self.re, f, z)?,
            hausdorff_apply(&self.im, f, z)?,
        ))
    }

    /// `∫ |Φ| dμ` with the modulus taken pointwise on shared nodes.
    pub fn l1_norm(&self) -> T {
        let (dr, di) = (self.re.density_cache(), self.im.density_cache());
        let density: T = match (dr.is_empty(), di.is_empty()) {
            (true, true) => T::zero(),
            (false, true) => dr.iter().map(|n| n.weight.abs()).sum(),
            (true, false) => di.iter().map(|n| n.weight.abs()).sum(),
            (false, false) => dr
                .iter()
                .zip(di)
                .map(|(a, b)| a.weight.hypot(b.weight))
                .sum(),
        };
        let mut atoms: Vec<(T, T, T)> = self.re.atoms.iter().map(|&(t, w)| (t, w, T::zero())).collect();
        for &(t, w) in &self.im.atoms {
            match atoms.iter_mut().find(|a| a.0 == t) {
                Some(slot) => slot.2 = w,
                None => atoms.push((t, T::zero(), w)),
            }
        }
        density + atoms.iter().map(|a| a.1.hypot(a.2)).sum::<T>()
    }
}

/// JSON form of a kernel:
///
/// ```json
/// {"density": {"kind": "uniform", "value": 0.159}, "atoms": [[0.0, 0.3]], "nodes": 4096}
/// ```
///
/// `density` may be omitted, a single term, or a list of terms that add.
/// Term kinds: `uniform` (`value`, default `1/2π`), `cos` (`amplitude`,
/// `frequency` default 1, `phase` default 0) and `table` (`values` sampled at
/// `2πk/n`). `atoms` lists `[theta, weight]` pairs; `nodes` defaults to 4096.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpecs>,
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensitySpecs {
    One(DensitySpec),
    Many(Vec<DensitySpec>),
}

fn default_uniform_value() -> f64 {
    1.0 / std::f64::consts::TAU
}

fn default_frequency() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    Uniform {
        #[serde(default = "default_uniform_value")]
        value: f64,
    },
    Cos {
        amplitude: f64,
        #[serde(default = "default_frequency")]
        frequency: u32,
        #[serde(default)]
        phase: f64,
    },
    Table {
        values: Vec<f64>,
    },
}

impl KernelSpec {
    pub fn build<T: Real>(&self) -> Result<KernelMeasure<T>> {
        let terms: Vec<&DensitySpec> = match &self.density {
            None => Vec::new(),
            Some(DensitySpecs::One(d)) => vec![d],
            Some(DensitySpecs::Many(v)) => v.iter().collect(),
        };
        let density = terms
            .into_iter()
            .map(|d| match d {
                DensitySpec::Uniform { value } => DensityTerm::Uniform(T::lit(*value)),
                DensitySpec::Cos {
                    amplitude,
                    frequency,
                    phase,
                } => DensityTerm::Cos {
                    amplitude: T::lit(*amplitude),
                    frequency: *frequency,
                    phase: T::lit(*phase),
                },
                DensitySpec::Table { values } => {
                    DensityTerm::Table(values.iter().map(|v| T::lit(*v)).collect())
                }
            })
            .collect();
        let atoms = self
            .atoms
            .iter()
            .map(|[t, w]| (T::lit(*t), T::lit(*w)))
            .collect();
        KernelMeasure::new(density, atoms, self.nodes.unwrap_or(DEFAULT_NODES))
    }

    /// Inverse of [`KernelSpec::build`]; fails on custom density terms.
    pub fn from_kernel<T: Real>(km: &KernelMeasure<T>) -> Result<Self> {
        let mut terms = Vec::with_capacity(km.density.len());
        for d in &km.density {
            terms.push(match d {
                DensityTerm::Uniform(v) => DensitySpec::Uniform { value: v.as_f64() },
                DensityTerm::Cos {
                    amplitude,
                    frequency,
                    phase,
                } => DensitySpec::Cos {
                    amplitude: amplitude.as_f64(),
                    frequency: *frequency,
                    phase: phase.as_f64(),
                },
                DensityTerm::Table(v) => DensitySpec::Table {
                    values: v.iter().map(|x| x.as_f64()).collect(),
                },
                DensityTerm::Custom(_) => {
                    return Err(Error::InvalidParameter(
                        "custom density terms cannot be serialised".into(),
                    ))
                }
            });
        }
        let density = match terms.len() {
            0 => None,
            1 => Some(DensitySpecs::One(terms.remove(0))),
            _ => Some(DensitySpecs::Many(terms)),
        };
        Ok(Self {
            density,
            atoms: km.atoms.iter().map(|&(t, w)| [t.as_f64(), w.as_f64()]).collect(),
            nodes: Some(km.nodes),
        })
    }
}
