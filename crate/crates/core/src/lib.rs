//! Hausdorff and Cesàro operators on the hyperbolic plane.
//!
//! The hyperbolic plane is modelled as the upper half-plane `ℍ² ≅ SL(2,ℝ)/SO(2)`
//! with distance `ds = |dz| / Im z` and invariant measure `dλ = dx dy / y²`.
//! A Hausdorff operator averages a function over hyperbolic rotations about `i`:
//!
//! ```text
//! (H f)(z) = ∫₀^{2π} Φ(θ) f((z cos θ + sin θ) / (−z sin θ + cos θ)) dμ(θ)
//! ```
//!
//! Kernels are a smooth density part (integrated by the composite midpoint rule)
//! plus finitely many point masses. Around the operators sit the pieces needed to
//! check their behaviour numerically:
//!
//! - [`geometry`]: points, distance, balls, areas, doubling ratios, midpoint balls.
//! - [`sl2`]: 2×2 matrices, the Möbius action, Iwasawa coordinates, Haar integration.
//! - [`operators`]: kernels, field functions, the Hausdorff and Cesàro operators.
//! - [`norms`]: `Lᵖ(ℍ², λ)` norms and checks of `‖Hf‖_p ≤ ‖Φ‖₁ ‖f‖_p`.
//! - [`hardy`]: `(1,∞)`-atoms, atomic decompositions, their images under rotations.
//! - [`families`]: seeded random kernels, bumps and atoms for test matrices.
//!
//! All numerical code is generic over the scalar type through [`Real`]; the
//! aliases below fix it to `f64`, which is what the verification tolerances are
//! calibrated for.

pub mod error;
pub mod families;
pub mod geometry;
pub mod hardy;
pub mod norms;
pub mod operators;
pub mod optimize;
pub mod quadrature;
pub mod scalar;
pub mod sl2;

pub use error::{Error, Result};
pub use scalar::{FieldValue, Real};

pub use geometry::{
    amp_witness, doubling_ratio, euclid_circle_of_hyp_ball, hyp_area, hyp_distance,
    GeometryAssumptions, HypBall, UhpPoint,
};
pub use hardy::{
    atom_check, atom_pushforward, estimate_d_tau_b, h1_upper_bound, hausdorff_on_decomposition,
    make_radial_atom, Atom, AtomReport, AtomicDecomposition, HardyConfig, RadialPiece,
};
pub use norms::{
    lp_norm, operator_norm_lower_bound, verify_lp_bound, verify_lp_bounds, Exponent, LpBoundReport,
    LpConfig,
};
pub use operators::{
    cesaro_apply, hausdorff_apply, hausdorff_apply_general, hausdorff_field, kernel_l1_norm,
    ComplexKernel, Decay, DensityTerm, FieldFunction, KernelMeasure, KernelSpec, O2Kernel,
};
pub use quadrature::{Domain, GeodesicDisk, HypRect, McEstimate};
pub use sl2::{
    check_unimodular, conjugate_action, haar_integrate, iwasawa_decompose, mobius_apply,
    reflection_v, rotation_k, x_of_z, HaarGrid, IwasawaCoords, Mat2, SL2Element,
};

/// A point of the upper half-plane in double precision.
pub type Point = UhpPoint<f64>;
/// A hyperbolic ball in double precision.
pub type Ball = HypBall<f64>;
/// A real 2×2 matrix in double precision.
pub type Matrix = Mat2<f64>;
/// An element of `SL(2,ℝ)` in double precision.
pub type Sl2 = SL2Element<f64>;
/// A kernel-measure pair in double precision.
pub type Kernel = KernelMeasure<f64>;
/// A real-valued field on `ℍ²` in double precision.
pub type Field = FieldFunction<f64>;
/// A complex-valued field on `ℍ²` in double precision.
pub type ComplexField = FieldFunction<f64, num_complex::Complex<f64>>;
/// A `(1,∞)`-atom in double precision.
pub type HardyAtom = Atom<f64>;
/// An atomic decomposition in double precision.
pub type Decomposition = AtomicDecomposition<f64>;

/// Single-precision point, for callers that trade accuracy for memory.
pub type Point32 = UhpPoint<f32>;
/// Single-precision `SL(2,ℝ)` element.
pub type Sl2F32 = SL2Element<f32>;
