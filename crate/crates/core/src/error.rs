use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({re}, {im}) is not in the open upper half-plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },

    #[error("ball radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("matrix has non-finite entries")]
    NonFiniteMatrix,

    #[error("determinant {0} differs from 1 beyond tolerance")]
    NotUnimodular(f64),

    #[error("determinant {0} is not positive; the Möbius action is undefined on the upper half-plane")]
    OrientationReversing(f64),

    #[error("matrix is not orthogonal (max residual of uᵀu − I is {0})")]
    NotOrthogonal(f64),

    #[error("Möbius denominator cz + d vanishes")]
    Pole,

    #[error("invalid quadrature domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function support does not fit the quadrature domain: {0}")]
    SupportOutsideDomain(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("points are {distance} apart, which does not exceed R0 = {r0}")]
    PointsTooClose { distance: f64, r0: f64 },

    #[error("kernel has a density part; only purely atomic kernels are supported here")]
    NotAtomic,

    #[error("degenerate atom: {0}")]
    DegenerateAtom(String),

    #[error("function family is empty")]
    EmptyFamily,

    #[error("function has zero Lp norm")]
    ZeroNorm,

    #[error("kernels use different quadrature node counts ({0} vs {1})")]
    NodeMismatch(usize, usize),
}
