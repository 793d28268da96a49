//! JSON run configurations, one shape per subcommand.
//!
//! Every file carries `"schema": 1`; unknown fields are rejected. The shipped
//! defaults live in `configs/` and are compiled in.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use hyperbolic_hausdorff::families::FunctionSpec;
use hyperbolic_hausdorff::hardy::DecompositionSpec;
use hyperbolic_hausdorff::norms::{DEFAULT_ANGULAR_NODES, DEFAULT_DISK_RADIUS, DEFAULT_RADIAL_NODES};
use hyperbolic_hausdorff::{Exponent, GeodesicDisk, HaarGrid, KernelSpec, Point, Result};

use crate::CliError;

pub const SCHEMA: u64 = 1;

pub const DEFAULT_EVAL: &str = include_str!("../configs/eval.json");
pub const DEFAULT_NORM: &str = include_str!("../configs/norm.json");
pub const DEFAULT_VERIFY_ATOMS: &str = include_str!("../configs/verify_atoms.json");
pub const DEFAULT_DOUBLING: &str = include_str!("../configs/doubling.json");
pub const DEFAULT_WEIL: &str = include_str!("../configs/weil.json");

/// Parses `text`, checking and removing the schema version before the body.
pub fn parse<C: DeserializeOwned>(text: &str) -> std::result::Result<C, CliError> {
    let bad = |e: serde_json::Error| CliError::Config(e.to_string());
    let mut v: Value = serde_json::from_str(text).map_err(bad)?;
    let schema = v
        .as_object_mut()
        .ok_or_else(|| CliError::Config("configuration must be a JSON object".into()))?
        .remove("schema");
    match schema {
        Some(s) if s.as_u64() == Some(SCHEMA) => serde_json::from_value(v).map_err(bad),
        Some(s) => Err(CliError::Config(format!("unsupported schema {s}, expected {SCHEMA}"))),
        None => Err(CliError::Config("missing \"schema\" field".into())),
    }
}

/// `[lo, hi, n]`: `n` evenly spaced values, both ends included.
#[derive(Clone, Copy, Debug, Deserialize)]
pub struct Axis(pub f64, pub f64, pub usize);

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let Axis(lo, hi, n) = *self;
        match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    pub kernel: KernelSpec,
    pub function: FunctionSpec,
    /// Real parts.
    pub x: Axis,
    /// Natural logarithms of the imaginary parts.
    pub log_y: Axis,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskConfig {
    #[serde(default = "default_center")]
    pub center: [f64; 2],
    pub radius: f64,
    pub radial: usize,
    pub angular: usize,
}

fn default_center() -> [f64; 2] {
    [0.0, 1.0]
}

impl Default for DiskConfig {
    fn default() -> Self {
        Self {
            center: default_center(),
            radius: DEFAULT_DISK_RADIUS,
            radial: DEFAULT_RADIAL_NODES,
            angular: DEFAULT_ANGULAR_NODES,
        }
    }
}

impl DiskConfig {
    pub fn build(&self) -> Result<GeodesicDisk<f64>> {
        let c = Point::new(self.center[0], self.center[1])?;
        GeodesicDisk::new(c, self.radius, self.radial, self.angular)
    }
}

/// Explicit members plus `random` seeded draws.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family<S> {
    #[serde(default)]
    pub random: usize,
    #[serde(default = "Vec::new")]
    pub specs: Vec<S>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub nodes: Option<usize>,
    pub p: Vec<Exponent<f64>>,
    pub kernels: Family<KernelSpec>,
    pub functions: Family<FunctionSpec>,
    #[serde(default)]
    pub domain: DiskConfig,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyAtomsConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default = "two")]
    pub tau: f64,
    /// Random radial atoms, each pushed forward by `angles` rotations.
    pub atoms: usize,
    pub angles: usize,
    /// Random atomic kernels, each applied to a random decomposition.
    pub kernels: usize,
    pub max_terms: usize,
    /// Points at which each image decomposition is compared with `H f`.
    pub probes: usize,
    #[serde(default)]
    pub decompositions: Vec<DecompositionSpec>,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauB {
    pub tau: f64,
    pub b: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoublingConfig {
    #[serde(default)]
    pub seed: u64,
    pub radii: Vec<f64>,
    /// Per-ball Monte Carlo budget, split over `strata` slabs.
    pub samples: usize,
    pub strata: usize,
    /// Allowed deviation from Monte Carlo in standard errors.
    pub sigmas: f64,
    pub d_tau_b: Vec<TauB>,
    /// Radius at which the doubling ratio must exceed `large_floor`.
    pub large_radius: f64,
    pub large_floor: f64,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarConfig {
    pub x: [f64; 2],
    pub log_y: [f64; 2],
    /// Nodes along `x`, `log y` and `θ`.
    pub nodes: [usize; 3],
}

impl HaarConfig {
    pub fn build(&self) -> HaarGrid<f64> {
        HaarGrid {
            x0: self.x[0],
            x1: self.x[1],
            y0: self.log_y[0].exp(),
            y1: self.log_y[1].exp(),
            nx: self.nodes[0],
            ny: self.nodes[1],
            ntheta: self.nodes[2],
        }
    }
}

impl Default for HaarConfig {
    fn default() -> Self {
        let g = HaarGrid::<f64>::default();
        Self {
            x: [g.x0, g.x1],
            log_y: [g.y0.ln(), g.y1.ln()],
            nodes: [g.nx, g.ny, g.ntheta],
        }
    }
}

/// An element of `O(2)`: `k(θ)` or `v(θ)`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum O2Element {
    Rotation(f64),
    Reflection(f64),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeilConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub haar: HaarConfig,
    /// Right-`K`-invariant bumps `F(g) = f(g·i)`.
    pub bumps: usize,
    pub sigma: [f64; 2],
    pub max_center_distance: f64,
    /// Radius and node counts of the comparison disk about each bump centre.
    pub disk_radius: f64,
    pub disk_nodes: [usize; 2],
    /// Bumps on the group for the unimodularity check.
    pub group_bumps: usize,
    pub group_width: [f64; 2],
    pub conjugators: Vec<O2Element>,
    pub tolerance: f64,
}
