//! The five subcommands. Each returns its rows; failed checks are counted,
//! not raised.

use rand::Rng;
use serde::Serialize;

use hyperbolic_hausdorff::families::{
    random_atomic_kernel, random_bump, random_decomposition, random_kernel, random_point,
    random_radial_atom, seeded_rng,
};
use hyperbolic_hausdorff::hardy::ATOM_TOL;
use hyperbolic_hausdorff::quadrature::monte_carlo_ball_area;
use hyperbolic_hausdorff::*;

use crate::config::{
    DoublingConfig, EvalConfig, NormConfig, O2Element, VerifyAtomsConfig, WeilConfig,
};

/// Command-line overrides shared by all subcommands.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub nodes: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRow {
    pub re: f64,
    pub im: f64,
    pub f: f64,
    pub hf: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormRow {
    pub kernel: usize,
    pub function: usize,
    pub p: Exponent<f64>,
    pub norm_f: f64,
    pub norm_hf: f64,
    pub kernel_l1: f64,
    pub bound: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl NormRow {
    fn new(kernel: usize, function: usize, r: LpBoundReport) -> Self {
        Self {
            kernel,
            function,
            p: r.p,
            norm_f: r.norm_f,
            norm_hf: r.norm_hf,
            kernel_l1: r.kernel_l1,
            bound: r.bound,
            ratio: r.ratio,
            pass: r.pass,
        }
    }
}

/// One verified quantity: `value` against `reference`, with `error` the
/// deviation in the units of `tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(suite: &'static str, case: String, value: f64, reference: f64, error: f64, tolerance: f64) -> Self {
        Self {
            suite,
            case,
            value,
            reference,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }

    fn requiring(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn kernel_from(spec: &KernelSpec, nodes: Option<usize>) -> Result<Kernel> {
    let mut spec = spec.clone();
    if nodes.is_some() {
        spec.nodes = nodes;
    }
    spec.build()
}

pub fn eval(cfg: &EvalConfig, ov: Overrides) -> Result<Vec<EvalRow>> {
    let km = kernel_from(&cfg.kernel, ov.nodes)?;
    let f: Field = cfg.function.build()?;
    let mut rows = Vec::new();
    for ln_y in cfg.log_y.values() {
        for x in cfg.x.values() {
            let z = Point::new(x, ln_y.exp())?;
            rows.push(EvalRow {
                re: x,
                im: z.im(),
                f: f.eval(&z),
                hf: hausdorff_apply(&km, &f, &z)?,
            });
        }
    }
    Ok(rows)
}

pub fn norm(cfg: &NormConfig, ov: Overrides) -> Result<Vec<NormRow>> {
    let mut rng = seeded_rng(ov.seed.unwrap_or(cfg.seed));
    let nodes = ov.nodes.or(cfg.nodes);
    let mut kernels = cfg
        .kernels
        .specs
        .iter()
        .map(|s| kernel_from(s, nodes))
        .collect::<Result<Vec<_>>>()?;
    for _ in 0..cfg.kernels.random {
        kernels.push(random_kernel(&mut rng, nodes.unwrap_or(operators::DEFAULT_NODES))?);
    }
    let mut functions = cfg
        .functions
        .specs
        .iter()
        .map(|s| s.build())
        .collect::<Result<Vec<Field>>>()?;
    functions.extend((0..cfg.functions.random).map(|_| random_bump(&mut rng)));
    let domain = Domain::Disk(cfg.domain.build()?);
    let mut rows = Vec::new();
    for (k, km) in kernels.iter().enumerate() {
        for (j, f) in functions.iter().enumerate() {
            for report in verify_lp_bounds(km, f, &cfg.p, &domain)? {
                rows.push(NormRow::new(k, j, report));
            }
        }
    }
    Ok(rows)
}

/// Points near a piece boundary of any term, where rounding can flip which
/// piece a point falls in.
fn near_piece_boundary(d: &Decomposition, z: &Point) -> bool {
    d.terms.iter().any(|(_, a)| {
        let s = hyp_distance(&a.ball().center(), z);
        a.pieces()
            .iter()
            .any(|p| (s - p.inner).abs() < 1e-9 || (s - p.outer).abs() < 1e-9)
    })
}

pub fn verify_atoms(cfg: &VerifyAtomsConfig, ov: Overrides) -> Result<Vec<Check>> {
    let mut rng = seeded_rng(ov.seed.unwrap_or(cfg.seed));
    let hardy = HardyConfig {
        b: cfg.b,
        tau: cfg.tau,
        d_tau_b: estimate_d_tau_b(cfg.tau, cfg.b)?,
        gamma_tau_b: None,
    };
    let mut rows = Vec::new();

    for (k, spec) in cfg.decompositions.iter().enumerate() {
        let d: Decomposition = spec.build()?;
        let worst = d
            .terms
            .iter()
            .map(|(_, a)| atom_check(a, &hardy))
            .fold((true, 0.0f64), |(ok, w), r| {
                (ok && r.pass(), w.max(r.sup_residual).max(r.mean_residual))
            });
        rows.push(Check::new("configured", format!("decomposition {k}"), worst.1, 0.0, worst.1, ATOM_TOL).requiring(worst.0));
    }

    for k in 0..cfg.atoms {
        let a: HardyAtom = random_radial_atom(&mut rng, cfg.b)?;
        let (mut ok, mut worst) = (true, 0.0f64);
        for j in 0..cfg.angles {
            let theta = std::f64::consts::TAU * j as f64 / cfg.angles as f64;
            let r = atom_check(&atom_pushforward(&a, theta), &hardy);
            ok &= r.pass();
            worst = worst.max(r.sup_residual).max(r.mean_residual);
        }
        rows.push(Check::new("pushforward", format!("atom {k}"), worst, 0.0, worst, ATOM_TOL).requiring(ok));
    }

    for k in 0..cfg.kernels {
        let km: Kernel = random_atomic_kernel(&mut rng);
        let n = rng.gen_range(1..=cfg.max_terms.max(1));
        let d: Decomposition = random_decomposition(&mut rng, cfg.b, n)?;
        let image = hausdorff_on_decomposition(&km, &d)?;
        let images_ok = image.terms.iter().all(|(_, a)| atom_check(a, &hardy).pass());
        let lhs = h1_upper_bound(&image);
        let rhs = kernel_l1_norm(&km) * h1_upper_bound(&d);
        rows.push(Check::new("bound", format!("kernel {k}"), lhs, rhs, lhs - rhs, 1e-12).requiring(images_ok));

        let f = d.to_field();
        let mut worst = 0.0f64;
        let mut probed = 0;
        while probed < cfg.probes {
            let z: Point = random_point(&mut rng, 3.0);
            if near_piece_boundary(&image, &z) {
                continue;
            }
            worst = worst.max((image.eval(&z) - hausdorff_apply(&km, &f, &z)?).abs());
            probed += 1;
        }
        rows.push(Check::new("image", format!("kernel {k}"), worst, 0.0, worst, 1e-12));
    }
    Ok(rows)
}

fn mc_ratio<R: Rng>(center: Point, r_big: f64, r_small: f64, cfg: &DoublingConfig, rng: &mut R) -> Result<(f64, f64)> {
    let per = (cfg.samples / cfg.strata.max(1)).max(1);
    let big = monte_carlo_ball_area(&Ball::new(center, r_big)?, cfg.strata, per, rng)?;
    let small = monte_carlo_ball_area(&Ball::new(center, r_small)?, cfg.strata, per, rng)?;
    let ratio = big.value / small.value;
    let se = ratio * ((big.std_err / big.value).powi(2) + (small.std_err / small.value).powi(2)).sqrt();
    Ok((ratio, se))
}

pub fn doubling(cfg: &DoublingConfig, ov: Overrides) -> Result<Vec<Check>> {
    let mut rng = seeded_rng(ov.seed.unwrap_or(cfg.seed));
    let mut rows = Vec::new();
    for &r in &cfg.radii {
        let c: Point = random_point(&mut rng, 2.0);
        let (mc, se) = mc_ratio(c, 2.0 * r, r, cfg, &mut rng)?;
        let value = doubling_ratio(r)?;
        rows.push(Check::new("doubling", format!("r = {r}"), value, mc, (value - mc).abs() / se, cfg.sigmas));
    }
    let tiny = doubling_ratio(1e-4)?;
    rows.push(Check::new("small_ball_limit", "r = 1e-4".into(), tiny, 4.0, (tiny - 4.0).abs(), 1e-6));
    for tb in &cfg.d_tau_b {
        let c: Point = random_point(&mut rng, 2.0);
        let (mc, se) = mc_ratio(c, tb.tau * tb.b, tb.b, cfg, &mut rng)?;
        let value = estimate_d_tau_b(tb.tau, tb.b)?;
        rows.push(Check::new(
            "d_tau_b",
            format!("tau = {}, b = {}", tb.tau, tb.b),
            value,
            mc,
            (value - mc).abs() / se,
            cfg.sigmas,
        ));
    }
    let large = doubling_ratio(cfg.large_radius)?;
    rows.push(
        Check::new("unbounded", format!("r = {}", cfg.large_radius), large, cfg.large_floor, 0.0, 0.0)
            .requiring(large > cfg.large_floor),
    );
    Ok(rows)
}

pub fn weil(cfg: &WeilConfig, ov: Overrides) -> Result<Vec<Check>> {
    let mut rng = seeded_rng(ov.seed.unwrap_or(cfg.seed));
    let grid = cfg.haar.build();
    let mut rows = Vec::new();
    for k in 0..cfg.bumps {
        let c: Point = random_point(&mut rng, cfg.max_center_distance);
        let sigma = rng.gen_range(cfg.sigma[0]..=cfg.sigma[1]);
        let bump = Field::gaussian_bump(c, sigma, 1.0)?;
        let on_group = haar_integrate(|g| bump.eval(&g.act(&Point::i())), &grid)?;
        let disk = GeodesicDisk::new(c, cfg.disk_radius, cfg.disk_nodes[0], cfg.disk_nodes[1])?;
        let on_plane = Domain::Disk(disk).integrate(|z| bump.eval(z));
        rows.push(Check::new(
            "weil",
            format!("bump {k} (sigma = {sigma:.4})"),
            on_group,
            on_plane,
            relative(on_group, on_plane),
            cfg.tolerance,
        ));
    }
    for k in 0..cfg.group_bumps {
        let c: Point = random_point(&mut rng, cfg.max_center_distance);
        let g0 = x_of_z(&c) * rotation_k(rng.gen_range(0.0..std::f64::consts::TAU));
        let s = rng.gen_range(cfg.group_width[0]..=cfg.group_width[1]);
        let bump = move |g: &Sl2| {
            let (m, n) = (g.mat(), g0.mat());
            let d2 = (m.a - n.a).powi(2) + (m.b - n.b).powi(2) + (m.c - n.c).powi(2) + (m.d - n.d).powi(2);
            (-d2 / (2.0 * s * s)).exp()
        };
        for u in &cfg.conjugators {
            let (name, mat) = match *u {
                O2Element::Rotation(t) => (format!("k({t})"), *rotation_k(t).mat()),
                O2Element::Reflection(t) => (format!("v({t})"), reflection_v(t)),
            };
            let (plain, conj) = check_unimodular(bump, &mat, &grid)?;
            rows.push(Check::new(
                "unimodular",
                format!("bump {k}, u = {name}"),
                conj,
                plain,
                relative(conj, plain),
                cfg.tolerance,
            ));
        }
    }
    Ok(rows)
}
