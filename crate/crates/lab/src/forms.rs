//! Deterministic checks: geometry oracles, the bracket decomposition, the
//! canonical 2-form and closedness of the Carey–Murray form.

use crate::config::ExperimentConfig;
use crate::fixtures::{fields, h, k, smooth_loop};
use crate::report::{line_chart, ResultRow, Series};
use loopspace_core::bundle::{
    bracket_argument, bracket_horizontal, bundle_transport, holonomy_derivative, BundleLoop, BundleSpec,
    InfinityConnection, LinearConnection,
};
use loopspace_core::forms::{
    canonical_two_form, carey_murray, chern_simons, closedness_defect, cocycle_residual, fiber_canonical, flow_loop,
    mu_form, p1_density, transgression_tau_nu, DerivativeContext, LoopTangent, TotalField,
};
use loopspace_core::lie_group::AlgebraElement;
use loopspace_core::manifold::path::geodesic_polygon;
use loopspace_core::manifold::{
    field_values, sample_brownian_bridge_manifold, Frame, ManifoldPath, Vector, VectorFieldH, S2, S3,
};
use loopspace_core::mc::{normal, par_samples, regression_slope, stream, subseed};
use nalgebra::{SMatrix, Vector4};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

/// Grids of the closedness sweep.
pub const CLOSEDNESS_GRIDS: [usize; 4] = [256, 512, 1024, 2048];

struct Rows<'a> {
    experiment: &'a str,
    rows: Vec<ResultRow>,
    clock: Instant,
}

impl<'a> Rows<'a> {
    fn new(experiment: &'a str) -> Self {
        Self {
            experiment,
            rows: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn lap(&mut self) -> Duration {
        let d = self.clock.elapsed();
        self.clock = Instant::now();
        d
    }

    fn at_most(&mut self, check: &str, value: f64, max: f64) {
        let wall = self.lap();
        self.rows.push(ResultRow::at_most(self.experiment, check, value, max, wall));
    }

    fn at_least(&mut self, check: &str, value: f64, min: f64) {
        let wall = self.lap();
        self.rows.push(ResultRow::at_least(self.experiment, check, value, min, wall));
    }

    fn tolerance(&mut self, check: &str, lhs: f64, rhs: f64, tol: f64) {
        let wall = self.lap();
        self.rows.push(ResultRow::tolerance(self.experiment, check, lhs, rhs, tol, wall));
    }

    fn info(&mut self, check: &str, value: f64) {
        let wall = self.lap();
        self.rows.push(ResultRow::info(self.experiment, check, value, wall));
    }
}

/// The non-flat S³ instance; geometry checks degenerate on the flat bundle.
fn curved(cfg: &ExperimentConfig) -> BundleSpec<4> {
    BundleSpec::maurer_cartan(if cfg.lambda == 0.0 { 0.5 } else { cfg.lambda })
}

/// `max_k ‖τ_kᵀ τ_k − I‖` over sampled S² bridges and `max_k |‖T_k‖ − 1|` over the bundle transport.
fn transport_isometry(cfg: &ExperimentConfig) -> f64 {
    let x = S2::north();
    let n = cfg.grid;
    let spec = curved(cfg);
    let errs = par_samples(subseed(cfg.seed, 10), 64, |i, rng| {
        let p = sample_brownian_bridge_manifold(&x, &x, n, rng).expect("S² bridge");
        let frame = p
            .transport
            .iter()
            .map(|t| (t.transpose() * t - Frame::<3>::identity()).norm())
            .fold(0.0, f64::max);
        let base = sample_brownian_bridge_manifold(&S3::base_point(), &S3::base_point(), n, &mut stream(subseed(cfg.seed, 11), i as u64))
            .expect("S³ bridge");
        let unit = bundle_transport(&base, &spec)
            .iter()
            .map(|t| (t.quaternion().norm() - 1.0).abs())
            .fold(0.0, f64::max);
        frame.max(unit)
    });
    errs.into_iter().fold(0.0, f64::max)
}

/// Holonomy rotation angle of the geodesic octant triangle and the number of steps used.
fn octant_holonomy(grid: usize) -> (f64, usize) {
    let per_edge = grid.div_ceil(3).max(1);
    let c = [S2::north(), Vector::<3>::new(1.0, 0.0, 0.0), Vector::<3>::new(0.0, 1.0, 0.0), S2::north()];
    let p = ManifoldPath::from_points(geodesic_polygon(&c, per_edge).expect("octant")).expect("octant path");
    let out = p.holonomy() * Vector::<3>::new(1.0, 0.0, 0.0);
    (out[1].atan2(out[0]).abs(), 3 * per_edge)
}

/// Relative error of the holonomy derivative against a central flow difference at grid 2048.
fn holonomy_derivative_error(spec: &BundleSpec<4>) -> f64 {
    let n = 2048;
    let pts = (0..=n)
        .map(|j| {
            let s = 2.0 * PI * j as f64 / n as f64;
            S3::normalize(&Vector4::new(1.0 + 0.2 * (1.0 - s.cos()), 0.9 * s.sin(), 0.7 * (1.0 - s.cos()), 0.5 * (2.0 * s).sin()))
        })
        .collect();
    let path = ManifoldPath::from_points(pts).expect("smooth loop");
    let hf = VectorFieldH::from_fn(path.base(), n, |s| {
        Vector4::new(0.0, (PI * s).sin(), 0.3 * (2.0 * PI * s).sin(), 0.5 * (PI * s).sin().powi(2))
    })
    .expect("field vanishes at the endpoints");
    let xs = field_values(&hf, &path).expect("field on path");
    let hol = |e: f64| {
        let pts = path.points.iter().zip(&xs).map(|(p, v)| S3::geodesic_exp(p, &(v * e))).collect();
        *bundle_transport(&ManifoldPath::from_points(pts).expect("flowed loop"), spec).last().unwrap()
    };
    let e = 1e-5;
    let fd = (hol(e).quaternion() - hol(-e).quaternion()) / (2.0 * e);
    let eta = holonomy_derivative(&path, spec, &xs).expect("holonomy derivative");
    (fd - hol(0.0).left_translate(&eta)).norm() / fd.norm()
}

/// Ambient presentation of a loop tangent: base vectors and quaternions `δg`.
fn ambient(lp: &BundleLoop<4>, t: &LoopTangent<4>) -> (Vec<Vector<4>>, Vec<Vector4<f64>>) {
    let fiber = lp.fiber.points.iter().zip(&t.fiber).map(|(g, a)| g.right_translate(a)).collect();
    (t.base.clone(), fiber)
}

/// `[X, Y] = D_X Y − D_Y X` by central flow differences, fiber right-trivialized.
fn flow_commutator(
    lp: &BundleLoop<4>,
    x: &TotalField<4>,
    y: &TotalField<4>,
    spec: &BundleSpec<4>,
    conn: InfinityConnection,
) -> LoopTangent<4> {
    let eps = 1e-4;
    let directional = |a: &TotalField<4>, b: &TotalField<4>| {
        let ta = a.tangent(lp, spec, conn).expect("tangent");
        let at = |e: f64| {
            let l = flow_loop(lp, &ta, e, spec).expect("flowed loop");
            ambient(&l, &b.tangent(&l, spec, conn).expect("tangent"))
        };
        let ((bp, fp), (bm, fm)) = (at(eps), at(-eps));
        let d = 0.5 / eps;
        let base: Vec<Vector<4>> = bp.iter().zip(&bm).map(|(p, m)| (p - m) * d).collect();
        let fiber: Vec<Vector4<f64>> = fp.iter().zip(&fm).map(|(p, m)| (p - m) * d).collect();
        (base, fiber)
    };
    let (bxy, fxy) = directional(x, y);
    let (byx, fyx) = directional(y, x);
    LoopTangent {
        base: bxy.iter().zip(&byx).map(|(a, b)| a - b).collect(),
        fiber: lp
            .fiber
            .points
            .iter()
            .zip(fxy.iter().zip(&fyx))
            .map(|(g, (a, b))| g.right_trivialize(&(a - b)))
            .collect(),
    }
}

/// `(‖u − v‖, ‖v‖)` in the grid `ℓ²` norm.
fn distance(u: &LoopTangent<4>, v: &LoopTangent<4>) -> (f64, f64) {
    let mut err = 0.0;
    let mut norm = 0.0;
    for j in 0..u.base.len() {
        err += (u.base[j] - v.base[j]).norm_squared() + (u.fiber[j] - v.fiber[j]).norm_squared();
        norm += v.base[j].norm_squared() + v.fiber[j].norm_squared();
    }
    (err.sqrt(), norm.sqrt())
}

fn random_linear(seed: u64) -> LinearConnection<4> {
    let mut rng = stream(seed, 0);
    let mut m = || SMatrix::<f64, 4, 4>::from_fn(|_, _| 0.5 * normal(&mut rng));
    let l = [m(), m(), m()];
    let mut rng = stream(seed, 1);
    let mut v = || Vector::<4>::from_fn(|_, _| normal(&mut rng));
    LinearConnection { l, c: [v(), v(), v()] }
}

/// `max |dν − p₁|` over random points of ℝ⁴, with `dν` by fourth-order differences.
fn chern_simons_defect(seed: u64) -> f64 {
    let conn = random_linear(seed);
    let mut rng = stream(seed, 2);
    let e = |i: usize| Vector::<4>::from_fn(|j, _| if i == j { 1.0 } else { 0.0 });
    let h = 1e-4;
    (0..10)
        .map(|_| {
            let p = Vector::<4>::from_fn(|_, _| normal(&mut rng));
            let mut dnu = 0.0;
            for i in 0..4 {
                let rest: Vec<usize> = (0..4).filter(|&j| j != i).collect();
                let nu = |q: Vector<4>| chern_simons(&conn, &q, &e(rest[0]), &e(rest[1]), &e(rest[2]));
                let d = (8.0 * (nu(p + e(i) * h) - nu(p - e(i) * h)) - (nu(p + e(i) * 2.0 * h) - nu(p - e(i) * 2.0 * h)))
                    / (12.0 * h);
                dnu += if i % 2 == 0 { d } else { -d };
            }
            (dnu - p1_density(&conn, &p, [&e(0), &e(1), &e(2), &e(3)])).abs()
        })
        .fold(0.0, f64::max)
}

fn grid_path(n: usize, f: impl Fn(f64) -> AlgebraElement) -> Vec<AlgebraElement> {
    (0..=n).map(|j| f(j as f64 / n as f64)).collect()
}

fn canonical_rows(r: &mut Rows) {
    let a = AlgebraElement::new(1.0, 0.0, 0.0);
    let n = 4096;
    let kx = grid_path(n, |s| a * (2.0 * PI * s).sin());
    let ky = grid_path(n, |s| a * (1.0 - (2.0 * PI * s).cos()));
    let c = canonical_two_form(&kx, &ky).expect("canonical form");
    r.tolerance("canonical.value", c, 1.0 / (4.0 * PI), 1e-8);

    let n = 2048;
    let x = grid_path(n, |s| AlgebraElement::new((2.0 * PI * s).sin(), s * (1.0 - s), 0.3 * (4.0 * PI * s).sin()));
    let y = grid_path(n, |s| AlgebraElement::new(1.0 - (2.0 * PI * s).cos(), (PI * s).sin().powi(3), -s * (1.0 - s)));
    let z = grid_path(n, |s| {
        AlgebraElement::new(0.2, 1.0, -0.5) * (6.0 * PI * s).sin() + AlgebraElement::new(s * (1.0 - s), 0.0, 0.0)
    });
    r.at_most("canonical.cocycle_residual", cocycle_residual(&x, &y, &z).expect("cocycle").abs(), 1e-6);
}

fn bracket_rows(r: &mut Rows, cfg: &ExperimentConfig) {
    let n = 1024;
    let spec = curved(cfg);
    let conn = cfg.infinity_connection();
    let lp = smooth_loop(n, &spec);
    let (x, y) = (TotalField::Horizontal(h(n, 0)), TotalField::Horizontal(h(n, 1)));
    let d = bracket_horizontal(&h(n, 0), &h(n, 1), &lp, &spec, conn).expect("bracket");
    let decomposition = LoopTangent {
        base: d.base().to_vec(),
        fiber: d.fiber(),
    };
    let (err, norm) = distance(&decomposition, &flow_commutator(&lp, &x, &y, &spec, conn));
    r.at_most("bracket.horizontal.rel_error", err / norm, 5e-2);
    r.info("bracket.horizontal.R_inf_max", d.vertical.iter().map(|v| v.norm()).fold(0.0, f64::max));

    // Flat base curvature closure and flat bundle: coordinate fields commute exactly.
    let flat = BundleSpec::<4>::flat();
    let lp_flat = smooth_loop(n, &flat);
    let argument = bracket_argument(&lp_flat.base.antidevelopment, &h(n, 0), &h(n, 1), |_, _, _| Vector::<4>::zeros())
        .expect("bracket argument");
    let vertical = bracket_horizontal(&h(n, 0), &h(n, 1), &lp_flat, &flat, conn).expect("bracket");
    let flat_flat = argument
        .iter()
        .map(|v| v.norm())
        .chain(vertical.fiber().iter().map(|v| v.norm()))
        .fold(0.0, f64::max);
    r.at_most("bracket.flat_flat", flat_flat, 1e-6);

    let kf = TotalField::Vertical(k(n, 1));
    let mixed = flow_commutator(&lp, &x, &kf, &spec, conn);
    let size = k(n, 1).values.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt();
    let (err, _) = distance(&LoopTangent::zero(n), &mixed);
    r.at_most("bracket.mixed.rel_size", err / size, 5e-3);
}

fn geometry_rows(r: &mut Rows, cfg: &ExperimentConfig) {
    r.at_most("geometry.transport_isometry", transport_isometry(cfg), 1e-10);
    let (angle, steps) = octant_holonomy(cfg.grid);
    r.tolerance("geometry.octant_holonomy", angle, PI / 2.0, 2.0 * PI / steps as f64);
    r.at_most("geometry.holonomy_derivative.rel_error", holonomy_derivative_error(&curved(cfg)), 1e-3);
}

/// Flat-bundle reductions of `μ` and `τ(ν)` and the vertical reduction of `F_Q` to `c`.
fn reduction_rows(r: &mut Rows, cfg: &ExperimentConfig) {
    let n = 256;
    let conn = cfg.infinity_connection();
    let flat = BundleSpec::<4>::flat();
    let lp = smooth_loop(n, &flat);
    let tx = TotalField::Horizontal(h(n, 0)).tangent(&lp, &flat, conn).expect("tangent");
    let ty = TotalField::Horizontal(h(n, 1)).tangent(&lp, &flat, conn).expect("tangent");
    let flat_terms = mu_form(&lp, &flat, &tx.base, &ty.base).abs() + transgression_tau_nu(&lp, &flat, &tx.base, &ty.base).abs();
    r.at_most("forms.flat_mu_tau_nu", flat_terms, 1e-12);

    let spec = curved(cfg);
    let lp = smooth_loop(n, &spec);
    let (u, v) = (
        TotalField::Vertical(k(n, 0)).tangent(&lp, &spec, conn).expect("tangent"),
        TotalField::Vertical(k(n, 1)).tangent(&lp, &spec, conn).expect("tangent"),
    );
    let fq = carey_murray(&lp, &spec, &u, &v).expect("Carey–Murray form");
    let c = fiber_canonical(&lp, &u, &v).expect("canonical form");
    r.tolerance("forms.vertical_reduces_to_c", fq, c, 1e-12 + 1e-9 * c.abs());
}

/// `|dF_Q|` summed over one HHH, HHV, HVV and VVV triple, per grid.
pub fn closedness_sweep(cfg: &ExperimentConfig) -> Vec<(usize, f64)> {
    let ctx = DerivativeContext::new(curved(cfg), cfg.infinity_connection());
    CLOSEDNESS_GRIDS
        .iter()
        .map(|&n| {
            let lp = smooth_loop(n, &ctx.spec);
            let defect = ["HHH", "HHV", "HVV", "VVV"]
                .iter()
                .map(|p| closedness_defect(&ctx, &lp, &fields(n, p)).expect("closedness defect").abs())
                .sum();
            (n, defect)
        })
        .collect()
}

fn closedness_rows(r: &mut Rows, cfg: &ExperimentConfig) -> String {
    let sweep = closedness_sweep(cfg);
    for (n, d) in &sweep {
        r.info(&format!("closedness.dFQ.N{n}"), *d);
    }
    let worst_ratio = sweep.windows(2).map(|w| w[1].1 / w[0].1).fold(0.0, f64::max);
    r.at_most("closedness.monotone.max_ratio", worst_ratio, 1.0);
    let x: Vec<f64> = sweep.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let y: Vec<f64> = sweep.iter().map(|(_, d)| d.ln()).collect();
    r.at_least("closedness.order", -regression_slope(&x, &y), 1.0);
    r.at_most("closedness.dnu_minus_p1", chern_simons_defect(subseed(cfg.seed, 12)), 1e-5);
    let points = sweep.iter().map(|&(n, d)| (n as f64, d)).collect();
    line_chart(
        "Carey–Murray closedness defect",
        "grid N",
        "|dF_Q|",
        &[Series {
            name: "|dF_Q|".into(),
            points,
        }],
        true,
    )
}

pub fn run_forms(cfg: &ExperimentConfig) -> (Vec<ResultRow>, Vec<(String, String)>) {
    let mut r = Rows::new(&cfg.experiment);
    geometry_rows(&mut r, cfg);
    bracket_rows(&mut r, cfg);
    canonical_rows(&mut r);
    reduction_rows(&mut r, cfg);
    let chart = closedness_rows(&mut r, cfg);
    (r.rows, vec![("closedness.svg".into(), chart)])
}
