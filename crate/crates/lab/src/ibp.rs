//! Integration-by-parts batteries on the loop group, the base loop space and the
//! loop bundle, plus the quasi-invariance checks for the group Brownian motion.

use crate::config::ExperimentConfig;
use crate::report::{ResultRow, Series};
use loopspace_core::bundle::{
    divergence_horizontal, divergence_vertical, horizontal_field, sample_total, BundleLoop, TotalPoint, TotalTangent,
    VerticalField,
};
use loopspace_core::lie_group::{
    quasi_invariance_density, sample_brownian_bridge, sample_brownian_motion, AlgebraElement, GroupPath, LieGroup,
    Side, Su2,
};
use loopspace_core::manifold::{field_values, sample_brownian_bridge_manifold, ManifoldPath, Sphere, VectorFieldH, S2, S3};
use loopspace_core::mc::{par_samples, subseed};
use loopspace_core::stochastic::{divergence_base, divergence_left, divergence_right, AlgebraFieldK, McReport};
use nalgebra::{SVector, Vector3, Vector4};
use std::f64::consts::PI;
use std::time::Instant;

type Ambient<const M: usize> = fn(&[SVector<f64, M>]) -> f64;

/// Central-difference gradient of an ambient function in every slot.
fn ambient_gradient<const M: usize>(f: Ambient<M>, x: &[SVector<f64, M>]) -> Vec<SVector<f64, M>> {
    let h = 1e-6;
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            SVector::<f64, M>::from_fn(|j, _| {
                y[i][j] = x[i][j] + h;
                let up = f(&y);
                y[i][j] = x[i][j] - h;
                let down = f(&y);
                y[i][j] = x[i][j];
                (up - down) / (2.0 * h)
            })
        })
        .collect()
}

/// Grid indices of the sampling times `1/3` and `2/3`.
fn slots(steps: usize) -> [usize; 2] {
    [(steps as f64 / 3.0).round() as usize, (2.0 * steps as f64 / 3.0).round() as usize]
}

fn rows_from_pairs(
    cfg: &ExperimentConfig,
    names: &[String],
    per_sample: &[Vec<(f64, f64)>],
    wall: std::time::Duration,
) -> Vec<ResultRow> {
    names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let pairs: Vec<(f64, f64)> = per_sample.iter().map(|s| s[j]).collect();
            ResultRow::from_mc(&cfg.experiment, name, &McReport::from_pairs(&pairs, cfg.threshold), wall)
        })
        .collect()
}

// Group battery: functions of the quaternion coordinates of g_{1/3}, g_{2/3}.

const GROUP_F: [Ambient<4>; 3] = [
    |q| q[0][1] * q[1][2] + q[0][0],
    |q| (q[0][3] + q[1][1]).sin() * q[1][0],
    |q| q[0][0] * q[1][0] + q[0][1] * q[1][1] + q[0][2] * q[0][2],
];

fn group_k(steps: usize, which: usize) -> AlgebraFieldK {
    AlgebraFieldK::from_fn(steps, move |s| match which {
        0 => AlgebraElement::new((PI * s).sin(), 0.5 * (2.0 * PI * s).sin(), 0.0) * 1.5,
        _ => AlgebraElement::new(0.3 * (PI * s).sin(), 4.0 * s * (1.0 - s), -(PI * s).sin()),
    })
    .expect("battery fields vanish at the endpoints")
}

/// `(F, K, side)` for the six group pairs.
const GROUP_PAIRS: [(usize, usize, Side); 6] = [
    (0, 0, Side::Left),
    (1, 1, Side::Left),
    (2, 0, Side::Left),
    (0, 1, Side::Right),
    (1, 0, Side::Right),
    (2, 1, Side::Right),
];

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// `E[⟨dF, X⟩] = E[F div X]` for left fields `K g` and right fields `g K` on loops in SU(2).
pub fn group_battery(cfg: &ExperimentConfig) -> Vec<ResultRow> {
    let start = Instant::now();
    let n = cfg.grid;
    let ks = [group_k(n, 0), group_k(n, 1)];
    let idx = slots(n);
    let per_sample = par_samples(subseed(cfg.seed, 1), cfg.samples, |_, rng| {
        let path = sample_brownian_bridge(&Su2::identity(), n, rng).expect("identity is far from the cut locus");
        let q: Vec<Vector4<f64>> = idx.iter().map(|&i| path.points[i].quaternion()).collect();
        GROUP_PAIRS
            .iter()
            .map(|&(fi, ki, side)| {
                let grad = ambient_gradient(GROUP_F[fi], &q);
                let k = &ks[ki];
                let deriv: f64 = idx
                    .iter()
                    .zip(&grad)
                    .map(|(&i, g)| {
                        let g = path.points[i].right_trivialize(g);
                        let v = match side {
                            Side::Left => k.values[i],
                            Side::Right => path.points[i].adjoint(&k.values[i]),
                        };
                        g.dot(&v)
                    })
                    .sum();
                let div = match side {
                    Side::Left => divergence_left(k, &path),
                    Side::Right => divergence_right(k, &path),
                }
                .expect("field and path share the grid");
                (deriv, GROUP_F[fi](&q) * div)
            })
            .collect::<Vec<_>>()
    });
    let names: Vec<String> =
        GROUP_PAIRS.iter().map(|&(f, k, side)| format!("group.F{f}.K{k}.{}", side_name(side))).collect();
    rows_from_pairs(cfg, &names, &per_sample, start.elapsed())
}

// Base battery on S².

const BASE_F: [Ambient<3>; 3] = [
    |x| x[0][0] * x[1][1] + x[0][2],
    |x| f64::sin(2.0 * x[0][0]) * x[1][1].exp(),
    |x| x[0][1] * x[0][1] + x[0][0] * x[1][0] - x[1][2],
];

fn base_h(steps: usize, which: usize) -> VectorFieldH<3> {
    VectorFieldH::from_fn(&S2::north(), steps, move |s| match which {
        0 => Vector3::new(2.0 * (PI * s).sin(), (2.0 * PI * s).sin(), 0.0),
        _ => Vector3::new(-(2.0 * PI * s).sin(), 8.0 * s * (1.0 - s), 0.0),
    })
    .expect("battery fields vanish at the endpoints")
}

const BASE_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)];

/// `½ Ric Σ ⟨H_k, w_k⟩`, the curvature part of the base divergence.
fn ricci_term<const A: usize>(h: &VectorFieldH<A>, path: &ManifoldPath<A>) -> f64 {
    let ric = Sphere::<A>::DIM as f64 - 1.0;
    0.5 * ric * (0..path.steps()).map(|k| h.values[k].dot(&path.antidevelopment[k])).sum::<f64>()
}

/// Base IBP on S² with and without the Ricci counterterm. Rows for the ablated
/// divergence pass when the identity is violated (`|z| > 5` on some pair is
/// checked by the caller).
pub fn base_battery(cfg: &ExperimentConfig) -> (Vec<ResultRow>, Vec<ResultRow>) {
    let start = Instant::now();
    let n = cfg.grid;
    let hs = [base_h(n, 0), base_h(n, 1)];
    let idx = slots(n);
    let x = S2::north();
    let per_sample = par_samples(subseed(cfg.seed, 2), cfg.samples, |_, rng| {
        let path = sample_brownian_bridge_manifold(&x, &x, n, rng).expect("bridge on S²");
        let pts: Vec<Vector3<f64>> = idx.iter().map(|&i| path.points[i]).collect();
        let mut out = Vec::with_capacity(2 * BASE_PAIRS.len());
        let mut ablated = Vec::with_capacity(BASE_PAIRS.len());
        for &(fi, hi) in &BASE_PAIRS {
            let h = &hs[hi];
            let xs = field_values(h, &path).expect("field and path share the grid");
            let grad = ambient_gradient(BASE_F[fi], &pts);
            let deriv: f64 = idx.iter().zip(&grad).map(|(&i, g)| g.dot(&xs[i])).sum();
            let div = divergence_base(h, &path).expect("field and path share the grid");
            let f = BASE_F[fi](&pts);
            out.push((deriv, f * div));
            ablated.push((deriv, f * (div - ricci_term(h, &path))));
        }
        out.extend(ablated);
        out
    });
    let wall = start.elapsed();
    let mut names: Vec<String> = BASE_PAIRS.iter().map(|&(f, h)| format!("base.F{f}.H{h}")).collect();
    names.extend(BASE_PAIRS.iter().map(|&(f, h)| format!("base_no_ricci.F{f}.H{h}")));
    let mut rows = rows_from_pairs(cfg, &names, &per_sample, wall);
    let ablation = rows.split_off(BASE_PAIRS.len());
    (rows, ablation)
}

// Total-space battery on the loop bundle over S³; each slot is (γ, h) as two 4-vectors.

const TOTAL_F: [Ambient<4>; 2] = [
    |q| q[0][1] * q[3][2] + q[1][0] * q[2][3],
    |q| (q[1][1] + q[2][2]).sin() + q[0][3] * q[3][0] + q[1][3] * q[3][1],
];

fn total_h(steps: usize, which: usize) -> VectorFieldH<4> {
    VectorFieldH::from_fn(&S3::base_point(), steps, move |s| match which {
        0 => Vector4::new(0.0, 2.0 * (PI * s).sin(), (2.0 * PI * s).sin(), 0.0),
        _ => Vector4::new(0.0, 0.0, -(PI * s).sin(), 6.0 * s * (1.0 - s)),
    })
    .expect("battery fields vanish at the endpoints")
}

fn total_k(steps: usize, which: usize) -> AlgebraFieldK {
    AlgebraFieldK::from_fn(steps, move |s| match which {
        0 => AlgebraElement::new(2.0 * (PI * s).sin(), 0.0, (2.0 * PI * s).sin()),
        _ => AlgebraElement::new(0.5, -1.0, 1.5) * (4.0 * s * (1.0 - s)),
    })
    .expect("battery fields vanish at the endpoints")
}

fn total_derivative(f: Ambient<4>, pts: &[TotalPoint<4>], idx: &[usize], tangents: &[TotalTangent<4>]) -> (f64, f64) {
    let q: Vec<Vector4<f64>> = idx.iter().flat_map(|&i| [pts[i].base, pts[i].fiber.quaternion()]).collect();
    let grad = ambient_gradient(f, &q);
    let deriv = idx
        .iter()
        .enumerate()
        .map(|(j, &i)| {
            let gb = Sphere::<4>::project(&pts[i].base, &grad[2 * j]);
            let gf = pts[i].fiber.right_trivialize(&grad[2 * j + 1]);
            gb.dot(&tangents[i].base) + gf.dot(&tangents[i].fiber)
        })
        .sum();
    (deriv, f(&q))
}

/// `E[⟨dF, X^H(H)⟩] = E[F div X^H(H)]` and the same for `X^V(K)` on the loop bundle.
pub fn total_battery(cfg: &ExperimentConfig) -> Vec<ResultRow> {
    let start = Instant::now();
    let n = cfg.grid;
    let spec = cfg.bundle_spec();
    let conn = cfg.infinity_connection();
    let hs = [total_h(n, 0), total_h(n, 1)];
    let ks = [total_k(n, 0), total_k(n, 1)];
    let idx = slots(n);
    let (base_seed, fiber_seed) = (subseed(cfg.seed, 3), subseed(cfg.seed, 4));
    let per_sample = par_samples(base_seed, cfg.samples, |i, base_rng| {
        let mut fiber_rng = loopspace_core::mc::stream(fiber_seed, i as u64);
        let lp: BundleLoop<4> = sample_total(&spec, n, base_rng, &mut fiber_rng).expect("bundle loop");
        let pts = lp.points();
        let mut out = Vec::with_capacity(8);
        for h in &hs {
            let field = horizontal_field(h, &lp, &spec, conn).expect("horizontal field");
            let tangents = field.tangents(&lp);
            let div = divergence_horizontal(h, &field, &lp).expect("horizontal divergence");
            for f in TOTAL_F {
                let (d, v) = total_derivative(f, &pts, &idx, &tangents);
                out.push((d, v * div));
            }
        }
        for k in &ks {
            let tangents = VerticalField { k: k.clone() }.tangents(&lp);
            let div = divergence_vertical(k, &lp).expect("vertical divergence");
            for f in TOTAL_F {
                let (d, v) = total_derivative(f, &pts, &idx, &tangents);
                out.push((d, v * div));
            }
        }
        out
    });
    let mut names = Vec::new();
    for h in 0..2 {
        for f in 0..2 {
            names.push(format!("total.F{f}.XH{h}"));
        }
    }
    for k in 0..2 {
        for f in 0..2 {
            names.push(format!("total.F{f}.XV{k}"));
        }
    }
    rows_from_pairs(cfg, &names, &per_sample, start.elapsed())
}

// Quasi-invariance of the group Brownian motion under translation by k.

fn translation(steps: usize, which: usize) -> Vec<Su2> {
    (0..=steps)
        .map(|j| {
            let s = j as f64 / steps as f64;
            let a = match which {
                0 => AlgebraElement::new(s, 0.0, 0.0),
                1 => AlgebraElement::new(0.5 * (PI * s).sin(), s * s, 0.0),
                _ => AlgebraElement::new(0.3 * s, -0.4 * s, (2.0 * PI * s).sin() * 0.5),
            };
            Su2::exp(&a)
        })
        .collect()
}

fn translate(k: &[Su2], path: &GroupPath<Su2>, side: Side) -> Vec<Su2> {
    k.iter()
        .zip(&path.points)
        .map(|(k, g)| match side {
            Side::Left => k.compose(g),
            Side::Right => g.compose(k),
        })
        .collect()
}

/// `E[J(k)] = 1` for three translations, and `E[F(k·g)] = E[F(g) J(k)]` on both sides.
pub fn quasi_invariance(cfg: &ExperimentConfig) -> Vec<ResultRow> {
    let start = Instant::now();
    let n = cfg.grid;
    let ks: Vec<Vec<Su2>> = (0..3).map(|w| translation(n, w)).collect();
    let idx = slots(n);
    let f = GROUP_F[1];
    let per_sample = par_samples(subseed(cfg.seed, 5), cfg.samples, |_, rng| {
        let path = sample_brownian_motion::<Su2>(n, rng).expect("Brownian motion");
        let mut out: Vec<(f64, f64)> =
            ks.iter().map(|k| (quasi_invariance_density(k, &path, Side::Left), 1.0)).collect();
        let at = |pts: &[Su2]| f(&idx.iter().map(|&i| pts[i].quaternion()).collect::<Vec<_>>());
        for (k, side) in [(&ks[1], Side::Left), (&ks[2], Side::Right)] {
            let moved = translate(k, &path, side);
            out.push((at(&moved), at(&path.points) * quasi_invariance_density(k, &path, side)));
        }
        out
    });
    let names: Vec<String> = (0..3)
        .map(|w| format!("qi.E_J_left.k{w}"))
        .chain(["qi.change_of_measure.k1.left".into(), "qi.change_of_measure.k2.right".into()])
        .collect();
    rows_from_pairs(cfg, &names, &per_sample, start.elapsed())
}

/// All IBP and quasi-invariance rows, the Ricci ablation verdict and a z-score chart.
pub fn run_ibp(cfg: &ExperimentConfig) -> (Vec<ResultRow>, Vec<(String, String)>) {
    let start = Instant::now();
    let group = group_battery(cfg);
    let (base, ablated) = base_battery(cfg);
    let total = total_battery(cfg);
    let qi = quasi_invariance(cfg);
    let max_ablated = ablated.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
    let mut rows: Vec<ResultRow> = Vec::new();
    let chart = crate::report::line_chart(
        "Integration by parts: z-scores",
        "pair",
        "z",
        &[&group, &base, &ablated, &total]
            .iter()
            .zip(["group", "base", "base without Ricci", "total"])
            .map(|(rs, name)| Series {
                name: name.into(),
                points: rs.iter().enumerate().map(|(i, r)| (i as f64, r.z)).collect(),
            })
            .collect::<Vec<_>>(),
        false,
    );
    rows.extend(group);
    rows.extend(base);
    // Ablated rows are informative; only the aggregate verdict is mandatory.
    rows.extend(ablated.into_iter().map(|r| r.with_pass(true)));
    rows.push(
        ResultRow::at_least(&cfg.experiment, "base_no_ricci.max_abs_z", max_ablated, 5.0, start.elapsed()),
    );
    rows.extend(total);
    rows.extend(qi);
    (rows, vec![("ibp_z_scores.svg".into(), chart)])
}
