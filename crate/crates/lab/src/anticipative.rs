//! Anticipative Stratonovich integrals: self-convergence under grid doubling and
//! reduction to the adapted integral for deterministic integrands.

use crate::config::ExperimentConfig;
use crate::report::{line_chart, ResultRow, Series};
use loopspace_core::lie_group::{sample_brownian_motion, AlgebraElement, GroupPath, LieGroup, Su2};
use loopspace_core::mc::{mean_se, normal, par_samples, regression_slope, stream, subseed, Rng};
use loopspace_core::stochastic::{anticipative_stratonovich, anticipative_stratonovich_group, stratonovich_integral};
use std::f64::consts::PI;
use std::time::Instant;

/// Fine grid carrying the noise; coarse partitions divide it.
pub const FINE: usize = 16384;
pub const COARSE: [usize; 5] = [128, 256, 512, 1024, 2048];
/// Coarse grid of the deterministic reduction.
const REDUCTION_GRID: usize = 1024;
const MAX_SAMPLES: usize = 2000;
/// The anticipating time `s̃`.
const LOOKAHEAD: f64 = 0.7;

fn scalar_path(rng: &mut Rng) -> (Vec<f64>, Vec<f64>) {
    let s = (1.0 / FINE as f64).sqrt();
    let db: Vec<f64> = (0..FINE).map(|_| normal(rng) * s).collect();
    let mut b = Vec::with_capacity(FINE + 1);
    b.push(0.0);
    for d in &db {
        b.push(b.last().unwrap() + d);
    }
    (b, db)
}

/// `‖I_N − I_{2N}‖_{L²}` per coarse grid from per-sample squared differences.
fn l2(errs: &[Vec<f64>]) -> Vec<f64> {
    (0..COARSE.len())
        .map(|j| (errs.iter().map(|e| e[j]).sum::<f64>() / errs.len() as f64).sqrt())
        .collect()
}

fn rate(norms: &[f64]) -> f64 {
    let x: Vec<f64> = COARSE.iter().map(|&n| (1.0 / n as f64).ln()).collect();
    let y: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    regression_slope(&x, &y)
}

fn doubling<F: Fn(usize) -> f64>(integral: F) -> Vec<f64> {
    COARSE.iter().map(|&n| (integral(n) - integral(2 * n)).powi(2)).collect()
}

/// `u_v = B_{s̃} + B_v` against `dB`.
fn scalar_sweep(cfg: &ExperimentConfig, samples: usize) -> Vec<f64> {
    let errs = par_samples(subseed(cfg.seed, 30), samples, |_, rng| {
        let (b, db) = scalar_path(rng);
        let ahead = b[(LOOKAHEAD * FINE as f64) as usize];
        let u: Vec<f64> = b.iter().map(|x| ahead + x).collect();
        doubling(|n| anticipative_stratonovich(&u, &db, n, 0.0, 1.0).expect("anticipative integral"))
    });
    l2(&errs)
}

fn imaginary(g: &Su2) -> AlgebraElement {
    let q = g.quaternion();
    AlgebraElement::new(q[1], q[2], q[3])
}

/// `∫⟨g_v u_v, dg_v⟩` on SU(2) with `u_v = Im g_{s̃} + Im g_v`.
fn group_sweep(cfg: &ExperimentConfig, samples: usize) -> Vec<f64> {
    let errs = par_samples(subseed(cfg.seed, 31), samples, |_, rng| {
        let p: GroupPath<Su2> = sample_brownian_motion(FINE, rng).expect("group Brownian motion");
        let ahead = imaginary(&p.points[(LOOKAHEAD * FINE as f64) as usize]);
        let u: Vec<AlgebraElement> = p.points.iter().map(|g| ahead + imaginary(g)).collect();
        doubling(|n| anticipative_stratonovich_group(&u, &p, n, 0.0, 1.0).expect("anticipative integral"))
    });
    l2(&errs)
}

/// Per-sample `(I_N − I_adapted, I_adapted)` for a deterministic scalar integrand.
fn scalar_reduction(cfg: &ExperimentConfig, samples: usize) -> Vec<(f64, f64)> {
    let u: Vec<f64> = (0..=FINE).map(|j| (2.0 * PI * j as f64 / FINE as f64).cos()).collect();
    par_samples(subseed(cfg.seed, 32), samples, |_, rng| {
        let (_, db) = scalar_path(rng);
        let adapted = stratonovich_integral(&u, &db);
        let scheme = anticipative_stratonovich(&u, &db, REDUCTION_GRID, 0.0, 1.0).expect("anticipative integral");
        (scheme - adapted, adapted)
    })
}

/// The same for the group variant, against the Stratonovich sum of `Ad_g u` on the fine grid.
fn group_reduction(cfg: &ExperimentConfig, samples: usize) -> Vec<(f64, f64)> {
    let u: Vec<AlgebraElement> = (0..=FINE)
        .map(|j| {
            let s = j as f64 / FINE as f64;
            AlgebraElement::new((2.0 * PI * s).cos(), s, 0.5)
        })
        .collect();
    par_samples(subseed(cfg.seed, 33), samples, |_, rng| {
        let p: GroupPath<Su2> = sample_brownian_motion(FINE, rng).expect("group Brownian motion");
        let adjusted: Vec<AlgebraElement> = p.points.iter().zip(&u).map(|(g, a)| g.adjoint(a)).collect();
        let adapted = stratonovich_integral(&adjusted, &p.increments);
        let scheme = anticipative_stratonovich_group(&u, &p, REDUCTION_GRID, 0.0, 1.0).expect("anticipative integral");
        (scheme - adapted, adapted)
    })
}

/// Root-mean-square reduction error against `3 SE` of the adapted integral's mean.
fn reduction_row(exp: &str, check: &str, pairs: &[(f64, f64)], wall: std::time::Duration) -> ResultRow {
    let rms = (pairs.iter().map(|(d, _)| d * d).sum::<f64>() / pairs.len() as f64).sqrt();
    let adapted: Vec<f64> = pairs.iter().map(|(_, a)| *a).collect();
    let (_, se) = mean_se(&adapted);
    ResultRow::at_most(exp, check, rms, 3.0 * se, wall)
}

pub fn run_anticipative(cfg: &ExperimentConfig) -> (Vec<ResultRow>, Vec<(String, String)>) {
    let exp = cfg.experiment.as_str();
    let samples = cfg.samples.min(MAX_SAMPLES);
    let mut rows = Vec::new();
    let mut series = Vec::new();

    for (name, sweep) in [("scalar", scalar_sweep as fn(&ExperimentConfig, usize) -> Vec<f64>), ("su2", group_sweep)] {
        let start = Instant::now();
        let norms = sweep(cfg, samples);
        let wall = start.elapsed();
        for (&n, &v) in COARSE.iter().zip(&norms) {
            rows.push(ResultRow::info(exp, &format!("anticipative.{name}.doubling.N{n}"), v, wall));
        }
        rows.push(ResultRow::band(exp, &format!("anticipative.{name}.rate"), rate(&norms), 0.4, 0.6, wall));
        series.push(Series {
            name: name.into(),
            points: COARSE.iter().zip(&norms).map(|(&n, &v)| (1.0 / n as f64, v)).collect(),
        });
    }

    let start = Instant::now();
    let pairs = scalar_reduction(cfg, samples);
    rows.push(reduction_row(exp, "anticipative.scalar.deterministic_reduction", &pairs, start.elapsed()));
    let start = Instant::now();
    let pairs = group_reduction(cfg, samples);
    rows.push(reduction_row(exp, "anticipative.su2.deterministic_reduction", &pairs, start.elapsed()));

    let start = Instant::now();
    let p: GroupPath<Su2> =
        sample_brownian_motion(FINE, &mut stream(subseed(cfg.seed, 34), 0)).expect("group Brownian motion");
    let zero = anticipative_stratonovich_group(&vec![AlgebraElement::zero(); FINE + 1], &p, 64, 0.0, 1.0)
        .expect("anticipative integral");
    rows.push(ResultRow::tolerance(exp, "anticipative.zero_integrand", zero, 0.0, 1e-12, start.elapsed()).with_pass(zero == 0.0));

    let chart = line_chart("Anticipative self-convergence", "Δt", "‖I_N − I_2N‖_L²", &series, true);
    (rows, vec![("anticipative_convergence.svg".into(), chart)])
}
