//! NP regularity of the battery 1-form kernel: Hölder slope, stability of the
//! constants `C`, `C′` under grid refinement and independence of the connection.

use crate::config::ExperimentConfig;
use crate::fixtures::k;
use crate::report::{line_chart, ResultRow, Series};
use loopspace_core::bundle::{sample_total, BundleSpec, InfinityConnection};
use loopspace_core::forms::{
    connection_independence_check, contraction_kernel, holder_slope, np_estimate, KernelForm, NpConstants, NpOptions,
};
use loopspace_core::mc::{stream, subseed};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

pub const NP_GRIDS: [usize; 3] = [256, 512, 1024];
/// Kernel samples are capped here; the constants are maxima over pairs and settle well before.
pub const MAX_NP_SAMPLES: usize = 10_000;
const LAGS: [usize; 5] = [1, 2, 4, 8, 16];
const CONNECTIONS: [(InfinityConnection, &str); 2] =
    [(InfinityConnection::Linear, "linear"), (InfinityConnection::Reparametrized, "reparametrized")];

fn kernels(cfg: &ExperimentConfig, spec: &BundleSpec<4>, n: usize, conn: InfinityConnection) -> Vec<KernelForm> {
    let k0 = k(n, 0);
    let samples = cfg.samples.min(MAX_NP_SAMPLES);
    let (base_seed, fiber_seed) = (subseed(cfg.seed, 21), subseed(cfg.seed, 22));
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let lp = sample_total(spec, n, &mut stream(base_seed, i as u64), &mut stream(fiber_seed, i as u64))
                .expect("bundle loop");
            contraction_kernel(&lp, spec, conn, &k0).expect("contraction kernel")
        })
        .collect()
}

/// `(max − min) / mean`.
fn variation(xs: &[f64]) -> f64 {
    let (lo, hi) = xs.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if mean == 0.0 {
        0.0
    } else {
        (hi - lo) / mean
    }
}

pub fn run_np(cfg: &ExperimentConfig) -> (Vec<ResultRow>, Vec<(String, String)>) {
    let exp = cfg.experiment.as_str();
    let spec = cfg.bundle_spec();
    let opts = NpOptions {
        seed: subseed(cfg.seed, 20),
        ..NpOptions::default()
    };
    let mut rows = Vec::new();
    let mut csv = format!("grid,connection,{}\n", NpConstants::CSV_HEADER);

    let start = Instant::now();
    let zero = np_estimate("zero", &[KernelForm::zero(1, 0)], &opts).expect("zero form");
    let zero_max = zero.iter().map(|c| c.c.max(c.c_prime)).fold(0.0, f64::max);
    rows.push(ResultRow::tolerance(exp, "np.zero_form", zero_max, 0.0, 1e-12, start.elapsed()).with_pass(zero_max == 0.0));

    // constants[connection][grid]
    let mut constants: Vec<Vec<Vec<NpConstants>>> = vec![Vec::new(); CONNECTIONS.len()];
    let mut slope_chart = None;
    for &n in &NP_GRIDS {
        for (ci, &(conn, name)) in CONNECTIONS.iter().enumerate() {
            let start = Instant::now();
            let ks = kernels(cfg, &spec, n, conn);
            if ci == 0 && n == *NP_GRIDS.last().unwrap() {
                let (slope, norms) = holder_slope(&ks, n, &LAGS, 64).expect("Hölder slope");
                rows.push(ResultRow::band(exp, "np.holder_slope", slope, 0.45, 0.55, start.elapsed()));
                let points = LAGS.iter().zip(&norms).map(|(&l, &v)| (l as f64 / n as f64, v)).collect();
                slope_chart = Some(line_chart(
                    "Kernel increments vs lag",
                    "lag δ",
                    "‖σ(r+δ) − σ(r)‖",
                    &[Series {
                        name: format!("slope {slope:.3}"),
                        points,
                    }],
                    true,
                ));
            }
            let est = np_estimate(&format!("battery_{name}"), &ks, &opts).expect("NP estimate");
            for c in &est {
                writeln!(csv, "{n},{name},{}", c.csv_row()).unwrap();
                rows.push(ResultRow::info(exp, &format!("np.{name}.N{n}.c{}.C", c.component), c.c, start.elapsed()));
                rows.push(ResultRow::info(exp, &format!("np.{name}.N{n}.c{}.C_prime", c.component), c.c_prime, start.elapsed()));
            }
            constants[ci].push(est);
        }
    }

    let start = Instant::now();
    let mut chart_series = Vec::new();
    for (ci, &(_, name)) in CONNECTIONS.iter().enumerate() {
        let per_grid = &constants[ci];
        let (mut worst_c, mut worst_cp) = (0.0f64, 0.0f64);
        for j in 0..per_grid[0].len() {
            let c: Vec<f64> = per_grid.iter().map(|g| g[j].c).collect();
            let cp: Vec<f64> = per_grid.iter().map(|g| g[j].c_prime).collect();
            worst_c = worst_c.max(variation(&c));
            worst_cp = worst_cp.max(variation(&cp));
            chart_series.push(Series {
                name: format!("{name} C (component {})", per_grid[0][j].component),
                points: NP_GRIDS.iter().zip(&c).map(|(&n, &v)| (n as f64, v)).collect(),
            });
        }
        rows.push(ResultRow::at_most(exp, &format!("np.{name}.C.variation"), worst_c, 0.2, start.elapsed()));
        rows.push(ResultRow::at_most(exp, &format!("np.{name}.C_prime.variation"), worst_cp, 0.2, start.elapsed()));
    }

    let ratios: Vec<_> = (0..NP_GRIDS.len())
        .map(|g| connection_independence_check(&constants[0][g], &constants[1][g]).expect("ratios"))
        .collect();
    let (mut worst_c, mut worst_cp) = (0.0f64, 0.0f64);
    for j in 0..ratios[0].len() {
        let c: Vec<f64> = ratios.iter().map(|r| r[j].c_ratio).collect();
        let cp: Vec<f64> = ratios.iter().map(|r| r[j].c_prime_ratio).collect();
        worst_c = worst_c.max(variation(&c));
        worst_cp = worst_cp.max(variation(&cp));
        let last = ratios.last().unwrap();
        rows.push(ResultRow::info(exp, &format!("np.ratio.c{}.C", last[j].component), last[j].c_ratio, start.elapsed()));
        rows.push(ResultRow::info(exp, &format!("np.ratio.c{}.C_prime", last[j].component), last[j].c_prime_ratio, start.elapsed()));
    }
    rows.push(ResultRow::at_most(exp, "np.ratio.C.variation", worst_c, 0.2, start.elapsed()));
    rows.push(ResultRow::at_most(exp, "np.ratio.C_prime.variation", worst_cp, 0.2, start.elapsed()));

    let mut files = vec![
        ("np_constants.csv".to_string(), csv),
        ("np_constants.svg".to_string(), line_chart("NP constant C vs grid", "grid N", "C", &chart_series, true)),
    ];
    if let Some(svg) = slope_chart {
        files.push(("holder_slope.svg".into(), svg));
    }
    (rows, files)
}
