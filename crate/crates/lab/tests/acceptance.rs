//! Acceptance suite: runs every subcommand on the default configuration and
//! prints one line per criterion. Tolerances are pinned here, independently of
//! the pass flags the runners compute.

use loopspace_lab::config::{ExperimentConfig, Overrides};
use loopspace_lab::report::ResultRow;
use loopspace_lab::{execute, Outcome, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const Z_MAX: f64 = 3.0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn rows_with<'a>(o: &'a Outcome, prefix: &str) -> Vec<&'a ResultRow> {
    o.rows.iter().filter(|r| r.check.starts_with(prefix)).collect()
}

fn row<'a>(o: &'a Outcome, check: &str) -> &'a ResultRow {
    o.rows
        .iter()
        .find(|r| r.check == check)
        .unwrap_or_else(|| panic!("missing row {check}"))
}

fn max_abs_z(rows: &[&ResultRow]) -> f64 {
    rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max)
}

fn wall(rows: &[&ResultRow]) -> Duration {
    rows.iter().map(|r| r.wall_time).max().unwrap_or_default()
}

/// All MC rows with the given prefix at `|z| ≤ 3`, with the expected count.
fn z_rows(o: &Outcome, prefix: &str, count: usize) -> (bool, String) {
    let rows = rows_with(o, prefix);
    let worst = rows
        .iter()
        .max_by(|a, b| a.z.abs().total_cmp(&b.z.abs()))
        .map_or("none".to_string(), |r| format!("{} z={:+.2}", r.check, r.z));
    let pass = rows.len() == count && rows.iter().all(|r| r.z.abs() <= Z_MAX);
    (pass, format!("{} pairs, max |z| = {:.2} ({worst})", rows.len(), max_abs_z(&rows)))
}

fn group_ibp(o: &Outcome) -> Verdict {
    let (ok, detail) = z_rows(o, "group.", 6);
    let t = wall(&rows_with(o, "group."));
    verdict(ok && t < Duration::from_secs(120), format!("{detail}; runtime {:.1} s < 120 s", t.as_secs_f64()))
}

fn base_ibp(o: &Outcome) -> Verdict {
    let (ok, detail) = z_rows(o, "base.", 6);
    let ablated = max_abs_z(&rows_with(o, "base_no_ricci.F"));
    let t = wall(&rows_with(o, "base."));
    verdict(
        ok && ablated > 5.0 && t < Duration::from_secs(120),
        format!("{detail}; without Ricci term max |z| = {ablated:.2} > 5; runtime {:.1} s", t.as_secs_f64()),
    )
}

fn total_ibp(o: &Outcome) -> Verdict {
    let (ok, detail) = z_rows(o, "total.", 8);
    let horizontal = rows_with(o, "total.").iter().filter(|r| r.check.contains(".XH")).count();
    verdict(ok && horizontal == 4, format!("{detail}; {horizontal} of them X^H"))
}

fn geometry(o: &Outcome) -> Verdict {
    let iso = row(o, "geometry.transport_isometry").lhs;
    let oct = row(o, "geometry.octant_holonomy");
    let der = row(o, "geometry.holonomy_derivative.rel_error").lhs;
    let oct_err = (oct.lhs - std::f64::consts::FRAC_PI_2).abs();
    verdict(
        iso < 1e-10 && oct_err <= oct.se && der < 1e-3,
        format!("isometry {iso:.1e} < 1e-10; octant error {oct_err:.1e} ≤ 2π/N = {:.1e}; dT rel error {der:.1e} < 1e-3", oct.se),
    )
}

fn brackets(o: &Outcome) -> Verdict {
    let h = row(o, "bracket.horizontal.rel_error").lhs;
    let ff = row(o, "bracket.flat_flat").lhs;
    let m = row(o, "bracket.mixed.rel_size").lhs;
    verdict(
        h < 5e-2 && ff < 1e-6 && m < 5e-3,
        format!("horizontal {h:.1e} < 5e-2; flat-flat {ff:.1e} < 1e-6; mixed {m:.1e} < 5e-3"),
    )
}

fn canonical(o: &Outcome) -> Verdict {
    let c = row(o, "canonical.value").lhs;
    let err = (c - 1.0 / (4.0 * std::f64::consts::PI)).abs();
    let cocycle = row(o, "canonical.cocycle_residual").lhs;
    verdict(err < 1e-8 && cocycle < 1e-6, format!("|c − 1/(4π)| = {err:.1e} < 1e-8; cocycle {cocycle:.1e} < 1e-6"))
}

fn closedness(o: &Outcome) -> Verdict {
    let d: Vec<f64> = [256, 512, 1024, 2048].iter().map(|n| row(o, &format!("closedness.dFQ.N{n}")).lhs).collect();
    let shown: Vec<String> = d.iter().map(|v| format!("{v:.1e}")).collect();
    let monotone = d.windows(2).all(|w| w[1] < w[0]);
    let order = row(o, "closedness.order").lhs;
    let dnu = row(o, "closedness.dnu_minus_p1").lhs;
    verdict(
        monotone && order >= 1.0 && dnu < 1e-5,
        format!("|dF_Q| = [{}] monotone {monotone}, order {order:.2} ≥ 1; |dν − p₁| = {dnu:.1e} < 1e-5", shown.join(", ")),
    )
}

fn quasi_invariance(o: &Outcome) -> Verdict {
    let (j_ok, j) = z_rows(o, "qi.E_J_left.", 3);
    let (c_ok, c) = z_rows(o, "qi.change_of_measure.", 2);
    verdict(j_ok && c_ok, format!("E[J_l]: {j}; change of measure: {c}"))
}

fn np(o: &Outcome) -> Verdict {
    let slope = row(o, "np.holder_slope").lhs;
    let variations: Vec<f64> = ["linear.C", "linear.C_prime", "reparametrized.C", "reparametrized.C_prime"]
        .iter()
        .map(|k| row(o, &format!("np.{k}.variation")).lhs)
        .collect();
    let ratios = [row(o, "np.ratio.C.variation").lhs, row(o, "np.ratio.C_prime.variation").lhs];
    let worst = variations.iter().chain(&ratios).fold(0.0f64, |a, &b| a.max(b));
    let zero = row(o, "np.zero_form").lhs;
    verdict(
        (0.45..=0.55).contains(&slope) && worst < 0.2 && zero == 0.0,
        format!("slope {slope:.3} in [0.45, 0.55]; worst C/C′/ratio variation {:.1}% < 20%", 100.0 * worst),
    )
}

fn anticipative(o: &Outcome) -> Verdict {
    let rates = [row(o, "anticipative.scalar.rate").lhs, row(o, "anticipative.su2.rate").lhs];
    let reductions: Vec<&ResultRow> = rows_with(o, "anticipative.").into_iter().filter(|r| r.check.ends_with("deterministic_reduction")).collect();
    let rates_ok = rates.iter().all(|r| (0.4..=0.6).contains(r));
    let red_ok = reductions.len() == 2 && reductions.iter().all(|r| r.lhs < r.rhs);
    let red: Vec<String> = reductions.iter().map(|r| format!("{:.1e} < {:.1e}", r.lhs, r.rhs)).collect();
    verdict(
        rates_ok && red_ok,
        format!("rates {:.3}, {:.3} in [0.4, 0.6]; reduction error vs 3 SE: {}", rates[0], rates[1], red.join(", ")),
    )
}

fn default_config() -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    ExperimentConfig::load(&path, &Overrides::default()).expect("default configuration")
}

fn run_into(sub: Subcommand, cfg: &ExperimentConfig, dir: &Path) -> (Outcome, Duration) {
    let start = Instant::now();
    let outcome = execute(sub, cfg, dir).expect("subcommand output");
    (outcome, start.elapsed())
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .expect("output directory")
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv") && p.file_name().is_some_and(|n| n != "timings.csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn main() -> ExitCode {
    let cfg = default_config();
    let root: PathBuf = std::env::temp_dir().join(format!("loopspace-acceptance-{}", std::process::id()));
    let subs = [Subcommand::Ibp, Subcommand::Forms, Subcommand::Np, Subcommand::Anticipative];

    let mut outcomes = Vec::new();
    let mut suite = Duration::ZERO;
    for sub in subs {
        let (o, t) = run_into(sub, &cfg, &root.join("first").join(sub.name()));
        eprintln!("{} finished in {:.1} s", sub.name(), t.as_secs_f64());
        suite += t;
        outcomes.push(o);
    }
    let (ibp, forms, np_out, ant) = (&outcomes[0], &outcomes[1], &outcomes[2], &outcomes[3]);

    let mut identical = true;
    for sub in subs {
        run_into(sub, &cfg, &root.join("second").join(sub.name()));
        let a = csv_files(&root.join("first").join(sub.name()));
        let b = csv_files(&root.join("second").join(sub.name()));
        identical &= !a.is_empty() && a == b;
    }
    let _ = std::fs::remove_dir_all(&root);

    let verdicts = [
        ("Group IBP on SU(2)", group_ibp(ibp)),
        ("Base IBP on S² with Ricci term", base_ibp(ibp)),
        ("Total-space IBP on the S³ bundle", total_ibp(ibp)),
        ("Geometry oracles", geometry(forms)),
        ("Bracket decomposition", brackets(forms)),
        ("Canonical 2-form", canonical(forms)),
        ("Carey–Murray closedness", closedness(forms)),
        ("Quasi-invariance", quasi_invariance(ibp)),
        ("NP regularity", np(np_out)),
        ("Anticipative integrals", anticipative(ant)),
        (
            "Reproducibility and runtime",
            verdict(
                identical && suite < Duration::from_secs(15 * 60),
                format!("byte-identical CSV on rerun: {identical}; suite {:.0} s < 900 s", suite.as_secs_f64()),
            ),
        ),
    ];

    let mut failed = 0;
    for (i, (name, v)) in verdicts.iter().enumerate() {
        println!("criterion {:>2} [{}] {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
