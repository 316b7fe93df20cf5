//! Result rows, CSV and summary output, and static SVG line charts.

use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::time::Duration;

use loopspace_core::stochastic::McReport;

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub se: f64,
    pub z: f64,
    pub pass: bool,
    pub wall_time: Duration,
}

impl ResultRow {
    pub fn from_mc(experiment: &str, check: &str, r: &McReport, wall_time: Duration) -> Self {
        Self {
            experiment: experiment.into(),
            check: check.into(),
            lhs: r.lhs,
            rhs: r.rhs,
            se: r.se,
            z: r.z,
            pass: r.pass,
            wall_time,
        }
    }

    /// Deterministic check `|lhs − rhs| ≤ tol`, reported with `se = tol`, `z = (lhs − rhs)/tol`.
    pub fn tolerance(experiment: &str, check: &str, lhs: f64, rhs: f64, tol: f64, wall_time: Duration) -> Self {
        let z = (lhs - rhs) / tol;
        Self {
            experiment: experiment.into(),
            check: check.into(),
            lhs,
            rhs,
            se: tol,
            z,
            pass: z.abs() <= 1.0,
            wall_time,
        }
    }

    /// `lo ≤ value ≤ hi`, reported against the band centre.
    pub fn band(experiment: &str, check: &str, value: f64, lo: f64, hi: f64, wall_time: Duration) -> Self {
        Self::tolerance(experiment, check, value, 0.5 * (lo + hi), 0.5 * (hi - lo), wall_time)
    }

    /// One-sided check `value > min`, reported with `z = value − min`.
    pub fn at_least(experiment: &str, check: &str, value: f64, min: f64, wall_time: Duration) -> Self {
        Self {
            experiment: experiment.into(),
            check: check.into(),
            lhs: value,
            rhs: min,
            se: 1.0,
            z: value - min,
            pass: value > min,
            wall_time,
        }
    }

    /// One-sided check `value < max`, reported with `z = value / max`.
    pub fn at_most(experiment: &str, check: &str, value: f64, max: f64, wall_time: Duration) -> Self {
        Self {
            experiment: experiment.into(),
            check: check.into(),
            lhs: value,
            rhs: max,
            se: max,
            z: value / max,
            pass: value < max,
            wall_time,
        }
    }

    /// A measured quantity with no pass criterion of its own.
    pub fn info(experiment: &str, check: &str, value: f64, wall_time: Duration) -> Self {
        Self {
            experiment: experiment.into(),
            check: check.into(),
            lhs: value,
            rhs: 0.0,
            se: 0.0,
            z: 0.0,
            pass: true,
            wall_time,
        }
    }

    /// Check with an explicit outcome (e.g. an ablation expected to fail).
    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

pub const CSV_HEADER: &str = "experiment_id,check_id,lhs,rhs,se,z,pass";

/// `results.csv`: deterministic for a fixed configuration and seed.
pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(s, "{},{},{:e},{:e},{:e},{:e},{}", r.experiment, r.check, r.lhs, r.rhs, r.se, r.z, r.pass).unwrap();
    }
    s
}

/// `timings.csv`: wall-clock time per check, kept apart so that `results.csv` is reproducible.
pub fn timings_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from("experiment_id,check_id,wall_time_s\n");
    for r in rows {
        writeln!(s, "{},{},{:.3}", r.experiment, r.check, r.wall_time.as_secs_f64()).unwrap();
    }
    s
}

pub fn summary(title: &str, rows: &[ResultRow]) -> String {
    let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    let mut s = format!("{title}: {} passed, {} failed\n", rows.len() - failed.len(), failed.len());
    for r in rows {
        writeln!(
            s,
            "  [{}] {:<40} lhs={:<12.5e} rhs={:<12.5e} se={:<10.3e} z={:+.2}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            r.lhs,
            r.rhs,
            r.se,
            r.z
        )
        .unwrap();
    }
    s
}

/// A named polyline for [`line_chart`].
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Minimal SVG line chart; `log_log` plots `log10` of both coordinates.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series], log_log: bool) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 60.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let tr = |v: f64| if log_log { v.abs().max(1e-300).log10() } else { v };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| s.points.iter().map(|&(x, y)| (tr(x), tr(y))).filter(|p| p.0.is_finite() && p.1.is_finite()).collect())
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title)).unwrap();
    writeln!(s, r#"<line x1="{M}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#, H - M, W - M).unwrap();
    writeln!(s, r#"<line x1="{M}" y1="{M}" x2="{M}" y2="{}" stroke="black"/>"#, H - M).unwrap();
    let lab = |v: f64| if log_log { format!("1e{v:.1}") } else { format!("{v:.3}") };
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="{anchor}">{}</text>"#, px(v), H - M + 16.0, lab(v)).unwrap();
    }
    for v in [y0, y1] {
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, M - 4.0, py(v) + 4.0, lab(v)).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 16.0, escape(x_label)).unwrap();
    writeln!(s, r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#, H / 2.0, H / 2.0, escape(y_label)).unwrap();
    for (i, (ser, p)) in series.iter().zip(&pts).enumerate() {
        let c = COLORS[i % COLORS.len()];
        let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#, path.join(" ")).unwrap();
        for &(x, y) in p {
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{c}"/>"#, px(x), py(y)).unwrap();
        }
        writeln!(s, r#"<text x="{}" y="{}" fill="{c}">{}</text>"#, W - M - 150.0, M + 16.0 * i as f64, escape(&ser.name)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `results.csv`, `timings.csv`, `summary.txt` and the given extra files into `dir`.
pub fn write_outputs(dir: &Path, title: &str, rows: &[ResultRow], files: &[(String, String)]) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("results.csv"), results_csv(rows))?;
    std::fs::write(dir.join("timings.csv"), timings_csv(rows))?;
    std::fs::write(dir.join("summary.txt"), summary(title, rows))?;
    for (name, contents) in files {
        std::fs::write(dir.join(name), contents)?;
    }
    Ok(())
}
