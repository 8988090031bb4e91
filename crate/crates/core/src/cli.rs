//! Command-line front end.
//!
//! ```text
//! fracburgers solve --example 1 --alpha 0.9 --p 5 --q 5 --out results/
//! fracburgers verify
//! fracburgers convergence --example 1 --alpha 0.9 --sizes 3,5,7
//! ```
//!
//! A `--config` file holds `key = value` lines (`#` starts a comment). Keys
//! mirror the long flags (`example`, `alpha`, `p`, `q`, `nodes`, `picard`,
//! `mesh`, `out`, `format`, `surface`, `sizes`) and may define a custom
//! problem with `name`, `k1`..`k4`, `f` and `exact` in the expression catalog
//! syntax of [`crate::problems::Expression`]. Flags given on the command line
//! override the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fracmath::FractionalOrder;
use crate::operator::{CollocationGrid, Problem, DEFAULT_QUADRATURE_NODES};
use crate::problems::{problem_from_entries, ExampleId};
use crate::solver::{convergence_study, mesh_axis, solve, tensor_mesh, SolverOptions};
use crate::verify::{run_suite, VerifyOptions};

/// Largest accepted `p · q`.
pub const MAX_GRID_POINTS: usize = 10_000;

const SURFACE_POINTS: usize = 51;
const PROBLEM_KEYS: [&str; 7] = ["name", "k1", "k2", "k3", "k4", "f", "exact"];
const RUN_KEYS: [&str; 11] = [
    "example", "alpha", "p", "q", "nodes", "picard", "mesh", "out", "format", "surface", "sizes",
];

#[derive(Debug, Parser)]
#[command(
    name = "fracburgers",
    version,
    about = "Reproducing-kernel collocation solver for the time-fractional Burgers equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem and write the error table and run metadata.
    Solve(RunArgs),
    /// Run the invariant suite and print one line per check.
    Verify(VerifyArgs),
    /// Solve on a sequence of uniform grids and report the error trend.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Built-in problem: 1 (variable coefficients) or 2 (sine solution).
    #[arg(long, conflicts_with = "config")]
    example: Option<String>,
    /// Key/value file with run settings and optionally a custom problem.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fractional order, 0 < alpha <= 1 [default: 0.9]
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of space nodes [default: 5]
    #[arg(long)]
    p: Option<usize>,
    /// Number of time nodes [default: 5]
    #[arg(long)]
    q: Option<usize>,
    /// Quadrature nodes for the outer Caputo transform [default: 64]
    #[arg(long)]
    nodes: Option<usize>,
    /// Extra fixed-point passes after the lagged sweep [default: 0]
    #[arg(long)]
    picard: Option<usize>,
    /// Evaluation mesh on both axes as start:step:end [default: 0.1:0.1:0.6]
    #[arg(long)]
    mesh: Option<String>,
    /// Output directory; nothing is written when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of the error table file [default: csv]
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Also write y_n on a 51x51 mesh (surface.csv).
    #[arg(long)]
    surface: bool,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Grid sizes: `5` means 5x5, `4x6` means p=4, q=6 [default: 3,5,7]
    #[arg(long)]
    sizes: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Quadrature nodes for the outer Caputo transform.
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_NODES)]
    nodes: usize,
    /// Side of the uniform grid used for the Gram checks.
    #[arg(long, default_value_t = 5)]
    grid: usize,
    /// Fixture: add this constant to every forcing term.
    #[arg(long)]
    perturb_forcing: Option<f64>,
    /// Fixture: repeat one collocation point in the Gram checks.
    #[arg(long)]
    duplicate_point: bool,
    /// Directory for verify.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Where the problem came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemSource {
    Example(u8),
    Config(PathBuf),
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub problem: ProblemSource,
    pub problem_name: String,
    pub alpha: f64,
    pub p: usize,
    pub q: usize,
    pub quadrature_nodes: usize,
    pub picard_iters: usize,
    pub mesh: String,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub surface: bool,
    #[serde(skip)]
    sizes: Option<String>,
    #[serde(skip)]
    entries: BTreeMap<String, String>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Validation(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = k.trim().to_ascii_lowercase();
        if !PROBLEM_KEYS.contains(&key.as_str()) && !RUN_KEYS.contains(&key.as_str()) {
            return Err(Error::Validation(format!(
                "config line {}: unknown key '{key}'",
                lineno + 1
            )));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Validation(format!(
                "config line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Validation(format!("invalid value '{v}' for {key}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Validation(format!("invalid value '{v}' for {key}"))),
    }
}

impl RunConfig {
    fn resolve(args: RunArgs, sizes: Option<String>) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);
        let custom = PROBLEM_KEYS.iter().any(|k| *k != "name" && file.contains_key(*k));

        let problem = match (&args.example, &args.config) {
            (Some(e), _) => ProblemSource::Example(e.parse::<ExampleId>()?.number()),
            (None, Some(path)) if custom => {
                if file.contains_key("example") {
                    return Err(Error::Validation(
                        "config defines both 'example' and a custom problem".into(),
                    ));
                }
                ProblemSource::Config(path.clone())
            }
            (None, Some(_)) => match get("example") {
                Some(e) => ProblemSource::Example(e.parse::<ExampleId>()?.number()),
                None => {
                    return Err(Error::Validation(
                        "config selects no problem: set 'example' or 'f'".into(),
                    ))
                }
            },
            (None, None) => return Err(Error::Validation("one of --example or --config is required".into())),
        };

        let alpha = match (args.alpha, get("alpha")) {
            (Some(a), _) => a,
            (None, Some(v)) => parse_value("alpha", v)?,
            (None, None) => 0.9,
        };
        let p = match (args.p, get("p")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_value("p", v)?,
            (None, None) => 5,
        };
        let q = match (args.q, get("q")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_value("q", v)?,
            (None, None) => 5,
        };
        let quadrature_nodes = match (args.nodes, get("nodes")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_value("nodes", v)?,
            (None, None) => DEFAULT_QUADRATURE_NODES,
        };
        let picard_iters = match (args.picard, get("picard")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_value("picard", v)?,
            (None, None) => 0,
        };
        let mesh = args
            .mesh
            .clone()
            .or_else(|| get("mesh").map(str::to_string))
            .unwrap_or_else(|| "0.1:0.1:0.6".to_string());
        let output = args.out.clone().or_else(|| get("out").map(PathBuf::from));
        let format = match (args.format, get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => OutputFormat::from_str(v, true)
                .map_err(|_| Error::Validation(format!("invalid value '{v}' for format")))?,
            (None, None) => OutputFormat::Csv,
        };
        let surface = args.surface
            || get("surface")
                .map(|v| parse_bool("surface", v))
                .transpose()?
                .unwrap_or(false);
        let sizes = sizes.or_else(|| get("sizes").map(str::to_string));

        if quadrature_nodes == 0 {
            return Err(Error::Validation("nodes must be positive".into()));
        }
        let mut cfg = RunConfig {
            problem,
            problem_name: String::new(),
            alpha,
            p,
            q,
            quadrature_nodes,
            picard_iters,
            mesh,
            output,
            format,
            surface,
            sizes,
            entries: file,
        };
        cfg.problem_name = cfg.build_problem()?.name;
        Ok(cfg)
    }

    pub fn build_problem(&self) -> Result<Problem> {
        let alpha = FractionalOrder::new(self.alpha)?;
        match &self.problem {
            ProblemSource::Example(n) => n.to_string().parse::<ExampleId>()?.build(alpha),
            ProblemSource::Config(_) => {
                let entries: BTreeMap<String, String> = self
                    .entries
                    .iter()
                    .filter(|(k, _)| PROBLEM_KEYS.contains(&k.as_str()))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                problem_from_entries(&entries, alpha)
            }
        }
    }

    pub fn mesh_axis(&self) -> Result<Vec<f64>> {
        let parts: Vec<&str> = self.mesh.split(':').collect();
        let [a, h, b] = parts.as_slice() else {
            return Err(Error::Validation(format!(
                "mesh '{}' must be start:step:end",
                self.mesh
            )));
        };
        let axis = mesh_axis(
            parse_value("mesh", a.trim())?,
            parse_value("mesh", h.trim())?,
            parse_value("mesh", b.trim())?,
        )?;
        if axis.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Validation(format!("mesh '{}' leaves [0,1]", self.mesh)));
        }
        Ok(axis)
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            quadrature_nodes: self.quadrature_nodes,
            picard_iters: self.picard_iters,
        }
    }
}

fn check_grid(p: usize, q: usize) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::Validation(format!("p and q must be positive, got {p} x {q}")));
    }
    if p.saturating_mul(q) > MAX_GRID_POINTS {
        return Err(Error::Validation(format!(
            "grid {p} x {q} exceeds the limit of {MAX_GRID_POINTS} collocation points"
        )));
    }
    Ok(())
}

fn parse_sizes(spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (p, q) = match s.split_once('x') {
                Some((p, q)) => (parse_value("sizes", p.trim())?, parse_value("sizes", q.trim())?),
                None => {
                    let v = parse_value("sizes", s)?;
                    (v, v)
                }
            };
            check_grid(p, q)?;
            Ok((p, q))
        })
        .collect()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Rows `ξ`, columns `η`, the layout of the published tables.
fn table_csv(corner: &str, axis: &[f64], cells: &[f64]) -> String {
    let mut s = String::from(corner);
    for t in axis {
        let _ = write!(s, ",{t}");
    }
    s.push('\n');
    for (x, row) in axis.iter().zip(cells.chunks(axis.len())) {
        let _ = write!(s, "{x}");
        for v in row {
            let _ = write!(s, ",{v:.5e}");
        }
        s.push('\n');
    }
    s
}

fn print_table(axis: &[f64], cells: &[f64], out: &mut String) {
    let _ = write!(out, "{:>6}", "xi\\eta");
    for t in axis {
        let _ = write!(out, " {t:>11}");
    }
    out.push('\n');
    for (x, row) in axis.iter().zip(cells.chunks(axis.len())) {
        let _ = write!(out, "{x:>6}");
        for v in row {
            let _ = write!(out, " {v:>11.2e}");
        }
        out.push('\n');
    }
}

fn cmd_solve(cfg: &RunConfig, out: &mut String) -> Result<()> {
    check_grid(cfg.p, cfg.q)?;
    let axis = cfg.mesh_axis()?;
    let problem = cfg.build_problem()?;
    let grid = CollocationGrid::uniform(cfg.p, cfg.q)?;

    let start = Instant::now();
    let s = solve(&problem, &grid, &cfg.solver_options())?;
    let solve_seconds = start.elapsed().as_secs_f64();

    let mesh = tensor_mesh(&axis, &axis);
    let report = match problem.exact {
        Some(_) => Some(s.error_report(&mesh)?),
        None => None,
    };
    let (label, cells): (&str, Vec<f64>) = match &report {
        Some(r) => ("absolute error", r.rows.iter().map(|r| r.abs_error).collect()),
        None => (
            "approximate solution",
            mesh.iter().map(|&(x, t)| s.evaluate(x, t, 0)).collect::<Result<_>>()?,
        ),
    };

    let _ = writeln!(
        out,
        "{} alpha = {}, n = {} (p = {}, q = {}): {label}",
        problem.name,
        cfg.alpha,
        s.len(),
        cfg.p,
        cfg.q
    );
    print_table(&axis, &cells, out);
    if let Some(r) = &report {
        let _ = writeln!(
            out,
            "max abs error {:.6e}, mean abs error {:.6e}",
            r.max_abs_error, r.mean_abs_error
        );
    }
    let _ = writeln!(out, "solve time {solve_seconds:.3} s");

    let Some(dir) = &cfg.output else {
        return Ok(());
    };
    let table_name = if report.is_some() { "errors" } else { "values" };
    let path = match cfg.format {
        OutputFormat::Csv => write_file(dir, &format!("{table_name}.csv"), &table_csv("xi\\eta", &axis, &cells))?,
        OutputFormat::Json => {
            let body = json!({ "xi": axis, "eta": axis, "quantity": label, "values": cells.chunks(axis.len()).collect::<Vec<_>>() });
            write_file(
                dir,
                &format!("{table_name}.json"),
                &serde_json::to_string_pretty(&body).expect("plain data"),
            )?
        }
    };
    let _ = writeln!(out, "wrote {}", path.display());

    if cfg.surface {
        let mut csv = String::from("xi,eta,y\n");
        let m = SURFACE_POINTS - 1;
        for i in 0..=m {
            for j in 0..=m {
                let (x, t) = (i as f64 / m as f64, j as f64 / m as f64);
                let _ = writeln!(csv, "{x},{t},{:.12e}", s.evaluate(x, t, 0)?);
            }
        }
        let path = write_file(dir, "surface.csv", &csv)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }

    let meta = json!({
        "software": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "config": cfg,
        "n": s.len(),
        "max_abs_error": report.as_ref().map(|r| r.max_abs_error),
        "mean_abs_error": report.as_ref().map(|r| r.mean_abs_error),
        "wall_seconds": solve_seconds,
        "quadrature": {
            "outer_rule": "graded Gauss-Jacobi / Gauss-Legendre",
            "nodes": cfg.quadrature_nodes,
        },
        "orthonormality_defect": s.orthonormal_basis().orthonormality_defect(),
        "errors": report.as_ref().map(|r| &r.rows),
    });
    let path = write_file(
        dir,
        "run.json",
        &serde_json::to_string_pretty(&meta).expect("plain data"),
    )?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}

fn cmd_convergence(cfg: &RunConfig, out: &mut String) -> Result<()> {
    let sizes = parse_sizes(cfg.sizes.as_deref().unwrap_or("3,5,7"))?;
    let axis = cfg.mesh_axis()?;
    let problem = cfg.build_problem()?;
    let rows = convergence_study(&problem, &sizes, &tensor_mesh(&axis, &axis), &cfg.solver_options())?;

    let mut csv = String::from("n,p,q,max_abs_error,wall_seconds\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{:.5e},{:.3}",
            r.n, r.p, r.q, r.max_abs_error, r.wall_seconds
        );
    }
    let _ = writeln!(out, "{} alpha = {}", problem.name, cfg.alpha);
    out.push_str(&csv);
    if rows.len() >= 2 {
        let (first, last) = (&rows[0], &rows[rows.len() - 1]);
        let trend = if last.max_abs_error < first.max_abs_error {
            "decreasing"
        } else {
            "NOT decreasing"
        };
        let _ = writeln!(out, "error n={} -> n={}: {trend}", first.n, last.n);
    }
    if let Some(dir) = &cfg.output {
        let path = write_file(dir, "convergence.csv", &csv)?;
        let meta = json!({
            "software": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
            "config": cfg,
            "sizes": sizes,
            "rows": rows,
        });
        write_file(
            dir,
            "convergence.json",
            &serde_json::to_string_pretty(&meta).expect("plain data"),
        )?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut String) -> Result<bool> {
    if args.grid == 0 || args.grid * args.grid > MAX_GRID_POINTS {
        return Err(Error::Validation(format!("grid size {} out of range", args.grid)));
    }
    if args.nodes == 0 {
        return Err(Error::Validation("nodes must be positive".into()));
    }
    let opts = VerifyOptions {
        quadrature_nodes: args.nodes,
        grid_size: args.grid,
        forcing_offset: args.perturb_forcing,
        duplicate_point: args.duplicate_point,
        ..VerifyOptions::default()
    };
    let checks = run_suite(&opts);
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.value.is_nan() {
            let _ = writeln!(out, "{status} {}: {}", c.name, c.detail);
        } else {
            let _ = writeln!(
                out,
                "{status} {}: {:.3e} (tol {:.0e}; {})",
                c.name, c.value, c.tolerance, c.detail
            );
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {failed} failed", checks.len());
    if let Some(dir) = &args.out {
        let body = json!({ "options": opts, "checks": checks });
        write_file(
            dir,
            "verify.json",
            &serde_json::to_string_pretty(&body).expect("plain data"),
        )?;
    }
    Ok(failed == 0)
}

/// Runs the command line `args` (including the program name), writing
/// normal output to stdout and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut out = String::new();
    let result = match cli.command {
        Command::Solve(a) => RunConfig::resolve(a, None)
            .and_then(|cfg| cmd_solve(&cfg, &mut out))
            .map(|_| true),
        Command::Verify(a) => cmd_verify(&a, &mut out),
        Command::Convergence(a) => RunConfig::resolve(a.run, a.sizes)
            .and_then(|cfg| cmd_convergence(&cfg, &mut out))
            .map(|_| true),
    };
    print!("{out}");
    match result {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
