use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracburgers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracburgers"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn solve_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["solve", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    fracburgers(&args)
}

fn csv_max(text: &str) -> f64 {
    text.lines()
        .skip(1)
        .flat_map(|l| l.split(',').skip(1).map(|v| v.parse::<f64>().unwrap()))
        .fold(0.0, f64::max)
}

#[test]
fn solve_writes_identical_tables_on_repeat() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = solve_into(d.path(), &["--example", "1", "--alpha", "0.9", "--surface"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("max abs error"));
    }
    let ta = fs::read(a.path().join("errors.csv")).unwrap();
    assert_eq!(ta, fs::read(b.path().join("errors.csv")).unwrap());

    let text = String::from_utf8(ta).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "xi\\eta,0.1,0.2,0.3,0.4,0.5,0.6");
    let corner: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((corner - 2.39e-4).abs() < 2e-6, "{corner}");

    let surface = fs::read_to_string(a.path().join("surface.csv")).unwrap();
    assert_eq!(surface.lines().count(), 1 + 51 * 51);
}

#[test]
fn run_metadata_records_the_configuration() {
    let d = tempfile::tempdir().unwrap();
    let o = solve_into(
        d.path(),
        &[
            "--example",
            "2",
            "--alpha",
            "0.8",
            "--p",
            "4",
            "--q",
            "3",
            "--picard",
            "1",
            "--format",
            "json",
        ],
    );
    assert!(o.status.success());
    assert!(d.path().join("errors.json").exists());
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("run.json")).unwrap()).unwrap();
    let cfg = &meta["config"];
    for key in [
        "problem",
        "problem_name",
        "alpha",
        "p",
        "q",
        "quadrature_nodes",
        "picard_iters",
        "mesh",
        "output",
        "format",
        "surface",
    ] {
        assert!(!cfg[key].is_null(), "config lacks {key}");
    }
    assert_eq!(cfg["alpha"], 0.8);
    assert_eq!(cfg["p"], 4);
    assert_eq!(cfg["q"], 3);
    assert_eq!(cfg["picard_iters"], 1);
    assert_eq!(cfg["quadrature_nodes"], 64);
    assert_eq!(meta["n"], 12);
    assert_eq!(meta["errors"].as_array().unwrap().len(), 36);
    assert!(meta["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert!(meta["orthonormality_defect"].as_f64().unwrap() < 1e-8);
    assert_eq!(meta["software"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        vec!["solve", "--example", "1", "--alpha", "1.2"],
        vec!["solve", "--example", "1", "--alpha", "0"],
        vec!["solve", "--example", "2", "--alpha", "0.4"],
        vec!["solve", "--example", "3"],
        vec!["solve", "--example", "1", "--p", "101", "--q", "100"],
        vec!["solve", "--example", "1", "--p", "0"],
        vec!["solve"],
        vec!["convergence", "--example", "1", "--sizes", "3,x"],
        vec!["solve", "--bogus"],
    ] {
        let o = fracburgers(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(fracburgers(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_and_fixtures_fail() {
    let d = tempfile::tempdir().unwrap();
    let o = fracburgers(&["verify", "--out", d.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.contains("FAIL"));
    assert!(d.path().join("verify.json").exists());

    let o = fracburgers(&["verify", "--perturb-forcing", "1e-3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("FAIL") && l.contains("forcing")));

    let o = fracburgers(&["verify", "--grid", "3", "--duplicate-point"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("pivot")));
}

#[test]
fn convergence_with_one_size_gives_one_row() {
    let d = tempfile::tempdir().unwrap();
    let o = fracburgers(&[
        "convergence",
        "--example",
        "1",
        "--sizes",
        "3",
        "--out",
        d.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(d.path().join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("9,3,3,"));
    assert!(!stdout(&o).contains("decreasing"));

    let o = fracburgers(&["convergence", "--example", "1", "--sizes", "3,2x4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\n8,2,4,"));
}

#[test]
fn catalog_config_reproduces_example_one() {
    let d = tempfile::tempdir().unwrap();
    let config = d.path().join("example1.cfg");
    fs::write(
        &config,
        "# example 1 written out\n\
         name = example 1 (catalog)\n\
         alpha = 0.9\n\
         k1 = 1 + xi*eta\n\
         k2 = xi^2\n\
         k3 = xi + 1\n\
         k4 = -eta*sin(xi)\n\
         f = gamma(2+alpha)*(xi^2-xi)*eta + 2*(eta*xi+1)*eta^(1+alpha) + (xi^4-xi^3)*eta^(1+alpha) \
             + (1+xi)*(2*xi-1)*eta^(1+alpha) - eta*sin(xi)*(xi^2-xi)*eta^(2+2*alpha)*(2*xi-1)\n\
         exact = (xi^2 - xi)*eta^(1+alpha)\n",
    )
    .unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    let o = solve_into(&a, &["--config", config.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(solve_into(&b, &["--example", "1", "--alpha", "0.9"]).status.success());
    let ta = fs::read_to_string(a.join("errors.csv")).unwrap();
    let tb = fs::read_to_string(b.join("errors.csv")).unwrap();
    for (la, lb) in ta.lines().zip(tb.lines()).skip(1) {
        for (va, vb) in la.split(',').zip(lb.split(',')).skip(1) {
            let (va, vb): (f64, f64) = (va.parse().unwrap(), vb.parse().unwrap());
            assert!((va - vb).abs() <= 1e-9 * vb.max(1e-12), "{va} vs {vb}");
        }
    }

    fs::write(&config, "example = 1\nalpha = 0.9\nbogus = 1\n").unwrap();
    assert_eq!(
        fracburgers(&["solve", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_without_exact_solution_writes_values() {
    let d = tempfile::tempdir().unwrap();
    let config = d.path().join("plain.cfg");
    fs::write(&config, "k1 = 1\nf = xi*eta\np = 3\nq = 3\n").unwrap();
    let out = d.path().join("out");
    let o = solve_into(&out, &["--config", config.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("values.csv").exists());
    assert!(!out.join("errors.csv").exists());
}

#[test]
fn example_two_at_alpha_08_on_a_10x10_grid() {
    let d = tempfile::tempdir().unwrap();
    let o = solve_into(
        d.path(),
        &["--example", "2", "--alpha", "0.8", "--p", "10", "--q", "10"],
    );
    assert!(o.status.success());
    let max = csv_max(&fs::read_to_string(d.path().join("errors.csv")).unwrap());
    assert!(max <= 6.29e-2, "{max}");
    assert!((max - 6.29e-3).abs() < 1e-4, "{max}");
}
