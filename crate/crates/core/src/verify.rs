//! Invariant suite run by `fracburgers verify`: special-function identities,
//! kernel reproducing properties, Caputo transforms against the adaptive
//! oracle, Gram/β checks and forcing consistency.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::fracmath::{caputo_power, gamma, gauss_jacobi, gauss_legendre, weighted_moment, FractionalOrder};
use crate::kernels::{r1, r2, r3};
use crate::operator::{assemble_gram, CollocationGrid, TimeKernels, DEFAULT_QUADRATURE_NODES};
use crate::oracle;
use crate::orthonormalize::compute_beta;
use crate::problems::{square_mesh, verify_forcing, ExampleId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed defect.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn bound(name: impl Into<String>, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: value <= tolerance,
            value,
            tolerance,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            value: f64::NAN,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub alphas: Vec<f64>,
    pub quadrature_nodes: usize,
    /// Side of the uniform grid used for the Gram and β checks.
    pub grid_size: usize,
    /// Added to every forcing term before the consistency check.
    pub forcing_offset: Option<f64>,
    /// Repeat one collocation point in the Gram check.
    pub duplicate_point: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            alphas: vec![0.7, 0.8, 0.9],
            quadrature_nodes: DEFAULT_QUADRATURE_NODES,
            grid_size: 5,
            forcing_offset: None,
            duplicate_point: false,
        }
    }
}

pub fn run_suite(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = vec![
        gamma_reflection(&opts.alphas),
        gauss_jacobi_moments(),
        caputo_power_vs_moments(&opts.alphas),
        reproducing_r3(),
        reproducing_r2(),
        reproducing_r1(),
        single_transform_vs_oracle(&opts.alphas),
        double_transform_vs_oracle(&opts.alphas, opts.quadrature_nodes),
        double_transform_node_convergence(&opts.alphas, opts.quadrature_nodes),
    ];
    checks.extend(gram_checks(opts));
    checks.extend(forcing_checks(opts));
    checks
}

fn order(a: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(a)
}

fn catch(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, e.to_string()))
}

pub fn gamma_reflection(alphas: &[f64]) -> Check {
    catch("gamma reflection identity", || {
        let mut worst: f64 = 0.0;
        for &a in alphas {
            let direct = gamma(2.0 + a)?;
            let reflected = PI / ((PI * a).sin() * gamma(-1.0 - a)?);
            worst = worst.max((reflected - direct).abs() / direct);
        }
        Ok(Check::bound(
            "gamma reflection identity",
            worst,
            1e-10,
            "relative |pi/(sin(pi a) G(-1-a)) - G(2+a)|",
        ))
    })
}

pub fn gauss_jacobi_moments() -> Check {
    catch("Gauss-Jacobi moments", || {
        let mut worst: f64 = 0.0;
        for a in [0.3, 0.5, 0.7, 0.9] {
            let rule = gauss_jacobi(a, 16)?;
            for m in 0..=6u32 {
                let q = rule.integrate(|u| u.powi(m as i32));
                worst = worst.max((q - weighted_moment(m, a, 0.0, 1.0, 1.0)?).abs());
            }
        }
        Ok(Check::bound(
            "Gauss-Jacobi moments",
            worst,
            1e-12,
            "16 nodes, m <= 6, alpha in {0.3,0.5,0.7,0.9}",
        ))
    })
}

pub fn caputo_power_vs_moments(alphas: &[f64]) -> Check {
    catch("caputo_power vs quadrature", || {
        let mut worst: f64 = 0.0;
        for &a in alphas {
            let alpha = order(a)?;
            let g = gamma(1.0 - a)?;
            for k in [1u32, 2, 3] {
                for t in [0.25, 0.5, 1.0] {
                    let closed = caputo_power(k as f64, alpha, t)?;
                    let moments = k as f64 * weighted_moment(k - 1, a, 0.0, t, t)? / g;
                    let adaptive = k as f64 * oracle::weakly_singular(|r| r.powi(k as i32 - 1), t, a, &[], 1e-14) / g;
                    worst = worst.max((closed - moments).abs()).max((closed - adaptive).abs());
                }
            }
        }
        Ok(Check::bound(
            "caputo_power vs quadrature",
            worst,
            1e-11,
            "k in {1,2,3}, t in {0.25,0.5,1}",
        ))
    })
}

/// `∫_0^1 f` split at `split`, 32 Gauss–Legendre nodes per piece.
fn split_integral(split: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let rule = gauss_legendre(32)?;
    let mut acc = 0.0;
    for (a, b) in [(0.0, split), (split, 1.0)] {
        for (u, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += (b - a) * w * f(a + (b - a) * u)?;
        }
    }
    Ok(acc)
}

pub fn reproducing_r3() -> Check {
    catch("R3 reproducing property", || {
        type Triple = (fn(f64) -> f64, fn(f64) -> f64, fn(f64) -> f64);
        let cases: [Triple; 2] = [
            (|s| s * (1.0 - s), |s| 1.0 - 2.0 * s, |_| 0.0),
            (|s| s * s * (1.0 - s), |s| 2.0 * s - 3.0 * s * s, |_| -6.0),
        ];
        let mut worst: f64 = 0.0;
        for (g, dg, d3g) in cases {
            for x in [0.2, 0.5, 0.8] {
                let ip = g(0.0) * r3(x, 0.0, 0, 0)?
                    + dg(0.0) * r3(x, 0.0, 0, 1)?
                    + g(1.0) * r3(x, 1.0, 0, 0)?
                    + split_integral(x, |s| Ok(d3g(s) * r3(x, s, 0, 3)?))?;
                worst = worst.max((ip - g(x)).abs());
            }
        }
        Ok(Check::bound(
            "R3 reproducing property",
            worst,
            1e-10,
            "g = s(1-s), s^2(1-s)",
        ))
    })
}

pub fn reproducing_r2() -> Check {
    catch("R2 reproducing property", || {
        type Triple = (fn(f64) -> f64, fn(f64) -> f64, fn(f64) -> f64);
        let cases: [Triple; 2] = [(|s| s, |_| 1.0, |_| 0.0), (|s| s * s * s, |s| 3.0 * s * s, |s| 6.0 * s)];
        let mut worst: f64 = 0.0;
        for (g, dg, d2g) in cases {
            for t in [0.2, 0.5, 0.8] {
                let ip = g(0.0) * r2(t, 0.0, 0, 0)?
                    + dg(0.0) * r2(t, 0.0, 0, 1)?
                    + split_integral(t, |s| Ok(d2g(s) * r2(t, s, 0, 2)?))?;
                worst = worst.max((ip - g(t)).abs());
            }
        }
        Ok(Check::bound("R2 reproducing property", worst, 1e-10, "g = s, s^3"))
    })
}

pub fn reproducing_r1() -> Check {
    catch("R1 reproducing property", || {
        let mut worst: f64 = 0.0;
        for x in [0.2, 0.5, 0.8] {
            // d/ds (1 + min(x, s)) is the indicator of s < x
            let ip = r1(x, 0.0)? + split_integral(x, |s| Ok(if s < x { 2.0 * s } else { 0.0 }))?;
            worst = worst.max((ip - (1.0 + x * x)).abs());
        }
        Ok(Check::bound("R1 reproducing property", worst, 1e-10, "g = 1 + s^2"))
    })
}

/// Fixed sample of `(η, t)` pairs covering both orderings and the diagonal.
const TIME_PAIRS: [(f64, f64); 7] = [
    (0.4, 0.2),
    (0.2, 0.4),
    (0.5, 0.5),
    (0.1, 0.9),
    (0.93, 0.37),
    (1.0, 0.61),
    (0.3, 0.31),
];

pub fn single_transform_vs_oracle(alphas: &[f64]) -> Check {
    catch("single Caputo transform vs oracle", || {
        let mut worst: f64 = 0.0;
        for &a in alphas {
            let k = TimeKernels::new(order(a)?, DEFAULT_QUADRATURE_NODES)?;
            for (eta, t) in TIME_PAIRS {
                worst = worst.max((k.single(eta, t)? - oracle::caputo_time_kernel(eta, t, a, 1e-13)).abs());
            }
        }
        Ok(Check::bound(
            "single Caputo transform vs oracle",
            worst,
            1e-8,
            "closed form vs adaptive Gauss-Kronrod",
        ))
    })
}

pub fn double_transform_vs_oracle(alphas: &[f64], nodes: usize) -> Check {
    catch("double Caputo transform vs oracle", || {
        let mut worst: f64 = 0.0;
        for &a in alphas {
            let k = TimeKernels::new(order(a)?, nodes)?;
            for (ti, tj) in TIME_PAIRS {
                worst = worst.max((k.double(ti, tj)? - oracle::double_caputo(ti, tj, a, 1e-12)).abs());
            }
        }
        Ok(Check::bound(
            "double Caputo transform vs oracle",
            worst,
            1e-8,
            format!("{nodes} nodes vs nested adaptive Gauss-Kronrod"),
        ))
    })
}

pub fn double_transform_node_convergence(alphas: &[f64], nodes: usize) -> Check {
    catch("double Caputo transform node convergence", || {
        let mut worst: f64 = 0.0;
        for &a in alphas {
            let lo = TimeKernels::new(order(a)?, nodes)?;
            let hi = TimeKernels::new(order(a)?, 2 * nodes)?;
            for (ti, tj) in TIME_PAIRS {
                worst = worst.max((lo.double(ti, tj)? - hi.double(ti, tj)?).abs());
            }
        }
        Ok(Check::bound(
            "double Caputo transform node convergence",
            worst,
            1e-10,
            format!("{nodes} vs {} nodes", 2 * nodes),
        ))
    })
}

/// Gram symmetry, positive definiteness and `β G βᵀ = I` for both examples.
pub fn gram_checks(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let p = opts.grid_size.max(1);
    for (example, a) in [(ExampleId::One, 0.9), (ExampleId::Two, 0.8)] {
        let label = |what: &str| format!("{what} ({example}, alpha {a}, {p}x{p})");
        let grid = CollocationGrid::uniform(p, p).and_then(|g| {
            if opts.duplicate_point {
                let mut pts = g.points().to_vec();
                pts.push(pts[pts.len() / 2]);
                CollocationGrid::from_points(pts)
            } else {
                Ok(g)
            }
        });
        let gram = order(a)
            .and_then(|alpha| example.build(alpha))
            .and_then(|problem| assemble_gram(&grid?, &problem, opts.quadrature_nodes));
        let gram = match gram {
            Ok(g) => g,
            Err(e) => {
                out.push(Check::failed(label("Gram assembly"), e.to_string()));
                continue;
            }
        };
        let (gap, i, j) = gram.max_asymmetry();
        out.push(Check::bound(
            label("Gram symmetry"),
            gap,
            1e-8,
            format!("worst pair ({i}, {j})"),
        ));
        match compute_beta(&gram) {
            Ok(beta) => {
                out.push(Check::bound(
                    label("Gram positive definite"),
                    0.0,
                    0.0,
                    "Cholesky succeeded",
                ));
                out.push(Check::bound(
                    label("orthonormality"),
                    beta.orthonormality_defect(),
                    1e-8,
                    "max |beta G beta^T - I|",
                ));
            }
            Err(e) => out.push(Check::failed(label("Gram positive definite"), e.to_string())),
        }
    }
    out
}

pub fn forcing_checks(opts: &VerifyOptions) -> Vec<Check> {
    let mesh = square_mesh(11);
    let mut out = Vec::new();
    for example in [ExampleId::One, ExampleId::Two] {
        for &a in &opts.alphas {
            let name = format!("forcing consistency ({example}, alpha {a})");
            out.push(catch(&name, || {
                let alpha = order(a)?;
                let mut problem = example.build(alpha)?;
                if let Some(eps) = opts.forcing_offset {
                    problem = problem.with_forcing_offset(eps);
                }
                let r = verify_forcing(&problem, &mesh, 1e-10)?;
                let (x, t) = r.worst_point;
                Ok(Check::bound(
                    name.clone(),
                    r.max_discrepancy,
                    1e-10,
                    format!("11x11 mesh, worst at ({x}, {t})"),
                ))
            }));
        }
    }
    out
}
