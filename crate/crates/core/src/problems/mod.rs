//! The two benchmark problems, user problems from the expression catalog, and
//! a check that substitutes an exact solution back into the equation.

mod expr;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

pub use expr::Expression;

use crate::error::{Error, Result};
use crate::fracmath::{gamma, FractionalOrder};
use crate::operator::{constant, Problem, SeparableSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExampleId {
    /// Variable coefficients, polynomial solution `(ξ² - ξ) η^(1+α)`.
    One,
    /// Classical Burgers form, solution `sin(πξ) η^(2α)`, needs `α > 1/2`.
    Two,
}

impl ExampleId {
    pub fn build(self, alpha: FractionalOrder) -> Result<Problem> {
        match self {
            ExampleId::One => Ok(build_example1(alpha)),
            ExampleId::Two => build_example2(alpha),
        }
    }

    pub fn admits(self, alpha: FractionalOrder) -> bool {
        match self {
            ExampleId::One => true,
            ExampleId::Two => alpha.value() > 0.5,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            ExampleId::One => 1,
            ExampleId::Two => 2,
        }
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(ExampleId::One),
            "2" => Ok(ExampleId::Two),
            other => Err(Error::Validation(format!("unknown example '{other}', expected 1 or 2"))),
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "example {}", self.number())
    }
}

/// `D^α y + (1+ξη) y_ξξ + ξ² y + (ξ+1) y_ξ - η sin(ξ) y y_ξ = f`.
///
/// The printed forcing contains `π / (sin(πα) Γ(-1-α))`, which equals
/// `Γ(2+α)` by the reflection formula; the latter is used.
pub fn build_example1(alpha: FractionalOrder) -> Problem {
    let a = alpha.value();
    let g = gamma(2.0 + a).expect("2 + alpha is positive");
    let forcing = Arc::new(move |xi: f64, eta: f64| {
        let e1 = eta.powf(1.0 + a);
        g * (xi * xi - xi) * eta
            + 2.0 * (eta * xi + 1.0) * e1
            + (xi.powi(4) - xi.powi(3)) * e1
            + (1.0 + xi) * (2.0 * xi - 1.0) * e1
            - eta * xi.sin() * (xi * xi - xi) * eta.powf(2.0 + 2.0 * a) * (2.0 * xi - 1.0)
    });
    let exact = SeparableSolution::new(
        |xi, k| match k {
            0 => xi * xi - xi,
            1 => 2.0 * xi - 1.0,
            2 => 2.0,
            _ => 0.0,
        },
        1.0 + a,
    );
    Problem::new(
        "example 1",
        alpha,
        Arc::new(|xi, eta| 1.0 + xi * eta),
        Arc::new(|xi, _| xi * xi),
        Arc::new(|xi, _| xi + 1.0),
        Arc::new(|xi: f64, eta| -eta * xi.sin()),
        forcing,
    )
    .with_exact(Arc::new(exact))
}

/// `D^α y - y_ξξ - y y_ξ = f`, `1/2 < α <= 1`.
pub fn build_example2(alpha: FractionalOrder) -> Result<Problem> {
    let a = alpha.value();
    if a <= 0.5 {
        return Err(Error::Validation(format!("example 2 requires alpha > 0.5, got {a}")));
    }
    let lead = 4f64.powf(a) * gamma(a + 0.5)? / PI.sqrt();
    let forcing = Arc::new(move |xi: f64, eta: f64| {
        let s = (PI * xi).sin();
        lead * eta.powf(a) * s + s * PI * PI * eta.powf(2.0 * a) - s * eta.powf(4.0 * a) * (PI * xi).cos() * PI
    });
    let exact = SeparableSolution::new(
        |xi, k| {
            let w = PI.powi(k as i32);
            match k % 4 {
                0 => w * (PI * xi).sin(),
                1 => w * (PI * xi).cos(),
                2 => -w * (PI * xi).sin(),
                _ => -w * (PI * xi).cos(),
            }
        },
        2.0 * a,
    );
    Ok(Problem::new(
        "example 2",
        alpha,
        constant(-1.0),
        constant(0.0),
        constant(0.0),
        constant(-1.0),
        forcing,
    )
    .with_exact(Arc::new(exact)))
}

/// Builds a problem from catalog expressions keyed `k1`..`k4`, `f`, `exact`
/// and `name`. Missing coefficients default to zero; `f` is required.
pub fn problem_from_entries(entries: &BTreeMap<String, String>, alpha: FractionalOrder) -> Result<Problem> {
    const KNOWN: [&str; 7] = ["name", "k1", "k2", "k3", "k4", "f", "exact"];
    let field = |key: &str| -> Result<Option<Expression>> {
        entries
            .get(key)
            .map(|src| Expression::parse(src, alpha).map_err(|e| Error::Expression(format!("{key}: {e}"))))
            .transpose()
    };
    let coefficient =
        |key: &str| -> Result<_> { Ok(field(key)?.map(Expression::into_field).unwrap_or_else(|| constant(0.0))) };
    if let Some(k) = entries
        .keys()
        .find(|k| k.starts_with('k') && !KNOWN.contains(&k.as_str()))
    {
        return Err(Error::Validation(format!("unknown coefficient key '{k}'")));
    }
    let f = field("f")?.ok_or_else(|| Error::Validation("config must define the forcing term 'f'".into()))?;
    let name = entries.get("name").cloned().unwrap_or_else(|| "custom".to_string());
    let mut problem = Problem::new(
        name,
        alpha,
        coefficient("k1")?,
        coefficient("k2")?,
        coefficient("k3")?,
        coefficient("k4")?,
        f.into_field(),
    );
    if let Some(exact) = field("exact")? {
        problem = problem.with_exact(exact.into_exact(alpha)?);
    }
    Ok(problem)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcingReport {
    pub max_discrepancy: f64,
    /// Where the maximum occurs.
    pub worst_point: (f64, f64),
    pub points: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Substitutes the exact solution into the equation on `mesh` and reports
/// `max |LHS - f|`.
pub fn verify_forcing(problem: &Problem, mesh: &[(f64, f64)], tol: f64) -> Result<ForcingReport> {
    let exact = problem.exact()?;
    let mut worst = (0.0_f64, (f64::NAN, f64::NAN));
    for &(xi, eta) in mesh {
        let [k1, k2, k3, k4] = problem.coefficients_at(xi, eta);
        let y = exact.d_xi(xi, eta, 0);
        let y1 = exact.d_xi(xi, eta, 1);
        let y2 = exact.d_xi(xi, eta, 2);
        let mut lhs = k1 * y2 + k2 * y + k3 * y1 + k4 * y * y1;
        if problem.time_derivative {
            lhs += exact.caputo_eta(xi, eta, problem.alpha)?;
        }
        let d = (lhs - problem.forcing_at(xi, eta)).abs();
        if !(d <= worst.0) {
            worst = (d, (xi, eta));
        }
    }
    Ok(ForcingReport {
        max_discrepancy: worst.0,
        worst_point: worst.1,
        points: mesh.len(),
        tolerance: tol,
        passed: worst.0 <= tol,
    })
}

/// `m × m` mesh on `[0,1]²` including the boundary.
pub fn square_mesh(m: usize) -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (0..m).map(|k| k as f64 / (m - 1).max(1) as f64).collect();
    axis.iter().flat_map(|&x| axis.iter().map(move |&t| (x, t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn example1_values() {
        let p = build_example1(order(0.9));
        let y = p.exact().unwrap();
        assert!((y.value(0.5, 0.5) + 0.25 * 0.5f64.powf(1.9)).abs() < 1e-16);
        assert!((y.value(0.5, 0.5) + 0.066_985_84).abs() < 1e-8);
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(y.value(s, 0.0), 0.0);
        }
        for eta in [0.1f64, 0.5, 0.9] {
            let want = eta.powf(1.9);
            assert!((p.forcing_at(0.0, eta) - want).abs() < 1e-15);
        }
        assert_eq!(p.exact_boundary_defect(21).unwrap(), 0.0);
    }

    #[test]
    fn example2_values() {
        assert!(build_example2(order(0.5)).is_err());
        assert!(!ExampleId::Two.admits(order(0.4)));
        let p = build_example2(order(0.8)).unwrap();
        let y = p.exact().unwrap();
        assert_eq!(y.value(0.5, 1.0), 1.0);
        assert!(p.exact_boundary_defect(21).unwrap() < 1e-15);
        let c = y.caputo_eta(0.5, 1.0, order(0.8)).unwrap();
        assert!((c - gamma(2.6).unwrap() / gamma(1.8).unwrap()).abs() < 1e-14);
        assert!((c - 1.534_946_821_497_31).abs() < 1e-13);
    }

    #[test]
    fn forcing_consistency() {
        let mesh = square_mesh(11);
        for a in [0.7, 0.8, 0.9] {
            let r1 = verify_forcing(&build_example1(order(a)), &mesh, 1e-10).unwrap();
            let r2 = verify_forcing(&build_example2(order(a)).unwrap(), &mesh, 1e-10).unwrap();
            assert!(r1.passed && r2.passed, "{a}: {r1:?} {r2:?}");
        }
        let bad = build_example1(order(0.9)).with_forcing_offset(1e-3);
        let r = verify_forcing(&bad, &mesh, 1e-10).unwrap();
        assert!(!r.passed);
        assert!((r.max_discrepancy - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn example_ids_parse() {
        assert_eq!("1".parse::<ExampleId>().unwrap(), ExampleId::One);
        assert_eq!(" 2 ".parse::<ExampleId>().unwrap(), ExampleId::Two);
        assert!("3".parse::<ExampleId>().unwrap_err().is_validation());
    }

    #[test]
    fn config_entries_reproduce_example1() {
        let a = order(0.8);
        let mut m = BTreeMap::new();
        m.insert("k1".into(), "1 + xi*eta".into());
        m.insert("k2".into(), "xi^2".into());
        m.insert("k3".into(), "xi + 1".into());
        m.insert("k4".into(), "-eta*sin(xi)".into());
        m.insert(
            "f".into(),
            "gamma(2+alpha)*(xi^2-xi)*eta + 2*(eta*xi+1)*eta^(1+alpha) + (xi^4-xi^3)*eta^(1+alpha) \
             + (1+xi)*(2*xi-1)*eta^(1+alpha) - eta*sin(xi)*(xi^2-xi)*eta^(2+2*alpha)*(2*xi-1)"
                .into(),
        );
        m.insert("exact".into(), "(xi^2 - xi)*eta^(1+alpha)".into());
        let custom = problem_from_entries(&m, a).unwrap();
        let builtin = build_example1(a);
        for (x, t) in square_mesh(7) {
            assert!((custom.forcing_at(x, t) - builtin.forcing_at(x, t)).abs() < 1e-14);
            assert_eq!(custom.coefficients_at(x, t), builtin.coefficients_at(x, t));
        }
        assert!(verify_forcing(&custom, &square_mesh(11), 1e-10).unwrap().passed);

        m.remove("f");
        assert!(problem_from_entries(&m, a).unwrap_err().is_validation());
        m.insert("f".into(), "0".into());
        m.insert("k5".into(), "1".into());
        assert!(problem_from_entries(&m, a).is_err());
    }
}
