//! The sequential iterative scheme: each coefficient `B_i` is built from the
//! right-hand side `F` sampled on the partial sums `y_{k-1}`.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{CollocationBasis, CollocationGrid, GramMatrix, Problem, DEFAULT_QUADRATURE_NODES};
use crate::orthonormalize::{compute_beta, OrthonormalBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolverOptions {
    /// Gauss–Jacobi / Gauss–Legendre nodes for the outer Caputo transform.
    pub quadrature_nodes: usize,
    /// Extra fixed-point passes with `F` evaluated on the full previous
    /// solution. Zero reproduces the single lagged sweep.
    pub picard_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            quadrature_nodes: DEFAULT_QUADRATURE_NODES,
            picard_iters: 0,
        }
    }
}

/// `y_n = Σ_i B_i ψ̄_i = Σ_k c_k ψ_k` with `c = βᵀ B`.
#[derive(Debug, Clone)]
pub struct ApproximateSolution {
    basis: CollocationBasis,
    ortho: OrthonormalBasis,
    b: Vec<f64>,
    c: Vec<f64>,
    forcing: Vec<f64>,
    /// `(y_{k-1}, ∂_ξ y_{k-1})` at collocation point `k` from the sequential sweep.
    lagged: Vec<(f64, f64)>,
}

pub fn solve(problem: &Problem, grid: &CollocationGrid, options: &SolverOptions) -> Result<ApproximateSolution> {
    if grid.is_empty() {
        return Err(Error::Validation("collocation grid is empty".into()));
    }
    let basis = CollocationBasis::new(Arc::new(problem.clone()), grid.clone(), options.quadrature_nodes)?;
    let gram = basis.assemble_gram()?;
    let ortho = compute_beta(&gram)?;
    solve_with(basis, ortho, options.picard_iters)
}

fn solve_with(basis: CollocationBasis, ortho: OrthonormalBasis, picard_iters: usize) -> Result<ApproximateSolution> {
    let n = basis.len();
    let values = basis.collocation_values(0)?;
    let slopes = basis.collocation_values(1)?;
    let dot = |m: &[f64], k: usize, c: &[f64]| -> f64 { m[k * n..(k + 1) * n].iter().zip(c).map(|(a, b)| a * b).sum() };

    let problem = basis.problem();
    let rhs = |k: usize, y: f64, dy: f64| -> Result<f64> {
        let (x, t) = basis.grid().points()[k];
        let k4 = (problem.k4)(x, t);
        let f = problem.forcing_at(x, t) - k4 * y * dy;
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::NonFiniteForcing { index: k })
        }
    };

    let mut c = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut forcing = vec![0.0; n];
    let mut lagged = Vec::with_capacity(n);
    for k in 0..n {
        let y = dot(&values, k, &c);
        let dy = dot(&slopes, k, &c);
        lagged.push((y, dy));
        forcing[k] = rhs(k, y, dy)?;
        b[k] = ortho.apply_row(k, &forcing);
        for (cj, &beta) in c.iter_mut().zip(ortho.row(k)) {
            *cj += b[k] * beta;
        }
    }

    for _ in 0..picard_iters {
        for (k, fk) in forcing.iter_mut().enumerate() {
            *fk = rhs(k, dot(&values, k, &c), dot(&slopes, k, &c))?;
        }
        for (k, bk) in b.iter_mut().enumerate() {
            *bk = ortho.apply_row(k, &forcing);
        }
        c = ortho.transpose_apply(&b);
    }

    Ok(ApproximateSolution {
        basis,
        ortho,
        b,
        c,
        forcing,
        lagged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub xi: f64,
    pub eta: f64,
    pub approx: f64,
    pub exact: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
    pub max_abs_error: f64,
    pub mean_abs_error: f64,
}

impl ApproximateSolution {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Coefficients over the orthonormal system.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Coefficients over the raw basis `ψ_k`.
    pub fn raw_coefficients(&self) -> &[f64] {
        &self.c
    }

    /// `F_k` as last used to form `B`.
    pub fn forcing_values(&self) -> &[f64] {
        &self.forcing
    }

    /// `(y_{k-1}, ∂_ξ y_{k-1})` at collocation point `k` during the sweep.
    pub fn lagged_states(&self) -> &[(f64, f64)] {
        &self.lagged
    }

    pub fn basis(&self) -> &CollocationBasis {
        &self.basis
    }

    pub fn orthonormal_basis(&self) -> &OrthonormalBasis {
        &self.ortho
    }

    pub fn gram(&self) -> &GramMatrix {
        self.ortho.gram()
    }

    pub fn problem(&self) -> &Problem {
        self.basis.problem()
    }

    pub fn grid(&self) -> &CollocationGrid {
        self.basis.grid()
    }

    /// `y_n` (order 0) or `∂_ξ y_n` (order 1).
    pub fn evaluate(&self, xi: f64, eta: f64, dxi_order: u32) -> Result<f64> {
        self.basis.combination(&self.c, xi, eta, dxi_order)
    }

    /// `(L y_n)(ξ, η) - [f - k4 y_n ∂_ξ y_n](ξ, η)`.
    pub fn residual(&self, xi: f64, eta: f64) -> Result<f64> {
        let ly = self.basis.apply_operator(&self.c, xi, eta)?;
        let y = self.evaluate(xi, eta, 0)?;
        let dy = self.evaluate(xi, eta, 1)?;
        let problem = self.problem();
        let k4 = (problem.k4)(xi, eta);
        Ok(ly - (problem.forcing_at(xi, eta) - k4 * y * dy))
    }

    /// `‖y_m‖²` computed from the Gram matrix, `y_m` the `m`-term partial sum.
    pub fn norm_sq_prefix(&self, m: usize) -> f64 {
        let mut head = self.b.clone();
        for v in head.iter_mut().skip(m) {
            *v = 0.0;
        }
        self.gram().quadratic_form(&self.ortho.transpose_apply(&head))
    }

    pub fn error_report(&self, points: &[(f64, f64)]) -> Result<ErrorReport> {
        let exact = self.problem().exact()?;
        let rows = points
            .iter()
            .map(|&(xi, eta)| {
                let approx = self.evaluate(xi, eta, 0)?;
                let exact = exact.value(xi, eta);
                Ok(ErrorRow {
                    xi,
                    eta,
                    approx,
                    exact,
                    abs_error: (approx - exact).abs(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let max_abs_error = rows.iter().fold(0.0_f64, |m, r| m.max(r.abs_error));
        let mean_abs_error = if rows.is_empty() {
            0.0
        } else {
            rows.iter().map(|r| r.abs_error).sum::<f64>() / rows.len() as f64
        };
        Ok(ErrorReport {
            rows,
            max_abs_error,
            mean_abs_error,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub max_abs_error: f64,
    pub wall_seconds: f64,
}

/// One solve per uniform `p × q` grid, errors measured on `mesh`.
pub fn convergence_study(
    problem: &Problem,
    sizes: &[(usize, usize)],
    mesh: &[(f64, f64)],
    options: &SolverOptions,
) -> Result<Vec<ConvergenceRow>> {
    problem.exact()?;
    sizes
        .iter()
        .map(|&(p, q)| {
            let start = Instant::now();
            let grid = CollocationGrid::uniform(p, q)?;
            let s = solve(problem, &grid, options)?;
            let report = s.error_report(mesh)?;
            Ok(ConvergenceRow {
                p,
                q,
                n: p * q,
                max_abs_error: report.max_abs_error,
                wall_seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

/// `start, start + step, ...` up to `end` inclusive, each value rounded to
/// 12 decimals so that `0.1:0.1:0.6` yields exactly the printed values.
pub fn mesh_axis(start: f64, step: f64, end: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !end.is_finite() || end < start {
        return Err(Error::Validation(format!("bad mesh {start}:{step}:{end}")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(Error::Validation(format!(
            "mesh {start}:{step}:{end} has too many points"
        )));
    }
    let round = |v: f64| (v * 1e12).round() / 1e12;
    Ok((0..count).map(|k| round(start + k as f64 * step)).collect())
}

/// Tensor mesh, `ξ` outer and `η` inner.
pub fn tensor_mesh(xi: &[f64], eta: &[f64]) -> Vec<(f64, f64)> {
    xi.iter().flat_map(|&x| eta.iter().map(move |&t| (x, t))).collect()
}

/// The `{0.1, ..., 0.6}²` mesh the error tables are reported on.
pub fn table_mesh() -> Vec<(f64, f64)> {
    let axis = mesh_axis(0.1, 0.1, 0.6).expect("static mesh");
    tensor_mesh(&axis, &axis)
}
