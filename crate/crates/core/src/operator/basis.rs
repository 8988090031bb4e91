use std::sync::Arc;

use rayon::prelude::*;

use super::grid::CollocationGrid;
use super::problem::Problem;
use super::time::TimeKernels;
use crate::error::{Error, Result};
use crate::kernels::{r2_raw, r3_raw};

/// `ψ_i(ξ, η) = C(η; η_i) R3(ξ_i, ξ) + R2(η_i, η) Q_i(ξ)` with
/// `Q_i(ξ) = k1_i ∂²_x R3(ξ_i, ξ) + k2_i R3(ξ_i, ξ) + k3_i ∂_x R3(ξ_i, ξ)`,
/// the coefficients frozen at the centre.
#[derive(Debug, Clone)]
pub struct BasisFunction {
    pub index: usize,
    pub center: (f64, f64),
    /// `k1, k2, k3` at the centre.
    pub coefficients: [f64; 3],
    time_derivative: bool,
    time: Arc<TimeKernels>,
}

impl BasisFunction {
    pub fn new(index: usize, center: (f64, f64), problem: &Problem, time: Arc<TimeKernels>) -> Self {
        let [k1, k2, k3, _] = problem.coefficients_at(center.0, center.1);
        BasisFunction {
            index,
            center,
            coefficients: [k1, k2, k3],
            time_derivative: problem.time_derivative,
            time,
        }
    }

    pub fn time_kernels(&self) -> &TimeKernels {
        &self.time
    }

    /// `∂_ξ^d Q_i(ξ)` where `∂_x` acts on the parameter slot of `R3`.
    #[inline]
    fn space_part(&self, xi: f64, d: u32) -> f64 {
        let x = self.center.0;
        let [k1, k2, k3] = self.coefficients;
        k1 * r3_raw(x, xi, 2, d) + k2 * r3_raw(x, xi, 0, d) + k3 * r3_raw(x, xi, 1, d)
    }

    pub fn eval(&self, xi: f64, eta: f64, dxi_order: u32) -> Result<f64> {
        check_point(xi, eta)?;
        if dxi_order > 1 {
            return Err(Error::domain("psi_eval", format!("order {dxi_order} > 1")));
        }
        let (x_i, t_i) = self.center;
        let mut v = r2_raw(t_i, eta, 0, 0) * self.space_part(xi, dxi_order);
        if self.time_derivative {
            v += self.time.single(eta, t_i)? * r3_raw(x_i, xi, 0, dxi_order);
        }
        Ok(v)
    }

    /// `(L ψ_i)(ξ, η)` with the operator's coefficients `k1, k2, k3` taken
    /// at the evaluation point.
    pub fn apply_operator(&self, xi: f64, eta: f64, k: [f64; 3]) -> Result<f64> {
        let (x_i, t_i) = self.center;
        let spatial = |h: &dyn Fn(u32) -> f64| k[0] * h(2) + k[1] * h(0) + k[2] * h(1);
        let kernel_part = |d: u32| r3_raw(x_i, xi, 0, d);
        let space_part = |d: u32| self.space_part(xi, d);

        let mut v = r2_raw(t_i, eta, 0, 0) * spatial(&space_part);
        if self.time_derivative {
            v += self.time.single(eta, t_i)? * spatial(&kernel_part);
            v += self.time.single(t_i, eta)? * space_part(0);
            if eta > 0.0 {
                v += self.time.double(t_i, eta)? * kernel_part(0);
            }
        }
        Ok(v)
    }
}

fn check_point(xi: f64, eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&xi) && (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::domain(
            "evaluate",
            format!("point ({xi}, {eta}) outside [0,1]^2"),
        ))
    }
}

/// `ψ_b(ξ, η)` or `∂_ξ ψ_b(ξ, η)`.
pub fn psi_eval(b: &BasisFunction, xi: f64, eta: f64, dxi_order: u32) -> Result<f64> {
    b.eval(xi, eta, dxi_order)
}

/// `⟨ψ_i, ψ_j⟩ = (L ψ_j)(ξ_i, η_i)`.
pub fn gram_entry(b_i: &BasisFunction, b_j: &BasisFunction, problem: &Problem) -> Result<f64> {
    let (x, t) = b_i.center;
    let [k1, k2, k3, _] = problem.coefficients_at(x, t);
    b_j.apply_operator(x, t, [k1, k2, k3])
}

/// Dense `n × n` matrix of basis inner products, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("Gram matrix must be square".into()));
        }
        Ok(GramMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        GramMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Largest `|G_ij - G_ji| / (1 + |G_ij|)` and where it occurs.
    pub fn max_asymmetry(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let a = self.get(i, j);
                let gap = (a - self.get(j, i)).abs() / (1.0 + a.abs());
                if gap > worst.0 {
                    worst = (gap, i, j);
                }
            }
        }
        worst
    }

    /// `(G + Gᵀ) / 2`.
    pub fn symmetrized(&self) -> GramMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = 0.5 * (self.get(i, j) + self.get(j, i));
            }
        }
        GramMatrix { n, entries }
    }

    /// `vᵀ G v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| v[i] * self.row(i).iter().zip(v).map(|(g, x)| g * x).sum::<f64>())
            .sum()
    }
}

/// The basis `{ψ_k}` generated by a problem on a collocation grid.
#[derive(Debug, Clone)]
pub struct CollocationBasis {
    problem: Arc<Problem>,
    grid: CollocationGrid,
    functions: Vec<BasisFunction>,
    time: Arc<TimeKernels>,
}

impl CollocationBasis {
    pub fn new(problem: Arc<Problem>, grid: CollocationGrid, quadrature_nodes: usize) -> Result<Self> {
        let time = Arc::new(TimeKernels::new(problem.alpha, quadrature_nodes)?);
        let functions = grid
            .points()
            .iter()
            .enumerate()
            .map(|(k, &c)| BasisFunction::new(k, c, &problem, time.clone()))
            .collect();
        Ok(CollocationBasis {
            problem,
            grid,
            functions,
            time,
        })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn grid(&self) -> &CollocationGrid {
        &self.grid
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn time_kernels(&self) -> &TimeKernels {
        &self.time
    }

    /// `Σ_k c_k ∂_ξ^d ψ_k(ξ, η)`.
    pub fn combination(&self, coefficients: &[f64], xi: f64, eta: f64, dxi_order: u32) -> Result<f64> {
        let mut acc = 0.0;
        for (b, &c) in self.functions.iter().zip(coefficients) {
            if c != 0.0 {
                acc += c * b.eval(xi, eta, dxi_order)?;
            }
        }
        Ok(acc)
    }

    /// `Σ_k c_k (L ψ_k)(ξ, η)`.
    pub fn apply_operator(&self, coefficients: &[f64], xi: f64, eta: f64) -> Result<f64> {
        check_point(xi, eta)?;
        let [k1, k2, k3, _] = self.problem.coefficients_at(xi, eta);
        let mut acc = 0.0;
        for (b, &c) in self.functions.iter().zip(coefficients) {
            if c != 0.0 {
                acc += c * b.apply_operator(xi, eta, [k1, k2, k3])?;
            }
        }
        Ok(acc)
    }

    /// `M[k][l] = ∂_ξ^d ψ_l(ξ_k, η_k)`, row-major.
    pub fn collocation_values(&self, dxi_order: u32) -> Result<Vec<f64>> {
        let n = self.len();
        let rows: Vec<Vec<f64>> = self
            .grid
            .points()
            .par_iter()
            .map(|&(x, t)| {
                self.functions
                    .iter()
                    .map(|b| b.eval(x, t, dxi_order))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(n * n);
        for r in rows {
            out.extend(r);
        }
        Ok(out)
    }

    pub fn assemble_gram(&self) -> Result<GramMatrix> {
        let rows: Vec<Vec<f64>> = self
            .functions
            .par_iter()
            .map(|b_i| {
                self.functions
                    .iter()
                    .map(|b_j| {
                        gram_entry(b_i, b_j, &self.problem).map_err(|e| Error::GramEntry {
                            i: b_i.index,
                            j: b_j.index,
                            source: Box::new(e),
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        GramMatrix::from_rows(rows)
    }
}

/// Builds the basis for `problem` on `grid` and fills its Gram matrix.
pub fn assemble_gram(grid: &CollocationGrid, problem: &Problem, quadrature_nodes: usize) -> Result<GramMatrix> {
    CollocationBasis::new(Arc::new(problem.clone()), grid.clone(), quadrature_nodes)?.assemble_gram()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracmath::{gauss_jacobi, FractionalOrder};
    use crate::kernels::{r2, r3};
    use crate::operator::problem::constant;
    use crate::operator::time::double_caputo_time_kernel;
    use crate::orthonormalize::compute_beta;
    use crate::problems::{build_example1, build_example2};
    use proptest::prelude::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn basis(problem: Problem, p: usize, q: usize) -> CollocationBasis {
        CollocationBasis::new(Arc::new(problem), CollocationGrid::uniform(p, q).unwrap(), 64).unwrap()
    }

    fn only_k2(alpha: FractionalOrder) -> Problem {
        let z = constant(0.0);
        Problem::new("k2", alpha, z.clone(), constant(1.0), z.clone(), z.clone(), z)
    }

    #[test]
    fn basis_vanishes_on_the_constrained_boundary() {
        let b = basis(build_example1(order(0.8)), 3, 3);
        for f in b.functions() {
            for k in 0..21 {
                let s = k as f64 / 20.0;
                assert_eq!(f.eval(0.0, s, 0).unwrap(), 0.0);
                assert_eq!(f.eval(s, 0.0, 0).unwrap(), 0.0);
                assert!(f.eval(1.0, s, 0).unwrap().abs() < 1e-15);
            }
        }
    }

    #[test]
    fn xi_derivative_matches_finite_differences() {
        let b = basis(build_example2(order(0.7)).unwrap(), 3, 3);
        let h = 1e-6;
        for f in b.functions() {
            for &(x, t) in &[(0.13, 0.4), (0.41, 0.77), (0.62, 0.2), (0.88, 0.95)] {
                let fd = (f.eval(x + h, t, 0).unwrap() - f.eval(x - h, t, 0).unwrap()) / (2.0 * h);
                let d = f.eval(x, t, 1).unwrap();
                assert!((fd - d).abs() < 1e-6, "{} at ({x},{t}): {fd} vs {d}", f.index);
            }
        }
        assert!(b.functions()[0].eval(0.5, 0.5, 2).is_err());
        assert!(b.functions()[0].eval(1.5, 0.5, 0).is_err());
    }

    #[test]
    fn gram_is_symmetric_up_to_n_25() {
        for problem in [build_example1(order(0.9)), build_example2(order(0.6)).unwrap()] {
            for (p, q) in [(2, 2), (3, 4), (5, 5)] {
                let g = basis(problem.clone(), p, q).assemble_gram().unwrap();
                let (gap, i, j) = g.max_asymmetry();
                assert!(gap <= 1e-8, "{} {p}x{q}: {gap} at ({i},{j})", problem.name);
            }
        }
        let g = basis(build_example1(order(0.9)), 2, 2).assemble_gram().unwrap();
        assert!(compute_beta(&g).is_ok());
    }

    #[test]
    fn pure_fractional_single_entry() {
        let a = order(0.6);
        let z = constant(0.0);
        let problem = Problem::new("fractional", a, z.clone(), z.clone(), z.clone(), z.clone(), z);
        let grid = CollocationGrid::from_points(vec![(0.5, 0.5)]).unwrap();
        let g = assemble_gram(&grid, &problem, 64).unwrap();
        let d = double_caputo_time_kernel(0.5, 0.5, a, &gauss_jacobi(0.6, 64).unwrap()).unwrap();
        let want = d * r3(0.5, 0.5, 0, 0).unwrap();
        assert!((g.get(0, 0) - want).abs() < 1e-14);
        assert!(g.get(0, 0) > 0.0);
    }

    #[test]
    fn identity_operator_gives_the_kernel() {
        let problem = only_k2(order(0.5)).without_time_derivative();
        let grid = CollocationGrid::from_points(vec![(0.2, 0.3), (0.7, 0.9), (0.5, 0.5)]).unwrap();
        let g = assemble_gram(&grid, &problem, 64).unwrap();
        for (i, &(xi, ti)) in grid.points().iter().enumerate() {
            for (j, &(xj, tj)) in grid.points().iter().enumerate() {
                let want = r3(xi, xj, 0, 0).unwrap() * r2(ti, tj, 0, 0).unwrap();
                assert!((g.get(i, j) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn duplicated_point_breaks_positive_definiteness() {
        let grid = CollocationGrid::from_points(vec![(0.5, 0.5), (0.25, 0.75), (0.5, 0.5)]).unwrap();
        let g = assemble_gram(&grid, &build_example1(order(0.9)), 64).unwrap();
        assert_eq!(compute_beta(&g).unwrap_err(), Error::NotPositiveDefinite { pivot: 2 });
    }

    #[test]
    fn gram_entry_errors_carry_indices() {
        let grid = CollocationGrid::from_points(vec![(0.5, 0.5)]).unwrap();
        assert!(assemble_gram(&grid, &build_example1(order(0.9)), 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gram_entries_are_adjoint(x1 in 0.05f64..1.0, t1 in 0.05f64..1.0, x2 in 0.05f64..1.0, t2 in 0.05f64..1.0, a in 0.55f64..0.95) {
            let problem = build_example2(order(a)).unwrap();
            let time = Arc::new(TimeKernels::new(problem.alpha, 64).unwrap());
            let b1 = BasisFunction::new(0, (x1, t1), &problem, time.clone());
            let b2 = BasisFunction::new(1, (x2, t2), &problem, time);
            let g12 = gram_entry(&b1, &b2, &problem).unwrap();
            let g21 = gram_entry(&b2, &b1, &problem).unwrap();
            prop_assert!((g12 - g21).abs() <= 1e-8 * (1.0 + g12.abs()), "{} vs {}", g12, g21);
        }
    }
}
