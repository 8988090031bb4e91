//! Reproducing kernels of `W_2^1`, `W_2^2`, `W_2^3` on `[0, 1]` and the
//! tensor-product kernel of `W_2^(3,2)` on the unit square.
//!
//! Each univariate kernel is a two-branch polynomial `R(x, ξ)`: on `ξ <= x`
//! it is `Σ c_ab x^a ξ^b`, on `ξ > x` the same polynomial with the arguments
//! swapped. Symmetry `R(x, ξ) = R(ξ, x)` therefore holds exactly in floating
//! point. Derivatives are taken monomial by monomial; on the diagonal the
//! `ξ <= x` branch is used.

use crate::error::{Error, Result};

/// Monomial table `(power of parameter, power of argument, coefficient)`
/// for the `arg <= param` branch.
struct TwoBranchKernel {
    terms: &'static [(i32, i32, f64)],
}

impl TwoBranchKernel {
    fn eval(&self, param: f64, arg: f64, dparam: u32, darg: u32) -> f64 {
        if arg <= param {
            self.sum(param, arg, dparam, darg)
        } else {
            self.sum(arg, param, darg, dparam)
        }
    }

    #[inline]
    fn sum(&self, u: f64, v: f64, du: u32, dv: u32) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * monomial_derivative(u, a, du) * monomial_derivative(v, b, dv))
            .sum()
    }
}

#[inline]
fn monomial_derivative(v: f64, power: i32, order: u32) -> f64 {
    let order = order as i32;
    if order > power {
        return 0.0;
    }
    let mut coef = 1.0;
    for i in 0..order {
        coef *= f64::from(power - i);
    }
    coef * v.powi(power - order)
}

const R1: TwoBranchKernel = TwoBranchKernel {
    terms: &[(0, 0, 1.0), (0, 1, 1.0)],
};

const R2: TwoBranchKernel = TwoBranchKernel {
    terms: &[(1, 1, 1.0), (1, 2, 0.5), (0, 3, -1.0 / 6.0)],
};

// Expansion of -(x-1) ξ (ξx⁴ - 4ξx³ + 6ξx² + xξ⁴ - 5xξ³ - 120xξ + 120x + ξ⁴) / 120.
const R3: TwoBranchKernel = TwoBranchKernel {
    terms: &[
        (0, 5, 1.0 / 120.0),
        (1, 1, 1.0),
        (1, 2, -1.0),
        (1, 4, -1.0 / 24.0),
        (2, 1, -1.0),
        (2, 2, 21.0 / 20.0),
        (2, 4, 1.0 / 24.0),
        (2, 5, -1.0 / 120.0),
        (3, 2, -1.0 / 12.0),
        (4, 2, 1.0 / 24.0),
        (5, 2, -1.0 / 120.0),
    ],
};

fn check_unit(op: &'static str, name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {v} outside [0, 1]")))
    }
}

fn check_order(op: &'static str, order: u32, max: u32) -> Result<()> {
    if order <= max {
        Ok(())
    } else {
        Err(Error::domain(op, format!("derivative order {order} exceeds {max}")))
    }
}

/// Kernel of `W_2^1[0,1]`: `1 + min(x, ξ)`.
pub fn r1(x: f64, xi: f64) -> Result<f64> {
    check_unit("r1", "x", x)?;
    check_unit("r1", "xi", xi)?;
    Ok(R1.eval(x, xi, 0, 0))
}

/// Kernel of `W_2^2[0,1]` (functions with `g(0) = 0`), with partial
/// derivatives up to order 2 in each slot.
pub fn r2(t: f64, eta: f64, dt_order: u32, deta_order: u32) -> Result<f64> {
    check_unit("r2", "t", t)?;
    check_unit("r2", "eta", eta)?;
    check_order("r2", dt_order, 2)?;
    check_order("r2", deta_order, 2)?;
    Ok(R2.eval(t, eta, dt_order, deta_order))
}

/// Kernel of `W_2^3[0,1]` (functions with `g(0) = g(1) = 0`), with partial
/// derivatives up to order 3 in each slot.
pub fn r3(x: f64, xi: f64, dx_order: u32, dxi_order: u32) -> Result<f64> {
    check_unit("r3", "x", x)?;
    check_unit("r3", "xi", xi)?;
    check_order("r3", dx_order, 3)?;
    check_order("r3", dxi_order, 3)?;
    Ok(R3.eval(x, xi, dx_order, dxi_order))
}

#[inline]
pub(crate) fn r2_raw(t: f64, eta: f64, dt: u32, deta: u32) -> f64 {
    R2.eval(t, eta, dt, deta)
}

#[inline]
pub(crate) fn r3_raw(x: f64, xi: f64, dx: u32, dxi: u32) -> f64 {
    R3.eval(x, xi, dx, dxi)
}

/// Evaluation point of `K_(x,t)(ξ, η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductKernelPoint {
    pub x: f64,
    pub t: f64,
    pub xi: f64,
    pub eta: f64,
}

impl ProductKernelPoint {
    pub fn new(x: f64, t: f64, xi: f64, eta: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("t", t), ("xi", xi), ("eta", eta)] {
            check_unit("product_kernel", name, v)?;
        }
        Ok(ProductKernelPoint { x, t, xi, eta })
    }
}

/// `∂ K_(x,t)(ξ, η) = ∂ R3(x, ξ) · ∂ R2(t, η)` with each derivative order
/// applied to its own factor.
pub fn product_kernel(p: ProductKernelPoint, dx: u32, dt: u32, dxi: u32, deta: u32) -> Result<f64> {
    check_order("product_kernel", dx, 2)?;
    check_order("product_kernel", dxi, 2)?;
    check_order("product_kernel", dt, 1)?;
    check_order("product_kernel", deta, 1)?;
    Ok(r3(p.x, p.xi, dx, dxi)? * r2(p.t, p.eta, dt, deta)?)
}
