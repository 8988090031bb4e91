//! Caputo transforms of the time kernel `R2`.
//!
//! With `g(r, η) = ∂_r R2(r, η)`, which is `-r²/2 + ηr + η` for `r < η` and
//! `η + η²/2` for `r >= η`:
//!
//! * single transform `C(η; t) = Γ(1-α)⁻¹ ∫_0^t g(r, η) (t - r)^(-α) dr`,
//!   exact through [`weighted_moment`];
//! * double transform `D(t_i, t_j)`, the Caputo derivative of
//!   `η ↦ C(η; t_i)` at `t_j`. Since `∂_η g(r, η) = 1 + min(r, η)`,
//!   `∂_η C(η; t_i) = H(t_i) - (t_i - η)₊^(2-α) / Γ(3-α)` with
//!   `H(t) = t^(1-α)/Γ(2-α) + t^(2-α)/Γ(3-α)`. The constant part is
//!   integrated exactly. The remainder
//!   `∫_0^min(t_i,t_j) (t_i - η)^(2-α) (t_j - η)^(-α) dη` has a weak
//!   singularity at `min(t_i, t_j)` and a branch point `|t_i - t_j|` beyond
//!   it; it is integrated by Gauss–Jacobi on the piece next to the
//!   singularity and Gauss–Legendre on geometrically growing pieces after
//!   that, which keeps the rule accurate as `t_i → t_j`.
//!
//! For `α = 1` both reduce to ordinary derivatives of `R2`.

use crate::error::{Error, Result};
use crate::fracmath::{gamma, gauss_jacobi, gauss_legendre, weighted_moment, FractionalOrder, QuadratureRule};
use crate::kernels::r2_raw;

/// Precomputed Γ constants and quadrature rule for one fractional order.
#[derive(Debug, Clone)]
pub struct TimeKernels {
    alpha: FractionalOrder,
    rule: Option<QuadratureRule>,
    legendre: Option<QuadratureRule>,
    gamma_1: f64,
    gamma_2: f64,
    gamma_3: f64,
}

impl TimeKernels {
    pub fn new(alpha: FractionalOrder, quadrature_nodes: usize) -> Result<Self> {
        if quadrature_nodes == 0 {
            return Err(Error::Validation("quadrature node count must be positive".into()));
        }
        let a = alpha.value();
        if alpha.is_classical() {
            return Ok(TimeKernels {
                alpha,
                rule: None,
                legendre: None,
                gamma_1: f64::INFINITY,
                gamma_2: 1.0,
                gamma_3: 1.0,
            });
        }
        Ok(TimeKernels {
            alpha,
            rule: Some(gauss_jacobi(a, quadrature_nodes)?),
            legendre: Some(gauss_legendre(quadrature_nodes)?),
            gamma_1: gamma(1.0 - a)?,
            gamma_2: gamma(2.0 - a)?,
            gamma_3: gamma(3.0 - a)?,
        })
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn rule(&self) -> Option<&QuadratureRule> {
        self.rule.as_ref()
    }

    /// `C(η; t)`: Caputo derivative of `r ↦ R2(r, η)` at `r = t`.
    pub fn single(&self, eta: f64, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        if self.alpha.is_classical() {
            return Ok(r2_raw(t, eta, 1, 0));
        }
        let a = self.alpha.value();
        let split = eta.min(t);
        let mut v = -0.5 * weighted_moment(2, a, 0.0, split, t)?
            + eta * weighted_moment(1, a, 0.0, split, t)?
            + eta * weighted_moment(0, a, 0.0, split, t)?;
        if t > eta {
            v += (eta + 0.5 * eta * eta) * (t - eta).powf(1.0 - a) / (1.0 - a);
        }
        Ok(v / self.gamma_1)
    }

    /// `D(t_i, t_j)`: Caputo derivative in the second slot of
    /// `(η, t_i) ↦ C(η; t_i)`, evaluated at `η = t_j`.
    pub fn double(&self, t_i: f64, t_j: f64) -> Result<f64> {
        if !(t_j > 0.0) {
            return Err(Error::QuadratureDegenerate(format!(
                "double Caputo transform needs t_j > 0, got {t_j}"
            )));
        }
        if t_i == 0.0 {
            return Ok(0.0);
        }
        let (rule, legendre) = match (&self.rule, &self.legendre) {
            (Some(rule), Some(legendre)) => (rule, legendre),
            _ => return Ok(r2_raw(t_i, t_j, 1, 1)),
        };
        let a = self.alpha.value();
        let level = t_i.powf(1.0 - a) / self.gamma_2 + t_i.powf(2.0 - a) / self.gamma_3;
        let constant_part = level * t_j.powf(1.0 - a) / self.gamma_2;
        let remainder = remainder_integral(t_i, t_j, a, rule, legendre);
        Ok(constant_part - remainder / (self.gamma_1 * self.gamma_3))
    }
}

/// `∫_0^m (t_i - s)^(2-α) (t_j - s)^(-α) ds` with `m = min(t_i, t_j)`,
/// written as `∫_0^m v^(-α) φ(v) dv` in the distance `v = m - s`.
fn remainder_integral(t_i: f64, t_j: f64, a: f64, jacobi: &QuadratureRule, legendre: &QuadratureRule) -> f64 {
    let m = t_i.min(t_j);
    let gap = (t_i - t_j).abs();
    if gap == 0.0 {
        return m.powf(3.0 - 2.0 * a) / (3.0 - 2.0 * a);
    }
    let phi = |v: f64| {
        if t_j <= t_i {
            (gap + v).powf(2.0 - a)
        } else {
            v * v * (gap + v).powf(-a)
        }
    };
    let near = gap.min(m);
    // v = near (1 - u) puts the rule's singular endpoint at v = 0
    let mut acc = near.powf(1.0 - a) * jacobi.integrate(|u| phi(near * (1.0 - u)));
    let mut lo = near;
    while lo < m {
        let hi = (2.0 * lo).min(m);
        let h = hi - lo;
        acc += h * legendre.integrate(|u| {
            let v = lo + h * u;
            v.powf(-a) * phi(v)
        });
        lo = hi;
    }
    acc
}

fn check_time(op: &'static str, name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {v} outside [0, 1]")))
    }
}

/// Caputo derivative of `r ↦ R2(r, η)` at `r = t_i`.
pub fn caputo_time_kernel(eta: f64, t_i: f64, alpha: FractionalOrder) -> Result<f64> {
    check_time("caputo_time_kernel", "eta", eta)?;
    check_time("caputo_time_kernel", "t_i", t_i)?;
    if t_i == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.value();
    let kernels = TimeKernels {
        alpha,
        rule: None,
        legendre: None,
        gamma_1: if alpha.is_classical() {
            f64::INFINITY
        } else {
            gamma(1.0 - a)?
        },
        gamma_2: 1.0,
        gamma_3: 1.0,
    };
    kernels.single(eta, t_i)
}

/// Caputo derivative of `η ↦ caputo_time_kernel(η, t_i, α)` at `η = t_j`.
/// The rule's `alpha` must match `alpha`.
pub fn double_caputo_time_kernel(t_i: f64, t_j: f64, alpha: FractionalOrder, rule: &QuadratureRule) -> Result<f64> {
    check_time("double_caputo_time_kernel", "t_i", t_i)?;
    check_time("double_caputo_time_kernel", "t_j", t_j)?;
    let a = alpha.value();
    if !alpha.is_classical() && rule.alpha != a {
        return Err(Error::Validation(format!(
            "quadrature rule built for alpha = {}, needed {a}",
            rule.alpha
        )));
    }
    let kernels = if alpha.is_classical() {
        TimeKernels {
            alpha,
            rule: None,
            legendre: None,
            gamma_1: f64::INFINITY,
            gamma_2: 1.0,
            gamma_3: 1.0,
        }
    } else {
        TimeKernels {
            alpha,
            rule: Some(rule.clone()),
            legendre: Some(gauss_legendre(rule.len())?),
            gamma_1: gamma(1.0 - a)?,
            gamma_2: gamma(2.0 - a)?,
            gamma_3: gamma(3.0 - a)?,
        }
    };
    kernels.double(t_i, t_j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracmath::caputo_power;
    use crate::oracle;
    use proptest::prelude::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    /// Product-rectangle rule: `∂_r R2(r, η)` at the weighted centroid of each
    /// of `n` subintervals times the exact integral of the weight there.
    fn product_rectangle(eta: f64, t: f64, a: f64, n: usize) -> f64 {
        let h = t / n as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let lo = k as f64 * h;
            let hi = if k + 1 == n { t } else { lo + h };
            let w = ((t - lo).powf(1.0 - a) - (t - hi).powf(1.0 - a)) / (1.0 - a);
            let first = ((t - lo).powf(2.0 - a) - (t - hi).powf(2.0 - a)) / (2.0 - a);
            let centroid = t - first / w;
            acc += r2_raw(centroid, eta, 1, 0) * w;
        }
        acc / gamma(1.0 - a).unwrap()
    }

    #[test]
    fn single_transform_examples() {
        assert_eq!(caputo_time_kernel(0.5, 0.0, order(0.3)).unwrap(), 0.0);
        let v1 = caputo_time_kernel(0.4, 0.2, order(0.5)).unwrap();
        assert!((v1 - 0.223_381_332_616_184_83).abs() < 1e-14, "{v1}");
        assert!((v1 - product_rectangle(0.4, 0.2, 0.5, 100_000)).abs() < 1e-8);
        let v2 = caputo_time_kernel(0.2, 0.4, order(0.5)).unwrap();
        assert!((v2 - 0.155_724_874_901_449_85).abs() < 1e-14, "{v2}");
        assert!((v2 - product_rectangle(0.2, 0.4, 0.5, 100_000)).abs() < 1e-8);
        assert!(caputo_time_kernel(1.2, 0.4, order(0.5)).is_err());
    }

    #[test]
    fn single_transform_against_product_rectangle_oracle() {
        // fixed pseudo-random triples (LCG) in (0,1]^2 x [0.3, 0.95]
        let mut state: u64 = 0x2545_f491_4f6c_dd1d;
        let mut next = || {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let eta = next();
            let t = 0.01 + 0.99 * next();
            let a = 0.3 + 0.65 * next();
            let got = caputo_time_kernel(eta, t, order(a)).unwrap();
            let want = product_rectangle(eta, t, a, 100_000);
            assert!((got - want).abs() < 1e-8, "eta {eta} t {t} a {a}: {got} vs {want}");
        }
    }

    #[test]
    fn double_transform_examples() {
        let a = order(0.5);
        let rule = gauss_jacobi(0.5, 64).unwrap();
        let v3 = double_caputo_time_kernel(0.2, 0.2, a, &rule).unwrap();
        assert!((v3 - 0.280_112_699_841_735_74).abs() < 1e-12, "{v3}");
        let lo = double_caputo_time_kernel(0.2, 0.4, a, &rule).unwrap();
        let hi = double_caputo_time_kernel(0.4, 0.2, a, &rule).unwrap();
        assert!((lo - 0.402_923_508_385_48).abs() < 1e-12, "{lo}");
        assert!((lo - hi).abs() < 1e-12);
        let b = order(0.9);
        let rule9 = gauss_jacobi(0.9, 64).unwrap();
        let d = double_caputo_time_kernel(0.5, 0.5, b, &rule9).unwrap();
        assert!((d - 1.362_637_473_811_841_9).abs() < 1e-12, "{d}");
        assert!(double_caputo_time_kernel(0.5, 0.0, a, &rule).is_err());
        assert!(double_caputo_time_kernel(0.5, 0.5, b, &rule).is_err());
    }

    #[test]
    fn double_transform_reduces_to_single_caputo_of_a_power() {
        // for t_i >= t_j the inner derivative is H(t_i) - (t_i - η)^(2-α)/Γ(3-α);
        // when t_i = 1 we can check the constant part against caputo_power(1, ..)
        let a = order(0.7);
        let kernels = TimeKernels::new(a, 64).unwrap();
        let t = 0.6;
        let d = kernels.double(t, t).unwrap();
        let level = t.powf(0.3) / gamma(1.3).unwrap() + t.powf(1.3) / gamma(2.3).unwrap();
        let from_power = level * caputo_power(1.0, a, t).unwrap();
        let tail = t.powf(3.0 - 1.4) / ((3.0 - 1.4) * gamma(0.3).unwrap() * gamma(2.3).unwrap());
        assert!((d - (from_power - tail)).abs() < 1e-13);
    }

    #[test]
    fn classical_order_uses_ordinary_derivatives() {
        let one = order(1.0);
        let k = TimeKernels::new(one, 8).unwrap();
        assert!((k.single(0.4, 0.2).unwrap() - r2_raw(0.2, 0.4, 1, 0)).abs() < 1e-15);
        assert!((k.double(0.3, 0.6).unwrap() - 1.3).abs() < 1e-15);
        assert!((caputo_time_kernel(0.4, 0.2, one).unwrap() - k.single(0.4, 0.2).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn node_count_convergence_and_adaptive_oracle() {
        for a in [0.5, 0.7, 0.9] {
            let k64 = TimeKernels::new(order(a), 64).unwrap();
            let k128 = TimeKernels::new(order(a), 128).unwrap();
            for (ti, tj) in [(0.2, 0.2), (0.2, 0.4), (0.4, 0.2), (0.9, 1.0), (1.0, 0.1), (0.5, 0.6)] {
                let d64 = k64.double(ti, tj).unwrap();
                let d128 = k128.double(ti, tj).unwrap();
                assert!((d64 - d128).abs() < 1e-10, "a {a} ({ti},{tj}): {d64} vs {d128}");
                let want = oracle::double_caputo(ti, tj, a, 1e-12);
                assert!((d64 - want).abs() < 1e-8, "a {a} ({ti},{tj}): {d64} vs {want}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn double_transform_is_symmetric(ti in 0.05f64..1.0, tj in 0.05f64..1.0, a in 0.3f64..0.95) {
            let k = TimeKernels::new(order(a), 64).unwrap();
            let d1 = k.double(ti, tj).unwrap();
            let d2 = k.double(tj, ti).unwrap();
            prop_assert!((d1 - d2).abs() <= 1e-10 * (1.0 + d1.abs()));
        }
    }
}
