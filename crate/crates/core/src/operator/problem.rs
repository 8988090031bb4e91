use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fracmath::{caputo_power, FractionalOrder};

/// A coefficient or forcing function on the unit square.
pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// An exact solution with enough structure to substitute back into the
/// equation: ξ-derivatives and the Caputo derivative in η.
pub trait ExactSolution: Send + Sync {
    fn d_xi(&self, xi: f64, eta: f64, order: u32) -> f64;

    fn caputo_eta(&self, xi: f64, eta: f64, alpha: FractionalOrder) -> Result<f64>;

    fn value(&self, xi: f64, eta: f64) -> f64 {
        self.d_xi(xi, eta, 0)
    }
}

/// `y(ξ, η) = s(ξ) η^p`.
#[derive(Clone)]
pub struct SeparableSolution {
    space: Arc<dyn Fn(f64, u32) -> f64 + Send + Sync>,
    eta_exponent: f64,
}

impl SeparableSolution {
    /// `space(ξ, k)` must return the k-th derivative of `s` for `k <= 2`.
    pub fn new(space: impl Fn(f64, u32) -> f64 + Send + Sync + 'static, eta_exponent: f64) -> Self {
        SeparableSolution {
            space: Arc::new(space),
            eta_exponent,
        }
    }
}

impl ExactSolution for SeparableSolution {
    fn d_xi(&self, xi: f64, eta: f64, order: u32) -> f64 {
        (self.space)(xi, order) * eta.powf(self.eta_exponent)
    }

    fn caputo_eta(&self, xi: f64, eta: f64, alpha: FractionalOrder) -> Result<f64> {
        Ok((self.space)(xi, 0) * caputo_power(self.eta_exponent, alpha, eta)?)
    }
}

/// `D_η^α y + k1 y_ξξ + k2 y + k3 y_ξ + k4 y y_ξ = f` on `[0,1]²` with
/// `y(ξ,0) = y(0,η) = y(1,η) = 0`.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub alpha: FractionalOrder,
    pub k1: ScalarField,
    pub k2: ScalarField,
    pub k3: ScalarField,
    pub k4: ScalarField,
    pub forcing: ScalarField,
    pub exact: Option<Arc<dyn ExactSolution>>,
    /// When false the Caputo term is dropped from `L`. Diagnostic only.
    pub time_derivative: bool,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("has_exact", &self.exact.is_some())
            .field("time_derivative", &self.time_derivative)
            .finish_non_exhaustive()
    }
}

/// The constant field `c`.
pub fn constant(c: f64) -> ScalarField {
    Arc::new(move |_, _| c)
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        alpha: FractionalOrder,
        k1: ScalarField,
        k2: ScalarField,
        k3: ScalarField,
        k4: ScalarField,
        forcing: ScalarField,
    ) -> Self {
        Problem {
            name: name.into(),
            alpha,
            k1,
            k2,
            k3,
            k4,
            forcing,
            exact: None,
            time_derivative: true,
        }
    }

    pub fn with_exact(mut self, exact: Arc<dyn ExactSolution>) -> Self {
        self.exact = Some(exact);
        self
    }

    /// Same problem with the convective term removed (`k4 ≡ 0`).
    pub fn linearized(mut self) -> Self {
        self.k4 = constant(0.0);
        self.name.push_str(" (linearized)");
        self
    }

    /// Drops the Caputo term from the operator.
    pub fn without_time_derivative(mut self) -> Self {
        self.time_derivative = false;
        self
    }

    /// Adds a constant to the forcing term.
    pub fn with_forcing_offset(mut self, offset: f64) -> Self {
        let f = self.forcing.clone();
        self.forcing = Arc::new(move |x, t| f(x, t) + offset);
        self
    }

    #[inline]
    pub fn coefficients_at(&self, xi: f64, eta: f64) -> [f64; 4] {
        [
            (self.k1)(xi, eta),
            (self.k2)(xi, eta),
            (self.k3)(xi, eta),
            (self.k4)(xi, eta),
        ]
    }

    #[inline]
    pub fn forcing_at(&self, xi: f64, eta: f64) -> f64 {
        (self.forcing)(xi, eta)
    }

    pub fn exact(&self) -> Result<&dyn ExactSolution> {
        self.exact
            .as_deref()
            .ok_or_else(|| Error::MissingExact(self.name.clone()))
    }

    /// Largest violation of the homogeneous initial/boundary conditions by the
    /// exact solution on an `m`-point boundary mesh.
    pub fn exact_boundary_defect(&self, m: usize) -> Result<f64> {
        let exact = self.exact()?;
        let mut worst: f64 = 0.0;
        for k in 0..m {
            let s = k as f64 / (m - 1).max(1) as f64;
            for v in [exact.value(s, 0.0), exact.value(0.0, s), exact.value(1.0, s)] {
                worst = worst.max(v.abs());
            }
        }
        Ok(worst)
    }
}
