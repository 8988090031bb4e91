//! Special functions and quadrature primitives for Caputo fractional calculus
//! on polynomials and power functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Order of the Caputo time derivative, restricted to `0 < alpha <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(FractionalOrder(alpha))
        } else {
            Err(Error::Validation(format!(
                "fractional order must satisfy 0 < alpha <= 1, got {alpha}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `alpha == 1`: the Caputo derivative degenerates to the ordinary one.
    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl std::fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function.
///
/// Positive integers up to 171 are returned exactly as factorials. Other
/// arguments use the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma", "argument is NaN"));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && x <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Caputo derivative of `t^exponent` of order `alpha`, evaluated at `t`.
///
/// Constants map to zero. Exponents in `(0, alpha)` are rejected because the
/// result is unbounded at the origin.
pub fn caputo_power(exponent: f64, alpha: FractionalOrder, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain("caputo_power", format!("t = {t} < 0")));
    }
    if exponent == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.value();
    if !(exponent >= a) {
        return Err(Error::domain(
            "caputo_power",
            format!("exponent {exponent} must be 0 or >= alpha = {a}"),
        ));
    }
    Ok(gamma(exponent + 1.0)? / gamma(exponent + 1.0 - a)? * t.powf(exponent - a))
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}

/// `∫_a^b r^m (c - r)^(-alpha) dr` in closed form.
///
/// The binomial expansion is taken about the singular endpoint `c`, so every
/// term is an exact power of the distance to the singularity.
pub fn weighted_moment(m: u32, alpha: f64, a: f64, b: f64, c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain(
            "weighted_moment",
            format!("alpha = {alpha} outside [0, 1)"),
        ));
    }
    if b > c {
        return Err(Error::domain(
            "weighted_moment",
            format!("upper limit {b} beyond the singularity at {c}"),
        ));
    }
    if !(a >= 0.0 && a <= b) {
        return Err(Error::domain(
            "weighted_moment",
            format!("need 0 <= a <= b, got a = {a}, b = {b}"),
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let near = c - b;
    let far = c - a;
    let mut sum = 0.0;
    for j in 0..=m {
        let e = f64::from(j) + 1.0 - alpha;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(m, j) * c.powi((m - j) as i32) * (far.powf(e) - near.powf(e)) / e;
    }
    Ok(sum)
}

/// Gaussian rule on `(0, 1)` for the weight `(1 - u)^(-alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_0^1 g(u) (1 - u)^(-alpha) du`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * g(u)).sum()
    }

    /// `∫_a^b g(r) (b - r)^(-alpha) dr`, mapping the rule onto `[a, b]`.
    pub fn integrate_to_singularity<F: Fn(f64) -> f64>(&self, a: f64, b: f64, g: F) -> f64 {
        let h = b - a;
        if h <= 0.0 {
            return 0.0;
        }
        h.powf(1.0 - self.alpha) * self.integrate(|u| g(a + h * u))
    }
}

/// Gauss–Jacobi rule for `(1 - u)^(-alpha)` on `(0, 1)`, exact for
/// polynomials of degree `2 n_nodes - 1`.
pub fn gauss_jacobi(alpha: f64, n_nodes: usize) -> Result<QuadratureRule> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("gauss_jacobi", format!("alpha = {alpha} outside (0, 1)")));
    }
    jacobi_rule(-alpha, 0.0, n_nodes).map(|(nodes, weights)| QuadratureRule { nodes, weights, alpha })
}

/// Gauss–Legendre rule on `(0, 1)`; the `alpha` field is zero.
pub fn gauss_legendre(n_nodes: usize) -> Result<QuadratureRule> {
    jacobi_rule(0.0, 0.0, n_nodes).map(|(nodes, weights)| QuadratureRule {
        nodes,
        weights,
        alpha: 0.0,
    })
}

/// Golub–Welsch for the weight `(1 - u)^a u^b` on `(0, 1)`.
fn jacobi_rule(a: f64, b: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Validation("quadrature needs at least one node".into()));
    }
    // Monic Jacobi recurrence on [-1, 1].
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (b - a) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
        let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + ab);
        off[k - 1] = (num / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first).ok_or(Error::EigenSolve(n))?;

    let mass = gamma(a + 1.0)? * gamma(b + 1.0)? / gamma(ab + 2.0)?;
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first)
        .map(|(&x, &z)| (0.5 * (x + 1.0), mass * z * z))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
/// eigenvalues and `first` the first components of the eigenvectors.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Option<()> {
    let n = diag.len();
    if n > 0 {
        off[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() + dd == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return None;
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let bb = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - bb;
                let zf = first[i + 1];
                first[i + 1] = s * first[i] + c * zf;
                first[i] = c * first[i] - s * zf;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Some(())
}
