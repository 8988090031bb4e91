//! Expression catalog for user-defined problems.
//!
//! Every expression is expanded into a sum of atoms
//! `c · ξ^n · η^p · Π sin(w ξ) · Π cos(w ξ)` with `n` a non-negative integer
//! and `p` real. Scalars may use numbers, `pi`, `alpha`, `+ - * / ^`,
//! `sqrt(..)` and `gamma(..)`; the variables are `xi` and `eta` (or `x`
//! and `t`). Examples:
//!
//! ```text
//! 1 + xi*eta
//! -eta*sin(xi)
//! (xi^2 - xi) * eta^(1+alpha)
//! 4^alpha * gamma(alpha+0.5)/sqrt(pi) * eta^alpha * sin(pi*xi)
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fracmath::{caputo_power, gamma, FractionalOrder};
use crate::operator::{ExactSolution, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Trig {
    Sin(f64),
    Cos(f64),
}

impl Trig {
    /// `d^k/dξ^k` of the factor.
    fn derivative(self, xi: f64, k: u32) -> f64 {
        let (w, phase) = match self {
            Trig::Sin(w) => (w, 0.0),
            Trig::Cos(w) => (w, std::f64::consts::FRAC_PI_2),
        };
        // sin(wξ + φ)^{(k)} = w^k sin(wξ + φ + kπ/2)
        w.powi(k as i32) * (w * xi + phase + k as f64 * std::f64::consts::FRAC_PI_2).sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Atom {
    coef: f64,
    xi_pow: u32,
    eta_pow: f64,
    trig: Vec<Trig>,
}

impl Atom {
    fn scalar(c: f64) -> Self {
        Atom {
            coef: c,
            xi_pow: 0,
            eta_pow: 0.0,
            trig: Vec::new(),
        }
    }

    fn is_scalar(&self) -> bool {
        self.xi_pow == 0 && self.eta_pow == 0.0 && self.trig.is_empty()
    }

    fn mul(&self, other: &Atom) -> Atom {
        let mut trig = self.trig.clone();
        trig.extend_from_slice(&other.trig);
        Atom {
            coef: self.coef * other.coef,
            xi_pow: self.xi_pow + other.xi_pow,
            eta_pow: self.eta_pow + other.eta_pow,
            trig,
        }
    }

    fn eval(&self, xi: f64, eta: f64) -> f64 {
        let mut v = self.coef * xi.powi(self.xi_pow as i32);
        if self.eta_pow != 0.0 {
            v *= eta.powf(self.eta_pow);
        }
        for t in &self.trig {
            v *= t.derivative(xi, 0);
        }
        v
    }

    /// `d^k/dξ^k` of the ξ-part; at most one trigonometric factor.
    fn space_derivative(&self, xi: f64, k: u32) -> f64 {
        let n = self.xi_pow;
        let poly = |j: u32| -> f64 {
            if j > n {
                return 0.0;
            }
            let falling: f64 = (0..j).map(|i| (n - i) as f64).product();
            falling * xi.powi((n - j) as i32)
        };
        let v = match self.trig.first() {
            None => poly(k),
            Some(&t) => {
                let mut acc = 0.0;
                let mut binom = 1.0;
                for j in 0..=k {
                    acc += binom * poly(j) * t.derivative(xi, k - j);
                    binom = binom * (k - j) as f64 / (j + 1) as f64;
                }
                acc
            }
        };
        self.coef * v
    }
}

/// A parsed catalog expression, fully expanded.
#[derive(Clone, PartialEq)]
pub struct Expression {
    source: String,
    atoms: Vec<Atom>,
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({:?})", self.source)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Expression {
    /// Parses `src` with `alpha` bound to the given order.
    pub fn parse(src: &str, alpha: FractionalOrder) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            alpha: alpha.value(),
        };
        let atoms = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expression(format!("unexpected {} in '{src}'", p.tokens[p.pos])));
        }
        if let Some(a) = atoms.iter().find(|a| !a.coef.is_finite() || !a.eta_pow.is_finite()) {
            return Err(Error::Expression(format!("non-finite constant in '{src}' ({a:?})")));
        }
        Ok(Expression {
            source: src.trim().to_string(),
            atoms,
        })
    }

    pub fn eval(&self, xi: f64, eta: f64) -> f64 {
        self.atoms.iter().map(|a| a.eval(xi, eta)).sum()
    }

    pub fn into_field(self) -> ScalarField {
        Arc::new(move |xi, eta| self.eval(xi, eta))
    }

    /// Checks that the expression can serve as an exact solution: at most one
    /// trigonometric factor per atom and η-exponents `0` or `>= alpha`.
    pub fn into_exact(self, alpha: FractionalOrder) -> Result<Arc<dyn ExactSolution>> {
        for a in &self.atoms {
            if a.trig.len() > 1 {
                return Err(Error::Expression(format!(
                    "exact solution '{}' multiplies several trigonometric factors",
                    self.source
                )));
            }
            if a.eta_pow != 0.0 && a.eta_pow < alpha.value() {
                return Err(Error::Expression(format!(
                    "exact solution '{}' has η-exponent {} below alpha",
                    self.source, a.eta_pow
                )));
            }
        }
        Ok(Arc::new(self))
    }
}

impl ExactSolution for Expression {
    fn d_xi(&self, xi: f64, eta: f64, order: u32) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let t = if a.eta_pow == 0.0 { 1.0 } else { eta.powf(a.eta_pow) };
                a.space_derivative(xi, order) * t
            })
            .sum()
    }

    fn caputo_eta(&self, xi: f64, eta: f64, alpha: FractionalOrder) -> Result<f64> {
        let mut acc = 0.0;
        for a in &self.atoms {
            acc += a.space_derivative(xi, 0) * caputo_power(a.eta_pow, alpha, eta)?;
        }
        Ok(acc)
    }

    fn value(&self, xi: f64, eta: f64) -> f64 {
        self.eval(xi, eta)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "number {v}"),
            Token::Ident(s) => write!(f, "'{s}'"),
            Token::Op(c) => write!(f, "'{c}'"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Expression(format!("bad number '{text}'")))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Expression(format!("unexpected character '{c}' in '{src}'")));
        }
    }
    if out.is_empty() {
        return Err(Error::Expression("empty expression".into()));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    alpha: f64,
}

type Poly = Vec<Atom>;

fn as_scalar(p: &Poly, what: &str) -> Result<f64> {
    if p.iter().all(Atom::is_scalar) {
        Ok(p.iter().map(|a| a.coef).sum())
    } else {
        Err(Error::Expression(format!("{what} must not depend on xi or eta")))
    }
}

fn product(a: &Poly, b: &Poly) -> Poly {
    a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect()
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(Error::Expression(match self.peek() {
                Some(t) => format!("expected '{c}', found {t}"),
                None => format!("expected '{c}' at end of input"),
            }))
        }
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc.extend(self.term()?);
            } else if self.eat_op('-') {
                acc.extend(self.term()?.into_iter().map(|mut a| {
                    a.coef = -a.coef;
                    a
                }));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                let rhs = self.unary()?;
                acc = product(&acc, &rhs);
            } else if self.eat_op('/') {
                let d = as_scalar(&self.unary()?, "divisor")?;
                if d == 0.0 {
                    return Err(Error::Expression("division by zero".into()));
                }
                for a in &mut acc {
                    a.coef /= d;
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat_op('-') {
            let mut p = self.unary()?;
            for a in &mut p {
                a.coef = -a.coef;
            }
            Ok(p)
        } else if self.eat_op('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let e = as_scalar(&self.unary_exponent()?, "exponent")?;
        if let [a] = base.as_slice() {
            if a.is_scalar() {
                return Ok(vec![Atom::scalar(a.coef.powf(e))]);
            }
            if a.coef == 1.0 && a.trig.is_empty() {
                let xi_pow = if e.fract() == 0.0 && e >= 0.0 {
                    Some(a.xi_pow * e as u32)
                } else if a.xi_pow == 0 {
                    Some(0)
                } else {
                    None
                };
                if let Some(xi_pow) = xi_pow {
                    if a.eta_pow * e >= 0.0 {
                        return Ok(vec![Atom {
                            coef: 1.0,
                            xi_pow,
                            eta_pow: a.eta_pow * e,
                            trig: Vec::new(),
                        }]);
                    }
                }
            }
        }
        Err(Error::Expression(format!(
            "unsupported power ^{e}: only scalars, non-negative integer powers of xi and non-negative powers of eta"
        )))
    }

    /// Exponents bind tighter than unary minus on the left but may carry one.
    fn unary_exponent(&mut self) -> Result<Poly> {
        if self.eat_op('-') {
            let mut p = self.primary()?;
            for a in &mut p {
                a.coef = -a.coef;
            }
            Ok(p)
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Poly> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Expression("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(vec![Atom::scalar(v)]),
            Token::Op('(') => {
                let p = self.sum()?;
                self.expect_op(')')?;
                Ok(p)
            }
            Token::Op(c) => Err(Error::Expression(format!("unexpected '{c}'"))),
            Token::Ident(name) => self.identifier(&name),
        }
    }

    fn identifier(&mut self, name: &str) -> Result<Poly> {
        match name {
            "pi" => Ok(vec![Atom::scalar(std::f64::consts::PI)]),
            "alpha" => Ok(vec![Atom::scalar(self.alpha)]),
            "xi" | "x" => Ok(vec![Atom {
                xi_pow: 1,
                ..Atom::scalar(1.0)
            }]),
            "eta" | "t" => Ok(vec![Atom {
                eta_pow: 1.0,
                ..Atom::scalar(1.0)
            }]),
            "sin" | "cos" => {
                let arg = self.call_argument()?;
                let w = match arg.as_slice() {
                    [a] if a.xi_pow == 1 && a.eta_pow == 0.0 && a.trig.is_empty() => a.coef,
                    _ => {
                        return Err(Error::Expression(format!(
                            "{name}(..) takes an argument of the form c*xi"
                        )))
                    }
                };
                let t = if name == "sin" { Trig::Sin(w) } else { Trig::Cos(w) };
                Ok(vec![Atom {
                    trig: vec![t],
                    ..Atom::scalar(1.0)
                }])
            }
            "sqrt" => {
                let v = as_scalar(&self.call_argument()?, "sqrt argument")?;
                if v < 0.0 {
                    return Err(Error::Expression(format!("sqrt of negative value {v}")));
                }
                Ok(vec![Atom::scalar(v.sqrt())])
            }
            "gamma" => {
                let v = as_scalar(&self.call_argument()?, "gamma argument")?;
                gamma(v)
                    .map(|g| vec![Atom::scalar(g)])
                    .map_err(|e| Error::Expression(e.to_string()))
            }
            other => Err(Error::Expression(format!("unknown name '{other}'"))),
        }
    }

    fn call_argument(&mut self) -> Result<Poly> {
        self.expect_op('(')?;
        let p = self.sum()?;
        self.expect_op(')')?;
        Ok(p)
    }
}
