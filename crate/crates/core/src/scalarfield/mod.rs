//! Expression trees for transcendental height functions, evaluated to
//! second order by forward propagation of [`Jet2`] values.

mod fd;
mod jet;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::exactpoly::{rational_to_f64, Polynomial, Rational, VariableNaming};

pub use fd::{fd_gradient, fd_hessian, relative_error};
pub use jet::Jet2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("point has {found} coordinates, field expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("out of domain at `{node}` (value {value:e})")]
    OutOfDomain { node: String, value: f64 },
}

/// Evaluation is refused when a denominator (or the cosine under a tangent)
/// falls below `min_abs` in magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainGuard {
    min_abs: f64,
}

impl DomainGuard {
    pub const DEFAULT_MIN_ABS: f64 = 1e-9;

    /// Panics unless `min_abs > 0`.
    pub fn new(min_abs: f64) -> Self {
        assert!(min_abs > 0.0, "domain guard threshold must be positive");
        DomainGuard { min_abs }
    }

    pub fn min_abs(&self) -> f64 {
        self.min_abs
    }
}

impl Default for DomainGuard {
    fn default() -> Self {
        DomainGuard { min_abs: Self::DEFAULT_MIN_ABS }
    }
}

#[derive(Clone, Debug)]
pub enum Constant {
    Exact(Rational),
    Float(f64),
}

impl Constant {
    pub fn to_f64(&self) -> f64 {
        match self {
            Constant::Exact(r) => rational_to_f64(r),
            Constant::Float(x) => *x,
        }
    }
}

/// A polynomial leaf with its coefficients pre-converted for float evaluation.
#[derive(Debug)]
pub struct PolyLeaf {
    poly: Polynomial,
    // (coefficient, [(variable, exponent)]) for nonzero exponents only
    float_terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl PolyLeaf {
    fn new(poly: Polynomial) -> Self {
        let float_terms = poly
            .terms()
            .map(|(m, c)| {
                let support = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                (rational_to_f64(c), support)
            })
            .collect();
        PolyLeaf { poly, float_terms }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    fn value(&self, pt: &[f64]) -> f64 {
        self.float_terms
            .iter()
            .map(|(c, support)| {
                support
                    .iter()
                    .fold(*c, |acc, &(i, e)| acc * pt[i].powi(e as i32))
            })
            .sum()
    }

    fn jet(&self, pt: &[f64]) -> Jet2 {
        let n = pt.len();
        let mut value = 0.0;
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        let pw = |i: usize, e: i64| -> f64 {
            if e <= 0 {
                1.0
            } else {
                pt[i].powi(e as i32)
            }
        };
        for (c, support) in &self.float_terms {
            // Each factor z_i^e contributes (z^e, e z^(e-1), e(e-1) z^(e-2)).
            let f0: Vec<f64> = support.iter().map(|&(i, e)| pw(i, e as i64)).collect();
            let f1: Vec<f64> = support
                .iter()
                .map(|&(i, e)| e as f64 * pw(i, e as i64 - 1))
                .collect();
            let f2: Vec<f64> = support
                .iter()
                .map(|&(i, e)| (e as f64) * (e as f64 - 1.0) * pw(i, e as i64 - 2))
                .collect();
            let prod_except = |skip: &[usize]| -> f64 {
                f0.iter()
                    .enumerate()
                    .filter(|(k, _)| !skip.contains(k))
                    .fold(*c, |acc, (_, v)| acc * v)
            };
            value += prod_except(&[]);
            for (a, &(i, _)) in support.iter().enumerate() {
                let rest = prod_except(&[a]);
                grad[i] += f1[a] * rest;
                hess[i * n + i] += f2[a] * rest;
                for (b, &(j, _)) in support.iter().enumerate().skip(a + 1) {
                    let mixed = f1[a] * f1[b] * prod_except(&[a, b]);
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    hess[lo * n + hi] += mixed;
                }
            }
        }
        Jet2::from_parts(n, value, grad, hess)
    }
}

/// Expression node. Variables index the owning field's coordinates.
#[derive(Clone, Debug)]
pub enum Expr {
    Constant(Constant),
    Variable(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Negate(Box<Expr>),
    Reciprocal(Box<Expr>),
    IntegerPower(Box<Expr>, i32),
    Arctan(Box<Expr>),
    Tan(Box<Expr>),
    Polynomial(Arc<PolyLeaf>),
}

impl Expr {
    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Constant(_) => None,
            Expr::Variable(i) => Some(*i),
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().filter_map(Expr::max_var).max(),
            Expr::Negate(e)
            | Expr::Reciprocal(e)
            | Expr::IntegerPower(e, _)
            | Expr::Arctan(e)
            | Expr::Tan(e) => e.max_var(),
            Expr::Polynomial(p) => p.poly.nvars().checked_sub(1),
        }
    }

    fn shift(&self, offset: usize, nvars: usize) -> Expr {
        let rec = |e: &Expr| Box::new(e.shift(offset, nvars));
        match self {
            Expr::Constant(c) => Expr::Constant(c.clone()),
            Expr::Variable(i) => Expr::Variable(i + offset),
            Expr::Sum(xs) => Expr::Sum(xs.iter().map(|e| e.shift(offset, nvars)).collect()),
            Expr::Product(xs) => Expr::Product(xs.iter().map(|e| e.shift(offset, nvars)).collect()),
            Expr::Negate(e) => Expr::Negate(rec(e)),
            Expr::Reciprocal(e) => Expr::Reciprocal(rec(e)),
            Expr::IntegerPower(e, k) => Expr::IntegerPower(rec(e), *k),
            Expr::Arctan(e) => Expr::Arctan(rec(e)),
            Expr::Tan(e) => Expr::Tan(rec(e)),
            Expr::Polynomial(p) => Expr::Polynomial(Arc::new(PolyLeaf::new(
                p.poly.embed(offset, nvars).expect("embedding fits"),
            ))),
        }
    }

    fn eval(&self, pt: &[f64], guard: &DomainGuard) -> Result<f64, FieldError> {
        Ok(match self {
            Expr::Constant(c) => c.to_f64(),
            Expr::Variable(i) => pt[*i],
            Expr::Sum(xs) => {
                let mut acc = 0.0;
                for e in xs {
                    acc += e.eval(pt, guard)?;
                }
                acc
            }
            Expr::Product(xs) => {
                let mut acc = 1.0;
                for e in xs {
                    acc *= e.eval(pt, guard)?;
                }
                acc
            }
            Expr::Negate(e) => -e.eval(pt, guard)?,
            Expr::Reciprocal(e) => 1.0 / self.guarded(e.eval(pt, guard)?, guard)?,
            Expr::IntegerPower(e, k) => {
                let u = e.eval(pt, guard)?;
                if *k < 0 {
                    self.guarded(u, guard)?;
                }
                u.powi(*k)
            }
            Expr::Arctan(e) => e.eval(pt, guard)?.atan(),
            Expr::Tan(e) => {
                let u = e.eval(pt, guard)?;
                self.guarded(u.cos(), guard)?;
                u.tan()
            }
            Expr::Polynomial(p) => p.value(pt),
        })
    }

    fn jet(&self, pt: &[f64], guard: &DomainGuard) -> Result<Jet2, FieldError> {
        let n = pt.len();
        Ok(match self {
            Expr::Constant(c) => Jet2::constant(n, c.to_f64()),
            Expr::Variable(i) => Jet2::variable(n, *i, pt[*i]),
            Expr::Sum(xs) => {
                let mut acc = Jet2::constant(n, 0.0);
                for e in xs {
                    acc.add_assign(&e.jet(pt, guard)?);
                }
                acc
            }
            Expr::Product(xs) => {
                let mut acc = Jet2::constant(n, 1.0);
                for e in xs {
                    acc = acc.mul(&e.jet(pt, guard)?);
                }
                acc
            }
            Expr::Negate(e) => e.jet(pt, guard)?.scale(-1.0),
            Expr::Reciprocal(e) => {
                let j = e.jet(pt, guard)?;
                let u = self.guarded(j.value(), guard)?;
                let inv = 1.0 / u;
                j.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
            }
            Expr::IntegerPower(e, k) => {
                let j = e.jet(pt, guard)?;
                let u = j.value();
                match *k {
                    0 => Jet2::constant(n, 1.0),
                    k => {
                        if k < 0 {
                            self.guarded(u, guard)?;
                        }
                        let kf = k as f64;
                        j.chain(u.powi(k), kf * u.powi(k - 1), kf * (kf - 1.0) * u.powi(k - 2))
                    }
                }
            }
            Expr::Arctan(e) => {
                let j = e.jet(pt, guard)?;
                let u = j.value();
                let d = 1.0 / (1.0 + u * u);
                j.chain(u.atan(), d, -2.0 * u * d * d)
            }
            Expr::Tan(e) => {
                let j = e.jet(pt, guard)?;
                let u = j.value();
                self.guarded(u.cos(), guard)?;
                let t = u.tan();
                let sec2 = 1.0 + t * t;
                j.chain(t, sec2, 2.0 * t * sec2)
            }
            Expr::Polynomial(p) => p.jet(pt),
        })
    }

    fn guarded(&self, denom: f64, guard: &DomainGuard) -> Result<f64, FieldError> {
        if denom.abs() < guard.min_abs || !denom.is_finite() {
            Err(FieldError::OutOfDomain { node: self.to_string(), value: denom })
        } else {
            Ok(denom)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, xs: &[Expr], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (k, e) in xs.iter().enumerate() {
                if k > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Constant(Constant::Exact(r)) => write!(f, "{r}"),
            Expr::Constant(Constant::Float(x)) => write!(f, "{x}"),
            Expr::Variable(i) => write!(f, "z[{i}]"),
            Expr::Sum(xs) => join(f, xs, " + "),
            Expr::Product(xs) => join(f, xs, " * "),
            Expr::Negate(e) => write!(f, "-{e}"),
            Expr::Reciprocal(e) => write!(f, "1/{e}"),
            Expr::IntegerPower(e, k) => write!(f, "{e}^{k}"),
            Expr::Arctan(e) => write!(f, "atan({e})"),
            Expr::Tan(e) => write!(f, "tan({e})"),
            Expr::Polynomial(p) => write!(f, "[{}]", p.poly),
        }
    }
}

/// A scalar function on `R^nvars` given by an expression tree.
#[derive(Clone, Debug)]
pub struct ScalarField {
    nvars: usize,
    root: Expr,
}

impl ScalarField {
    /// Panics if the expression references a variable `>= nvars`.
    pub fn new(nvars: usize, root: Expr) -> Self {
        if let Some(m) = root.max_var() {
            assert!(m < nvars, "expression uses variable {m} in a {nvars}-variable field");
        }
        ScalarField { nvars, root }
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        Self::new(nvars, Expr::Variable(index))
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::new(nvars, Expr::Constant(Constant::Float(c)))
    }

    pub fn exact_constant(nvars: usize, c: Rational) -> Self {
        Self::new(nvars, Expr::Constant(Constant::Exact(c)))
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        ScalarField {
            nvars: p.nvars(),
            root: Expr::Polynomial(Arc::new(PolyLeaf::new(p.clone()))),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn expr(&self) -> &Expr {
        &self.root
    }

    /// The underlying polynomial when the whole field is a single polynomial leaf.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.root {
            Expr::Polynomial(p) => Some(&p.poly),
            _ => None,
        }
    }

    fn unary(self, wrap: fn(Box<Expr>) -> Expr) -> Self {
        ScalarField { nvars: self.nvars, root: wrap(Box::new(self.root)) }
    }

    pub fn recip(self) -> Self {
        self.unary(Expr::Reciprocal)
    }

    pub fn atan(self) -> Self {
        self.unary(Expr::Arctan)
    }

    pub fn tan(self) -> Self {
        self.unary(Expr::Tan)
    }

    pub fn powi(self, k: i32) -> Self {
        ScalarField { nvars: self.nvars, root: Expr::IntegerPower(Box::new(self.root), k) }
    }

    pub fn scale(self, c: f64) -> Self {
        let nvars = self.nvars;
        ScalarField::constant(nvars, c) * self
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: ScalarField) -> Self {
        self * other.recip()
    }

    /// The same function viewed on `nvars` coordinates, reading its own
    /// variables from `offset..offset + self.nvars()`.
    pub fn embed(&self, offset: usize, nvars: usize) -> Self {
        assert!(offset + self.nvars <= nvars, "embedding does not fit");
        ScalarField { nvars, root: self.root.shift(offset, nvars) }
    }

    fn check_point(&self, pt: &[f64]) -> Result<(), FieldError> {
        if pt.len() != self.nvars {
            return Err(FieldError::DimensionMismatch { expected: self.nvars, found: pt.len() });
        }
        Ok(())
    }

    pub fn eval(&self, pt: &[f64], guard: &DomainGuard) -> Result<f64, FieldError> {
        self.check_point(pt)?;
        self.root.eval(pt, guard)
    }

    /// Value, gradient and Hessian by second-order forward propagation.
    pub fn eval_jet2(&self, pt: &[f64], guard: &DomainGuard) -> Result<Jet2, FieldError> {
        self.check_point(pt)?;
        self.root.jet(pt, guard)
    }

    pub fn describe(&self) -> String {
        let names = VariableNaming::interleaved(self.nvars);
        let mut s = self.root.to_string();
        // Longest indices first so z[1] does not clobber z[10].
        for i in (0..self.nvars).rev() {
            s = s.replace(&format!("z[{i}]"), names.name(i));
        }
        s
    }
}

fn combine(a: ScalarField, b: ScalarField, product: bool) -> ScalarField {
    assert_eq!(a.nvars, b.nvars, "scalar field dimension mismatch");
    let mut items = Vec::new();
    for e in [a.root, b.root] {
        match (e, product) {
            (Expr::Sum(xs), false) | (Expr::Product(xs), true) => items.extend(xs),
            (e, _) => items.push(e),
        }
    }
    let root = if product { Expr::Product(items) } else { Expr::Sum(items) };
    ScalarField { nvars: a.nvars, root }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: ScalarField) -> ScalarField {
        combine(self, rhs, false)
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: ScalarField) -> ScalarField {
        combine(self, -rhs, false)
    }
}

impl Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: ScalarField) -> ScalarField {
        combine(self, rhs, true)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.unary(Expr::Negate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn g() -> DomainGuard {
        DomainGuard::default()
    }

    fn helicoid() -> ScalarField {
        ScalarField::variable(2, 1).div(ScalarField::variable(2, 0)).atan()
    }

    #[test]
    fn polynomial_leaf_matches_polynomial() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &x * &x + &y * &y;
        let f = ScalarField::from_poly(&p);
        let j = f.eval_jet2(&[1.0, 2.0], &g()).unwrap();
        assert_eq!(j.value(), 5.0);
        assert_eq!(j.gradient(), [2.0, 4.0]);
        assert_eq!(j.hessian_flat(), [2.0, 0.0, 0.0, 2.0]);

        let single = ScalarField::from_poly(&x);
        let j = single.eval_jet2(&[0.3, -0.7], &g()).unwrap();
        assert_eq!(j.value(), 0.3);
        assert_eq!(j.gradient(), [1.0, 0.0]);
        assert!(j.hessian_flat().iter().all(|&h| h == 0.0));

        let zero = ScalarField::from_poly(&Polynomial::zero(2));
        let j = zero.eval_jet2(&[0.3, -0.7], &g()).unwrap();
        assert_eq!(j.value(), 0.0);
        assert_eq!(j.gradient(), [0.0, 0.0]);
    }

    #[test]
    fn t1_leaf() {
        let t1 = Polynomial::var(2, 0).pow(2) - Polynomial::var(2, 1).pow(2);
        let f = ScalarField::from_poly(&t1);
        assert_eq!(f.eval(&[3.0, 1.0], &g()).unwrap(), 8.0);
        assert_eq!(f.describe(), "[x1^2 - y1^2]");
    }

    #[test]
    fn helicoid_jet_at_axis() {
        // grad atan(y/x) = (-y, x)/(x²+y²); at (1,0) the only second
        // derivative is d²/dxdy = (y² - x²)/(x²+y²)² = -1.
        let j = helicoid().eval_jet2(&[1.0, 0.0], &g()).unwrap();
        assert_eq!(j.value(), 0.0);
        assert_eq!(j.gradient(), [0.0, 1.0]);
        assert_eq!(j.hessian(0, 0), 0.0);
        assert_eq!(j.hessian(1, 1), 0.0);
        assert_eq!(j.hessian(0, 1), -1.0);
        assert_eq!(j.hessian(1, 0), -1.0);
    }

    #[test]
    fn out_of_domain_reports_node() {
        let err = helicoid().eval_jet2(&[0.0, 1.0], &g()).unwrap_err();
        match err {
            FieldError::OutOfDomain { node, value } => {
                assert_eq!(node, "1/z[0]");
                assert_eq!(value, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        let t = ScalarField::variable(1, 0).tan();
        assert!(t.eval(&[std::f64::consts::FRAC_PI_2], &g()).is_err());
        assert!(t.eval_jet2(&[0.5], &g()).is_ok());
    }

    #[test]
    fn dimension_checked() {
        assert_eq!(
            helicoid().eval(&[1.0], &g()),
            Err(FieldError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn integer_powers_and_constants() {
        let x = ScalarField::variable(1, 0);
        let f = x.clone().powi(-2) + ScalarField::exact_constant(1, rat(3));
        let j = f.eval_jet2(&[2.0], &g()).unwrap();
        assert_eq!(j.value(), 0.25 + 3.0);
        assert_eq!(j.gradient(), [-2.0 / 8.0]);
        assert_eq!(j.hessian(0, 0), 6.0 / 16.0);
        assert!(x.powi(-1).eval(&[0.0], &g()).is_err());
    }

    #[test]
    fn embedding_shifts_variables() {
        let f = helicoid().embed(2, 5);
        assert_eq!(f.nvars(), 5);
        let j = f.eval_jet2(&[9.0, 9.0, 1.0, 0.0, 9.0], &g()).unwrap();
        assert_eq!(j.gradient(), [0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(j.hessian(2, 3), -1.0);
        let p = ScalarField::from_poly(&Polynomial::var(2, 1)).embed(1, 3);
        assert_eq!(p.eval(&[5.0, 6.0, 7.0], &g()).unwrap(), 7.0);
    }

    #[test]
    #[should_panic]
    fn rejects_out_of_range_variable() {
        ScalarField::new(2, Expr::Variable(2));
    }
}
