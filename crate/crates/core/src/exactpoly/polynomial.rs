use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::naming::VariableNaming;
use super::{PolyError, Rational};

/// Multivariate polynomial over the rationals in canonical form: no zero
/// coefficients, every monomial has exactly `nvars` exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn check_dims(expected: usize, found: usize) -> Result<(), PolyError> {
    if expected == found {
        Ok(())
    } else {
        Err(PolyError::DimensionMismatch { expected, found })
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    /// The coordinate function `z_index`.
    ///
    /// Panics if `index >= nvars`; see [`Polynomial::try_var`].
    pub fn var(nvars: usize, index: usize) -> Self {
        Self::try_var(nvars, index).expect("variable index out of range")
    }

    pub fn try_var(nvars: usize, index: usize) -> Result<Self, PolyError> {
        if index >= nvars {
            return Err(PolyError::IndexOutOfRange { index, nvars });
        }
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, index), Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            check_dims(nvars, exps.len())?;
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// `Some(d)` iff every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>, PolyError> {
        let (first, _) = self.terms.iter().next().ok_or(PolyError::ZeroPolynomial)?;
        let d = first.degree();
        Ok(self.terms.keys().all(|m| m.degree() == d).then_some(d))
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        check_dims(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        check_dims(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        check_dims(self.nvars, other.nvars)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.nvars));
        }
        // Clear denominators so the inner loop runs on integers only.
        let (da, a) = self.integer_terms();
        let (db, b) = other.integer_terms();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod);
            }
        }
        let den = da * db;
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in acc {
            if !c.is_zero() {
                out.terms.insert(m, Rational::new(c, den.clone()));
            }
        }
        Ok(out)
    }

    /// Common denominator and the integer numerators over it.
    fn integer_terms(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&den / c.denom())))
            .collect();
        (den, terms)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut out = Polynomial::constant(self.nvars, Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Exact partial derivative with respect to `z_index`.
    pub fn partial(&self, index: usize) -> Result<Polynomial, PolyError> {
        if index >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index, nvars: self.nvars });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[index] -= 1;
            out.terms.insert(Monomial::new(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        check_dims(self.nvars, point.len())?;
        let powers = power_table(self, point, Rational::one());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        check_dims(self.nvars, point.len())?;
        let powers = power_table(self, point, 1.0);
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Precomposition with the linear map `z ↦ M z`: the result `r`
    /// satisfies `r(z) = self(M z)`.
    pub fn subst_linear(&self, matrix: &[Vec<Rational>]) -> Result<Polynomial, PolyError> {
        check_dims(self.nvars, matrix.len())?;
        for row in matrix {
            check_dims(self.nvars, row.len())?;
        }
        let images: Vec<Polynomial> = matrix
            .iter()
            .map(|row| {
                let mut p = Polynomial::zero(self.nvars);
                for (j, c) in row.iter().enumerate() {
                    p.add_term(Monomial::var(self.nvars, j), c.clone());
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::constant(self.nvars, Rational::one())])
            .collect();
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(self.nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Multivariate division by a single divisor in graded-lex order.
    /// Returns `(quotient, remainder)` with `self = quotient·d + remainder`
    /// and no term of the remainder divisible by the leading monomial of `d`.
    pub fn divide(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        check_dims(self.nvars, d.nvars)?;
        let (lm, lc) = d.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut work = self.clone();
        let mut quotient = Polynomial::zero(self.nvars);
        let mut remainder = Polynomial::zero(self.nvars);
        while let Some((m, c)) = work.terms.pop_last() {
            match m.checked_div(&lm) {
                Some(qm) => {
                    let qc = &c / &lc;
                    // The leading term cancels by construction; subtract the rest.
                    for (dm, dc) in d.terms.iter().rev().skip(1) {
                        work.add_term(qm.mul(dm), -(&qc * dc));
                    }
                    quotient.add_term(qm, qc);
                }
                None => remainder.add_term(m, c),
            }
        }
        Ok((quotient, remainder))
    }

    /// `Some(q)` with `q·d = self` when `d` divides `self`, `None` otherwise.
    pub fn divide_exact(&self, d: &Polynomial) -> Result<Option<Polynomial>, PolyError> {
        let (q, r) = self.divide(d)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Re-homes this polynomial into `nvars` variables starting at `offset`.
    pub fn embed(&self, offset: usize, nvars: usize) -> Result<Polynomial, PolyError> {
        if offset + self.nvars > nvars {
            return Err(PolyError::DimensionMismatch {
                expected: nvars,
                found: offset + self.nvars,
            });
        }
        Ok(Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(offset, nvars), c.clone()))
                .collect(),
        })
    }

    /// Largest coefficient magnitude as a float; zero for the zero polynomial.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    pub fn display_with(&self, naming: &VariableNaming) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| match e {
                    1 => naming.name(i).to_string(),
                    _ => format!("{}^{}", naming.name(i), e),
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn power_table<T>(p: &Polynomial, point: &[T], one: T) -> Vec<Vec<T>>
where
    T: Clone + for<'a> Mul<&'a T, Output = T>,
{
    let mut max_exp = vec![0u32; p.nvars];
    for m in p.terms.keys() {
        for (i, &e) in m.exponents().iter().enumerate() {
            max_exp[i] = max_exp[i].max(e);
        }
    }
    point
        .iter()
        .zip(max_exp)
        .map(|(x, emax)| {
            let mut row = Vec::with_capacity(emax as usize + 1);
            row.push(one.clone());
            for e in 1..=emax as usize {
                let next = row[e - 1].clone() * x;
                row.push(next);
            }
            row
        })
        .collect()
}

pub(crate) fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VariableNaming::interleaved(self.nvars)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics on mismatched variable counts; use the `checked_` form
            /// to get an error instead.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    // Order (x1, y1, x2, y2).
    fn x1() -> Polynomial {
        Polynomial::var(4, 0)
    }
    fn y1() -> Polynomial {
        Polynomial::var(4, 1)
    }
    fn x2() -> Polynomial {
        Polynomial::var(4, 2)
    }
    fn y2() -> Polynomial {
        Polynomial::var(4, 3)
    }

    fn clifford() -> Polynomial {
        x1() * y2() - y1() * x2()
    }

    #[test]
    fn ring_examples() {
        let sum = (x1() + y1()) + (x1() - y1());
        assert_eq!(sum, x1().scale(&r(2)));
        let prod = (x1() + y1()) * (x1() - y1());
        assert_eq!(prod, x1() * x1() - y1() * y1());
        let p = clifford();
        assert_eq!(&p + &Polynomial::zero(4), p);
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = clifford() - clifford();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert_eq!(
            a.checked_add(&b),
            Err(PolyError::DimensionMismatch { expected: 2, found: 3 })
        );
        assert!(a.checked_mul(&b).is_err());
        assert!(a.eval_f64(&[1.0]).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let p = x1() * x1() * y2();
        assert_eq!(p.partial(0).unwrap(), (x1() * y2()).scale(&r(2)));
        assert_eq!(clifford().partial(3).unwrap(), x1());
        assert!(Polynomial::from_int(4, 7).partial(0).unwrap().is_zero());
        assert_eq!(
            p.partial(4),
            Err(PolyError::IndexOutOfRange { index: 4, nvars: 4 })
        );
    }

    #[test]
    fn evaluation() {
        let pt = [r(1), r(2), r(3), r(4)];
        assert_eq!(clifford().eval(&pt).unwrap(), r(-2));
        assert_eq!(clifford().eval_f64(&[1.0, 2.0, 3.0, 4.0]).unwrap(), -2.0);
        let p = clifford() + Polynomial::constant(4, q(3, 7));
        assert_eq!(p.eval(&[r(0), r(0), r(0), r(0)]).unwrap(), q(3, 7));
        let t1 = Polynomial::var(2, 0).pow(2) - Polynomial::var(2, 1).pow(2);
        assert_eq!(t1.eval(&[r(3), r(1)]).unwrap(), r(8));
    }

    #[test]
    fn linear_substitution() {
        let id: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { r(1) } else { r(0) }).collect())
            .collect();
        assert_eq!(clifford().subst_linear(&id).unwrap(), clifford());

        let half: Vec<Vec<Rational>> = id
            .iter()
            .map(|row| row.iter().map(|c| c * q(1, 2)).collect())
            .collect();
        assert_eq!(
            clifford().subst_linear(&half).unwrap(),
            clifford().scale(&q(1, 4))
        );

        let mut swap = id.clone();
        swap.swap(0, 1);
        assert_eq!(
            clifford().subst_linear(&swap).unwrap(),
            y1() * y2() - x1() * x2()
        );
        assert!(clifford().subst_linear(&id[..3]).is_err());
    }

    #[test]
    fn exact_division() {
        let p = clifford();
        assert_eq!(
            p.scale(&r(2)).divide_exact(&p).unwrap(),
            Some(Polynomial::from_int(4, 2))
        );
        assert_eq!(x1().divide_exact(&y1()).unwrap(), None);
        assert_eq!(
            x1().divide_exact(&Polynomial::zero(4)),
            Err(PolyError::DivisionByZero)
        );
        let d = x1() + y1();
        let qt = x1() * x1() - x2() * y2() + Polynomial::from_int(4, 3);
        assert_eq!((&qt * &d).divide_exact(&d).unwrap(), Some(qt));
    }

    #[test]
    fn division_with_remainder() {
        let d = x1() * y1() - Polynomial::from_int(4, 1);
        let r0 = x1() * x1() * y1() + y2();
        let (qt, rem) = r0.divide(&d).unwrap();
        assert_eq!(qt, x1());
        assert_eq!(rem, x1() + y2());
        assert_eq!(&qt * &d + &rem, r0);
    }

    #[test]
    fn homogeneity() {
        assert_eq!(clifford().homogeneous_degree().unwrap(), Some(2));
        let mixed = x1() * x1() + y1();
        assert_eq!(mixed.homogeneous_degree().unwrap(), None);
        assert_eq!(
            Polynomial::zero(4).homogeneous_degree(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn display_uses_interleaved_names() {
        assert_eq!(clifford().to_string(), "x1*y2 - y1*x2");
        let p = x1().pow(2).scale(&q(-1, 2)) + Polynomial::from_int(4, 3);
        assert_eq!(p.to_string(), "-1/2*x1^2 + 3");
    }
}
