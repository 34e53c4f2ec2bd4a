use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by graded-lex monomial order and
/// zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree of a term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(q) = m.div_var(i) {
                out.add_term(q, c * Rational::from_integer(m.exponent(i).into()));
            }
        }
        out
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::MismatchedArity(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Splits into coefficients of powers of `x_i`; the keys are exponents
    /// and the values no longer involve `x_i`.
    fn split_by_var(&self, i: usize) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(i))
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(m.with_exponent(i, 0), c.clone());
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial arity mismatch")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
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
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if is_const {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Binary operation selector for [`poly_arith`].
#[derive(Clone, Debug)]
pub enum ArithOp {
    Add,
    Mul,
    /// Scales the left operand; the right operand only takes part in the
    /// arity check.
    Scale(Rational),
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Scale(c) => {
            a.check_arity(b)?;
            Ok(a.scale(&c))
        }
    }
}

/// A nonzero homogeneous linear form `c_1 x_1 + ... + c_n x_n`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    /// `None` when every coefficient is zero.
    pub fn new(coeffs: Vec<Rational>) -> Option<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            None
        } else {
            Some(LinearForm { coeffs })
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Largest index with a nonzero coefficient, together with that
    /// coefficient.
    pub fn pivot(&self) -> (usize, &Rational) {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !c.is_zero())
            .expect("linear form is nonzero")
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.nvars();
        Polynomial::from_terms(
            n,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

/// Reduction modulo a linear form by eliminating its pivot variable.
///
/// The pivot `x_p` (largest index with nonzero coefficient `c_p`) is
/// replaced by `-(1/c_p) * sum_{i != p} c_i x_i`. Powers of that
/// substitution are cached, so reducing many monomials of bounded degree
/// against one hyperplane is cheap.
#[derive(Clone, Debug)]
pub struct LinearReducer {
    form: LinearForm,
    pivot: usize,
    pivot_coeff: Rational,
    /// `ℓ - c_p x_p`
    rest: Polynomial,
    powers: Vec<Polynomial>,
}

impl LinearReducer {
    pub fn new(form: &LinearForm) -> Self {
        Self::with_max_degree(form, 1)
    }

    pub fn with_max_degree(form: &LinearForm, max_degree: u32) -> Self {
        let n = form.nvars();
        let (pivot, cp) = form.pivot();
        let cp = cp.clone();
        let rest = Polynomial::from_terms(
            n,
            form.coeffs()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pivot)
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        );
        let subst = rest.scale(&-(Rational::one() / &cp));
        let mut powers = vec![Polynomial::one(n)];
        for _ in 0..max_degree {
            let next = powers.last().unwrap() * &subst;
            powers.push(next);
        }
        LinearReducer {
            form: form.clone(),
            pivot,
            pivot_coeff: cp,
            rest,
            powers,
        }
    }

    pub fn form(&self) -> &LinearForm {
        &self.form
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    fn power(&self, e: u32) -> std::borrow::Cow<'_, Polynomial> {
        let e = e as usize;
        if e < self.powers.len() {
            return std::borrow::Cow::Borrowed(&self.powers[e]);
        }
        let subst = &self.powers[1];
        let mut acc = self.powers.last().unwrap().clone();
        for _ in self.powers.len()..=e {
            acc = &acc * subst;
        }
        std::borrow::Cow::Owned(acc)
    }

    /// Reduces a single term `c * m`.
    pub fn reduce_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        let e = m.exponent(self.pivot);
        self.power(e)
            .mul_monomial(&m.with_exponent(self.pivot, 0), c)
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.nvars(), self.form.nvars(), "polynomial arity");
        let mut out = Polynomial::zero(p.nvars());
        for (m, c) in p.terms() {
            let r = self.reduce_monomial(m, c);
            out.add_scaled(&r, &Rational::one());
        }
        out
    }

    /// Exact quotient `p / ℓ` by synthetic division in the pivot variable.
    pub fn divide(&self, p: &Polynomial) -> Result<Polynomial> {
        assert_eq!(p.nvars(), self.form.nvars(), "polynomial arity");
        let n = p.nvars();
        if p.is_zero() {
            return Ok(Polynomial::zero(n));
        }
        let mut parts = p.split_by_var(self.pivot);
        let top = *parts.keys().next_back().unwrap();
        let mut quotient = Polynomial::zero(n);
        let mut cur = parts.remove(&top).unwrap();
        let inv = Rational::one() / &self.pivot_coeff;
        for e in (1..=top).rev() {
            let q = cur.scale(&inv);
            let shift = Monomial::one(n).with_exponent(self.pivot, e - 1);
            quotient.add_scaled(&q.mul_monomial(&shift, &Rational::one()), &Rational::one());
            let mut next = parts
                .remove(&(e - 1))
                .unwrap_or_else(|| Polynomial::zero(n));
            next.add_scaled(&(&self.rest * &q), &-Rational::one());
            cur = next;
        }
        if cur.is_zero() {
            Ok(quotient)
        } else {
            Err(Error::NonDivisible { remainder: cur })
        }
    }
}

/// Reduces `p` modulo `ℓ`; the result is zero exactly when `ℓ` divides `p`.
pub fn reduce_mod_linear(p: &Polynomial, l: &LinearForm) -> Polynomial {
    let deg = p.degree().unwrap_or(0);
    LinearReducer::with_max_degree(l, deg).reduce(p)
}

/// Exact division by a linear form, failing with [`Error::NonDivisible`].
pub fn exact_div_linear(p: &Polynomial, l: &LinearForm) -> Result<Polynomial> {
    LinearReducer::new(l).divide(p)
}
