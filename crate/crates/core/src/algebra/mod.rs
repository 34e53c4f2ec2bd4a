//! Exact polynomial and differential-form arithmetic over the rationals.
//!
//! Everything here is immutable-by-value: operations return new objects and
//! never share mutable state, so values can be handed across threads freely.

mod form;
mod monomial;
mod poly;

pub use form::{merge_sign, subsets, PolyForm};
pub use monomial::{monomials_of_degree, Monomial};
pub use poly::{
    exact_div_linear, poly_arith, reduce_mod_linear, ArithOp, LinearForm, LinearReducer, Polynomial,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}
