//! Exact scalars: multivariate rational functions over ℚ in named formal
//! parameters, kept in a canonical reduced form.
//!
//! A [`Scalar`] is stored as `numerator / denominator` with
//! - `gcd(numerator, denominator) = 1`,
//! - integer coefficients whose joint content is 1,
//! - a positive leading coefficient in the denominator.
//!
//! Under these rules two scalars are equal as rational functions exactly when
//! they are structurally equal, so `==` is semantic equality.

mod poly;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use poly::{gcd, Monomial, Poly, Var};

use crate::expr::{self, ExprValue};
use crate::{Error, Result};

/// Parameter assignment used by [`Scalar::specialize`].
pub type Assignment = BTreeMap<String, BigRational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_parts(Poly::constant(q), Poly::one()).expect("unit denominator")
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// The formal parameter `name`.
    pub fn param(name: &str) -> Self {
        Scalar {
            num: Poly::var(Var::new(name)),
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let (mut num, mut den) = (num, den);
        if !den.is_constant() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        Ok(Scalar::normalized(num, den))
    }

    /// Fixes the integer content and sign of an already coprime pair.
    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let (lcm_n, _) = num.integer_content();
        let (lcm_d, _) = den.integer_content();
        let lcm = BigRational::from_integer(num_integer::lcm(lcm_n, lcm_d));
        let scaled_num = num.scale(&lcm);
        let scaled_den = den.scale(&lcm);
        let (_, g1) = scaled_num.integer_content();
        let (_, g2) = scaled_den.integer_content();
        let mut g = num_integer::gcd(g1, g2);
        let lead_negative = scaled_den
            .leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if lead_negative {
            g = -g;
        }
        let s = BigRational::from_integer(g).recip();
        Scalar {
            num: scaled_num.scale(&s),
            den: scaled_den.scale(&s),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a rational number, when no parameter occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.num
            .vars()
            .into_iter()
            .chain(self.den.vars())
            .map(|v| v.name().to_owned())
            .collect()
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() || self.is_zero() {
            return Scalar::zero();
        }
        Self::from_parts(self.num.scale(q), self.den.clone()).expect("nonzero denominator")
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::from_parts(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            let e = e as u32;
            Ok(Scalar {
                num: self.num.pow(e),
                den: self.den.pow(e),
            })
        } else {
            Scalar::pow(&self.recip()?, -e)
        }
    }

    /// Substitutes rationals for some parameters; unassigned ones survive.
    pub fn specialize(&self, assignment: &Assignment) -> Result<Scalar> {
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let vars: BTreeMap<Var, BigRational> = assignment
            .iter()
            .map(|(k, v)| (Var::new(k), v.clone()))
            .collect();
        let num = self.num.substitute(&vars);
        let den = self.den.substitute(&vars);
        if den.is_zero() {
            return Err(Error::SingularSpecialization(render_assignment(assignment)));
        }
        Self::from_parts(num, den)
    }

    /// Partial derivative with respect to the parameter `name`.
    pub fn derivative(&self, name: &str) -> Scalar {
        let v = Var::new(name);
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::from_parts(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }
}

pub fn render_assignment(assignment: &Assignment) -> String {
    let parts: Vec<String> = assignment
        .iter()
        .map(|(k, v)| format!("{k}={}", render_rational(v)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn render_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a rational literal such as `-3/4` or `2`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let value: Scalar = s.parse()?;
    value.as_rational().ok_or_else(|| Error::Parse {
        offset: 0,
        message: format!("{s:?} is not a rational constant"),
    })
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Scalar::from_parts(self.num.add(&rhs.num), self.den.clone())
                .expect("nonzero denominator");
        }
        let g = if self.den.is_constant() || rhs.den.is_constant() {
            Poly::one()
        } else {
            gcd(&self.den, &rhs.den)
        };
        if g.is_one() {
            // coprime denominators leave nothing to cancel
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            return Scalar::normalized(num, self.den.mul(&rhs.den));
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let mut num = self.num.mul(&d2).add(&rhs.num.mul(&d1));
        // only factors of the shared part can cancel
        let h = gcd(&num, &g);
        let mut g = g;
        if !h.is_one() {
            num = num.div_exact(&h).expect("gcd divides");
            g = g.div_exact(&h).expect("gcd divides");
        }
        Scalar::normalized(num, g.mul(&d1).mul(&d2))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.is_constant() {
            return rhs.scale(&self.as_rational().expect("constant"));
        }
        if rhs.is_constant() {
            return self.scale(&rhs.as_rational().expect("constant"));
        }
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        Scalar::normalized(n1.mul(&n2), d1.mul(&d2))
    }
}

fn cancel(num: &Poly, den: &Poly) -> (Poly, Poly) {
    if den.is_constant() {
        return (num.clone(), den.clone());
    }
    let g = gcd(num, den);
    if g.is_one() {
        (num.clone(), den.clone())
    } else {
        (
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl ExprValue for Scalar {
    fn integer(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    fn identifier(name: &str, _offset: usize) -> Result<Self> {
        Ok(Scalar::param(name))
    }

    fn expr_add(self, rhs: Self) -> Result<Self> {
        Ok(&self + &rhs)
    }

    fn expr_sub(self, rhs: Self) -> Result<Self> {
        Ok(&self - &rhs)
    }

    fn expr_mul(self, rhs: Self) -> Result<Self> {
        Ok(&self * &rhs)
    }

    fn expr_div(self, rhs: Self, _offset: usize) -> Result<Self> {
        self.checked_div(&rhs)
    }

    fn expr_pow(self, exp: i64, _offset: usize) -> Result<Self> {
        Scalar::pow(&self, exp)
    }

    fn expr_neg(self) -> Result<Self> {
        Ok(-self)
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        expr::parse(s)
    }
}

fn all_negative(p: &Poly) -> bool {
    p.terms().len() > 1 && p.terms().iter().all(|(_, c)| c.is_negative())
}

fn is_atomic_denominator(p: &Poly) -> bool {
    match p.terms() {
        [(m, c)] => m.is_one() || (c.is_one() && m.factors().count() == 1),
        _ => false,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grouped_neg = all_negative(&self.num);
        let num = if grouped_neg {
            format!("-({})", self.num.neg())
        } else {
            self.num.to_string()
        };
        if self.den.is_one() {
            return f.write_str(&num);
        }
        if self.num.terms().len() > 1 && !grouped_neg {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        if is_atomic_denominator(&self.den) {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
