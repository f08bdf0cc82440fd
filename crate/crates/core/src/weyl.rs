//! Normal-form arithmetic in the Weyl superalgebra `SD` and its action on
//! Laurent superpolynomials `A = C[t^{±1}, θ]`.
//!
//! Every element is stored as a combination of basis words `t^k D^l c` where
//! `D = t d/dt` and `c` is one of the Clifford units `1, θ∂θ, θ, ∂θ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::expr::{self, ExprValue};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^{|x||y|}` as a small integer.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != rhs.is_odd())
    }
}

/// The four Clifford factors of a basis word, in rendering order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliffordUnit {
    One,
    /// `θ∂θ`
    N,
    Theta,
    DTheta,
}

impl CliffordUnit {
    pub const ALL: [CliffordUnit; 4] = [
        CliffordUnit::One,
        CliffordUnit::N,
        CliffordUnit::Theta,
        CliffordUnit::DTheta,
    ];

    pub fn parity(self) -> Parity {
        match self {
            CliffordUnit::One | CliffordUnit::N => Parity::Even,
            CliffordUnit::Theta | CliffordUnit::DTheta => Parity::Odd,
        }
    }

    /// Product in the Clifford superalgebra, as a list of `(unit, coefficient)`.
    pub fn mul(self, rhs: CliffordUnit) -> &'static [(CliffordUnit, i64)] {
        use CliffordUnit::*;
        match (self, rhs) {
            (One, One) => &[(One, 1)],
            (One, N) | (N, One) | (N, N) => &[(N, 1)],
            (One, Theta) | (Theta, One) | (N, Theta) => &[(Theta, 1)],
            (One, DTheta) | (DTheta, One) | (DTheta, N) => &[(DTheta, 1)],
            (N, DTheta) | (Theta, N) | (Theta, Theta) | (DTheta, DTheta) => &[],
            (Theta, DTheta) => &[(N, 1)],
            (DTheta, Theta) => &[(One, 1), (N, -1)],
        }
    }

    fn render(self) -> Option<&'static str> {
        match self {
            CliffordUnit::One => None,
            CliffordUnit::N => Some("theta*dtheta"),
            CliffordUnit::Theta => Some("theta"),
            CliffordUnit::DTheta => Some("dtheta"),
        }
    }
}

/// A basis word `t^k D^l c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub k: i64,
    pub l: u32,
    pub c: CliffordUnit,
}

impl Word {
    pub fn new(k: i64, l: u32, c: CliffordUnit) -> Self {
        Word { k, l, c }
    }

    pub fn parity(self) -> Parity {
        self.c.parity()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.k {
            0 => {}
            1 => parts.push("t".into()),
            k => parts.push(format!("t^{k}")),
        }
        match self.l {
            0 => {}
            1 => parts.push("D".into()),
            l => parts.push(format!("D^{l}")),
        }
        if let Some(c) = self.c.render() {
            parts.push(c.into());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(D + m)^l` expanded as coefficients of `D^j`, `j = 0..=l`.
fn shifted_power(m: i64, l: u32) -> Vec<BigInt> {
    let m = BigInt::from(m);
    (0..=l)
        .map(|j| binomial(l, j) * num_traits::pow(m.clone(), (l - j) as usize))
        .collect()
}

fn insert(terms: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&w) {
        Some(old) => {
            let sum = &*old + &c;
            if sum.is_zero() {
                terms.remove(&w);
            } else {
                *old = sum;
            }
        }
        None => {
            terms.insert(w, c);
        }
    }
}

/// An element of the Weyl superalgebra in normal form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SDElement {
    terms: BTreeMap<Word, Scalar>,
}

impl SDElement {
    pub fn zero() -> Self {
        SDElement::default()
    }

    pub fn one() -> Self {
        SDElement::word(Word::new(0, 0, CliffordUnit::One), Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        SDElement::word(Word::new(0, 0, CliffordUnit::One), c)
    }

    pub fn word(w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        insert(&mut terms, w, c);
        SDElement { terms }
    }

    pub fn t(k: i64) -> Self {
        SDElement::word(Word::new(k, 0, CliffordUnit::One), Scalar::one())
    }

    pub fn d() -> Self {
        SDElement::word(Word::new(0, 1, CliffordUnit::One), Scalar::one())
    }

    pub fn clifford(c: CliffordUnit) -> Self {
        SDElement::word(Word::new(0, 0, c), Scalar::one())
    }

    /// `∂t = t^{-1} D`.
    pub fn partial_t() -> Self {
        SDElement::word(Word::new(-1, 1, CliffordUnit::One), Scalar::one())
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut terms = BTreeMap::new();
        for (w, c) in iter {
            insert(&mut terms, w, c);
        }
        SDElement { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
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

    /// `Ok(None)` for zero, `Ok(Some(p))` when homogeneous.
    pub fn parity(&self) -> Result<Option<Parity>> {
        let mut found = None;
        for w in self.terms.keys() {
            match found {
                None => found = Some(w.parity()),
                Some(p) if p != w.parity() => return Err(Error::MixedParity),
                _ => {}
            }
        }
        Ok(found)
    }

    pub fn scale(&self, c: &Scalar) -> SDElement {
        if c.is_zero() {
            return SDElement::zero();
        }
        SDElement {
            terms: self.terms.iter().map(|(w, x)| (*w, x * c)).collect(),
        }
    }

    /// Largest power of `D` that occurs.
    pub fn d_degree(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.l).max()
    }

    pub fn specialize(&self, assignment: &crate::scalar::Assignment) -> Result<SDElement> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            insert(&mut terms, *w, c.specialize(assignment)?);
        }
        Ok(SDElement { terms })
    }
}

/// Normal-form product.
pub fn sd_mul(a: &SDElement, b: &SDElement) -> SDElement {
    let mut terms = BTreeMap::new();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let cliff = wa.c.mul(wb.c);
            if cliff.is_empty() {
                continue;
            }
            let coeff = ca * cb;
            let shift = shifted_power(wb.k, wa.l);
            for (j, binom) in shift.iter().enumerate() {
                if binom.is_zero() {
                    continue;
                }
                for &(c, sign) in cliff {
                    let w = Word::new(wa.k + wb.k, j as u32 + wb.l, c);
                    let factor = Scalar::from_rational((binom * BigInt::from(sign)).into());
                    insert(&mut terms, w, &coeff * &factor);
                }
            }
        }
    }
    SDElement { terms }
}

/// `[a, b] = ab - (-1)^{|a||b|} ba` for homogeneous `a`, `b`.
pub fn sd_supercommutator(a: &SDElement, b: &SDElement) -> Result<SDElement> {
    let (pa, pb) = match (a.parity()?, b.parity()?) {
        (Some(pa), Some(pb)) => (pa, pb),
        _ => return Ok(SDElement::zero()),
    };
    let ab = sd_mul(a, b);
    let ba = sd_mul(b, a);
    Ok(if pa.koszul(pb) == 1 { &ab - &ba } else { &ab + &ba })
}

impl<'a> Add<&'a SDElement> for &'a SDElement {
    type Output = SDElement;
    fn add(self, rhs: &SDElement) -> SDElement {
        let mut terms = self.terms.clone();
        for (w, c) in &rhs.terms {
            insert(&mut terms, *w, c.clone());
        }
        SDElement { terms }
    }
}

impl<'a> Sub<&'a SDElement> for &'a SDElement {
    type Output = SDElement;
    fn sub(self, rhs: &SDElement) -> SDElement {
        let mut terms = self.terms.clone();
        for (w, c) in &rhs.terms {
            insert(&mut terms, *w, -c);
        }
        SDElement { terms }
    }
}

impl<'a> Mul<&'a SDElement> for &'a SDElement {
    type Output = SDElement;
    fn mul(self, rhs: &SDElement) -> SDElement {
        sd_mul(self, rhs)
    }
}

impl Neg for &SDElement {
    type Output = SDElement;
    fn neg(self) -> SDElement {
        SDElement {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }
}

/// Renders a coefficient so that `coefficient * rest` reparses correctly.
pub(crate) fn coefficient_prefix(c: &Scalar) -> String {
    if c.is_one() {
        return String::new();
    }
    if (-c).is_one() {
        return "-".into();
    }
    let text = c.to_string();
    if c.numerator().terms().len() == 1 {
        format!("{text}*")
    } else {
        format!("({text})*")
    }
}

/// Joins rendered signed terms as `a + b - c`.
pub(crate) fn join_terms(parts: Vec<String>) -> String {
    let mut out = String::new();
    for (i, p) in parts.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    out
}

impl fmt::Display for SDElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts = self
            .terms
            .iter()
            .map(|(w, c)| {
                if *w == Word::new(0, 0, CliffordUnit::One) {
                    let text = c.to_string();
                    if c.numerator().terms().len() == 1 {
                        text
                    } else {
                        format!("({text})")
                    }
                } else {
                    format!("{}{}", coefficient_prefix(c), w)
                }
            })
            .collect();
        write!(f, "{}", join_terms(parts))
    }
}

impl fmt::Debug for SDElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SDElement({self})")
    }
}

impl ExprValue for SDElement {
    fn integer(n: BigInt) -> Self {
        SDElement::scalar(Scalar::from_rational(n.into()))
    }

    fn identifier(name: &str, offset: usize) -> Result<Self> {
        Ok(match name {
            "t" => SDElement::t(1),
            "D" => SDElement::d(),
            "theta" => SDElement::clifford(CliffordUnit::Theta),
            "dtheta" => SDElement::clifford(CliffordUnit::DTheta),
            "dt" => SDElement::partial_t(),
            _ => {
                if name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                    return Err(Error::Parse {
                        offset,
                        message: format!("unknown operator {name:?}"),
                    });
                }
                SDElement::scalar(Scalar::param(name))
            }
        })
    }

    fn expr_add(self, rhs: Self) -> Result<Self> {
        Ok(&self + &rhs)
    }

    fn expr_sub(self, rhs: Self) -> Result<Self> {
        Ok(&self - &rhs)
    }

    fn expr_mul(self, rhs: Self) -> Result<Self> {
        Ok(sd_mul(&self, &rhs))
    }

    fn expr_div(self, rhs: Self, offset: usize) -> Result<Self> {
        match rhs.as_scalar() {
            Some(c) if !c.is_zero() => Ok(self.scale(&c.recip()?)),
            Some(_) => Err(Error::DivisionByZero),
            None => Err(Error::Parse {
                offset,
                message: "only division by scalars is supported".into(),
            }),
        }
    }

    fn expr_pow(self, exp: i64, offset: usize) -> Result<Self> {
        if let Some(c) = self.as_scalar() {
            return Ok(SDElement::scalar(c.pow(exp)?));
        }
        if let Some(k) = self.as_t_power() {
            return Ok(SDElement::t(k * exp));
        }
        if exp < 0 {
            return Err(Error::Parse {
                offset,
                message: "negative powers are only defined for t and scalars".into(),
            });
        }
        let mut acc = SDElement::one();
        for _ in 0..exp {
            acc = sd_mul(&acc, &self);
        }
        Ok(acc)
    }

    fn expr_neg(self) -> Result<Self> {
        Ok(-&self)
    }
}

impl SDElement {
    /// The coefficient when `self` is a multiple of `1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [] => Some(Scalar::zero()),
            [(w, c)] if **w == Word::new(0, 0, CliffordUnit::One) => Some((*c).clone()),
            _ => None,
        }
    }

    fn as_t_power(&self) -> Option<i64> {
        match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [(w, c)] if w.l == 0 && w.c == CliffordUnit::One && c.is_one() => Some(w.k),
            _ => None,
        }
    }
}

impl FromStr for SDElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        expr::parse(s)
    }
}

impl Serialize for SDElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An element of `C[t^{±1}, θ]`, keyed by `(n, has_theta)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SuperLaurent {
    terms: BTreeMap<(i64, bool), Scalar>,
}

impl SuperLaurent {
    pub fn zero() -> Self {
        SuperLaurent::default()
    }

    pub fn monomial(n: i64, theta: bool, c: Scalar) -> Self {
        let mut out = SuperLaurent::zero();
        out.add_term(n, theta, c);
        out
    }

    pub fn add_term(&mut self, n: i64, theta: bool, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (n, theta);
        match self.terms.get_mut(&key) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, bool), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn parity(&self) -> Result<Option<Parity>> {
        let mut found = None;
        for &(_, theta) in self.terms.keys() {
            let p = Parity::from_odd(theta);
            match found {
                None => found = Some(p),
                Some(q) if q != p => return Err(Error::MixedParity),
                _ => {}
            }
        }
        Ok(found)
    }

    pub fn scale(&self, c: &Scalar) -> SuperLaurent {
        let mut out = SuperLaurent::zero();
        for (&(n, th), x) in &self.terms {
            out.add_term(n, th, x * c);
        }
        out
    }

    pub fn add(&self, other: &SuperLaurent) -> SuperLaurent {
        let mut out = self.clone();
        for (&(n, th), x) in &other.terms {
            out.add_term(n, th, x.clone());
        }
        out
    }
}

impl fmt::Display for SuperLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts = self
            .terms
            .iter()
            .map(|(&(n, th), c)| {
                let w = Word::new(n, 0, if th { CliffordUnit::Theta } else { CliffordUnit::One });
                if w == Word::new(0, 0, CliffordUnit::One) {
                    let text = c.to_string();
                    if c.numerator().terms().len() == 1 {
                        text
                    } else {
                        format!("({text})")
                    }
                } else {
                    format!("{}{}", coefficient_prefix(c), w)
                }
            })
            .collect();
        write!(f, "{}", join_terms(parts))
    }
}

impl fmt::Debug for SuperLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperLaurent({self})")
    }
}

/// Applies the differential operator `op` to `f` via `D t^n = n t^n`.
pub fn sd_apply(op: &SDElement, f: &SuperLaurent) -> SuperLaurent {
    let mut out = SuperLaurent::zero();
    for (w, c) in &op.terms {
        for (&(n, theta), x) in &f.terms {
            let theta = match (w.c, theta) {
                (CliffordUnit::One, th) => th,
                (CliffordUnit::N, true) => true,
                (CliffordUnit::Theta, false) => true,
                (CliffordUnit::DTheta, true) => false,
                _ => continue,
            };
            let eigen = num_traits::pow(BigInt::from(n), w.l as usize);
            if eigen.is_zero() {
                continue;
            }
            let coeff = &(c * x) * &Scalar::from_rational(eigen.into());
            out.add_term(n + w.k, theta, coeff);
        }
    }
    out
}

/// Integer value of a constant scalar, when it has one.
pub(crate) fn scalar_as_integer(c: &Scalar) -> Option<i64> {
    let q = c.as_rational()?;
    if q.is_integer() && q.numer().abs() < BigInt::from(i64::MAX) {
        q.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests;
