//! Sparse multivariate polynomials over ℚ with a graded-lexicographic term
//! order, and the gcd used to keep rational functions reduced.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// An interned parameter name.
///
/// Variables compare by name, so the global variable order is alphabetical
/// and independent of the order in which names were first seen.
#[derive(Clone, Copy)]
pub struct Var(&'static str);

impl Var {
    pub fn new(name: &str) -> Var {
        static NAMES: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
        let mut names = NAMES
            .get_or_init(Default::default)
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = names.get(name) {
            return Var(existing);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        names.insert(leaked);
        Var(leaked)
    }

    pub fn name(self) -> &'static str {
        self.0
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A power product, stored as `(var, exponent)` pairs sorted by variable with
/// positive exponents only.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[(Var, u32); 3]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        let mut m = SmallVec::new();
        if exp > 0 {
            m.push((v, exp));
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in &self.0 {
            if j < b.len() && b[j].0 < v {
                return None;
            }
            if j < b.len() && b[j].0 == v {
                match e.cmp(&b[j].1) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - b[j].1)),
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    fn without(&self, v: Var) -> (u32, Monomial) {
        let mut out = SmallVec::new();
        let mut exp = 0;
        for &(w, e) in &self.0 {
            if w == v {
                exp = e;
            } else {
                out.push((w, e));
            }
        }
        (exp, Monomial(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    } else if va < vb {
                        return Ordering::Greater;
                    } else {
                        return Ordering::Less;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with terms sorted by strictly decreasing monomial and no
/// zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    fn from_map(map: BTreeMap<Monomial, BigRational>) -> Self {
        Poly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().map(|(v, _)| v))
            .collect()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &BigRational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let entry = acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        Poly::from_map(acc)
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, BigRational)> = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quotient.push((qm, qc));
        }
        // quotient terms are produced in decreasing order
        Some(Poly { terms: quotient })
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn substitute(&self, assignment: &BTreeMap<Var, BigRational>) -> Poly {
        if assignment.is_empty() {
            return self.clone();
        }
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = SmallVec::new();
            for (v, e) in m.factors() {
                match assignment.get(&v) {
                    Some(val) => coeff *= num_traits::pow(val.clone(), e as usize),
                    None => rest.push((v, e)),
                }
            }
            if coeff.is_zero() {
                continue;
            }
            *acc.entry(Monomial(rest)).or_insert_with(BigRational::zero) += coeff;
        }
        Poly::from_map(acc)
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            if e == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::var(v, e - 1));
            *acc.entry(m2).or_insert_with(BigRational::zero) += c * BigRational::from_integer(e.into());
        }
        Poly::from_map(acc)
    }

    fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients of `self` seen as a polynomial in `v`, lowest degree first.
    fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut maps: Vec<BTreeMap<Monomial, BigRational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            maps[e as usize].insert(rest, c.clone());
        }
        maps.into_iter().map(Poly::from_map).collect()
    }

    fn from_coefficients_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul_term(&Monomial::var(v, e as u32), &BigRational::one()));
            }
        }
        acc
    }

    /// Least common multiple of coefficient denominators and gcd of the
    /// coefficient numerators.
    pub(crate) fn integer_content(&self) -> (BigInt, BigInt) {
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for (_, c) in &self.terms {
            lcm = lcm.lcm(c.denom());
            gcd = gcd.gcd(c.numer());
        }
        (lcm, gcd)
    }
}

fn is_unit(p: &Poly) -> bool {
    p.is_constant() && !p.is_zero()
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        let mut g = if a.terms.len() == 1 {
            a.terms[0].0.clone()
        } else {
            b.terms[0].0.clone()
        };
        for (m, _) in a.terms.iter().chain(b.terms.iter()) {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        return Poly::monomial(g, BigRational::one());
    }
    let vars_a = a.vars();
    let vars_b = b.vars();
    if let Some(&x) = vars_a.symmetric_difference(&vars_b).next() {
        let (with, without) = if vars_a.contains(&x) { (a, b) } else { (b, a) };
        let content = gcd_all(&with.coefficients_in(x));
        return gcd(&content, without);
    }
    if vars_a.len() > 1 && certainly_coprime(a, b, &vars_a) {
        return Poly::one();
    }
    // pick the variable of smallest degree to keep the recursion shallow
    let x = *vars_a
        .iter()
        .min_by_key(|v| a.degree_in(**v).max(b.degree_in(**v)))
        .expect("non-constant polynomial has a variable");
    let ca = a.coefficients_in(x);
    let cb = b.coefficients_in(x);
    let cont_a = gcd_all(&ca);
    let cont_b = gcd_all(&cb);
    let cont = gcd(&cont_a, &cont_b);
    let pa = divide_all(&ca, &cont_a);
    let pb = divide_all(&cb, &cont_b);
    let prim = prs_gcd(pa, pb);
    Poly::from_coefficients_in(x, &prim).mul(&cont).monic()
}

/// Sufficient test for `gcd(a, b) = 1`: for each variable `x`, specialize the
/// other variables at a point keeping the leading coefficient of `a` in `x`
/// nonzero; a common factor of positive degree in `x` would survive as a
/// common univariate factor.
fn certainly_coprime(a: &Poly, b: &Poly, vars: &BTreeSet<Var>) -> bool {
    const POINTS: [i64; 6] = [2, -3, 5, 7, -11, 13];
    'vars: for &x in vars {
        let others: Vec<Var> = vars.iter().copied().filter(|&v| v != x).collect();
        let lead = a.coefficients_in(x).pop().expect("nonzero polynomial");
        for shift in 0..3 {
            let point: BTreeMap<Var, BigRational> = others
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let n = POINTS[(i + 2 * shift) % POINTS.len()] + shift as i64;
                    (v, BigRational::from_integer(n.into()))
                })
                .collect();
            if lead.substitute(&point).is_zero() {
                continue;
            }
            let ua = a.substitute(&point);
            let ub = b.substitute(&point);
            if ub.is_zero() {
                continue;
            }
            if gcd(&ua, &ub).is_constant() {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

fn gcd_all(polys: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        g = gcd(&g, p);
        if is_unit(&g) {
            return Poly::one();
        }
    }
    g
}

fn divide_all(polys: &[Poly], d: &Poly) -> Vec<Poly> {
    polys
        .iter()
        .map(|p| p.div_exact(d).expect("content divides every coefficient"))
        .collect()
}

fn degree(coeffs: &[Poly]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

fn trim(coeffs: &mut Vec<Poly>) {
    while coeffs.last().is_some_and(Poly::is_zero) {
        coeffs.pop();
    }
}

fn pseudo_remainder(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let dg = degree(g).expect("nonzero divisor");
    let lcg = &g[dg];
    let mut r = f.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let lcr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lcg);
        }
        for (j, gj) in g.iter().enumerate() {
            let idx = j + dr - dg;
            r[idx] = r[idx].sub(&lcr.mul(gj));
        }
        trim(&mut r);
    }
    r
}

/// Divides out the polynomial content and scales to integer coefficients
/// with unit content.
fn primitive(coeffs: Vec<Poly>) -> Vec<Poly> {
    let content = gcd_all(&coeffs);
    let mut coeffs = if is_unit(&content) || content.is_zero() {
        coeffs
    } else {
        divide_all(&coeffs, &content)
    };
    let mut lcm = BigInt::one();
    let mut g = BigInt::zero();
    for c in &coeffs {
        let (l, n) = c.integer_content();
        lcm = lcm.lcm(&l);
        g = g.gcd(&n);
    }
    if !g.is_zero() {
        let factor = BigRational::new(lcm, g);
        if !factor.is_one() {
            for c in coeffs.iter_mut() {
                *c = c.scale(&factor);
            }
        }
    }
    coeffs
}

/// Primitive polynomial remainder sequence over the coefficient ring.
fn prs_gcd(mut f: Vec<Poly>, mut g: Vec<Poly>) -> Vec<Poly> {
    trim(&mut f);
    trim(&mut g);
    f = primitive(f);
    g = primitive(g);
    if degree(&f) < degree(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        match degree(&g) {
            None => return f,
            Some(0) => return vec![Poly::one()],
            Some(_) => {}
        }
        let r = pseudo_remainder(&f, &g);
        if degree(&r).is_none() {
            return g;
        }
        f = g;
        g = primitive(r);
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write_coefficient(f, &mag)?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write_coefficient(f, &mag)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn v(name: &str) -> Poly {
        Poly::var(Var::new(name))
    }

    #[test]
    fn monomial_order_is_graded_lex_alphabetical() {
        let a = Monomial::var(Var::new("a"), 1);
        let b = Monomial::var(Var::new("b"), 1);
        let b2 = Monomial::var(Var::new("b"), 2);
        assert!(a > b);
        assert!(b2 > a);
        assert!(b > Monomial::one());
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let x = v("x");
        let y = v("y");
        let common = x.add(&y).add(&Poly::one());
        let a = common.mul(&x.sub(&y));
        let b = common.mul(&x.mul(&y).add(&Poly::constant(q(3))));
        assert_eq!(gcd(&a, &b), common.monic());
    }

    #[test]
    fn gcd_with_missing_variable() {
        let x = v("x");
        let y = v("y");
        let a = x.mul(&y.add(&Poly::one()));
        let b = y.add(&Poly::one()).mul(&y.sub(&Poly::one()));
        assert_eq!(gcd(&a, &b), y.add(&Poly::one()));
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let x = v("x");
        let p = x.mul(&x).sub(&Poly::one());
        let d = x.sub(&Poly::one());
        assert_eq!(p.div_exact(&d), Some(x.add(&Poly::one())));
        assert_eq!(p.div_exact(&x), None);
    }

    #[test]
    fn derivative_and_substitution() {
        let x = Var::new("x");
        let p = v("x").pow(3).add(&v("x").mul(&v("y")));
        assert_eq!(p.derivative(x), v("x").pow(2).scale(&q(3)).add(&v("y")));
        let mut assign = BTreeMap::new();
        assign.insert(x, q(2));
        assert_eq!(p.substitute(&assign), Poly::constant(q(8)).add(&v("y").scale(&q(2))));
    }
}
