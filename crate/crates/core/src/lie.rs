//! The N=2 superconformal algebras `Ĝ[ε]`, `ε ∈ {0, ½}`, with central
//! charge `C`, and their N=1 subalgebras.
//!
//! Indices are stored doubled (`index2`) so that half-integers are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::report::VerificationReport;
use crate::weyl::{coefficient_prefix, join_terms, Parity};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    /// `ε = 0`
    Ramond,
    /// `ε = ½`
    NeveuSchwarz,
}

impl Sector {
    /// `2ε`
    pub fn twice_epsilon(self) -> i64 {
        match self {
            Sector::Ramond => 0,
            Sector::NeveuSchwarz => 1,
        }
    }

    pub fn both() -> [Sector; 2] {
        [Sector::Ramond, Sector::NeveuSchwarz]
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Ramond => "0",
            Sector::NeveuSchwarz => "1/2",
        })
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" | "ramond" | "R" => Ok(Sector::Ramond),
            "1/2" | "ns" | "NS" | "neveu-schwarz" => Ok(Sector::NeveuSchwarz),
            other => Err(Error::InvalidSpec(format!("unknown sector {other:?}"))),
        }
    }
}

impl Serialize for Sector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    L,
    H,
    GPlus,
    GMinus,
    C,
}

impl Kind {
    pub fn parity(self) -> Parity {
        match self {
            Kind::GPlus | Kind::GMinus => Parity::Odd,
            _ => Parity::Even,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Kind::L => "L",
            Kind::H => "H",
            Kind::GPlus => "G+",
            Kind::GMinus => "G-",
            Kind::C => "C",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: Kind,
    pub index2: i64,
}

impl Generator {
    /// Checks the index lattice of `sector`.
    pub fn new(kind: Kind, index2: i64, sector: Sector) -> Result<Self> {
        let ok = match kind {
            Kind::L | Kind::H => index2 % 2 == 0,
            Kind::C => index2 == 0,
            Kind::GPlus | Kind::GMinus => index2.rem_euclid(2) == sector.twice_epsilon(),
        };
        if !ok {
            return Err(Error::BadIndex {
                kind: kind.symbol().into(),
                index2,
                sector: sector.to_string(),
            });
        }
        Ok(Generator { kind, index2 })
    }

    pub fn l(m: i64) -> Self {
        Generator { kind: Kind::L, index2: 2 * m }
    }

    pub fn h(m: i64) -> Self {
        Generator { kind: Kind::H, index2: 2 * m }
    }

    pub fn g_plus(index2: i64) -> Self {
        Generator { kind: Kind::GPlus, index2 }
    }

    pub fn g_minus(index2: i64) -> Self {
        Generator { kind: Kind::GMinus, index2 }
    }

    pub fn c() -> Self {
        Generator { kind: Kind::C, index2: 0 }
    }

    pub fn parity(self) -> Parity {
        self.kind.parity()
    }

    /// Integer index of an even generator.
    pub fn index(self) -> i64 {
        self.index2.div_euclid(2)
    }

    pub fn is_valid_in(self, sector: Sector) -> bool {
        Generator::new(self.kind, self.index2, sector).is_ok()
    }

    /// All generators of `sector` with `|index| <= w`, `C` included.
    pub fn window(sector: Sector, w: i64) -> Vec<Generator> {
        let mut out = Vec::new();
        for kind in [Kind::L, Kind::H, Kind::GPlus, Kind::GMinus] {
            for index2 in -2 * w..=2 * w {
                if let Ok(g) = Generator::new(kind, index2, sector) {
                    out.push(g);
                }
            }
        }
        out.push(Generator::c());
        out
    }
}

pub fn render_index2(index2: i64) -> String {
    if index2 % 2 == 0 {
        (index2 / 2).to_string()
    } else {
        format!("{index2}/2")
    }
}

/// Parses `"3"`, `"-1"`, `"3/2"` into a doubled index.
pub fn parse_index2(s: &str) -> Result<i64> {
    let bad = || Error::InvalidSpec(format!("bad index {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        match d.trim() {
            "2" => Ok(n),
            "1" => Ok(2 * n),
            _ => Err(bad()),
        }
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(2 * n)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == Kind::C {
            return f.write_str("C");
        }
        write!(f, "{}[{}]", self.kind.symbol(), render_index2(self.index2))
    }
}

impl FromStr for Generator {
    type Err = Error;
    /// Sector-agnostic; use [`Generator::new`] to validate.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "C" {
            return Ok(Generator::c());
        }
        let bad = || Error::InvalidSpec(format!("bad generator {s:?}"));
        let open = s.find('[').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let kind = match &s[..open] {
            "L" => Kind::L,
            "H" => Kind::H,
            "G+" => Kind::GPlus,
            "G-" => Kind::GMinus,
            _ => return Err(bad()),
        };
        let index2 = parse_index2(inner)?;
        if matches!(kind, Kind::L | Kind::H) && index2 % 2 != 0 {
            return Err(Error::BadIndex {
                kind: kind.symbol().into(),
                index2,
                sector: "any".into(),
            });
        }
        Ok(Generator { kind, index2 })
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite combination of generators of one sector.
#[derive(Clone, PartialEq, Eq)]
pub struct LieVector {
    sector: Sector,
    terms: BTreeMap<Generator, Scalar>,
}

impl LieVector {
    pub fn zero(sector: Sector) -> Self {
        LieVector {
            sector,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(sector: Sector, g: Generator) -> Result<Self> {
        Generator::new(g.kind, g.index2, sector)?;
        let mut v = LieVector::zero(sector);
        v.add_term(g, Scalar::one());
        Ok(v)
    }

    pub fn from_terms(
        sector: Sector,
        iter: impl IntoIterator<Item = (Generator, Scalar)>,
    ) -> Result<Self> {
        let mut v = LieVector::zero(sector);
        for (g, c) in iter {
            Generator::new(g.kind, g.index2, sector)?;
            v.add_term(g, c);
        }
        Ok(v)
    }

    /// Adds without lattice validation; callers maintain the invariant.
    pub(crate) fn add_term(&mut self, g: Generator, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Generator) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_central(&self) -> bool {
        self.terms.contains_key(&Generator::c())
    }

    pub fn without_central(&self) -> LieVector {
        let mut out = self.clone();
        out.terms.remove(&Generator::c());
        out
    }

    pub fn parity(&self) -> Result<Option<Parity>> {
        let mut found = None;
        for g in self.terms.keys() {
            match found {
                None => found = Some(g.parity()),
                Some(p) if p != g.parity() => return Err(Error::MixedParity),
                _ => {}
            }
        }
        Ok(found)
    }

    pub fn scale(&self, c: &Scalar) -> LieVector {
        let mut out = LieVector::zero(self.sector);
        for (g, x) in &self.terms {
            out.add_term(*g, x * c);
        }
        out
    }

    pub fn add(&self, other: &LieVector) -> Result<LieVector> {
        if self.sector != other.sector {
            return Err(sector_mismatch(self.sector, other.sector));
        }
        let mut out = self.clone();
        for (g, x) in &other.terms {
            out.add_term(*g, x.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LieVector) -> Result<LieVector> {
        self.add(&other.scale(&Scalar::from_i64(-1)))
    }
}

fn sector_mismatch(expected: Sector, found: Sector) -> Error {
    Error::SectorMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

impl fmt::Display for LieVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts = self
            .terms
            .iter()
            .map(|(g, c)| format!("{}{}", coefficient_prefix(c), g))
            .collect();
        f.write_str(&join_terms(parts))
    }
}

impl fmt::Debug for LieVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieVector[{}]({self})", self.sector)
    }
}

impl Serialize for LieVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(BigRational::new(n.into(), d.into()))
}

/// Bracket of two basis generators, as `(generator, coefficient)` pairs.
pub fn bracket_generators(x: Generator, y: Generator) -> Vec<(Generator, Scalar)> {
    use Kind::*;
    let (a, b) = (x.index2, y.index2);
    let sum = a + b;
    let central = |c: Scalar| {
        if sum == 0 {
            vec![(Generator::c(), c)]
        } else {
            vec![]
        }
    };
    let mut out = match (x.kind, y.kind) {
        (C, _) | (_, C) => vec![],
        (L, L) => {
            let (m, n) = (a / 2, b / 2);
            let mut v = vec![(Generator::l(m + n), q(m - n, 1))];
            v.extend(central(q(m * m * m - m, 12)));
            v
        }
        (H, H) => central(q(a / 2, 3)),
        (L, H) => vec![(Generator::h((a + b) / 2), q(-(b / 2), 1))],
        (H, L) => vec![(Generator::h((a + b) / 2), q(a / 2, 1))],
        (H, GPlus) => vec![(Generator::g_plus(sum), q(1, 1))],
        (H, GMinus) => vec![(Generator::g_minus(sum), q(-1, 1))],
        (GPlus, H) => vec![(Generator::g_plus(sum), q(-1, 1))],
        (GMinus, H) => vec![(Generator::g_minus(sum), q(1, 1))],
        // (m/2 - p) with m = a/2, p = b/2: (a - 2b)/4
        (L, GPlus) => vec![(Generator::g_plus(sum), q(a - 2 * b, 4))],
        (L, GMinus) => vec![(Generator::g_minus(sum), q(a - 2 * b, 4))],
        (GPlus, L) => vec![(Generator::g_plus(sum), q(2 * a - b, 4))],
        (GMinus, L) => vec![(Generator::g_minus(sum), q(2 * a - b, 4))],
        (GPlus, GPlus) | (GMinus, GMinus) => vec![],
        (GMinus, GPlus) => g_minus_g_plus(a, b),
        (GPlus, GMinus) => g_minus_g_plus(b, a),
    };
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// `[G⁻_p, G⁺_q] = 2L_{p+q} − (p−q)H_{p+q} + (4p²−1)/12 δ_{p+q,0} C`.
fn g_minus_g_plus(p2: i64, q2: i64) -> Vec<(Generator, Scalar)> {
    let sum = (p2 + q2) / 2;
    let mut v = vec![
        (Generator::l(sum), q(2, 1)),
        (Generator::h(sum), q(-(p2 - q2), 2)),
    ];
    if p2 + q2 == 0 {
        v.push((Generator::c(), q(p2 * p2 - 1, 12)));
    }
    v
}

/// Bilinear bracket over any generator-level rule.
pub fn bracket_with<F>(x: &LieVector, y: &LieVector, rule: F) -> Result<LieVector>
where
    F: Fn(Generator, Generator) -> Vec<(Generator, Scalar)>,
{
    if x.sector != y.sector {
        return Err(sector_mismatch(x.sector, y.sector));
    }
    let mut out = LieVector::zero(x.sector);
    for (gx, cx) in &x.terms {
        for (gy, cy) in &y.terms {
            let c = cx * cy;
            for (g, k) in rule(*gx, *gy) {
                out.add_term(g, &c * &k);
            }
        }
    }
    Ok(out)
}

pub fn bracket(x: &LieVector, y: &LieVector) -> Result<LieVector> {
    bracket_with(x, y, bracket_generators)
}

pub fn jacobi_check(sector: Sector, w: i64) -> VerificationReport {
    jacobi_check_with(sector, w, bracket_generators)
}

/// Graded Jacobi identity over all generator triples with `|index| <= w`.
pub fn jacobi_check_with<F>(sector: Sector, w: i64, rule: F) -> VerificationReport
where
    F: Fn(Generator, Generator) -> Vec<(Generator, Scalar)> + Sync,
{
    let gens = Generator::window(sector, w);
    let mut triples = Vec::with_capacity(gens.len().pow(3));
    for &x in &gens {
        for &y in &gens {
            for &z in &gens {
                triples.push((x, y, z));
            }
        }
    }
    let one = |x: Generator, y: Generator, z: Generator| -> (String, Option<String>) {
        let v = |g| LieVector::generator(sector, g).expect("window generator");
        let (vx, vy, vz) = (v(x), v(y), v(z));
        let br = |a: &LieVector, b: &LieVector| bracket_with(a, b, &rule).expect("same sector");
        let sign = |a: Generator, b: Generator| Scalar::from_i64(a.parity().koszul(b.parity()));
        let t1 = br(&vx, &br(&vy, &vz)).scale(&sign(x, z));
        let t2 = br(&vy, &br(&vz, &vx)).scale(&sign(y, x));
        let t3 = br(&vz, &br(&vx, &vy)).scale(&sign(z, y));
        let total = t1.add(&t2).and_then(|s| s.add(&t3)).expect("same sector");
        let item = format!("({x}, {y}, {z})");
        (item, (!total.is_zero()).then(|| format!("cyclic sum = {total}")))
    };
    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = triples.par_iter().map(|&(x, y, z)| one(x, y, z)).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = triples.iter().map(|&(x, y, z)| one(x, y, z)).collect();
    let mut report =
        VerificationReport::from_outcomes(format!("jacobi sector={sector} window={w}"), outcomes);
    report.note(format!("{} generators, central terms included", gens.len()));
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum N1Kind {
    L,
    G,
    C,
}

/// The N=1 generators inside `Ĝ[ε]`: `G_p = −(½G⁺_p + G⁻_p)`.
pub fn n1_embed(kind: N1Kind, index2: i64, sector: Sector) -> Result<LieVector> {
    match kind {
        N1Kind::L => LieVector::generator(sector, Generator::new(Kind::L, index2, sector)?),
        N1Kind::C => LieVector::generator(sector, Generator::new(Kind::C, index2, sector)?),
        N1Kind::G => LieVector::from_terms(
            sector,
            [
                (Generator::new(Kind::GPlus, index2, sector)?, q(-1, 2)),
                (Generator::new(Kind::GMinus, index2, sector)?, q(-1, 1)),
            ],
        ),
    }
}
