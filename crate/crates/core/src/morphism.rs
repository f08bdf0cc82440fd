//! Maps between the algebras: spectral flow `δ`, the realization `ϖ` of the
//! centerless Ramond algebra inside `SD`, the twist `σ_b` of the extended
//! algebra `𝓖 ⋉ A`, and the automorphism `σ`.

use std::fmt;

use num_rational::BigRational;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::lie::{bracket, bracket_with, bracket_generators, Generator, Kind, LieVector, Sector};
use crate::report::VerificationReport;
use crate::weyl::{sd_apply, sd_supercommutator, CliffordUnit, Parity, SDElement, SuperLaurent, Word};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `Ĝ[½] → Ĝ[0]`
    Forward,
    /// `Ĝ[0] → Ĝ[½]`
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismTag {
    Delta,
    DeltaInv,
    Varpi,
    SigmaB(Scalar),
    SigmaAut,
}

impl fmt::Display for MorphismTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismTag::Delta => f.write_str("delta"),
            MorphismTag::DeltaInv => f.write_str("delta-inv"),
            MorphismTag::Varpi => f.write_str("varpi"),
            MorphismTag::SigmaB(b) => write!(f, "sigma-b(b={b})"),
            MorphismTag::SigmaAut => f.write_str("sigma-aut"),
        }
    }
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(BigRational::new(n.into(), d.into()))
}

fn word(k: i64, l: u32, c: CliffordUnit, coeff: Scalar) -> SDElement {
    SDElement::word(Word::new(k, l, c), coeff)
}

/// Image of one generator under `δ` or `δ⁻¹`.
pub fn delta_generator(g: Generator, direction: Direction) -> Vec<(Generator, Scalar)> {
    let sign = match direction {
        Direction::Forward => 1,
        Direction::Inverse => -1,
    };
    let at_zero = g.index2 == 0;
    let mut out = match g.kind {
        Kind::L => {
            let mut v = vec![(g, q(1, 1)), (Generator::h(g.index()), q(sign, 2))];
            if at_zero {
                v.push((Generator::c(), q(1, 24)));
            }
            v
        }
        Kind::H => {
            let mut v = vec![(g, q(1, 1))];
            if at_zero {
                v.push((Generator::c(), q(sign, 6)));
            }
            v
        }
        Kind::GPlus => vec![(Generator::g_plus(g.index2 + sign), q(1, 1))],
        Kind::GMinus => vec![(Generator::g_minus(g.index2 - sign), q(1, 1))],
        Kind::C => vec![(g, q(1, 1))],
    };
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn map_lie<F>(x: &LieVector, target: Sector, f: F) -> Result<LieVector>
where
    F: Fn(Generator) -> Vec<(Generator, Scalar)>,
{
    let mut terms = Vec::new();
    for (g, c) in x.terms() {
        for (h, k) in f(*g) {
            terms.push((h, c * &k));
        }
    }
    LieVector::from_terms(target, terms)
}

pub fn apply_delta(x: &LieVector, direction: Direction) -> Result<LieVector> {
    let (from, to) = match direction {
        Direction::Forward => (Sector::NeveuSchwarz, Sector::Ramond),
        Direction::Inverse => (Sector::Ramond, Sector::NeveuSchwarz),
    };
    if x.sector() != from {
        return Err(Error::SectorMismatch {
            expected: from.to_string(),
            found: x.sector().to_string(),
        });
    }
    map_lie(x, to, |g| delta_generator(g, direction))
}

fn require_centerless_ramond(x: &LieVector) -> Result<()> {
    if x.sector() != Sector::Ramond {
        return Err(Error::SectorMismatch {
            expected: Sector::Ramond.to_string(),
            found: x.sector().to_string(),
        });
    }
    if x.has_central() {
        return Err(Error::CentralInput);
    }
    Ok(())
}

/// `ϖ` on a single non-central generator of `Ĝ[0]`.
pub fn varpi_generator(g: Generator) -> Result<SDElement> {
    sigma_b_generator(ExtendedGenerator::Lie(g), &Scalar::zero())
}

pub fn apply_varpi(x: &LieVector) -> Result<SDElement> {
    require_centerless_ramond(x)?;
    let mut out = SDElement::zero();
    for (g, c) in x.terms() {
        out = &out + &varpi_generator(*g)?.scale(c);
    }
    Ok(out)
}

/// Basis of the extended algebra `𝓖 ⋉ A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedGenerator {
    Lie(Generator),
    /// `t^m`
    T(i64),
    /// `t^m θ`
    TTheta(i64),
}

impl ExtendedGenerator {
    pub fn parity(self) -> Parity {
        match self {
            ExtendedGenerator::Lie(g) => g.parity(),
            ExtendedGenerator::T(_) => Parity::Even,
            ExtendedGenerator::TTheta(_) => Parity::Odd,
        }
    }
}

impl fmt::Display for ExtendedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedGenerator::Lie(g) => write!(f, "{g}"),
            ExtendedGenerator::T(m) => write!(f, "t^{m}"),
            ExtendedGenerator::TTheta(m) => write!(f, "t^{m}*theta"),
        }
    }
}

/// `σ_b` on a basis element of the extended algebra; `b = 0` gives `ϖ`.
pub fn sigma_b_generator(x: ExtendedGenerator, b: &Scalar) -> Result<SDElement> {
    use CliffordUnit::*;
    let g = match x {
        ExtendedGenerator::T(m) => return Ok(SDElement::t(m)),
        ExtendedGenerator::TTheta(m) => return Ok(word(m, 0, Theta, Scalar::one())),
        ExtendedGenerator::Lie(g) => g,
    };
    if g.kind != Kind::C && g.index2 % 2 != 0 {
        return Err(Error::BadIndex {
            kind: g.to_string(),
            index2: g.index2,
            sector: Sector::Ramond.to_string(),
        });
    }
    let m = g.index();
    let ms = Scalar::from_i64(m);
    Ok(match g.kind {
        Kind::L => {
            let a = word(m, 1, One, q(-1, 1));
            let n = word(m, 0, N, q(-m, 2));
            let shift = word(m, 0, One, -&(&ms * b));
            &(&a + &n) + &shift
        }
        Kind::H => &word(m, 0, N, q(1, 1)) + &word(m, 0, One, b * &q(-2, 1)),
        Kind::GPlus => &word(m, 1, Theta, q(-2, 1)) + &word(m, 0, Theta, &(b * &ms) * &q(-4, 1)),
        Kind::GMinus => word(m, 0, DTheta, q(1, 1)),
        Kind::C => return Err(Error::CentralInput),
    })
}

/// `σ_b` extended linearly to `LieVector`s of the centerless Ramond algebra.
pub fn apply_sigma_b(x: &LieVector, b: &Scalar) -> Result<SDElement> {
    require_centerless_ramond(x)?;
    let mut out = SDElement::zero();
    for (g, c) in x.terms() {
        out = &out + &sigma_b_generator(ExtendedGenerator::Lie(*g), b)?.scale(c);
    }
    Ok(out)
}

/// `σ(L_m) = L_m`, `σ(H_m) = −H_m`, `σ(G⁺_m) = −2G⁻_m`, `σ(G⁻_m) = −½G⁺_m`.
pub fn sigma_aut_generator(g: Generator) -> Result<Vec<(Generator, Scalar)>> {
    Ok(match g.kind {
        Kind::L => vec![(g, q(1, 1))],
        Kind::H => vec![(g, q(-1, 1))],
        Kind::GPlus => vec![(Generator::g_minus(g.index2), q(-2, 1))],
        Kind::GMinus => vec![(Generator::g_plus(g.index2), q(-1, 2))],
        Kind::C => return Err(Error::CentralInput),
    })
}

pub fn apply_sigma_aut(x: &LieVector) -> Result<LieVector> {
    require_centerless_ramond(x)?;
    let mut terms = Vec::new();
    for (g, c) in x.terms() {
        for (h, k) in sigma_aut_generator(*g)? {
            terms.push((h, c * &k));
        }
    }
    LieVector::from_terms(Sector::Ramond, terms)
}

pub fn hom_check(tag: &MorphismTag, w: i64) -> VerificationReport {
    match tag {
        MorphismTag::Delta => lie_hom_check_with(tag, Sector::NeveuSchwarz, Sector::Ramond, w, false, |g| {
            delta_generator(g, Direction::Forward)
        }),
        MorphismTag::DeltaInv => {
            lie_hom_check_with(tag, Sector::Ramond, Sector::NeveuSchwarz, w, false, |g| {
                delta_generator(g, Direction::Inverse)
            })
        }
        MorphismTag::SigmaAut => lie_hom_check_with(tag, Sector::Ramond, Sector::Ramond, w, true, |g| {
            sigma_aut_generator(g).expect("non-central generator")
        }),
        MorphismTag::Varpi => sd_hom_check_with(tag, w, false, |x| {
            sigma_b_generator(x, &Scalar::zero()).expect("non-central generator")
        }),
        MorphismTag::SigmaB(b) => sd_hom_check_with(tag, w, true, |x| {
            sigma_b_generator(x, b).expect("non-central generator")
        }),
    }
}

fn run_pairs<T, F>(pairs: &[(T, T)], f: F) -> Vec<(String, Option<String>)>
where
    T: Sync + Copy,
    F: Fn(T, T) -> (String, Option<String>) + Sync,
{
    #[cfg(feature = "parallel")]
    return pairs.par_iter().map(|&(x, y)| f(x, y)).collect();
    #[cfg(not(feature = "parallel"))]
    return pairs.iter().map(|&(x, y)| f(x, y)).collect();
}

/// Checks `f([x, y]) = [f(x), f(y)]` for a generator-level map between Lie
/// algebras; with `centerless` both sides are taken modulo `C`.
pub fn lie_hom_check_with<F>(
    tag: &MorphismTag,
    from: Sector,
    to: Sector,
    w: i64,
    centerless: bool,
    map: F,
) -> VerificationReport
where
    F: Fn(Generator) -> Vec<(Generator, Scalar)> + Sync,
{
    let gens: Vec<Generator> = Generator::window(from, w)
        .into_iter()
        .filter(|g| !(centerless && g.kind == Kind::C))
        .collect();
    let pairs: Vec<_> = gens.iter().flat_map(|&x| gens.iter().map(move |&y| (x, y))).collect();
    let image = |v: &LieVector| map_lie(v, to, &map).expect("map lands in the target lattice");
    let outcomes = run_pairs(&pairs, |x, y| {
        let vx = LieVector::generator(from, x).expect("window generator");
        let vy = LieVector::generator(from, y).expect("window generator");
        let mut br = bracket(&vx, &vy).expect("same sector");
        if centerless {
            br = br.without_central();
        }
        let lhs = image(&br);
        let mut rhs = bracket_with(&image(&vx), &image(&vy), bracket_generators).expect("same sector");
        if centerless {
            rhs = rhs.without_central();
        }
        let diff = lhs.sub(&rhs).expect("same sector");
        (format!("({x}, {y})"), (!diff.is_zero()).then(|| format!("image of bracket minus bracket of images = {diff}")))
    });
    let mut report = VerificationReport::from_outcomes(format!("hom {tag} window={w}"), outcomes);
    if centerless {
        report.note("checked modulo the central element");
    }
    report
}

/// The bracket of the extended algebra `𝓖 ⋉ A` (centerless), as a
/// combination of extended generators.
pub fn extended_bracket(x: ExtendedGenerator, y: ExtendedGenerator) -> Vec<(ExtendedGenerator, Scalar)> {
    use ExtendedGenerator::*;
    let to_laurent = |a: ExtendedGenerator| match a {
        T(m) => SuperLaurent::monomial(m, false, Scalar::one()),
        TTheta(m) => SuperLaurent::monomial(m, true, Scalar::one()),
        Lie(_) => unreachable!("not an element of A"),
    };
    let from_laurent = |f: SuperLaurent| -> Vec<(ExtendedGenerator, Scalar)> {
        f.terms()
            .map(|(&(n, th), c)| (if th { TTheta(n) } else { T(n) }, c.clone()))
            .collect()
    };
    match (x, y) {
        (Lie(a), Lie(b)) => bracket_generators(a, b)
            .into_iter()
            .filter(|(g, _)| g.kind != Kind::C)
            .map(|(g, c)| (Lie(g), c))
            .collect(),
        (Lie(a), f) => from_laurent(sd_apply(&varpi_generator(a).expect("non-central"), &to_laurent(f))),
        (f, Lie(a)) => {
            let sign = Scalar::from_i64(-x.parity().koszul(y.parity()));
            extended_bracket(Lie(a), f)
                .into_iter()
                .map(|(e, c)| (e, &c * &sign))
                .collect()
        }
        _ => Vec::new(),
    }
}

/// Checks `f([x, y]) = [f(x), f(y)]` for a map into `SD`; with `extended`
/// the domain is `𝓖 ⋉ A` rather than `𝓖`.
pub fn sd_hom_check_with<F>(tag: &MorphismTag, w: i64, extended: bool, map: F) -> VerificationReport
where
    F: Fn(ExtendedGenerator) -> SDElement + Sync,
{
    let mut gens: Vec<ExtendedGenerator> = Generator::window(Sector::Ramond, w)
        .into_iter()
        .filter(|g| g.kind != Kind::C)
        .map(ExtendedGenerator::Lie)
        .collect();
    if extended {
        for m in -w..=w {
            gens.push(ExtendedGenerator::T(m));
            gens.push(ExtendedGenerator::TTheta(m));
        }
    }
    let pairs: Vec<_> = gens.iter().flat_map(|&x| gens.iter().map(move |&y| (x, y))).collect();
    let outcomes = run_pairs(&pairs, |x, y| {
        let mut lhs = SDElement::zero();
        for (e, c) in extended_bracket(x, y) {
            lhs = &lhs + &map(e).scale(&c);
        }
        let rhs = sd_supercommutator(&map(x), &map(y)).expect("images are homogeneous");
        let diff = &lhs - &rhs;
        (format!("({x}, {y})"), (!diff.is_zero()).then(|| format!("image of bracket minus bracket of images = {diff}")))
    });
    let mut report = VerificationReport::from_outcomes(format!("hom {tag} window={w}"), outcomes);
    report.note("domain taken modulo the central element");
    if extended {
        report.note("mixed brackets [x, f] computed as the action of the realization of x on f");
    }
    report
}
