//! Module constructions: doubling `M ↦ M ⊕ M̄`, the twisted action of the
//! N=2 algebra on the double, parity change, the `σ`-twist, the quotient by
//! the trivial submodule, and restriction to the N=1 subalgebra.

use num_rational::BigRational;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dmodule::{act_d, act_t, BasisToken, DModuleSpec, ModuleVector, TokenKind};
use crate::lie::{bracket, n1_embed, Generator, Kind, LieVector, N1Kind, Sector};
use crate::morphism::{apply_delta, apply_sigma_aut, apply_sigma_b, Direction};
use crate::report::VerificationReport;
use crate::weyl::{scalar_as_integer, CliffordUnit, Parity, SDElement, Word};
use crate::{Error, Result, Scalar};

/// Action of one basis word `t^k D^l c` on the double of `M`.
pub fn superize_act(spec: &DModuleSpec, w: Word, v: &ModuleVector) -> Result<ModuleVector> {
    let mut cliff = ModuleVector::zero();
    for (tok, c) in v.terms() {
        let image = match (w.c, tok.bar) {
            (CliffordUnit::One, _) => Some(*tok),
            (CliffordUnit::N, true) => Some(*tok),
            (CliffordUnit::Theta, false) => Some(tok.with_bar(true)),
            (CliffordUnit::DTheta, true) => Some(tok.with_bar(false)),
            _ => None,
        };
        if let Some(t) = image {
            cliff.add_term(t, c.clone());
        }
    }
    let mut out = cliff;
    for _ in 0..w.l {
        out = act_d(spec, &out)?;
    }
    act_t(spec, w.k, &out)
}

/// Action of an arbitrary element of `SD` on the double of `M`.
pub fn sd_act(spec: &DModuleSpec, x: &SDElement, v: &ModuleVector) -> Result<ModuleVector> {
    let mut out = ModuleVector::zero();
    for (w, c) in x.terms() {
        out.add_scaled(&superize_act(spec, *w, v)?, c);
    }
    Ok(out)
}

/// A module over `Ĝ[ε]/CC` built from a D-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModuleHandle {
    pub spec: DModuleSpec,
    pub b: Scalar,
    /// Sector of the acting algebra; `½` acts through `δ: Ĝ[½] → Ĝ[0]`.
    pub sector: Sector,
    pub parity_flip: bool,
    pub sigma_twist: bool,
    pub quotient: bool,
}

impl GModuleHandle {
    /// `F_b(M)` over the Ramond algebra.
    pub fn new(spec: DModuleSpec, b: Scalar) -> Self {
        GModuleHandle {
            spec,
            b,
            sector: Sector::Ramond,
            parity_flip: false,
            sigma_twist: false,
            quotient: false,
        }
    }

    pub fn in_sector(mut self, sector: Sector) -> Self {
        self.sector = sector;
        self
    }

    /// `Π V`
    pub fn flipped(mut self) -> Self {
        self.parity_flip = !self.parity_flip;
        self
    }

    /// `V^σ`
    pub fn sigma_twisted(mut self) -> Self {
        self.sigma_twist = !self.sigma_twist;
        self
    }

    /// `F_0(C[t^{±1}]) / C`; requires `b = 0` and an integer `α`.
    pub fn quotient_by_trivial(mut self) -> Result<Self> {
        if !self.b.is_zero() {
            return Err(Error::RequiresBZero("the trivial submodule exists only for b = 0".into()));
        }
        match &self.spec {
            DModuleSpec::Laurent { alpha } if scalar_as_integer(alpha).is_some() => {}
            _ => {
                return Err(Error::InvalidConstruction(
                    "quotient by C needs a Laurent module with integer alpha".into(),
                ))
            }
        }
        self.quotient = true;
        Ok(self)
    }

    /// The unbarred vector spanning the trivial submodule, `t^{-α}`.
    pub fn trivial_token(&self) -> Option<BasisToken> {
        match &self.spec {
            DModuleSpec::Laurent { alpha } => {
                scalar_as_integer(alpha).map(|a| BasisToken::plain(TokenKind::Laurent(-a)))
            }
            _ => None,
        }
    }

    pub fn token_parity(&self, t: &BasisToken) -> Parity {
        Parity::from_odd(t.bar != self.parity_flip)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("F_b({}) b={} sector={}", self.spec, self.b, self.sector);
        if self.sigma_twist {
            s.push_str(" sigma-twisted");
        }
        if self.parity_flip {
            s.push_str(" parity-flipped");
        }
        if self.quotient {
            s.push_str(" quotient-by-C");
        }
        s
    }

    /// Unbarred and barred window tokens, without the quotient token.
    pub fn window_tokens(&self, bound: usize) -> Vec<BasisToken> {
        let trivial = if self.quotient { self.trivial_token() } else { None };
        let mut out = Vec::new();
        for t in self.spec.window_tokens(bound) {
            for bar in [false, true] {
                let t = t.with_bar(bar);
                if Some(t) != trivial {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Drops the trivial token in the quotient.
    pub fn reduce(&self, v: ModuleVector) -> ModuleVector {
        match (self.quotient, self.trivial_token()) {
            (true, Some(t)) => {
                let mut v = v;
                v.remove(&t);
                v
            }
            _ => v,
        }
    }

    pub fn specialize(&self, assignment: &crate::scalar::Assignment) -> Result<Self> {
        Ok(GModuleHandle {
            spec: self.spec.specialize(assignment)?,
            b: self.b.specialize(assignment)?,
            ..self.clone()
        })
    }

    /// The element of `SD` through which `g` acts.
    pub fn realize(&self, g: &LieVector) -> Result<SDElement> {
        if g.sector() != self.sector {
            return Err(Error::SectorMismatch {
                expected: self.sector.to_string(),
                found: g.sector().to_string(),
            });
        }
        let mut g0 = match self.sector {
            Sector::Ramond => g.clone(),
            Sector::NeveuSchwarz => apply_delta(g, Direction::Forward)?,
        };
        // C acts as zero
        g0 = g0.without_central();
        if self.sigma_twist {
            g0 = apply_sigma_aut(&g0)?;
        }
        apply_sigma_b(&g0, &self.b)
    }
}

pub fn g_act(handle: &GModuleHandle, g: &LieVector, v: &ModuleVector) -> Result<ModuleVector> {
    let x = handle.realize(g)?;
    let v = handle.reduce(v.clone());
    Ok(handle.reduce(sd_act(&handle.spec, &x, &v)?))
}

pub fn g_act_generator(handle: &GModuleHandle, g: Generator, v: &ModuleVector) -> Result<ModuleVector> {
    g_act(handle, &LieVector::generator(handle.sector, g)?, v)
}

/// The N=1 restriction `H_{ε,b}` of a handle of sector `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SModuleHandle {
    pub inner: GModuleHandle,
}

impl SModuleHandle {
    pub fn new(inner: GModuleHandle) -> Self {
        SModuleHandle { inner }
    }

    pub fn epsilon(&self) -> Sector {
        self.inner.sector
    }
}

/// Result of acting through both the embedding and the closed formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SActOutcome {
    /// Via `n1_embed` and the N=2 action.
    pub value: ModuleVector,
    /// Via the closed formula, when it applies to the handle.
    pub closed_form: Option<ModuleVector>,
    /// `value − closed_form` when nonzero.
    pub mismatch: Option<ModuleVector>,
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(BigRational::new(n.into(), d.into()))
}

fn word(k: i64, l: u32, c: CliffordUnit, coeff: Scalar) -> SDElement {
    SDElement::word(Word::new(k, l, c), coeff)
}

/// `L_m ↦ −t^m(D + (m−2ε)b + ((m+2ε)/2)θ∂θ)`,
/// `G_p ↦ t^{p−ε}(θD + 2(p−ε)bθ − t^{2ε}∂θ)`.
pub fn restriction_closed_form(kind: N1Kind, index2: i64, eps: Sector, b: &Scalar) -> Result<SDElement> {
    let e2 = eps.twice_epsilon();
    match kind {
        N1Kind::C => Ok(SDElement::zero()),
        N1Kind::L => {
            Generator::new(Kind::L, index2, eps)?;
            let m = index2 / 2;
            let shift = b * &Scalar::from_i64(m - e2);
            let d = word(m, 1, CliffordUnit::One, q(-1, 1));
            let s = word(m, 0, CliffordUnit::One, -&shift);
            let n = word(m, 0, CliffordUnit::N, q(-(m + e2), 2));
            Ok(&(&d + &s) + &n)
        }
        N1Kind::G => {
            Generator::new(Kind::GPlus, index2, eps)?;
            // p − ε is an integer in both sectors
            let k = (index2 - e2) / 2;
            let td = word(k, 1, CliffordUnit::Theta, q(1, 1));
            let th = word(k, 0, CliffordUnit::Theta, b * &Scalar::from_i64(2 * k));
            let dt = word(k + e2, 0, CliffordUnit::DTheta, q(-1, 1));
            Ok(&(&td + &th) + &dt)
        }
    }
}

pub fn s_act(handle: &SModuleHandle, kind: N1Kind, index2: i64, v: &ModuleVector) -> Result<SActOutcome> {
    let g = &handle.inner;
    let embedded = n1_embed(kind, index2, g.sector)?;
    let value = g_act(g, &embedded, v)?;
    let plain = !g.sigma_twist && !g.parity_flip && !g.quotient;
    let closed_form = if plain {
        let x = restriction_closed_form(kind, index2, g.sector, &g.b)?;
        Some(sd_act(&g.spec, &x, v)?)
    } else {
        None
    };
    let mismatch = closed_form
        .as_ref()
        .map(|c| value.sub(c))
        .filter(|d| !d.is_zero());
    Ok(SActOutcome {
        value,
        closed_form,
        mismatch,
    })
}

/// The printed half-sector table: `L_m ↦ −(t^mD + (m−1)bt^m + ((m+1)/2)t^mθ∂θ)`,
/// `H_m ↦ t^m(−2b + θ∂θ)`, `G⁺_p ↦ −2t^{p−½}(θD + 2b(p−½)θ)`, `G⁻_p ↦ t^{p+½}∂θ`.
pub fn printed_half_sector_form(g: Generator, b: &Scalar) -> Result<SDElement> {
    Generator::new(g.kind, g.index2, Sector::NeveuSchwarz)?;
    Ok(match g.kind {
        Kind::L => {
            let m = g.index();
            let d = word(m, 1, CliffordUnit::One, q(-1, 1));
            let s = word(m, 0, CliffordUnit::One, -&(b * &Scalar::from_i64(m - 1)));
            let n = word(m, 0, CliffordUnit::N, q(-(m + 1), 2));
            &(&d + &s) + &n
        }
        Kind::H => {
            let m = g.index();
            &word(m, 0, CliffordUnit::N, q(1, 1)) + &word(m, 0, CliffordUnit::One, b * &q(-2, 1))
        }
        Kind::GPlus => {
            let k = (g.index2 - 1) / 2;
            &word(k, 1, CliffordUnit::Theta, q(-2, 1)) + &word(k, 0, CliffordUnit::Theta, b * &Scalar::from_i64(-4 * k))
        }
        Kind::GMinus => word((g.index2 + 1) / 2, 0, CliffordUnit::DTheta, q(1, 1)),
        Kind::C => SDElement::zero(),
    })
}

/// All `(generator, token, image)` triples over a window.
pub fn action_table(
    handle: &GModuleHandle,
    gen_bound: i64,
    token_bound: usize,
) -> Result<Vec<(Generator, BasisToken, ModuleVector)>> {
    let gens: Vec<Generator> = Generator::window(handle.sector, gen_bound)
        .into_iter()
        .filter(|g| g.kind != Kind::C)
        .collect();
    let tokens = handle.window_tokens(token_bound);
    let mut out = Vec::new();
    for g in gens {
        for t in &tokens {
            out.push((g, *t, g_act_generator(handle, g, &ModuleVector::token(*t))?));
        }
    }
    Ok(out)
}

/// The module axiom `[x, y]·v = x·(y·v) − (−1)^{|x||y|} y·(x·v)`.
pub fn module_axiom_check(handle: &GModuleHandle, gen_bound: i64, token_bound: usize) -> VerificationReport {
    module_axiom_check_with(handle, gen_bound, token_bound, |g, v| g_act(handle, g, v))
}

/// Module-axiom check for an arbitrary action of the handle's algebra.
pub fn module_axiom_check_with<F>(
    handle: &GModuleHandle,
    gen_bound: i64,
    token_bound: usize,
    act: F,
) -> VerificationReport
where
    F: Fn(&LieVector, &ModuleVector) -> Result<ModuleVector> + Sync,
{
    let sector = handle.sector;
    let gens: Vec<Generator> = Generator::window(sector, gen_bound)
        .into_iter()
        .filter(|g| g.kind != Kind::C)
        .collect();
    let tokens = handle.window_tokens(token_bound);
    let mut pairs = Vec::new();
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i..] {
            pairs.push((x, y));
        }
    }
    let check_pair = |x: Generator, y: Generator| -> Vec<(String, Option<String>)> {
        let vx = LieVector::generator(sector, x).expect("window generator");
        let vy = LieVector::generator(sector, y).expect("window generator");
        let br = bracket(&vx, &vy).expect("same sector");
        let sign = Scalar::from_i64(x.parity().koszul(y.parity()));
        tokens
            .iter()
            .map(|t| {
                let v = ModuleVector::token(*t);
                let item = format!("({x}, {y}) on {}", t.render(&handle.spec));
                let outcome = (|| -> Result<Option<String>> {
                    let lhs = act(&br, &v)?;
                    let xy = act(&vx, &act(&vy, &v)?)?;
                    let yx = act(&vy, &act(&vx, &v)?)?;
                    let mut rhs = xy;
                    rhs.add_scaled(&yx, &-&sign);
                    let diff = lhs.sub(&rhs);
                    Ok((!diff.is_zero()).then(|| format!("difference {}", diff.render(&handle.spec))))
                })();
                (item, outcome.unwrap_or_else(|e| Some(format!("error: {e}"))))
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = pairs.par_iter().flat_map_iter(|&(x, y)| check_pair(x, y)).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = pairs.iter().flat_map(|&(x, y)| check_pair(x, y)).collect();
    let mut report = VerificationReport::from_outcomes(
        format!("module axioms {} gens<={gen_bound} tokens<={token_bound}", handle.describe()),
        outcomes,
    );
    report.note("central element acts as zero");
    report
}
