use super::Window;
use crate::dmodule::{BasisToken, DModuleSpec, ModuleVector, TokenKind};
use crate::functor::{g_act_generator, GModuleHandle};
use crate::lie::{Generator, Kind};
use crate::report::VerificationReport;
use crate::{Result, Scalar};

/// Token correspondences between handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Identity,
    /// `v ↦ v̄`, `\overline{Dv} ↦ v`
    Phi,
    /// `t^m ↦ \overline{t^m}`, `\overline{Dt^n} ↦ t^n`
    Psi,
}

impl std::str::FromStr for Witness {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Witness::Identity),
            "phi" => Ok(Witness::Phi),
            "psi" => Ok(Witness::Psi),
            other => Err(crate::Error::InvalidSpec(format!("unknown witness {other:?}"))),
        }
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Witness::Identity => "identity",
            Witness::Phi => "phi",
            Witness::Psi => "psi",
        })
    }
}

/// `ū ↦ D^{-1}u`, when `u` lies in `D(M)` in a way readable off the basis.
fn undo_d(spec: &DModuleSpec, t: BasisToken) -> Option<ModuleVector> {
    match (spec, t.kind) {
        (DModuleSpec::Laurent { alpha }, TokenKind::Laurent(n)) => {
            let w = alpha + &Scalar::from_i64(n);
            let c = w.recip().ok()?;
            Some(ModuleVector::term(BasisToken::plain(t.kind), c))
        }
        (DModuleSpec::Omega { .. }, TokenKind::Omega(n)) if n >= 1 => {
            Some(ModuleVector::token(BasisToken::plain(TokenKind::Omega(n - 1))))
        }
        _ => None,
    }
}

impl Witness {
    /// Image of a basis token, `None` where the rule is undefined.
    pub fn map_token(self, spec: &DModuleSpec, t: BasisToken) -> Option<ModuleVector> {
        match self {
            Witness::Identity => Some(ModuleVector::token(t)),
            Witness::Phi | Witness::Psi => {
                if t.bar {
                    undo_d(spec, t)
                } else {
                    Some(ModuleVector::token(t.with_bar(true)))
                }
            }
        }
    }

    pub fn map(self, spec: &DModuleSpec, v: &ModuleVector) -> std::result::Result<ModuleVector, BasisToken> {
        let mut out = ModuleVector::zero();
        for (t, c) in v.terms() {
            let image = self.map_token(spec, *t).ok_or(*t)?;
            out.add_scaled(&image, c);
        }
        Ok(out)
    }
}

/// Checks `map(g·v) = g·map(v)` for window generators and every window token
/// of the source on which the rule is defined.
pub fn iso_witness_check(
    source: &GModuleHandle,
    target: &GModuleHandle,
    witness: Witness,
    window: &Window,
) -> Result<VerificationReport> {
    let gens: Vec<Generator> = Generator::window(source.sector, window.gen_bound)
        .into_iter()
        .filter(|g| g.kind != Kind::C)
        .collect();
    let domain: Vec<BasisToken> = source
        .window_tokens(window.token_bound)
        .into_iter()
        .filter(|t| witness.map_token(&source.spec, *t).is_some())
        .collect();
    let mut outcomes = Vec::new();
    for t in &domain {
        let v = ModuleVector::token(*t);
        let mapped = witness.map(&source.spec, &v).expect("domain token");
        for g in &gens {
            let item = format!("{g} on {}", t.render(&source.spec));
            let image = g_act_generator(source, *g, &v)?;
            let failure = match witness.map(&source.spec, &image) {
                Err(u) => Some(format!("map undefined on reached token {}", u.render(&source.spec))),
                Ok(lhs) => {
                    let rhs = g_act_generator(target, *g, &mapped)?;
                    let diff = target.reduce(lhs.sub(&rhs));
                    (!diff.is_zero()).then(|| format!("map(g.v) - g.map(v) = {}", diff.render(&target.spec)))
                }
            };
            outcomes.push((item, failure));
        }
    }
    let mut report = VerificationReport::from_outcomes(
        format!(
            "{witness} from {} to {} window {:?}",
            source.describe(),
            target.describe(),
            window.as_array()
        ),
        outcomes,
    );
    report.note(format!("domain has {} window tokens", domain.len()));
    Ok(report)
}
