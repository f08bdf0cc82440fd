use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{Echelon, Window};
use crate::dmodule::{BasisToken, DModuleSpec, ModuleVector};
use crate::functor::{g_act_generator, GModuleHandle};
use crate::lie::{Generator, Kind};
use crate::report::{CrossCheck, ReachReport, VerificationReport, SCHEMA};
use crate::scalar::{render_assignment, Assignment};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeSpecialization {
    /// Exact elimination over the parameter field, cross-checked at a random point.
    Symbolic { rng_seed: u64 },
    Fixed(Assignment),
}

/// `b = 1/3`, `λ = 2`, `α = 1/3` for every free parameter in those slots.
pub fn default_specialization(handle: &GModuleHandle) -> Assignment {
    let mut out = Assignment::new();
    let mut bind = |x: &Scalar, value: BigRational| {
        for v in x.variables() {
            out.entry(v).or_insert_with(|| value.clone());
        }
    };
    let third = BigRational::new(1.into(), 3.into());
    bind(&handle.b, third.clone());
    match &handle.spec {
        DModuleSpec::Laurent { alpha } => bind(alpha, third),
        DModuleSpec::Omega { lambda } => bind(lambda, BigRational::from_integer(2.into())),
        DModuleSpec::Fraction { alphas, .. } => {
            for a in alphas {
                bind(a, third.clone());
            }
        }
        DModuleSpec::DegreeN { .. } => {}
    }
    out
}

fn parameters(handle: &GModuleHandle) -> BTreeSet<String> {
    let mut vars = handle.spec.parameters();
    vars.extend(handle.b.variables());
    vars
}

/// A nonsingular random rational point for every free parameter.
pub fn random_specialization(handle: &GModuleHandle, seed: &ModuleVector, rng_seed: u64) -> Result<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut vars = parameters(handle);
    for (_, c) in seed.terms() {
        vars.extend(c.variables());
    }
    for _ in 0..32 {
        let a: Assignment = vars
            .iter()
            .map(|v| {
                let n: i64 = rng.gen_range(1..=40) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let d: i64 = rng.gen_range(1..=9);
                (v.clone(), BigRational::new(n.into(), d.into()))
            })
            .collect();
        if handle.specialize(&a).is_ok() && seed.specialize(&a).is_ok() {
            return Ok(a);
        }
    }
    Err(Error::SingularSpecialization(
        "no nonsingular random point found".into(),
    ))
}

fn action_gens(handle: &GModuleHandle, bound: i64) -> Vec<Generator> {
    Generator::window(handle.sector, bound)
        .into_iter()
        .filter(|g| g.kind != Kind::C)
        .collect()
}

struct Closure {
    basis: Echelon,
    projected: usize,
}

fn project(v: ModuleVector, allowed: &BTreeSet<BasisToken>) -> (ModuleVector, bool) {
    let kept = v.filter(|t| allowed.contains(t));
    let dropped = kept.len() != v.len();
    (kept, dropped)
}

fn close(handle: &GModuleHandle, seed: &ModuleVector, window: &Window, allowed: &BTreeSet<BasisToken>) -> Result<Closure> {
    let gens = action_gens(handle, window.gen_bound);
    let mut basis = Echelon::new();
    let mut projected = 0;
    let (start, dropped) = project(handle.reduce(seed.clone()), allowed);
    projected += dropped as usize;
    let mut frontier = Vec::new();
    if basis.insert(&start) {
        frontier.push(start);
    }
    for _ in 0..window.word_length {
        let jobs: Vec<(usize, Generator)> = (0..frontier.len())
            .flat_map(|i| gens.iter().map(move |g| (i, *g)))
            .collect();
        let run = |&(i, g): &(usize, Generator)| g_act_generator(handle, g, &frontier[i]);
        #[cfg(feature = "parallel")]
        let images: Vec<Result<ModuleVector>> = jobs.par_iter().map(run).collect();
        #[cfg(not(feature = "parallel"))]
        let images: Vec<Result<ModuleVector>> = jobs.iter().map(run).collect();
        let mut next = Vec::new();
        for image in images {
            let (w, dropped) = project(image?, allowed);
            projected += dropped as usize;
            if basis.insert(&w) {
                next.push(w);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Closure { basis, projected })
}

fn render_seed(handle: &GModuleHandle, seed: &ModuleVector) -> String {
    match seed.terms().next() {
        Some((t, c)) if seed.len() == 1 && c.is_one() => t.render(&handle.spec),
        _ => seed.render(&handle.spec),
    }
}

/// Rank of the truncated closure of `seed` under the window's generators.
pub fn span_probe(
    handle: &GModuleHandle,
    seed: &ModuleVector,
    window: &Window,
    specialization: &ProbeSpecialization,
) -> Result<ReachReport> {
    if seed.is_zero() {
        return Err(Error::InvalidConstruction("the probe seed is zero".into()));
    }
    let (h, s, label) = match specialization {
        ProbeSpecialization::Fixed(a) => (handle.specialize(a)?, seed.specialize(a)?, render_assignment(a)),
        ProbeSpecialization::Symbolic { .. } => (handle.clone(), seed.clone(), "symbolic".to_string()),
    };
    let tokens = h.window_tokens(window.token_bound);
    let allowed: BTreeSet<BasisToken> = tokens.iter().copied().collect();
    let closure = close(&h, &s, window, &allowed)?;
    let missing: Vec<String> = tokens
        .iter()
        .filter(|t| !closure.basis.contains(&ModuleVector::token(**t)))
        .map(|t| t.render(&h.spec))
        .collect();
    let cross_check = match specialization {
        ProbeSpecialization::Symbolic { rng_seed } if !parameters(handle).is_empty() => {
            let a = random_specialization(handle, seed, *rng_seed)?;
            let hs = handle.specialize(&a)?;
            let rank = close(&hs, &seed.specialize(&a)?, window, &allowed)?.basis.rank();
            Some(CrossCheck {
                specialization: render_assignment(&a),
                rank,
            })
        }
        _ => None,
    };
    let rank = closure.basis.rank();
    Ok(ReachReport {
        schema: SCHEMA,
        kind: "evidence",
        seed: render_seed(handle, seed),
        window: window.as_array(),
        rank,
        ambient: tokens.len(),
        full: rank == tokens.len(),
        missing,
        specialization: label,
        projected: closure.projected,
        cross_check,
    })
}

/// Checks that generator images of the span stay in the span, modulo the window.
pub fn submodule_check(handle: &GModuleHandle, generators: &[ModuleVector], window: &Window) -> Result<VerificationReport> {
    if generators.iter().any(ModuleVector::is_zero) {
        return Err(Error::InvalidConstruction("subspace generators must be nonzero".into()));
    }
    let allowed: BTreeSet<BasisToken> = handle.window_tokens(window.token_bound).into_iter().collect();
    let mut basis = Echelon::new();
    let subspace: Vec<ModuleVector> = generators
        .iter()
        .map(|v| project(handle.reduce(v.clone()), &allowed).0)
        .collect();
    for v in &subspace {
        basis.insert(v);
    }
    let gens = action_gens(handle, window.gen_bound);
    let mut outcomes = Vec::new();
    for (i, v) in subspace.iter().enumerate() {
        for g in &gens {
            let image = project(g_act_generator(handle, *g, v)?, &allowed).0;
            let rest = basis.reduce(&image);
            let item = format!("{g} on generator {i}");
            let failure = (!rest.is_zero()).then(|| format!("leaves the span by {}", rest.render(&handle.spec)));
            outcomes.push((item, failure));
        }
    }
    let mut report = VerificationReport::from_outcomes(
        format!("submodule closure {} window {:?}", handle.describe(), window.as_array()),
        outcomes,
    );
    report.note("images are projected onto the token window before the membership test");
    Ok(report)
}
