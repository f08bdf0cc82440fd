//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use supermod::analysis::{
    iso_witness_check, module_axiom_check, span_probe, submodule_check, t_operator_check, ProbeSpecialization, Window,
    Witness,
};
use supermod::dmodule::{BasisToken, DModuleSpec, ModuleVector, TokenKind};
use supermod::functor::{g_act_generator, s_act, GModuleHandle, SModuleHandle};
use supermod::lie::{jacobi_check, Generator, Kind, N1Kind, Sector};
use supermod::morphism::{delta_generator, hom_check, Direction, MorphismTag};
use supermod::{Error, Scalar};

type Outcome = Result<String, String>;

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn int(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

fn fixed() -> ProbeSpecialization {
    ProbeSpecialization::Fixed(Default::default())
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn first_violation(r: &supermod::report::VerificationReport) -> String {
    match r.violations.first() {
        Some(v) => format!("{}: {} at {}: {}", r.check, r.violations.len(), v.item, v.detail),
        None => r.check.clone(),
    }
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for sector in Sector::both() {
        let r = jacobi_check(sector, 4);
        require(r.passed, || first_violation(&r))?;
        checked += r.checked;
    }
    Ok(format!("{checked} triples"))
}

fn criterion_2() -> Outcome {
    let tags = [
        MorphismTag::Delta,
        MorphismTag::Varpi,
        MorphismTag::SigmaB(s("b")),
        MorphismTag::SigmaAut,
    ];
    let mut checked = 0;
    for tag in &tags {
        let r = hom_check(tag, 4);
        require(r.passed, || first_violation(&r))?;
        checked += r.checked;
    }
    for sector in Sector::both() {
        for g in Generator::window(sector, 6) {
            let (first, back) = match sector {
                Sector::NeveuSchwarz => (Direction::Forward, Direction::Inverse),
                Sector::Ramond => (Direction::Inverse, Direction::Forward),
            };
            let mut total: Vec<(Generator, Scalar)> = Vec::new();
            for (h, c) in delta_generator(g, first) {
                for (k, e) in delta_generator(h, back) {
                    match total.iter_mut().find(|(x, _)| *x == k) {
                        Some((_, acc)) => *acc = &*acc + &(&c * &e),
                        None => total.push((k, &c * &e)),
                    }
                }
            }
            total.retain(|(_, c)| !c.is_zero());
            require(total == vec![(g, Scalar::one())], || format!("round trip of {g} gives {total:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} identities"))
}

fn catalog_symbolic() -> Vec<DModuleSpec> {
    vec![
        DModuleSpec::laurent(s("a")),
        DModuleSpec::omega(s("l")).unwrap(),
        DModuleSpec::fraction(vec![s("a0"), s("a1")], vec![BigRational::from_integer(0.into()), BigRational::from_integer(1.into())]).unwrap(),
        DModuleSpec::degree_n(2).unwrap(),
    ]
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for spec in catalog_symbolic() {
        let h = GModuleHandle::new(spec, s("b"));
        let r = module_axiom_check(&h, 3, 5);
        require(r.passed, || first_violation(&r))?;
        checked += r.checked;
    }
    Ok(format!("{checked} identities"))
}

// Independent transcriptions of the displayed action tables.

fn laurent_line(kind: Kind, m: i64, n: i64, bar: bool) -> ModuleVector {
    let a = s("a");
    let b = s("b");
    let t = |k: i64, bar: bool| BasisToken::plain(TokenKind::Laurent(k)).with_bar(bar);
    let an = &a + &int(n);
    match (kind, bar) {
        (Kind::L, false) => ModuleVector::term(t(m + n, false), -&(&an + &(&int(m) * &b))),
        (Kind::L, true) => ModuleVector::term(t(m + n, true), -&(&an + &(&int(m) * &(&b + &s("1/2"))))),
        (Kind::H, false) => ModuleVector::term(t(m + n, false), &int(-2) * &b),
        (Kind::H, true) => ModuleVector::term(t(m + n, true), &int(1) - &(&int(2) * &b)),
        (Kind::GPlus, false) => ModuleVector::term(t(m + n, true), &int(-2) * &(&an + &(&int(2 * m) * &b))),
        (Kind::GMinus, true) => ModuleVector::token(t(m + n, false)),
        _ => ModuleVector::zero(),
    }
}

/// `Σ c_n D^n ↦ Σ c_n x^n`
fn omega_as_polynomial(v: &ModuleVector, bar: bool) -> Result<Scalar, String> {
    let x = Scalar::param("x");
    let mut out = Scalar::zero();
    for (t, c) in v.terms() {
        let TokenKind::Omega(n) = t.kind else { return Err("foreign token".into()) };
        if t.bar != bar {
            return Err(format!("wrong copy in {t:?}"));
        }
        out = &out + &(c * &x.pow(n as i64).unwrap());
    }
    Ok(out)
}

fn omega_line(kind: Kind, m: i64, n: u32, bar: bool) -> Option<(Scalar, bool)> {
    let l = s("l").pow(m).unwrap();
    let b = s("b");
    let x = Scalar::param("x");
    let shifted = (&x - &int(m)).pow(n as i64).unwrap();
    let mb = |c: Scalar| &x + &(&int(m) * &c);
    let v = match (kind, bar) {
        (Kind::L, false) => (-&(&l * &(&mb(&b - &int(1)) * &shifted)), false),
        (Kind::L, true) => (-&(&l * &(&mb(&b - &s("1/2")) * &shifted)), true),
        (Kind::H, false) => (&(&int(-2) * &b) * &(&l * &shifted), false),
        (Kind::H, true) => (&(&int(1) - &(&int(2) * &b)) * &(&l * &shifted), true),
        (Kind::GPlus, false) => (&int(-2) * &(&l * &(&mb(&(&int(2) * &b) - &int(1)) * &shifted)), true),
        (Kind::GMinus, true) => (&l * &shifted, false),
        _ => return None,
    };
    Some(v)
}

fn fraction_as_function(spec: &DModuleSpec, v: &ModuleVector, bar: bool) -> Result<Scalar, String> {
    let DModuleSpec::Fraction { betas, .. } = spec else { unreachable!() };
    let t = Scalar::param("t");
    let mut out = Scalar::zero();
    for (tok, c) in v.terms() {
        if tok.bar != bar {
            return Err(format!("wrong copy in {tok:?}"));
        }
        let f = match tok.kind {
            TokenKind::Pow(i) => t.pow(i as i64).unwrap(),
            TokenKind::Pole { j, k } => (&t - &Scalar::from_rational(betas[j].clone())).pow(-(k as i64)).unwrap(),
            _ => return Err("foreign token".into()),
        };
        out = &out + &(c * &f);
    }
    Ok(out)
}

fn fraction_line(spec: &DModuleSpec, kind: Kind, m: i64, f: &Scalar, bar: bool) -> Option<(Scalar, bool)> {
    let DModuleSpec::Fraction { alphas, betas } = spec else { unreachable!() };
    let t = Scalar::param("t");
    let b = s("b");
    let tm = t.pow(m).unwrap();
    let tm1 = t.pow(m + 1).unwrap();
    let mut log = Scalar::zero();
    for (a, beta) in alphas.iter().zip(betas) {
        log = &log + &a.checked_div(&(&t - &Scalar::from_rational(beta.clone()))).unwrap();
    }
    let flow = &(&tm1 * &f.derivative("t")) + &(&tm1 * &(f * &log));
    let v = match (kind, bar) {
        (Kind::L, false) => (-&(&flow + &(&(&int(m) * &b) * &(&tm * f))), false),
        (Kind::L, true) => (-&(&flow + &(&(&int(m) * &(&b + &s("1/2"))) * &(&tm * f))), true),
        (Kind::H, false) => (&(&int(-2) * &b) * &(&tm * f), false),
        (Kind::H, true) => (&(&int(1) - &(&int(2) * &b)) * &(&tm * f), true),
        (Kind::GPlus, false) => (&int(-2) * &(&flow + &(&(&int(2 * m) * &b) * &(&tm * f))), true),
        (Kind::GMinus, true) => (&tm * f, false),
        _ => return None,
    };
    Some(v)
}

fn degree_line(kind: Kind, k: i64, i: i64, m: u32, bar: bool) -> ModuleVector {
    // n = 2; the top derivative order is 1
    let b = s("b");
    let tok = |i: i64, m: u32, bar: bool| BasisToken::plain(TokenKind::DegreeN { i, m }).with_bar(bar);
    let raise = |bar: bool| if m < 1 { tok(k + i + 1, m + 1, bar) } else { tok(k + i + 2, 0, bar) };
    let ib = |c: Scalar| &int(i) + &(&c * &int(k));
    let mut v = ModuleVector::zero();
    match (kind, bar) {
        (Kind::L, false) => {
            v.add_term(tok(k + i, m, false), -&ib(b.clone()));
            v.add_term(raise(false), int(-1));
        }
        (Kind::L, true) => {
            v.add_term(tok(k + i, m, true), -&ib(&b + &s("1/2")));
            v.add_term(raise(true), int(-1));
        }
        (Kind::H, false) => v.add_term(tok(k + i, m, false), &int(-2) * &b),
        (Kind::H, true) => v.add_term(tok(k + i, m, true), &int(1) - &(&int(2) * &b)),
        (Kind::GPlus, false) => {
            v.add_term(tok(k + i, m, true), &int(-2) * &ib(&b * &int(2)));
            v.add_term(raise(true), int(-2));
        }
        (Kind::GMinus, true) => v.add_term(tok(k + i, m, false), int(1)),
        _ => {}
    }
    v
}

fn criterion_4() -> Outcome {
    let kinds = [Kind::L, Kind::H, Kind::GPlus, Kind::GMinus];
    let gen = |kind: Kind, m: i64| Generator::new(kind, 2 * m, Sector::Ramond).unwrap();
    let mut checked = 0;
    for spec in catalog_symbolic() {
        let h = GModuleHandle::new(spec.clone(), s("b"));
        for tok in h.window_tokens(3) {
            let v = ModuleVector::token(tok);
            for kind in kinds {
                for m in -3..=3 {
                    let got = g_act_generator(&h, gen(kind, m), &v).map_err(|e| e.to_string())?;
                    let ok = match (&spec, tok.kind) {
                        (DModuleSpec::Laurent { .. }, TokenKind::Laurent(n)) => got == laurent_line(kind, m, n, tok.bar),
                        (DModuleSpec::Omega { .. }, TokenKind::Omega(n)) => match omega_line(kind, m, n, tok.bar) {
                            None => got.is_zero(),
                            Some((p, bar)) => omega_as_polynomial(&got, bar)? == p,
                        },
                        (DModuleSpec::Fraction { .. }, _) => {
                            let f = fraction_as_function(&spec, &v, tok.bar)?;
                            match fraction_line(&spec, kind, m, &f, tok.bar) {
                                None => got.is_zero(),
                                Some((p, bar)) => fraction_as_function(&spec, &got, bar)? == p,
                            }
                        }
                        (DModuleSpec::DegreeN { .. }, TokenKind::DegreeN { i, m: order }) => {
                            got == degree_line(kind, m, i, order, tok.bar)
                        }
                        _ => false,
                    };
                    require(ok, || {
                        format!("{} {kind:?}[{m}] on {}: got {}", spec.family(), tok.render(&spec), got.render(&spec))
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} table entries"))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for spec in catalog_symbolic() {
        let h = GModuleHandle::new(spec.clone(), s("b"));
        let tokens: Vec<BasisToken> = h.window_tokens(2).into_iter().filter(|t| !t.bar).collect();
        for t in tokens {
            let v = ModuleVector::token(t);
            for k in -3..=3 {
                for d in [-3, -2, -1, 1, 2, 3] {
                    let r = t_operator_check(&h, k, d, &v).map_err(|e| e.to_string())?;
                    require(r.passed, || first_violation(&r))?;
                    checked += 1;
                }
            }
        }
        for b in ["0", "1/2"] {
            let hb = GModuleHandle::new(spec.clone(), s(b));
            let v = ModuleVector::token(hb.spec.window_tokens(1)[0]);
            let singular = matches!(t_operator_check(&hb, 1, 1, &v), Err(Error::SingularNormalizer(_)));
            require(singular, || format!("b = {b} did not raise the singular-normalizer error"))?;
        }
    }
    Ok(format!("{checked} identities, singular cases rejected"))
}

fn lt(n: i64, bar: bool) -> BasisToken {
    BasisToken::plain(TokenKind::Laurent(n)).with_bar(bar)
}

fn laurent(alpha: &str, b: &str) -> GModuleHandle {
    GModuleHandle::new(DModuleSpec::laurent(s(alpha)), s(b))
}

fn criterion_6() -> Outcome {
    let h = laurent("0", "0");
    for w in [(1, 1, 1), (2, 4, 4), (3, 5, 3), (4, 6, 2)] {
        let window = Window::new(w.0, w.1, w.2).unwrap();
        let r = span_probe(&h, &ModuleVector::token(lt(0, false)), &window, &fixed()).map_err(|e| e.to_string())?;
        require(r.rank == 1, || format!("rank {} at window {w:?}", r.rank))?;
    }
    let q = h.quotient_by_trivial().map_err(|e| e.to_string())?;
    let r = module_axiom_check(&q, 3, 5);
    require(r.passed, || first_violation(&r))?;
    let window = Window::new(2, 4, 4).unwrap();
    let r = span_probe(&q, &ModuleVector::token(lt(1, false)), &window, &fixed()).map_err(|e| e.to_string())?;
    require(r.full, || format!("quotient probe rank {}/{} missing {:?}", r.rank, r.ambient, r.missing))?;
    Ok(format!("trivial submodule rank 1; quotient rank {}/{}", r.rank, r.ambient))
}

/// Seeds whose probe stays below full rank, rendered with their gap.
fn short_seeds(h: &GModuleHandle, window: &Window) -> Result<(usize, Vec<String>), String> {
    let tokens = h.window_tokens(window.token_bound);
    let mut short = Vec::new();
    for t in &tokens {
        let r = span_probe(h, &ModuleVector::token(*t), window, &fixed()).map_err(|e| e.to_string())?;
        if !r.full {
            short.push(format!("{} {}/{} missing {:?}", t.render(&h.spec), r.rank, r.ambient, r.missing));
        }
    }
    Ok((tokens.len(), short))
}

fn all_seeds_full(h: &GModuleHandle, window: &Window) -> Result<usize, String> {
    let (n, short) = short_seeds(h, window)?;
    require(short.is_empty(), || format!("{}: {} of {n} seeds short, first {}", h.describe(), short.len(), short[0]))?;
    Ok(n)
}

fn criterion_7() -> Outcome {
    let h = laurent("0", "1/2");
    let window = Window::new(3, 5, 1).unwrap();
    let sub: Vec<ModuleVector> = h
        .window_tokens(5)
        .into_iter()
        .filter(|t| *t != lt(0, true))
        .map(ModuleVector::token)
        .collect();
    let r = submodule_check(&h, &sub, &window).map_err(|e| e.to_string())?;
    require(r.passed, || first_violation(&r))?;
    let seeds = all_seeds_full(&laurent("1/3", "1/2"), &Window::new(2, 4, 4).unwrap())?;
    Ok(format!("subspace closed; {seeds} seeds reach full rank"))
}

fn criterion_8() -> Outcome {
    let window = Window::new(2, 4, 1).unwrap();
    let phi_target = laurent("1/3", "0").sigma_twisted().flipped();
    let r = iso_witness_check(&laurent("1/3", "1/2"), &phi_target, Witness::Phi, &window).map_err(|e| e.to_string())?;
    require(r.passed, || first_violation(&r))?;
    let psi_target = laurent("0", "0")
        .quotient_by_trivial()
        .map_err(|e| e.to_string())?
        .sigma_twisted()
        .flipped();
    let r2 = iso_witness_check(&laurent("0", "1/2"), &psi_target, Witness::Psi, &window).map_err(|e| e.to_string())?;
    require(r2.passed, || first_violation(&r2))?;
    Ok(format!("phi {} and psi {} images commute", r.checked, r2.checked))
}

fn criterion_9() -> Outcome {
    let third = || s("1/3");
    let specs = [
        DModuleSpec::laurent(third()),
        DModuleSpec::omega(s("2")).unwrap(),
        DModuleSpec::fraction(vec![third(), third()], vec![BigRational::from_integer(0.into()), BigRational::from_integer(1.into())]).unwrap(),
        DModuleSpec::degree_n(2).unwrap(),
    ];
    let window = Window::new(2, 4, 4).unwrap();
    let deeper = Window::new(2, 4, 5).unwrap();
    let mut seeds = 0;
    let mut failures = Vec::new();
    for spec in specs {
        let h = GModuleHandle::new(spec, third());
        let (n, short) = short_seeds(&h, &window)?;
        seeds += n;
        if !short.is_empty() {
            let (_, still) = short_seeds(&h, &deeper)?;
            failures.push(format!(
                "{}: {} of {n} seeds short (first {}); at word length 5 {} short",
                h.spec.family(),
                short.len(),
                short[0],
                still.len()
            ));
        }
    }
    require(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{seeds} seeds reach full rank"))
}

fn criterion_10() -> Outcome {
    let tokens = laurent("a", "b").window_tokens(3);
    let mut checked = 0;
    let ramond = SModuleHandle::new(laurent("a", "b"));
    for t in &tokens {
        let v = ModuleVector::token(*t);
        for m in -3..=3 {
            for kind in [N1Kind::L, N1Kind::G] {
                let out = s_act(&ramond, kind, 2 * m, &v).map_err(|e| e.to_string())?;
                require(out.mismatch.is_none(), || format!("ε=0 {kind:?}[{m}] on {t:?}"))?;
                checked += 1;
            }
        }
    }
    // sector ½: the printed closed form follows L ↦ L − H/2, G± ↦ G±_{p∓1/2},
    // the pullback route follows δ; the two must differ by exactly this term
    let half = SModuleHandle::new(laurent("a", "b").in_sector(Sector::NeveuSchwarz));
    let r = GModuleHandle::new(DModuleSpec::laurent(s("a")), s("b"));
    let act = |kind: Kind, index2: i64, v: &ModuleVector| {
        g_act_generator(&r, Generator::new(kind, index2, Sector::Ramond).unwrap(), v).unwrap()
    };
    let mut documented = 0;
    for t in &tokens {
        let v = ModuleVector::token(*t);
        for m in -3..=3 {
            let out = s_act(&half, N1Kind::L, 2 * m, &v).map_err(|e| e.to_string())?;
            let expected = act(Kind::H, 2 * m, &v);
            let found = out.mismatch.clone().unwrap_or_default();
            require(found == expected, || format!("ε=½ L[{m}] on {t:?}: {found:?}"))?;
            documented += (!found.is_zero()) as usize;
        }
        for p2 in (-7..=7).step_by(2) {
            let out = s_act(&half, N1Kind::G, p2, &v).map_err(|e| e.to_string())?;
            let mut expected = act(Kind::GPlus, p2 + 1, &v).sub(&act(Kind::GPlus, p2 - 1, &v)).scale(&s("-1/2"));
            expected = expected.sub(&act(Kind::GMinus, p2 - 1, &v).sub(&act(Kind::GMinus, p2 + 1, &v)));
            let found = out.mismatch.clone().unwrap_or_default();
            require(found == expected, || format!("ε=½ G[{p2}/2] on {t:?}: {found:?}"))?;
            documented += (!found.is_zero()) as usize;
            checked += 1;
        }
        checked += 7;
    }
    Ok(format!(
        "{checked} restrictions; ε=0 routes agree, ε=½ differs only by the documented flow-convention term ({documented} entries)"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 10] = [
        ("super-Jacobi", criterion_1, Some(10)),
        ("morphisms", criterion_2, Some(10)),
        ("module axioms", criterion_3, Some(60)),
        ("closed-form tables", criterion_4, None),
        ("T identity", criterion_5, None),
        ("degeneration b=0", criterion_6, None),
        ("degeneration b=1/2", criterion_7, None),
        ("isomorphism witnesses", criterion_8, None),
        ("generic irreducibility evidence", criterion_9, Some(300)),
        ("N=1 restriction", criterion_10, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(*secs) {
                outcome = Err(format!("took {elapsed:.1?}, limit {secs}s"));
            }
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.clone())
            }
        };
        println!("criterion {:>2} {tag} [{name}] {detail} ({elapsed:.2?})", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
