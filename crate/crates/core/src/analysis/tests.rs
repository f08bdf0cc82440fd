use super::*;
use crate::dmodule::{DModuleSpec, TokenKind};
use crate::functor::GModuleHandle;
use crate::lie::Generator;
use crate::{Error, Scalar};

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn lt(n: i64, bar: bool) -> BasisToken {
    BasisToken::plain(TokenKind::Laurent(n)).with_bar(bar)
}

fn laurent(alpha: &str, b: &str) -> GModuleHandle {
    GModuleHandle::new(DModuleSpec::laurent(s(alpha)), s(b))
}

fn fixed() -> ProbeSpecialization {
    ProbeSpecialization::Fixed(Default::default())
}

#[test]
fn windows_validate() {
    assert_eq!(Window::parse("2,4,4").unwrap().as_array(), [2, 4, 4]);
    assert_eq!(Window::parse("3, 5").unwrap().word_length, 1);
    assert!(matches!(Window::parse("0,4,4"), Err(Error::InvalidWindow(_))));
    assert!(Window::parse("2,x").is_err());
}

#[test]
fn echelon_rank_and_membership() {
    let a = ModuleVector::token(lt(0, false));
    let b = ModuleVector::term(lt(1, false), s("x")).add(&a);
    let mut e = Echelon::new();
    assert!(e.insert(&b));
    assert!(e.insert(&a));
    assert!(!e.insert(&b.add(&a.scale(&s("x")))));
    assert!(e.contains(&ModuleVector::token(lt(1, false))));
    assert!(!e.contains(&ModuleVector::token(lt(2, false))));
    assert_eq!(e.rank(), 2);
}

#[test]
fn t_identity_examples() {
    let v = ModuleVector::token(lt(0, false));
    assert!(t_operator_check(&laurent("a", "b"), 1, 1, &v).unwrap().passed);
    assert!(t_operator_check(&laurent("a", "1/3"), 1, 1, &v).unwrap().passed);
    assert!(matches!(
        t_operator_check(&laurent("a", "1/2"), 1, 1, &v),
        Err(Error::SingularNormalizer(_))
    ));
    assert!(t_operator_check(&laurent("a", "b"), 1, 1, &ModuleVector::token(lt(0, true))).is_err());
}

#[test]
fn t_identity_fails_for_wrong_normalization() {
    // the factor 1/4d² is load-bearing
    let h = laurent("a", "b");
    let v = ModuleVector::token(lt(2, false));
    let lhs = t_operator(&h, 1, 2, &v).unwrap();
    let mut wrong = crate::dmodule::ModuleVector::zero();
    for (c, word) in [
        (s("1/4"), [Generator::l(-2), Generator::g_plus(6)]),
        (s("1/4"), [Generator::l(2), Generator::g_plus(-2)]),
        (s("-1/2"), [Generator::l(0), Generator::g_plus(2)]),
    ] {
        wrong.add_scaled(&apply_word(&h, &word, &v).unwrap(), &c);
    }
    assert_ne!(lhs, wrong);
}

#[test]
fn q_identity_examples() {
    let omega = GModuleHandle::new(DModuleSpec::omega(s("2")).unwrap(), s("0"));
    let w = ModuleVector::token(BasisToken::barred(TokenKind::Omega(1)));
    assert!(q_operator_check(&omega, 1, 1, &w).unwrap().passed);
    for d in [1, 2, -3] {
        let q0 = q_operator(&omega, 0, d, &w).unwrap();
        assert_eq!(q0, w);
    }
    let symbolic = laurent("a", "0");
    let w = ModuleVector::token(lt(2, true));
    assert!(q_operator_check(&symbolic, -1, 2, &w).unwrap().passed);
    assert!(matches!(
        q_operator_check(&laurent("a", "1/3"), 1, 1, &w),
        Err(Error::RequiresBZero(_))
    ));
}

#[test]
fn probe_examples() {
    let w = Window::new(2, 4, 4).unwrap();
    let trivial = span_probe(&laurent("0", "0"), &ModuleVector::token(lt(0, false)), &w, &fixed()).unwrap();
    assert_eq!(trivial.rank, 1);
    assert_eq!(trivial.kind, "evidence");

    let omega = GModuleHandle::new(DModuleSpec::omega(s("2")).unwrap(), s("1/3"));
    let seed = ModuleVector::token(BasisToken::plain(TokenKind::Omega(0)));
    let r = span_probe(&omega, &seed, &w, &fixed()).unwrap();
    assert!(r.full, "{r:?}");

    let half = GModuleHandle::new(DModuleSpec::omega(s("2")).unwrap(), s("1/2"));
    let r = span_probe(&half, &seed, &w, &fixed()).unwrap();
    assert!(!r.full);
    assert!(r.rank < r.ambient);

    let r = span_probe(&laurent("0", "1/2"), &ModuleVector::token(lt(0, false)), &w, &fixed()).unwrap();
    assert!(!r.full);
    assert_eq!(r.missing, vec!["t^0~".to_string()]);
}

#[test]
fn symbolic_probe_is_cross_checked() {
    let w = Window::new(1, 2, 3).unwrap();
    let h = laurent("a", "b");
    let seed = ModuleVector::token(lt(0, false));
    let spec = ProbeSpecialization::Symbolic { rng_seed: 0 };
    let r = span_probe(&h, &seed, &w, &spec).unwrap();
    let cross = r.cross_check.clone().unwrap();
    assert!(cross.rank <= r.rank);
    assert_eq!(r.specialization, "symbolic");
    assert_eq!(span_probe(&h, &seed, &w, &spec).unwrap(), r);
}

#[test]
fn default_specialization_binds_named_slots() {
    let h = GModuleHandle::new(DModuleSpec::omega(s("l")).unwrap(), s("b"));
    let a = default_specialization(&h);
    assert_eq!(crate::scalar::render_assignment(&a), "{b=1/3, l=2}");
}

#[test]
fn submodule_examples() {
    let w = Window::new(2, 4, 1).unwrap();
    let one = [ModuleVector::token(lt(0, false))];
    assert!(submodule_check(&laurent("0", "0"), &one, &w).unwrap().passed);

    let half = laurent("0", "1/2");
    let sub: Vec<ModuleVector> = half
        .window_tokens(4)
        .into_iter()
        .filter(|t| *t != lt(0, true))
        .map(ModuleVector::token)
        .collect();
    assert!(submodule_check(&half, &sub, &w).unwrap().passed);

    let r = submodule_check(&laurent("a", "1/3"), &one, &w).unwrap();
    assert!(!r.passed);
    assert!(r.violations.iter().any(|v| v.item.starts_with("L[1]")));
}

#[test]
fn whole_window_is_closed() {
    let h = GModuleHandle::new(DModuleSpec::degree_n(2).unwrap(), s("b"));
    let all: Vec<ModuleVector> = h.window_tokens(2).into_iter().map(ModuleVector::token).collect();
    assert!(submodule_check(&h, &all, &Window::new(2, 2, 1).unwrap()).unwrap().passed);
}

#[test]
fn witness_examples() {
    let w = Window::new(2, 4, 1).unwrap();
    let source = laurent("1/3", "1/2");
    let target = laurent("1/3", "0").sigma_twisted().flipped();
    assert!(iso_witness_check(&source, &target, Witness::Phi, &w).unwrap().passed);

    let source = laurent("0", "1/2");
    let target = laurent("0", "0").quotient_by_trivial().unwrap().sigma_twisted();
    let r = iso_witness_check(&source, &target, Witness::Psi, &w).unwrap();
    assert!(r.passed, "{:?}", r.violations.first());

    let h = laurent("a", "b");
    assert!(iso_witness_check(&h, &h, Witness::Identity, &w).unwrap().passed);
}

#[test]
fn witness_without_twist_fails() {
    let w = Window::new(1, 2, 1).unwrap();
    let r = iso_witness_check(&laurent("1/3", "1/2"), &laurent("1/3", "0"), Witness::Phi, &w).unwrap();
    assert!(!r.passed);
}

#[test]
fn phi_is_undefined_off_the_laurent_and_omega_families() {
    let spec = DModuleSpec::degree_n(2).unwrap();
    let t = BasisToken::barred(TokenKind::DegreeN { i: 0, m: 0 });
    assert!(Witness::Phi.map_token(&spec, t).is_none());
}
