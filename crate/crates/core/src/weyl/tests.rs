use super::*;
use proptest::prelude::*;
use CliffordUnit::*;

fn op(text: &str) -> SDElement {
    text.parse().unwrap()
}

fn w(k: i64, l: u32, c: CliffordUnit) -> SDElement {
    SDElement::word(Word::new(k, l, c), Scalar::one())
}

/// All monomials `t^n`, `t^n θ` with `|n| <= 3`.
fn probe_functions() -> Vec<SuperLaurent> {
    let mut out = Vec::new();
    for n in -3..=3 {
        for th in [false, true] {
            out.push(SuperLaurent::monomial(n, th, Scalar::one()));
        }
    }
    out
}

/// Operators act faithfully on `A`, so agreement on enough monomials pins
/// an element of bounded D-degree.
fn same_action(x: &SDElement, y: &SDElement) -> bool {
    probe_functions().iter().all(|f| sd_apply(x, f) == sd_apply(y, f))
}

#[test]
fn clifford_relation() {
    assert_eq!(op("dtheta*theta"), op("1 - theta*dtheta"));
    assert_eq!(&op("dtheta*theta") + &op("theta*dtheta"), SDElement::one());
    assert!(op("theta*theta").is_zero());
    assert!(op("dtheta*dtheta").is_zero());
}

#[test]
fn weyl_reordering() {
    assert_eq!(op("t*D*t*D"), op("t^2*D^2 + t^2*D"));
    assert_eq!(op("t*D*t*D").to_string(), "t^2*D + t^2*D^2");
    assert_eq!(op("D*t^-2"), op("t^-2*D - 2*t^-2"));
    assert_eq!(op("dt*t - t*dt"), SDElement::one());
}

#[test]
fn supercommutator_examples() {
    let a = op("t*dtheta");
    let b = op("t*theta*D");
    let br = sd_supercommutator(&a, &b).unwrap();
    assert_eq!(br, &sd_mul(&a, &b) + &sd_mul(&b, &a));
    assert_eq!(br, op("t^2*D + t^2*theta*dtheta"));
    let oracle: Vec<_> = probe_functions()
        .iter()
        .map(|f| sd_apply(&a, &sd_apply(&b, f)).add(&sd_apply(&b, &sd_apply(&a, f))))
        .collect();
    let got: Vec<_> = probe_functions().iter().map(|f| sd_apply(&br, f)).collect();
    assert_eq!(got, oracle);

    assert_eq!(sd_supercommutator(&op("t*D"), &op("t")).unwrap(), op("t^2"));
    assert!(sd_supercommutator(&op("theta"), &op("theta")).unwrap().is_zero());
    assert_eq!(
        sd_supercommutator(&op("theta + D"), &op("t")),
        Err(Error::MixedParity)
    );
}

#[test]
fn apply_examples() {
    let t3 = SuperLaurent::monomial(3, false, Scalar::one());
    assert_eq!(sd_apply(&op("D"), &t3), t3.scale(&Scalar::from_i64(3)));
    let f = SuperLaurent::monomial(-1, true, Scalar::one());
    assert_eq!(
        sd_apply(&op("t^2*theta*dtheta"), &f),
        SuperLaurent::monomial(1, true, Scalar::one())
    );
    let t5 = SuperLaurent::monomial(5, false, Scalar::one());
    assert!(sd_apply(&op("dtheta"), &t5).is_zero());
}

#[test]
fn parser_and_rendering() {
    let x = op("-2*t^3*(theta*D + 2*b*theta)");
    assert_eq!(x, &w(3, 1, Theta).scale(&Scalar::from_i64(-2)) - &w(3, 0, Theta).scale(&"4*b".parse().unwrap()));
    for text in ["-2*t^3*D*theta - 4*b*t^3*theta", "(a + 1)*t^-1*dtheta + 1/2", "(-(a + b))", "0"] {
        let v = op(text);
        assert_eq!(op(&v.to_string()), v, "{text} -> {v}");
    }
    assert!("Q*t".parse::<SDElement>().is_err());
    assert!("t/D".parse::<SDElement>().is_err());
    assert!("D^-1".parse::<SDElement>().is_err());
}

fn small_words() -> Vec<SDElement> {
    let mut out = Vec::new();
    for k in -2..=2 {
        for l in 0..=2 {
            for c in CliffordUnit::ALL {
                out.push(w(k, l, c));
            }
        }
    }
    out
}

#[test]
fn exhaustive_associativity_and_representation() {
    let words = small_words();
    let fs = probe_functions();
    for a in &words {
        for b in &words {
            let ab = sd_mul(a, b);
            for f in &fs {
                assert_eq!(sd_apply(&ab, f), sd_apply(a, &sd_apply(b, f)), "{a} {b} {f}");
            }
            for c in words.iter().step_by(7) {
                assert_eq!(sd_mul(&ab, c), sd_mul(a, &sd_mul(b, c)));
            }
        }
    }
}

#[test]
fn parity_and_skew_symmetry_on_words() {
    let words = small_words();
    for a in &words {
        for b in &words {
            let pa = a.parity().unwrap().unwrap();
            let pb = b.parity().unwrap().unwrap();
            if let Some(p) = sd_mul(a, b).parity().unwrap() {
                assert_eq!(p, pa + pb);
            }
            let ab = sd_supercommutator(a, b).unwrap();
            let ba = sd_supercommutator(b, a).unwrap();
            assert_eq!(ab, ba.scale(&Scalar::from_i64(-pa.koszul(pb))));
        }
    }
}

fn element() -> impl Strategy<Value = SDElement> {
    let term = (-3i64..=3, 0u32..=3, 0usize..4, -4i64..=4);
    prop::collection::vec(term, 1..5).prop_map(|ts| {
        SDElement::from_terms(
            ts.into_iter()
                .map(|(k, l, c, x)| (Word::new(k, l, CliffordUnit::ALL[c]), Scalar::from_i64(x))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_associativity(a in element(), b in element(), c in element()) {
        prop_assert_eq!(sd_mul(&sd_mul(&a, &b), &c), sd_mul(&a, &sd_mul(&b, &c)));
    }

    #[test]
    fn random_representation(a in element(), b in element()) {
        let ab = sd_mul(&a, &b);
        let by_terms = a.terms().fold(SDElement::zero(), |acc, (wa, ca)| {
            &acc + &sd_mul(&SDElement::word(*wa, ca.clone()), &b)
        });
        prop_assert!(same_action(&ab, &by_terms));
        for f in probe_functions() {
            prop_assert_eq!(sd_apply(&sd_mul(&a, &b), &f), sd_apply(&a, &sd_apply(&b, &f)));
        }
    }
}
