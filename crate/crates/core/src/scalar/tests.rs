use super::*;
use proptest::prelude::*;

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn assign(pairs: &[(&str, i64, i64)]) -> Assignment {
    pairs
        .iter()
        .map(|&(k, n, d)| (k.to_owned(), BigRational::new(n.into(), d.into())))
        .collect()
}

#[test]
fn rational_arithmetic() {
    assert_eq!(&s("1/2") + &s("1/3"), s("5/6"));
    assert_eq!(s("5/6").to_string(), "5/6");
}

#[test]
fn polynomial_product() {
    let p = &s("b") * &s("1 - 2*b");
    assert_eq!(p, s("b - 2*b^2"));
    assert_eq!(p.to_string(), "-2*b^2 + b");
}

#[test]
fn reciprocal_then_forced_singularity() {
    let r = Scalar::one().checked_div(&s("b - 2*b^2")).unwrap();
    assert_eq!(r, s("1/(b*(1 - 2*b))"));
    let err = r.specialize(&assign(&[("b", 1, 2)])).unwrap_err();
    assert!(matches!(err, Error::SingularSpecialization(_)));
}

#[test]
fn division_by_zero_is_an_error() {
    assert_eq!(s("b").checked_div(&s("b - b")), Err(Error::DivisionByZero));
    assert!("1/(b - b)".parse::<Scalar>().is_err());
}

#[test]
fn specialization_examples() {
    assert_eq!(
        s("b*(1 - 2*b)").specialize(&assign(&[("b", 1, 3)])).unwrap(),
        s("1/9")
    );
    assert_eq!(s("lambda^2").specialize(&assign(&[("lambda", 2, 1)])).unwrap(), s("4"));
    let partial = s("a*b + b").specialize(&assign(&[("a", 2, 1)])).unwrap();
    assert_eq!(partial, s("3*b"));
}

#[test]
fn zero_tests() {
    assert!((&s("b") - &s("b")).is_zero());
    assert!((&s("(1 - 2*b)/(2 - 4*b)") - &s("1/2")).is_zero());
    assert!(!s("b*(1 - 2*b)").is_zero());
}

#[test]
fn canonical_constants() {
    assert_eq!(Scalar::zero().numerator(), &Poly::zero());
    assert_eq!(Scalar::zero().denominator(), &Poly::one());
    assert!(Scalar::one().numerator().is_one() && Scalar::one().denominator().is_one());
}

#[test]
fn canonical_form_scales_to_coprime_integer_content() {
    let x = s("(-2*b + 1)/3");
    assert_eq!(x.to_string(), "(-2*b + 1)/3");
    let y = s("(b/2 + 1/3)/(-b)");
    assert_eq!(y, s("-(3*b + 2)/(6*b)"));
    assert_eq!(y.to_string(), "-(3*b + 2)/(6*b)");
    // the denominator leading coefficient is positive
    let z = s("1/(1 - b)");
    assert_eq!(z.to_string(), "-1/(b - 1)");
}

#[test]
fn rendering_reparses() {
    for text in [
        "-(a + b)",
        "(-2*b + 1)/3",
        "a^2*b/(a - b)",
        "1/(a*b)",
        "-7/2",
        "lambda^-3",
        "(a + 1)/(2*b)",
        "x^3/y^2",
    ] {
        let v = s(text);
        assert_eq!(s(&v.to_string()), v, "{text} -> {v}");
    }
    assert_eq!(s("-a - b").to_string(), "-(a + b)");
}

#[test]
fn multivariate_cancellation() {
    let x = s("(a^2 - b^2)/(a*b - b^2)");
    assert_eq!(x, s("(a + b)/b"));
    let y = s("(a*c + b*c + a + b)/(c^2 - 1)");
    assert_eq!(y, s("(a + b)/(c - 1)"));
}

#[test]
fn derivative_quotient_rule() {
    let f = s("1/(t - 1)");
    assert_eq!(f.derivative("t"), s("-1/(t - 1)^2"));
}

fn small_poly() -> impl Strategy<Value = Scalar> {
    let term = (-3i64..=3, 0u32..=2, 0u32..=2);
    prop::collection::vec(term, 1..4).prop_map(|terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, (c, ea, eb)| {
            let t = &Scalar::from_i64(c)
                * &(&Scalar::param("a").pow(ea as i64).unwrap()
                    * &Scalar::param("b").pow(eb as i64).unwrap());
            &acc + &t
        })
    })
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| {
        n.checked_div(&d).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in small_scalar(), y in small_scalar(), z in small_scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn specialization_commutes_with_arithmetic(
        x in small_scalar(),
        y in small_scalar(),
        a in -5i64..=5,
        b in 1i64..=6,
    ) {
        let at = assign(&[("a", a, 1), ("b", 1, b)]);
        if let (Ok(sx), Ok(sy)) = (x.specialize(&at), y.specialize(&at)) {
            prop_assert_eq!((&x + &y).specialize(&at).unwrap(), &sx + &sy);
            prop_assert_eq!((&x * &y).specialize(&at).unwrap(), &sx * &sy);
        }
    }

    #[test]
    fn display_round_trips(x in small_scalar()) {
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }
}
