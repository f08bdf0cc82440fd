use crate::dmodule::{act_t, ModuleVector};
use crate::functor::{g_act_generator, GModuleHandle};
use crate::lie::Generator;
use crate::report::VerificationReport;
use crate::{Error, Result, Scalar};

/// Applies `x_1 · x_2 · … · x_r` to `v`, rightmost factor first.
pub fn apply_word(handle: &GModuleHandle, word: &[Generator], v: &ModuleVector) -> Result<ModuleVector> {
    let mut out = v.clone();
    for g in word.iter().rev() {
        out = g_act_generator(handle, *g, &out)?;
    }
    Ok(out)
}

fn combination(
    handle: &GModuleHandle,
    terms: &[(Scalar, [Generator; 2])],
    v: &ModuleVector,
) -> Result<ModuleVector> {
    let mut out = ModuleVector::zero();
    for (c, word) in terms {
        out.add_scaled(&apply_word(handle, word, v)?, c);
    }
    Ok(out)
}

fn inverse_square(numerator: i64, d: i64) -> Result<Scalar> {
    if d == 0 {
        return Err(Error::InvalidConstruction("d must be nonzero".into()));
    }
    Ok(Scalar::ratio(numerator, d * d))
}

fn times(c: &Scalar, n: i64) -> Scalar {
    c * &Scalar::from_i64(n)
}

/// `T_{k,d} = (1/4d²)(L_{−d}G⁺_{k+d} + L_d G⁺_{k−d} − 2L_0 G⁺_k)` applied to `v`.
pub fn t_operator(handle: &GModuleHandle, k: i64, d: i64, v: &ModuleVector) -> Result<ModuleVector> {
    let f = inverse_square(1, 2 * d)?;
    let gp = |m: i64| Generator::g_plus(2 * m);
    let terms = [
        (f.clone(), [Generator::l(-d), gp(k + d)]),
        (f.clone(), [Generator::l(d), gp(k - d)]),
        (times(&f, -2), [Generator::l(0), gp(k)]),
    ];
    combination(handle, &terms, v)
}

/// `Q_{m,d} = (2/d²)(L_{−d}L_{m+d} + L_d L_{m−d} − 2L_0 L_m)` applied to `v`.
pub fn q_operator(handle: &GModuleHandle, m: i64, d: i64, v: &ModuleVector) -> Result<ModuleVector> {
    let f = inverse_square(2, d)?;
    let terms = [
        (f.clone(), [Generator::l(-d), Generator::l(m + d)]),
        (f.clone(), [Generator::l(d), Generator::l(m - d)]),
        (times(&f, -2), [Generator::l(0), Generator::l(m)]),
    ];
    combination(handle, &terms, v)
}

/// Checks `T_{k,d}·v / (b(1−2b)) = θ·(t^k v)` for unbarred `v`.
pub fn t_operator_check(handle: &GModuleHandle, k: i64, d: i64, v: &ModuleVector) -> Result<VerificationReport> {
    let b = &handle.b;
    let normalizer = b * &(&Scalar::one() - &times(b, 2));
    if normalizer.is_zero() {
        return Err(Error::SingularNormalizer(format!("b(1 - 2b) vanishes at b = {b}")));
    }
    if v.tokens().any(|t| t.bar) {
        return Err(Error::InvalidConstruction(
            "the T identity is checked on unbarred vectors only".into(),
        ));
    }
    let lhs = t_operator(handle, k, d, v)?.scale(&normalizer.recip()?);
    let rhs = handle.reduce(act_t(&handle.spec, k, v)?.map_tokens(|t| t.with_bar(true)));
    Ok(identity_report(
        format!("T[{k},{d}] on {}", handle.describe()),
        &lhs,
        &rhs,
        handle,
    ))
}

/// Checks `Q_{m,d}·w̄ = bar(t^m w)` on `F_0`.
pub fn q_operator_check(handle: &GModuleHandle, m: i64, d: i64, w: &ModuleVector) -> Result<VerificationReport> {
    if !handle.b.is_zero() {
        return Err(Error::RequiresBZero(format!("Q identity needs b = 0, got {}", handle.b)));
    }
    if w.tokens().any(|t| !t.bar) {
        return Err(Error::InvalidConstruction("the Q identity needs a barred vector".into()));
    }
    let lhs = q_operator(handle, m, d, w)?;
    let rhs = handle.reduce(act_t(&handle.spec, m, w)?);
    Ok(identity_report(
        format!("Q[{m},{d}] on {}", handle.describe()),
        &lhs,
        &rhs,
        handle,
    ))
}

fn identity_report(check: String, lhs: &ModuleVector, rhs: &ModuleVector, handle: &GModuleHandle) -> VerificationReport {
    let diff = lhs.sub(rhs);
    let outcome = (!diff.is_zero()).then(|| {
        format!(
            "lhs {} rhs {}",
            lhs.render(&handle.spec),
            rhs.render(&handle.spec)
        )
    });
    VerificationReport::from_outcomes(check.clone(), [(check, outcome)])
}
