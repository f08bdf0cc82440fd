//! The concrete catalog of irreducible modules over the Weyl algebra:
//! Laurent `M_α`, `Ω(λ)`, fraction modules `M(α, β)` and degree-n modules,
//! behind a uniform action by `t^m` and `D = t d/dt`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::scalar::{parse_rational, render_rational, Assignment};
use crate::{Error, Result, Scalar};

/// A module over the Weyl algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DModuleSpec {
    /// Basis `t^n`, `D t^n = (α + n) t^n`.
    Laurent { alpha: Scalar },
    /// Basis `D^n`, `t^m D^n = λ^m (D − m)^n`.
    Omega { lambda: Scalar },
    /// `C[t, (t − β_i)^{-1}]` with `d/dt f = f' + f Σ α_i/(t − β_i)`.
    Fraction {
        alphas: Vec<Scalar>,
        betas: Vec<BigRational>,
    },
    /// Basis `t^i (d/dt)^m`, `0 <= m < n`, quotient by `(d/dt)^n − t`.
    DegreeN { n: u32 },
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum RawSpec {
    Laurent { alpha: Scalar },
    Omega { lambda: Scalar },
    Fraction { alpha: Vec<Scalar>, beta: Vec<String> },
    #[serde(alias = "degree_n", alias = "degreen")]
    DegreeN { n: u32 },
}

impl DModuleSpec {
    pub fn laurent(alpha: Scalar) -> Self {
        DModuleSpec::Laurent { alpha }
    }

    pub fn omega(lambda: Scalar) -> Result<Self> {
        DModuleSpec::Omega { lambda }.validated()
    }

    pub fn fraction(alphas: Vec<Scalar>, betas: Vec<BigRational>) -> Result<Self> {
        DModuleSpec::Fraction { alphas, betas }.validated()
    }

    pub fn degree_n(n: u32) -> Result<Self> {
        DModuleSpec::DegreeN { n }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match &self {
            DModuleSpec::Laurent { .. } => {}
            DModuleSpec::Omega { lambda } => {
                if lambda.is_zero() {
                    return Err(Error::InvalidSpec("omega requires lambda != 0".into()));
                }
            }
            DModuleSpec::Fraction { alphas, betas } => {
                if betas.is_empty() || alphas.len() != betas.len() {
                    return Err(Error::InvalidSpec(
                        "fraction requires as many alphas as betas, at least one".into(),
                    ));
                }
                if !betas[0].is_zero() {
                    return Err(Error::InvalidSpec("fraction requires beta_0 = 0".into()));
                }
                let distinct: BTreeSet<_> = betas.iter().collect();
                if distinct.len() != betas.len() {
                    return Err(Error::InvalidSpec("fraction betas must be distinct".into()));
                }
            }
            DModuleSpec::DegreeN { n } => {
                if *n == 0 {
                    return Err(Error::InvalidSpec("degree-n requires n >= 1".into()));
                }
            }
        }
        Ok(self)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: RawSpec = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidSpec(format!("module spec: {e}")))?;
        let spec = match raw {
            RawSpec::Laurent { alpha } => DModuleSpec::Laurent { alpha },
            RawSpec::Omega { lambda } => DModuleSpec::Omega { lambda },
            RawSpec::Fraction { alpha, beta } => DModuleSpec::Fraction {
                alphas: alpha,
                betas: beta.iter().map(|b| parse_rational(b)).collect::<Result<_>>()?,
            },
            RawSpec::DegreeN { n } => DModuleSpec::DegreeN { n },
        };
        spec.validated()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("module spec is not JSON: {e}")))?;
        DModuleSpec::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        match self {
            DModuleSpec::Laurent { alpha } => json!({"family": "laurent", "alpha": alpha.to_string()}),
            DModuleSpec::Omega { lambda } => json!({"family": "omega", "lambda": lambda.to_string()}),
            DModuleSpec::Fraction { alphas, betas } => json!({
                "family": "fraction",
                "alpha": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "beta": betas.iter().map(render_rational).collect::<Vec<_>>(),
            }),
            DModuleSpec::DegreeN { n } => json!({"family": "degree-n", "n": n}),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            DModuleSpec::Laurent { .. } => "laurent",
            DModuleSpec::Omega { .. } => "omega",
            DModuleSpec::Fraction { .. } => "fraction",
            DModuleSpec::DegreeN { .. } => "degree-n",
        }
    }

    /// Names of the symbolic parameters in the spec.
    pub fn parameters(&self) -> BTreeSet<String> {
        match self {
            DModuleSpec::Laurent { alpha } => alpha.variables(),
            DModuleSpec::Omega { lambda } => lambda.variables(),
            DModuleSpec::Fraction { alphas, .. } => alphas.iter().flat_map(|a| a.variables()).collect(),
            DModuleSpec::DegreeN { .. } => BTreeSet::new(),
        }
    }

    pub fn specialize(&self, assignment: &Assignment) -> Result<Self> {
        let spec = match self {
            DModuleSpec::Laurent { alpha } => DModuleSpec::Laurent {
                alpha: alpha.specialize(assignment)?,
            },
            DModuleSpec::Omega { lambda } => DModuleSpec::Omega {
                lambda: lambda.specialize(assignment)?,
            },
            DModuleSpec::Fraction { alphas, betas } => DModuleSpec::Fraction {
                alphas: alphas.iter().map(|a| a.specialize(assignment)).collect::<Result<_>>()?,
                betas: betas.clone(),
            },
            DModuleSpec::DegreeN { n } => DModuleSpec::DegreeN { n: *n },
        };
        spec.validated()
    }

    /// Checks that `token` belongs to this family.
    pub fn admits(&self, token: &BasisToken) -> bool {
        match (self, token.kind) {
            (DModuleSpec::Laurent { .. }, TokenKind::Laurent(_)) => true,
            (DModuleSpec::Omega { .. }, TokenKind::Omega(_)) => true,
            (DModuleSpec::Fraction { .. }, TokenKind::Pow(_)) => true,
            (DModuleSpec::Fraction { betas, .. }, TokenKind::Pole { j, k }) => j < betas.len() && k >= 1,
            (DModuleSpec::DegreeN { n }, TokenKind::DegreeN { m, .. }) => m < *n,
            _ => false,
        }
    }

    fn check(&self, token: &BasisToken) -> Result<()> {
        if self.admits(token) {
            Ok(())
        } else {
            Err(Error::ForeignToken {
                token: token.render(self),
                family: self.family().into(),
            })
        }
    }

    /// Unbarred tokens of the truncation window with bound `bound`.
    pub fn window_tokens(&self, bound: usize) -> Vec<BasisToken> {
        let t = bound as i64;
        let kinds: Vec<TokenKind> = match self {
            DModuleSpec::Laurent { .. } => (-t..=t).map(TokenKind::Laurent).collect(),
            DModuleSpec::Omega { .. } => (0..=bound as u32).map(TokenKind::Omega).collect(),
            DModuleSpec::Fraction { betas, .. } => {
                let mut v: Vec<TokenKind> = (0..=bound as u32).map(TokenKind::Pow).collect();
                for j in 0..betas.len() {
                    v.extend((1..=bound as u32).map(|k| TokenKind::Pole { j, k }));
                }
                v
            }
            DModuleSpec::DegreeN { n } => (-t..=t)
                .flat_map(|i| (0..*n).map(move |m| TokenKind::DegreeN { i, m }))
                .collect(),
        };
        kinds.into_iter().map(BasisToken::plain).collect()
    }

    pub fn parse_token(&self, text: &str) -> Result<BasisToken> {
        let bad = || Error::InvalidSpec(format!("bad {} token {text:?}", self.family()));
        let raw = text.trim();
        let (body, bar) = match raw.strip_suffix('~') {
            Some(b) => (b.trim(), true),
            None => (raw, false),
        };
        let exponent = |s: &str, prefix: &str| -> Option<i64> {
            let rest = s.strip_prefix(prefix)?;
            if rest.is_empty() {
                return Some(1);
            }
            rest.strip_prefix('^')?.parse().ok()
        };
        let kind = match self {
            DModuleSpec::Laurent { .. } => TokenKind::Laurent(exponent(body, "t").ok_or_else(bad)?),
            DModuleSpec::Omega { .. } => {
                let n = exponent(body, "D").ok_or_else(bad)?;
                TokenKind::Omega(u32::try_from(n).map_err(|_| bad())?)
            }
            DModuleSpec::Fraction { betas, .. } => {
                if let Some(rest) = body.strip_prefix("(t") {
                    let (shift, tail) = rest.split_once(')').ok_or_else(bad)?;
                    let k: i64 = tail.strip_prefix("^-").and_then(|k| k.parse().ok()).ok_or_else(bad)?;
                    let beta = if let Some(b) = shift.strip_prefix('-') {
                        parse_rational(b)?
                    } else if let Some(b) = shift.strip_prefix('+') {
                        -parse_rational(b)?
                    } else {
                        return Err(bad());
                    };
                    let j = betas.iter().position(|x| *x == beta).ok_or_else(bad)?;
                    TokenKind::Pole {
                        j,
                        k: u32::try_from(k).map_err(|_| bad())?,
                    }
                } else {
                    let i = exponent(body, "t").ok_or_else(bad)?;
                    if i >= 0 {
                        TokenKind::Pow(i as u32)
                    } else {
                        TokenKind::Pole {
                            j: 0,
                            k: (-i) as u32,
                        }
                    }
                }
            }
            DModuleSpec::DegreeN { .. } => {
                let (a, b) = body.split_once('*').ok_or_else(bad)?;
                let i = exponent(a.trim(), "t").ok_or_else(bad)?;
                let m = exponent(b.trim(), "d").ok_or_else(bad)?;
                TokenKind::DegreeN {
                    i,
                    m: u32::try_from(m).map_err(|_| bad())?,
                }
            }
        };
        let token = BasisToken { kind, bar };
        self.check(&token)?;
        Ok(token)
    }

    /// Parses either a single token or a JSON object `{token: scalar}`.
    pub fn parse_vector(&self, text: &str) -> Result<ModuleVector> {
        let text = text.trim();
        if !text.starts_with('{') {
            return Ok(ModuleVector::token(self.parse_token(text)?));
        }
        let map: BTreeMap<String, Scalar> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("bad vector: {e}")))?;
        let mut v = ModuleVector::zero();
        for (tok, c) in map {
            v.add_term(self.parse_token(&tok)?, c);
        }
        Ok(v)
    }
}

impl fmt::Display for DModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    /// `t^n`
    Laurent(i64),
    /// `D^n`
    Omega(u32),
    /// `t^i`, `i >= 0`, in a fraction module
    Pow(u32),
    /// `(t − β_j)^{-k}`, `k >= 1`
    Pole { j: usize, k: u32 },
    /// `t^i (d/dt)^m`
    DegreeN { i: i64, m: u32 },
}

/// A basis vector of `M` or, with `bar`, of the doubled copy `M̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisToken {
    pub kind: TokenKind,
    pub bar: bool,
}

impl BasisToken {
    pub fn plain(kind: TokenKind) -> Self {
        BasisToken { kind, bar: false }
    }

    pub fn barred(kind: TokenKind) -> Self {
        BasisToken { kind, bar: true }
    }

    pub fn with_bar(self, bar: bool) -> Self {
        BasisToken { bar, ..self }
    }

    pub fn render(&self, spec: &DModuleSpec) -> String {
        let body = match (self.kind, spec) {
            (TokenKind::Laurent(n), _) => format!("t^{n}"),
            (TokenKind::Omega(n), _) => format!("D^{n}"),
            (TokenKind::Pow(i), _) => format!("t^{i}"),
            (TokenKind::Pole { j, k }, DModuleSpec::Fraction { betas, .. }) if j < betas.len() => {
                let beta = &betas[j];
                if beta.is_zero() {
                    format!("t^-{k}")
                } else if beta.is_negative() {
                    format!("(t+{})^-{k}", render_rational(&-beta))
                } else {
                    format!("(t-{})^-{k}", render_rational(beta))
                }
            }
            (TokenKind::Pole { j, k }, _) => format!("pole{j}^-{k}"),
            (TokenKind::DegreeN { i, m }, _) => format!("t^{i}*d^{m}"),
        };
        if self.bar {
            format!("{body}~")
        } else {
            body
        }
    }
}

/// A finite combination of basis tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleVector {
    terms: BTreeMap<BasisToken, Scalar>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector::default()
    }

    pub fn token(t: BasisToken) -> Self {
        ModuleVector::term(t, Scalar::one())
    }

    pub fn term(t: BasisToken, c: Scalar) -> Self {
        let mut v = ModuleVector::zero();
        v.add_term(t, c);
        v
    }

    pub fn add_term(&mut self, t: BasisToken, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&t);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(t, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (t, x) in &other.terms {
            self.add_term(*t, x * c);
        }
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_i64(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVector {
        let mut out = ModuleVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisToken, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &BasisToken) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn remove(&mut self, t: &BasisToken) -> Option<Scalar> {
        self.terms.remove(t)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &BasisToken> {
        self.terms.keys()
    }

    /// Keeps only terms whose token satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&BasisToken) -> bool) -> ModuleVector {
        ModuleVector {
            terms: self.terms.iter().filter(|(t, _)| keep(t)).map(|(t, c)| (*t, c.clone())).collect(),
        }
    }

    /// Applies `f` to every token, keeping coefficients.
    pub fn map_tokens(&self, f: impl Fn(BasisToken) -> BasisToken) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (t, c) in &self.terms {
            out.add_term(f(*t), c.clone());
        }
        out
    }

    pub fn specialize(&self, assignment: &Assignment) -> Result<ModuleVector> {
        let mut out = ModuleVector::zero();
        for (t, c) in &self.terms {
            out.add_term(*t, c.specialize(assignment)?);
        }
        Ok(out)
    }

    pub fn to_json(&self, spec: &DModuleSpec) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(t, c)| (t.render(spec), Value::String(c.to_string())))
            .collect();
        crate::report::sorted(Value::Object(map))
    }

    pub fn render(&self, spec: &DModuleSpec) -> String {
        self.to_json(spec).to_string()
    }
}

impl FromIterator<(BasisToken, Scalar)> for ModuleVector {
    fn from_iter<I: IntoIterator<Item = (BasisToken, Scalar)>>(iter: I) -> Self {
        let mut v = ModuleVector::zero();
        for (t, c) in iter {
            v.add_term(t, c);
        }
        v
    }
}

fn rational(q: BigRational) -> Scalar {
    Scalar::from_rational(q)
}

fn int(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Action of `t^m`.
pub fn act_t(spec: &DModuleSpec, m: i64, v: &ModuleVector) -> Result<ModuleVector> {
    let mut out = ModuleVector::zero();
    for (tok, c) in v.terms() {
        spec.check(tok)?;
        let image = act_t_token(spec, m, *tok);
        out.add_scaled(&image, c);
    }
    Ok(out)
}

fn act_t_token(spec: &DModuleSpec, m: i64, tok: BasisToken) -> ModuleVector {
    let bar = tok.bar;
    let mk = |kind| BasisToken { kind, bar };
    match (spec, tok.kind) {
        (DModuleSpec::Laurent { .. }, TokenKind::Laurent(n)) => {
            ModuleVector::token(mk(TokenKind::Laurent(n + m)))
        }
        (DModuleSpec::Omega { lambda }, TokenKind::Omega(n)) => {
            let lm = lambda.pow(m).expect("lambda is nonzero");
            let mut out = ModuleVector::zero();
            // λ^m (D − m)^n
            for j in 0..=n {
                let coeff = binomial(n, j) * num_traits::pow(BigInt::from(-m), (n - j) as usize);
                out.add_term(mk(TokenKind::Omega(j)), &lm * &rational(coeff.into()));
            }
            out
        }
        (DModuleSpec::Fraction { betas, .. }, _) => {
            let mut v = ModuleVector::token(tok);
            for _ in 0..m.abs() {
                v = if m > 0 { frac_mul_t(betas, &v) } else { frac_mul_pole(betas, 0, &v) };
            }
            v
        }
        (DModuleSpec::DegreeN { .. }, TokenKind::DegreeN { i, m: d }) => {
            ModuleVector::token(mk(TokenKind::DegreeN { i: i + m, m: d }))
        }
        _ => unreachable!("token checked against family"),
    }
}

/// Action of `D`.
pub fn act_d(spec: &DModuleSpec, v: &ModuleVector) -> Result<ModuleVector> {
    let mut out = ModuleVector::zero();
    for (tok, c) in v.terms() {
        spec.check(tok)?;
        let bar = tok.bar;
        let mk = |kind| BasisToken { kind, bar };
        let image = match (spec, tok.kind) {
            (DModuleSpec::Laurent { alpha }, TokenKind::Laurent(n)) => {
                ModuleVector::term(*tok, alpha + &int(n))
            }
            (DModuleSpec::Omega { .. }, TokenKind::Omega(n)) => ModuleVector::token(mk(TokenKind::Omega(n + 1))),
            (DModuleSpec::Fraction { alphas, betas }, _) => {
                let single = ModuleVector::token(*tok);
                let mut deriv = frac_derivative(&single);
                for (j, a) in alphas.iter().enumerate() {
                    deriv.add_scaled(&frac_mul_pole(betas, j, &single), a);
                }
                frac_mul_t(betas, &deriv)
            }
            (DModuleSpec::DegreeN { n }, TokenKind::DegreeN { i, m }) => {
                let mut d = ModuleVector::zero();
                d.add_term(mk(TokenKind::DegreeN { i: i - 1, m }), int(i));
                if m + 1 < *n {
                    d.add_term(mk(TokenKind::DegreeN { i, m: m + 1 }), Scalar::one());
                } else {
                    d.add_term(mk(TokenKind::DegreeN { i: i + 1, m: 0 }), Scalar::one());
                }
                act_t(spec, 1, &d)?
            }
            _ => unreachable!("token checked against family"),
        };
        out.add_scaled(&image, c);
    }
    Ok(out)
}

/// Multiplication by `t` in the partial-fraction basis.
fn frac_mul_t(betas: &[BigRational], v: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero();
    for (tok, c) in v.terms() {
        let bar = tok.bar;
        let mk = |kind| BasisToken { kind, bar };
        match tok.kind {
            TokenKind::Pow(i) => out.add_term(mk(TokenKind::Pow(i + 1)), c.clone()),
            TokenKind::Pole { j, k } => {
                // t = (t − β) + β
                let lower = if k == 1 { TokenKind::Pow(0) } else { TokenKind::Pole { j, k: k - 1 } };
                out.add_term(mk(lower), c.clone());
                out.add_term(*tok, c * &rational(betas[j].clone()));
            }
            _ => unreachable!("fraction token"),
        }
    }
    out
}

/// Multiplication by `(t − β_j)^{-1}` in the partial-fraction basis.
fn frac_mul_pole(betas: &[BigRational], j: usize, v: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero();
    for (tok, c) in v.terms() {
        out.add_scaled(&frac_mul_pole_token(betas, j, *tok), c);
    }
    out
}

fn frac_mul_pole_token(betas: &[BigRational], j: usize, tok: BasisToken) -> ModuleVector {
    let bar = tok.bar;
    let mk = |kind| BasisToken { kind, bar };
    let beta = &betas[j];
    match tok.kind {
        TokenKind::Pow(i) => {
            // t^i/(t − β) = Σ_{s<i} β^{i−1−s} t^s + β^i/(t − β)
            let mut out = ModuleVector::zero();
            for s in 0..i {
                let coeff = num_traits::pow(beta.clone(), (i - 1 - s) as usize);
                out.add_term(mk(TokenKind::Pow(s)), rational(coeff));
            }
            out.add_term(mk(TokenKind::Pole { j, k: 1 }), rational(num_traits::pow(beta.clone(), i as usize)));
            out
        }
        TokenKind::Pole { j: c, k } if c == j => ModuleVector::token(mk(TokenKind::Pole { j, k: k + 1 })),
        TokenKind::Pole { j: c, k } => {
            // 1/((t − β_j)(t − β_c)) = (1/(β_j − β_c)) (1/(t − β_j) − 1/(t − β_c))
            let inv = rational((beta - &betas[c]).recip());
            let lower = if k == 1 { TokenKind::Pow(0) } else { TokenKind::Pole { j: c, k: k - 1 } };
            let mut out = frac_mul_pole_token(betas, j, mk(lower));
            out.add_term(tok, -Scalar::one());
            out.scale(&inv)
        }
        _ => unreachable!("fraction token"),
    }
}

fn frac_derivative(v: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero();
    for (tok, c) in v.terms() {
        let bar = tok.bar;
        let mk = |kind| BasisToken { kind, bar };
        match tok.kind {
            TokenKind::Pow(0) => {}
            TokenKind::Pow(i) => out.add_term(mk(TokenKind::Pow(i - 1)), c * &int(i as i64)),
            TokenKind::Pole { j, k } => out.add_term(mk(TokenKind::Pole { j, k: k + 1 }), c * &int(-(k as i64))),
            _ => unreachable!("fraction token"),
        }
    }
    out
}
