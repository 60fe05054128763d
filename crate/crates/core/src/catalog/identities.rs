//! Formal identity verification by exact truncated-series comparison.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::closed::{ClosedForm, LambertSum, ProductFactor};
use super::engine::{partial_sum, sum_family, RatioSpec, TailOptions};
use super::fine::{abel_sum, fine_f_regularized, FineParams, Monomial};
use super::{build_series, family, NamedSeriesId, SeriesFamily};
use crate::arithmetic::theta::{theta_double_sum, ThetaId};
use crate::error::{Error, Result};
use crate::expr::{exp_int, rat, QProductExpr};
use crate::series::{rational_to_json, Exponent, TruncatedQSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Fine63,
    Entry172,
    Ajo,
    RamaSumsOfTails,
    DysonInvolution,
    Jackson,
    CflzW1Theta,
    CflzW2Theta,
    LlTheta,
    LEqLl,
    SymF3,
    SymF4,
    SymF5F6,
    SymF7F8,
    SymL,
    F1F2W1,
}

impl IdentityId {
    pub const ALL: [IdentityId; 16] = [
        IdentityId::Fine63,
        IdentityId::Entry172,
        IdentityId::Ajo,
        IdentityId::RamaSumsOfTails,
        IdentityId::DysonInvolution,
        IdentityId::Jackson,
        IdentityId::CflzW1Theta,
        IdentityId::CflzW2Theta,
        IdentityId::LlTheta,
        IdentityId::LEqLl,
        IdentityId::SymF3,
        IdentityId::SymF4,
        IdentityId::SymF5F6,
        IdentityId::SymF7F8,
        IdentityId::SymL,
        IdentityId::F1F2W1,
    ];

    pub fn as_str(&self) -> &'static str {
        use IdentityId::*;
        match self {
            Fine63 => "FINE_63",
            Entry172 => "ENTRY_172",
            Ajo => "AJO",
            RamaSumsOfTails => "RAMA_SUMSOFTAILS",
            DysonInvolution => "DYSON_INVOLUTION",
            Jackson => "JACKSON",
            CflzW1Theta => "CFLZ_W1_THETA",
            CflzW2Theta => "CFLZ_W2_THETA",
            LlTheta => "LL_THETA",
            LEqLl => "L_EQ_LL",
            SymF3 => "SYM_F3",
            SymF4 => "SYM_F4",
            SymF5F6 => "SYM_F5F6",
            SymF7F8 => "SYM_F7F8",
            SymL => "SYM_L",
            F1F2W1 => "F1F2_W1",
        }
    }

    /// The relation that is actually checked.
    pub fn relation(&self) -> &'static str {
        use IdentityId::*;
        match self {
            Fine63 => "F(a,b;t) = (1-b)/(1-t) F(at/b, t; b)",
            Entry172 => {
                "sum (-aq/b)_n b^n (-1)^n q^{n(n+1)/2} / (-b)_{n+1} = sum (-b)^n (-q)_n (-aq/b)_n / (aq;q^2)_{n+1}"
            }
            Ajo => {
                "sum_{n>=0} ((t)_inf/(a)_inf - (t)_n/(a)_n) = sum_{n>=1} (q/a)_n/(q/t)_n (a/t)^n \
                 + (t)_inf/(a)_inf (sum_{n>=1} q^n/(1-q^n) + sum_{n>=1} q^n/t/(1-q^n/t) \
                 - sum_{n>=0} t q^n/(1-t q^n) - sum_{n>=0} (a/t) q^n/(1-(a/t) q^n))"
            }
            RamaSumsOfTails => "sum_{n>=0} (1/(-q)_n - 1/(-q)_inf) = -sigma*(q) + G[sigma](q)",
            DysonInvolution => {
                "-sum_{n>=1} (H_n(1/q) - H_inf(1/q)) = sigma(q) + 2/(q;q^2)_inf (-1/2 + sum_{n>=1} q^{2n}/(1-q^{2n})), \
                 H_n the terms of sigma*"
            }
            Jackson => {
                "sum (q;q^2)_n (-1)^n q^n / (-q^2;q^2)_n = -sum q^{n^2+n} / ((-q^2;q^2)_n (1+q^{2n+1}))"
            }
            CflzW1Theta => "W1(q) = sum_{n>=0} sum_{|j|<=n} (-1)^{n+j} q^{2n^2+n-j^2} (1-q^{2n+1})",
            CflzW2Theta => "W2(q) = sum_{n>=1} sum_{-n<j<=n} (-1)^n q^{2n^2-n-j^2+j} (1+q^{2n})",
            LlTheta => "LL(q) = sum_{n>=1} sum_{-n<j<=n} (-1)^{n+j+1} q^{2n^2-j^2}",
            LEqLl => "L(-q) = LL(q)",
            SymF3 => "f3(1/q) = q f3(q)",
            SymF4 => "f4(1/q) = -f4(q)",
            SymF5F6 => "f5(1/q) = f6(q)",
            SymF7F8 => "f7(1/q) = f8(q)",
            SymL => "L(1/q) = -L(-q)",
            F1F2W1 => "f1(q^2) - q^{-1} f2(q^2) = W1(q)",
        }
    }

    /// Default parameter substitutions for parametrized identities.
    pub fn default_instances(&self) -> Vec<IdentityInstance> {
        let m = Monomial::new;
        match self {
            IdentityId::Fine63 => vec![
                IdentityInstance::Fine(FineParams::new(m(1, 1), m(1, 2), m(1, 3), 1)),
                IdentityInstance::Fine(FineParams::new(m(1, 0), m(-1, 1), m(-1, 0), 2)),
                IdentityInstance::Fine(FineParams::new(m(-1, 1), m(1, 1), m(1, 2), 1)),
            ],
            IdentityId::Entry172 => vec![
                IdentityInstance::Entry172 { a: m(-1, 0), b: m(1, 0) },
                IdentityInstance::Entry172 { a: m(-1, 1), b: m(1, 1) },
            ],
            IdentityId::Ajo => vec![
                IdentityInstance::Ajo { t: m(-1, 2), a: m(1, 3), base: 1 },
                IdentityInstance::Ajo { t: m(1, 1), a: m(-1, 2), base: 2 },
                IdentityInstance::Ajo { t: m(-1, 2), a: m(1, 3), base: 2 },
            ],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity {s}")))
    }
}

/// One parameter substitution of a parametrized identity.
#[derive(Clone, Debug, PartialEq)]
pub enum IdentityInstance {
    Fine(FineParams),
    Entry172 { a: Monomial, b: Monomial },
    Ajo { t: Monomial, a: Monomial, base: i64 },
}

impl fmt::Display for IdentityInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityInstance::Fine(p) => write!(f, "{p}"),
            IdentityInstance::Entry172 { a, b } => write!(f, "a = {a}, b = {b}"),
            IdentityInstance::Ajo { t, a, base } => write!(f, "t = {t}, a = {a}, base q^{base}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub bound: Exponent,
    /// Bound up to which both sides were actually compared.
    pub checked_bound: Exponent,
    pub pass: bool,
    pub first_mismatch: Option<Exponent>,
    pub relation: String,
    pub lhs: TruncatedQSeries,
    pub rhs: TruncatedQSeries,
    /// Whether the relation with the literally printed sign also holds.
    pub printed_holds: Option<bool>,
    pub instances: Vec<VerificationReport>,
}

impl VerificationReport {
    /// Compares two series up to `bound`.
    pub fn compare(id: &str, relation: &str, bound: Exponent, lhs: TruncatedQSeries, rhs: TruncatedQSeries) -> Self {
        let lhs = lhs.truncate(bound);
        let rhs = rhs.truncate(bound);
        let checked_bound = lhs.common_bound(&rhs);
        let first_mismatch = lhs.first_mismatch(&rhs);
        let pass = first_mismatch.is_none() && checked_bound >= bound;
        VerificationReport {
            id: id.to_string(),
            bound,
            checked_bound,
            pass,
            first_mismatch,
            relation: relation.to_string(),
            lhs,
            rhs,
            printed_holds: None,
            instances: Vec::new(),
        }
    }

    /// Combines per-instance reports.
    pub fn aggregate(id: &str, relation: &str, bound: Exponent, instances: Vec<VerificationReport>) -> Self {
        let pass = instances.iter().all(|r| r.pass);
        let first = instances.iter().find(|r| !r.pass).or(instances.first());
        let checked_bound = instances.iter().map(|r| r.checked_bound).min().unwrap_or(bound);
        VerificationReport {
            id: id.to_string(),
            bound,
            checked_bound,
            pass,
            first_mismatch: instances.iter().find_map(|r| r.first_mismatch),
            relation: relation.to_string(),
            lhs: first.map(|r| r.lhs.clone()).unwrap_or_else(|| TruncatedQSeries::zero(bound)),
            rhs: first.map(|r| r.rhs.clone()).unwrap_or_else(|| TruncatedQSeries::zero(bound)),
            printed_holds: None,
            instances,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "id": self.id,
            "bound": self.bound.to_string(),
            "checked_bound": self.checked_bound.to_string(),
            "pass": self.pass,
            "first_mismatch": self.first_mismatch.map(|e| e.to_string()),
            "relation": self.relation,
            "lhs_head": head_json(&self.lhs),
            "rhs_head": head_json(&self.rhs),
        });
        if let Some(p) = self.printed_holds {
            v["printed_holds"] = json!(p);
        }
        if !self.instances.is_empty() {
            v["instances"] = Value::Array(self.instances.iter().map(|r| r.to_json()).collect());
        }
        v
    }
}

const HEAD_TERMS: usize = 10;

fn head_json(s: &TruncatedQSeries) -> Value {
    Value::Array(
        s.terms()
            .into_iter()
            .take(HEAD_TERMS)
            .map(|(e, c)| json!([e.to_string(), rational_to_json(&c)]))
            .collect(),
    )
}

fn named(id: NamedSeriesId, bound: Exponent) -> Result<TruncatedQSeries> {
    build_series(id, bound)
}

fn fam(id: NamedSeriesId) -> SeriesFamily {
    family(id).expect("catalogued family")
}

/// Verifies an identity with its default parameter substitutions.
pub fn verify_identity(id: IdentityId, bound: Exponent) -> Result<VerificationReport> {
    verify_identity_with(id, &id.default_instances(), bound)
}

/// Verifies an identity; `instances` is used by FINE_63, ENTRY_172 and AJO only.
pub fn verify_identity_with(
    id: IdentityId,
    instances: &[IdentityInstance],
    bound: Exponent,
) -> Result<VerificationReport> {
    use IdentityId::*;
    let name = id.as_str();
    let rel = id.relation();
    if bound <= Exponent::zero() {
        let z = TruncatedQSeries::zero(Exponent::zero());
        return Ok(VerificationReport::compare(name, rel, Exponent::zero(), z.clone(), z));
    }
    let one = exp_int(1);
    let report = match id {
        Fine63 | Entry172 | Ajo => {
            let mut reps = Vec::with_capacity(instances.len());
            for inst in instances {
                let (lhs, rhs) = match (id, inst) {
                    (Fine63, IdentityInstance::Fine(p)) => fine_sides(p, bound)?,
                    (Entry172, IdentityInstance::Entry172 { a, b }) => entry_sides(a, b, bound)?,
                    (Ajo, IdentityInstance::Ajo { t, a, base }) => ajo_sides(t, a, *base, bound)?,
                    _ => return Err(Error::InvalidArgument(format!("instance {inst} does not belong to {name}"))),
                };
                reps.push(VerificationReport::compare(&format!("{name}[{inst}]"), rel, bound, lhs, rhs));
            }
            VerificationReport::aggregate(name, rel, bound, reps)
        }
        RamaSumsOfTails => {
            let (tails, _) = fam(NamedSeriesId::Sigma).tails(bound, &TailOptions::default())?;
            let rhs = named(NamedSeriesId::GhostSigma, bound)?.sub_series(&named(NamedSeriesId::SigmaStar, bound)?);
            VerificationReport::compare(name, rel, bound, tails, rhs)
        }
        DysonInvolution => {
            let (tails, _) = fam(NamedSeriesId::SigmaStar).tails(bound, &TailOptions::default())?;
            let closed = ClosedForm::product(rat(2), vec![ProductFactor::new(-1, 1, 2, -1)])
                .with_sum(BigRational::new((-1).into(), 2.into()), vec![LambertSum::new(rat(1), 1, 2, 0, -1)]);
            let rhs = named(NamedSeriesId::Sigma, bound)?.add_series(&closed.to_series(bound)?);
            VerificationReport::compare(name, rel, bound, tails.neg_series(), rhs)
        }
        Jackson => {
            let lhs = named(NamedSeriesId::SW, bound)?;
            let j = jackson_sum(bound)?;
            let mut r = VerificationReport::compare(name, rel, bound, lhs.clone(), j.neg_series());
            r.printed_holds = Some(lhs.truncate(bound).first_mismatch(&j.truncate(bound)).is_none());
            r
        }
        CflzW1Theta => VerificationReport::compare(
            name,
            rel,
            bound,
            named(NamedSeriesId::W1, bound)?,
            theta_double_sum(ThetaId::W1Theta, bound),
        ),
        CflzW2Theta => {
            let w2 = named(NamedSeriesId::W2, bound)?;
            let printed = theta_double_sum(ThetaId::W2ThetaPrinted, bound);
            let holds = w2.truncate(bound).first_mismatch(&printed.truncate(bound)).is_none();
            let mut r = VerificationReport::compare(name, rel, bound, w2, theta_double_sum(ThetaId::W2Theta, bound));
            r.printed_holds = Some(holds);
            r
        }
        LlTheta => VerificationReport::compare(
            name,
            rel,
            bound,
            named(NamedSeriesId::LL, bound)?,
            theta_double_sum(ThetaId::LLTheta, bound),
        ),
        LEqLl => VerificationReport::compare(
            name,
            rel,
            bound,
            named(NamedSeriesId::L, bound)?.negate_q()?,
            named(NamedSeriesId::LL, bound)?,
        ),
        SymF3 => {
            let t = transformed_sum(NamedSeriesId::F3, bound)?;
            let f3 = named(NamedSeriesId::F3, bound)?;
            let holds = t.truncate(bound).first_mismatch(&f3.truncate(bound)).is_none();
            let mut r = VerificationReport::compare(name, rel, bound, t, f3.shift(one));
            r.printed_holds = Some(holds);
            r
        }
        SymF4 => VerificationReport::compare(
            name,
            rel,
            bound,
            transformed_sum(NamedSeriesId::F4, bound)?,
            named(NamedSeriesId::F4, bound)?.neg_series(),
        ),
        SymF5F6 | SymF7F8 => {
            let (src, dst) = if id == SymF5F6 {
                (NamedSeriesId::F5, NamedSeriesId::F6)
            } else {
                (NamedSeriesId::F7, NamedSeriesId::F8)
            };
            let t = transformed_sum(src, bound)?;
            let target = named(dst, bound)?;
            let holds = t.truncate(bound).first_mismatch(&target.neg_series().truncate(bound)).is_none();
            let mut r = VerificationReport::compare(name, rel, bound, t, target);
            r.printed_holds = Some(holds);
            r
        }
        SymL => {
            let t = transformed_sum(NamedSeriesId::L, bound)?;
            let lm = named(NamedSeriesId::L, bound)?.negate_q()?;
            let holds = t.truncate(bound).first_mismatch(&lm.truncate(bound)).is_none();
            let mut r = VerificationReport::compare(name, rel, bound, t, lm.neg_series());
            r.printed_holds = Some(holds);
            r
        }
        F1F2W1 => {
            let half = |b: Exponent| (b / exp_int(2)).ceil();
            let f1 = named(NamedSeriesId::F1, half(bound))?.subst_power(2);
            let f2 = named(NamedSeriesId::F2, half(bound + one))?.subst_power(2).shift(-one);
            VerificationReport::compare(name, rel, bound, f1.sub_series(&f2), named(NamedSeriesId::W1, bound)?)
        }
    };
    Ok(report)
}

/// `sum_n H_n(q^{-1})` for a catalogued family.
fn transformed_sum(id: NamedSeriesId, bound: Exponent) -> Result<TruncatedQSeries> {
    Ok(fam(id).transformed()?.sum(bound)?.0)
}

/// `sum q^{n^2+n} / ((-q^2;q^2)_n (1+q^{2n+1}))`.
fn jackson_sum(bound: Exponent) -> Result<TruncatedQSeries> {
    let start = QProductExpr::one().factor(rat(1), exp_int(1), -1);
    let ratio = RatioSpec::new(1, 2, 2).with(1, 1, 2, 1).with(1, 2, 2, -1).with(1, 3, 2, -1);
    Ok(sum_family(&start, &ratio, 0, bound)?.0)
}

/// `(1 - x)^e`.
fn one_minus(x: &Monomial, e: i32) -> QProductExpr {
    QProductExpr::one().factor(-x.c.clone(), x.e, e)
}

fn fine_sides(p: &FineParams, bound: Exponent) -> Result<(TruncatedQSeries, TruncatedQSeries)> {
    if p.b.is_zero() {
        return Err(Error::InvalidArgument("the transformation needs b != 0".into()));
    }
    let lhs = fine_f_regularized(p, bound)?;
    let inner = FineParams::new(p.a.times(&p.t).times(&p.b.recip()), p.t.clone(), p.b.clone(), p.base);
    let pre = one_minus(&p.b, 1).times(&one_minus(&p.t, -1)).normalize()?;
    let pre_val = pre.valuation()?.unwrap_or(Exponent::zero()).min(Exponent::zero());
    let inner_s = fine_f_regularized(&inner, bound - pre_val)?;
    let inner_val = inner_s.valuation().unwrap_or(Exponent::zero()).min(Exponent::zero());
    let rhs = pre.to_series(bound - inner_val)?.mul_series(&inner_s);
    Ok((lhs, rhs))
}

fn entry_sides(a: &Monomial, b: &Monomial, bound: Exponent) -> Result<(TruncatedQSeries, TruncatedQSeries)> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("the identity needs b != 0".into()));
    }
    if b.e < Exponent::zero() {
        return Err(Error::NonConvergentParameters(format!("b = {b} has a negative exponent")));
    }
    let ab = &a.c / &b.c;
    let u = a.e - b.e + exp_int(1);
    // LHS: H_0 = 1/(1+b), H_{n+1}/H_n = -b q^{n+1} (1 + (a/b) q^{u+n}) / (1 + b q^{e_b+n+1})
    let l_start = QProductExpr::one().factor(b.c.clone(), b.e, -1);
    let l_ratio = RatioSpec { coeff: -&b.c, alpha: b.e + exp_int(1), beta: exp_int(1), factors: Vec::new() }
        .with_rational(ab.clone(), u, exp_int(1), 1)
        .with_rational(b.c.clone(), b.e + exp_int(1), exp_int(1), -1);
    let lhs = sum_family(&l_start.normalize()?, &l_ratio, 0, bound)?.0;
    // RHS: (-b)^n c_n with c_n = (-q)_n (-aq/b)_n / (aq;q^2)_{n+1}
    let c_start = one_minus(&Monomial { c: a.c.clone(), e: a.e + exp_int(1) }, -1).normalize()?;
    let c_ratio = RatioSpec::new(1, 0, 0)
        .with(1, 1, 1, 1)
        .with_rational(ab.clone(), u, exp_int(1), 1)
        .with_rational(-a.c.clone(), a.e + exp_int(3), exp_int(2), -1);
    let rhs = if b.e > Exponent::zero() {
        let mut r = c_ratio;
        r.coeff = -&b.c;
        r.alpha = b.e;
        sum_family(&c_start, &r, 0, bound)?.0
    } else {
        if (!a.is_zero() && a.e + exp_int(1) <= Exponent::zero()) || (!ab.is_zero() && u <= Exponent::zero()) {
            return Err(Error::NonConvergentParameters(format!("a = {a}, b = {b}: limit is not expandable")));
        }
        let c_inf = ClosedForm::product(
            rat(1),
            vec![
                ProductFactor::new(1, 1, 1, 1),
                ProductFactor { c: ab.clone(), start: u, step: exp_int(1), e: 1 },
                ProductFactor { c: -a.c.clone(), start: a.e + exp_int(1), step: exp_int(2), e: -1 },
            ],
        );
        let (ae, ab_zero, a_zero) = (a.e, ab.is_zero(), a.is_zero());
        let diff_lb = move |n: u64| {
            let n = exp_int(n as i64);
            let mut v = n + exp_int(1);
            if !ab_zero {
                v = v.min(u + n);
            }
            if !a_zero {
                v = v.min(ae + exp_int(3) + exp_int(2) * n);
            }
            Some(v)
        };
        abel_sum(&c_start, &c_ratio, &c_inf, diff_lb, &(-&b.c), bound)?
    };
    Ok((lhs, rhs))
}

fn ajo_sides(t: &Monomial, a: &Monomial, base: i64, bound: Exponent) -> Result<(TruncatedQSeries, TruncatedQSeries)> {
    if base < 1 || t.is_zero() || a.is_zero() {
        return Err(Error::InvalidArgument("the identity needs nonzero t, a and a positive base".into()));
    }
    if t.e <= Exponent::zero() || a.e <= Exponent::zero() {
        return Err(Error::NonConvergentParameters(format!("t = {t}, a = {a}: exponents must be positive")));
    }
    let k = exp_int(base);
    let p_inf = ClosedForm::product(
        rat(1),
        vec![
            ProductFactor { c: -t.c.clone(), start: t.e, step: k, e: 1 },
            ProductFactor { c: -a.c.clone(), start: a.e, step: k, e: -1 },
        ],
    )
    .to_series(bound)?;
    // val(P_inf - R_n) >= k n + min(e_t, e_a)
    let r_ratio = RatioSpec { coeff: rat(1), alpha: Exponent::zero(), beta: Exponent::zero(), factors: Vec::new() }
        .with_rational(-t.c.clone(), t.e, k, 1)
        .with_rational(-a.c.clone(), a.e, k, -1);
    let m = t.e.min(a.e);
    let mut count: i64 = 0;
    while k * exp_int(count) + m < bound {
        count += 1;
    }
    let partial = partial_sum(&QProductExpr::one(), &r_ratio, 0, count as u64, bound)?;
    let lhs = p_inf.scale(&rat(count)).sub_series(&partial);

    let qa = Monomial { c: a.c.recip(), e: k - a.e };
    let qt = Monomial { c: t.c.recip(), e: k - t.e };
    let at = a.times(&t.recip());
    let s1_start = at.to_expr().times(&one_minus(&qa, 1)).times(&one_minus(&qt, -1));
    let s1_ratio = RatioSpec { coeff: at.c.clone(), alpha: at.e, beta: Exponent::zero(), factors: Vec::new() }
        .with_rational(-qa.c.clone(), qa.e, k, 1)
        .with_rational(-qt.c.clone(), qt.e, k, -1);
    let s1 = sum_family(&s1_start.normalize()?, &s1_ratio, 1, bound)?.0;

    // sum_{n >= n0} x q^{kn} / (1 - x q^{kn})
    let lambert = |x: &Monomial, n0: u64| -> Result<TruncatedQSeries> {
        let x0 = Monomial { c: x.c.clone(), e: x.e + k * exp_int(n0 as i64) };
        let start = x0.to_expr().times(&one_minus(&x0, -1));
        let ratio = RatioSpec { coeff: rat(1), alpha: k, beta: Exponent::zero(), factors: Vec::new() }
            .with_rational(-x.c.clone(), x.e, k, 1)
            .with_rational(-x.c.clone(), x.e + k, k, -1);
        Ok(sum_family(&start.normalize()?, &ratio, n0, bound)?.0)
    };
    let lambda = lambert(&Monomial::new(1, 0), 1)?
        .add_series(&lambert(&t.recip(), 1)?)
        .sub_series(&lambert(t, 0)?)
        .sub_series(&lambert(&at, 0)?);
    let rhs = s1.add_series(&p_inf.mul_series(&lambda));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> Exponent {
        exp_int(n)
    }

    #[test]
    fn vacuous_bound_passes() {
        for id in IdentityId::ALL {
            assert!(verify_identity(id, Exponent::zero()).unwrap().pass);
        }
    }

    #[test]
    fn every_identity_holds() {
        for id in IdentityId::ALL {
            let r = verify_identity(id, b(60)).unwrap();
            assert!(r.pass, "{id} failed at {:?}", r.first_mismatch);
        }
    }

    #[test]
    fn printed_sign_variants_are_reported() {
        for id in [
            IdentityId::Jackson,
            IdentityId::CflzW2Theta,
            IdentityId::SymF3,
            IdentityId::SymF5F6,
            IdentityId::SymF7F8,
            IdentityId::SymL,
        ] {
            assert_eq!(verify_identity(id, b(40)).unwrap().printed_holds, Some(false), "{id}");
        }
    }

    #[test]
    fn ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("NOPE".parse::<IdentityId>().is_err());
    }

    #[test]
    fn foreign_instance_is_rejected() {
        let inst = IdentityId::Ajo.default_instances();
        assert!(verify_identity_with(IdentityId::Fine63, &inst, b(10)).is_err());
    }

    #[test]
    fn json_shape() {
        let v = verify_identity(IdentityId::LEqLl, b(20)).unwrap().to_json();
        for key in ["id", "bound", "pass", "first_mismatch", "lhs_head", "rhs_head"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
