//! Fine's basic hypergeometric series `F(a, b; t : q^k)` with monomial parameters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::closed::{ClosedForm, ProductFactor};
use super::engine::{partial_sum, sum_family, RatioSpec};
use crate::error::{Error, Result};
use crate::expr::{exp_int, rat, QProductExpr};
use crate::series::{Exponent, TruncatedQSeries};

/// `c q^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub c: BigRational,
    pub e: Exponent,
}

impl Monomial {
    pub fn new(c: i64, e: i64) -> Self {
        Monomial { c: rat(c), e: exp_int(e) }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn times(&self, o: &Monomial) -> Monomial {
        Monomial { c: &self.c * &o.c, e: self.e + o.e }
    }

    pub fn recip(&self) -> Monomial {
        Monomial { c: self.c.recip(), e: -self.e }
    }

    pub fn to_expr(&self) -> QProductExpr {
        QProductExpr::monomial(self.c.clone(), self.e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            return write!(f, "{}", self.c);
        }
        let c = if self.c.is_one() {
            String::new()
        } else if (-&self.c).is_one() {
            "-".to_string()
        } else {
            format!("{}*", self.c)
        };
        if self.e.is_one() {
            write!(f, "{c}q")
        } else {
            write!(f, "{c}q^{}", self.e)
        }
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Accepts forms like `-q^2`, `q`, `3/2*q^(1/2)`, `-1`, `0`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad monomial {s}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(qpos) = t.find('q') else {
            return Ok(Monomial { c: parse_rational(&t).ok_or_else(bad)?, e: Exponent::zero() });
        };
        let head = t[..qpos].trim_end_matches('*');
        let c = match head {
            "" | "+" => rat(1),
            "-" => rat(-1),
            h => parse_rational(h).ok_or_else(bad)?,
        };
        let tail = &t[qpos + 1..];
        let e = if tail.is_empty() {
            exp_int(1)
        } else {
            let p = tail.strip_prefix('^').ok_or_else(bad)?;
            let p = p.trim_start_matches('(').trim_end_matches(')');
            match p.split_once('/') {
                Some((n, d)) => {
                    let d: i64 = d.parse().map_err(|_| bad())?;
                    if d == 0 {
                        return Err(bad());
                    }
                    Exponent::new(n.parse().map_err(|_| bad())?, d)
                }
                None => exp_int(p.parse().map_err(|_| bad())?),
            }
        };
        Ok(Monomial { c, e })
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Parameters of `F(a, b; t : q^base) = sum_n (a q^base; q^base)_n / (b q^base; q^base)_n t^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FineParams {
    pub a: Monomial,
    pub b: Monomial,
    pub t: Monomial,
    pub base: i64,
}

impl FineParams {
    pub fn new(a: Monomial, b: Monomial, t: Monomial, base: i64) -> Self {
        FineParams { a, b, t, base }
    }

    fn k(&self) -> Exponent {
        exp_int(self.base)
    }

    fn validate(&self) -> Result<()> {
        if self.base < 1 {
            return Err(Error::InvalidArgument("base exponent must be positive".into()));
        }
        if !self.b.is_zero() && self.b.e + self.k() <= Exponent::zero() {
            return Err(Error::NonConvergentParameters(format!(
                "denominator (b q^{}; q^{})_n has a non-positive exponent for b = {}",
                self.base, self.base, self.b
            )));
        }
        if self.t.is_zero() {
            return Err(Error::NonConvergentParameters("t = 0".into()));
        }
        Ok(())
    }

    /// Ratio `c_{n+1}/c_n` of the Pochhammer quotient (without `t`).
    fn coeff_ratio(&self, t: &Monomial) -> RatioSpec {
        let k = self.k();
        let mut r = RatioSpec { coeff: t.c.clone(), alpha: t.e, beta: Exponent::zero(), factors: Vec::new() };
        if !self.a.is_zero() {
            r = r.with_rational(-&self.a.c, self.a.e + k, k, 1);
        }
        if !self.b.is_zero() {
            r = r.with_rational(-&self.b.c, self.b.e + k, k, -1);
        }
        r
    }

    /// `(a q^k; q^k)_inf / (b q^k; q^k)_inf`.
    fn infinite_quotient(&self) -> ClosedForm {
        let k = self.k();
        let mut p = Vec::new();
        if !self.a.is_zero() {
            p.push(ProductFactor { c: -&self.a.c, start: self.a.e + k, step: k, e: 1 });
        }
        if !self.b.is_zero() {
            p.push(ProductFactor { c: -&self.b.c, start: self.b.e + k, step: k, e: -1 });
        }
        ClosedForm::product(rat(1), p)
    }
}

impl fmt::Display for FineParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}, {}; {} : q^{})", self.a, self.b, self.t, self.base)
    }
}

/// `F(a, b; t : q^base)` modulo `q^bound`; rejects parameters whose terms do not shrink.
pub fn fine_f(p: &FineParams, bound: Exponent) -> Result<TruncatedQSeries> {
    p.validate()?;
    Ok(sum_family(&QProductExpr::one(), &p.coeff_ratio(&p.t), 0, bound)?.0)
}

/// Like [`fine_f`], but for `t` a constant `!= 1` uses the Abel-regularized value
/// `sum t^n (c_n - c_inf) + c_inf / (1 - t)`.
pub fn fine_f_regularized(p: &FineParams, bound: Exponent) -> Result<TruncatedQSeries> {
    p.validate()?;
    if p.t.e != Exponent::zero() {
        return fine_f(p, bound);
    }
    match fine_f(p, bound) {
        Ok(s) => return Ok(s),
        Err(Error::NonConvergentParameters(_)) => {}
        Err(e) => return Err(e),
    }
    let k = p.k();
    let mut m: Option<Exponent> = None;
    for x in [&p.a, &p.b] {
        if !x.is_zero() {
            if x.e + k <= Exponent::zero() {
                return Err(Error::NonConvergentParameters(format!("{p}: infinite product is not expandable")));
            }
            m = Some(m.map_or(x.e, |v: Exponent| v.min(x.e)));
        }
    }
    let c_ratio = p.coeff_ratio(&Monomial { c: rat(1), e: Exponent::zero() });
    // val(c_n - c_inf) >= k (n + 1) + m
    let diff_lb = move |n: u64| m.map(|m| k * exp_int(n as i64 + 1) + m);
    abel_sum(&QProductExpr::one(), &c_ratio, &p.infinite_quotient(), diff_lb, &p.t.c, bound)
}

/// `sum_{n >= 0} tau^n c_n` regularized as `sum tau^n (c_n - c_inf) + c_inf / (1 - tau)`.
///
/// `diff_lb(n)` bounds the valuation of `c_n - c_inf` from below (`None`: identically zero).
pub(crate) fn abel_sum(
    c_start: &QProductExpr,
    c_ratio: &RatioSpec,
    c_inf: &ClosedForm,
    diff_lb: impl Fn(u64) -> Option<Exponent>,
    tau: &BigRational,
    bound: Exponent,
) -> Result<TruncatedQSeries> {
    if tau.is_one() {
        return Err(Error::NonConvergentParameters("Abel regularization needs t != 1".into()));
    }
    let mut count = 0u64;
    while diff_lb(count).is_some_and(|v| v < bound) {
        count += 1;
        if count > 1_000_000 {
            return Err(Error::NonConvergentParameters("regularized tail does not shrink".into()));
        }
    }
    let mut ratio = c_ratio.clone();
    ratio.coeff *= tau;
    let head = partial_sum(c_start, &ratio, 0, count, bound)?;
    let inf = c_inf.to_series(bound)?;
    // sum_{n < N} tau^n = (1 - tau^N) / (1 - tau)
    let mut tn = BigRational::one();
    for _ in 0..count {
        tn *= tau;
    }
    let one_minus = BigRational::one() - tau;
    let geometric = (BigRational::one() - &tn) / &one_minus;
    let correction = one_minus.recip() - geometric;
    Ok(head.add_series(&inf.scale(&correction)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn b(n: i64) -> Exponent {
        exp_int(n)
    }

    #[test]
    fn monomial_parsing() {
        assert_eq!(m("-q^2"), Monomial::new(-1, 2));
        assert_eq!(m("q"), Monomial::new(1, 1));
        assert_eq!(m("-1"), Monomial::new(-1, 0));
        assert_eq!(m("3/2*q^(1/2)"), Monomial { c: BigRational::new(3.into(), 2.into()), e: Exponent::new(1, 2) });
        assert!("q^".parse::<Monomial>().is_err());
    }

    #[test]
    fn trivial_parameters_give_geometric_series() {
        let s = fine_f(&FineParams::new(m("0"), m("0"), m("q"), 1), b(20)).unwrap();
        assert_eq!(s.head_i64(20), vec![1; 20]);
    }

    #[test]
    fn constant_t_is_rejected() {
        let err = fine_f(&FineParams::new(m("1"), m("-q"), m("-1"), 2), b(20)).unwrap_err();
        assert!(matches!(err, Error::NonConvergentParameters(_)));
    }

    #[test]
    fn fine_transformation_holds_for_positive_parameters() {
        // F(a,b;t) = (1-b)/(1-t) F(at/b, t; b) at (q, q^2, q^3)
        let (a, bb, t) = (m("q"), m("q^2"), m("q^3"));
        let lhs = fine_f(&FineParams::new(a.clone(), bb.clone(), t.clone(), 1), b(40)).unwrap();
        let inner = fine_f(&FineParams::new(a.times(&t).times(&bb.recip()), t.clone(), bb.clone(), 1), b(40)).unwrap();
        let pre = QProductExpr::one().factor(-bb.c.clone(), bb.e, 1).factor(-t.c.clone(), t.e, -1);
        let rhs = pre.to_series(b(40)).unwrap().mul_series(&inner);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn regularization_of_alternating_constant_terms() {
        // c_n = 1 for all n, t = -1: Abel value 1/2
        let s = fine_f_regularized(&FineParams::new(m("0"), m("0"), m("-1"), 1), b(10)).unwrap();
        assert_eq!(s, TruncatedQSeries::monomial(BigRational::new(1.into(), 2.into()), Exponent::zero(), b(10)));
    }
}
