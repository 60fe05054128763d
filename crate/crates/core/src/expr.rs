//! Symbolic terms `c * q^a * prod (1 + c_i q^{m_i})^{e_i}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mp::{MpComplex, MpReal};
use crate::series::{lcm, mul_binomial, Exponent, TruncatedQSeries};

/// `(1 + c q^m)^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub c: BigRational,
    pub m: Exponent,
    pub e: i32,
}

impl Factor {
    pub fn new(c: BigRational, m: Exponent, e: i32) -> Self {
        Factor { c, m, e }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 + ({})q^({}))^{}", self.c, self.m, self.e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QProductExpr {
    pub coeff: BigRational,
    pub exp: Exponent,
    pub factors: Vec<Factor>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn exp_int(n: i64) -> Exponent {
    Exponent::from_integer(n)
}

fn rat_pow(c: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= c;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl QProductExpr {
    pub fn monomial(coeff: BigRational, exp: Exponent) -> Self {
        QProductExpr { coeff, exp, factors: Vec::new() }
    }

    pub fn one() -> Self {
        QProductExpr::monomial(BigRational::one(), Exponent::zero())
    }

    pub fn constant(c: BigRational) -> Self {
        QProductExpr::monomial(c, Exponent::zero())
    }

    /// `c * q^k` with integer data.
    pub fn mono(c: i64, k: i64) -> Self {
        QProductExpr::monomial(rat(c), exp_int(k))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Multiplies by `(1 + c q^m)^e`.
    pub fn factor(mut self, c: BigRational, m: Exponent, e: i32) -> Self {
        if e != 0 {
            self.factors.push(Factor::new(c, m, e));
        }
        self
    }

    /// Multiplies by `(a q^s; q^base)_n^e = prod_{k<n} (1 - a q^{s + k base})^e`.
    pub fn poch(mut self, a: &BigRational, s: Exponent, base: Exponent, n: u64, e: i32) -> Self {
        for k in 0..n {
            let m = s + base * exp_int(k as i64);
            self = self.factor(-a, m, e);
        }
        self
    }

    /// Integer-parameter shorthand for `(a q^s; q^base)_n^e`.
    pub fn qpoch(self, a: i64, s: i64, base: i64, n: u64, e: i32) -> Self {
        self.poch(&rat(a), exp_int(s), exp_int(base), n, e)
    }

    pub fn times(&self, other: &QProductExpr) -> Self {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        QProductExpr { coeff: &self.coeff * &other.coeff, exp: self.exp + other.exp, factors: f }
    }

    pub fn scaled(mut self, c: &BigRational) -> Self {
        self.coeff *= c;
        self
    }

    pub fn shifted(mut self, e: Exponent) -> Self {
        self.exp += e;
        self
    }

    /// Reciprocal; errors on a zero expression.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::PoleAtPoint("reciprocal of zero expression".into()));
        }
        Ok(QProductExpr {
            coeff: self.coeff.recip(),
            exp: -self.exp,
            factors: self.factors.iter().map(|f| Factor::new(f.c.clone(), f.m, -f.e)).collect(),
        })
    }

    /// Common denominator of every exponent in the expression.
    pub fn grid(&self) -> i64 {
        self.factors.iter().fold(*self.exp.denom(), |g, f| lcm(g, *f.m.denom()))
    }

    /// Absorbs constant factors and negative-exponent factors into the prefactor
    /// (inverted ones only when `absorb_inverted`).
    fn absorb(&self, absorb_inverted: bool) -> Result<QProductExpr> {
        let mut out = QProductExpr::monomial(self.coeff.clone(), self.exp);
        for f in &self.factors {
            if f.c.is_zero() {
                continue;
            }
            if f.m.is_zero() {
                let base = BigRational::one() + &f.c;
                if base.is_zero() {
                    if f.e > 0 {
                        return Ok(QProductExpr::monomial(BigRational::zero(), self.exp));
                    }
                    return Err(Error::PoleAtPoint(format!("constant factor {f} vanishes")));
                }
                out.coeff *= rat_pow(&base, f.e);
            } else if f.m < Exponent::zero() && (f.e > 0 || absorb_inverted) {
                out.coeff *= rat_pow(&f.c, f.e);
                out.exp += f.m * exp_int(f.e as i64);
                out.factors.push(Factor::new(f.c.recip(), -f.m, f.e));
            } else {
                out.factors.push(f.clone());
            }
        }
        if out.coeff.is_zero() {
            out.factors.clear();
        }
        Ok(out)
    }

    /// Normal form: every factor has positive exponent; factors sorted and merged.
    pub fn normalize(&self) -> Result<QProductExpr> {
        let mut out = self.absorb(true)?;
        out.factors.sort_by(|a, b| a.m.cmp(&b.m).then_with(|| a.c.cmp(&b.c)));
        let mut merged: Vec<Factor> = Vec::with_capacity(out.factors.len());
        for f in out.factors {
            match merged.last_mut() {
                Some(last) if last.m == f.m && last.c == f.c => last.e += f.e,
                _ => merged.push(f),
            }
        }
        merged.retain(|f| f.e != 0);
        out.factors = merged;
        Ok(out)
    }

    /// Valuation of the normalized expression (its prefactor exponent), `None` if zero.
    pub fn valuation(&self) -> Result<Option<Exponent>> {
        let n = self.normalize()?;
        Ok(if n.is_zero() { None } else { Some(n.exp) })
    }

    /// Whether every inverted factor has a positive exponent.
    pub fn is_expandable(&self) -> bool {
        self.factors.iter().all(|f| f.e > 0 || f.c.is_zero() || f.m > Exponent::zero())
    }

    /// `x(q^{-1})` in normal form.
    pub fn subst_qinv(&self) -> Result<QProductExpr> {
        let mut out = QProductExpr::monomial(self.coeff.clone(), -self.exp);
        for f in &self.factors {
            if f.c.is_zero() && f.m > Exponent::zero() {
                return Err(Error::ZeroFactorCoefficient);
            }
            out.factors.push(Factor::new(f.c.clone(), -f.m, f.e));
        }
        out.normalize()
    }

    /// Substitution `q -> q^k`.
    pub fn subst_power(&self, k: i64) -> QProductExpr {
        let kk = exp_int(k);
        QProductExpr {
            coeff: self.coeff.clone(),
            exp: self.exp * kk,
            factors: self.factors.iter().map(|f| Factor::new(f.c.clone(), f.m * kk, f.e)).collect(),
        }
    }

    /// Exact expansion modulo `q^bound`.
    pub fn to_series(&self, bound: Exponent) -> Result<TruncatedQSeries> {
        if let Some(f) = self.factors.iter().find(|f| f.e < 0 && !f.c.is_zero() && f.m <= Exponent::zero()) {
            return Err(Error::NotExpandable(f.to_string()));
        }
        let x = self.absorb(false)?;
        let grid = lcm(x.grid(), *bound.denom());
        let b = (bound * grid).to_integer();
        if x.is_zero() {
            return Ok(TruncatedQSeries::zero_on_grid(grid, b));
        }
        let o = (x.exp * grid).to_integer();
        let len = (b - o).max(0) as usize;
        let mut v = vec![BigRational::zero(); len];
        if len > 0 {
            v[0] = x.coeff.clone();
        }
        for f in &x.factors {
            let m = (f.m * grid).to_integer();
            mul_binomial(&mut v, &f.c, m as usize, f.e);
        }
        Ok(TruncatedQSeries::from_parts(grid, o, v, b))
    }

    /// High-precision value at a point `q`.
    pub fn eval(&self, q: &QPoint) -> Result<MpComplex> {
        let p = q.precision();
        let mut pole = None;
        let mut vanishes = false;
        let mut acc = MpComplex::from_real(MpReal::from_ratio(&self.coeff, p));
        acc = &acc * &q.pow(&self.exp);
        for f in &self.factors {
            let term = &MpComplex::one(p) + &q.pow(&f.m).scale(&MpReal::from_ratio(&f.c, p));
            if q.factor_vanishes(f, &term) {
                if f.e < 0 {
                    pole = Some(f.clone());
                } else {
                    vanishes = true;
                }
                continue;
            }
            acc = &acc * &term.powi(f.e as i64);
        }
        if let Some(f) = pole {
            return Err(Error::PoleAtPoint(format!("inverted factor {f} vanishes")));
        }
        if vanishes || self.coeff.is_zero() {
            return Ok(MpComplex::zero(p));
        }
        Ok(acc)
    }

    /// Exact value at a nonzero rational `q`; all exponents must be integers.
    /// A vanishing inverted factor is a pole even if another factor also vanishes.
    pub fn eval_rational(&self, q: &BigRational) -> Result<BigRational> {
        if q.is_zero() {
            return Err(Error::InvalidArgument("exact evaluation needs q != 0".into()));
        }
        let int_pow = |m: &Exponent| -> Result<BigRational> {
            if !m.is_integer() {
                return Err(Error::InvalidArgument(format!("exponent {m} is not an integer")));
            }
            let k = m.to_integer();
            let k = i32::try_from(k).map_err(|_| Error::InvalidArgument(format!("exponent {k} too large")))?;
            Ok(rat_pow(q, k))
        };
        let mut acc = &self.coeff * int_pow(&self.exp)?;
        let mut vanishes = false;
        for f in &self.factors {
            let base = BigRational::one() + &f.c * int_pow(&f.m)?;
            if base.is_zero() {
                if f.e < 0 {
                    return Err(Error::PoleAtPoint(format!("inverted factor {f} vanishes")));
                }
                vanishes = true;
            } else {
                acc *= rat_pow(&base, f.e);
            }
        }
        Ok(if vanishes { BigRational::zero() } else { acc })
    }
}

impl fmt::Display for QProductExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*q^({})", self.coeff, self.exp)?;
        for x in &self.factors {
            write!(f, "*{x}")?;
        }
        Ok(())
    }
}

/// Argument of `q` measured in turns.
#[derive(Clone, Debug)]
pub enum Turns {
    Exact(Exponent),
    Approx(MpReal),
}

/// A point `q = r e^{2 pi i t}` with `r > 0`.
#[derive(Clone, Debug)]
pub struct QPoint {
    radius: Option<MpReal>,
    turns: Turns,
    prec: usize,
}

impl QPoint {
    /// `e^{2 pi i x}`.
    pub fn root_of_unity(x: Exponent, prec: usize) -> Self {
        QPoint { radius: None, turns: Turns::Exact(x), prec }
    }

    /// `r e^{2 pi i x}`.
    pub fn polar(r: MpReal, x: Exponent, prec: usize) -> Self {
        QPoint { radius: Some(r), turns: Turns::Exact(x), prec }
    }

    /// Principal-branch point for a nonzero complex number.
    pub fn complex(z: &MpComplex) -> Self {
        let prec = z.precision();
        let two_pi = MpReal::pi(prec) * MpReal::from_i64(2, prec);
        QPoint { radius: Some(z.abs()), turns: Turns::Approx(z.arg() / two_pi), prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn turns(&self) -> &Turns {
        &self.turns
    }

    /// `q^m` with `q^m = r^m e^{2 pi i t m}`.
    pub fn pow(&self, m: &Exponent) -> MpComplex {
        let p = self.prec;
        let phase = match &self.turns {
            Turns::Exact(t) => MpComplex::cis_turns(&(t * m), p),
            Turns::Approx(t) => {
                let two_pi = MpReal::pi(p) * MpReal::from_i64(2, p);
                MpComplex::cis(&(two_pi * t * MpReal::from_ratio64(m, p)))
            }
        };
        match &self.radius {
            None => phase,
            Some(r) => {
                if m.is_zero() {
                    phase
                } else {
                    let mag = (r.ln() * MpReal::from_ratio64(m, p)).exp();
                    phase.scale(&mag)
                }
            }
        }
    }

    /// Whether `1 + c q^m` vanishes; exact on the unit circle with rational argument.
    fn factor_vanishes(&self, f: &Factor, value: &MpComplex) -> bool {
        if let (None, Turns::Exact(t)) = (&self.radius, &self.turns) {
            if f.c.is_integer() && f.c.numer().abs().is_one() {
                let target = if f.c.is_positive() { Exponent::new(1, 2) } else { Exponent::zero() };
                let a = t * f.m - target;
                return a.is_integer();
            }
            return false;
        }
        let tol = MpReal::from_f64(2f64.powi(-((self.prec as i32) - 24).min(1000)), self.prec);
        value.abs() < tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::digits_to_bits;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    #[test]
    fn expands_simple_quotient() {
        let x = QProductExpr::mono(1, 2).factor(rat(1), e(1, 1), -1);
        let s = x.to_series(e(8, 1)).unwrap();
        assert_eq!(s.head_i64(8), vec![0, 0, 1, -1, 1, -1, 1, -1]);
    }

    #[test]
    fn w_term_one() {
        // (-1; q^2)_1 (-1) q / (q; q^2)_1 = -2q/(1-q)
        let x = QProductExpr::mono(-1, 1).qpoch(-1, 0, 2, 1, 1).qpoch(1, 1, 2, 1, -1);
        assert_eq!(x.to_series(e(6, 1)).unwrap().head_i64(6), vec![0, -2, -2, -2, -2, -2]);
    }

    #[test]
    fn pole_wins_over_zero() {
        let x = QProductExpr::one().factor(rat(-1), e(-2, 1), 1).factor(rat(-1), e(-2, 1), -2);
        assert!(matches!(x.eval_rational(&rat(-1)), Err(Error::PoleAtPoint(_))));
        let y = QProductExpr::one().factor(rat(-1), e(-2, 1), 1);
        assert_eq!(y.eval_rational(&rat(-1)).unwrap(), rat(0));
    }

    #[test]
    fn inverted_nonpositive_factor_rejected() {
        let x = QProductExpr::one().factor(rat(1), e(-1, 1), -1);
        assert!(matches!(x.to_series(e(5, 1)), Err(Error::NotExpandable(_))));
        let y = QProductExpr::one().factor(rat(2), e(0, 1), -1);
        assert!(matches!(y.to_series(e(5, 1)), Err(Error::NotExpandable(_))));
    }

    #[test]
    fn sigma_term_inverts_to_pochhammer() {
        let n = 4;
        let t = QProductExpr::mono(1, n * (n + 1) / 2).qpoch(-1, 1, 1, n as u64, -1);
        let inv = t.subst_qinv().unwrap();
        let expect = QProductExpr::one().qpoch(-1, 1, 1, n as u64, -1).normalize().unwrap();
        assert_eq!(inv, expect);
    }

    #[test]
    fn w_term_inverts() {
        for n in 1..6u64 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let t = QProductExpr::mono(sign, n as i64).qpoch(-1, 0, 2, n, 1).qpoch(1, 1, 2, n, -1);
            let inv = t.subst_qinv().unwrap();
            let expect = QProductExpr::one().qpoch(-1, 0, 2, n, 1).qpoch(1, 1, 2, n, -1).normalize().unwrap();
            assert_eq!(inv, expect, "n = {n}");
        }
    }

    #[test]
    fn qinv_is_involution() {
        let t = QProductExpr::monomial(rat(3), e(5, 2))
            .factor(BigRational::new(2.into(), 3.into()), e(1, 1), 1)
            .factor(rat(-1), e(3, 2), -1);
        let n = t.normalize().unwrap();
        assert_eq!(n.subst_qinv().unwrap().subst_qinv().unwrap(), n);
    }

    #[test]
    fn zero_coefficient_rejected_by_qinv() {
        let t = QProductExpr::one().factor(rat(0), e(2, 1), 1);
        assert_eq!(t.subst_qinv().unwrap_err(), Error::ZeroFactorCoefficient);
    }

    #[test]
    fn evaluates_at_one() {
        let p = digits_to_bits(30);
        let x = QProductExpr::mono(1, 2).factor(rat(1), e(1, 1), -1);
        let v = x.eval(&QPoint::root_of_unity(e(0, 1), p)).unwrap();
        assert!((v.re.to_f64() - 0.5).abs() < 1e-25 && v.im.to_f64().abs() < 1e-25);
    }

    #[test]
    fn pole_detected_exactly() {
        let p = digits_to_bits(30);
        let x = QProductExpr::mono(1, 3).qpoch(-1, 1, 1, 2, -1);
        let r = x.eval(&QPoint::root_of_unity(e(1, 2), p));
        assert!(matches!(r, Err(Error::PoleAtPoint(_))));
    }

    #[test]
    fn w_terms_finite_at_order_four() {
        let p = digits_to_bits(30);
        let q = QPoint::root_of_unity(e(1, 4), p);
        for n in 1..=50u64 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let t = QProductExpr::mono(sign, n as i64).qpoch(-1, 0, 2, n, 1).qpoch(1, 1, 2, n, -1);
            assert!(t.eval(&q).is_ok(), "n = {n}");
        }
    }
}
