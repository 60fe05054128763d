//! Exact truncated Laurent/Puiseux series in `q` with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Rational exponent of `q`.
pub type Exponent = Ratio<i64>;

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// A series `sum c_i q^{(o+i)/d}` known strictly below `q^{B/d}`.
#[derive(Clone, Debug)]
pub struct TruncatedQSeries {
    grid: i64,
    offset: i64,
    coeffs: Vec<BigRational>,
    bound: i64,
}

impl TruncatedQSeries {
    /// Builds a series on grid `d`; coefficients at or above the bound are dropped.
    pub fn from_parts(grid: i64, offset: i64, coeffs: Vec<BigRational>, bound: i64) -> Self {
        assert!(grid >= 1, "grid denominator must be positive");
        let mut s = TruncatedQSeries { grid, offset, coeffs, bound };
        s.canonicalize();
        s
    }

    pub fn zero_on_grid(grid: i64, bound: i64) -> Self {
        TruncatedQSeries::from_parts(grid, bound, Vec::new(), bound)
    }

    pub fn zero(bound: Exponent) -> Self {
        TruncatedQSeries::zero_on_grid(*bound.denom(), *bound.numer())
    }

    pub fn one(bound: Exponent) -> Self {
        TruncatedQSeries::monomial(BigRational::one(), Exponent::zero(), bound)
    }

    pub fn monomial(c: BigRational, e: Exponent, bound: Exponent) -> Self {
        let grid = lcm(*e.denom(), *bound.denom());
        let o = (e * grid).to_integer();
        let b = (bound * grid).to_integer();
        TruncatedQSeries::from_parts(grid, o, vec![c], b)
    }

    /// Integer power series `sum c[i] q^i` known below `q^bound`.
    pub fn from_i64(coeffs: &[i64], bound: i64) -> Self {
        let c = coeffs.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        TruncatedQSeries::from_parts(1, 0, c, bound)
    }

    fn canonicalize(&mut self) {
        if self.offset >= self.bound {
            self.coeffs.clear();
            self.offset = self.bound;
            return;
        }
        self.coeffs.truncate((self.bound - self.offset) as usize);
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                self.coeffs.clear();
                self.offset = self.bound;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.offset += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn grid(&self) -> i64 {
        self.grid
    }

    pub fn offset_index(&self) -> i64 {
        self.offset
    }

    pub fn bound_index(&self) -> i64 {
        self.bound
    }

    pub fn raw_coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Truncation bound as a rational exponent.
    pub fn bound(&self) -> Exponent {
        Exponent::new(self.bound, self.grid)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the lowest nonzero term, if any is known.
    pub fn valuation(&self) -> Option<Exponent> {
        if self.is_zero() {
            None
        } else {
            Some(Exponent::new(self.offset, self.grid))
        }
    }

    /// Coefficient of `q^e`, or `None` when `e` is at or above the bound.
    pub fn coeff(&self, e: Exponent) -> Option<BigRational> {
        if e >= self.bound() {
            return None;
        }
        let scaled = e * self.grid;
        if !scaled.is_integer() {
            return Some(BigRational::zero());
        }
        let k = scaled.to_integer() - self.offset;
        if k < 0 || k as usize >= self.coeffs.len() {
            Some(BigRational::zero())
        } else {
            Some(self.coeffs[k as usize].clone())
        }
    }

    /// Coefficient of `q^k` for integer `k`.
    pub fn coeff_at(&self, k: i64) -> Option<BigRational> {
        self.coeff(Exponent::from_integer(k))
    }

    /// Integer coefficients of `q^0 .. q^{n-1}`; panics if unknown or non-integral.
    pub fn head_i64(&self, n: usize) -> Vec<i64> {
        (0..n as i64)
            .map(|k| {
                let c = self.coeff_at(k).unwrap_or_else(|| panic!("q^{k} is beyond the truncation bound"));
                assert!(c.is_integer(), "coefficient of q^{k} is not an integer");
                c.to_integer().to_i64().expect("coefficient fits in i64")
            })
            .collect()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(Exponent, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Exponent::new(self.offset + i as i64, self.grid), c.clone()))
            .collect()
    }

    /// Same series on a finer grid `new_grid` (a multiple of the current one).
    pub fn rescale(&self, new_grid: i64) -> Self {
        assert!(new_grid % self.grid == 0, "new grid must be a multiple of the old one");
        let f = new_grid / self.grid;
        if f == 1 {
            return self.clone();
        }
        let mut c = Vec::new();
        if !self.coeffs.is_empty() {
            c = vec![BigRational::zero(); (self.coeffs.len() - 1) * f as usize + 1];
            for (i, x) in self.coeffs.iter().enumerate() {
                c[i * f as usize] = x.clone();
            }
        }
        TruncatedQSeries { grid: new_grid, offset: self.offset * f, coeffs: c, bound: self.bound * f }
    }

    fn on_common_grid(&self, other: &Self) -> (Self, Self) {
        let g = lcm(self.grid, other.grid);
        (self.rescale(g), other.rescale(g))
    }

    /// Reduces the truncation bound to `min(bound, current)`.
    pub fn truncate(&self, bound: Exponent) -> Self {
        let g = lcm(self.grid, *bound.denom());
        let s = self.rescale(g);
        let b = (bound * g).to_integer().min(s.bound);
        TruncatedQSeries::from_parts(g, s.offset, s.coeffs, b)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        TruncatedQSeries::from_parts(self.grid, self.offset, coeffs, self.bound)
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        let g = lcm(self.grid, *e.denom());
        let s = self.rescale(g);
        let k = (e * g).to_integer();
        TruncatedQSeries::from_parts(g, s.offset + k, s.coeffs, s.bound + k)
    }

    pub fn add_series(&self, other: &Self) -> Self {
        let (a, b) = self.on_common_grid(other);
        let bound = a.bound.min(b.bound);
        let lo = a.offset.min(b.offset).min(bound);
        let mut c = vec![BigRational::zero(); (bound - lo) as usize];
        for s in [&a, &b] {
            for (i, x) in s.coeffs.iter().enumerate() {
                let k = s.offset + i as i64 - lo;
                if k < c.len() as i64 {
                    c[k as usize] += x;
                }
            }
        }
        TruncatedQSeries::from_parts(a.grid, lo, c, bound)
    }

    pub fn sub_series(&self, other: &Self) -> Self {
        self.add_series(&other.neg_series())
    }

    pub fn neg_series(&self) -> Self {
        TruncatedQSeries {
            grid: self.grid,
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
            bound: self.bound,
        }
    }

    /// Truncated product; bound is `min(B_a + o_b, B_b + o_a)`.
    pub fn mul_series(&self, other: &Self) -> Self {
        let (a, b) = self.on_common_grid(other);
        let bound = (a.bound + b.offset).min(b.bound + a.offset);
        if a.is_zero() || b.is_zero() {
            return TruncatedQSeries::zero_on_grid(a.grid, bound);
        }
        let offset = a.offset + b.offset;
        let len = (bound - offset).max(0) as usize;
        let c = convolve(&a.coeffs, &b.coeffs, len);
        TruncatedQSeries::from_parts(a.grid, offset, c, bound)
    }

    /// Multiplicative inverse to the available relative precision.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroLeadingTerm);
        }
        let len = (self.bound - self.offset) as usize;
        let (ints, den) = to_integers(&self.coeffs);
        let lead = &ints[0];
        let inv: Vec<BigRational> = if lead.abs().is_one() {
            let sign = lead.clone();
            let mut u: Vec<BigInt> = Vec::with_capacity(len);
            u.push(sign.clone());
            for k in 1..len {
                let mut acc = BigInt::zero();
                for i in 1..=k.min(ints.len() - 1) {
                    acc += &ints[i] * &u[k - i];
                }
                u.push(-(acc * &sign));
            }
            let d = BigRational::from_integer(den);
            u.into_iter().map(|x| BigRational::from_integer(x) * &d).collect()
        } else {
            let c0_inv = self.coeffs[0].recip();
            let mut u: Vec<BigRational> = Vec::with_capacity(len);
            u.push(c0_inv.clone());
            for k in 1..len {
                let mut acc = BigRational::zero();
                for i in 1..=k.min(self.coeffs.len() - 1) {
                    acc += &self.coeffs[i] * &u[k - i];
                }
                u.push(-(acc * &c0_inv));
            }
            u
        };
        Ok(TruncatedQSeries::from_parts(self.grid, -self.offset, inv, self.bound - 2 * self.offset))
    }

    /// `n`-th power; `s^0` is `1` known to the relative precision of `s`.
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            let rel = self.bound() - self.valuation().unwrap_or(Exponent::zero());
            return TruncatedQSeries::one(rel.max(Exponent::zero()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul_series(self);
        }
        acc
    }

    /// Substitution `q -> q^k`.
    pub fn subst_power(&self, k: u32) -> Self {
        assert!(k >= 1);
        let k = k as i64;
        if k == 1 {
            return self.clone();
        }
        let mut c = Vec::new();
        if !self.coeffs.is_empty() {
            c = vec![BigRational::zero(); (self.coeffs.len() - 1) * k as usize + 1];
            for (i, x) in self.coeffs.iter().enumerate() {
                c[i * k as usize] = x.clone();
            }
        }
        TruncatedQSeries::from_parts(self.grid, self.offset * k, c, self.bound * k)
    }

    /// Substitution `q -> -q`; only defined on the integer grid.
    pub fn negate_q(&self) -> Result<Self> {
        let s = self.reduce_grid();
        if s.grid != 1 {
            return Err(Error::InvalidArgument("q -> -q needs integer exponents".into()));
        }
        let c = s
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, x)| if (s.offset + i as i64).rem_euclid(2) == 1 { -x } else { x.clone() })
            .collect();
        Ok(TruncatedQSeries::from_parts(1, s.offset, c, s.bound))
    }

    /// Same series on the coarsest grid that still holds every term and the bound.
    pub fn reduce_grid(&self) -> Self {
        let mut g = self.bound.gcd(&self.grid);
        g = g.gcd(&self.offset);
        for (i, x) in self.coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(&(self.offset + i as i64));
            }
        }
        if g <= 1 {
            return self.clone();
        }
        let c = self.coeffs.iter().step_by(g as usize).cloned().collect();
        TruncatedQSeries::from_parts(self.grid / g, self.offset / g, c, self.bound / g)
    }

    /// Exponent of the first disagreement below the common bound.
    pub fn first_mismatch(&self, other: &Self) -> Option<Exponent> {
        let (a, b) = self.on_common_grid(other);
        let bound = a.bound.min(b.bound);
        let lo = a.offset.min(b.offset);
        let zero = BigRational::zero();
        let at = |s: &TruncatedQSeries, k: i64| -> BigRational {
            let i = k - s.offset;
            if i < 0 || i as usize >= s.coeffs.len() {
                zero.clone()
            } else {
                s.coeffs[i as usize].clone()
            }
        };
        (lo..bound).find(|&k| at(&a, k) != at(&b, k)).map(|k| Exponent::new(k, a.grid))
    }

    /// Smaller of the two truncation bounds.
    pub fn common_bound(&self, other: &Self) -> Exponent {
        self.bound().min(other.bound())
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs.iter().map(rational_to_json).collect();
        json!({ "d": self.grid, "offset": self.offset, "bound": self.bound, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).and_then(Value::as_i64).ok_or_else(|| Error::Parse(format!("missing integer field {k}")));
        let d = field("d")?;
        if d < 1 {
            return Err(Error::Parse("grid denominator must be positive".into()));
        }
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedQSeries::from_parts(d, field("offset")?, coeffs, field("bound")?))
    }

    /// CSV rows `exponent_num,exponent_den,num,den` for the nonzero terms.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent_num,exponent_den,num,den\n");
        for (e, c) in self.terms() {
            out.push_str(&format!("{},{},{},{}\n", e.numer(), e.denom(), c.numer(), c.denom()));
        }
        out
    }
}

pub(crate) fn rational_to_json(c: &BigRational) -> Value {
    let part = |x: &BigInt| match x.to_i64() {
        Some(k) => json!(k),
        None => json!(x.to_string()),
    };
    json!([part(c.numer()), part(c.denom())])
}

pub(crate) fn rational_from_json(v: &Value) -> Result<BigRational> {
    let part = |x: &Value| -> Result<BigInt> {
        match x {
            Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("bad integer {n}"))),
            Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer {s}"))),
            _ => Err(Error::Parse("expected integer".into())),
        }
    };
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("expected [num, den]".into()))?;
    let den = part(&arr[1])?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(part(&arr[0])?, den))
}

/// Scales rationals to integers: returns `(n_i, D)` with `c_i = n_i / D`.
fn to_integers(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for x in c {
        if !x.denom().is_one() {
            den = den.lcm(x.denom());
        }
    }
    let ints = c
        .iter()
        .map(|x| if den.is_one() { x.numer().clone() } else { x.numer() * (&den / x.denom()) })
        .collect();
    (ints, den)
}

fn bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

/// First `len` coefficients of the product of two coefficient vectors.
pub(crate) fn convolve(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let (ai, ad) = to_integers(a);
    let (bi, bd) = to_integers(b);
    let n = len as u64 + 1;
    let small = bits(&ai) + bits(&bi) + (64 - n.leading_zeros() as u64) < 120;
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    if small {
        let a64: Vec<i128> = ai.iter().map(|x| x.to_i128().unwrap()).collect();
        let b64: Vec<i128> = bi.iter().map(|x| x.to_i128().unwrap()).collect();
        for k in 0..len {
            let lo = k.saturating_sub(b64.len() - 1);
            let hi = k.min(a64.len() - 1);
            let mut acc: i128 = 0;
            if lo <= hi {
                for i in lo..=hi {
                    acc += a64[i] * b64[k - i];
                }
            }
            out.push(BigInt::from(acc));
        }
    } else {
        for k in 0..len {
            let lo = k.saturating_sub(bi.len() - 1);
            let hi = k.min(ai.len() - 1);
            let mut acc = BigInt::zero();
            if lo <= hi {
                for i in lo..=hi {
                    acc += &ai[i] * &bi[k - i];
                }
            }
            out.push(acc);
        }
    }
    let den = ad * bd;
    out.into_iter().map(|x| BigRational::new(x, den.clone())).collect()
}

/// In-place multiplication of a power series (length fixed) by `(1 + c q^m)^e`.
pub(crate) fn mul_binomial(v: &mut [BigRational], c: &BigRational, m: usize, e: i32) {
    let len = v.len();
    if m >= len || c.is_zero() || e == 0 {
        return;
    }
    let unit = if c.is_one() {
        Some(true)
    } else if (-c).is_one() {
        Some(false)
    } else {
        None
    };
    for _ in 0..e.unsigned_abs() {
        if e > 0 {
            for i in (m..len).rev() {
                let t = match unit {
                    Some(true) => v[i - m].clone(),
                    Some(false) => -&v[i - m],
                    None => c * &v[i - m],
                };
                v[i] += t;
            }
        } else {
            for i in m..len {
                let t = match unit {
                    Some(true) => v[i - m].clone(),
                    Some(false) => -&v[i - m],
                    None => c * &v[i - m],
                };
                v[i] -= t;
            }
        }
    }
}

impl PartialEq for TruncatedQSeries {
    fn eq(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }
}

impl fmt::Display for TruncatedQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let e_str = if e.is_integer() { e.to_integer().to_string() } else { format!("({e})") };
            match (mag.is_one(), e.is_zero()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "q^{e_str}")?,
                (false, false) => write!(f, "{mag}*q^{e_str}")?,
            }
        }
        write!(f, " + O(q^{})", if self.bound().is_integer() { self.bound().to_integer().to_string() } else { format!("({})", self.bound()) })
    }
}

impl Add for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn add(self, rhs: &TruncatedQSeries) -> TruncatedQSeries {
        self.add_series(rhs)
    }
}

impl Sub for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn sub(self, rhs: &TruncatedQSeries) -> TruncatedQSeries {
        self.sub_series(rhs)
    }
}

impl Mul for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn mul(self, rhs: &TruncatedQSeries) -> TruncatedQSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn neg(self) -> TruncatedQSeries {
        self.neg_series()
    }
}

impl Add for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn add(self, rhs: TruncatedQSeries) -> TruncatedQSeries {
        self.add_series(&rhs)
    }
}

impl Sub for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn sub(self, rhs: TruncatedQSeries) -> TruncatedQSeries {
        self.sub_series(&rhs)
    }
}

impl Mul for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn mul(self, rhs: TruncatedQSeries) -> TruncatedQSeries {
        self.mul_series(&rhs)
    }
}

impl Neg for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn neg(self) -> TruncatedQSeries {
        self.neg_series()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    #[test]
    fn cancellation_in_sum() {
        let a = TruncatedQSeries::from_i64(&[0, 1, 1], 10);
        let b = TruncatedQSeries::from_i64(&[0, -1], 10);
        let s = &a + &b;
        assert_eq!(s.terms(), vec![(e(2, 1), r(1))]);
        assert_eq!(s.bound(), e(10, 1));
    }

    #[test]
    fn mixed_grids_add_on_lcm() {
        let a = TruncatedQSeries::monomial(r(1), e(1, 8), e(3, 1));
        let b = TruncatedQSeries::monomial(r(2), e(2, 3), e(2, 1));
        let s = &a + &b;
        assert_eq!(s.grid(), 24);
        assert_eq!(s.coeff(e(3, 24)), Some(r(1)));
        assert_eq!(s.coeff(e(16, 24)), Some(r(2)));
        assert_eq!(s.bound(), e(2, 1));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_q = TruncatedQSeries::from_i64(&[1, -1], 20);
        let geo = one_minus_q.invert().unwrap();
        assert_eq!(geo.head_i64(20), vec![1; 20]);
        let prod = &one_minus_q * &geo;
        assert_eq!(prod, TruncatedQSeries::one(e(20, 1)));
    }

    #[test]
    fn laurent_inverse() {
        let s = TruncatedQSeries::from_i64(&[0, 1, 1], 12);
        let inv = s.invert().unwrap();
        assert_eq!(inv.valuation(), Some(e(-1, 1)));
        assert_eq!(inv.coeff_at(-1), Some(r(1)));
        assert_eq!(inv.coeff_at(0), Some(r(-1)));
        assert_eq!(inv.coeff_at(1), Some(r(1)));
        assert_eq!(inv.bound(), e(10, 1));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(TruncatedQSeries::zero(e(5, 1)).invert().unwrap_err(), Error::ZeroLeadingTerm);
    }

    #[test]
    fn square_of_binomial() {
        let s = TruncatedQSeries::from_i64(&[1, 1], 10);
        assert_eq!((&s * &s).head_i64(4), vec![1, 2, 1, 0]);
    }

    #[test]
    fn monomial_cancellation() {
        let base = TruncatedQSeries::from_i64(&[1, 1, -1, 2], 4);
        let up = base.shift(e(1, 24));
        let back = &up * &TruncatedQSeries::monomial(r(1), e(-1, 24), e(100, 1));
        assert_eq!(back, base);
    }

    #[test]
    fn product_bound_rule() {
        let a = TruncatedQSeries::from_parts(1, 2, vec![r(1)], 10);
        let b = TruncatedQSeries::from_parts(1, 3, vec![r(1)], 7);
        assert_eq!((&a * &b).bound(), e(9, 1));
    }

    #[test]
    fn power_substitution() {
        let s = TruncatedQSeries::from_i64(&[1, 1], 5);
        let t = s.subst_power(8);
        assert_eq!(t.terms(), vec![(e(0, 1), r(1)), (e(8, 1), r(1))]);
        assert_eq!(t.bound(), e(40, 1));
        assert_eq!(s.subst_power(1), s);
    }

    #[test]
    fn rational_coefficients_survive_product() {
        let a = TruncatedQSeries::from_parts(1, 0, vec![BigRational::new(1.into(), 2.into()), r(1)], 6);
        let b = TruncatedQSeries::from_parts(1, 0, vec![BigRational::new(2.into(), 3.into())], 6);
        let p = &a * &b;
        assert_eq!(p.coeff_at(0), Some(BigRational::new(1.into(), 3.into())));
        assert_eq!(p.coeff_at(1), Some(BigRational::new(2.into(), 3.into())));
    }

    #[test]
    fn json_round_trip() {
        let s = TruncatedQSeries::from_parts(8, -1, vec![r(-2), BigRational::new(3.into(), 7.into())], 30);
        let back = TruncatedQSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.bound(), s.bound());
        assert!(s.to_csv().contains("-1,8,-2,1"));
    }

    #[test]
    fn binomial_kernel_inverts() {
        let mut v: Vec<BigRational> = (0..12).map(|i| r(i * i - 3)).collect();
        let orig = v.clone();
        let c = BigRational::new((-3).into(), 2.into());
        mul_binomial(&mut v, &c, 2, 1);
        mul_binomial(&mut v, &c, 2, -1);
        assert_eq!(v, orig);
    }
}
