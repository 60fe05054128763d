//! Multiprecision real and complex numbers on top of `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision in bits for a decimal digit count, with guard bits.
pub fn digits_to_bits(digits: usize) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 32
}

#[derive(Clone, Debug)]
pub struct MpReal {
    v: BigFloat,
    p: usize,
}

impl MpReal {
    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn zero(p: usize) -> Self {
        Self::from_i64(0, p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_i64(1, p)
    }

    pub fn from_i64(n: i64, p: usize) -> Self {
        MpReal { v: BigFloat::from_i64(n, p), p }
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        MpReal { v: BigFloat::from_f64(x, p), p }
    }

    pub fn from_bigint(n: &BigInt, p: usize) -> Self {
        match n.to_i64() {
            Some(k) => Self::from_i64(k, p),
            None => Self::parse(&n.to_string(), p),
        }
    }

    pub fn from_ratio(r: &BigRational, p: usize) -> Self {
        Self::from_bigint(r.numer(), p) / Self::from_bigint(r.denom(), p)
    }

    pub fn from_ratio64(r: &Ratio<i64>, p: usize) -> Self {
        Self::from_i64(*r.numer(), p) / Self::from_i64(*r.denom(), p)
    }

    /// Parses a decimal literal such as `"0.5772156649"`.
    pub fn parse(s: &str, p: usize) -> Self {
        let v = with_cc(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        MpReal { v, p }
    }

    pub fn pi(p: usize) -> Self {
        MpReal { v: with_cc(|cc| cc.pi(p, RM)), p }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn abs(&self) -> Self {
        MpReal { v: self.v.abs(), p: self.p }
    }

    pub fn sqrt(&self) -> Self {
        MpReal { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn exp(&self) -> Self {
        MpReal { v: with_cc(|cc| self.v.exp(self.p, RM, cc)), p: self.p }
    }

    pub fn ln(&self) -> Self {
        MpReal { v: with_cc(|cc| self.v.ln(self.p, RM, cc)), p: self.p }
    }

    pub fn sin(&self) -> Self {
        MpReal { v: with_cc(|cc| self.v.sin(self.p, RM, cc)), p: self.p }
    }

    pub fn cos(&self) -> Self {
        MpReal { v: with_cc(|cc| self.v.cos(self.p, RM, cc)), p: self.p }
    }

    pub fn atan(&self) -> Self {
        MpReal { v: with_cc(|cc| self.v.atan(self.p, RM, cc)), p: self.p }
    }

    pub fn powi(&self, n: usize) -> Self {
        MpReal { v: self.v.powi(n, self.p, RM), p: self.p }
    }

    /// Angle of (x, y) in (-pi, pi].
    pub fn atan2(y: &MpReal, x: &MpReal) -> Self {
        let p = y.p.max(x.p);
        if x.is_zero() {
            let half_pi = MpReal::pi(p) / MpReal::from_i64(2, p);
            return if y.is_negative() { -half_pi } else if y.is_zero() { MpReal::zero(p) } else { half_pi };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - MpReal::pi(p)
        } else {
            base + MpReal::pi(p)
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let Some((m, _n, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let len = m.len();
        let hi = m[len - 1] as f64;
        let lo = if len > 1 { m[len - 2] as f64 } else { 0.0 };
        let word = u64::BITS as i32;
        let mant = hi + lo / 2f64.powi(word);
        let mag = mant * 2f64.powi(e - word);
        if sign.is_negative() {
            -mag
        } else {
            mag
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let bits = digits_to_bits(digits).min(self.p);
        let mut v = self.v.clone();
        let _ = v.set_precision(bits, RM);
        round_decimal(&format!("{}", v), digits.max(1))
    }
}

/// Rounds a `[-]d.ddd e[+-]x` rendering to `digits` significant digits, half away from zero.
fn round_decimal(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || int.is_empty() {
        return s.to_string();
    }
    let mut ds: Vec<u8> = int.bytes().chain(frac.bytes()).map(|b| b - b'0').collect();
    let mut exp = exp + int.len() as i64 - 1;
    while ds.len() > 1 && ds[0] == 0 {
        ds.remove(0);
        exp -= 1;
    }
    if ds.iter().all(|&d| d == 0) {
        return "0.0".to_string();
    }
    if ds.len() > digits {
        let up = ds[digits] >= 5;
        ds.truncate(digits);
        if up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds[ds.len() - 1] == 0 {
        ds.pop();
    }
    let body: String = ds[1..].iter().map(|d| char::from(b'0' + d)).collect();
    let body = if body.is_empty() { "0".to_string() } else { body };
    format!("{}{}.{body}e{exp}", if neg { "-" } else { "" }, ds[0])
}

impl fmt::Display for MpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl PartialEq for MpReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for MpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&MpReal> for &MpReal {
            type Output = MpReal;
            fn $m(self, rhs: &MpReal) -> MpReal {
                let p = self.p.max(rhs.p);
                MpReal { v: self.v.$m(&rhs.v, p, RM), p }
            }
        }
        impl $tr<MpReal> for MpReal {
            type Output = MpReal;
            fn $m(self, rhs: MpReal) -> MpReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MpReal> for MpReal {
            type Output = MpReal;
            fn $m(self, rhs: &MpReal) -> MpReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<MpReal> for &MpReal {
            type Output = MpReal;
            fn $m(self, rhs: MpReal) -> MpReal {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for MpReal {
    type Output = MpReal;
    fn neg(self) -> MpReal {
        MpReal { v: BigFloat::neg(&self.v), p: self.p }
    }
}

impl Neg for &MpReal {
    type Output = MpReal;
    fn neg(self) -> MpReal {
        MpReal { v: BigFloat::neg(&self.v), p: self.p }
    }
}

#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: MpReal,
    pub im: MpReal,
}

impl MpComplex {
    pub fn new(re: MpReal, im: MpReal) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(p: usize) -> Self {
        MpComplex::new(MpReal::zero(p), MpReal::zero(p))
    }

    pub fn one(p: usize) -> Self {
        MpComplex::new(MpReal::one(p), MpReal::zero(p))
    }

    pub fn from_real(re: MpReal) -> Self {
        let p = re.precision();
        MpComplex::new(re, MpReal::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        MpComplex::new(MpReal::from_f64(re, p), MpReal::from_f64(im, p))
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    /// e^{2 pi i t} for an exact rational number of turns.
    pub fn cis_turns(t: &Ratio<i64>, p: usize) -> Self {
        let den = *t.denom();
        let num = t.numer().rem_euclid(den);
        match (num * 8).checked_rem(den) {
            Some(0) => {
                let eighth = num * 8 / den;
                let half = MpReal::from_i64(1, p) / MpReal::from_i64(2, p);
                let r = half.sqrt();
                let (a, b) = match eighth {
                    0 => (MpReal::one(p), MpReal::zero(p)),
                    1 => (r.clone(), r),
                    2 => (MpReal::zero(p), MpReal::one(p)),
                    3 => (-r.clone(), r),
                    4 => (MpReal::from_i64(-1, p), MpReal::zero(p)),
                    5 => (-r.clone(), -r),
                    6 => (MpReal::zero(p), MpReal::from_i64(-1, p)),
                    _ => (r.clone(), -r),
                };
                MpComplex::new(a, b)
            }
            _ => {
                let angle = MpReal::pi(p) * MpReal::from_i64(2 * num, p) / MpReal::from_i64(den, p);
                MpComplex::new(angle.cos(), angle.sin())
            }
        }
    }

    /// e^{i theta} for a real angle.
    pub fn cis(theta: &MpReal) -> Self {
        MpComplex::new(theta.cos(), theta.sin())
    }

    pub fn conj(&self) -> Self {
        MpComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> MpReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> MpReal {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> MpReal {
        MpReal::atan2(&self.im, &self.re)
    }

    pub fn scale(&self, k: &MpReal) -> Self {
        MpComplex::new(&self.re * k, &self.im * k)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        MpComplex::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = MpComplex::one(self.precision());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl Add<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn add(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn sub(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&MpComplex> for &MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: &MpComplex) -> MpComplex {
        self * &rhs.recip()
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex::new(-&self.re, -&self.im)
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MpComplex> for MpComplex {
            type Output = MpComplex;
            fn $m(self, rhs: MpComplex) -> MpComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MpComplex> for MpComplex {
            type Output = MpComplex;
            fn $m(self, rhs: &MpComplex) -> MpComplex {
                (&self).$m(rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        -&self
    }
}

/// Exact rational to `MpComplex` (real axis).
pub fn rational_to_complex(r: &BigRational, p: usize) -> MpComplex {
    MpComplex::from_real(MpReal::from_ratio(r, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rounding() {
        assert_eq!(round_decimal("7.e+0", 5), "7.0e0");
        assert_eq!(round_decimal("-1.23456e+3", 3), "-1.23e3");
        assert_eq!(round_decimal("9.996e-2", 3), "1.0e-1");
        assert_eq!(round_decimal("1.2345e-1", 4), "1.235e-1");
    }

    #[test]
    fn to_f64_round_trips() {
        for x in [1.0, -2.5, 1e-30, 3.25e17, std::f64::consts::PI] {
            let v = MpReal::from_f64(x, 200);
            assert_eq!(v.to_f64(), x);
        }
    }

    #[test]
    fn cis_turns_matches_trig() {
        let p = digits_to_bits(40);
        for t in [Ratio::new(1, 3), Ratio::new(3, 8), Ratio::new(-5, 7), Ratio::new(9, 4)] {
            let z = MpComplex::cis_turns(&t, p);
            let a = 2.0 * std::f64::consts::PI * (*t.numer() as f64) / (*t.denom() as f64);
            let (re, im) = z.to_f64();
            assert!((re - a.cos()).abs() < 1e-15 && (im - a.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn atan2_quadrants() {
        let p = 128;
        for (y, x) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0), (0.5, 0.0)] {
            let a = MpReal::atan2(&MpReal::from_f64(y, p), &MpReal::from_f64(x, p)).to_f64();
            assert!((a - f64::atan2(y, x)).abs() < 1e-15);
        }
    }
}
