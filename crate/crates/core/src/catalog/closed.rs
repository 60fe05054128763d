//! Closed forms `scale * prod (1 + c q^{start + k step})^e * (constant + Lambert sums)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{exp_int, rat, QPoint};
use crate::mp::{MpComplex, MpReal};
use crate::series::{lcm, mul_binomial, Exponent, TruncatedQSeries};

/// `prod_{k >= 0} (1 + c q^{start + k step})^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFactor {
    pub c: BigRational,
    pub start: Exponent,
    pub step: Exponent,
    pub e: i32,
}

impl ProductFactor {
    pub fn new(c: i64, start: i64, step: i64, e: i32) -> Self {
        ProductFactor { c: rat(c), start: exp_int(start), step: exp_int(step), e }
    }

    /// `(a q^s; q^base)_inf^e`.
    pub fn poch(a: i64, s: i64, base: i64, e: i32) -> Self {
        ProductFactor::new(-a, s, base, e)
    }
}

/// `sum_{n >= n0} coeff q^{a n + b} / (1 + c q^{a n + b})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambertSum {
    pub coeff: BigRational,
    pub n0: i64,
    pub a: Exponent,
    pub b: Exponent,
    pub c: BigRational,
}

impl LambertSum {
    pub fn new(coeff: BigRational, n0: i64, a: i64, b: i64, c: i64) -> Self {
        LambertSum { coeff, n0, a: exp_int(a), b: exp_int(b), c: rat(c) }
    }

    fn exponent(&self, n: i64) -> Exponent {
        self.a * exp_int(n) + self.b
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub scale: BigRational,
    pub products: Vec<ProductFactor>,
    pub constant: BigRational,
    pub lamberts: Vec<LambertSum>,
}

impl ClosedForm {
    pub fn product(scale: BigRational, products: Vec<ProductFactor>) -> Self {
        ClosedForm { scale, products, constant: BigRational::one(), lamberts: Vec::new() }
    }

    pub fn with_sum(mut self, constant: BigRational, lamberts: Vec<LambertSum>) -> Self {
        self.constant = constant;
        self.lamberts = lamberts;
        self
    }

    fn grid(&self, bound: Exponent) -> i64 {
        let mut g = *bound.denom();
        for p in &self.products {
            g = lcm(g, lcm(*p.start.denom(), *p.step.denom()));
        }
        for l in &self.lamberts {
            g = lcm(g, lcm(*l.a.denom(), *l.b.denom()));
        }
        g
    }

    fn validate(&self) -> Result<()> {
        for p in &self.products {
            if p.step <= Exponent::zero() || p.start < Exponent::zero() {
                return Err(Error::NotExpandable(format!("product factor {p:?} has non-positive exponents")));
            }
        }
        for l in &self.lamberts {
            if l.a <= Exponent::zero() || l.exponent(l.n0) <= Exponent::zero() {
                return Err(Error::NotExpandable(format!("Lambert sum {l:?} has non-positive exponents")));
            }
        }
        Ok(())
    }

    /// The product part `prod (...)` expanded modulo `q^bound` (grid index units).
    fn product_unit(&self, grid: i64, len: usize) -> Result<(BigRational, Vec<BigRational>)> {
        let mut lead = self.scale.clone();
        let mut v = vec![BigRational::zero(); len];
        if len == 0 {
            return Ok((lead, v));
        }
        v[0] = BigRational::one();
        for p in &self.products {
            let mut k = 0i64;
            loop {
                let m = ((p.start + p.step * exp_int(k)) * grid).to_integer();
                if m as usize >= len && m > 0 {
                    break;
                }
                if m == 0 {
                    let base = BigRational::one() + &p.c;
                    if base.is_zero() {
                        if p.e < 0 {
                            return Err(Error::PoleAtPoint("constant product factor vanishes".into()));
                        }
                        lead = BigRational::zero();
                    } else {
                        for _ in 0..p.e.unsigned_abs() {
                            if p.e > 0 {
                                lead *= &base;
                            } else {
                                lead /= &base;
                            }
                        }
                    }
                } else {
                    mul_binomial(&mut v, &p.c, m as usize, p.e);
                }
                k += 1;
            }
        }
        Ok((lead, v))
    }

    /// Exact expansion modulo `q^bound`.
    pub fn to_series(&self, bound: Exponent) -> Result<TruncatedQSeries> {
        self.validate()?;
        let grid = self.grid(bound);
        let b = (bound * grid).to_integer();
        let len = b.max(0) as usize;
        let (lead, unit) = self.product_unit(grid, len)?;
        if lead.is_zero() || len == 0 {
            return Ok(TruncatedQSeries::zero_on_grid(grid, b));
        }
        let prod = TruncatedQSeries::from_parts(grid, 0, unit.into_iter().map(|x| x * &lead).collect(), b);
        if self.lamberts.is_empty() {
            return Ok(prod.scale(&self.constant));
        }
        let mut s = vec![BigRational::zero(); len];
        s[0] = self.constant.clone();
        for l in &self.lamberts {
            let mut n = l.n0;
            loop {
                let m = (l.exponent(n) * grid).to_integer();
                if m as usize >= len {
                    break;
                }
                // coeff x / (1 + c x) = coeff sum_{j >= 0} (-c)^j x^{j+1}
                let mut w = l.coeff.clone();
                let neg_c = -&l.c;
                let mut k = m as usize;
                while k < len {
                    s[k] += &w;
                    w *= &neg_c;
                    if w.is_zero() {
                        break;
                    }
                    k += m as usize;
                }
                n += 1;
            }
        }
        let sum = TruncatedQSeries::from_parts(grid, 0, s, b);
        Ok(prod.mul_series(&sum))
    }

    /// Value at a point with `|q| < 1`.
    pub fn eval(&self, q: &QPoint) -> Result<MpComplex> {
        self.validate()?;
        let p = q.precision();
        let one = MpComplex::one(p);
        let r = q.pow(&exp_int(1)).abs();
        if !(r < MpReal::one(p)) {
            return Err(Error::NonConvergentParameters("closed forms converge only for |q| < 1".into()));
        }
        let eps = MpReal::from_f64(10f64.powi(-(digits_of(p) as i32) - 10), p);
        let mut acc = MpComplex::from_real(MpReal::from_ratio(&self.scale, p));
        for f in &self.products {
            let c = MpReal::from_ratio(&f.c, p);
            let mut x = q.pow(&f.start);
            let step = q.pow(&f.step);
            loop {
                let term = &one + &x.scale(&c);
                if term.is_zero() {
                    if f.e < 0 {
                        return Err(Error::PoleAtPoint("inverted product factor vanishes".into()));
                    }
                    return Ok(MpComplex::zero(p));
                }
                acc = &acc * &term.powi(f.e as i64);
                if x.abs() < eps {
                    break;
                }
                x = &x * &step;
            }
        }
        if self.lamberts.is_empty() && self.constant.is_one() {
            return Ok(acc);
        }
        let mut s = MpComplex::from_real(MpReal::from_ratio(&self.constant, p));
        for l in &self.lamberts {
            let c = MpReal::from_ratio(&l.c, p);
            let k = MpReal::from_ratio(&l.coeff, p);
            let mut x = q.pow(&l.exponent(l.n0));
            let step = q.pow(&l.a);
            loop {
                let den = &one + &x.scale(&c);
                if den.is_zero() {
                    return Err(Error::PoleAtPoint("Lambert denominator vanishes".into()));
                }
                s = &s + &(&x.scale(&k) * &den.recip());
                if x.abs() < eps {
                    break;
                }
                x = &x * &step;
            }
        }
        Ok(&acc * &s)
    }

    /// Whether an inverted product factor vanishes at `e^{2 pi i x}`.
    pub fn has_product_pole_at_root(&self, x: Exponent) -> bool {
        let order = *x.denom();
        self.products.iter().filter(|f| f.e < 0).any(|f| {
            let unit = if f.c.is_one() {
                Some(Exponent::new(1, 2))
            } else if (-&f.c).is_one() {
                Some(Exponent::zero())
            } else {
                None
            };
            let Some(target) = unit else {
                return false;
            };
            // c zeta^m = -1  <=>  m x == target (mod 1)
            (0..2 * order.max(1) * *f.step.denom() * *f.start.denom()).any(|k| {
                let m = f.start + f.step * exp_int(k);
                let t = m * x - target;
                t.is_integer()
            })
        })
    }
}

fn digits_of(bits: usize) -> usize {
    ((bits as f64) / std::f64::consts::LOG2_10).floor() as usize
}
