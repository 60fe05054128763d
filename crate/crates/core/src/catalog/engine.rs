//! Incremental summation of q-hypergeometric term families.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{exp_int, QProductExpr};
use crate::series::{lcm, mul_binomial, Exponent, TruncatedQSeries};

/// `(1 + c q^{gamma + delta n})^e` as a function of the summation index.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioFactor {
    pub c: BigRational,
    pub gamma: Exponent,
    pub delta: Exponent,
    pub e: i32,
}

/// Term ratio `H_{n+1} / H_n = coeff q^{alpha + beta n} prod (1 + c q^{gamma + delta n})^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioSpec {
    pub coeff: BigRational,
    pub alpha: Exponent,
    pub beta: Exponent,
    pub factors: Vec<RatioFactor>,
}

impl RatioSpec {
    pub fn new(coeff: i64, alpha: i64, beta: i64) -> Self {
        RatioSpec {
            coeff: BigRational::from_integer(coeff.into()),
            alpha: exp_int(alpha),
            beta: exp_int(beta),
            factors: Vec::new(),
        }
    }

    /// Adds `(1 + c q^{gamma + delta n})^e`.
    pub fn with(mut self, c: i64, gamma: i64, delta: i64, e: i32) -> Self {
        self.factors.push(RatioFactor {
            c: BigRational::from_integer(c.into()),
            gamma: exp_int(gamma),
            delta: exp_int(delta),
            e,
        });
        self
    }

    pub fn with_rational(mut self, c: BigRational, gamma: Exponent, delta: Exponent, e: i32) -> Self {
        self.factors.push(RatioFactor { c, gamma, delta, e });
        self
    }

    /// The ratio at index `n` as an expression.
    pub fn at(&self, n: u64) -> QProductExpr {
        let nn = exp_int(n as i64);
        let mut x = QProductExpr::monomial(self.coeff.clone(), self.alpha + self.beta * nn);
        for f in &self.factors {
            x = x.factor(f.c.clone(), f.gamma + f.delta * nn, f.e);
        }
        x
    }

    /// Ratio of the family `n -> H_n(q^{-1})`.
    pub fn subst_qinv(&self) -> Result<RatioSpec> {
        let mut out = RatioSpec {
            coeff: self.coeff.clone(),
            alpha: -self.alpha,
            beta: -self.beta,
            factors: Vec::with_capacity(self.factors.len()),
        };
        for f in &self.factors {
            if f.c.is_zero() {
                continue;
            }
            for _ in 0..f.e.unsigned_abs() {
                if f.e > 0 {
                    out.coeff *= &f.c;
                } else {
                    out.coeff /= &f.c;
                }
            }
            let e = exp_int(f.e as i64);
            out.alpha -= f.gamma * e;
            out.beta -= f.delta * e;
            out.factors.push(RatioFactor { c: f.c.recip(), gamma: f.gamma, delta: f.delta, e: f.e });
        }
        Ok(out)
    }

    /// Ratio after `q -> q^k`.
    pub fn subst_power(&self, k: i64) -> RatioSpec {
        let kk = exp_int(k);
        RatioSpec {
            coeff: self.coeff.clone(),
            alpha: self.alpha * kk,
            beta: self.beta * kk,
            factors: self
                .factors
                .iter()
                .map(|f| RatioFactor { c: f.c.clone(), gamma: f.gamma * kk, delta: f.delta * kk, e: f.e })
                .collect(),
        }
    }

    fn grid(&self) -> i64 {
        let mut g = lcm(*self.alpha.denom(), *self.beta.denom());
        for f in &self.factors {
            g = lcm(g, lcm(*f.gamma.denom(), *f.delta.denom()));
        }
        g
    }

    /// Normalized exponent of the ratio at `n`, `None` when the ratio vanishes.
    fn increment(&self, n: u64) -> Result<Option<Exponent>> {
        let r = self.at(n).normalize()?;
        Ok(if r.is_zero() { None } else { Some(r.exp) })
    }

    /// First index from which every factor exponent is nonnegative.
    fn settle_index(&self, n_start: u64) -> u64 {
        let mut s = n_start;
        for f in &self.factors {
            if f.delta > Exponent::zero() {
                let need = (-f.gamma / f.delta).ceil().to_integer();
                if need > s as i64 {
                    s = need as u64;
                }
            }
        }
        s
    }

    /// Asymptotic valuation increment `a + b n`, valid from the settle index on.
    fn affine_increment(&self) -> (Exponent, Exponent) {
        let mut a = self.alpha;
        for f in &self.factors {
            if f.delta.is_zero() && f.gamma < Exponent::zero() && !f.c.is_zero() {
                a += f.gamma * exp_int(f.e as i64);
            }
        }
        (a, self.beta)
    }
}

/// Exact valuations of a family and their monotone lower envelope.
#[derive(Clone, Debug)]
pub(crate) struct ValuationProfile {
    n_start: u64,
    /// `v(n)` for `n_start <= n <= last` (`None` once the terms vanish).
    vals: Vec<Option<Exponent>>,
    /// `min_{m >= n} v(m)` over the same range.
    suffix_min: Vec<Option<Exponent>>,
    /// From `last` on the valuations are nondecreasing with these increments.
    tail_increment: Option<(Exponent, Exponent)>,
    terminated: bool,
}

const LOOKAHEAD_CAP: u64 = 1_000_000;

impl ValuationProfile {
    /// Requires valuations bounded below; `allow_flat` accepts constant tails.
    pub(crate) fn new(start: &QProductExpr, ratio: &RatioSpec, n_start: u64, allow_flat: bool) -> Result<Self> {
        if ratio.factors.iter().any(|f| f.delta < Exponent::zero()) {
            return Err(Error::InvalidArgument("ratio factors must have nondecreasing exponents".into()));
        }
        let v0 = start.valuation()?;
        let settle = ratio.settle_index(n_start);
        let (a, b) = ratio.affine_increment();
        if b < Exponent::zero() || (b.is_zero() && a < Exponent::zero()) || (b.is_zero() && a.is_zero() && !allow_flat) {
            // Only a terminating family can escape.
            let mut n = n_start;
            let mut v = v0;
            let mut vals = vec![v];
            while v.is_some() && n < settle.max(n_start) + 1 {
                v = match ratio.increment(n)? {
                    Some(d) => v.map(|x| x + d),
                    None => None,
                };
                vals.push(v);
                n += 1;
            }
            if v.is_some() {
                return Err(Error::NonConvergentParameters(format!(
                    "term valuations do not grow (asymptotic increment {a} + {b} n)"
                )));
            }
            return Ok(ValuationProfile::finish(n_start, vals, None, true));
        }
        // Valuations are nondecreasing once settled and a + b n >= 0.
        let mut mono = settle;
        if b > Exponent::zero() {
            let k = (-a / b).ceil().to_integer();
            if k > mono as i64 {
                mono = k as u64;
            }
        }
        let mut vals = vec![v0];
        let mut v = v0;
        let mut n = n_start;
        while n < mono && v.is_some() {
            if n - n_start > LOOKAHEAD_CAP {
                return Err(Error::NonConvergentParameters("valuation envelope does not settle".into()));
            }
            v = match ratio.increment(n)? {
                Some(d) => v.map(|x| x + d),
                None => None,
            };
            vals.push(v);
            n += 1;
        }
        let terminated = v.is_none();
        Ok(ValuationProfile::finish(n_start, vals, if terminated { None } else { Some((a, b)) }, terminated))
    }

    fn finish(
        n_start: u64,
        vals: Vec<Option<Exponent>>,
        tail_increment: Option<(Exponent, Exponent)>,
        terminated: bool,
    ) -> Self {
        let mut suffix_min = vals.clone();
        for i in (0..suffix_min.len().saturating_sub(1)).rev() {
            suffix_min[i] = match (suffix_min[i], suffix_min[i + 1]) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            };
        }
        ValuationProfile { n_start, vals, suffix_min, tail_increment, terminated }
    }

    /// `min_{m >= n} v(m)`, or `None` if every term from `n` on is zero.
    pub(crate) fn lower_bound(&self, n: u64) -> Option<Exponent> {
        let i = (n - self.n_start) as usize;
        if i < self.suffix_min.len() {
            return self.suffix_min[i];
        }
        if self.terminated {
            return None;
        }
        let (a, b) = self.tail_increment.expect("open profile has an increment");
        let last = self.vals.len() - 1;
        let v_last = self.vals[last]?;
        let m0 = exp_int((self.n_start + last as u64) as i64);
        let k = exp_int((i - last) as i64);
        // sum_{j=0}^{k-1} (a + b (m0 + j))
        Some(v_last + a * k + b * (m0 * k + k * (k - exp_int(1)) / exp_int(2)))
    }
}

/// Common grid of the start term, the ratio, and a bound.
fn family_grid(start: &QProductExpr, ratio: &RatioSpec, bound: Exponent) -> i64 {
    lcm(lcm(start.grid(), ratio.grid()), *bound.denom())
}

fn to_index(e: Exponent, grid: i64) -> i64 {
    let s = e * grid;
    debug_assert!(s.is_integer());
    s.to_integer()
}

/// Successive terms `coeff * q^{exp} * U(q)` with `U(0) = 1`, all on one grid.
pub(crate) struct TermStream {
    ratio: RatioSpec,
    grid: i64,
    bound: i64,
    pub(crate) n: u64,
    pub(crate) coeff: BigRational,
    pub(crate) exp: i64,
    pub(crate) unit: Vec<BigRational>,
    done: bool,
}

impl TermStream {
    /// `floor` is a lower bound for every exponent the stream will reach.
    pub(crate) fn new(
        start: &QProductExpr,
        ratio: &RatioSpec,
        n_start: u64,
        bound: Exponent,
        floor: Exponent,
    ) -> Result<Self> {
        let grid = family_grid(start, ratio, bound);
        let bound_idx = to_index(bound, grid);
        let x = start.normalize()?;
        let floor_idx = to_index(floor, grid).min(bound_idx);
        let len = (bound_idx - floor_idx).max(0) as usize;
        let mut unit = vec![BigRational::zero(); len];
        if len > 0 {
            unit[0] = BigRational::one();
        }
        for f in &x.factors {
            mul_binomial(&mut unit, &f.c, to_index(f.m, grid) as usize, f.e);
        }
        let done = x.is_zero();
        Ok(TermStream {
            ratio: ratio.clone(),
            grid,
            bound: bound_idx,
            n: n_start,
            coeff: x.coeff,
            exp: if done { bound_idx } else { to_index(x.exp, grid) },
            unit,
            done,
        })
    }

    pub(crate) fn grid(&self) -> i64 {
        self.grid
    }

    pub(crate) fn bound(&self) -> i64 {
        self.bound
    }

    /// Whether every remaining term is zero.
    pub(crate) fn is_done(&self) -> bool {
        self.done
    }

    /// Moves to term `n + 1`; `keep` is how many unit coefficients remain useful.
    pub(crate) fn advance(&mut self, keep: usize) -> Result<()> {
        if self.done {
            self.n += 1;
            return Ok(());
        }
        let r = self.ratio.at(self.n).normalize()?;
        self.n += 1;
        if r.is_zero() {
            self.done = true;
            self.exp = self.bound;
            return Ok(());
        }
        self.unit.truncate(keep.min(self.unit.len()));
        for f in &r.factors {
            mul_binomial(&mut self.unit, &f.c, to_index(f.m, self.grid) as usize, f.e);
        }
        self.coeff *= &r.coeff;
        self.exp += to_index(r.exp, self.grid);
        Ok(())
    }

    /// Current term as a series.
    pub(crate) fn term_series(&self) -> TruncatedQSeries {
        if self.done || self.exp >= self.bound {
            return TruncatedQSeries::zero_on_grid(self.grid, self.bound);
        }
        let len = ((self.bound - self.exp) as usize).min(self.unit.len());
        let c = self.unit[..len].iter().map(|u| u * &self.coeff).collect();
        TruncatedQSeries::from_parts(self.grid, self.exp, c, self.bound)
    }
}

/// Dense accumulator over exponent indices `[lo, bound)` on a fixed grid.
pub(crate) struct Accumulator {
    grid: i64,
    lo: i64,
    bound: i64,
    v: Vec<BigRational>,
}

impl Accumulator {
    pub(crate) fn new(grid: i64, bound: i64) -> Self {
        Accumulator { grid, lo: bound, bound, v: Vec::new() }
    }

    fn reserve_from(&mut self, lo: i64) {
        if lo < self.lo {
            let extra = (self.lo - lo) as usize;
            let mut nv = vec![BigRational::zero(); extra];
            nv.append(&mut self.v);
            self.v = nv;
            self.lo = lo;
        }
    }

    /// Adds `coeff * q^{exp} * U`.
    pub(crate) fn add_scaled(&mut self, coeff: &BigRational, exp: i64, unit: &[BigRational]) {
        if exp >= self.bound || coeff.is_zero() {
            return;
        }
        self.reserve_from(exp);
        let len = ((self.bound - exp) as usize).min(unit.len());
        let base = (exp - self.lo) as usize;
        let one = coeff.is_one();
        let minus_one = (-coeff).is_one();
        for (i, u) in unit[..len].iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            if one {
                self.v[base + i] += u;
            } else if minus_one {
                self.v[base + i] -= u;
            } else {
                self.v[base + i] += u * coeff;
            }
        }
    }

    pub(crate) fn add_series(&mut self, s: &TruncatedQSeries, factor: &BigRational) {
        let s = s.rescale(lcm(s.grid(), self.grid));
        assert_eq!(s.grid(), self.grid, "accumulator grid must be compatible");
        self.add_scaled(factor, s.offset_index(), s.raw_coeffs());
    }

    pub(crate) fn into_series(self) -> TruncatedQSeries {
        TruncatedQSeries::from_parts(self.grid, self.lo, self.v, self.bound)
    }
}

/// `sum_{n >= n_start} H_n` modulo `q^bound`, plus the number of terms used.
pub(crate) fn sum_family(
    start: &QProductExpr,
    ratio: &RatioSpec,
    n_start: u64,
    bound: Exponent,
) -> Result<(TruncatedQSeries, u64)> {
    let profile = ValuationProfile::new(start, ratio, n_start, false)?;
    let floor = profile.lower_bound(n_start).unwrap_or(bound).min(bound);
    let mut stream = TermStream::new(start, ratio, n_start, bound, floor)?;
    let grid = stream.grid();
    let bound_idx = stream.bound();
    let mut acc = Accumulator::new(grid, bound_idx);
    let mut used = 0;
    loop {
        let n = stream.n;
        let lb = match profile.lower_bound(n) {
            Some(lb) => to_index(lb, grid),
            None => break,
        };
        if lb >= bound_idx || stream.is_done() {
            break;
        }
        debug_assert!(stream.exp >= lb, "term {n} below its valuation lower bound");
        acc.add_scaled(&stream.coeff, stream.exp, &stream.unit);
        used += 1;
        let keep = profile
            .lower_bound(n + 1)
            .map(|l| (bound_idx - to_index(l, grid)).max(0) as usize)
            .unwrap_or(0);
        stream.advance(keep)?;
    }
    Ok((acc.into_series(), used))
}

/// Configuration of a sums-of-tails computation.
#[derive(Clone, Debug)]
pub struct TailOptions {
    /// Consecutive terms without valuation progress that signal a stall.
    pub stall_window: usize,
}

impl Default for TailOptions {
    fn default() -> Self {
        TailOptions { stall_window: 50 }
    }
}

/// Lower bound `a n + b` on the valuation of `H_n(q^{-1}) - H_inf(q^{-1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub slope: Exponent,
    pub offset: Exponent,
}

impl TailBound {
    pub fn new(slope: i64, offset: i64) -> Self {
        TailBound { slope: exp_int(slope), offset: exp_int(offset) }
    }

    pub fn at(&self, n: u64) -> Exponent {
        self.slope * exp_int(n as i64) + self.offset
    }
}

/// `sum_{n >= n_start} (T_n - L)` for the transformed family `T` and limit `L`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn sum_tails(
    name: &str,
    start: &QProductExpr,
    ratio: &RatioSpec,
    n_start: u64,
    limit: &TruncatedQSeries,
    tail_bound: Option<TailBound>,
    bound: Exponent,
    opts: &TailOptions,
) -> Result<(TruncatedQSeries, u64)> {
    let non_expandable = |n: u64| Error::NonExpandableTail { family: name.to_string(), n };
    let profile = ValuationProfile::new(start, ratio, n_start, true).map_err(|_| non_expandable(n_start))?;
    let floor = profile.lower_bound(n_start).unwrap_or(bound).min(bound).min(limit.valuation().unwrap_or(bound));
    let mut stream = TermStream::new(start, ratio, n_start, bound, floor).map_err(|_| non_expandable(n_start))?;
    let grid = lcm(stream.grid(), limit.grid());
    if grid != stream.grid() {
        return Err(Error::InvalidArgument(format!("limit of {name} lives on a finer grid than its terms")));
    }
    let limit = limit.rescale(grid);
    let bound_idx = stream.bound().min(limit.bound_index());
    let mut acc = Accumulator::new(grid, bound_idx);
    let mut count: i64 = 0;
    let mut best: i64 = i64::MIN;
    let mut last_progress = n_start;
    loop {
        let n = stream.n;
        if let Some(tb) = tail_bound {
            if to_index(tb.at(n), grid) >= bound_idx {
                break;
            }
        }
        let diff = stream.term_series().sub_series(&limit).truncate(Exponent::new(bound_idx, grid));
        let v = diff.valuation().map(|x| to_index(x, grid)).unwrap_or(bound_idx);
        if let Some(tb) = tail_bound {
            if v < to_index(tb.at(n), grid) {
                return Err(Error::InvalidArgument(format!(
                    "tail term {n} of {name} has valuation below its declared bound"
                )));
            }
        }
        if v > best {
            best = v;
            last_progress = n;
        }
        if best < bound_idx && (n - last_progress) as usize >= opts.stall_window {
            return Err(Error::StallDetected { family: name.to_string(), window: opts.stall_window, n });
        }
        if tail_bound.is_none() && best >= bound_idx && (n - last_progress) as usize >= opts.stall_window {
            break;
        }
        if !stream.is_done() {
            acc.add_scaled(&stream.coeff, stream.exp, &stream.unit);
        }
        count += 1;
        if stream.n > n_start + LOOKAHEAD_CAP {
            return Err(Error::StallDetected { family: name.to_string(), window: opts.stall_window, n });
        }
        stream.advance(stream.unit.len()).map_err(|_| non_expandable(n + 1))?;
    }
    acc.add_series(&limit, &BigRational::from_integer((-count).into()));
    Ok((acc.into_series(), (stream.n - n_start)))
}

/// `sum_{n_start <= n < n_start + count} H_n` modulo `q^bound`.
pub(crate) fn partial_sum(
    start: &QProductExpr,
    ratio: &RatioSpec,
    n_start: u64,
    count: u64,
    bound: Exponent,
) -> Result<TruncatedQSeries> {
    let mut floor = bound;
    let mut x = start.normalize()?;
    for j in 0..count {
        if x.is_zero() {
            break;
        }
        floor = floor.min(x.exp);
        x = x.times(&ratio.at(n_start + j)).normalize()?;
    }
    let mut stream = TermStream::new(start, ratio, n_start, bound, floor)?;
    let mut acc = Accumulator::new(stream.grid(), stream.bound());
    for _ in 0..count {
        if stream.is_done() {
            break;
        }
        acc.add_scaled(&stream.coeff, stream.exp, &stream.unit);
        let keep = stream.unit.len();
        stream.advance(keep)?;
    }
    Ok(acc.into_series())
}
