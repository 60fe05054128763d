//! Named q-series as term families, ghost closed forms, Fine's series and identity checks.

mod closed;
mod engine;
mod fine;
pub mod identities;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{rat, QProductExpr};
use crate::series::{Exponent, TruncatedQSeries};

pub use closed::{ClosedForm, LambertSum, ProductFactor};
pub use engine::{RatioFactor, RatioSpec, TailBound, TailOptions};
pub use fine::{fine_f, fine_f_regularized, FineParams, Monomial};
pub use identities::{verify_identity, verify_identity_with, IdentityId, IdentityInstance, VerificationReport};

pub(crate) use engine::{sum_family, sum_tails};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedSeriesId {
    Sigma,
    SigmaStar,
    W,
    SW,
    W1,
    W2,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    LL,
    L,
    GhostSigma,
    GhostSigmaStar,
    GhostW,
    GhostSW,
    ChallengeTail,
}

impl NamedSeriesId {
    pub const ALL: [NamedSeriesId; 21] = [
        NamedSeriesId::Sigma,
        NamedSeriesId::SigmaStar,
        NamedSeriesId::W,
        NamedSeriesId::SW,
        NamedSeriesId::W1,
        NamedSeriesId::W2,
        NamedSeriesId::F1,
        NamedSeriesId::F2,
        NamedSeriesId::F3,
        NamedSeriesId::F4,
        NamedSeriesId::F5,
        NamedSeriesId::F6,
        NamedSeriesId::F7,
        NamedSeriesId::F8,
        NamedSeriesId::LL,
        NamedSeriesId::L,
        NamedSeriesId::GhostSigma,
        NamedSeriesId::GhostSigmaStar,
        NamedSeriesId::GhostW,
        NamedSeriesId::GhostSW,
        NamedSeriesId::ChallengeTail,
    ];

    pub fn as_str(&self) -> &'static str {
        use NamedSeriesId::*;
        match self {
            Sigma => "SIGMA",
            SigmaStar => "SIGMA_STAR",
            W => "W",
            SW => "SW",
            W1 => "W1",
            W2 => "W2",
            F1 => "F1",
            F2 => "F2",
            F3 => "F3",
            F4 => "F4",
            F5 => "F5",
            F6 => "F6",
            F7 => "F7",
            F8 => "F8",
            LL => "LL",
            L => "L",
            GhostSigma => "GHOST_SIGMA",
            GhostSigmaStar => "GHOST_SIGMA_STAR",
            GhostW => "GHOST_W",
            GhostSW => "GHOST_SW",
            ChallengeTail => "CHALLENGE_TAIL",
        }
    }

    pub fn is_ghost(&self) -> bool {
        matches!(
            self,
            NamedSeriesId::GhostSigma | NamedSeriesId::GhostSigmaStar | NamedSeriesId::GhostW | NamedSeriesId::GhostSW
        )
    }
}

impl fmt::Display for NamedSeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedSeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        let key = match key.as_str() {
            "S[W]" | "S_W" => "SW",
            "SIGMA*" => "SIGMA_STAR",
            "CHALLENGE" => "CHALLENGE_TAIL",
            k => k,
        }
        .to_string();
        NamedSeriesId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown series id {s}")))
    }
}

/// A q-hypergeometric family `sum_{n >= n_start} H_n(q)` with renormalization data.
#[derive(Clone, Debug)]
pub struct SeriesFamily {
    pub name: String,
    pub n_start: u64,
    /// `H_{n_start}`.
    pub start: QProductExpr,
    /// `H_{n+1} / H_n`.
    pub ratio: RatioSpec,
    /// `H_inf(q^{-1})`.
    pub limit: Option<ClosedForm>,
    /// Lower bound on the valuation of `H_n(q^{-1}) - H_inf(q^{-1})`.
    pub tail_bound: Option<TailBound>,
}

impl SeriesFamily {
    pub fn new(name: &str, n_start: u64, start: QProductExpr, ratio: RatioSpec) -> Self {
        SeriesFamily { name: name.to_string(), n_start, start, ratio, limit: None, tail_bound: None }
    }

    pub fn with_limit(mut self, limit: ClosedForm, tail_bound: TailBound) -> Self {
        self.limit = Some(limit);
        self.tail_bound = Some(tail_bound);
        self
    }

    /// Closed form of `H_n`, normalized.
    pub fn term(&self, n: u64) -> Result<QProductExpr> {
        assert!(n >= self.n_start, "term index below n_start");
        let mut x = self.start.clone();
        for j in self.n_start..n {
            x = x.times(&self.ratio.at(j));
        }
        x.normalize()
    }

    /// Guaranteed lowest exponent of every `H_m` with `m >= n` (`None` if all vanish).
    pub fn valuation_lower_bound(&self, n: u64) -> Result<Option<Exponent>> {
        let p = engine::ValuationProfile::new(&self.start, &self.ratio, self.n_start, false)?;
        Ok(p.lower_bound(n))
    }

    /// `sum_n H_n` modulo `q^bound` and the number of terms used.
    pub fn sum(&self, bound: Exponent) -> Result<(TruncatedQSeries, u64)> {
        sum_family(&self.start, &self.ratio, self.n_start, bound)
    }

    /// The family `n -> H_n(q^{-1})` (no renormalization data).
    pub fn transformed(&self) -> Result<SeriesFamily> {
        Ok(SeriesFamily::new(
            &format!("{}(1/q)", self.name),
            self.n_start,
            self.start.subst_qinv()?,
            self.ratio.subst_qinv()?,
        ))
    }

    /// Multiplies every term by `c q^e`.
    pub fn scaled(mut self, c: BigRational, e: Exponent) -> Self {
        self.start = self.start.scaled(&c).shifted(e);
        self
    }

    /// The family after `q -> q^k`.
    pub fn subst_power(&self, k: i64) -> SeriesFamily {
        SeriesFamily::new(&format!("{}(q^{k})", self.name), self.n_start, self.start.subst_power(k), self.ratio.subst_power(k))
    }

    /// `sum_n (H_n(q^{-1}) - H_inf(q^{-1}))` and the number of terms used.
    pub fn tails(&self, bound: Exponent, opts: &TailOptions) -> Result<(TruncatedQSeries, u64)> {
        let limit = self.limit.as_ref().ok_or_else(|| Error::NoLimitTerm(self.name.clone()))?;
        let t = self.transformed().map_err(|_| Error::NonExpandableTail { family: self.name.clone(), n: self.n_start })?;
        let lim = limit.to_series(bound)?;
        sum_tails(&self.name, &t.start, &t.ratio, self.n_start, &lim, self.tail_bound, bound, opts)
    }
}

fn expr(c: i64, k: i64) -> QProductExpr {
    QProductExpr::mono(c, k)
}

fn q_over(c: i64, k: i64, dens: &[(i64, i64)]) -> QProductExpr {
    let mut x = expr(c, k);
    for &(cc, m) in dens {
        x = x.factor(rat(cc), Exponent::from_integer(m), -1);
    }
    x
}

/// `1/(-q;q)_inf`.
pub fn limit_sigma() -> ClosedForm {
    ClosedForm::product(rat(1), vec![ProductFactor::new(1, 1, 1, -1)])
}

/// `2/(q;q^2)_inf`.
pub fn limit_sigma_star() -> ClosedForm {
    ClosedForm::product(rat(2), vec![ProductFactor::new(-1, 1, 2, -1)])
}

/// `(-1;q^2)_inf/(q;q^2)_inf`.
pub fn limit_w() -> ClosedForm {
    ClosedForm::product(rat(1), vec![ProductFactor::new(1, 0, 2, 1), ProductFactor::new(-1, 1, 2, -1)])
}

/// `-(q;q^2)_inf/(-q^2;q^2)_inf`.
pub fn limit_sw() -> ClosedForm {
    ClosedForm::product(rat(-1), vec![ProductFactor::new(-1, 1, 2, 1), ProductFactor::new(1, 2, 2, -1)])
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// `E = sum_{n>=1} q^{2n}/(1-q^{2n}) + sum_{n>=0} q^{2n+1}/(1+q^{2n+1})`, scaled by `k`.
fn split_lambert(k: i64) -> Vec<LambertSum> {
    vec![LambertSum::new(rat(k), 1, 2, 0, -1), LambertSum::new(rat(k), 0, 2, 1, 1)]
}

/// Closed form of a ghost term.
pub fn ghost_closed_form(id: NamedSeriesId) -> Option<ClosedForm> {
    use NamedSeriesId::*;
    Some(match id {
        GhostSigma => ClosedForm::product(rat(-1), vec![ProductFactor::new(1, 1, 1, -1)])
            .with_sum(rat(0), vec![LambertSum::new(rat(1), 1, 1, 0, -1)]),
        GhostSigmaStar => ClosedForm::product(rat(1), vec![ProductFactor::new(-1, 1, 2, -1)])
            .with_sum(rat(1), vec![LambertSum::new(rat(-2), 1, 2, 0, -1)]),
        GhostW => ClosedForm::product(rat(1), vec![ProductFactor::new(1, 0, 2, 1), ProductFactor::new(-1, 1, 2, -1)])
            .with_sum(half(), split_lambert(-1)),
        GhostSW => ClosedForm::product(rat(1), vec![ProductFactor::new(-1, 1, 2, 1), ProductFactor::new(1, 2, 2, -1)])
            .with_sum(rat(0), split_lambert(1)),
        _ => return None,
    })
}

/// Ghost id attached to a renormalizable family.
pub fn ghost_of(id: NamedSeriesId) -> Option<NamedSeriesId> {
    use NamedSeriesId::*;
    match id {
        Sigma => Some(GhostSigma),
        SigmaStar => Some(GhostSigmaStar),
        W => Some(GhostW),
        SW => Some(GhostSW),
        _ => None,
    }
}

/// The term family behind a non-ghost id.
pub fn family(id: NamedSeriesId) -> Option<SeriesFamily> {
    use NamedSeriesId::*;
    let f = match id {
        Sigma => SeriesFamily::new("SIGMA", 0, expr(1, 0), RatioSpec::new(1, 1, 1).with(1, 1, 1, -1))
            .with_limit(limit_sigma(), TailBound::new(1, 1)),
        SigmaStar => SeriesFamily::new(
            "SIGMA_STAR",
            1,
            q_over(-2, 1, &[(-1, 1)]),
            RatioSpec::new(-1, 1, 2).with(-1, 1, 2, -1),
        )
        .with_limit(limit_sigma_star(), TailBound::new(2, 1)),
        W | W2 => SeriesFamily::new(
            if id == W { "W" } else { "W2" },
            1,
            q_over(-2, 1, &[(-1, 1)]),
            RatioSpec::new(-1, 1, 0).with(1, 0, 2, 1).with(-1, 1, 2, -1),
        )
        .with_limit(limit_w(), TailBound::new(2, 0)),
        SW => SeriesFamily::new("SW", 0, expr(-1, 0), RatioSpec::new(-1, 1, 0).with(-1, 1, 2, 1).with(1, 2, 2, -1))
            .with_limit(limit_sw(), TailBound::new(2, 1)),
        W1 => SeriesFamily::new("W1", 0, expr(1, 0), RatioSpec::new(-1, 1, 1).with(-1, 1, 1, 1).with(1, 1, 1, -1)),
        F1 => SeriesFamily::new(
            "F1",
            0,
            q_over(1, 0, &[(-1, 1)]),
            RatioSpec::new(1, 1, 1).with(-1, 1, 2, 1).with(1, 1, 1, -1).with(-1, 3, 2, -1),
        ),
        F2 => SeriesFamily::new(
            "F2",
            1,
            q_over(1, 1, &[(-1, 1)]),
            RatioSpec::new(1, 1, 1).with(-1, -1, 2, 1).with(1, 0, 1, -1).with(-1, 1, 2, -1),
        ),
        F3 => SeriesFamily::new(
            "F3",
            0,
            q_over(1, 0, &[(1, 1)]),
            RatioSpec::new(1, 1, 0).with(-1, 1, 2, 1).with(-1, 2, 2, 1).with(1, 2, 2, -1).with(1, 3, 2, -1),
        ),
        F4 => SeriesFamily::new(
            "F4",
            0,
            q_over(1, 1, &[(1, 1), (1, 2)]).factor(rat(-1), Exponent::from_integer(1), 1),
            RatioSpec::new(1, 1, 0).with(-1, 2, 2, 1).with(-1, 3, 2, 1).with(1, 3, 2, -1).with(1, 4, 2, -1),
        ),
        F5 => SeriesFamily::new(
            "F5",
            0,
            q_over(1, 0, &[(-1, 1)]),
            RatioSpec::new(-1, 1, 1).with(-1, 1, 1, 1).with(-1, 3, 2, -1),
        ),
        F6 => SeriesFamily::new(
            "F6",
            1,
            q_over(-1, 1, &[(-1, 1)]),
            RatioSpec::new(-1, 1, 0).with(-1, 0, 1, 1).with(-1, 1, 2, -1),
        ),
        F7 => SeriesFamily::new(
            "F7",
            0,
            q_over(1, 0, &[(1, 1)]),
            RatioSpec::new(-1, 2, 2).with(-1, 2, 2, 1).with(1, 2, 2, -1).with(1, 3, 2, -1),
        ),
        F8 => SeriesFamily::new(
            "F8",
            1,
            q_over(1, 1, &[(1, 1)]),
            RatioSpec::new(1, 1, 0).with(-1, 0, 1, 1).with(1, 0, 1, 1).with(1, 0, 2, -1).with(1, 1, 2, -1),
        ),
        LL => SeriesFamily::new("LL", 1, q_over(-1, 1, &[(1, 1)]), RatioSpec::new(-1, 1, 1).with(-1, 0, 1, 1).with(1, 1, 1, -1)),
        L => SeriesFamily::new("L", 1, q_over(1, 1, &[(1, 2)]), RatioSpec::new(1, 1, 0).with(-1, 0, 2, 1).with(1, 2, 2, -1)),
        ChallengeTail => SeriesFamily::new(
            "CHALLENGE_TAIL",
            0,
            q_over(1, 1, &[(1, 1)]),
            RatioSpec::new(1, 2, 0).with(1, 1, 2, 1).with(1, 2, 2, -1).with(1, 3, 2, -1),
        ),
        GhostSigma | GhostSigmaStar | GhostW | GhostSW => return None,
    };
    Some(f)
}

/// Exact expansion of a named series modulo `q^bound`.
pub fn build_series(id: NamedSeriesId, bound: Exponent) -> Result<TruncatedQSeries> {
    if bound <= Exponent::from_integer(0) {
        return Ok(TruncatedQSeries::zero(bound.max(Exponent::from_integer(0))));
    }
    if let Some(cf) = ghost_closed_form(id) {
        return cf.to_series(bound);
    }
    let fam = family(id).expect("every non-ghost id has a family");
    Ok(fam.sum(bound)?.0)
}
