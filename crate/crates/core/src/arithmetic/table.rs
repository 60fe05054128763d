//! Immutable coefficient tables with a columnar text format.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::character::tw_pos;
use super::ideals::{ideal_count, IdealWeight};
use super::quad::{signed_class_count, t_sigma, QuadOrder};
use crate::catalog::{build_series, NamedSeriesId};
use crate::error::{Error, Result};
use crate::series::Exponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    TSigma,
    TwPos,
    TwNeg,
    IdealCount,
    SignedClassCount,
}

impl TableKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TableKind::TSigma => "T_SIGMA",
            TableKind::TwPos => "TW_POS",
            TableKind::TwNeg => "TW_NEG",
            TableKind::IdealCount => "IDEAL_COUNT",
            TableKind::SignedClassCount => "SIGNED_CLASS_COUNT",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [TableKind::TSigma, TableKind::TwPos, TableKind::TwNeg, TableKind::IdealCount, TableKind::SignedClassCount]
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown table kind {s}")))
    }
}

pub const T_SIGMA_CONVENTIONS: &str = "T(m), u^2-6v^2=m, weight u+3v mod 12";
pub const TW_POS_CONVENTIONS: &str = "T_W(m) = sum_{d|m} chi(d) conj chi(m/d)";
pub const TW_NEG_CONVENTIONS: &str = "T(1-8k) = coefficient of q^k in W";
pub const SIGNED_CLASS_CONVENTIONS: &str = "classes of u^2-3v^2=m mod <-1, 2+sqrt3>";

pub fn ideal_conventions(weight: IdealWeight) -> String {
    format!("ideals of Z[sqrt 2] of norm m, weight {weight:?}")
}

/// Exact integer coefficients indexed by integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub kind: TableKind,
    pub order_d: Option<i64>,
    /// Free-form description of index and sign conventions; also the cache key.
    pub conventions: String,
    entries: BTreeMap<i64, i64>,
}

impl CoeffTable {
    pub fn new(kind: TableKind, order_d: Option<i64>, conventions: &str) -> Self {
        CoeffTable { kind, order_d, conventions: conventions.to_string(), entries: BTreeMap::new() }
    }

    pub fn from_fn(
        kind: TableKind,
        order_d: Option<i64>,
        conventions: &str,
        indices: impl IntoIterator<Item = i64>,
        f: impl Fn(i64) -> Result<i64>,
    ) -> Result<Self> {
        let mut t = Self::new(kind, order_d, conventions);
        for i in indices {
            t.entries.insert(i, f(i)?);
        }
        Ok(t)
    }

    /// `T(24n + 1)` and `T(1 - 24n)` for `0 <= n <= n_max`.
    pub fn t_sigma(n_max: i64) -> Result<Self> {
        let idx = (0..=n_max).flat_map(|n| [24 * n + 1, 1 - 24 * n]).collect::<std::collections::BTreeSet<_>>();
        Self::from_fn(TableKind::TSigma, Some(6), T_SIGMA_CONVENTIONS, idx, t_sigma)
    }

    /// `T_W(m)` for odd `1 <= m <= m_max`.
    pub fn tw_pos(m_max: i64) -> Result<Self> {
        Self::from_fn(TableKind::TwPos, Some(2), TW_POS_CONVENTIONS, (1..=m_max).step_by(2), tw_pos)
    }

    /// Negative-index coefficients `T(1 - 8k)` read off the W expansion for `1 <= k < k_bound`.
    pub fn tw_neg(k_bound: i64) -> Result<Self> {
        let w = build_series(NamedSeriesId::W, Exponent::from_integer(k_bound))?;
        let head = w.head_i64(k_bound.max(0) as usize);
        let mut t = Self::new(TableKind::TwNeg, Some(2), TW_NEG_CONVENTIONS);
        for k in 1..k_bound {
            t.entries.insert(1 - 8 * k, head[k as usize]);
        }
        Ok(t)
    }

    /// Weighted ideal counts of `Z[sqrt 2]` for `1 <= m <= m_max`.
    pub fn ideal_counts(m_max: i64, weight: IdealWeight) -> Result<Self> {
        Self::from_fn(TableKind::IdealCount, Some(2), &ideal_conventions(weight), 1..=m_max, |m| {
            ideal_count(&QuadOrder::D2, m, None, weight)
        })
    }

    /// Classes of `Z[sqrt 3]` elements of norm `m` for `-m_max <= m <= m_max`, `m != 0`.
    pub fn signed_class_counts(m_max: i64) -> Result<Self> {
        let idx = (-m_max..=m_max).filter(|&m| m != 0);
        Self::from_fn(TableKind::SignedClassCount, Some(3), SIGNED_CLASS_CONVENTIONS, idx, |m| {
            signed_class_count(&QuadOrder::D3, m.abs(), m.signum(), None, false)
        })
    }

    pub fn get(&self, i: i64) -> Option<i64> {
        self.entries.get(&i).copied()
    }

    pub fn entries(&self) -> &BTreeMap<i64, i64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn header(&self) -> Value {
        json!({ "kind": self.kind.as_str(), "order_D": self.order_d, "conventions": self.conventions })
    }

    /// One JSON header line followed by `index,value` rows.
    pub fn to_columnar(&self) -> String {
        let mut out = self.header().to_string();
        out.push('\n');
        for (i, v) in &self.entries {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }

    pub fn from_columnar(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Value = serde_json::from_str(lines.next().ok_or_else(|| Error::Parse("empty table".into()))?)
            .map_err(|e| Error::Parse(format!("table header: {e}")))?;
        let kind: TableKind =
            header["kind"].as_str().ok_or_else(|| Error::Parse("table header lacks kind".into()))?.parse()?;
        let mut t = CoeffTable::new(kind, header["order_D"].as_i64(), header["conventions"].as_str().unwrap_or(""));
        for (k, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("table row {}: {line}", k + 2));
            let (i, v) = line.split_once(',').ok_or_else(bad)?;
            t.entries.insert(i.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columnar_round_trip() {
        let t = CoeffTable::t_sigma(10).unwrap();
        assert_eq!(t.get(25), Some(1));
        assert_eq!(t.get(-23), Some(-2));
        let back = CoeffTable::from_columnar(&t.to_columnar()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn negative_stream_matches_positive_divisor_sums() {
        let neg = CoeffTable::tw_neg(60).unwrap();
        for k in 1..60 {
            assert_eq!(neg.get(1 - 8 * k).unwrap(), tw_pos(8 * k - 1).unwrap());
        }
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(CoeffTable::from_columnar("{\"kind\":\"TW_POS\"}\n1;2\n").is_err());
        assert!(CoeffTable::from_columnar("{\"kind\":\"NOPE\"}\n").is_err());
    }
}
