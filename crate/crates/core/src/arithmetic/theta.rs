//! Indefinite theta double sums.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::series::{Exponent, TruncatedQSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaId {
    /// `sum_{n>=0} sum_{|j|<=n} (-1)^{n+j} q^{2n^2+n-j^2} (1 - q^{2n+1})`.
    W1Theta,
    /// `sum_{n>=1} sum_{-n<j<=n} (-1)^n q^{2n^2-n-j^2+j} (1 + q^{2n})`, equal to `W2`.
    W2Theta,
    /// `sum_{n>=1} sum_{-n<=j<n} (-1)^n q^{2n^2-n-j^2+j} (1 + q^n)`, the literal printed form.
    W2ThetaPrinted,
    /// `sum_{n>=1} sum_{-n<j<=n} (-1)^{n+j+1} q^{2n^2-j^2}`.
    LLTheta,
}

impl ThetaId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThetaId::W1Theta => "W1_THETA",
            ThetaId::W2Theta => "W2_THETA",
            ThetaId::W2ThetaPrinted => "W2_THETA_PRINTED",
            ThetaId::LLTheta => "LL_THETA",
        }
    }
}

impl fmt::Display for ThetaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ThetaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ThetaId::W1Theta, ThetaId::W2Theta, ThetaId::W2ThetaPrinted, ThetaId::LLTheta]
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theta sum {s}")))
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact expansion of a theta double sum modulo `q^bound` (integer part of the bound).
pub fn theta_double_sum(id: ThetaId, bound: Exponent) -> TruncatedQSeries {
    let b = bound.ceil().to_integer().max(0);
    let mut c = vec![0i64; b as usize];
    let mut put = |e: i64, v: i64| {
        if (0..b).contains(&e) {
            c[e as usize] += v;
        }
    };
    let mut n: i64 = 0;
    loop {
        let min_exp = match id {
            ThetaId::W1Theta => n * n + n,
            ThetaId::W2Theta | ThetaId::LLTheta => n * n,
            ThetaId::W2ThetaPrinted => n * n - 2 * n,
        };
        if min_exp >= b && n >= 2 {
            break;
        }
        match id {
            ThetaId::W1Theta => {
                for j in -n..=n {
                    let e = 2 * n * n + n - j * j;
                    let s = sign(n + j);
                    put(e, s);
                    put(e + 2 * n + 1, -s);
                }
            }
            ThetaId::W2Theta if n >= 1 => {
                for j in (-n + 1)..=n {
                    let e = 2 * n * n - n - j * j + j;
                    put(e, sign(n));
                    put(e + 2 * n, sign(n));
                }
            }
            ThetaId::W2ThetaPrinted if n >= 1 => {
                for j in -n..n {
                    let e = 2 * n * n - n - j * j + j;
                    put(e, sign(n));
                    put(e + n, sign(n));
                }
            }
            ThetaId::LLTheta if n >= 1 => {
                for j in (-n + 1)..=n {
                    put(2 * n * n - j * j, sign(n + j + 1));
                }
            }
            _ => {}
        }
        n += 1;
    }
    let coeffs: Vec<BigRational> = c.into_iter().map(|x| BigRational::from_integer(x.into())).collect();
    let s = TruncatedQSeries::from_parts(1, 0, coeffs, b);
    if bound.is_integer() {
        s
    } else {
        s.truncate(bound)
    }
}
