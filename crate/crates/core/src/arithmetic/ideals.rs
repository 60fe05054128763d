//! Ideal counts in `Z[sqrt 2]` and the coefficient oracles built on them.

use crate::catalog::NamedSeriesId;
use crate::error::{Error, Result};

use super::quad::{signed_class_count, ModulusCondition, QuadOrder};

/// Weight applied to each ideal of norm `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IdealWeight {
    #[default]
    One,
    /// Kronecker symbol `(-4 / N)`.
    KroneckerMinus4,
    /// `(-1)^N`.
    ParitySign,
    /// `i^{N^2 - N}`, which is real.
    QuarterTurn,
}

impl IdealWeight {
    pub fn at(&self, n: i64) -> i64 {
        match self {
            IdealWeight::One => 1,
            IdealWeight::KroneckerMinus4 => match n.rem_euclid(4) {
                1 => 1,
                3 => -1,
                _ => 0,
            },
            IdealWeight::ParitySign => {
                if n % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            IdealWeight::QuarterTurn => {
                if (n * (n - 1) / 2) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

fn factorize(mut m: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Number of ideals of `Z[sqrt 2]` with norm `m`.
pub fn ideal_norm_count(m: i64) -> i64 {
    factorize(m)
        .into_iter()
        .map(|(p, e)| match p {
            2 => 1,
            _ if matches!(p % 8, 1 | 7) => e as i64 + 1,
            _ => i64::from(e % 2 == 0),
        })
        .product()
}

/// Weighted number of ideals of norm `m` in `Z[sqrt 2]`, zero unless `m mod 16` lies in `residues`.
pub fn ideal_count(order: &QuadOrder, m: i64, residues: Option<&[i64]>, weight: IdealWeight) -> Result<i64> {
    if order.d != 2 {
        return Err(Error::InvalidArgument("ideal counts are implemented for Z[sqrt 2] only".into()));
    }
    if m < 1 {
        return Err(Error::InvalidArgument(format!("ideal norm must be positive, got {m}")));
    }
    if residues.is_some_and(|r| !r.contains(&m.rem_euclid(16))) {
        return Ok(0);
    }
    Ok(weight.at(m) * ideal_norm_count(m))
}

/// Coefficient of `q^n` in `id` from ideal or class counts, for the series that have such an oracle.
pub fn coeff_arith(id: NamedSeriesId, n: u64) -> Result<i64> {
    use NamedSeriesId::*;
    let n = n as i64;
    let d2 = QuadOrder::D2;
    let d3 = QuadOrder::D3;
    let one = IdealWeight::One;
    Ok(match id {
        F1 => ideal_count(&d2, 16 * n + 1, Some(&[1]), one)?,
        F2 if n == 0 => 0,
        F2 => ideal_count(&d2, 16 * n - 7, Some(&[9]), one)?,
        F3 => ideal_count(&d2, 2 * n + 1, None, IdealWeight::KroneckerMinus4)?,
        F4 if n == 0 => 0,
        F4 => -ideal_count(&d2, n, None, IdealWeight::ParitySign)?,
        F5 => signed_class_count(&d3, 4 * n + 1, 1, Some(&ModulusCondition::new(4, &[1])), false)?,
        F6 if n == 0 => 0,
        F6 => -signed_class_count(&d3, 4 * n - 1, -1, Some(&ModulusCondition::new(4, &[3])), false)?,
        F7 => -signed_class_count(&d3, 3 * n + 1, 1, Some(&ModulusCondition::new(3, &[1])), true)?,
        F8 if n == 0 => 0,
        F8 => signed_class_count(&d3, 3 * n - 1, -1, Some(&ModulusCondition::new(3, &[2])), true)?,
        LL if n == 0 => 0,
        LL => -ideal_count(&d2, n, None, IdealWeight::QuarterTurn)?,
        Sigma => super::quad::sigma_coeff_arith(n as u64)?,
        SigmaStar if n == 0 => 0,
        SigmaStar => super::quad::sigma_star_coeff_arith(n as u64)?,
        W if n == 0 => 0,
        W => super::character::tw_pos(8 * n - 1)?,
        W1 => super::character::tw_pos(8 * n + 1)?,
        other => return Err(Error::InvalidArgument(format!("no arithmetic oracle for {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::quad::pell_classes;
    use crate::catalog::build_series;
    use crate::series::Exponent;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        let d2 = QuadOrder::D2;
        assert_eq!(ideal_count(&d2, 17, Some(&[1]), IdealWeight::One).unwrap(), 2);
        assert_eq!(ideal_count(&d2, 9, Some(&[9]), IdealWeight::One).unwrap(), 1);
        assert_eq!(ideal_count(&d2, 1, None, IdealWeight::One).unwrap(), 1);
        assert_eq!(ideal_count(&d2, 9, Some(&[1]), IdealWeight::One).unwrap(), 0);
    }

    #[test]
    fn oracles_match_series() {
        let bound = 120u64;
        for id in [
            NamedSeriesId::F1,
            NamedSeriesId::F2,
            NamedSeriesId::F3,
            NamedSeriesId::F4,
            NamedSeriesId::F5,
            NamedSeriesId::F6,
            NamedSeriesId::F7,
            NamedSeriesId::F8,
            NamedSeriesId::LL,
            NamedSeriesId::W1,
        ] {
            let s = build_series(id, Exponent::from_integer(bound as i64)).unwrap();
            let head = s.head_i64(bound as usize);
            for n in 0..bound {
                assert_eq!(coeff_arith(id, n).unwrap(), head[n as usize], "{id} at q^{n}");
            }
        }
    }

    proptest! {
        #[test]
        fn ideal_count_matches_element_classes(m in 1i64..3000) {
            // classes of norm m under the totally positive unit are ideals of norm m
            prop_assert_eq!(ideal_norm_count(m), pell_classes(&QuadOrder::D2, m).reps.len() as i64);
        }

        #[test]
        fn ideal_count_is_multiplicative(a in 1i64..300, b in 1i64..300) {
            prop_assume!(num_integer::Integer::gcd(&a, &b) == 1);
            prop_assert_eq!(ideal_norm_count(a * b), ideal_norm_count(a) * ideal_norm_count(b));
        }
    }
}
