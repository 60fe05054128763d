//! The quartic character mod 16 and the divisor sum `T_W`.

use crate::error::{Error, Result};

/// A character on `(Z/16)^x` with values `i^k`, stored as the exponent `k mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mod16Character {
    /// `values[r]` is the exponent at residue `r`, `None` off the unit group.
    pub values: [Option<u8>; 16],
}

impl Mod16Character {
    /// The character with `chi(-1) = 1`, `chi(3) = i`.
    pub fn chi_w() -> Self {
        let mut values = [None; 16];
        // (Z/16)^x = <-1> x <3>; 3 has order 4
        let mut g = 1u32;
        for k in 0..4u8 {
            values[g as usize] = Some(k);
            values[(16 - g) as usize] = Some(k);
            g = g * 3 % 16;
        }
        Mod16Character { values }
    }

    /// Exponent `k` with `chi(n) = i^k`, or `None` for even `n`.
    pub fn exponent(&self, n: i64) -> Option<u8> {
        self.values[n.rem_euclid(16) as usize]
    }

    /// `chi(n)` as a Gaussian integer `(re, im)`.
    pub fn value(&self, n: i64) -> (i64, i64) {
        match self.exponent(n) {
            None => (0, 0),
            Some(k) => I_POWERS[k as usize],
        }
    }
}

const I_POWERS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// `T_W(m) = sum_{d | m} chi(d) conj(chi(m/d))`, asserted to be a real integer.
pub fn tw_pos(m: i64) -> Result<i64> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("tw_pos needs m >= 1, got {m}")));
    }
    if m % 2 == 0 {
        return Ok(0);
    }
    let chi = Mod16Character::chi_w();
    let (mut re, mut im) = (0i64, 0i64);
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            for (x, y) in [(d, m / d), (m / d, d)] {
                let k = (chi.exponent(x).unwrap() + 4 - chi.exponent(y).unwrap()) % 4;
                let (a, b) = I_POWERS[k as usize];
                re += a;
                im += b;
                if x == y {
                    break;
                }
            }
        }
        d += 1;
    }
    if im != 0 {
        return Err(Error::NonRealValue(m));
    }
    Ok(re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    #[test]
    fn character_table() {
        let chi = Mod16Character::chi_w();
        let expect = [(1, (1, 0)), (3, (0, 1)), (5, (0, -1)), (7, (-1, 0)), (9, (-1, 0)), (11, (0, -1)), (13, (0, 1)), (15, (1, 0))];
        for (r, v) in expect {
            assert_eq!(chi.value(r), v, "chi({r})");
        }
        assert_eq!(chi.value(4), (0, 0));
    }

    #[test]
    fn known_values() {
        assert_eq!(tw_pos(1).unwrap(), 1);
        assert_eq!(tw_pos(7).unwrap(), -2);
        assert_eq!(tw_pos(23).unwrap(), -2);
        assert_eq!(tw_pos(8).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn character_is_multiplicative(a in 1i64..500, b in 1i64..500) {
            let chi = Mod16Character::chi_w();
            let (x, y) = (chi.value(a), chi.value(b));
            prop_assert_eq!(chi.value(a * b), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0));
        }

        #[test]
        fn tw_is_multiplicative(a in 1i64..400, b in 1i64..400) {
            prop_assume!(a.gcd(&b) == 1);
            prop_assert_eq!(tw_pos(a * b).unwrap(), tw_pos(a).unwrap() * tw_pos(b).unwrap());
        }
    }
}
