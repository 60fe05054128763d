//! Cusps of `Gamma_0(4)`: which of `inf`, `0`, `1/2` a rational number is equivalent to.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

/// The three cusp orbits of `Gamma_0(4)` on `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CuspOrbit {
    SInf,
    S0,
    SHalf,
}

impl CuspOrbit {
    pub fn as_str(&self) -> &'static str {
        match self {
            CuspOrbit::SInf => "S_INF",
            CuspOrbit::S0 => "S_0",
            CuspOrbit::SHalf => "S_HALF",
        }
    }

    /// The representative cusp of the orbit.
    pub fn representative(&self) -> ProjectivePoint {
        match self {
            CuspOrbit::SInf => ProjectivePoint::Infinity,
            CuspOrbit::S0 => ProjectivePoint::Finite(Ratio::from_integer(0)),
            CuspOrbit::SHalf => ProjectivePoint::Finite(Ratio::new(1, 2)),
        }
    }
}

impl fmt::Display for CuspOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point of `P^1(Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectivePoint {
    Infinity,
    Finite(Ratio<i64>),
}

/// An integer 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn in_gamma0_4(&self) -> bool {
        self.det() == 1 && self.c % 4 == 0
    }

    /// Mobius action on a rational number.
    pub fn act(&self, x: Ratio<i64>) -> ProjectivePoint {
        let (p, r) = (*x.numer(), *x.denom());
        let (num, den) = (self.a * p + self.b * r, self.c * p + self.d * r);
        if den == 0 {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite(Ratio::new(num, den))
        }
    }
}

/// A rational number with its cusp orbit and a matrix of `Gamma_0(4)` carrying it to the representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspClass {
    pub x: Ratio<i64>,
    pub class: CuspOrbit,
    pub witness: Mat2,
}

impl CuspClass {
    pub fn verify(&self) -> bool {
        self.witness.in_gamma0_4() && self.witness.act(self.x) == self.class.representative()
    }
}

/// `(u, v)` with `p u + r v = 1` for coprime `p`, `r`.
fn bezout(p: i64, r: i64) -> (i64, i64) {
    let e = p.extended_gcd(&r);
    debug_assert_eq!(e.gcd.abs(), 1);
    (e.x * e.gcd, e.y * e.gcd)
}

/// Orbit by the denominator mod 4, with a witness built from a Bezout relation.
pub fn classify_cusp(x: Ratio<i64>) -> CuspClass {
    let (p, r) = (*x.numer(), *x.denom());
    let (class, witness) = if r % 4 == 0 {
        // [[u, v], [r, -p]] sends p/r to inf once -p u - r v = 1
        let (u, v) = bezout(-p, -r);
        (CuspOrbit::SInf, Mat2::new(u, v, r, -p))
    } else if r % 2 == 1 {
        // [[r, -p], [4c, d]] sends p/r to 0 once r d + 4 p c = 1
        let (d, c) = bezout(r, 4 * p);
        (CuspOrbit::S0, Mat2::new(r, -p, 4 * c, d))
    } else {
        // [[1, 0], [2, 1]] [[u, v], [r, -p]]; the lower-left entry is 2u + r = 0 mod 4 because u is odd
        let (u, v) = bezout(-p, -r);
        (CuspOrbit::SHalf, Mat2::new(1, 0, 2, 1).mul(&Mat2::new(u, v, r, -p)))
    };
    let out = CuspClass { x, class, witness };
    debug_assert!(out.verify(), "{out:?}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        assert_eq!(classify_cusp(Ratio::new(1, 4)).class, CuspOrbit::SInf);
        assert_eq!(classify_cusp(Ratio::new(1, 3)).class, CuspOrbit::S0);
        assert_eq!(classify_cusp(Ratio::new(1, 2)).class, CuspOrbit::SHalf);
        assert_eq!(classify_cusp(Ratio::from_integer(5)).class, CuspOrbit::S0);
        for x in [Ratio::new(1, 4), Ratio::new(1, 3), Ratio::new(1, 2), Ratio::new(-7, 12)] {
            assert!(classify_cusp(x).verify());
        }
    }

    proptest! {
        #[test]
        fn witnesses_verify(p in -500i64..500, r in 1i64..500) {
            let x = Ratio::new(p, r);
            let c = classify_cusp(x);
            prop_assert!(c.verify(), "{:?}", c);
            let den = *x.denom();
            let expected = if den % 4 == 0 { CuspOrbit::SInf } else if den % 2 == 1 { CuspOrbit::S0 } else { CuspOrbit::SHalf };
            prop_assert_eq!(c.class, expected);
        }

        #[test]
        fn s_inf_is_a_over_4b(a in -300i64..300, b in 1i64..100) {
            prop_assume!(a.gcd(&(4 * b)) == 1);
            prop_assert_eq!(classify_cusp(Ratio::new(a, 4 * b)).class, CuspOrbit::SInf);
        }
    }
}
