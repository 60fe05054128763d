//! Quantum modular forms at roots of unity: the pair `(sigma, sigma*)` and `f_W`.

use num_rational::Ratio;
use num_traits::Zero;

use super::cusp::{classify_cusp, CuspOrbit, Mat2};
use crate::error::{Error, Result};
use crate::mp::{digits_to_bits, MpComplex};

fn is_integer(r: Ratio<i64>) -> bool {
    r.is_integer()
}

fn is_half_odd(r: Ratio<i64>) -> bool {
    (r - Ratio::new(1, 2)).is_integer()
}

/// `sigma(q)` and `sigma*(q)` at `q = e^{2 pi i x}` with the number of nonzero terms of each sum.
#[derive(Clone, Debug)]
pub struct SigmaQuantumValue {
    pub sigma: MpComplex,
    pub sigma_star: MpComplex,
    pub sigma_terms: usize,
    pub sigma_star_terms: usize,
}

/// `sigma(q) = 1 + sum_{n>=0} q^{n+1} (q-1)(q^2-1)...(q^n-1)` and
/// `sigma*(q) = -2 sum_{n>=0} q^{n+1} (1-q^2)(1-q^4)...(1-q^{2n})`, both finite at roots of unity.
pub fn quantum_eval_sigma(x: Ratio<i64>, digits: usize) -> SigmaQuantumValue {
    let p = digits_to_bits(digits);
    let q = MpComplex::cis_turns(&x, p);
    let one = MpComplex::one(p);

    let mut sigma = one.clone();
    let mut prod = one.clone();
    let mut qn1 = q.clone();
    let mut sigma_terms = 0;
    for n in 0i64.. {
        if n > 0 {
            if is_integer(x * n) {
                break;
            }
            prod = &prod * &(&MpComplex::cis_turns(&(x * n), p) - &one);
        }
        sigma = &sigma + &(&qn1 * &prod);
        qn1 = &qn1 * &q;
        sigma_terms += 1;
    }

    let mut star = MpComplex::zero(p);
    let mut prod = one.clone();
    let mut qn1 = q.clone();
    let mut sigma_star_terms = 0;
    for n in 0i64.. {
        if n > 0 {
            if is_integer(x * (2 * n)) {
                break;
            }
            prod = &prod * &(&one - &MpComplex::cis_turns(&(x * (2 * n)), p));
        }
        star = &star + &(&qn1 * &prod);
        qn1 = &qn1 * &q;
        sigma_star_terms += 1;
    }
    let sigma_star = star * MpComplex::from_f64(-2.0, 0.0, p);
    SigmaQuantumValue { sigma, sigma_star, sigma_terms, sigma_star_terms }
}

/// `|sigma(q^{-1}) + sigma*(q)|` at `q = e^{2 pi i x}`.
pub fn cohen_residual(x: Ratio<i64>, digits: usize) -> f64 {
    let minus = quantum_eval_sigma(-x, digits);
    let plus = quantum_eval_sigma(x, digits);
    (&minus.sigma + &plus.sigma_star).abs().to_f64()
}

/// `q^{-1/8} W(q)` on `S_INF` and `q^{-1/8} S[W](q^{-1})` on `S_0`, `q = e^{2 pi i x}`.
pub fn quantum_eval_fw(x: Ratio<i64>, digits: usize) -> Result<MpComplex> {
    let p = digits_to_bits(digits);
    let one = MpComplex::one(p);
    let order = *x.denom();
    let cis = |t: Ratio<i64>| MpComplex::cis_turns(&t, p);
    let value = match classify_cusp(x).class {
        CuspOrbit::SHalf => return Err(Error::DomainHole { x: x.to_string() }),
        CuspOrbit::SInf => {
            // sum_{n>=1} (-1;q^2)_n (-1)^n q^n / (q;q^2)_n
            let mut sum = MpComplex::zero(p);
            let mut ratio = one.clone();
            let mut j = 0i64;
            loop {
                if j > order {
                    return Err(Error::NonTerminating(format!("W at x = {x}")));
                }
                if is_half_odd(x * (2 * j)) {
                    break;
                }
                if is_integer(x * (2 * j + 1)) {
                    return Err(Error::PoleAtPoint(format!("W at x = {x}")));
                }
                ratio = &ratio * &(&(&one + &cis(x * (2 * j))) / &(&one - &cis(x * (2 * j + 1))));
                let n = j + 1;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sum = &sum + &(&(&ratio * &cis(x * n)) * &MpComplex::from_f64(sign, 0.0, p));
                j += 1;
            }
            sum
        }
        CuspOrbit::S0 => {
            // sum_{n>=0} (-1)^{n+1} s^n (s;s^2)_n / (-s^2;s^2)_n with s = q^{-1}
            let y = -x;
            let mut sum = MpComplex::from_f64(-1.0, 0.0, p);
            let mut ratio = one.clone();
            let mut j = 0i64;
            loop {
                if j > order {
                    return Err(Error::NonTerminating(format!("S[W](q^-1) at x = {x}")));
                }
                if is_integer(y * (2 * j + 1)) {
                    break;
                }
                if is_half_odd(y * (2 * j + 2)) {
                    return Err(Error::PoleAtPoint(format!("S[W](q^-1) at x = {x}")));
                }
                ratio = &ratio * &(&(&one - &cis(y * (2 * j + 1))) / &(&one + &cis(y * (2 * j + 2))));
                let n = j + 1;
                let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
                sum = &sum + &(&(&ratio * &cis(y * n)) * &MpComplex::from_f64(sign, 0.0, p));
                j += 1;
            }
            sum
        }
    };
    Ok(&cis(-x * Ratio::new(1, 8)) * &value)
}

/// Generators of `Gamma_0(4)` used for period functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    A,
    B,
    C,
}

impl Generator {
    pub fn matrix(&self) -> Mat2 {
        match self {
            Generator::A => Mat2::new(1, 1, 0, 1),
            Generator::B => Mat2::new(3, -1, 4, -1),
            Generator::C => Mat2::new(-1, 0, 0, -1),
        }
    }

    /// The weight-one multiplier `nu_1` as a number of turns.
    pub fn multiplier_turns(&self) -> Ratio<i64> {
        match self {
            Generator::A => Ratio::new(-1, 8),
            Generator::B => Ratio::zero(),
            Generator::C => Ratio::new(1, 2),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Generator::A),
            "B" | "b" => Ok(Generator::B),
            "C" | "c" => Ok(Generator::C),
            _ => Err(Error::Parse(format!("unknown generator {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodSample {
    pub x: Ratio<i64>,
    pub h: MpComplex,
}

/// `h_gamma(x) = nu_1(gamma) f_W(x) - f_W(gamma x) / (c x + d)`.
pub fn period_function(gamma: Generator, x: Ratio<i64>, digits: usize) -> Result<MpComplex> {
    let p = digits_to_bits(digits);
    let m = gamma.matrix();
    let gx = match m.act(x) {
        super::cusp::ProjectivePoint::Finite(v) => v,
        super::cusp::ProjectivePoint::Infinity => {
            return Err(Error::PoleAtPoint(format!("{gamma:?} sends {x} to infinity")))
        }
    };
    let cxd = Ratio::from_integer(m.c) * x + Ratio::from_integer(m.d);
    let cxd = MpComplex::from_real(crate::mp::MpReal::from_ratio64(&cxd, p));
    let nu = MpComplex::cis_turns(&gamma.multiplier_turns(), p);
    let fx = quantum_eval_fw(x, digits)?;
    let fgx = quantum_eval_fw(gx, digits)?;
    Ok(&(&nu * &fx) - &(&fgx / &cxd))
}

pub fn period_function_sample(gamma: Generator, xs: &[Ratio<i64>], digits: usize) -> Result<Vec<PeriodSample>> {
    xs.iter().map(|&x| period_function(gamma, x, digits).map(|h| PeriodSample { x, h })).collect()
}

/// Rows `x_num,x_den,re_h,im_h`.
pub fn period_samples_csv(samples: &[PeriodSample]) -> String {
    let mut out = String::from("x_num,x_den,re_h,im_h\n");
    for s in samples {
        let (re, im) = s.h.to_f64();
        out.push_str(&format!("{},{},{:e},{:e}\n", s.x.numer(), s.x.denom(), re, im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: &MpComplex, re: f64, im: f64, tol: f64) -> bool {
        let (a, b) = z.to_f64();
        (a - re).abs() < tol && (b - im).abs() < tol
    }

    #[test]
    fn sigma_at_one_and_minus_one() {
        let v = quantum_eval_sigma(Ratio::from_integer(0), 30);
        assert!(close(&v.sigma, 2.0, 0.0, 1e-25) && close(&v.sigma_star, -2.0, 0.0, 1e-25));
        assert_eq!((v.sigma_terms, v.sigma_star_terms), (1, 1));
        assert!(cohen_residual(Ratio::new(1, 2), 30) < 1e-25);
    }

    #[test]
    fn cohen_relation_small_orders() {
        for k in 1..=12i64 {
            for a in 0..k {
                if num_integer::Integer::gcd(&a, &k) == 1 {
                    assert!(cohen_residual(Ratio::new(a, k), 50) < 1e-40, "{a}/{k}");
                }
            }
        }
    }

    #[test]
    fn fw_reference_values() {
        // independent mpmath evaluation of the terminating sums
        let f0 = quantum_eval_fw(Ratio::from_integer(0), 30).unwrap();
        assert!(close(&f0, -1.0, 0.0, 1e-25));
        let f14 = quantum_eval_fw(Ratio::new(1, 4), 30).unwrap();
        assert!(close(&f14, 0.78569, -1.17588, 1e-5), "{f14}");
        let f13 = quantum_eval_fw(Ratio::new(1, 3), 30).unwrap();
        assert!(close(&f13, -2.63896, -0.18947, 1e-5), "{f13}");
    }

    #[test]
    fn half_orbit_is_a_hole() {
        assert!(matches!(quantum_eval_fw(Ratio::new(1, 2), 30), Err(Error::DomainHole { .. })));
        assert!(matches!(quantum_eval_fw(Ratio::new(5, 6), 30), Err(Error::DomainHole { .. })));
    }

    #[test]
    fn translation_and_sign_period_functions_vanish() {
        for x in [Ratio::new(1, 4), Ratio::new(2, 5), Ratio::new(-3, 8), Ratio::new(7, 9)] {
            for g in [Generator::A, Generator::C] {
                assert!(period_function(g, x, 40).unwrap().abs().to_f64() < 1e-30, "{g:?} {x}");
            }
        }
    }

    #[test]
    fn b_period_function_settles_toward_one_third() {
        let xs: Vec<_> = (1..=15).map(|k| Ratio::new(2 * k, 6 * k + 1)).collect();
        let h: Vec<_> = period_function_sample(Generator::B, &xs, 30).unwrap();
        let gaps: Vec<f64> = h.windows(2).map(|w| (&w[1].h - &w[0].h).abs().to_f64()).collect();
        assert!(gaps.windows(2).all(|g| g[1] < g[0]), "{gaps:?}");
        let (re, im) = h[0].h.to_f64();
        // mpmath value at x = 2/7
        assert!((re - 0.663842960150950646).abs() < 1e-15 && (im + 0.456065739108682087).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let s = period_function_sample(Generator::A, &[Ratio::new(1, 3)], 30).unwrap();
        let csv = period_samples_csv(&s);
        assert!(csv.starts_with("x_num,x_den,re_h,im_h\n1,3,"));
    }
}
