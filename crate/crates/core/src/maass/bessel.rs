//! Modified Bessel functions `K_nu(t)` for real order and positive argument.
//!
//! Both evaluators use `K_nu(t) = int_0^inf exp(-t cosh u) cosh(nu u) du` after the
//! substitution `x = 2 sqrt(t) sinh(u / 2)`, which turns the integral into
//! `(1/2) e^{-t} int_R exp(-x^2 / 2) cosh(nu u(x)) / sqrt(t + x^2 / 4) dx`.
//! The trapezoidal rule converges geometrically on that integrand; the step is
//! limited by the Gaussian and by the branch points at `x = +-2i sqrt(t)`.

use crate::error::{Error, Result};
use crate::mp::{digits_to_bits, MpReal};

/// Largest number of digits the multiprecision evaluator is validated for.
pub const MAX_VALIDATED_DIGITS: usize = 40;

fn step_and_cutoff(t: f64, digits: usize) -> (f64, f64) {
    let budget = (digits as f64 + 3.0) * std::f64::consts::LN_10;
    let h = (4.0 * std::f64::consts::PI * t.sqrt() / budget).min(0.4);
    let x_max = (2.0 * (budget + 2.0 * std::f64::consts::LN_10)).sqrt();
    (h, x_max)
}

fn cosh_order(nu: f64, x: f64, t: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else if nu == 1.0 || nu == -1.0 {
        // cosh(2 asinh w) = 1 + 2 w^2
        1.0 + x * x / (2.0 * t)
    } else {
        (nu * 2.0 * (x / (2.0 * t.sqrt())).asinh()).cosh()
    }
}

/// `K_nu(t)` in double precision.
pub fn k_f64(nu: f64, t: f64) -> f64 {
    assert!(t > 0.0, "K_nu needs t > 0, got {t}");
    let (h, x_max) = step_and_cutoff(t, 17);
    let f = |x: f64| (-0.5 * x * x).exp() * cosh_order(nu, x, t) / (t + 0.25 * x * x).sqrt();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1.0;
    loop {
        let x = k * h;
        if x > x_max {
            break;
        }
        sum += f(x);
        k += 1.0;
    }
    (-t).exp() * h * sum
}

pub fn k0_f64(t: f64) -> f64 {
    k_f64(0.0, t)
}

pub fn k1_f64(t: f64) -> f64 {
    k_f64(1.0, t)
}

fn trapezoid_mp(nu: &MpReal, t: &MpReal, h: &MpReal, x_max: f64, p: usize) -> MpReal {
    let one = MpReal::one(p);
    let quarter = MpReal::from_ratio64(&num_rational::Ratio::new(1, 4), p);
    let half = MpReal::from_ratio64(&num_rational::Ratio::new(1, 2), p);
    let two_sqrt_t = MpReal::from_i64(2, p) * t.sqrt();
    let f = |x: &MpReal| {
        let gauss = (-(&half * &(x * x))).exp();
        let w = x / &two_sqrt_t;
        let u = MpReal::from_i64(2, p) * (&w + &(&w * &w + &one).sqrt()).ln();
        let nu_u = nu * &u;
        let cosh = (nu_u.exp() + (-nu_u).exp()) * &half;
        gauss * cosh / (t + &(&quarter * &(x * x))).sqrt()
    };
    let mut sum = &half * &f(&MpReal::zero(p));
    let mut k = 1i64;
    loop {
        let x = MpReal::from_i64(k, p) * h;
        if x.to_f64() > x_max {
            break;
        }
        sum = sum + f(&x);
        k += 1;
    }
    (-t).exp() * h * sum
}

/// `K_nu(t)` to `digits` decimal digits, checked against a run at half the step.
pub fn bessel_k(nu: f64, t: &MpReal, digits: usize) -> Result<MpReal> {
    if digits > MAX_VALIDATED_DIGITS {
        return Err(Error::PrecisionUnreachable { requested: digits, max: MAX_VALIDATED_DIGITS });
    }
    if t.is_zero() || t.is_negative() {
        return Err(Error::InvalidArgument(format!("K_nu needs t > 0, got {t}")));
    }
    let p = digits_to_bits(digits + 10);
    let t = MpReal::from_f64(0.0, p) + t;
    let nu = MpReal::from_f64(nu, p);
    let (h, x_max) = step_and_cutoff(t.to_f64(), digits);
    let h = MpReal::from_f64(h, p);
    let coarse = trapezoid_mp(&nu, &t, &h, x_max, p);
    let fine = trapezoid_mp(&nu, &t, &(&h / &MpReal::from_i64(2, p)), x_max, p);
    let diff = ((&fine - &coarse) / &fine).abs().to_f64();
    let tol = 10f64.powi(-(digits as i32));
    if diff > tol {
        return Err(Error::QuadratureNotConverged { diff, tol });
    }
    Ok(fine)
}
