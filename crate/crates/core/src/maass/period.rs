//! Period integrals of Maass waveforms along vertical rays.
//!
//! For `u` an eigenfunction with eigenvalue `1/4` and `R_z(tau) = Im(tau) / |tau - z|^2`-type kernel
//! `R_z(tau) = (i/2) (1/(tau - z) - 1/(conj(tau) - z))`, the Green's form
//! `[f, g] = f_tau g dtau + f g_{conj tau} dconj(tau)` integrated from `z` up to `i inf`
//! recovers the holomorphic half of the Fourier expansion:
//! `sum_{n > 0} A_n e^{2 pi i n z} = -(2/pi) int_z^{i inf} [u, R_z^{1/2}]`,
//! and for `z` in the lower half-plane
//! `sum_{n < 0} A_n e^{2 pi i n z} = -(2/pi) int_{conj z}^{i inf} [R_z^{1/2}, u]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::waveform::MaassEvalContext;
use crate::error::{Error, Result};

/// Composite Gauss-Legendre rule, refined by doubling the panel count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub order: usize,
    pub panels: usize,
    pub tol: f64,
    pub max_refinements: u32,
    /// The ray is cut where every mode has decayed by `e^{-decay}`.
    pub decay: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { order: 20, panels: 4, tol: 1e-10, max_refinements: 6, decay: 42.0 }
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn integrate(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, rule: &[(f64, f64)], panels: usize) -> Complex64 {
    let w = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let (lo, hi) = (a + k as f64 * w, a + (k + 1) as f64 * w);
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for &(x, wt) in rule {
            total += wt * half * f(mid + half * x);
        }
    }
    total
}

/// `-(2/pi)` times the Green's form integral of `ctx` against `R_z^{1/2}` along the vertical ray.
pub fn period_integral(ctx: &MaassEvalContext, z: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::InvalidArgument(format!("period integral needs Im z != 0, got {z}")));
    }
    let upper = z.im > 0.0;
    let (x0, y0) = (z.re, z.im.abs());
    let c_min = ctx
        .coeffs()
        .iter()
        .map(|&(n, _)| 2.0 * PI * (n as f64 / ctx.scale as f64).abs())
        .fold(f64::INFINITY, f64::min);
    if !c_min.is_finite() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let s_max = (quad.decay / c_min).sqrt();
    let i = Complex64::new(0.0, 1.0);
    // y = y0 + s^2 absorbs the (y - y0)^{-1/2} endpoint singularity
    let integrand = |s: f64| {
        let y = y0 + s * s;
        let (u, ux, uy) = ctx.with_gradient(x0, y);
        let r_half_dy = 2.0 * (y / (y + y0)).sqrt();
        let r_inv_half_dy = 2.0 * s * s * ((y + y0) / y).sqrt();
        let dbar = -u * r_inv_half_dy / (4.0 * (y + y0) * (y + y0));
        if upper {
            0.5 * i * (ux - i * uy) * r_half_dy + dbar
        } else {
            dbar - 0.5 * i * (ux + i * uy) * r_half_dy
        }
    };
    let rule = gauss_legendre(quad.order);
    let mut panels = quad.panels.max(1);
    let mut prev = integrate(&integrand, 0.0, s_max, &rule, panels);
    let mut diff = f64::INFINITY;
    for _ in 0..quad.max_refinements {
        panels *= 2;
        let cur = integrate(&integrand, 0.0, s_max, &rule, panels);
        diff = (cur - prev).norm();
        prev = cur;
        if diff <= quad.tol * prev.norm().max(1e-300) || diff < 1e-300 {
            return Ok(-2.0 / PI * prev);
        }
    }
    Err(Error::QuadratureNotConverged { diff, tol: quad.tol })
}

/// The half of `sum A_n e^{2 pi i n z / scale}` that `period_integral` reproduces at `z`.
pub fn period_target(ctx: &MaassEvalContext, z: Complex64) -> Complex64 {
    ctx.fourier_half(z, z.im > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_mode() -> MaassEvalContext {
        MaassEvalContext::from_coeffs(1, vec![(1, 0.5), (-1, 0.5)], true).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(10);
        let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        assert!((rule.iter().map(|r| r.1).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_mode_upper() {
        let z = Complex64::new(0.2, 0.9);
        let got = period_integral(&cos_mode(), z, &QuadratureSpec::default()).unwrap();
        let want = 0.5 * (Complex64::new(0.0, 2.0 * PI) * z).exp();
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn single_mode_lower() {
        let z = Complex64::new(-0.35, -0.6);
        let got = period_integral(&cos_mode(), z, &QuadratureSpec::default()).unwrap();
        let want = period_target(&cos_mode(), z);
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn high_points_give_zero() {
        let z = Complex64::new(0.1, 12.0);
        let got = period_integral(&cos_mode(), z, &QuadratureSpec::default()).unwrap();
        assert!(got.norm() < 1e-20 && period_target(&cos_mode(), z).norm() < 1e-20);
    }

    #[test]
    fn real_points_are_rejected() {
        assert!(period_integral(&cos_mode(), Complex64::new(0.5, 0.0), &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn full_phi0_matches_sigma_partial_sum() {
        let ctx = MaassEvalContext::phi0_for(1.2, 1e-12).unwrap();
        let z = Complex64::new(0.1, 1.2);
        let got = period_integral(&ctx, z, &QuadratureSpec::default()).unwrap();
        let want = period_target(&ctx, z);
        assert!((got - want).norm() < 1e-6, "{got} vs {want}");
    }
}
