//! Truncated Bessel-Fourier sums for the Maass waveforms and their residual checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::bessel::{k0_f64, k1_f64};
use crate::arithmetic::{sigma_coeff_arith, sigma_star_coeff_arith, tw_pos};
use crate::catalog::{build_series, NamedSeriesId};
use crate::error::{Error, Result};
use crate::series::Exponent;

/// Default accuracy target for certified tails.
pub const DEFAULT_TARGET: f64 = 1e-10;
/// Smallest imaginary part accepted by default.
pub const DEFAULT_Y_MIN: f64 = 0.05;

/// A point `x + iy` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidArgument(format!("{x} + {y}i is not in the upper half-plane")));
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    fn from_z(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

/// Coefficients `A_n` of `y^{1/2} sum_n A_n K_0(2 pi |n| y / scale) e^{2 pi i n x / scale}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaassEvalContext {
    pub scale: i64,
    pub n_max: i64,
    /// Decimal digits of the arithmetic; evaluation is in double precision.
    pub precision: usize,
    /// Accuracy target for the certified tail.
    pub target: f64,
    /// True when the coefficient list is the whole expansion, so the tail vanishes.
    pub complete: bool,
    coeffs: Vec<(i64, f64)>,
}

impl MaassEvalContext {
    /// An expansion given explicitly; `complete` marks finite expansions.
    pub fn from_coeffs(scale: i64, coeffs: Vec<(i64, f64)>, complete: bool) -> Result<Self> {
        if scale < 1 {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        if coeffs.iter().any(|&(n, _)| n == 0) {
            return Err(Error::InvalidArgument("the constant mode has no K_0 term".into()));
        }
        let n_max = coeffs.iter().map(|&(n, _)| n.abs()).max().unwrap_or(0);
        Ok(MaassEvalContext { scale, n_max, precision: 16, target: DEFAULT_TARGET, complete, coeffs })
    }

    /// `phi_0`: `T(24k + 1) = S(k)` and `T(1 - 24k) = S*(k)` from the Pell oracle, `|n| <= n_max`.
    pub fn phi0(n_max: i64) -> Result<Self> {
        check_n_max(n_max, 24)?;
        let mut coeffs = Vec::new();
        for k in 0..=(n_max - 1) / 24 {
            push_nonzero(&mut coeffs, 24 * k + 1, sigma_coeff_arith(k as u64)?);
        }
        for k in 1..=(n_max + 1) / 24 {
            push_nonzero(&mut coeffs, 1 - 24 * k, sigma_star_coeff_arith(k as u64)?);
        }
        Ok(Self::with_truncation(24, n_max, coeffs))
    }

    /// `phi_{0,W}`: `T_W(n)` for `n = 8k + 1 > 0` and the coefficient of `q^k` in `W` for `n = 1 - 8k`.
    pub fn phi0_w(n_max: i64) -> Result<Self> {
        check_n_max(n_max, 8)?;
        let mut coeffs = Vec::new();
        for k in 0..=(n_max - 1) / 8 {
            push_nonzero(&mut coeffs, 8 * k + 1, tw_pos(8 * k + 1)?);
        }
        let k_top = (n_max + 1) / 8;
        let w = build_series(NamedSeriesId::W, Exponent::from_integer(k_top + 1))?.head_i64(k_top as usize + 1);
        for k in 1..=k_top {
            push_nonzero(&mut coeffs, 1 - 8 * k, w[k as usize]);
        }
        Ok(Self::with_truncation(8, n_max, coeffs))
    }

    /// `phi_{0,W}` truncated just far enough for `target` at every `y >= y_min`.
    pub fn phi0_w_for(y_min: f64, target: f64) -> Result<Self> {
        let mut ctx = Self::phi0_w(n_max_for(8, y_min, target)?)?;
        ctx.target = target;
        Ok(ctx)
    }

    /// `phi_0` truncated just far enough for `target` at every `y >= y_min`.
    pub fn phi0_for(y_min: f64, target: f64) -> Result<Self> {
        let mut ctx = Self::phi0(n_max_for(24, y_min, target)?)?;
        ctx.target = target;
        Ok(ctx)
    }

    fn with_truncation(scale: i64, n_max: i64, coeffs: Vec<(i64, f64)>) -> Self {
        MaassEvalContext { scale, n_max, precision: 16, target: DEFAULT_TARGET, complete: false, coeffs }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = target;
        self
    }

    pub fn coeffs(&self) -> &[(i64, f64)] {
        &self.coeffs
    }

    fn lambda(&self, n: i64) -> f64 {
        n as f64 / self.scale as f64
    }

    /// Bound on the omitted terms at height `y`, using `|A_n| <= 2 sqrt|n|` and `K_0 <= K_{1/2}`.
    pub fn tail_bound(&self, y: f64) -> f64 {
        if self.complete {
            return 0.0;
        }
        tail_estimate(self.scale, self.n_max, y)
    }

    /// The truncated sum at `z` without tail checks.
    pub fn sum(&self, z: UpperHalfPoint) -> Complex64 {
        self.coeffs.iter().map(|&(n, a)| a * self.mode(n, z)).sum()
    }

    /// `y^{1/2} K_0(2 pi |n| y / scale) e^{2 pi i n x / scale}`.
    pub fn mode(&self, n: i64, z: UpperHalfPoint) -> Complex64 {
        let lam = self.lambda(n);
        let t = 2.0 * PI * lam.abs() * z.y;
        if t > 700.0 {
            return Complex64::new(0.0, 0.0);
        }
        z.y.sqrt() * k0_f64(t) * Complex64::from_polar(1.0, 2.0 * PI * lam * z.x)
    }

    /// `(u, u_x, u_y)` of the truncated sum at `x + iy`.
    pub fn with_gradient(&self, x: f64, y: f64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut u, mut ux, mut uy) = (zero, zero, zero);
        let sy = y.sqrt();
        for &(n, a) in &self.coeffs {
            let lam = self.lambda(n);
            let c = 2.0 * PI * lam.abs();
            let t = c * y;
            if t > 700.0 {
                continue;
            }
            let e = a * Complex64::from_polar(1.0, 2.0 * PI * lam * x);
            let k0 = k0_f64(t);
            u += sy * k0 * e;
            ux += sy * k0 * Complex64::new(0.0, 2.0 * PI * lam) * e;
            uy += (k0 / (2.0 * sy) - sy * c * k1_f64(t)) * e;
        }
        (u, ux, uy)
    }

    /// Positive or negative half of the holomorphic sum `sum A_n e^{2 pi i n z / scale}`.
    pub fn fourier_half(&self, z: Complex64, positive: bool) -> Complex64 {
        self.coeffs
            .iter()
            .filter(|&&(n, _)| (n > 0) == positive)
            .map(|&(n, a)| a * (Complex64::new(0.0, 2.0 * PI * self.lambda(n)) * z).exp())
            .sum()
    }
}

fn check_n_max(n_max: i64, scale: i64) -> Result<()> {
    if n_max < scale {
        return Err(Error::InvalidArgument(format!("n_max must be at least {scale}, got {n_max}")));
    }
    Ok(())
}

fn push_nonzero(coeffs: &mut Vec<(i64, f64)>, n: i64, a: i64) {
    if a != 0 {
        coeffs.push((n, a as f64));
    }
}

fn tail_estimate(scale: i64, n_max: i64, y: f64) -> f64 {
    let c = 2.0 * PI * y / scale as f64;
    4.0 * y.sqrt() * (PI / (2.0 * c)).sqrt() * (-c * (n_max + 1) as f64).exp() / (1.0 - (-c).exp())
}

/// Smallest truncation whose certified tail at `y_min` is below `target`.
pub fn n_max_for(scale: i64, y_min: f64, target: f64) -> Result<i64> {
    if !(y_min > 0.0) || !(target > 0.0) {
        return Err(Error::InvalidArgument(format!("need y_min > 0 and target > 0, got {y_min}, {target}")));
    }
    let mut n = scale;
    while tail_estimate(scale, n, y_min) > target {
        n += scale;
        if n > 10_000_000 {
            return Err(Error::TailTooLarge { tail: tail_estimate(scale, n, y_min), target });
        }
    }
    Ok(n)
}

/// A waveform value with its certified truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

pub fn phi_eval(ctx: &MaassEvalContext, z: UpperHalfPoint) -> Result<PhiValue> {
    let tail = ctx.tail_bound(z.y);
    if tail > ctx.target {
        return Err(Error::TailTooLarge { tail, target: ctx.target });
    }
    Ok(PhiValue { value: ctx.sum(z), tail_bound: tail })
}

/// Machine-readable outcome of a residual check over a set of points.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub check: String,
    pub grid: Vec<(f64, f64)>,
    pub max_residual: f64,
    pub tail_bound: f64,
}

impl ResidualReport {
    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "grid": self.grid.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "max_residual": self.max_residual,
            "tail_bound": self.tail_bound,
        })
    }

    fn merge(check: &str, parts: impl IntoIterator<Item = ((f64, f64), f64, f64)>) -> Self {
        let mut r = ResidualReport { check: check.into(), grid: Vec::new(), max_residual: 0.0, tail_bound: 0.0 };
        for (pt, res, tail) in parts {
            r.grid.push(pt);
            r.max_residual = r.max_residual.max(res);
            r.tail_bound = r.tail_bound.max(tail);
        }
        r
    }
}

/// `|phi(-1/(4z)) - conj phi(z)|` at one point, with the combined tail bound.
pub fn s_transform_residual(ctx: &MaassEvalContext, z: UpperHalfPoint) -> Result<(f64, f64)> {
    let w = UpperHalfPoint::from_z(-1.0 / (4.0 * z.z()))?;
    let a = phi_eval(ctx, z)?;
    let b = phi_eval(ctx, w)?;
    Ok(((b.value - a.value.conj()).norm(), a.tail_bound + b.tail_bound))
}

pub fn s_transform_check(ctx: &MaassEvalContext, points: &[UpperHalfPoint]) -> Result<ResidualReport> {
    let parts = points
        .iter()
        .map(|&z| s_transform_residual(ctx, z).map(|(r, t)| ((z.x, z.y), r, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::merge("s-transform", parts))
}

/// The phase `e^{2 pi i / scale}` picked up under `z -> z + 1`, once every index is `1 mod scale`.
pub fn translation_phase(ctx: &MaassEvalContext) -> Result<Complex64> {
    if let Some(&(n, _)) = ctx.coeffs.iter().find(|&&(n, _)| (n - 1).rem_euclid(ctx.scale) != 0) {
        return Err(Error::InvalidArgument(format!("index {n} is not 1 mod {}", ctx.scale)));
    }
    Ok(Complex64::from_polar(1.0, 2.0 * PI / ctx.scale as f64))
}

/// Largest termwise deviation of `mode(z + 1)` from `phase * mode(z)`.
pub fn translation_check(ctx: &MaassEvalContext, points: &[UpperHalfPoint]) -> Result<ResidualReport> {
    let phase = translation_phase(ctx)?;
    let mut parts = Vec::new();
    for &z in points {
        let shifted = UpperHalfPoint::new(z.x + 1.0, z.y)?;
        let mut worst = 0.0f64;
        for &(n, a) in &ctx.coeffs {
            let d = a * (ctx.mode(n, shifted) - phase * ctx.mode(n, z));
            worst = worst.max(d.norm());
        }
        parts.push(((z.x, z.y), worst, 0.0));
    }
    Ok(ResidualReport::merge("translate", parts))
}

/// `|Delta_h phi - phi / 4|` with `Delta = -y^2 (d_xx + d_yy)` on a five-point stencil.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplacianResidual {
    pub h: f64,
    pub residual: f64,
    pub phi_abs: f64,
}

impl LaplacianResidual {
    pub fn relative(&self) -> f64 {
        self.residual / self.phi_abs
    }
}

pub fn laplacian_residual(ctx: &MaassEvalContext, z: UpperHalfPoint, h: f64) -> Result<LaplacianResidual> {
    if !(h > 0.0) || z.y - h <= 0.0 {
        return Err(Error::InvalidArgument(format!("stencil of step {h} at y = {} leaves the half-plane", z.y)));
    }
    let at = |dx: f64, dy: f64| UpperHalfPoint::new(z.x + dx, z.y + dy).map(|p| ctx.sum(p));
    let c = phi_eval(ctx, z)?.value;
    let lap = at(h, 0.0)? + at(-h, 0.0)? + at(0.0, h)? + at(0.0, -h)? - 4.0 * c;
    let delta = -z.y * z.y * lap / (h * h);
    Ok(LaplacianResidual { h, residual: (delta - c / 4.0).norm(), phi_abs: c.norm() })
}

/// Residuals at `h` and `h / 2` and their ratio, which is close to 4 for a second-order stencil.
pub fn laplacian_convergence(
    ctx: &MaassEvalContext,
    z: UpperHalfPoint,
    h: f64,
) -> Result<(LaplacianResidual, LaplacianResidual, f64)> {
    let a = laplacian_residual(ctx, z, h)?;
    let b = laplacian_residual(ctx, z, h / 2.0)?;
    Ok((a, b, a.residual / b.residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, y).unwrap()
    }

    #[test]
    fn fixed_point_value_is_real() {
        let ctx = MaassEvalContext::phi0_w_for(0.5, 1e-12).unwrap();
        let v = phi_eval(&ctx, pt(0.0, 0.5)).unwrap();
        assert!(v.value.im.abs() <= v.tail_bound + 1e-14, "{v:?}");
    }

    #[test]
    fn s_transform_at_sample_point() {
        let ctx = MaassEvalContext::phi0_w(400).unwrap().with_target(1e-6);
        let (r, tail) = s_transform_residual(&ctx, pt(0.3, 0.8)).unwrap();
        assert!(r < 1e-8, "residual {r:e}, tail {tail:e}");
    }

    #[test]
    fn translation_is_termwise() {
        let ctx = MaassEvalContext::phi0_w(200).unwrap();
        let r = translation_check(&ctx, &[pt(0.1, 0.7), pt(-0.4, 1.3)]).unwrap();
        assert!(r.max_residual < 1e-13, "{r:?}");
        let phi0 = MaassEvalContext::phi0(200).unwrap();
        assert!(translation_phase(&phi0).is_ok());
    }

    #[test]
    fn single_mode_laplacian_is_second_order() {
        let ctx = MaassEvalContext::from_coeffs(8, vec![(1, 1.0)], true).unwrap();
        let (_, _, ratio) = laplacian_convergence(&ctx, pt(0.0, 1.0), 0.02).unwrap();
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn full_laplacian_relative_residual() {
        let ctx = MaassEvalContext::phi0_w_for(0.9, 1e-10).unwrap();
        let r = laplacian_residual(&ctx, pt(0.1, 1.0), 1e-3).unwrap();
        assert!(r.relative() < 1e-4, "{r:?}");
    }

    #[test]
    fn too_short_truncation_is_reported() {
        let ctx = MaassEvalContext::phi0_w(16).unwrap();
        assert!(matches!(phi_eval(&ctx, pt(0.0, 0.1)), Err(Error::TailTooLarge { .. })));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let ctx = MaassEvalContext::phi0_w(120).unwrap();
        let (_, ux, uy) = ctx.with_gradient(0.2, 0.9);
        let e = 1e-5;
        let fx = (ctx.sum(pt(0.2 + e, 0.9)) - ctx.sum(pt(0.2 - e, 0.9))) / (2.0 * e);
        let fy = (ctx.sum(pt(0.2, 0.9 + e)) - ctx.sum(pt(0.2, 0.9 - e))) / (2.0 * e);
        assert!((ux - fx).norm() < 1e-7 && (uy - fy).norm() < 1e-7);
    }
}
