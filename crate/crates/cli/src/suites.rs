//! Verification suites: independent checks run on a bounded thread pool, reported in a fixed order.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use rayon::prelude::*;
use serde_json::{json, Value};

use qrenorm_core::arithmetic::{coeff_arith, sigma_coeff_arith, sigma_star_coeff_arith, tw_pos};
use qrenorm_core::catalog::{build_series, ghost_of, verify_identity, IdentityId, NamedSeriesId, VerificationReport};
use qrenorm_core::maass::{
    classify_cusp, cohen_residual, laplacian_convergence, period_function, period_integral, period_target,
    quantum_eval_fw, s_transform_check, translation_check, CuspOrbit, Generator, MaassEvalContext, QuadratureSpec,
    UpperHalfPoint,
};
use qrenorm_core::renorm::{check_involution, shadow, shadow_partner};
use qrenorm_core::{Error, Exponent};

use crate::error::CliError;

pub const S_TRANSFORM_TOL: f64 = 1e-8;
pub const TRANSLATION_TOL: f64 = 1e-13;
pub const LAPLACIAN_RATIO: (f64, f64) = (3.5, 4.5);
pub const PERIOD_TOL: f64 = 1e-6;
pub const QUANTUM_TOL: f64 = 1e-12;
const MAX_ROOT_ORDER: i64 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Renorm,
    Arithmetic,
    Maass,
    Quantum,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Renorm => "renorm",
            Suite::Arithmetic => "arithmetic",
            Suite::Maass => "maass",
            Suite::Quantum => "quantum",
            Suite::All => "all",
        }
    }

    fn members(&self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Identities, Suite::Renorm, Suite::Arithmetic, Suite::Maass, Suite::Quantum],
            s => vec![*s],
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    /// Where the first disagreement was found, if any.
    pub first_mismatch: Option<String>,
    pub detail: Value,
}

impl CheckResult {
    fn from_report(suite: &'static str, r: &VerificationReport) -> Self {
        CheckResult {
            suite,
            name: r.id.clone(),
            pass: r.pass,
            first_mismatch: (!r.pass).then(|| match r.first_mismatch {
                Some(e) => format!("q^{e}"),
                None => format!("checked only to q^{}", r.checked_bound),
            }),
            detail: r.to_json(),
        }
    }

    fn from_mismatches(suite: &'static str, name: impl Into<String>, bad: Vec<String>, detail: Value) -> Self {
        CheckResult { suite, name: name.into(), pass: bad.is_empty(), first_mismatch: bad.into_iter().next(), detail }
    }

    fn error(suite: &'static str, name: impl Into<String>, e: &Error) -> Self {
        CheckResult {
            suite,
            name: name.into(),
            pass: false,
            first_mismatch: Some(e.to_string()),
            detail: json!({ "error": e.to_string() }),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "name": self.name,
            "pass": self.pass,
            "first_mismatch": self.first_mismatch,
            "detail": self.detail,
        })
    }
}

type Check = Box<dyn Fn() -> CheckResult + Send + Sync>;

fn check(suite: &'static str, name: &str, f: impl Fn() -> Result<CheckResult, Error> + Send + Sync + 'static) -> Check {
    let name = name.to_string();
    Box::new(move || f().unwrap_or_else(|e| CheckResult::error(suite, name.clone(), &e)))
}

/// Runs `suite` at the given bound and precision on `threads` workers.
pub fn run_suite(suite: Suite, bound: i64, digits: usize, threads: usize) -> Result<Vec<CheckResult>, CliError> {
    let checks: Vec<Check> = suite
        .members()
        .into_iter()
        .flat_map(|s| match s {
            Suite::Identities => identity_checks(bound),
            Suite::Renorm => renorm_checks(bound),
            Suite::Arithmetic => arithmetic_checks(bound),
            Suite::Maass => maass_checks(),
            Suite::Quantum => quantum_checks(bound, digits),
            Suite::All => unreachable!("expanded by members"),
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(|| checks.par_iter().map(|c| c()).collect()))
}

fn exp(n: i64) -> Exponent {
    Exponent::from_integer(n)
}

fn identity_checks(bound: i64) -> Vec<Check> {
    IdentityId::ALL
        .into_iter()
        .map(|id| check("identities", id.as_str(), move || Ok(CheckResult::from_report("identities", &verify_identity(id, exp(bound))?))))
        .collect()
}

fn renorm_checks(bound: i64) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for id in [NamedSeriesId::Sigma, NamedSeriesId::SigmaStar, NamedSeriesId::W, NamedSeriesId::SW] {
        out.push(check("renorm", &format!("SHADOW_{id}"), move || {
            let b = exp(bound);
            let r = shadow(id, b)?;
            let (partner, sign) = shadow_partner(id).expect("renormalizable id");
            let expected = build_series(partner, r.shadow.bound())?.scale(&BigRational::from_integer(sign.into()));
            let ghost = build_series(ghost_of(id).expect("renormalizable id"), r.tails.bound())?;
            let mut bad = Vec::new();
            if let Some(e) = r.shadow.first_mismatch(&expected) {
                bad.push(format!("shadow differs from {}{partner} at q^{e}", if sign < 0 { "-" } else { "" }));
            }
            if let Some(e) = r.tails.sub_series(&expected).first_mismatch(&ghost) {
                bad.push(format!("tails - shadow differs from {} at q^{e}", ghost_of(id).unwrap()));
            }
            let detail = json!({
                "partner": partner.as_str(),
                "sign": sign,
                "n_used": r.n_used,
                "checked_bound": r.shadow.bound().to_string(),
            });
            Ok(CheckResult::from_mismatches("renorm", format!("SHADOW_{id}"), bad, detail))
        }));
    }
    for id in [NamedSeriesId::Sigma, NamedSeriesId::W] {
        out.push(check("renorm", &format!("INVOLUTION_{id}"), move || {
            let mut r = check_involution(id, exp(bound))?;
            r.id = format!("INVOLUTION_{id}");
            Ok(CheckResult::from_report("renorm", &r))
        }));
    }
    out
}

fn arithmetic_checks(bound: i64) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    out.push(check("arithmetic", "SIGMA_ORACLE", move || {
        let s = build_series(NamedSeriesId::Sigma, exp(bound))?.head_i64(bound as usize);
        let mut bad = Vec::new();
        for (n, &c) in s.iter().enumerate() {
            let v = sigma_coeff_arith(n as u64)?;
            if v != c {
                bad.push(format!("q^{n}: series {c}, oracle {v}"));
            }
        }
        Ok(CheckResult::from_mismatches("arithmetic", "SIGMA_ORACLE", bad, json!({ "terms": s.len() })))
    }));
    out.push(check("arithmetic", "SIGMA_STAR_ORACLE", move || {
        let s = build_series(NamedSeriesId::SigmaStar, exp(bound))?.head_i64(bound as usize);
        let mut bad = Vec::new();
        for (n, &c) in s.iter().enumerate().skip(1) {
            let v = sigma_star_coeff_arith(n as u64)?;
            if v != c {
                bad.push(format!("q^{n}: series {c}, oracle {v}"));
            }
        }
        Ok(CheckResult::from_mismatches("arithmetic", "SIGMA_STAR_ORACLE", bad, json!({ "terms": s.len() })))
    }));
    out.push(check("arithmetic", "TW_ORACLE", move || {
        let s = build_series(NamedSeriesId::W, exp(bound))?.head_i64(bound as usize);
        let mut bad = Vec::new();
        for (n, &c) in s.iter().enumerate().skip(1) {
            let v = tw_pos(8 * n as i64 - 1)?;
            if v != c {
                bad.push(format!("q^{n}: series {c}, T_W({}) = {v}", 8 * n - 1));
            }
        }
        Ok(CheckResult::from_mismatches("arithmetic", "TW_ORACLE", bad, json!({ "terms": s.len() })))
    }));
    for id in [NamedSeriesId::F1, NamedSeriesId::F2, NamedSeriesId::F3, NamedSeriesId::F4] {
        let name = format!("{id}_ORACLE");
        out.push(check("arithmetic", &name.clone(), move || {
            let s = build_series(id, exp(bound))?.head_i64(bound as usize);
            let mut bad = Vec::new();
            for (n, &c) in s.iter().enumerate() {
                let v = coeff_arith(id, n as u64)?;
                if v != c {
                    bad.push(format!("q^{n}: series {c}, oracle {v}"));
                }
            }
            Ok(CheckResult::from_mismatches("arithmetic", name.clone(), bad, json!({ "terms": s.len() })))
        }));
    }
    out
}

fn grid() -> Vec<UpperHalfPoint> {
    let xs = [-0.4, -0.2, 0.0, 0.2, 0.4];
    let ys = [0.2, 0.65, 1.1, 1.55, 2.0];
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| UpperHalfPoint::new(x, y).expect("grid point"))).collect()
}

fn grid_context(points: &[UpperHalfPoint]) -> Result<MaassEvalContext, Error> {
    let y_min = points.iter().map(|z| z.y.min((-1.0 / (4.0 * z.z())).im)).fold(f64::INFINITY, f64::min);
    MaassEvalContext::phi0_w_for(y_min, 1e-10)
}

fn maass_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    out.push(check("maass", "S_TRANSFORM", || {
        let g = grid();
        let r = s_transform_check(&grid_context(&g)?, &g)?;
        let bad = if r.max_residual < S_TRANSFORM_TOL {
            vec![]
        } else {
            vec![format!("residual {:e} above {S_TRANSFORM_TOL:e}", r.max_residual)]
        };
        Ok(CheckResult::from_mismatches("maass", "S_TRANSFORM", bad, r.to_json()))
    }));
    out.push(check("maass", "TRANSLATION", || {
        let g = grid();
        let r = translation_check(&grid_context(&g)?, &g)?;
        let bad = if r.max_residual < TRANSLATION_TOL {
            vec![]
        } else {
            vec![format!("residual {:e} above {TRANSLATION_TOL:e}", r.max_residual)]
        };
        Ok(CheckResult::from_mismatches("maass", "TRANSLATION", bad, r.to_json()))
    }));
    out.push(check("maass", "LAPLACIAN_ORDER", || {
        let ctx = MaassEvalContext::phi0_w_for(0.9, 1e-10)?;
        let (a, b, ratio) = laplacian_convergence(&ctx, UpperHalfPoint::new(0.1, 1.0)?, 1e-2)?;
        let bad = if ratio > LAPLACIAN_RATIO.0 && ratio < LAPLACIAN_RATIO.1 {
            vec![]
        } else {
            vec![format!("convergence ratio {ratio} outside {LAPLACIAN_RATIO:?}")]
        };
        let detail = json!({ "h": a.h, "residual_h": a.residual, "residual_h2": b.residual, "ratio": ratio });
        Ok(CheckResult::from_mismatches("maass", "LAPLACIAN_ORDER", bad, detail))
    }));
    out.push(check("maass", "PERIOD_SINGLE_MODE", || {
        let quad = QuadratureSpec::default();
        let mut worst = 0.0f64;
        for (n, x, y) in [(1, 0.1, 0.5), (2, -0.3, 0.8), (3, 0.25, 1.1), (5, 0.0, 0.4), (6, -0.45, 1.4)] {
            let mode = MaassEvalContext::from_coeffs(1, vec![(n, 0.5), (-n, 0.5)], true)?;
            let z = Complex64::new(x, y);
            let want = 0.5 * (Complex64::new(0.0, 2.0 * std::f64::consts::PI * n as f64) * z).exp();
            worst = worst.max((period_integral(&mode, z, &quad)? - want).norm());
        }
        let bad = if worst < PERIOD_TOL { vec![] } else { vec![format!("deviation {worst:e} above {PERIOD_TOL:e}")] };
        Ok(CheckResult::from_mismatches("maass", "PERIOD_SINGLE_MODE", bad, json!({ "max_residual": worst })))
    }));
    out.push(check("maass", "PERIOD_FULL", || {
        let quad = QuadratureSpec::default();
        let cases = [
            (MaassEvalContext::phi0_for(1.0, 1e-12)?, Complex64::new(0.1, 1.2)),
            (MaassEvalContext::phi0_w_for(0.9, 1e-12)?, Complex64::new(0.25, 0.9)),
        ];
        let mut worst = 0.0f64;
        for (ctx, z) in &cases {
            worst = worst.max((period_integral(ctx, *z, &quad)? - period_target(ctx, *z)).norm());
        }
        let bad = if worst < PERIOD_TOL { vec![] } else { vec![format!("deviation {worst:e} above {PERIOD_TOL:e}")] };
        Ok(CheckResult::from_mismatches("maass", "PERIOD_FULL", bad, json!({ "max_residual": worst })))
    }));
    out
}

fn quantum_checks(bound: i64, digits: usize) -> Vec<Check> {
    let max_order = bound.clamp(1, MAX_ROOT_ORDER);
    let mut out: Vec<Check> = Vec::new();
    out.push(check("quantum", "COHEN", move || {
        let mut worst = 0.0f64;
        let mut bad = Vec::new();
        for k in 1..=max_order {
            for a in (0..k).filter(|a| a.gcd(&k) == 1) {
                let r = cohen_residual(Ratio::new(a, k), digits);
                worst = worst.max(r);
                if !(r < QUANTUM_TOL) {
                    bad.push(format!("x = {a}/{k}: residual {r:e}"));
                }
            }
        }
        Ok(CheckResult::from_mismatches("quantum", "COHEN", bad, json!({ "max_order": max_order, "max_residual": worst })))
    }));
    out.push(check("quantum", "FW_DOMAIN", move || {
        let mut bad = Vec::new();
        let (mut finite, mut holes) = (0, 0);
        for k in 1..=max_order.min(24) {
            for a in (0..k).filter(|a| a.gcd(&k) == 1) {
                let x = Ratio::new(a, k);
                let hole = classify_cusp(x).class == CuspOrbit::SHalf;
                match (hole, quantum_eval_fw(x, digits)) {
                    (false, Ok(v)) => {
                        let (re, im) = v.to_f64();
                        if re.is_finite() && im.is_finite() {
                            finite += 1;
                        } else {
                            bad.push(format!("f_W({x}) is not finite"));
                        }
                    }
                    (true, Err(Error::DomainHole { .. })) => holes += 1,
                    (false, Err(e)) => bad.push(format!("f_W({x}): {e}")),
                    (true, r) => bad.push(format!("f_W({x}) in S_1/2 gave {r:?} instead of a domain hole")),
                }
            }
        }
        Ok(CheckResult::from_mismatches("quantum", "FW_DOMAIN", bad, json!({ "finite": finite, "holes": holes })))
    }));
    out.push(check("quantum", "PERIOD_A_C", move || {
        let mut worst = 0.0f64;
        let mut bad = Vec::new();
        for k in [1i64, 3, 4, 5, 7, 8, 9] {
            for a in (0..k).filter(|a| a.gcd(&k) == 1) {
                let x = Ratio::new(a, k);
                for g in [Generator::A, Generator::C] {
                    let h = period_function(g, x, digits)?.abs().to_f64();
                    worst = worst.max(h);
                    if !(h < QUANTUM_TOL) {
                        bad.push(format!("|h_{g:?}({x})| = {h:e}"));
                    }
                }
            }
        }
        Ok(CheckResult::from_mismatches("quantum", "PERIOD_A_C", bad, json!({ "max_abs": worst })))
    }));
    out
}
