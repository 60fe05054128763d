use num_complex::Complex64;
use num_rational::Ratio;
use serde_json::{json, Value};

use qrenorm_core::arithmetic::{
    ideal_conventions, ideal_count, signed_class_count, t_sigma, tw_pos, IdealWeight, QuadOrder, TableKind,
    SIGNED_CLASS_CONVENTIONS, TW_NEG_CONVENTIONS, TW_POS_CONVENTIONS, T_SIGMA_CONVENTIONS,
};
use qrenorm_core::catalog::{build_series, NamedSeriesId};
use qrenorm_core::maass::{
    classify_cusp, cohen_residual, laplacian_residual, period_function_sample, period_integral, period_samples_csv,
    period_target, phi_eval, quantum_eval_fw, quantum_eval_sigma, s_transform_check, translation_check, CuspOrbit,
    Generator, MaassEvalContext, QuadratureSpec, UpperHalfPoint,
};
use qrenorm_core::Exponent;

use crate::cache::OracleCache;
use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::output::{expand_report, record, verify_report};
use crate::suites::{run_suite, Suite, PERIOD_TOL, QUANTUM_TOL, S_TRANSFORM_TOL, TRANSLATION_TOL};

pub const LAPLACIAN_REL_TOL: f64 = 1e-4;

/// Rendered output and the exit code it implies.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_PASS }
    }

    fn judged(stdout: String, pass: bool) -> Self {
        Outcome { stdout, code: if pass { EXIT_PASS } else { EXIT_FAIL } }
    }
}

fn check_bound(bound: i64) -> Result<i64, CliError> {
    if bound < 0 {
        return Err(CliError::Usage(format!("bound must be non-negative, got {bound}")));
    }
    Ok(bound)
}

pub fn expand(series: &str, bound: i64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let id: NamedSeriesId = series.parse()?;
    let bound = check_bound(bound)?;
    let s = build_series(id, Exponent::from_integer(bound))?;
    Ok(Outcome::pass(expand_report(id.as_str(), bound, &s, cfg.output_format)))
}

pub fn verify(suite: Suite, bound: i64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bound = check_bound(bound)?;
    let results = run_suite(suite, bound, cfg.precision_digits, cfg.parallelism)?;
    let pass = results.iter().all(|r| r.pass);
    Ok(Outcome::judged(verify_report(suite.as_str(), bound, cfg.precision_digits, &results, cfg.output_format), pass))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Oracle {
    Sigma,
    #[value(name = "sigma_star", alias = "sigma-star")]
    SigmaStar,
    Tw,
    Ideal,
    Signed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum WeightArg {
    One,
    Kronecker,
    Parity,
    Quarter,
}

impl From<WeightArg> for IdealWeight {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::One => IdealWeight::One,
            WeightArg::Kronecker => IdealWeight::KroneckerMinus4,
            WeightArg::Parity => IdealWeight::ParitySign,
            WeightArg::Quarter => IdealWeight::QuarterTurn,
        }
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn w_negative(i: i64) -> qrenorm_core::Result<i64> {
    let k = (1 - i) / 8;
    Ok(build_series(NamedSeriesId::W, Exponent::from_integer(k + 1))?.head_i64(k as usize + 1)[k as usize])
}

/// The table an oracle value lives in, and its index there.
fn oracle_slot(oracle: Oracle, n: i64, weight: IdealWeight) -> Result<(TableKind, Option<i64>, String, i64), CliError> {
    let overflow = || invalid(format!("index {n} is too large"));
    Ok(match oracle {
        Oracle::Sigma if n >= 0 => {
            let m = n.checked_mul(24).and_then(|m| m.checked_add(1)).ok_or_else(overflow)?;
            (TableKind::TSigma, Some(6), T_SIGMA_CONVENTIONS.into(), m)
        }
        Oracle::Sigma => return Err(invalid(format!("sigma needs n >= 0, got {n}"))),
        Oracle::SigmaStar if n >= 1 => {
            let m = n.checked_mul(24).and_then(|m| 1i64.checked_sub(m)).ok_or_else(overflow)?;
            (TableKind::TSigma, Some(6), T_SIGMA_CONVENTIONS.into(), m)
        }
        Oracle::SigmaStar => return Err(invalid(format!("sigma_star needs n >= 1, got {n}"))),
        Oracle::Tw if n >= 1 => (TableKind::TwPos, Some(2), TW_POS_CONVENTIONS.into(), n),
        Oracle::Tw if n < 0 && (1 - n) % 8 == 0 => (TableKind::TwNeg, Some(2), TW_NEG_CONVENTIONS.into(), n),
        Oracle::Tw => return Err(invalid(format!("tw needs m >= 1 or m = 1 - 8k with k >= 1, got {n}"))),
        Oracle::Ideal if n >= 1 => (TableKind::IdealCount, Some(2), ideal_conventions(weight), n),
        Oracle::Ideal => return Err(invalid(format!("ideal needs a positive norm, got {n}"))),
        Oracle::Signed if n != 0 => (TableKind::SignedClassCount, Some(3), SIGNED_CLASS_CONVENTIONS.into(), n),
        Oracle::Signed => return Err(invalid("signed needs a nonzero norm".into())),
    })
}

fn oracle_value(kind: TableKind, weight: IdealWeight, i: i64) -> qrenorm_core::Result<i64> {
    match kind {
        TableKind::TSigma => t_sigma(i),
        TableKind::TwPos => tw_pos(i),
        TableKind::TwNeg => w_negative(i),
        TableKind::IdealCount => ideal_count(&QuadOrder::D2, i, None, weight),
        TableKind::SignedClassCount => signed_class_count(&QuadOrder::D3, i.abs(), i.signum(), None, false),
    }
}

pub fn coeff(oracle: Oracle, n: i64, weight: WeightArg, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let weight = IdealWeight::from(weight);
    let (kind, order_d, conventions, index) = oracle_slot(oracle, n, weight)?;
    let compute = |i| oracle_value(kind, weight, i);
    let value = match &cfg.oracle_cache_path {
        Some(dir) => OracleCache::new(dir).get_or_compute(kind, order_d, &conventions, index, compute)?.0,
        None => compute(index)?,
    };
    let name = match oracle {
        Oracle::Sigma => "sigma",
        Oracle::SigmaStar => "sigma_star",
        Oracle::Tw => "tw",
        Oracle::Ideal => "ideal",
        Oracle::Signed => "signed",
    };
    let fields = [
        ("command", json!("coeff")),
        ("oracle", json!(name)),
        ("n", json!(n)),
        ("table", json!(kind.as_str())),
        ("table_index", json!(index)),
        ("conventions", json!(conventions)),
        ("value", json!(value)),
    ];
    Ok(Outcome::pass(record(&fields, cfg.output_format)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MaassCheck {
    STransform,
    Translate,
    Laplacian,
    Period,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Waveform {
    /// Coefficients from the W expansion and its mod-16 character oracle.
    W,
    /// Coefficients from the Pell class counts behind sigma.
    Sigma,
}

pub struct MaassArgs {
    pub check: MaassCheck,
    pub x: f64,
    pub y: f64,
    pub h: f64,
    pub n_max: Option<i64>,
    pub waveform: Waveform,
    pub target: f64,
}

pub fn maass(a: &MaassArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let z = UpperHalfPoint::new(a.x, a.y)?;
    if !(a.target > 0.0) {
        return Err(invalid(format!("target must be positive, got {}", a.target)));
    }
    if a.check == MaassCheck::STransform && a.waveform != Waveform::W {
        return Err(invalid("the S-transform relation is implemented for the W waveform only".into()));
    }
    if a.check == MaassCheck::Laplacian && !(a.h > 0.0 && a.h < a.y) {
        return Err(invalid(format!("step h must lie in (0, y), got {}", a.h)));
    }
    let y_min = match a.check {
        MaassCheck::STransform => a.y.min((-1.0 / (4.0 * z.z())).im),
        MaassCheck::Laplacian => a.y - a.h,
        MaassCheck::Translate | MaassCheck::Period => a.y,
    };
    let ctx = match (a.n_max, a.waveform) {
        (Some(n), Waveform::W) => MaassEvalContext::phi0_w(n)?.with_target(a.target),
        (Some(n), Waveform::Sigma) => MaassEvalContext::phi0(n)?.with_target(a.target),
        (None, Waveform::W) => MaassEvalContext::phi0_w_for(y_min, a.target)?,
        (None, Waveform::Sigma) => MaassEvalContext::phi0_for(y_min, a.target)?,
    };
    let (report, tol) = match a.check {
        MaassCheck::STransform => (s_transform_check(&ctx, &[z])?.to_json(), S_TRANSFORM_TOL),
        MaassCheck::Translate => (translation_check(&ctx, &[z])?.to_json(), TRANSLATION_TOL),
        MaassCheck::Laplacian => {
            // stencil points are evaluated unchecked, so certify the lowest one explicitly
            let low = phi_eval(&ctx, UpperHalfPoint::new(a.x, a.y - a.h)?)?;
            let r = laplacian_residual(&ctx, z, a.h)?;
            let v = json!({
                "check": "laplacian",
                "grid": [[a.x, a.y]],
                "h": a.h,
                "max_residual": r.relative(),
                "absolute_residual": r.residual,
                "tail_bound": low.tail_bound,
            });
            (v, LAPLACIAN_REL_TOL)
        }
        MaassCheck::Period => {
            let zc = Complex64::new(a.x, a.y);
            let tail = phi_eval(&ctx, z)?.tail_bound;
            let got = period_integral(&ctx, zc, &QuadratureSpec::default())?;
            let want = period_target(&ctx, zc);
            let v = json!({
                "check": "period",
                "grid": [[a.x, a.y]],
                "max_residual": (got - want).norm(),
                "integral": [got.re, got.im],
                "fourier_half": [want.re, want.im],
                "tail_bound": tail,
            });
            (v, PERIOD_TOL)
        }
    };
    let residual = report["max_residual"].as_f64().unwrap_or(f64::NAN);
    let pass = residual < tol;
    let mut out = report;
    out["schema"] = json!(crate::output::SCHEMA);
    out["command"] = json!("maass");
    out["waveform"] = json!(match a.waveform {
        Waveform::W => "phi0_w",
        Waveform::Sigma => "phi0",
    });
    out["n_max"] = json!(ctx.n_max);
    out["tolerance"] = json!(tol);
    out["pass"] = json!(pass);
    Ok(Outcome::judged(render_object(&out, cfg.output_format), pass))
}

fn render_object(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => format!("{v}\n"),
        _ => {
            let fields: Vec<(&str, Value)> = v
                .as_object()
                .map(|m| m.iter().filter(|(k, _)| *k != "schema").map(|(k, v)| (k.as_str(), v.clone())).collect())
                .unwrap_or_default();
            record(&fields, format)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum QuantumTarget {
    SigmaCohen,
    Fw,
    PeriodSample,
}

pub fn parse_rational(s: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || invalid(format!("expected a rational p/q, got {s}"));
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
            if q == 0 {
                return Err(bad());
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(r)
}

/// Explains why `x` is a hole of the f_W domain.
pub fn hole_message(x: Ratio<i64>) -> String {
    let c = classify_cusp(x);
    let w = c.witness;
    format!(
        "DomainHole: x in S_1/2\n  x = {x} has denominator {} = 2 mod 4, so it is Gamma_0(4)-equivalent to the cusp 1/2 \
         (witness [[{}, {}], [{}, {}]]); f_W is defined only on the orbits of infinity and 0",
        x.denom(),
        w.a,
        w.b,
        w.c,
        w.d
    )
}

fn complex_json(v: &qrenorm_core::MpComplex, digits: usize) -> Value {
    json!({ "re": v.re.to_string_digits(digits), "im": v.im.to_string_digits(digits) })
}

pub struct QuantumArgs {
    pub target: QuantumTarget,
    pub x: Option<String>,
    pub gamma: Generator,
    pub xs: Option<String>,
}

pub fn quantum(a: &QuantumArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let digits = cfg.precision_digits;
    let need_x = || -> Result<Ratio<i64>, CliError> {
        parse_rational(a.x.as_deref().ok_or_else(|| invalid("--x is required".into()))?)
    };
    match a.target {
        QuantumTarget::SigmaCohen => {
            let x = need_x()?;
            let v = quantum_eval_sigma(x, digits);
            let residual = cohen_residual(x, digits);
            let pass = residual < QUANTUM_TOL;
            let out = json!({
                "schema": crate::output::SCHEMA,
                "command": "quantum",
                "target": "sigma-cohen",
                "x": x.to_string(),
                "sigma": complex_json(&v.sigma, digits),
                "sigma_star": complex_json(&v.sigma_star, digits),
                "residual": residual,
                "tolerance": QUANTUM_TOL,
                "pass": pass,
            });
            Ok(Outcome::judged(render_object(&out, cfg.output_format), pass))
        }
        QuantumTarget::Fw => {
            let x = need_x()?;
            let c = classify_cusp(x);
            if c.class == CuspOrbit::SHalf {
                return Err(CliError::Hole(hole_message(x)));
            }
            let v = quantum_eval_fw(x, digits)?;
            let out = json!({
                "schema": crate::output::SCHEMA,
                "command": "quantum",
                "target": "fw",
                "x": x.to_string(),
                "cusp_class": c.class.as_str(),
                "value": complex_json(&v, digits),
                "pass": true,
            });
            Ok(Outcome::pass(render_object(&out, cfg.output_format)))
        }
        QuantumTarget::PeriodSample => {
            let xs = match (&a.xs, &a.x) {
                (Some(list), _) => list.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?,
                (None, Some(x)) => vec![parse_rational(x)?],
                (None, None) => return Err(invalid("--xs or --x is required".into())),
            };
            let samples = period_function_sample(a.gamma, &xs, digits)?;
            Ok(Outcome::pass(period_samples_csv(&samples)))
        }
    }
}
