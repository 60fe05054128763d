//! Report rendering in the three output formats.

use num_rational::BigRational;
use serde_json::{json, Value};

use qrenorm_core::{Exponent, TruncatedQSeries};

use crate::config::OutputFormat;
use crate::suites::CheckResult;

pub const SCHEMA: u32 = 1;

/// Integers as JSON numbers when they fit, everything else as `"p/q"` strings.
pub fn rational_json(c: &BigRational) -> Value {
    let s = c.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

/// Coefficients on the series grid from `min(0, valuation)` up to the bound.
pub fn dense(s: &TruncatedQSeries) -> (Exponent, Exponent, Vec<Value>) {
    let d = s.grid();
    let start = s.offset_index().min(0);
    let values = (start..s.bound_index())
        .map(|k| rational_json(&s.coeff(Exponent::new(k, d)).expect("below the bound")))
        .collect();
    (Exponent::new(start, d), Exponent::new(1, d), values)
}

pub fn expand_report(name: &str, bound: i64, s: &TruncatedQSeries, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let (start, step, coefficients) = dense(s);
            let v = json!({
                "schema": SCHEMA,
                "command": "expand",
                "series_id": name,
                "bound": bound,
                "start": start.to_string(),
                "step": step.to_string(),
                "coefficients": coefficients,
                "series": s.to_json(),
            });
            format!("{v}\n")
        }
        OutputFormat::Csv => s.to_csv(),
        OutputFormat::Table => {
            let mut out = format!("{name} to O(q^{bound})\n{:>10}  coefficient\n", "exponent");
            for (e, c) in s.terms() {
                out.push_str(&format!("{:>10}  {c}\n", e.to_string()));
            }
            out
        }
    }
}

pub fn verify_report(suite: &str, bound: i64, digits: usize, results: &[CheckResult], format: OutputFormat) -> String {
    let pass = results.iter().all(|r| r.pass);
    match format {
        OutputFormat::Json => {
            let v = json!({
                "schema": SCHEMA,
                "command": "verify",
                "suite": suite,
                "bound": bound,
                "precision": digits,
                "pass": pass,
                "checks": results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            });
            format!("{v}\n")
        }
        OutputFormat::Csv => {
            let mut out = String::from("suite,name,pass,first_mismatch\n");
            for r in results {
                let m = r.first_mismatch.as_deref().unwrap_or("").replace('"', "\"\"");
                out.push_str(&format!("{},{},{},\"{m}\"\n", r.suite, r.name, r.pass));
            }
            out
        }
        OutputFormat::Table => {
            let width = results.iter().map(|r| r.name.len()).max().unwrap_or(4);
            let mut out = String::new();
            for r in results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let m = r.first_mismatch.as_deref().map(|m| format!("  {m}")).unwrap_or_default();
                let line = format!("{status}  {:<11} {:<width$}{m}", r.suite, r.name);
                out.push_str(line.trim_end());
                out.push('\n');
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            out.push_str(&format!("{} checks, {failed} failed\n", results.len()));
            out
        }
    }
}

/// A flat JSON object rendered as JSON, a header plus one CSV row, or aligned `key  value` lines.
pub fn record(fields: &[(&str, Value)], format: OutputFormat) -> String {
    let plain = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match format {
        OutputFormat::Json => {
            let mut map = serde_json::Map::new();
            map.insert("schema".into(), json!(SCHEMA));
            for (k, v) in fields {
                map.insert((*k).into(), v.clone());
            }
            format!("{}\n", Value::Object(map))
        }
        OutputFormat::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<String> = fields
                .iter()
                .map(|(_, v)| {
                    let s = plain(v);
                    if s.contains(',') || s.contains('"') {
                        format!("\"{}\"", s.replace('"', "\"\""))
                    } else {
                        s
                    }
                })
                .collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        OutputFormat::Table => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            fields.iter().map(|(k, v)| format!("{k:<width$}  {}\n", plain(v))).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_starts_at_zero_for_power_series() {
        let s = TruncatedQSeries::from_i64(&[0, 3, 0, -1], 4);
        let (start, step, v) = dense(&s);
        assert_eq!((start, step), (Exponent::from_integer(0), Exponent::from_integer(1)));
        assert_eq!(v, vec![json!(0), json!(3), json!(0), json!(-1)]);
    }

    #[test]
    fn record_formats() {
        let f = [("value", json!(6)), ("index", json!("a,b"))];
        assert_eq!(record(&f, OutputFormat::Csv), "value,index\n6,\"a,b\"\n");
        assert_eq!(record(&f, OutputFormat::Json), "{\"index\":\"a,b\",\"schema\":1,\"value\":6}\n");
        assert_eq!(record(&f, OutputFormat::Table), "value  6\nindex  a,b\n");
    }
}
