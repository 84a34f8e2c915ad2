//! JSON rendering with every float written to 17 significant digits.

use pdi_core::verify::ResidualReport;
use pdi_core::TestReport;
use serde_json::{json, Value};

use crate::{CliError, CliResult};

pub const TEST_SCHEMA: &str = "pdi-test-report/1";
pub const VERIFY_SCHEMA: &str = "pdi-verify-report/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ordered JSON object.
pub type Fields = Vec<(&'static str, Value)>;

fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => float(n.as_f64().expect("f64 number")),
        other => other.to_string(),
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                render(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            let entries: Vec<(&str, &Value)> = map.iter().map(|(k, v)| (k.as_str(), v)).collect();
            render_entries(&entries, indent, out);
        }
        other => out.push_str(&scalar(other)),
    }
}

fn render_entries(entries: &[(&str, &Value)], indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    out.push_str("{\n");
    for (i, (k, v)) in entries.iter().enumerate() {
        out.push_str(&pad);
        out.push_str(&Value::String(k.to_string()).to_string());
        out.push_str(": ");
        render(v, indent + 1, out);
        out.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
    }
    out.push_str(&"  ".repeat(indent));
    out.push('}');
}

/// Pretty printed document with a trailing newline.
pub fn to_json(fields: &Fields) -> String {
    let entries: Vec<(&str, &Value)> = fields.iter().map(|(k, v)| (*k, v)).collect();
    let mut out = String::new();
    render_entries(&entries, 0, &mut out);
    out.push('\n');
    out
}

pub fn test_report_fields(r: &TestReport) -> Fields {
    let mut f: Fields = vec![("schema", json!(TEST_SCHEMA)), ("statistic", json!(r.statistic))];
    if let Some(p) = r.p_value {
        f.push(("p_value", json!(p)));
    }
    f.extend([
        ("n", json!(r.n)),
        ("k", json!(r.k)),
        ("N", json!(r.sample_size)),
        ("B", json!(r.permutations)),
        ("seed", json!(r.seed)),
        ("engine", json!(r.engine.as_str())),
        ("kernel", json!(r.kernel)),
        ("interaction", json!(r.interaction.as_str())),
        ("null_calibration", json!(r.null_calibration.as_str())),
        ("elapsed_ms", json!(r.elapsed_ms)),
        ("version", json!(VERSION)),
    ]);
    f
}

pub fn test_report_json(r: &TestReport) -> String {
    to_json(&test_report_fields(r))
}

/// Inverse of [`test_report_json`].
pub fn parse_test_report(text: &str) -> CliResult<TestReport> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::data(format!("invalid report JSON: {e}")))?;
    let bad = |field: &str| CliError::data(format!("report field '{field}' is missing or malformed"));
    let s = |field: &str| v.get(field).and_then(Value::as_str).ok_or_else(|| bad(field));
    let u = |field: &str| v.get(field).and_then(Value::as_u64).ok_or_else(|| bad(field));
    if s("schema")? != TEST_SCHEMA {
        return Err(CliError::data(format!("unsupported report schema '{}'", s("schema")?)));
    }
    Ok(TestReport {
        statistic: v.get("statistic").and_then(Value::as_f64).ok_or_else(|| bad("statistic"))?,
        p_value: match v.get("p_value") {
            None => None,
            Some(p) => Some(p.as_f64().ok_or_else(|| bad("p_value"))?),
        },
        n: u("n")? as usize,
        k: u("k")? as usize,
        sample_size: u("N")? as usize,
        permutations: u("B")? as usize,
        seed: u("seed")?,
        engine: s("engine")?.parse().map_err(|_| bad("engine"))?,
        kernel: s("kernel")?.to_string(),
        interaction: s("interaction")?.parse().map_err(|_| bad("interaction"))?,
        null_calibration: s("null_calibration")?.parse().map_err(|_| bad("null_calibration"))?,
        elapsed_ms: u("elapsed_ms")?,
    })
}

fn residual_value(r: &ResidualReport) -> Value {
    json!({
        "name": r.name,
        "trials": r.trials,
        "max_abs_residual": r.max_abs_residual,
        "max_rel_residual": r.max_rel_residual,
        "tolerance": r.tolerance,
        "informational": r.informational,
        "passed": r.passed(),
        "worst_case": r.worst_case,
    })
}

pub fn verify_report_json(
    suite: &str,
    seed: u64,
    trials: usize,
    extended: bool,
    reports: &[ResidualReport],
    elapsed_ms: u64,
) -> String {
    let passed = reports.iter().all(ResidualReport::passed);
    to_json(&vec![
        ("schema", json!(VERIFY_SCHEMA)),
        ("suite", json!(suite)),
        ("seed", json!(seed)),
        ("trials", json!(trials)),
        ("extended", json!(extended)),
        ("passed", json!(passed)),
        ("reports", Value::Array(reports.iter().map(residual_value).collect())),
        ("elapsed_ms", json!(elapsed_ms)),
        ("version", json!(VERSION)),
    ])
}
