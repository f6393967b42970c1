//! Versioned JSON envelope, CSV tables and re-validation of emitted reports.

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sumsets_core::density::{DensityReport, DensityRow};
use sumsets_core::ratio::ratio;

use crate::config::ExperimentConfig;
use crate::UsageError;

pub const SCHEMA: &str = "sumsets-report";
pub const SCHEMA_VERSION: u64 = 1;
/// Honored for reproducible timestamps.
pub const EPOCH_ENV: &str = "SOURCE_DATE_EPOCH";

/// A command's result before formatting.
pub struct Output {
    pub command: &'static str,
    pub passed: bool,
    /// A search stopped on its budget.
    pub budget_exhausted: bool,
    pub report: Value,
    /// CSV rendering, when the command has a tabular form.
    pub csv: Option<String>,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

pub fn to_value(v: &impl Serialize) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn timestamp() -> String {
    let secs = std::env::var(EPOCH_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok());
    let at = match secs.and_then(|s| chrono::DateTime::from_timestamp(s, 0)) {
        Some(t) => t,
        None => chrono::Utc::now(),
    };
    at.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// The JSON document written for `out`.
pub fn envelope(out: &Output, config: &ExperimentConfig) -> Result<Value> {
    Ok(json!({
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": out.command,
        "generated_at": timestamp(),
        "config": to_value(config)?,
        "passed": out.passed,
        "report": out.report,
    }))
}

/// Re-parses a document and recomputes whatever it claims that can be checked offline.
pub fn validate(text: &str) -> Result<()> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| UsageError(format!("not JSON: {e}")))?;
    let field = |k: &str| doc.get(k).with_context(|| format!("missing field {k:?}"));
    if field("schema")? != SCHEMA {
        bail!("schema is not {SCHEMA}");
    }
    if field("schema_version")?.as_u64() != Some(SCHEMA_VERSION) {
        bail!("unsupported schema version");
    }
    let _: ExperimentConfig = serde_json::from_value(field("config")?.clone()).context("config")?;
    let passed = field("passed")?
        .as_bool()
        .context("passed is not a boolean")?;
    let report = field("report")?;
    let command = field("command")?
        .as_str()
        .context("command is not a string")?;
    match command {
        "density" => check_density(report.get("density").context("missing density")?, passed)?,
        "construct" => {
            check_density(report.get("density").context("missing density")?, false)?;
        }
        "alpha" => {
            if let Some(d) = report.get("doubling") {
                check_density(d, passed)?;
            }
        }
        "verify appendix" | "table intro" => {
            let rows = report
                .get("rows")
                .and_then(Value::as_array)
                .context("missing rows")?;
            let flag = if command == "table intro" {
                "within"
            } else {
                "passed"
            };
            let all = rows
                .iter()
                .all(|r| r.get(flag).and_then(Value::as_bool) == Some(true));
            if all != passed {
                bail!("passed flag disagrees with rows");
            }
        }
        "group info" | "folner defects" | "search" | "plot-data sec45" => {}
        other => bail!("unknown command {other:?}"),
    }
    Ok(())
}

fn check_density(value: &Value, passed: bool) -> Result<()> {
    let r: DensityReport = serde_json::from_value(value.clone()).context("density report")?;
    for DensityRow {
        n,
        window_size,
        hits,
        ratio: q,
    } in &r.rows
    {
        if *window_size == 0 || *q != ratio(*hits, *window_size) {
            bail!("row {n}: ratio does not equal hits / window_size");
        }
    }
    let again = DensityReport::new(r.rows.clone(), r.claimed_limit.clone(), r.tolerance.clone());
    if again != r {
        bail!("convergence fields do not match the rows");
    }
    if passed && r.claimed_limit.is_some() && !r.converged {
        bail!("passed although the report did not converge");
    }
    Ok(())
}
