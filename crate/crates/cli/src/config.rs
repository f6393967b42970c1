//! Experiment configuration from flags and an optional TOML file.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sumsets_core::ratio::{parse_ratio, Ratio};

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Every setting a command may read. Unset fields fall back to command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    /// `a..b` (inclusive), `a..=b`, `a` or `a,b,c`.
    #[serde(rename = "N")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    /// `a/b`, a decimal or scientific notation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// `none`, `fixed:<element>` or `pool:<index>`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted: Option<bool>,
}

macro_rules! overlay_fields {
    ($flags:ident, $file:ident, $warnings:ident, $($field:ident),*) => {
        $(
            if let Some(v) = $file.$field {
                if $flags.$field.as_ref().is_some_and(|f| *f != v) {
                    $warnings.push(format!(
                        "config file overrides --{} ({:?} replaced by {:?})",
                        flag_name(stringify!($field)),
                        $flags.$field.as_ref().unwrap(),
                        v
                    ));
                }
                $flags.$field = Some(v);
            }
        )*
    };
}

fn flag_name(field: &str) -> &str {
    match field {
        "n" => "N",
        "construction" => "construct",
        f => f,
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| UsageError(format!("config: {e}")).into())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text)
    }

    /// `file` wins on every field it sets; conflicts are reported.
    pub fn overlay(mut self, file: ExperimentConfig) -> (Self, Vec<String>) {
        let mut warnings = Vec::new();
        overlay_fields!(
            self,
            file,
            warnings,
            group,
            recipe,
            construction,
            n,
            tolerance,
            budget,
            cap,
            format,
            k,
            shift,
            restricted
        );
        (self, warnings)
    }

    pub fn n_values(&self, default: &[u64]) -> Result<Vec<u64>> {
        match &self.n {
            Some(s) => parse_range(s),
            None => Ok(default.to_vec()),
        }
    }

    pub fn tolerance_or(&self, default: Ratio) -> Result<Ratio> {
        match &self.tolerance {
            Some(s) => parse_tolerance(s),
            None => Ok(default),
        }
    }
}

pub fn parse_tolerance(s: &str) -> Result<Ratio> {
    match parse_ratio(s) {
        Some(r) if r > Ratio::from_integer(0.into()) => Ok(r),
        _ => bail!(UsageError(format!(
            "tolerance {s:?} is not a positive rational"
        ))),
    }
}

/// Index list from `a..b`, `a..=b`, `a` or `a,b,c`; ranges are inclusive.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let bad = || UsageError(format!("index range {s:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let t = s.trim();
    let out: Vec<u64> = if let Some((a, b)) = t.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
        (lo..=hi).collect()
    } else {
        t.split(',')
            .map(num)
            .collect::<std::result::Result<_, _>>()?
    };
    if out.is_empty() || out.contains(&0) {
        bail!(bad());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3").unwrap(), [1, 2, 3]);
        assert_eq!(parse_range("2..=4").unwrap(), [2, 3, 4]);
        assert_eq!(parse_range("5").unwrap(), [5]);
        assert_eq!(parse_range("1, 4,9").unwrap(), [1, 4, 9]);
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn file_wins() {
        let flags = ExperimentConfig {
            n: Some("1..3".into()),
            k: Some(2),
            ..Default::default()
        };
        let file = ExperimentConfig::from_toml_str("N = \"1..5\"\nrecipe = \"box(1)\"\n").unwrap();
        let (merged, warnings) = flags.overlay(file);
        assert_eq!(merged.n.as_deref(), Some("1..5"));
        assert_eq!(merged.recipe.as_deref(), Some("box(1)"));
        assert_eq!(merged.k, Some(2));
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml_str("colour = 1").is_err());
    }
}
