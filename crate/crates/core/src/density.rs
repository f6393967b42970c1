//! Exact prefix densities and doubling ratios along Følner sequences.

use std::fmt::Write as _;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::MembershipSet;
use crate::error::{Error, Result};
use crate::folner::{doubling_overlap_count, FolnerSequence};
use crate::ratio::{self, ratio, to_f64, within, Ratio};

/// Rows compared against the claimed limit when deciding convergence.
pub const CONVERGENCE_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: u64,
    pub window_size: u64,
    pub hits: u64,
    #[serde(with = "ratio")]
    pub ratio: Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
    #[serde(with = "ratio::option")]
    pub claimed_limit: Option<Ratio>,
    #[serde(with = "ratio")]
    pub tolerance: Ratio,
    pub converged: bool,
    /// Largest ratio over the computed range; not a true limsup.
    #[serde(with = "ratio::option")]
    pub upper_estimate: Option<Ratio>,
}

pub fn default_tolerance() -> Ratio {
    ratio(1, 100)
}

/// `(|A ∩ Φ_N|, |Φ_N|)`.
pub fn prefix_count(a: &MembershipSet, f: &FolnerSequence, n: u64) -> Result<(u64, u64)> {
    if a.spec() != f.spec() {
        return Err(Error::SpecMismatch {
            expected: f.spec().to_string(),
            found: a.spec().to_string(),
        });
    }
    let w = f.window(n)?;
    Ok((w.count_where(|g| a.contains(g)) as u64, w.len() as u64))
}

/// `|A ∩ Φ_N| / |Φ_N|`.
pub fn prefix_density(a: &MembershipSet, f: &FolnerSequence, n: u64) -> Result<Ratio> {
    let (hits, size) = prefix_count(a, f, n)?;
    Ok(ratio(hits, size))
}

impl DensityReport {
    pub fn new(rows: Vec<DensityRow>, claimed_limit: Option<Ratio>, tolerance: Ratio) -> Self {
        let tail = &rows[rows.len().saturating_sub(CONVERGENCE_WINDOW)..];
        let converged = !tail.is_empty()
            && match &claimed_limit {
                Some(limit) => tail.iter().all(|r| within(&r.ratio, limit, &tolerance)),
                None => {
                    let last = &tail[tail.len() - 1].ratio;
                    tail.iter().all(|r| within(&r.ratio, last, &tolerance))
                }
            };
        let upper_estimate = rows.iter().map(|r| r.ratio.clone()).max();
        DensityReport {
            rows,
            claimed_limit,
            tolerance,
            converged,
            upper_estimate,
        }
    }

    pub fn last(&self) -> Option<&DensityRow> {
        self.rows.last()
    }

    /// Columns `N, window_size, hits, ratio_num, ratio_den, ratio_float`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,window_size,hits,ratio_num,ratio_den,ratio_float\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                r.window_size,
                r.hits,
                r.ratio.numer(),
                r.ratio.denom(),
                to_f64(&r.ratio)
            );
        }
        out
    }
}

fn rows_for(
    ns: &[u64],
    eval: impl Fn(u64) -> Result<(u64, u64)> + Sync,
) -> Result<Vec<DensityRow>> {
    ns.par_iter()
        .map(|&n| {
            let (hits, size) = eval(n)?;
            Ok(DensityRow {
                n,
                window_size: size,
                hits,
                ratio: ratio(hits, size),
            })
        })
        .collect()
}

/// Prefix densities of `A` along `F` for each `N` in `ns`.
pub fn density_report(
    a: &MembershipSet,
    f: &FolnerSequence,
    ns: &[u64],
    claimed_limit: Option<Ratio>,
    tolerance: Ratio,
) -> Result<DensityReport> {
    if ns.is_empty() {
        return Err(Error::OutOfRange("empty index range".into()));
    }
    let rows = rows_for(ns, |n| prefix_count(a, f, n))?;
    Ok(DensityReport::new(rows, claimed_limit, tolerance))
}

/// `|Φ_N/2 ∩ Φ_N| / |Φ_N|` for each `N`, compared with the recipe's expected α.
pub fn doubling_ratio_prefix(
    f: &FolnerSequence,
    ns: &[u64],
    tolerance: Ratio,
) -> Result<DensityReport> {
    if ns.is_empty() {
        return Err(Error::OutOfRange("empty index range".into()));
    }
    let rows = rows_for(ns, |n| {
        let w = f.window(n)?;
        Ok((doubling_overlap_count(&w) as u64, w.len() as u64))
    })?;
    Ok(DensityReport::new(rows, f.expected_alpha(), tolerance))
}

/// `min{1, r/ℓ}`, or `1` when the kernel is infinite.
pub fn alpha_of_group(spec: &crate::group::GroupSpec) -> Ratio {
    match spec.r() {
        Some(r) => ratio(r.min(spec.ell()), spec.ell()),
        None => Ratio::one(),
    }
}
