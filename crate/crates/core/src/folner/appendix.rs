//! Numerical checks of the kernel and halving asymptotics of a sequence.
//!
//! Counts use membership and `half_preimage_len`; `Φ_N/2` is never materialized.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::defects::doubling_overlap_count;
use super::sequence::FolnerSequence;
use crate::error::{Error, Result};
use crate::ratio::{self, ratio, within, Ratio};

/// Largest window the suite evaluates.
pub const SUITE_WINDOW_LIMIT: u64 = 1 << 22;

/// Shipped recipes with finite kernel and the horizon searched for feasible indices.
pub const SHIPPED_SUITE: &[(&str, u64)] = &[
    ("box(1)", 200),
    ("box(2)", 60),
    ("dyadic(1)", 16),
    ("dyadic(2)", 8),
    ("fpw(3)", 10),
    ("tri_lger(1,1)", 3),
    ("tri_lless(1,2)", 2),
    ("tri_lger(2,1)", 2),
    ("amplify(box(1),3)", 50),
    ("amplify(dyadic(1),2)", 12),
    ("shiftseq(box(1),g=N^2+2N+1)", 100),
];

/// Every row of the suite over [`SHIPPED_SUITE`].
pub fn shipped_suite(tol: &AppendixTolerances) -> Result<Vec<AppendixRow>> {
    let mut rows = Vec::new();
    for (recipe, horizon) in SHIPPED_SUITE {
        let f: FolnerSequence = recipe.parse()?;
        rows.extend(f.appendix_suite(*horizon, tol)?);
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixTolerances {
    #[serde(with = "ratio")]
    pub limit: Ratio,
    #[serde(with = "ratio")]
    pub saturation: Ratio,
}

impl Default for AppendixTolerances {
    fn default() -> Self {
        AppendixTolerances {
            limit: ratio(1, 10),
            saturation: ratio(9, 10),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixRow {
    pub recipe: String,
    pub n: u64,
    pub window_size: usize,
    /// `|2Ψ_N| / |Ψ_N|`, expected near `1/r`.
    #[serde(with = "ratio")]
    pub double_ratio: Ratio,
    /// `|Φ_N/2| / |Φ_N|`, expected near `r/ℓ`.
    #[serde(with = "ratio")]
    pub half_ratio: Ratio,
    /// `|Φ_N/2| / |Φ_N ∩ 2G|`, exactly `r` whenever the denominator is nonzero.
    #[serde(with = "ratio::option")]
    pub half_over_even: Option<Ratio>,
    /// `|{g ∈ Ψ_N : g + ker D ⊂ Ψ_N}| / |Ψ_N|`.
    #[serde(with = "ratio")]
    pub kernel_saturation: Ratio,
    /// `|Φ_N/2 ∩ Φ_N| / |Φ_N|`, never above `half_ratio`.
    #[serde(with = "ratio")]
    pub overlap: Ratio,
    pub double_ok: bool,
    pub half_ok: bool,
    pub half_over_even_ok: bool,
    pub saturation_ok: bool,
    pub overlap_ok: bool,
}

impl AppendixRow {
    pub fn passed(&self) -> bool {
        self.double_ok
            && self.half_ok
            && self.half_over_even_ok
            && self.saturation_ok
            && self.overlap_ok
    }
}

impl FolnerSequence {
    /// The `count` largest indices `N ≤ horizon` whose windows fit `limit`.
    pub fn largest_feasible(&self, horizon: u64, count: usize, limit: u64) -> Vec<u64> {
        let fits = |n: u64| {
            self.size_bound(n)
                .ok()
                .is_some_and(|s| s <= BigUint::from(limit))
                && self.is_feasible(n)
        };
        let mut out: Vec<u64> = (1..=horizon)
            .rev()
            .filter(|&n| fits(n))
            .take(count)
            .collect();
        out.reverse();
        out
    }

    pub fn appendix_row(&self, n: u64, tol: &AppendixTolerances) -> Result<AppendixRow> {
        let spec = *self.spec();
        let r = spec.r().ok_or_else(|| {
            Error::Unsupported(format!("the suite needs a finite kernel, not {spec}"))
        })?;
        let ell = spec.ell();
        let w = self.window(n)?;
        let size = w.len() as u64;
        let doubled = w.double_image().len() as u64;
        let halves = w.half_preimage_len()? as u64;
        let evens = w.count_where(|g| spec.in_two_g(g)) as u64;
        let kernel = spec.kernel_elements()?;
        let saturated =
            w.count_where(|g| kernel.iter().all(|k| w.contains(&spec.add_unchecked(g, k)))) as u64;
        let overlap = ratio(doubling_overlap_count(&w) as u64, size);

        let double_ratio = ratio(doubled, size);
        let half_ratio = ratio(halves, size);
        let half_over_even = (evens > 0).then(|| ratio(halves, evens));
        let kernel_saturation = ratio(saturated, size);
        Ok(AppendixRow {
            recipe: self.to_string(),
            n,
            window_size: w.len(),
            double_ok: within(&double_ratio, &ratio(1, r), &tol.limit),
            half_ok: within(&half_ratio, &ratio(r, ell), &tol.limit),
            half_over_even_ok: half_over_even.as_ref().is_none_or(|q| *q == ratio(r, 1)),
            saturation_ok: kernel_saturation >= tol.saturation,
            overlap_ok: overlap <= half_ratio,
            double_ratio,
            half_ratio,
            half_over_even,
            kernel_saturation,
            overlap,
        })
    }

    /// The suite at the three largest feasible indices up to `horizon`.
    pub fn appendix_suite(
        &self,
        horizon: u64,
        tol: &AppendixTolerances,
    ) -> Result<Vec<AppendixRow>> {
        let indices = self.largest_feasible(horizon, 3, SUITE_WINDOW_LIMIT);
        if indices.is_empty() {
            return Err(Error::WindowTooLarge {
                size: self.size_bound(1)?.to_string(),
                cap: SUITE_WINDOW_LIMIT.to_usize().unwrap_or(usize::MAX),
            });
        }
        indices
            .into_iter()
            .map(|n| self.appendix_row(n, tol))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rows_pass() {
        let d = FolnerSequence::dyadic_prefix(1).unwrap();
        let rows = d
            .appendix_suite(10, &AppendixTolerances::default())
            .unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [8, 9, 10]);
        assert!(rows.iter().all(AppendixRow::passed));
        assert_eq!(rows[0].double_ratio, ratio(1, 2));
    }

    #[test]
    fn box_half_over_even_is_exact() {
        let b = FolnerSequence::box_zd(2).unwrap();
        let row = b.appendix_row(5, &AppendixTolerances::default()).unwrap();
        assert_eq!(row.half_over_even, Some(ratio(1, 1)));
    }
}
