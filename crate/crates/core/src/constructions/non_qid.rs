//! A full-density set along a Følner sequence that is not quasi-invariant
//! under doubling, built in two stages.
//!
//! Thinning: `F_1 = Φ_1` and `F_{k+1} = Φ_M ∖ ⋃_{i,j≤k} (F_j + x_i)/2` for the least
//! `M` past the previous index with `|F_{k+1}| > (1 − 1/(k+1))|Φ_M|`.
//!
//! Selection: for `k = 1..=K` the least stage index `s_k > s_{k−1}` with
//! `|A_k| > (1 − 1/k)|F_{s_k}|`, where
//! `A_k = (F ∩ ⋂_{i<k} (F + x_i)) ∖ (F/2 ∪ ⋃_{i,j<k} 2F_{s_j} + x_i)` and `F = F_{s_k}`.

use std::collections::HashSet;

use serde::Serialize;

use super::membership::MembershipSet;
use crate::error::{Error, Result};
use crate::folner::{Enumeration, FolnerSequence};
use crate::group::{GroupElement, GroupSpec};
use crate::ratio::{ratio, Ratio};
use crate::set::FiniteSet;

/// Largest `Φ` index scanned while thinning.
pub const MAX_PHI_INDEX: u64 = 4096;
/// Largest number of thinned sets computed while selecting.
pub const MAX_STAGE_INDEX: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct ThinningStep {
    /// `k` in `F_k`.
    pub k: usize,
    /// Index `M` with `F_k ⊂ Φ_M`.
    pub phi_index: u64,
    pub phi_size: usize,
    pub f_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelectionStep {
    pub k: usize,
    /// Thinning index `s_k`.
    pub stage_index: usize,
    pub phi_index: u64,
    pub f_size: usize,
    pub block_size: usize,
    #[serde(with = "crate::ratio")]
    pub ratio: Ratio,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonQidTrace {
    pub folner: String,
    pub depth: usize,
    /// `x_1, x_2, …` as literals.
    pub shifts: Vec<String>,
    pub thinning: Vec<ThinningStep>,
    pub selection: Vec<SelectionStep>,
}

/// The constructed set with everything needed to audit it.
#[derive(Clone, Debug)]
pub struct NonQidConstruction {
    pub set: MembershipSet,
    pub trace: NonQidTrace,
    /// `F_1, F_2, …` from the thinning stage.
    pub thinned: Vec<FiniteSet>,
    /// `Φ` indices of the thinned sets.
    pub phi_indices: Vec<u64>,
    /// `A_1, …, A_K`.
    pub blocks: Vec<FiniteSet>,
    /// `x_1, …, x_K`.
    pub shifts: Vec<GroupElement>,
}

struct Thinning<'a> {
    phi: &'a FolnerSequence,
    spec: GroupSpec,
    shifts: &'a [GroupElement],
    sets: Vec<FiniteSet>,
    indices: Vec<u64>,
    steps: Vec<ThinningStep>,
}

impl Thinning<'_> {
    fn removed(&self, g: &GroupElement, k: usize) -> bool {
        let two_g = self.spec.double(g);
        self.shifts[..k.min(self.shifts.len())].iter().any(|x| {
            let y = self.spec.sub(&two_g, x).expect("same group");
            self.sets[..k].iter().any(|f| f.contains(&y))
        })
    }

    /// Compute `F_{k+1}` from `F_1, …, F_k`.
    fn advance(&mut self) -> Result<()> {
        let k = self.sets.len();
        if k == 0 {
            let w = self.phi.window(1)?;
            self.steps.push(ThinningStep {
                k: 1,
                phi_index: 1,
                phi_size: w.len(),
                f_size: w.len(),
            });
            self.sets.push(w);
            self.indices.push(1);
            return Ok(());
        }
        let target = ratio(k as u64, k as u64 + 1);
        let start = self.indices[k - 1] + 1;
        for m in start..=MAX_PHI_INDEX {
            if !self.phi.is_feasible(m) {
                break;
            }
            let w = self.phi.window(m)?;
            let f = w.filter(|g| !self.removed(g, k));
            if ratio(f.len() as u64, w.len() as u64) > target {
                self.steps.push(ThinningStep {
                    k: k + 1,
                    phi_index: m,
                    phi_size: w.len(),
                    f_size: f.len(),
                });
                self.sets.push(f);
                self.indices.push(m);
                return Ok(());
            }
        }
        Err(Error::ConstructionFailed {
            step: k + 1,
            reason: format!(
                "no feasible window of {} past index {start} leaves enough after thinning",
                self.phi
            ),
        })
    }
}

/// Run both stages to depth `k_max` along `phi`.
pub fn non_qid_example(phi: &FolnerSequence, k_max: usize) -> Result<NonQidConstruction> {
    if k_max == 0 {
        return Err(Error::Constraint("depth must be at least 1".into()));
    }
    let spec = *phi.spec();
    let shifts = Enumeration::new(spec).prefix(k_max.max(MAX_STAGE_INDEX))?;
    let mut thin = Thinning {
        phi,
        spec,
        shifts: &shifts,
        sets: Vec::new(),
        indices: Vec::new(),
        steps: Vec::new(),
    };
    let mut blocks: Vec<FiniteSet> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut selection = Vec::new();
    for k in 1..=k_max {
        // ⋃_{i,j<k} 2F_{s_j} + x_i
        let mut forbidden: HashSet<GroupElement> = HashSet::new();
        for &s in &chosen {
            let doubled = thin.sets[s].double_image();
            for x in &shifts[..k - 1] {
                forbidden.extend(doubled.iter().map(|y| spec.add_unchecked(y, x)));
            }
        }
        let target = ratio(k as u64 - 1, k as u64);
        let first = chosen.last().map_or(0, |&s| s + 1);
        let mut found = None;
        for s in first..MAX_STAGE_INDEX {
            while thin.sets.len() <= s {
                thin.advance().map_err(|e| match e {
                    Error::ConstructionFailed { reason, .. } => {
                        Error::ConstructionFailed { step: k, reason }
                    }
                    other => other,
                })?;
            }
            let f = &thin.sets[s];
            let block = f.filter(|g| {
                shifts[..k - 1]
                    .iter()
                    .all(|x| f.contains(&spec.sub(g, x).expect("same group")))
                    && !f.contains(&spec.double(g))
                    && !forbidden.contains(g)
            });
            let r = ratio(block.len() as u64, f.len() as u64);
            if r > target {
                found = Some((s, block, r));
                break;
            }
        }
        let Some((s, block, r)) = found else {
            return Err(Error::ConstructionFailed {
                step: k,
                reason: format!(
                    "no thinned set up to index {MAX_STAGE_INDEX} reaches ratio above {target}"
                ),
            });
        };
        selection.push(SelectionStep {
            k,
            stage_index: s + 1,
            phi_index: thin.indices[s],
            f_size: thin.sets[s].len(),
            block_size: block.len(),
            ratio: r,
        });
        chosen.push(s);
        blocks.push(block);
    }
    let union = blocks
        .iter()
        .try_fold(FiniteSet::empty(spec), |acc, b| acc.union(b))?;
    let windows = thin
        .indices
        .iter()
        .map(|&m| phi.window(m))
        .collect::<Result<Vec<_>>>()?;
    let paired = FolnerSequence::explicit(&format!("thinning_windows({phi})"), spec, windows)?;
    let trace = NonQidTrace {
        folner: phi.to_string(),
        depth: k_max,
        shifts: shifts[..k_max]
            .iter()
            .map(|x| spec.format_element(x))
            .collect(),
        thinning: thin.steps,
        selection,
    };
    let set = MembershipSet::finite(&format!("non_qid_example({phi},K={k_max})"), paired, union)?
        .with_prediction(
            Some(ratio(k_max as u64 - 1, k_max as u64)),
            Some(Ratio::from_integer(0.into())),
        )
        .with_provenance("thinned windows of a Følner sequence without doubling overlap");
    Ok(NonQidConstruction {
        set,
        trace,
        thinned: thin.sets,
        phi_indices: thin.indices,
        blocks,
        shifts: shifts[..k_max].to_vec(),
    })
}

/// `shiftseq(box(1), g = N^2 + 2N + 1)`: windows with `Ψ_N/2 ∩ Ψ_N = ∅`.
pub fn default_non_qid_folner() -> Result<FolnerSequence> {
    "shiftseq(box(1),g=N^2+2N+1)".parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_four_on_shifted_boxes() {
        let phi = default_non_qid_folner().unwrap();
        let c = non_qid_example(&phi, 4).unwrap();
        assert_eq!(c.blocks.len(), 4);
        for step in &c.trace.selection {
            assert!(step.ratio > ratio(step.k as u64 - 1, step.k as u64));
        }
        let stages: Vec<usize> = c.trace.selection.iter().map(|s| s.stage_index).collect();
        assert!(stages.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_zero_depth() {
        let phi = default_non_qid_folner().unwrap();
        assert!(non_qid_example(&phi, 0).is_err());
    }
}
