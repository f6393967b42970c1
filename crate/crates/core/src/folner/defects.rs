//! Translation and doubling defects of a single window.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sequence::FolnerSequence;
use crate::error::Result;
use crate::group::GroupElement;
use crate::ratio::{self, ratio, Ratio};
use crate::set::FiniteSet;

/// Seed for the pseudorandom default test elements.
pub const DEFECT_SEED: u64 = 0x5eed_f01e;
/// Number of pseudorandom default test elements.
pub const RANDOM_TEST_ELEMENTS: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct TranslationDefect {
    pub element: String,
    #[serde(with = "ratio")]
    pub defect: Ratio,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub n: u64,
    pub window_size: usize,
    pub translation_defects: Vec<TranslationDefect>,
    /// `|Φ_N/2 ∩ Φ_N| / |Φ_N|`.
    #[serde(with = "ratio")]
    pub doubling_overlap: Ratio,
}

/// `|(g + S) Δ S| / |S|`.
pub fn translation_defect(s: &FiniteSet, g: &GroupElement) -> Result<Ratio> {
    let moved = s.shift(g)?;
    let common = moved.intersection_len(s)?;
    Ok(ratio(2 * (s.len() - common) as u64, s.len() as u64))
}

/// `|{h ∈ S : 2h ∈ S}|`, which equals `|S/2 ∩ S|`.
pub fn doubling_overlap_count(s: &FiniteSet) -> usize {
    let spec = *s.spec();
    s.count_where(|h| s.contains(&spec.double(h)))
}

/// `|S/2 ∩ S| / |S|`.
pub fn doubling_overlap(s: &FiniteSet) -> Ratio {
    ratio(doubling_overlap_count(s) as u64, s.len() as u64)
}

impl FolnerSequence {
    /// Kernel elements, coset representatives and a few seeded samples of
    /// the largest feasible window among the first three.
    pub fn default_test_elements(&self) -> Result<Vec<GroupElement>> {
        let spec = *self.spec();
        let mut out = Vec::new();
        if spec.r().is_some() {
            out.extend(spec.kernel_elements()?);
        }
        out.extend(spec.coset_reps()?);
        if let Some(n) = (1..=3).rev().find(|&n| self.is_feasible(n)) {
            let w = self.window(n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(DEFECT_SEED);
            out.extend(
                w.as_slice()
                    .choose_multiple(&mut rng, RANDOM_TEST_ELEMENTS)
                    .cloned(),
            );
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn defects(&self, n: u64, test_elements: &[GroupElement]) -> Result<DefectReport> {
        let w = self.window(n)?;
        let translation_defects = test_elements
            .iter()
            .map(|g| {
                Ok(TranslationDefect {
                    element: self.spec().format_element(g),
                    defect: translation_defect(&w, g)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DefectReport {
            n,
            window_size: w.len(),
            translation_defects,
            doubling_overlap: doubling_overlap(&w),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_defects() {
        let b = FolnerSequence::box_zd(1).unwrap();
        let one = b.spec().from_ints([1]).unwrap();
        let r = b.defects(100, &[one]).unwrap();
        assert_eq!(r.translation_defects[0].defect, ratio(2, 201));
        assert_eq!(r.doubling_overlap, ratio(101, 201));
    }

    #[test]
    fn dyadic_overlap_is_one() {
        let d = FolnerSequence::dyadic_prefix(1).unwrap();
        for n in 1..8 {
            assert_eq!(doubling_overlap(&d.window(n).unwrap()), ratio(1, 1));
        }
    }

    #[test]
    fn default_elements_are_deterministic() {
        let f: FolnerSequence = "prod(box(1),dyadic(1))".parse().unwrap();
        let a = f.default_test_elements().unwrap();
        assert_eq!(a, f.default_test_elements().unwrap());
        assert!(a.len() >= 4);
    }
}
