//! Shared fixtures for benchmarks.

use sumsets_core::constructions::{fpw_example, odd_coset_example};
use sumsets_core::search::{SearchProblem, ShiftMode};
use sumsets_core::{FiniteSet, FolnerSequence, GroupSpec};

/// Window `n` of a recipe; panics on a bad recipe.
pub fn window(recipe: &str, n: u64) -> FiniteSet {
    recipe
        .parse::<FolnerSequence>()
        .and_then(|f| f.window(n))
        .expect("fixture window")
}

/// A witness search over the `F_3^ω` example that succeeds.
pub fn fpw_search(n: u64, k: usize) -> SearchProblem {
    let a = fpw_example(3).expect("fixture set");
    let w = a.paired_folner.window(n).expect("fixture window");
    SearchProblem::new(a, w, k).with_budget(u64::MAX)
}

/// A search over the odd integers that must exhaust the window.
pub fn odd_search(radius: u64, k: usize) -> SearchProblem {
    let a = odd_coset_example(GroupSpec::integers(1)).expect("fixture set");
    let w = FolnerSequence::box_zd(1)
        .and_then(|f| f.window(radius))
        .expect("fixture window");
    let pool = FolnerSequence::box_zd(1)
        .and_then(|f| f.window(1))
        .expect("fixture pool");
    SearchProblem::new(a, w, k)
        .with_shift(ShiftMode::Pool(pool))
        .with_budget(u64::MAX)
}
