use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::MembershipSet;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::set::FiniteSet;

/// Default number of membership evaluations and search steps allowed.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "SUMSETS_BUDGET";
/// First elements of `B` explored per parallel round.
const ROUND: usize = 64;

/// `DEFAULT_BUDGET`, or the value of `SUMSETS_BUDGET` when it parses.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Extra condition every pair of distinct elements of `B` must meet.
pub type PairFilter = Arc<dyn Fn(&GroupElement, &GroupElement) -> bool + Send + Sync>;

#[derive(Clone, Debug)]
pub enum ShiftMode {
    None,
    Fixed(GroupElement),
    Pool(FiniteSet),
}

#[derive(Clone)]
pub struct SearchProblem {
    pub a: MembershipSet,
    /// Candidate pool for `B`.
    pub window: FiniteSet,
    pub shift: ShiftMode,
    /// `|B|`, at least 2.
    pub k: usize,
    /// Only sums of distinct elements are required.
    pub restricted: bool,
    pub pair_filter: Option<PairFilter>,
    pub budget: u64,
}

impl SearchProblem {
    pub fn new(a: MembershipSet, window: FiniteSet, k: usize) -> Self {
        SearchProblem {
            a,
            window,
            shift: ShiftMode::None,
            k,
            restricted: false,
            pair_filter: None,
            budget: budget_from_env(),
        }
    }

    pub fn with_shift(mut self, shift: ShiftMode) -> Self {
        self.shift = shift;
        self
    }

    pub fn restricted(mut self, restricted: bool) -> Self {
        self.restricted = restricted;
        self
    }

    pub fn with_filter(mut self, filter: PairFilter) -> Self {
        self.pair_filter = Some(filter);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Constraint(format!(
                "target size {} must be at least 2",
                self.k
            )));
        }
        let spec = self.a.spec();
        let mismatch = |found: &GroupSpec| Error::SpecMismatch {
            expected: spec.to_string(),
            found: found.to_string(),
        };
        if self.window.spec() != spec {
            return Err(mismatch(self.window.spec()));
        }
        match &self.shift {
            ShiftMode::Pool(p) if p.spec() != spec => Err(mismatch(p.spec())),
            ShiftMode::Fixed(t) => spec.validate(t),
            _ => Ok(()),
        }
    }

    fn shifts(&self) -> Vec<GroupElement> {
        match &self.shift {
            ShiftMode::None => vec![self.a.spec().zero()],
            ShiftMode::Fixed(t) => vec![t.clone()],
            ShiftMode::Pool(p) => p.as_slice().to_vec(),
        }
    }

    fn describe_shift(&self) -> String {
        let spec = self.a.spec();
        match &self.shift {
            ShiftMode::None => "none".into(),
            ShiftMode::Fixed(t) => format!("fixed {}", spec.format_element(t)),
            ShiftMode::Pool(p) => format!("pool of {}", p.len()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    NotFound,
    /// The budget ran out first.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub status: SearchStatus,
    pub found: bool,
    #[serde(skip)]
    pub t: Option<GroupElement>,
    #[serde(skip)]
    pub b: Option<FiniteSet>,
    #[serde(rename = "t")]
    pub t_literal: Option<String>,
    #[serde(rename = "b")]
    pub b_literals: Option<Vec<String>>,
    /// Membership evaluations of pair sums.
    pub checked_pairs: u64,
    /// Evaluations plus search steps charged to the budget.
    pub spent: u64,
}

/// Result of exhausting a window.
#[derive(Clone, Debug, Serialize)]
pub struct AvoidanceCertificate {
    pub set: String,
    pub window_size: usize,
    pub shift: String,
    pub target_size: usize,
    pub restricted: bool,
    /// No witness of the target size exists inside the window.
    pub exhausted: bool,
    /// The search finished within budget.
    pub completed: bool,
    /// Largest `|B|` with a witness in the window.
    pub max_achievable_k: usize,
    pub max_witness: WitnessReport,
    /// Order-independent hash of the window and shift pool.
    pub enumeration_hash: String,
    pub spent: u64,
}

/// `t + b + b′ ∈ A` for every required pair, and the filter on distinct pairs.
pub fn verify_witness(
    a: &MembershipSet,
    t: &GroupElement,
    b: &FiniteSet,
    restricted: bool,
    filter: Option<&PairFilter>,
) -> bool {
    let spec = a.spec();
    let items = b.as_slice();
    items.iter().enumerate().all(|(i, x)| {
        items[i..].iter().enumerate().all(|(off, y)| {
            let same = off == 0;
            if same && restricted {
                return true;
            }
            if !same && filter.is_some_and(|f| !f(x, y)) {
                return false;
            }
            a.contains(&spec.add_unchecked(&spec.add_unchecked(t, x), y))
        })
    })
}

/// Bitset rows of the "pair sum lies in `A`" graph for one shift.
struct PairGraph {
    words: usize,
    rows: Vec<u64>,
    /// Vertices whose own double passes.
    diagonal: Vec<u64>,
}

impl PairGraph {
    fn build(p: &SearchProblem, t: &GroupElement) -> PairGraph {
        let spec = *p.a.spec();
        let w = p.window.as_slice();
        let n = w.len();
        let words = n.div_ceil(64);
        let upper: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                let ti = spec.add_unchecked(t, &w[i]);
                for j in i + 1..n {
                    let ok = p.pair_filter.as_ref().is_none_or(|f| f(&w[i], &w[j]))
                        && p.a.contains(&spec.add_unchecked(&ti, &w[j]));
                    if ok {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        let mut rows = vec![0u64; n * words];
        for (i, row) in upper.iter().enumerate() {
            for j in i + 1..n {
                if row[j / 64] >> (j % 64) & 1 == 1 {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                    rows[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        let diag: Vec<bool> = if p.restricted {
            vec![true; n]
        } else {
            w.par_iter()
                .map(|b| p.a.contains(&spec.add_unchecked(t, &spec.double(b))))
                .collect()
        };
        let mut diagonal = vec![0u64; words];
        for (i, ok) in diag.iter().enumerate() {
            if *ok {
                diagonal[i / 64] |= 1 << (i % 64);
            }
        }
        PairGraph {
            words,
            rows,
            diagonal,
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn evaluations(n: usize, restricted: bool) -> u64 {
        let n = n as u64;
        n * n.saturating_sub(1) / 2 + if restricted { 0 } else { n }
    }
}

/// Outcome of a depth-first search below one first element.
struct Branch {
    clique: Option<Vec<usize>>,
    steps: u64,
    cut_off: bool,
}

/// `a ∩ b` restricted to positions greater than `j`.
fn intersect_above(a: &[u64], b: &[u64], j: usize) -> Vec<u64> {
    let (word, bit) = (j / 64, j % 64);
    let low = if bit == 63 {
        u64::MAX
    } else {
        (1u64 << (bit + 1)) - 1
    };
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(x, (p, q))| match x.cmp(&word) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => p & q & !low,
            std::cmp::Ordering::Greater => p & q,
        })
        .collect()
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

fn extend(
    g: &PairGraph,
    chosen: &mut Vec<usize>,
    cand: &[u64],
    k: usize,
    steps: &mut u64,
    limit: u64,
) -> Option<bool> {
    if chosen.len() == k {
        return Some(true);
    }
    if popcount(cand) < k - chosen.len() {
        return Some(false);
    }
    for (wi, &word) in cand.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let j = wi * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            *steps += 1;
            if *steps > limit {
                return None;
            }
            // Only later vertices keep the clique sorted.
            let next = intersect_above(g.row(j), cand, j);
            chosen.push(j);
            match extend(g, chosen, &next, k, steps, limit) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    chosen.pop();
                }
            }
        }
    }
    Some(false)
}

fn branch(g: &PairGraph, first: usize, k: usize, limit: u64) -> Branch {
    let mut steps = 1u64;
    if g.diagonal[first / 64] >> (first % 64) & 1 == 0 {
        return Branch {
            clique: None,
            steps,
            cut_off: false,
        };
    }
    let cand = intersect_above(g.row(first), &g.diagonal, first);
    let mut chosen = vec![first];
    match extend(g, &mut chosen, &cand, k, &mut steps, limit) {
        Some(true) => Branch {
            clique: Some(chosen),
            steps,
            cut_off: false,
        },
        Some(false) => Branch {
            clique: None,
            steps,
            cut_off: false,
        },
        None => Branch {
            clique: None,
            steps,
            cut_off: true,
        },
    }
}

enum Clique {
    Found(Vec<usize>),
    None,
    OutOfBudget,
}

/// Lexicographically least `k`-clique, explored in fixed rounds so the outcome
/// and the charged steps do not depend on the thread count.
fn least_clique(g: &PairGraph, n: usize, k: usize, spent: &mut u64, budget: u64) -> Clique {
    let mut start = 0;
    while start < n {
        let end = (start + ROUND).min(n);
        let limit = budget.saturating_sub(*spent);
        let results: Vec<Branch> = (start..end)
            .into_par_iter()
            .map(|i| branch(g, i, k, limit))
            .collect();
        for r in &results {
            *spent = spent.saturating_add(r.steps);
            if r.cut_off {
                return Clique::OutOfBudget;
            }
            if let Some(c) = &r.clique {
                return Clique::Found(c.clone());
            }
        }
        if *spent > budget {
            return Clique::OutOfBudget;
        }
        start = end;
    }
    Clique::None
}

fn report(
    p: &SearchProblem,
    status: SearchStatus,
    hit: Option<(GroupElement, Vec<usize>)>,
    checked: u64,
    spent: u64,
) -> WitnessReport {
    let spec = *p.a.spec();
    let (t, b) = match hit {
        Some((t, idx)) => {
            let elems = idx
                .iter()
                .map(|&i| p.window.as_slice()[i].clone())
                .collect();
            (Some(t), Some(FiniteSet::from_sorted_unchecked(spec, elems)))
        }
        None => (None, None),
    };
    WitnessReport {
        status,
        found: status == SearchStatus::Found,
        t_literal: t.as_ref().map(|t| spec.format_element(t)),
        b_literals: b.as_ref().map(FiniteSet::literals),
        t,
        b,
        checked_pairs: checked,
        spent,
    }
}

fn search_size(p: &SearchProblem, k: usize) -> Result<WitnessReport> {
    let n = p.window.len();
    let per_shift = PairGraph::evaluations(n, p.restricted);
    let (mut checked, mut spent) = (0u64, 0u64);
    for t in p.shifts() {
        if spent.saturating_add(per_shift) > p.budget {
            return Ok(report(p, SearchStatus::Inconclusive, None, checked, spent));
        }
        let g = PairGraph::build(p, &t);
        checked += per_shift;
        spent += per_shift;
        match least_clique(&g, n, k, &mut spent, p.budget) {
            Clique::Found(idx) => {
                let r = report(p, SearchStatus::Found, Some((t, idx)), checked, spent);
                let (t, b) = (r.t.as_ref().expect("found"), r.b.as_ref().expect("found"));
                if !verify_witness(&p.a, t, b, p.restricted, p.pair_filter.as_ref()) {
                    return Err(Error::Unverified(format!(
                        "search produced an invalid witness for {}",
                        p.a.name()
                    )));
                }
                return Ok(r);
            }
            Clique::OutOfBudget => {
                return Ok(report(p, SearchStatus::Inconclusive, None, checked, spent))
            }
            Clique::None => {}
        }
    }
    Ok(report(p, SearchStatus::NotFound, None, checked, spent))
}

/// The least witness `(t, B)` with `B ⊂ window`: shifts in pool order, then `B`
/// lexicographically in canonical order.
pub fn find_witness(p: &SearchProblem) -> Result<WitnessReport> {
    p.validate()?;
    search_size(p, p.k)
}

/// Exhaust the window for the target size and find the largest achievable `|B|`.
pub fn certify_avoidance(p: &SearchProblem) -> Result<AvoidanceCertificate> {
    p.validate()?;
    let mut spent = 0u64;
    let mut best = 0usize;
    let mut best_report = report(p, SearchStatus::NotFound, None, 0, 0);
    let mut completed = true;
    for k in 1..=p.window.len() {
        let q = p.clone().with_budget(p.budget.saturating_sub(spent));
        let r = search_size(&q, k)?;
        spent = spent.saturating_add(r.spent);
        match r.status {
            SearchStatus::Found => {
                best = k;
                best_report = r;
            }
            SearchStatus::NotFound => break,
            SearchStatus::Inconclusive => {
                completed = false;
                break;
            }
        }
    }
    let mut hash = p.window.fold_hash();
    if let ShiftMode::Pool(pool) = &p.shift {
        hash = hash.rotate_left(17) ^ pool.fold_hash();
    }
    Ok(AvoidanceCertificate {
        set: p.a.name().to_string(),
        window_size: p.window.len(),
        shift: p.describe_shift(),
        target_size: p.k,
        restricted: p.restricted,
        exhausted: completed && best < p.k,
        completed,
        max_achievable_k: best,
        max_witness: best_report,
        enumeration_hash: format!("{hash:016x}"),
        spent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{odd_coset_example, torus_example};
    use crate::folner::FolnerSequence;
    use crate::group::GroupSpec;

    fn evens() -> MembershipSet {
        let f = FolnerSequence::box_zd(1).unwrap();
        let spec = *f.spec();
        MembershipSet::new("evens", f, move |g| spec.in_two_g(g))
    }

    fn window(a: &MembershipSet, n: u64) -> FiniteSet {
        a.paired_folner.window(n).unwrap()
    }

    #[test]
    fn least_even_triple() {
        let a = evens();
        let r = find_witness(&SearchProblem::new(a.clone(), window(&a, 10), 3)).unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        assert_eq!(r.b_literals.unwrap(), ["-10", "-8", "-6"]);
    }

    #[test]
    fn odd_integers_have_no_witness() {
        let a = odd_coset_example(GroupSpec::integers(1)).unwrap();
        let w = FolnerSequence::box_zd(1).unwrap().window(10).unwrap();
        let r = find_witness(&SearchProblem::new(a, w, 2)).unwrap();
        assert_eq!(r.status, SearchStatus::NotFound);
    }

    #[test]
    fn torus_pairs_of_distinct_weight() {
        let a = torus_example(1).unwrap();
        let spec = *a.spec();
        let w = window(&a, 3);
        let filter: PairFilter = Arc::new(move |x, y| spec.weight(x).ok() != spec.weight(y).ok());
        let r = find_witness(&SearchProblem::new(a, w, 2).with_filter(filter)).unwrap();
        assert_eq!(r.status, SearchStatus::NotFound);
    }

    #[test]
    fn full_group_achieves_window_size() {
        let f = FolnerSequence::fp_prefix(3).unwrap();
        let a = MembershipSet::new("all", f.clone(), |_| true);
        let c = certify_avoidance(&SearchProblem::new(a, f.window(2).unwrap(), 2)).unwrap();
        assert_eq!(c.max_achievable_k, 9);
        assert!(!c.exhausted && c.completed);
    }

    #[test]
    fn budget_is_reported() {
        let a = evens();
        let r = find_witness(&SearchProblem::new(a.clone(), window(&a, 50), 3).with_budget(10))
            .unwrap();
        assert_eq!(r.status, SearchStatus::Inconclusive);
        assert!(!r.found);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let a = torus_example(1).unwrap();
        let w = window(&a, 6);
        let p = SearchProblem::new(a, w, 3).restricted(true);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| find_witness(&p).unwrap())
        };
        let (one, four) = (run(1), run(4));
        assert_eq!(one.b_literals, four.b_literals);
        assert_eq!(one.spent, four.spent);
    }
}
