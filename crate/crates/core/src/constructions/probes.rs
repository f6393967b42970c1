//! Exhaustive pair scans: finite shadows of the arguments that rule out
//! infinite `B` with `B + B ⊂ A`.

use rayon::prelude::*;
use serde::Serialize;

use std::collections::HashMap;

use super::membership::MembershipSet;
use super::non_qid::NonQidConstruction;
use super::product::{a2_stripe, product_params};
use crate::error::{Error, Result};
use crate::folner::Enumeration;
use crate::group::GroupElement;
use crate::set::FiniteSet;

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub candidates: usize,
    pub pairs_checked: u64,
    /// Offending pairs as literals.
    pub violations: Vec<(String, String)>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scan ordered pairs `(b, b′)` of `pool` whose positions pass `filter` for `{2b, 2b′, b + b′} ⊂ A`.
fn scan(
    probe: &str,
    a: &MembershipSet,
    pool: &[GroupElement],
    filter: impl Fn(usize, usize) -> bool + Sync,
) -> ProbeReport {
    let spec = *a.spec();
    let doubled_in: Vec<bool> = pool
        .par_iter()
        .map(|b| a.contains(&spec.double(b)))
        .collect();
    let (pairs, violations) = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            let mut pairs = 0u64;
            let mut bad = Vec::new();
            if !doubled_in[i] {
                return (pairs, bad);
            }
            let b = &pool[i];
            for (j, c) in pool.iter().enumerate() {
                if i == j || !doubled_in[j] || !filter(i, j) {
                    continue;
                }
                pairs += 1;
                if a.contains(&spec.add_unchecked(b, c)) {
                    bad.push((spec.format_element(b), spec.format_element(c)));
                }
            }
            (pairs, bad)
        })
        .reduce(
            || (0, Vec::new()),
            |(p, mut v), (q, w)| {
                v.extend(w);
                (p + q, v)
            },
        );
    ProbeReport {
        probe: probe.to_string(),
        candidates: pool.len(),
        pairs_checked: pairs,
        violations,
    }
}

/// `F_p^ω`: pairs in `Φ_n` with `ι(b) > ι(b′)`.
pub fn fpw_probe(a: &MembershipSet, n: u64) -> Result<ProbeReport> {
    let spec = *a.spec();
    if spec.fp().is_none() {
        return Err(Error::Unsupported(format!("{} has no F_p factor", spec)));
    }
    let w = a.paired_folner.window(n)?;
    let top: Vec<u32> = w.iter().map(|g| spec.support_top(g)).collect();
    Ok(scan(
        &format!("fpw pairs in window {n}"),
        a,
        w.as_slice(),
        |i, j| top[i] > top[j],
    ))
}

/// Torus: pairs in `Φ_n` with `w(b) ≠ w(b′)` and `η(b) = η(b′)`.
pub fn torus_probe(a: &MembershipSet, n: u64) -> Result<ProbeReport> {
    let spec = *a.spec();
    spec.weight(&spec.zero())?;
    let w = a.paired_folner.window(n)?;
    let profile = w
        .iter()
        .map(|g| Ok((spec.weight(g)?, spec.eta(g)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(scan(
        &format!("torus pairs in window {n}"),
        a,
        w.as_slice(),
        |i, j| profile[i].0 != profile[j].0 && profile[i].1 == profile[j].1,
    ))
}

/// Product: halves of `A_2` stripes in windows `1..=max_n`, paired when their integer
/// parities agree and `2b′` sits in a later window than `2b`.
pub fn product_probe(a: &MembershipSet, max_n: u64) -> Result<ProbeReport> {
    let params = product_params(a)?.clone();
    let spec = *a.spec();
    let mut pool = Vec::new();
    for n in 1..=max_n {
        for g in a.paired_folner.window(n)?.iter() {
            if matches!(a2_stripe(&params, g)?, Some((m, _)) if m == n) {
                pool.extend(spec.halve_preimages(g)?);
            }
        }
    }
    let pool = FiniteSet::new(spec, pool)?;
    let profile = pool
        .iter()
        .map(|g| {
            let parity: Vec<bool> = g.ints().iter().map(|z| z.is_even()).collect();
            let n = a2_stripe(&params, &spec.double(g))?.map(|(n, _)| n);
            Ok((parity, n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(scan(
        &format!("product pairs over windows 1..={max_n}"),
        a,
        pool.as_slice(),
        |i, j| {
            let ((p, n1), (q, n2)) = (&profile[i], &profile[j]);
            p == q && matches!((n1, n2), (Some(n1), Some(n2)) if n2 > n1)
        },
    ))
}

/// Non-q.i.d. blocks: for each `t` in `shifts`, all ordered pairs `b ≠ b′` with
/// `t + 2b ∈ A_{k1}`, `t + 2b′ ∈ A` and `t + b + b′ ∈ A_{k2}` where `k2` exceeds `k1`
/// and the enumeration positions of `±(t + 2b)`.
///
/// Both `b` and `b′` range over all of `G`, since `t + 2b` must lie in the finite `A`.
pub fn non_qid_triple_probe(c: &NonQidConstruction, shifts: &FiniteSet) -> Result<ProbeReport> {
    let spec = *c.set.spec();
    let mut block_of: HashMap<GroupElement, usize> = HashMap::new();
    for (k, block) in c.blocks.iter().enumerate() {
        for g in block.iter() {
            block_of.insert(g.clone(), k + 1);
        }
    }
    let enumeration = Enumeration::new(spec);
    let (mut pairs, mut violations) = (0u64, Vec::new());
    for t in shifts.iter() {
        let mut pool = Vec::new();
        for a in block_of.keys() {
            pool.extend(spec.halve_preimages(&spec.sub(a, t)?)?);
        }
        pool.sort();
        for b in &pool {
            let tb = spec.add_unchecked(t, &spec.double(b));
            let k1 = block_of[&tb];
            let bound = k1
                .max(enumeration.index_of(&tb)?)
                .max(enumeration.index_of(&spec.neg(&tb))?);
            for c2 in &pool {
                if c2 == b {
                    continue;
                }
                pairs += 1;
                let mid = spec.add_unchecked(&spec.add_unchecked(t, b), c2);
                if block_of.get(&mid).is_some_and(|&k2| k2 > bound) {
                    violations.push((
                        format!("t={} b={}", spec.format_element(t), spec.format_element(b)),
                        spec.format_element(c2),
                    ));
                }
            }
        }
    }
    Ok(ProbeReport {
        probe: format!("non-q.i.d. triples over {} shifts", shifts.len()),
        candidates: block_of.len(),
        pairs_checked: pairs,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::super::examples::{fpw_example, torus_example};
    use super::super::product::product_default;
    use super::*;

    #[test]
    fn fpw_has_no_violations() {
        let r = fpw_probe(&fpw_example(3).unwrap(), 3).unwrap();
        assert!(r.passed() && r.pairs_checked > 0);
    }

    #[test]
    fn torus_has_no_violations() {
        let r = torus_probe(&torus_example(1).unwrap(), 5).unwrap();
        assert!(r.passed() && r.pairs_checked > 0);
    }

    #[test]
    fn product_has_no_violations() {
        let r = product_probe(&product_default(1, 1).unwrap(), 2).unwrap();
        assert!(r.passed() && r.pairs_checked > 0, "{r:?}");
    }

    #[test]
    fn probe_detects_a_full_set() {
        let full = MembershipSet::new(
            "all",
            crate::folner::FolnerSequence::dyadic_prefix(1).unwrap(),
            |_| true,
        );
        assert!(!torus_probe(&full, 3).unwrap().passed());
    }

    #[test]
    fn non_qid_triples_never_close() {
        let phi = super::super::non_qid::default_non_qid_folner().unwrap();
        let c = super::super::non_qid::non_qid_example(&phi, 8).unwrap();
        let shifts = crate::folner::FolnerSequence::box_zd(1)
            .unwrap()
            .window(20)
            .unwrap();
        let r = non_qid_triple_probe(&c, &shifts).unwrap();
        assert!(r.passed() && r.pairs_checked > 0, "{r:?}");
    }
}
