//! Sets `E ⊂ F_p^×` with `E ∩ 2E = ∅` and `|E| = (p−1)/2`.

use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Largest prime accepted by [`find_ep`].
pub const MAX_EP_PRIME: u32 = 1 << 20;

/// Cycles of `x ↦ 2x` on `{1, …, p−1}`, each starting at its least element.
pub fn doubling_cycles(p: u32) -> Vec<Vec<u32>> {
    let mut seen = vec![false; p as usize];
    let mut cycles = Vec::new();
    for start in 1..p {
        if seen[start as usize] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            cycle.push(x);
            x = (2 * u64::from(x) % u64::from(p)) as u32;
        }
        cycles.push(cycle);
    }
    cycles
}

/// A valid `E_p`, or `None` when some doubling cycle has odd length.
///
/// Alternate elements of each cycle are taken, starting from its least element.
pub fn find_ep(p: u32) -> Result<Option<Vec<u32>>> {
    if p == 2 || p > MAX_EP_PRIME || GroupSpec::fp_omega(p).is_err() {
        return Err(Error::InvalidSpec(format!(
            "{p} is not an odd prime up to {MAX_EP_PRIME}"
        )));
    }
    let cycles = doubling_cycles(p);
    if cycles.iter().any(|c| c.len() % 2 == 1) {
        return Ok(None);
    }
    let mut e: Vec<u32> = cycles
        .iter()
        .flat_map(|c| c.iter().step_by(2).copied())
        .collect();
    e.sort_unstable();
    Ok(Some(e))
}

/// `E ∩ 2E = ∅`, `E ⊂ F_p^×` and `|E| = (p−1)/2`.
pub fn verify_ep(p: u32, e: &[u32]) -> bool {
    let mut member = vec![false; p as usize];
    for &x in e {
        if x == 0 || x >= p || member[x as usize] {
            return false;
        }
        member[x as usize] = true;
    }
    let disjoint = e
        .iter()
        .all(|&x| !member[(2 * u64::from(x) % u64::from(p)) as usize]);
    disjoint && e.len() as u32 == (p - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(find_ep(3).unwrap(), Some(vec![1]));
        assert_eq!(find_ep(11).unwrap(), Some(vec![1, 3, 4, 5, 9]));
        assert_eq!(find_ep(7).unwrap(), None);
        assert!(find_ep(9).is_err());
        assert!(find_ep(2).is_err());
    }

    #[test]
    fn every_answer_verifies() {
        for p in [3u32, 5, 11, 13, 19, 29, 37, 53, 59, 61, 67, 83] {
            if let Some(e) = find_ep(p).unwrap() {
                assert!(verify_ep(p, &e), "p = {p}");
            }
        }
    }
    #[test]
    fn existence_matches_cycle_parity_below_4096() {
        let is_prime = |n: u32| {
            n >= 2
                && (2..)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for p in (3..4096u32).step_by(2).filter(|&n| is_prime(n)) {
            let even = doubling_cycles(p).iter().all(|c| c.len() % 2 == 0);
            let e = find_ep(p).unwrap();
            assert_eq!(e.is_some(), even, "p = {p}");
            if let Some(e) = e {
                assert!(verify_ep(p, &e), "p = {p}");
            }
        }
    }
}
