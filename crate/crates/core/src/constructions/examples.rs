//! Sets defined by a closed-form membership rule.

use num_bigint::BigInt;
use num_traits::One;

use super::ep::find_ep;
use super::membership::MembershipSet;
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::{sup_norm, GroupSpec, Int};
use crate::ratio::{ratio, Ratio};

/// Paired index for the integer example: `⌊(2 − 1/N)·4^N⌋`.
pub const ZD_SUBSEQUENCE: &str = "(2N-1)*4^N/N";

/// `x ≠ 0` and the top nonzero coordinate of `x` lies in `E_p`.
pub fn fpw_example(p: u32) -> Result<MembershipSet> {
    let e = find_ep(p)?.ok_or_else(|| Error::Constraint(format!("no E_p exists for p = {p}")))?;
    let folner = FolnerSequence::fp_prefix(p)?;
    let spec = *folner.spec();
    let mut member = vec![false; p as usize];
    for &x in &e {
        member[x as usize] = true;
    }
    Ok(
        MembershipSet::new(&format!("fpw_example(p={p})"), folner, move |g| {
            let top = spec.support_top(g);
            top > 0 && member[g.residue(top) as usize]
        })
        .with_prediction(Some(ratio(1, 2)), Some(Ratio::one()))
        .with_provenance("F_p^w: top coordinate in E_p"),
    )
}

/// `m ∈ A′ = ⋃_{n≥1} [4^n, (2 − 1/n)·4^n)`, endpoints compared exactly.
pub fn in_a_prime(m: &BigInt) -> bool {
    if *m < BigInt::from(4) {
        return false;
    }
    let n = (m.bits() - 1) / 2;
    let four_n = BigInt::one() << (2 * n);
    // m < (2 − 1/n)·4^n  ⟺  n·m < (2n − 1)·4^n
    m * BigInt::from(n) < BigInt::from(2 * n - 1) * four_n
}

/// `‖x‖_∞ ∈ A′` in `Z^d`.
pub fn zd_example(d: usize) -> Result<MembershipSet> {
    if d == 0 {
        return Err(Error::InvalidSpec("d must be at least 1".into()));
    }
    let folner = FolnerSequence::subseq(&FolnerSequence::box_zd(d)?, ZD_SUBSEQUENCE.parse()?);
    let pow = 1u64 << d;
    Ok(
        MembershipSet::new(&format!("zd_example(d={d})"), folner, |g| {
            match sup_norm(g) {
                Int::Small(v) => in_a_prime(&BigInt::from(v)),
                big => in_a_prime(&big.to_big()),
            }
        })
        .with_prediction(Some(ratio(pow, pow + 1)), Some(ratio(1, pow)))
        .with_provenance("Z^d: sup norm in a sparse union of intervals"),
    )
}

/// `w(y)` odd in `T^d`.
pub fn torus_example(d: usize) -> Result<MembershipSet> {
    let folner = FolnerSequence::dyadic_prefix(d)?;
    let spec = *folner.spec();
    let pow = 1u64 << d;
    Ok(
        MembershipSet::new(&format!("torus_example(d={d})"), folner, move |g| {
            spec.weight(g).map(|w| w % 2 == 1).unwrap_or(false)
        })
        .with_prediction(Some(ratio(pow, pow + 1)), Some(Ratio::one()))
        .with_provenance("dyadic torus: odd weight"),
    )
}

/// `w(g)` odd, `w(g) ≥ 3` and `τ(g) ≤ w(g)` in `T^ω`.
pub fn infinite_kernel_example() -> MembershipSet {
    let folner = FolnerSequence::square_prefix();
    let spec = *folner.spec();
    MembershipSet::new("infinite_kernel_example", folner, move |g| {
        let (Ok(w), Ok(tau)) = (spec.weight(g), spec.tau(g)) else {
            return false;
        };
        w % 2 == 1 && w >= 3 && tau <= w
    })
    .with_prediction(Some(Ratio::one()), Some(Ratio::one()))
    .with_provenance("T^w: odd weight at least 3 bounding the support")
}

/// `1 − α/(ℓ + r)` for a group with finite kernel.
pub fn optimal_density(spec: &GroupSpec) -> Option<Ratio> {
    let (ell, r) = (spec.ell(), spec.r()?);
    let alpha = ratio(r.min(ell), ell);
    Some(Ratio::one() - alpha / Ratio::from_integer(BigInt::from(ell + r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_prime_endpoints() {
        let inside: Vec<u64> = (0..70).filter(|&m| in_a_prime(&BigInt::from(m))).collect();
        // n = 1 is empty, n = 2 is [16, 24), n = 3 is [64, 320/3).
        assert_eq!(inside[..8], [16, 17, 18, 19, 20, 21, 22, 23]);
        assert_eq!(inside[8..], [64, 65, 66, 67, 68, 69]);
        assert!(!in_a_prime(&BigInt::from(4)));
        assert!(in_a_prime(&BigInt::from(106)) && !in_a_prime(&BigInt::from(107)));
    }

    #[test]
    fn fpw_membership() {
        let a = fpw_example(3).unwrap();
        let s = a.spec();
        assert!(a.contains(&s.parse_element("{1:1}").unwrap()));
        assert!(!a.contains(&s.parse_element("{1:2}").unwrap()));
        assert!(!a.contains(&s.zero()));
        assert!(fpw_example(7).is_err());
    }

    #[test]
    fn torus_membership() {
        let a = torus_example(1).unwrap();
        let s = *a.spec();
        assert!(a.contains(&s.parse_element("(1/2^1)").unwrap()));
        assert!(!a.contains(&s.parse_element("(1/2^2)").unwrap()));
        let b = torus_example(2).unwrap();
        assert!(b.contains(&b.spec().parse_element("(1/2^3, 1/2^1)").unwrap()));
    }

    #[test]
    fn optimal_densities() {
        assert_eq!(
            optimal_density(&GroupSpec::product(1, 1)),
            Some(ratio(3, 4))
        );
        assert_eq!(
            optimal_density(&GroupSpec::product(1, 2)),
            Some(ratio(5, 6))
        );
        assert_eq!(optimal_density(&GroupSpec::torus(1)), Some(ratio(2, 3)));
    }
}
