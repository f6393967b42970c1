use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::witness::verify_witness;
use crate::constructions::MembershipSet;
use crate::density::prefix_density;
use crate::error::{Error, Result};
use crate::folner::FolnerSequence;
use crate::group::GroupElement;
use crate::ratio::{self, ratio, Ratio};
use crate::set::FiniteSet;

/// The three equivalent density thresholds attached to `β`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    #[serde(with = "ratio")]
    pub beta: Ratio,
    pub ell: u64,
    /// `ℓβ`, for `A`.
    #[serde(with = "ratio")]
    pub dense: Ratio,
    /// `β + (ℓ − 1)/ℓ`, for `(A ∩ 2G) ∪ (G ∖ 2G)`.
    #[serde(with = "ratio")]
    pub padded: Ratio,
    /// `β`, for `A ∩ 2G`.
    #[serde(with = "ratio")]
    pub even: Ratio,
}

/// Prefix densities at one window compared with [`Thresholds`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdCheck {
    pub n: u64,
    #[serde(with = "ratio")]
    pub density: Ratio,
    #[serde(with = "ratio")]
    pub padded_density: Ratio,
    #[serde(with = "ratio")]
    pub even_density: Ratio,
    pub dense_holds: bool,
    pub padded_holds: bool,
    pub even_holds: bool,
}

/// `(ℓβ, β + (ℓ−1)/ℓ, β)` for `0 ≤ β ≤ 1/ℓ`.
pub fn threshold_transfer(beta: &Ratio, ell: u64) -> Result<Thresholds> {
    if ell == 0 {
        return Err(Error::Constraint("ℓ must be positive".into()));
    }
    if *beta < Ratio::zero() || *beta > ratio(1, ell) {
        return Err(Error::Constraint(format!(
            "β = {beta} must lie in [0, 1/{ell}]"
        )));
    }
    let l = Ratio::from_integer(ell.into());
    Ok(Thresholds {
        beta: beta.clone(),
        ell,
        dense: &l * beta,
        padded: beta + (&l - Ratio::one()) / &l,
        even: beta.clone(),
    })
}

impl Thresholds {
    /// Which of the three strict inequalities hold at window `n` of `f`.
    pub fn check(&self, a: &MembershipSet, f: &FolnerSequence, n: u64) -> Result<ThresholdCheck> {
        let density = prefix_density(a, f, n)?;
        let padded_density = prefix_density(&padded_set(a), f, n)?;
        let even_density = prefix_density(&a.even_part(), f, n)?;
        Ok(ThresholdCheck {
            n,
            dense_holds: density > self.dense,
            padded_holds: padded_density > self.padded,
            even_holds: even_density > self.even,
            density,
            padded_density,
            even_density,
        })
    }
}

/// `(A ∩ 2G) ∪ (G ∖ 2G)`.
pub fn padded_set(a: &MembershipSet) -> MembershipSet {
    let (inner, spec) = (a.clone(), *a.spec());
    MembershipSet::new(
        &format!("pad({})", a.name()),
        a.paired_folner.clone(),
        move |g| !spec.in_two_g(g) || inner.contains(g),
    )
}

/// `⊔_i (A ∩ 2G) + g_i` over the coset transversal.
pub fn padding_transform(a: &MembershipSet) -> MembershipSet {
    let (inner, spec) = (a.clone(), *a.spec());
    MembershipSet::new(
        &format!("spread({})", a.name()),
        a.paired_folner.clone(),
        move |g| {
            let rep = spec.coset_rep(g);
            inner.contains(&spec.sub(g, &rep).expect("same group"))
        },
    )
}

fn require_witness(a: &MembershipSet, t: &GroupElement, b: &FiniteSet) -> Result<()> {
    if b.spec() != a.spec() {
        return Err(Error::SpecMismatch {
            expected: a.spec().to_string(),
            found: b.spec().to_string(),
        });
    }
    a.spec().validate(t)?;
    if !verify_witness(a, t, b, false, None) {
        return Err(Error::Unverified(format!(
            "t + B + B is not contained in {}",
            a.name()
        )));
    }
    Ok(())
}

/// Keep the largest part of `B` inside one coset of `2G`, so that `B′ + B′ ⊂ 2G`.
///
/// Ties go to the least coset representative. The result satisfies
/// `t + B′ + B′ ⊂ A` and `|B′| ≥ ⌈|B|/ℓ⌉`.
pub fn refine_witness_to_even(
    a: &MembershipSet,
    t: &GroupElement,
    b: &FiniteSet,
) -> Result<(GroupElement, FiniteSet)> {
    require_witness(a, t, b)?;
    let spec = *a.spec();
    let mut classes: BTreeMap<GroupElement, Vec<GroupElement>> = BTreeMap::new();
    for x in b.iter() {
        classes
            .entry(spec.coset_rep(x))
            .or_default()
            .push(x.clone());
    }
    let mut best: Option<Vec<GroupElement>> = None;
    for members in classes.into_values() {
        if best.as_ref().is_none_or(|m| members.len() > m.len()) {
            best = Some(members);
        }
    }
    let refined = FiniteSet::new(spec, best.unwrap_or_default())?;
    let even = refined.iter().all(|x| {
        refined
            .iter()
            .all(|y| spec.in_two_g(&spec.add_unchecked(x, y)))
    });
    if !even || !verify_witness(a, t, &refined, false, None) {
        return Err(Error::Unverified("refined witness fails".into()));
    }
    Ok((t.clone(), refined))
}

/// Write `t = 2s + g_i` and return `(g_i, B + s)`, so that `g_i + B″ + B″ ⊂ A`.
pub fn shift_normalize(
    a: &MembershipSet,
    t: &GroupElement,
    b: &FiniteSet,
) -> Result<(GroupElement, FiniteSet)> {
    require_witness(a, t, b)?;
    let spec = *a.spec();
    let rep = spec.coset_rep(t);
    let s = spec
        .half_one(&spec.sub(t, &rep)?)?
        .expect("t − g_i lies in 2G");
    let shifted = b.shift(&s)?;
    if !verify_witness(a, &rep, &shifted, false, None) {
        return Err(Error::Unverified("normalized witness fails".into()));
    }
    Ok((rep, shifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn all_of_z() -> MembershipSet {
        MembershipSet::new("Z", FolnerSequence::box_zd(1).unwrap(), |_| true)
    }

    fn set(lits: &[&str]) -> FiniteSet {
        FiniteSet::parse(GroupSpec::integers(1), lits).unwrap()
    }

    #[test]
    fn thresholds() {
        let t = threshold_transfer(&ratio(1, 6), 2).unwrap();
        assert_eq!(
            (t.dense, t.padded, t.even),
            (ratio(1, 3), ratio(2, 3), ratio(1, 6))
        );
        let z = threshold_transfer(&Ratio::zero(), 4).unwrap();
        assert_eq!((z.dense, z.padded), (Ratio::zero(), ratio(3, 4)));
        assert!(threshold_transfer(&ratio(1, 2), 4).is_err());
    }

    #[test]
    fn refine_picks_even_class() {
        let a = all_of_z();
        let zero = a.spec().zero();
        let (_, b) = refine_witness_to_even(&a, &zero, &set(&["1", "2", "3", "4"])).unwrap();
        assert_eq!(b, set(&["2", "4"]));
    }

    #[test]
    fn normalize_seven() {
        let a = all_of_z();
        let t = a.spec().parse_element("7").unwrap();
        let (g, b) = shift_normalize(&a, &t, &set(&["1", "2"])).unwrap();
        assert_eq!(a.spec().format_element(&g), "1");
        assert_eq!(b, set(&["4", "5"]));
    }

    #[test]
    fn rejects_unverified_input() {
        let a = crate::constructions::odd_coset_example(GroupSpec::integers(1)).unwrap();
        let zero = a.spec().zero();
        assert!(refine_witness_to_even(&a, &zero, &set(&["1", "2"])).is_err());
    }

    #[test]
    fn padding_is_disjoint_union() {
        let evens_only = MembershipSet::new("mult4", FolnerSequence::box_zd(1).unwrap(), |g| {
            g.ints()[0].as_i64().is_some_and(|x| x % 4 == 0)
        });
        let f = evens_only.paired_folner.clone();
        let p = prefix_density(&padded_set(&evens_only), &f, 20).unwrap();
        let e = prefix_density(&evens_only.even_part(), &f, 20).unwrap();
        let odd = prefix_density(
            &crate::constructions::odd_coset_example(GroupSpec::integers(1)).unwrap(),
            &f,
            20,
        )
        .unwrap();
        assert_eq!(p, e + odd);
        let spread = padding_transform(&evens_only);
        assert!(spread.contains(&f.spec().parse_element("5").unwrap()));
        assert!(!spread.contains(&f.spec().parse_element("3").unwrap()));
    }
}
