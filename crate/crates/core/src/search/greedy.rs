use super::witness::verify_witness;
use crate::constructions::MembershipSet;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::set::FiniteSet;

/// `B = {b_1, …, b_k} ⊂ A ∩ ker D` with `t + b_i + b_j ∈ A` for all `i, j`.
///
/// Each `b_m` is the least unused element of `window` lying in
/// `A ∩ ⋂_{j<m} (A − t − b_j) ∩ ker D`. Requires `2G = {0}`.
pub fn greedy_shifted(
    a: &MembershipSet,
    t: &GroupElement,
    k: usize,
    window: &FiniteSet,
) -> Result<FiniteSet> {
    let spec = *a.spec();
    if !spec.doubling_is_trivial() {
        return Err(Error::Unsupported(format!(
            "greedy search needs 2G = {{0}}, not {spec}"
        )));
    }
    spec.validate(t)?;
    if !a.contains(t) {
        return Err(Error::Constraint(format!(
            "t = {} is not in {}",
            spec.format_element(t),
            a.name()
        )));
    }
    let mut chosen: Vec<GroupElement> = Vec::with_capacity(k);
    for step in 1..=k {
        let next = window.iter().find(|c| {
            spec.double(c).is_zero()
                && a.contains(c)
                && !chosen.contains(c)
                && chosen
                    .iter()
                    .all(|b| a.contains(&spec.add_unchecked(&spec.add_unchecked(t, b), c)))
        });
        match next {
            Some(c) => chosen.push(c.clone()),
            None => {
                return Err(Error::ConstructionFailed {
                    step,
                    reason: "no admissible element left in the window".into(),
                })
            }
        }
    }
    let b = FiniteSet::new(spec, chosen)?;
    if !verify_witness(a, t, &b, false, None) {
        return Err(Error::Unverified("greedy output fails a pair sum".into()));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::FolnerSequence;
    use crate::group::GroupSpec;

    fn f2(n: u32) -> (GroupSpec, FiniteSet) {
        let f = FolnerSequence::fp_power_prefix(2, n).unwrap();
        (*f.spec(), f.window(u64::from(n)).unwrap())
    }

    #[test]
    fn full_set_takes_first_elements() {
        let (spec, w) = f2(4);
        let a = MembershipSet::new(
            "all",
            FolnerSequence::fp_power_prefix(2, 4).unwrap(),
            |_| true,
        );
        let b = greedy_shifted(&a, &spec.zero(), 3, &w).unwrap();
        assert_eq!(b.as_slice(), &w.as_slice()[..3]);
    }

    #[test]
    fn nearly_full_set_succeeds() {
        let (spec, w) = f2(5);
        let missing = w.as_slice()[7].clone();
        let a = MembershipSet::new(
            "all but one",
            FolnerSequence::fp_power_prefix(2, 5).unwrap(),
            move |g| *g != missing,
        );
        let t = w.as_slice()[3].clone();
        let b = greedy_shifted(&a, &t, 5, &w).unwrap();
        assert!(verify_witness(&a, &t, &b, false, None));
        assert_eq!(b.len(), 5);
        assert!(spec.doubling_is_trivial());
    }

    #[test]
    fn empty_candidates_fail_at_step_one() {
        let (spec, w) = f2(3);
        let zero = spec.zero();
        let a = MembershipSet::new(
            "only t",
            FolnerSequence::fp_power_prefix(2, 3).unwrap(),
            move |g| *g == zero,
        );
        let pool = w.filter(|g| !g.is_zero());
        let err = greedy_shifted(&a, &spec.zero(), 2, &pool).unwrap_err();
        assert!(
            matches!(err, Error::ConstructionFailed { step: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn rejects_groups_with_doubling() {
        let a = crate::constructions::odd_coset_example(GroupSpec::integers(1)).unwrap();
        let w = FolnerSequence::box_zd(1).unwrap().window(2).unwrap();
        let t = a.spec().parse_element("1").unwrap();
        assert!(greedy_shifted(&a, &t, 2, &w).is_err());
    }
}
