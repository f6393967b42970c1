//! Search soundness, search/certificate duality and the coset transforms.

use proptest::prelude::*;
use sumsets_core::constructions::{
    default_non_qid_folner, fpw_example, non_qid_example, non_qid_triple_probe,
};
use sumsets_core::search::{
    certify_avoidance, find_witness, padded_set, refine_witness_to_even, shift_normalize,
    verify_witness, SearchProblem, SearchStatus, ShiftMode,
};
use sumsets_core::{FiniteSet, FolnerSequence, GroupSpec, MembershipSet};

fn integer_set(members: Vec<i64>) -> MembershipSet {
    let spec = GroupSpec::integers(1);
    let lits: Vec<String> = members.iter().map(i64::to_string).collect();
    let refs: Vec<&str> = lits.iter().map(String::as_str).collect();
    let set = FiniteSet::parse(spec, &refs).unwrap();
    MembershipSet::finite("random", FolnerSequence::box_zd(1).unwrap(), set).unwrap()
}

fn window(n: u64) -> FiniteSet {
    FolnerSequence::box_zd(1).unwrap().window(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_verify(members in proptest::collection::vec(-30i64..=30, 0..50), k in 2usize..=4, t in -3i64..=3, restricted: bool) {
        let a = integer_set(members);
        let shift = ShiftMode::Fixed(a.spec().parse_element(&t.to_string()).unwrap());
        let p = SearchProblem::new(a.clone(), window(8), k).with_shift(shift).restricted(restricted);
        let r = find_witness(&p).unwrap();
        if let (Some(t), Some(b)) = (&r.t, &r.b) {
            prop_assert_eq!(b.len(), k);
            prop_assert!(verify_witness(&a, t, b, restricted, None));
        }
    }

    #[test]
    fn certificate_agrees_with_search(members in proptest::collection::vec(-20i64..=20, 0..40), k in 2usize..=4) {
        let a = integer_set(members);
        let p = SearchProblem::new(a, window(6), k).with_shift(ShiftMode::Pool(window(1)));
        let cert = certify_avoidance(&p).unwrap();
        let found = find_witness(&p).unwrap();
        prop_assert!(cert.completed);
        prop_assert_eq!(cert.exhausted, found.status == SearchStatus::NotFound);
        if cert.max_achievable_k >= 2 {
            let at_max = find_witness(&SearchProblem { k: cert.max_achievable_k, ..p.clone() }).unwrap();
            prop_assert!(at_max.found);
            let above = find_witness(&SearchProblem { k: cert.max_achievable_k + 1, ..p.clone() }).unwrap();
            prop_assert!(!above.found);
        }
    }

    #[test]
    fn padded_witnesses_refine_to_even(members in proptest::collection::vec(-20i64..=20, 0..40)) {
        let a = integer_set(members);
        let padded = padded_set(&a);
        let p = SearchProblem::new(padded.clone(), window(6), 3);
        let r = find_witness(&p).unwrap();
        if let (Some(t), Some(b)) = (&r.t, &r.b) {
            let (t2, b2) = refine_witness_to_even(&padded, t, b).unwrap();
            prop_assert!(b2.len() >= b.len().div_ceil(2));
            prop_assert!(verify_witness(&a.even_part(), &t2, &b2, false, None));
        }
    }

    #[test]
    fn normalization_preserves_witnesses(t in -40i64..=40, base in -10i64..=10) {
        let all = MembershipSet::new("Z", FolnerSequence::box_zd(1).unwrap(), |_| true);
        let spec = *all.spec();
        let b = FiniteSet::parse(spec, &[&base.to_string(), &(base + 3).to_string()]).unwrap();
        let t = spec.parse_element(&t.to_string()).unwrap();
        let (g, shifted) = shift_normalize(&all, &t, &b).unwrap();
        prop_assert!(verify_witness(&all, &g, &shifted, false, None));
        prop_assert!(g == spec.zero() || g == spec.parse_element("1").unwrap());
    }
}

#[test]
fn fpw_certificate_reports_largest_family() {
    let a = fpw_example(3).unwrap();
    let w = a.paired_folner.window(3).unwrap();
    let cert = certify_avoidance(&SearchProblem::new(a, w, 2)).unwrap();
    assert!(cert.completed);
    assert!(cert.max_achievable_k >= 1);
    let witness = cert.max_witness;
    assert_eq!(
        witness.b_literals.map(|b| b.len()).unwrap_or(0),
        cert.max_achievable_k
    );
}

#[test]
fn full_group_certificate() {
    let f = FolnerSequence::fp_prefix(3).unwrap();
    let a = MembershipSet::new("all", f.clone(), |_| true);
    let w = f.window(3).unwrap();
    let cert = certify_avoidance(&SearchProblem::new(a, w, 2)).unwrap();
    assert_eq!(cert.max_achievable_k, 27);
    assert!(!cert.exhausted);
}

#[test]
fn non_qid_triples_are_absent() {
    let c = non_qid_example(&default_non_qid_folner().unwrap(), 8).unwrap();
    let r = non_qid_triple_probe(&c, &window(20)).unwrap();
    assert!(r.passed(), "{:?}", r.violations);
}

#[test]
fn refine_example() {
    let all = MembershipSet::new("Z", FolnerSequence::box_zd(1).unwrap(), |_| true);
    let spec = *all.spec();
    let b = FiniteSet::parse(spec, &["1", "2", "3", "4"]).unwrap();
    let (_, refined) = refine_witness_to_even(&all, &spec.zero(), &b).unwrap();
    assert_eq!(refined.literals(), ["2", "4"]);
}
