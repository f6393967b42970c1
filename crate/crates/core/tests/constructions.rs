//! Each construction against a second description of the same set.

use num_bigint::BigInt;
use num_integer::Integer;
use sumsets_core::constructions::{
    find_ep, fpw_example, infinite_kernel_example, odd_coset_example, optimal_density,
    product_default, product_example, product_params, product_stripe_oracle, torus_example,
    zd_example, MembershipSet,
};
use sumsets_core::density::prefix_density;
use sumsets_core::folner::VChoice;
use sumsets_core::ratio::ratio;
use sumsets_core::{FiniteSet, FolnerSequence, GroupSpec};

fn window_or_zero(f: &FolnerSequence, n: u64) -> FiniteSet {
    if n == 0 {
        FiniteSet::new(*f.spec(), vec![f.spec().zero()]).unwrap()
    } else {
        f.window(n).unwrap()
    }
}

fn union_all(spec: GroupSpec, parts: impl IntoIterator<Item = FiniteSet>) -> FiniteSet {
    parts
        .into_iter()
        .fold(FiniteSet::empty(spec), |acc, s| acc.union(&s).unwrap())
}

#[test]
fn fpw_matches_shifted_window_union() {
    let a = fpw_example(3).unwrap();
    let f = a.paired_folner.clone();
    let spec = *f.spec();
    let e = find_ep(3).unwrap().unwrap();
    for n in 1..=5u64 {
        let blocks = (1..=n).flat_map(|m| {
            let prev = window_or_zero(&f, m - 1);
            e.iter()
                .map(|i| {
                    prev.shift(&spec.parse_element(&format!("{{{m}:{i}}}")).unwrap())
                        .unwrap()
                })
                .collect::<Vec<_>>()
        });
        let oracle = union_all(spec, blocks);
        assert_eq!(a.restrict(&f.window(n).unwrap()), oracle, "N = {n}");
    }
}

#[test]
fn torus_matches_odd_shells() {
    for d in 1..=2 {
        let a = torus_example(d).unwrap();
        let f = a.paired_folner.clone();
        let spec = *f.spec();
        let top = if d == 1 { 9 } else { 5 };
        for n in 1..=top {
            let shells = (0..)
                .map(|m: u64| 2 * m + 1)
                .take_while(|&k| k <= n)
                .map(|k| {
                    f.window(k)
                        .unwrap()
                        .difference(&window_or_zero(&f, k - 1))
                        .unwrap()
                });
            assert_eq!(
                a.restrict(&f.window(n).unwrap()),
                union_all(spec, shells),
                "d = {d}, N = {n}"
            );
        }
    }
}

#[test]
fn infinite_kernel_matches_square_blocks() {
    let a = infinite_kernel_example();
    let f = a.paired_folner.clone();
    let spec = *f.spec();
    for n in 1..=4u64 {
        let w = f.window(n).unwrap();
        let blocks = (1..)
            .map(|m: u64| 2 * m + 1)
            .take_while(|&k| k <= 2 * n + 1)
            .map(|k| {
                // F_k^k minus F_{k−1}^k, cut to the window.
                let k32 = k as u32;
                w.filter(|g| {
                    let support_ok = g.dyadic_support().iter().all(|(i, _)| *i <= k32);
                    let degrees_ok = g.dyadic_support().iter().all(|(_, y)| y.degree() <= k32);
                    let outside_smaller = g.dyadic_support().iter().any(|(_, y)| y.degree() == k32);
                    support_ok && degrees_ok && outside_smaller
                })
            });
        assert_eq!(a.restrict(&w), union_all(spec, blocks), "N = {n}");
    }
}

#[test]
fn infinite_kernel_density_at_three() {
    let a = infinite_kernel_example();
    assert_eq!(
        prefix_density(&a, &a.paired_folner, 3).unwrap(),
        ratio(7, 8)
    );
}

#[test]
fn zd_matches_integer_intervals() {
    let a = zd_example(1).unwrap();
    let spec = GroupSpec::integers(1);
    let mut members = Vec::new();
    for n in 2..=5i64 {
        let lo = 4i64.pow(n as u32);
        let hi = Integer::div_ceil(&((2 * n - 1) * lo), &n);
        for m in lo..hi {
            members.push(m.to_string());
            members.push((-m).to_string());
        }
    }
    let lits: Vec<&str> = members.iter().map(String::as_str).collect();
    let oracle = FiniteSet::parse(spec, &lits).unwrap();
    let w = FolnerSequence::box_zd(1).unwrap().window(2000).unwrap();
    assert_eq!(a.restrict(&w), oracle);
    assert!(!a.contains(&spec.parse_element("4").unwrap()));
    assert!(!a.contains(&spec.parse_element("7").unwrap()));
    assert!(a.contains(&spec.parse_element("-16").unwrap()));
    assert!(!a.contains(&spec.zero()));
    let big = format!("{}", BigInt::from(4).pow(40));
    assert!(a.contains(&spec.parse_element(&big).unwrap()));
}

#[test]
fn product_matches_stripes() {
    for (d1, d2, top) in [(1, 1, 2), (2, 1, 2), (1, 2, 1), (2, 2, 1), (1, 3, 1)] {
        let a = product_default(d1, d2).unwrap();
        let params = product_params(&a).unwrap().clone();
        for n in 1..=top {
            let w = a.paired_folner.window(n).unwrap();
            assert_eq!(
                a.restrict(&w),
                product_stripe_oracle(&params, n).unwrap(),
                "({d1},{d2}) N = {n}"
            );
        }
    }
}

#[test]
fn product_with_faster_v() {
    let a = product_example(
        1,
        1,
        "2N".parse().unwrap(),
        VChoice::Expr("3^N".parse().unwrap()),
    )
    .unwrap();
    for n in 1..=2 {
        assert_eq!(
            prefix_density(&a, &a.paired_folner, n).unwrap(),
            ratio(3, 4)
        );
    }
}

#[test]
fn product_lless_density_rises_toward_prediction() {
    let a = product_default(1, 2).unwrap();
    assert_eq!(a.predicted_density, Some(ratio(5, 6)));
    let d1 = prefix_density(&a, &a.paired_folner, 1).unwrap();
    assert!(d1 > ratio(1, 2) && d1 < ratio(1, 1));
}

#[test]
fn predictions_match_the_optimal_formula() {
    let sets: Vec<MembershipSet> = vec![
        fpw_example(3).unwrap(),
        fpw_example(11).unwrap(),
        torus_example(1).unwrap(),
        torus_example(3).unwrap(),
        product_default(1, 1).unwrap(),
        product_default(2, 1).unwrap(),
        product_default(1, 2).unwrap(),
    ];
    for a in sets {
        assert_eq!(
            a.predicted_density,
            optimal_density(a.spec()),
            "{}",
            a.name()
        );
    }
}

#[test]
fn odd_coset_avoids_doubles() {
    let a = odd_coset_example(GroupSpec::product(1, 1)).unwrap();
    let w = FolnerSequence::natural(GroupSpec::product(1, 1))
        .window(3)
        .unwrap();
    assert_eq!(a.restrict(&w.double_image()).len(), 0);
    let z = odd_coset_example(GroupSpec::integers(1)).unwrap();
    let d = prefix_density(&z, &FolnerSequence::box_zd(1).unwrap(), 100).unwrap();
    assert_eq!(d, ratio(100, 201));
    assert!(odd_coset_example(GroupSpec::torus(1)).is_err());
}
