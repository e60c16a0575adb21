//! Randomized invariants, with independent reference implementations where
//! a second route exists.

use std::collections::HashSet;

use proptest::prelude::*;

use setpack::bounds::{bounds_report, lower_bound, upper_bound};
use setpack::greedy::{detect_period, greedy_density, periodic_packing, run_greedy};
use setpack::oracle::exact_packing_density;
use setpack::set::interval_density;
use setpack::{is_packing, FiniteIntSet, Rational};

fn from_elems(elems: Vec<i64>) -> FiniteIntSet {
    FiniteIntSet::new(elems).expect("strategy yields valid sets")
}

/// Sets of up to 6 elements anywhere in a moderate range.
fn wide_set() -> impl Strategy<Value = FiniteIntSet> {
    prop::collection::btree_set(-100i64..=100, 1..=6)
        .prop_map(|els| from_elems(els.into_iter().collect()))
}

/// Sets narrow enough for the exact oracle to stay cheap.
fn narrow_set() -> impl Strategy<Value = FiniteIntSet> {
    prop::collection::btree_set(0i64..=10, 1..=6)
        .prop_map(|els| from_elems(els.into_iter().collect()))
}

/// Greedy recomputed from its definition: scan upward, keep a position when
/// no kept predecessor sits at a difference of the shape. No windows.
fn greedy_reference(s: &FiniteIntSet, horizon: u64) -> Vec<bool> {
    let diff = s.diff_set();
    let mut chosen: Vec<i64> = Vec::new();
    let mut membership = Vec::with_capacity(horizon as usize);
    for x in 0..horizon as i64 {
        let ok = chosen.iter().all(|&y| !diff.contains(x - y));
        if ok {
            chosen.push(x);
        }
        membership.push(ok);
    }
    membership
}

/// Packing checked straight from the definition: all translates disjoint.
fn translates_disjoint(a: &FiniteIntSet, s: &FiniteIntSet) -> bool {
    let mut seen = HashSet::new();
    for &x in a.elements() {
        for &y in s.elements() {
            if !seen.insert(x + y) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn prop_diff_set_shape(s in wide_set()) {
        let d = s.diff_set();
        let v = d.values();
        prop_assert_eq!(v[0], 0);
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
        let k = s.len();
        prop_assert!(d.len() <= k * (k - 1) / 2 + 1);
        prop_assert_eq!(d.diameter(), s.diameter());
        for &x in s.elements() {
            for &y in s.elements() {
                if x >= y {
                    prop_assert!(d.contains(x - y));
                }
            }
        }
    }

    #[test]
    fn prop_diff_set_class_invariant(s in wide_set(), t in -50i64..=50) {
        let d = s.diff_set();
        prop_assert_eq!(&d, &s.translate(t).unwrap().diff_set());
        prop_assert_eq!(&d, &s.reflect().diff_set());
    }

    #[test]
    fn prop_canonical_form_is_a_class_representative(s in wide_set(), t in -50i64..=50) {
        let c = s.canonical_form();
        prop_assert_eq!(c.canonical_form(), c.clone());
        prop_assert_eq!(s.translate(t).unwrap().canonical_form(), c.clone());
        prop_assert_eq!(s.reflect().canonical_form(), c.clone());
        prop_assert_eq!(c.min_elem(), 0);
        prop_assert!(c.elements() <= s.normalize().elements());
    }

    #[test]
    fn prop_is_packing_matches_direct_disjointness(
        a in prop::collection::btree_set(-40i64..=40, 1..=8),
        s in prop::collection::btree_set(-40i64..=40, 1..=8),
    ) {
        let a = from_elems(a.into_iter().collect());
        let s = from_elems(s.into_iter().collect());
        prop_assert_eq!(is_packing(&a, &s), translates_disjoint(&a, &s));
    }

    #[test]
    fn prop_greedy_prefix_bound_and_start(s in wide_set()) {
        let trace = run_greedy(&s, 150).unwrap();
        let diff_size = s.diff_set().len() as u64;
        prop_assert_eq!(trace.chosen[0], 0);
        for (i, &t) in trace.chosen.iter().enumerate() {
            prop_assert!(t <= i as u64 * diff_size, "t_{i} = {t} too large");
        }
    }

    #[test]
    fn prop_greedy_matches_its_definition(s in wide_set()) {
        let trace = run_greedy(&s, 80).unwrap();
        prop_assert_eq!(trace.membership, greedy_reference(&s, 80));
    }

    #[test]
    fn prop_greedy_prefix_is_a_packing(s in wide_set()) {
        let trace = run_greedy(&s, 120).unwrap();
        let prefix = from_elems(trace.chosen.iter().map(|&t| t as i64).collect());
        prop_assert!(is_packing(&prefix, &s));
    }

    #[test]
    fn prop_detected_period_holds_on_the_trace(s in narrow_set()) {
        let (a, p) = detect_period(&s).unwrap();
        let horizon = a + 3 * p + s.diameter() + 1;
        let trace = run_greedy(&s, horizon).unwrap();
        prop_assert_eq!(trace.recurrence, Some((a, a + p)));
        for x in a..horizon - p {
            prop_assert_eq!(trace.membership[x as usize], trace.membership[(x + p) as usize]);
        }
    }

    #[test]
    fn prop_periodic_tail_density_is_consistent(s in narrow_set()) {
        let periodic = periodic_packing(&s).unwrap();
        let pattern = periodic.pattern().to_vec();
        let p = periodic.period() as i64;
        let ones = interval_density(0, p, |x| pattern[x as usize]).unwrap();
        prop_assert_eq!(ones, periodic.density());
        prop_assert!(periodic.density() >= lower_bound(&s));
        prop_assert!(periodic.density() <= upper_bound(&s));
    }

    #[test]
    fn prop_density_sandwich(s in narrow_set()) {
        let report = bounds_report(&s);
        let greedy = greedy_density(&s).unwrap();
        let exact = exact_packing_density(&s).unwrap().density;
        prop_assert!(report.lower <= greedy);
        prop_assert!(greedy <= exact);
        prop_assert!(exact <= report.upper);
    }

    #[test]
    fn prop_exact_density_is_class_invariant(s in narrow_set(), t in -30i64..=30) {
        let base = exact_packing_density(&s).unwrap().density;
        prop_assert_eq!(base, exact_packing_density(&s.translate(t).unwrap()).unwrap().density);
        prop_assert_eq!(base, exact_packing_density(&s.reflect()).unwrap().density);
    }

    #[test]
    fn prop_exact_density_shrinks_under_supersets(
        s in narrow_set(),
        extra in prop::collection::btree_set(0i64..=10, 1..=3),
    ) {
        let mut bigger: Vec<i64> = s.elements().to_vec();
        bigger.extend(extra);
        let bigger = from_elems(bigger);
        prop_assume!(bigger.len() > s.len());
        let d_small = exact_packing_density(&s).unwrap().density;
        let d_big = exact_packing_density(&bigger).unwrap().density;
        prop_assert!(d_big <= d_small);
    }
}

/// Dilation leaves the density unchanged; fixed suite because scaled sets
/// grow quickly.
#[test]
fn scaling_preserves_exact_density() {
    let cases: &[(&[i64], i64)] = &[
        (&[0, 1], 2),
        (&[0, 1], 3),
        (&[0, 1], 5),
        (&[0, 1, 3], 2),
        (&[0, 1, 3], 3),
        (&[0, 1, 4], 2),
        (&[0, 2, 7], 2),
        (&[0, 1, 4, 6], 2),
    ];
    for &(elems, c) in cases {
        let s = FiniteIntSet::new(elems.to_vec()).unwrap();
        let scaled = FiniteIntSet::new(elems.iter().map(|&x| c * x).collect()).unwrap();
        assert_eq!(
            exact_packing_density(&s).unwrap().density,
            exact_packing_density(&scaled).unwrap().density,
            "density changed under dilation by {c} for {s}"
        );
    }
}

/// The two known 1/7 shapes, pinned.
#[test]
fn known_minimum_shapes() {
    for elems in [&[0i64, 1, 4, 6][..], &[0, 2, 8, 12]] {
        let s = FiniteIntSet::new(elems.to_vec()).unwrap();
        assert_eq!(
            exact_packing_density(&s).unwrap().density,
            Rational::new(1, 7)
        );
    }
}
