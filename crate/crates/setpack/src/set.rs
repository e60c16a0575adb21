//! Finite integer sets and their difference sets.
//!
//! The central predicate is `is_packing`: a set `A` packs with respect to a
//! shape `S` when the translates `a + S` for `a` in `A` are pairwise
//! disjoint. Disjointness of translates is equivalent to a condition on
//! differences: `A` packs iff no difference of two distinct elements of `A`
//! is a difference of two elements of `S`. Everything downstream (greedy,
//! bounds, the exact oracle) works through that difference criterion.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest allowed element magnitude, inclusive.
pub const MAX_ELEMENT_MAGNITUDE: i64 = 1 << 32;

/// A nonempty finite set of integers, stored sorted and deduplicated.
///
/// Elements are bounded by `MAX_ELEMENT_MAGNITUDE` in absolute value so that
/// differences always fit in `i64` with room to spare.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteIntSet {
    elems: Vec<i64>,
}

impl FiniteIntSet {
    /// Builds a set from arbitrary elements, sorting and removing
    /// duplicates. Rejects empty input and out-of-range elements.
    pub fn new(mut elems: Vec<i64>) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        for &x in &elems {
            if x.abs() > MAX_ELEMENT_MAGNITUDE {
                return Err(Error::ElementTooLarge { value: x });
            }
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(FiniteIntSet { elems })
    }

    /// Parses a comma-separated literal such as `"0,1,4,6"`. Whitespace
    /// around elements is ignored. The second return value reports whether
    /// duplicates were removed, so interactive callers can warn.
    pub fn parse(input: &str) -> Result<(Self, bool)> {
        let mut elems = Vec::new();
        let mut pos = 0usize;
        for token in input.split(',') {
            let trimmed = token.trim();
            if trimmed.is_empty() {
                return Err(Error::ParseSet {
                    position: pos,
                    message: "empty element".to_string(),
                });
            }
            let value: i64 = trimmed.parse().map_err(|_| Error::ParseSet {
                position: pos + (token.len() - token.trim_start().len()),
                message: format!("not an integer: {trimmed:?}"),
            })?;
            elems.push(value);
            pos += token.len() + 1;
        }
        let raw_len = elems.len();
        let set = FiniteIntSet::new(elems)?;
        let had_duplicates = set.len() != raw_len;
        Ok((set, had_duplicates))
    }

    /// The elements, sorted strictly increasing.
    pub fn elements(&self) -> &[i64] {
        &self.elems
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Always false: the empty set is unrepresentable.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest element.
    pub fn min_elem(&self) -> i64 {
        self.elems[0]
    }

    /// Largest element.
    pub fn max_elem(&self) -> i64 {
        *self.elems.last().expect("nonempty")
    }

    /// `max - min`, always nonnegative.
    pub fn diameter(&self) -> u64 {
        (self.max_elem() - self.min_elem()) as u64
    }

    /// Membership test.
    pub fn contains(&self, x: i64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// The set `{x + t : x in S}`; fails if translation leaves the
    /// supported range.
    pub fn translate(&self, t: i64) -> Result<Self> {
        let mut elems = Vec::with_capacity(self.len());
        for &x in &self.elems {
            let y = x.checked_add(t).ok_or(Error::ElementTooLarge { value: x })?;
            elems.push(y);
        }
        FiniteIntSet::new(elems)
    }

    /// The set `{-x : x in S}`.
    pub fn reflect(&self) -> Self {
        let elems = self.elems.iter().rev().map(|&x| -x).collect();
        FiniteIntSet { elems }
    }

    /// Translates so the minimum is 0. Packing density is translation
    /// invariant, so most computations normalize first.
    pub fn normalize(&self) -> Self {
        let min = self.min_elem();
        let elems = self.elems.iter().map(|&x| x - min).collect();
        FiniteIntSet { elems }
    }

    /// Canonical representative under translation and reflection: the
    /// lexicographically smaller of `normalize(S)` and `normalize(-S)`.
    pub fn canonical_form(&self) -> Self {
        let fwd = self.normalize();
        let rev = self.reflect().normalize();
        if rev.elems < fwd.elems {
            rev
        } else {
            fwd
        }
    }

    /// The difference set `{s - t : s, t in S, s >= t}`.
    pub fn diff_set(&self) -> DiffSet {
        let mut values = vec![0i64];
        for (i, &s) in self.elems.iter().enumerate() {
            for &t in &self.elems[..i] {
                values.push(s - t);
            }
        }
        values.sort_unstable();
        values.dedup();
        DiffSet { values }
    }

    /// The elements as a braceless literal, e.g. `0,1,4,6`.
    pub fn literal(&self) -> String {
        let parts: Vec<String> = self.elems.iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for FiniteIntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.literal())
    }
}

/// The difference set of some `FiniteIntSet`: sorted, starts with 0.
///
/// Its size governs both bounds and the greedy guarantee, and its positive
/// part is exactly the forbidden-gap list driving the window automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffSet {
    values: Vec<i64>,
}

impl DiffSet {
    /// All differences, ascending; the first is always 0.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Number of distinct differences, counting 0.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Never true: 0 is always a difference.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The positive differences, ascending.
    pub fn positive(&self) -> &[i64] {
        &self.values[1..]
    }

    /// Largest difference, equal to the diameter of the source set.
    pub fn diameter(&self) -> u64 {
        *self.values.last().expect("contains 0") as u64
    }

    /// Membership test.
    pub fn contains(&self, d: i64) -> bool {
        self.values.binary_search(&d).is_ok()
    }
}

impl fmt::Display for DiffSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Whether the translates `a + S` for `a` in `A` are pairwise disjoint.
///
/// Uses the difference criterion: `A` packs iff no positive difference of
/// elements of `A` lies in `diff(S)`. Differences larger than `diam(S)`
/// cannot collide, so each inner scan stops early.
pub fn is_packing(a: &FiniteIntSet, s: &FiniteIntSet) -> bool {
    let diff = s.diff_set();
    let diam = diff.diameter() as i64;
    let elems = a.elements();
    for j in 1..elems.len() {
        // Scan nearest predecessors first; differences grow monotonically.
        for i in (0..j).rev() {
            let d = elems[j] - elems[i];
            if d > diam {
                break;
            }
            if diff.contains(d) {
                return false;
            }
        }
    }
    true
}

/// The fraction of integers in `[a, b)` accepted by `member`.
pub fn interval_density<F: FnMut(i64) -> bool>(a: i64, b: i64, mut member: F) -> Result<Rational> {
    if b <= a {
        return Err(Error::EmptyInterval { a, b });
    }
    let length = (i128::from(b) - i128::from(a)) as u64;
    let mut count = 0u64;
    let mut x = a;
    while x < b {
        if member(x) {
            count += 1;
        }
        x += 1;
    }
    Ok(Rational::new(count, length))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[i64]) -> FiniteIntSet {
        FiniteIntSet::new(elems.to_vec()).unwrap()
    }

    #[test]
    fn diff_set_basics() {
        assert_eq!(set(&[0, 1, 3]).diff_set().values(), &[0, 1, 2, 3]);
        assert_eq!(set(&[0, 2, 7]).diff_set().values(), &[0, 2, 5, 7]);
        assert_eq!(set(&[5]).diff_set().values(), &[0]);
    }

    #[test]
    fn diff_set_of_perfect_basis_is_full_interval() {
        let d = set(&[0, 1, 4, 6]).diff_set();
        assert_eq!(d.values(), &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(d.len(), 7);
        assert_eq!(d.diameter(), 6);
    }

    #[test]
    fn diff_set_is_translation_invariant() {
        let a = set(&[0, 1, 4, 6]).diff_set();
        let b = set(&[10, 11, 14, 16]).diff_set();
        assert_eq!(a, b);
    }

    #[test]
    fn diameter_and_extremes() {
        let s = set(&[-3, 0, 9]);
        assert_eq!(s.min_elem(), -3);
        assert_eq!(s.max_elem(), 9);
        assert_eq!(s.diameter(), 12);
    }

    #[test]
    fn normalize_shifts_min_to_zero() {
        assert_eq!(set(&[3, 4, 7, 9]).normalize(), set(&[0, 1, 4, 6]));
        assert_eq!(set(&[-5]).normalize(), set(&[0]));
    }

    #[test]
    fn canonical_form_prefers_lex_smaller_orientation() {
        assert_eq!(set(&[0, 2, 5, 6]).canonical_form(), set(&[0, 1, 4, 6]));
        assert_eq!(set(&[0, 1, 4, 6]).canonical_form(), set(&[0, 1, 4, 6]));
        // A symmetric set is its own reflection.
        assert_eq!(set(&[0, 2, 4]).canonical_form(), set(&[0, 2, 4]));
    }

    #[test]
    fn parse_accepts_whitespace_and_reports_duplicates() {
        let (s, dup) = FiniteIntSet::parse("0, 1, 4, 6").unwrap();
        assert_eq!(s, set(&[0, 1, 4, 6]));
        assert!(!dup);

        let (s, dup) = FiniteIntSet::parse("6,1,0,4,1").unwrap();
        assert_eq!(s, set(&[0, 1, 4, 6]));
        assert!(dup);
    }

    #[test]
    fn parse_rejects_garbage_with_position() {
        match FiniteIntSet::parse("0,1,x,6") {
            Err(Error::ParseSet { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(FiniteIntSet::parse("").is_err());
        assert!(FiniteIntSet::parse("1,,2").is_err());
    }

    #[test]
    fn rejects_out_of_range_elements() {
        let big = MAX_ELEMENT_MAGNITUDE + 1;
        assert_eq!(
            FiniteIntSet::new(vec![0, big]),
            Err(Error::ElementTooLarge { value: big })
        );
        assert!(FiniteIntSet::new(vec![MAX_ELEMENT_MAGNITUDE]).is_ok());
    }

    #[test]
    fn packing_via_difference_criterion() {
        let s = set(&[0, 4, 5]);
        assert!(is_packing(&set(&[0, 2, 8, 10]), &s));
        assert!(!is_packing(&set(&[0, 4]), &s));
        assert!(!is_packing(&set(&[0, 1]), &s));
        // diff({0,1,3}) = {0,1,2,3}: any gap up to 3 collides.
        assert!(!is_packing(&set(&[0, 3]), &set(&[0, 1, 3])));
        assert!(is_packing(&set(&[0, 4, 8]), &set(&[0, 1, 3])));
    }

    #[test]
    fn singleton_shapes_never_collide() {
        let s = set(&[7]);
        assert!(is_packing(&set(&[0, 1, 2, 3]), &s));
    }

    #[test]
    fn interval_density_counts_half_open() {
        let d = interval_density(0, 8, |x| x.rem_euclid(8) == 0 || x.rem_euclid(8) == 2).unwrap();
        assert_eq!(d, Rational::new(1, 4));
        let full = interval_density(-3, 1, |_| true).unwrap();
        assert_eq!(full, Rational::one());
        assert!(interval_density(5, 5, |_| true).is_err());
        assert!(interval_density(5, 4, |_| true).is_err());
    }

    #[test]
    fn literal_and_display() {
        let s = set(&[0, 1, 4, 6]);
        assert_eq!(s.literal(), "0,1,4,6");
        assert_eq!(s.to_string(), "{0,1,4,6}");
    }
}
