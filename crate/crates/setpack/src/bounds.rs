//! Closed-form density bounds.
//!
//! Lower: the greedy argument guarantees density at least `1/|diff(S)|`,
//! since each chosen position forbids at most `|diff(S)|` later ones.
//!
//! Upper, two ways. If `diff(S)` contains every value `1..=n`, a packing
//! set never places two elements within distance `n`, so its density is at
//! most `1/(n+1)`. Independently, translates of `S` are disjoint, so a
//! packing of density `d` uses up `d * |S|` of the integers, giving
//! `d <= 1/|S|`. The report keeps whichever is smaller and says which one
//! was active.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::{DiffSet, FiniteIntSet};

/// Which closed-form upper bound is the binding one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBoundSource {
    /// `1/(n+1)` from the initial run of the difference set. Ties resolve
    /// here: when both bounds agree the run argument already explains the
    /// value.
    Basis,
    /// `1/|S|` from disjointness of translates.
    Disjointness,
}

impl UpperBoundSource {
    /// Stable lowercase name used in structured output.
    pub fn as_str(&self) -> &'static str {
        match self {
            UpperBoundSource::Basis => "basis",
            UpperBoundSource::Disjointness => "disjointness",
        }
    }
}

impl std::fmt::Display for UpperBoundSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both bounds plus the data behind the upper one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub lower: Rational,
    pub upper: Rational,
    /// Largest `n` with `{1, ..., n}` contained in `diff(S)`.
    pub initial_run_n: u64,
    pub active_upper: UpperBoundSource,
}

/// Largest `n >= 0` such that every value `1..=n` is a difference.
pub fn longest_initial_run(diff: &DiffSet) -> u64 {
    let mut n = 0u64;
    for &d in diff.positive() {
        if d as u64 == n + 1 {
            n += 1;
        } else {
            break;
        }
    }
    n
}

/// `1/|diff(S)|`, the guaranteed density of the greedy packing.
pub fn lower_bound(s: &FiniteIntSet) -> Rational {
    Rational::new(1, s.diff_set().len() as u64)
}

/// `min(1/(n+1), 1/|S|)` with `n` the longest initial run of `diff(S)`.
pub fn upper_bound(s: &FiniteIntSet) -> Rational {
    bounds_report(s).upper
}

/// Computes lower and upper bounds together.
pub fn bounds_report(s: &FiniteIntSet) -> BoundsReport {
    let diff = s.diff_set();
    let n = longest_initial_run(&diff);
    let basis = Rational::new(1, n + 1);
    let disjointness = Rational::new(1, s.len() as u64);
    let (upper, active_upper) = if basis <= disjointness {
        (basis, UpperBoundSource::Basis)
    } else {
        (disjointness, UpperBoundSource::Disjointness)
    };
    BoundsReport {
        lower: Rational::new(1, diff.len() as u64),
        upper,
        initial_run_n: n,
        active_upper,
    }
}

/// The closed-form upper bound `12 / (3k^2 + 22k - 168)` on the minimum
/// packing density over all sets of cardinality `k`, valid for `k >= 5`.
///
/// This is informational: it bounds the minimum over all `k`-sets, not the
/// density of any particular set.
pub fn weinstein_bound(k: u64) -> Result<Rational> {
    if k < 5 {
        return Err(Error::WeinsteinRange { k });
    }
    let k = i128::from(k);
    let denom = 3 * k * k + 22 * k - 168;
    Ok(Rational::from_signed(12, denom))
}
