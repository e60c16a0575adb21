//! Greedy packing and its eventual periodicity.
//!
//! Scanning positions 0, 1, 2, ... and keeping every position that stays
//! disjoint from all earlier choices builds a canonical infinite packing.
//! Whether a position is legal depends only on the previous `diam(S)`
//! membership bits, so the run is a deterministic walk on finitely many
//! window states and must eventually revisit one. The first revisit `(a, b)`
//! makes the membership sequence periodic with period `b - a` from `a` on,
//! and that period is already minimal: a shorter eventual period would force
//! an earlier window repeat inside the cycle.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::{interval_density, DiffSet, FiniteIntSet};

/// Positions explored before periodicity detection gives up, unless the
/// caller overrides it. Covers every window width up to 24 in the worst
/// case.
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 24;

/// The last `diam(S)` membership bits, most recent first: bit `k` records
/// whether position `pos - 1 - k` was chosen.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Window {
    words: Vec<u64>,
    width: u64,
}

impl Window {
    fn zero(width: u64) -> Self {
        let words = vec![0u64; width.div_ceil(64) as usize];
        Window { words, width }
    }

    /// Shifts history back one position and records the newest bit.
    fn push(&mut self, chosen: bool) {
        if self.width == 0 {
            return;
        }
        let mut carry = chosen as u64;
        for w in &mut self.words {
            let next_carry = *w >> 63;
            *w = (*w << 1) | carry;
            carry = next_carry;
        }
        let top_bits = self.width % 64;
        if top_bits != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << top_bits) - 1;
        }
    }

    /// Whether any remembered choice sits at a forbidden distance.
    fn hits(&self, mask: &[u64]) -> bool {
        self.words.iter().zip(mask).any(|(w, m)| w & m != 0)
    }

    fn key(&self) -> Box<[u64]> {
        self.words.clone().into_boxed_slice()
    }
}

/// Bit `d - 1` set for every positive difference `d` of the shape: choosing
/// a position is legal exactly when the window misses this mask.
fn forbidden_mask(diff: &DiffSet) -> Vec<u64> {
    let width = diff.diameter();
    let mut mask = vec![0u64; width.div_ceil(64) as usize];
    for &d in diff.positive() {
        let bit = (d - 1) as u64;
        mask[(bit / 64) as usize] |= 1 << (bit % 64);
    }
    mask
}

/// The deterministic greedy walk: current position plus the window of
/// recent choices.
struct Orbit {
    window: Window,
    mask: Vec<u64>,
    pos: u64,
}

impl Orbit {
    fn new(diff: &DiffSet) -> Self {
        Orbit {
            window: Window::zero(diff.diameter()),
            mask: forbidden_mask(diff),
            pos: 0,
        }
    }

    /// Decides the current position, advances, and reports the decision.
    fn step(&mut self) -> bool {
        let chosen = !self.window.hits(&self.mask);
        self.window.push(chosen);
        self.pos += 1;
        chosen
    }
}

/// The outcome of a bounded greedy run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    /// Positions chosen, in order; always starts with 0.
    pub chosen: Vec<u64>,
    /// One bit per scanned position; `membership[x]` iff `x` was chosen.
    pub membership: Vec<bool>,
    /// First window recurrence `(a, b)` with `a < b <= horizon`, if one
    /// occurred inside the horizon. Membership is then periodic with period
    /// `b - a` from position `a` on.
    pub recurrence: Option<(u64, u64)>,
}

impl GreedyTrace {
    /// Number of positions scanned.
    pub fn horizon(&self) -> u64 {
        self.membership.len() as u64
    }
}

/// Runs the greedy packing over positions `0..horizon`.
pub fn run_greedy(s: &FiniteIntSet, horizon: u64) -> Result<GreedyTrace> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let diff = s.diff_set();
    let mut orbit = Orbit::new(&diff);
    let mut seen: HashMap<Box<[u64]>, u64> = HashMap::new();
    let mut chosen = Vec::new();
    let mut membership = Vec::with_capacity(horizon as usize);
    let mut recurrence = None;

    for pos in 0..=horizon {
        if recurrence.is_none() {
            if let Some(&first) = seen.get(&orbit.window.key()) {
                recurrence = Some((first, pos));
            } else {
                seen.insert(orbit.window.key(), pos);
            }
        }
        if pos == horizon {
            break;
        }
        if orbit.step() {
            chosen.push(pos);
            membership.push(true);
        } else {
            membership.push(false);
        }
    }

    Ok(GreedyTrace { chosen, membership, recurrence })
}

/// Finds the first window recurrence with the default state budget.
///
/// Returns `(anchor, period)`: membership is periodic with that period from
/// the anchor on.
pub fn detect_period(s: &FiniteIntSet) -> Result<(u64, u64)> {
    detect_period_with_budget(s, DEFAULT_STATE_BUDGET)
}

/// As `detect_period`, exploring at most `budget` positions.
pub fn detect_period_with_budget(s: &FiniteIntSet, budget: u64) -> Result<(u64, u64)> {
    let (a, b, _) = orbit_until_recurrence(&s.diff_set(), budget)?;
    Ok((a, b - a))
}

/// Walks the orbit until the first window repeat, returning `(a, b,
/// membership[..b])`.
fn orbit_until_recurrence(diff: &DiffSet, budget: u64) -> Result<(u64, u64, Vec<bool>)> {
    let mut orbit = Orbit::new(diff);
    let mut seen: HashMap<Box<[u64]>, u64> = HashMap::new();
    let mut membership = Vec::new();
    loop {
        let pos = orbit.pos;
        if let Some(&first) = seen.get(&orbit.window.key()) {
            return Ok((first, pos, membership));
        }
        if pos > budget {
            return Err(Error::StateBudgetExhausted { explored: pos });
        }
        seen.insert(orbit.window.key(), pos);
        membership.push(orbit.step());
    }
}

/// An eventually periodic packing: from `anchor` on, membership repeats the
/// `pattern` every `period` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSet {
    anchor: u64,
    period: u64,
    pattern: Vec<bool>,
    density: Rational,
}

impl PeriodicSet {
    /// Position from which the pattern repeats.
    pub fn anchor(&self) -> u64 {
        self.anchor
    }

    /// Length of the repeating pattern.
    pub fn period(&self) -> u64 {
        self.period
    }

    /// Membership bits of `[anchor, anchor + period)`.
    pub fn pattern(&self) -> &[bool] {
        &self.pattern
    }

    /// Fraction of chosen positions per period.
    pub fn density(&self) -> Rational {
        self.density
    }

    /// Pattern as a bit string, e.g. `"10100000"`.
    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Runs greedy to its first recurrence and packages the periodic tail.
pub fn periodic_packing(s: &FiniteIntSet) -> Result<PeriodicSet> {
    periodic_packing_with_budget(s, DEFAULT_STATE_BUDGET)
}

/// As `periodic_packing`, exploring at most `budget` positions.
pub fn periodic_packing_with_budget(s: &FiniteIntSet, budget: u64) -> Result<PeriodicSet> {
    let diff = s.diff_set();
    let (a, b, membership) = orbit_until_recurrence(&diff, budget)?;
    let raw: Vec<bool> = membership[a as usize..b as usize].to_vec();

    // The first recurrence gap is provably minimal, so this scan is an
    // invariant check that always keeps the full gap.
    let period = smallest_reproducing_divisor(&raw);
    debug_assert_eq!(period, raw.len(), "first recurrence gap must be minimal");
    let pattern: Vec<bool> = raw[..period].to_vec();

    let anchor = a as i64;
    let density = interval_density(anchor, anchor + period as i64, |x| {
        pattern[((x - anchor) as u64 % period as u64) as usize]
    })?;

    Ok(PeriodicSet { anchor: a, period: period as u64, pattern, density })
}

/// Smallest divisor `q` of `pattern.len()` such that the pattern is a
/// repetition of its first `q` bits.
fn smallest_reproducing_divisor(pattern: &[bool]) -> usize {
    let p = pattern.len();
    for q in 1..p {
        if p % q == 0 && pattern.iter().enumerate().all(|(i, &bit)| bit == pattern[i % q]) {
            return q;
        }
    }
    p
}

/// Density of the greedy packing for shape `s`: the density of its periodic
/// tail.
pub fn greedy_density(s: &FiniteIntSet) -> Result<Rational> {
    let periodic = periodic_packing(s)?;
    debug_assert!(
        periodic.density() >= Rational::new(1, s.diff_set().len() as u64),
        "greedy density below its guaranteed floor"
    );
    Ok(periodic.density())
}
