//! Exact packing density via a window automaton and maximum mean cycle.
//!
//! Membership sequences of packings are exactly the runs of a finite
//! automaton whose states are the last `diam(S)` membership bits: appending
//! a 1 is legal when no remembered choice sits at a forbidden distance.
//! The packing density equals the maximum mean weight of a cycle in that
//! automaton, weighting 1-edges 1 and 0-edges 0: any cycle tiles into a
//! periodic packing of that density, and any packing's long windows trace
//! walks whose mean approaches the best cycle. Karp's dynamic program finds
//! the optimum exactly, in integers.
//!
//! Witness extraction reweights each edge by `q * bit - p` where the
//! optimum is `p/q`. Under longest-walk potentials `h` from the start
//! state, an edge is tight when `h[u] + w' = h[v]`; a cycle has maximum
//! mean iff all its edges are tight. The reported witness is the
//! lexicographically smallest pattern among minimum-length tight cycles
//! anchored at the smallest qualifying state, which makes output stable
//! across runs.

use std::collections::HashMap;

use crate::bounds::bounds_report;
use crate::error::{Error, Result};
use crate::greedy::greedy_density;
use crate::rational::Rational;
use crate::set::{is_packing, FiniteIntSet};

/// Largest automaton window width the oracle accepts by default.
pub const DEFAULT_WIDTH_CAP: u32 = 24;

/// Largest period `brute_force_periodic` will ever search.
pub const BRUTE_FORCE_MAX_PERIOD: u32 = 20;

/// Successor id marking an illegal transition.
const NO_STATE: u32 = u32::MAX;

/// Value sentinel for "no walk of this length reaches this state".
const NEG: i64 = i64::MIN / 4;

/// The window automaton of a shape: states are reachable windows of the
/// last `width` membership bits (bit `k` = position `k + 1` steps back),
/// discovered breadth-first from the empty window, which is state 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftAutomaton {
    width: u32,
    states: Vec<u32>,
    succ_zero: Vec<u32>,
    succ_one: Vec<u32>,
}

impl ShiftAutomaton {
    /// Window width, equal to the diameter of the source set.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of reachable states.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// The window bits of a state.
    pub fn window(&self, id: u32) -> u32 {
        self.states[id as usize]
    }

    /// Successor under appending `bit`, if legal. Appending 0 always is.
    pub fn succ(&self, id: u32, bit: bool) -> Option<u32> {
        let s = if bit {
            self.succ_one[id as usize]
        } else {
            self.succ_zero[id as usize]
        };
        (s != NO_STATE).then_some(s)
    }
}

/// Builds the window automaton with the default width cap.
pub fn build_automaton(s: &FiniteIntSet) -> Result<ShiftAutomaton> {
    build_automaton_with_cap(s, DEFAULT_WIDTH_CAP)
}

/// Builds the window automaton, rejecting diameters above `cap`.
pub fn build_automaton_with_cap(s: &FiniteIntSet, cap: u32) -> Result<ShiftAutomaton> {
    let diff = s.diff_set();
    let diam = diff.diameter();
    if diam > u64::from(cap) {
        return Err(Error::WidthCapExceeded { diameter: diam, cap });
    }
    let width = diam as u32;
    let mask: u32 = if width == 0 { 0 } else { (1 << width) - 1 };
    let mut forbidden: u32 = 0;
    for &d in diff.positive() {
        forbidden |= 1 << (d - 1);
    }

    let mut ids: HashMap<u32, u32> = HashMap::new();
    let mut states: Vec<u32> = Vec::new();
    let mut succ_zero: Vec<u32> = Vec::new();
    let mut succ_one: Vec<u32> = Vec::new();

    let mut intern = |w: u32, states: &mut Vec<u32>| -> u32 {
        *ids.entry(w).or_insert_with(|| {
            states.push(w);
            (states.len() - 1) as u32
        })
    };

    intern(0, &mut states);
    let mut head = 0usize;
    while head < states.len() {
        let w = states[head];
        succ_zero.push(intern((w << 1) & mask, &mut states));
        if w & forbidden == 0 {
            succ_one.push(intern(((w << 1) | 1) & mask, &mut states));
        } else {
            succ_one.push(NO_STATE);
        }
        head += 1;
    }

    Ok(ShiftAutomaton { width, states, succ_zero, succ_one })
}

/// Exact density plus a verifiable periodic witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityResult {
    /// The exact packing density.
    pub density: Rational,
    /// States along the witness cycle, starting at its anchor state.
    pub witness_cycle: Vec<u32>,
    /// Length of the witness cycle.
    pub witness_period: u64,
    /// Membership bits along the witness cycle; tiling them periodically
    /// yields a packing of exactly `density`.
    pub witness_pattern: Vec<bool>,
    /// Size of the underlying automaton.
    pub automaton_states: usize,
}

/// Karp's maximum mean cycle over the automaton, with 1-edges weighing 1.
///
/// Runs the length-indexed DP twice: once to obtain the row of walk values
/// at length `n`, once more to stream the earlier rows against it. This
/// keeps memory at O(states) instead of O(states^2).
pub fn max_mean_cycle(g: &ShiftAutomaton) -> DensityResult {
    let n = g.num_states();
    let mut cur = vec![NEG; n];
    let mut next = vec![NEG; n];
    cur[0] = 0;

    for _ in 0..n {
        relax_row(g, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    let d_final = cur.clone();

    // best[v] tracks min over k of (D_n[v] - D_k[v]) / (n - k).
    let mut best: Vec<Option<(i64, i64)>> = vec![None; n];
    cur.fill(NEG);
    cur[0] = 0;
    for k in 0..n {
        for v in 0..n {
            if cur[v] > NEG && d_final[v] > NEG {
                let cand = (d_final[v] - cur[v], (n - k) as i64);
                match best[v] {
                    Some(old) if frac_le(old, cand) => {}
                    _ => best[v] = Some(cand),
                }
            }
        }
        relax_row(g, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }

    let mut mu: Option<(i64, i64)> = None;
    for &b in best.iter().flatten() {
        match mu {
            Some(m) if frac_le(b, m) => {}
            _ => mu = Some(b),
        }
    }
    let (raw_p, raw_q) = mu.expect("automaton has at least the empty-window state");
    assert!(raw_p >= 0, "cycle means of 0/1 weights cannot be negative");
    let g_div = gcd(raw_p, raw_q);
    let (p, q) = (raw_p / g_div, raw_q / g_div);

    let (anchor, period, cycle, pattern) = extract_witness(g, p, q);

    let ones = pattern.iter().filter(|&&b| b).count() as u64;
    let density = Rational::from_signed(p.into(), q.into());
    assert_eq!(
        Rational::new(ones, period),
        density,
        "witness pattern density disagrees with the cycle mean"
    );
    debug_assert_eq!(cycle[0], anchor);

    DensityResult {
        density,
        witness_cycle: cycle,
        witness_period: period,
        witness_pattern: pattern,
        automaton_states: n,
    }
}

/// One step of the length-indexed DP: best walk values at length `k + 1`
/// from values at length `k`.
fn relax_row(g: &ShiftAutomaton, cur: &[i64], next: &mut [i64]) {
    next.fill(NEG);
    for u in 0..cur.len() {
        let du = cur[u];
        if du <= NEG {
            continue;
        }
        let v0 = g.succ_zero[u] as usize;
        if du > next[v0] {
            next[v0] = du;
        }
        let s1 = g.succ_one[u];
        if s1 != NO_STATE {
            let v1 = s1 as usize;
            if du + 1 > next[v1] {
                next[v1] = du + 1;
            }
        }
    }
}

/// `a <= b` for fractions with positive denominators.
fn frac_le(a: (i64, i64), b: (i64, i64)) -> bool {
    i128::from(a.0) * i128::from(b.1) <= i128::from(b.0) * i128::from(a.1)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs().max(1), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Finds the canonical optimal cycle once the optimum `p/q` is known.
///
/// Returns `(anchor_state, length, states, bits)`.
fn extract_witness(g: &ShiftAutomaton, p: i64, q: i64) -> (u32, u64, Vec<u32>, Vec<bool>) {
    let n = g.num_states();
    let w_zero = -p;
    let w_one = q - p;

    // Longest-walk potentials from state 0. All states are reachable, and
    // the reweighted graph has no positive cycle, so this converges.
    let mut h = vec![NEG; n];
    h[0] = 0;
    let mut converged = false;
    for _ in 0..=n {
        let mut changed = false;
        for u in 0..n {
            if h[u] <= NEG {
                continue;
            }
            let v0 = g.succ_zero[u] as usize;
            if h[u] + w_zero > h[v0] {
                h[v0] = h[u] + w_zero;
                changed = true;
            }
            let s1 = g.succ_one[u];
            if s1 != NO_STATE {
                let v1 = s1 as usize;
                if h[u] + w_one > h[v1] {
                    h[v1] = h[u] + w_one;
                    changed = true;
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    assert!(converged, "positive cycle under optimal reweighting");

    // Tight successors: exactly the edges that can lie on an optimal cycle.
    let mut tight_zero = vec![NO_STATE; n];
    let mut tight_one = vec![NO_STATE; n];
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    for u in 0..n {
        if h[u] <= NEG {
            continue;
        }
        let v0 = g.succ_zero[u] as usize;
        if h[u] + w_zero == h[v0] {
            tight_zero[u] = v0 as u32;
            rev[v0].push(u as u32);
        }
        let s1 = g.succ_one[u];
        if s1 != NO_STATE {
            let v1 = s1 as usize;
            if h[u] + w_one == h[v1] {
                tight_one[u] = v1 as u32;
                rev[v1].push(u as u32);
            }
        }
    }

    // Shortest tight cycle; ties in length resolve to the smallest anchor
    // state id because the scan is ascending.
    let mut best_len = usize::MAX;
    let mut anchor = NO_STATE;
    let mut dist = vec![usize::MAX; n];
    let mut queue = Vec::new();
    for v in 0..n {
        if tight_zero[v] == NO_STATE && tight_one[v] == NO_STATE {
            continue;
        }
        // Distances to `v` along tight edges, via reverse BFS, cut off at
        // the current best.
        dist.fill(usize::MAX);
        queue.clear();
        dist[v] = 0;
        queue.push(v as u32);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head] as usize;
            head += 1;
            if dist[x] + 1 >= best_len {
                continue;
            }
            for &u in &rev[x] {
                if dist[u as usize] == usize::MAX {
                    dist[u as usize] = dist[x] + 1;
                    queue.push(u);
                }
            }
        }
        for succ in [tight_zero[v], tight_one[v]] {
            if succ != NO_STATE && dist[succ as usize] != usize::MAX {
                let len = dist[succ as usize] + 1;
                if len < best_len {
                    best_len = len;
                    anchor = v as u32;
                }
            }
        }
    }
    assert!(anchor != NO_STATE, "no tight cycle despite a finite optimum");
    let len = best_len;

    // can[r] = states from which the anchor is reachable in exactly r
    // tight steps, bit-packed.
    let words = n.div_ceil(64);
    let mut can: Vec<Vec<u64>> = vec![vec![0u64; words]; len + 1];
    can[0][anchor as usize / 64] |= 1 << (anchor % 64);
    for r in 1..=len {
        for u in 0..n {
            let reaches = [tight_zero[u], tight_one[u]].into_iter().any(|s| {
                s != NO_STATE && can[r - 1][s as usize / 64] >> (s % 64) & 1 == 1
            });
            if reaches {
                can[r][u / 64] |= 1 << (u % 64);
            }
        }
    }

    // Walk the lexicographically smallest closed tight walk of this length:
    // prefer 0 whenever the remaining steps can still return to the anchor.
    let mut states = Vec::with_capacity(len);
    let mut bits = Vec::with_capacity(len);
    let mut cur = anchor;
    for step in 0..len {
        states.push(cur);
        let rem = len - step - 1;
        let mut took = None;
        for (bit, succ) in [(false, tight_zero[cur as usize]), (true, tight_one[cur as usize])] {
            if succ != NO_STATE && can[rem][succ as usize / 64] >> (succ % 64) & 1 == 1 {
                took = Some((bit, succ));
                break;
            }
        }
        let (bit, succ) = took.expect("tight walk cannot dead-end");
        bits.push(bit);
        cur = succ;
    }
    assert_eq!(cur, anchor, "witness walk failed to close");

    (anchor, len as u64, states, bits)
}

/// Exact packing density with a self-verified witness.
///
/// Fails when `diam(S)` exceeds the width cap. The returned witness is
/// re-checked against the direct packing predicate, and the density against
/// the closed-form bounds and the greedy value.
pub fn exact_packing_density(s: &FiniteIntSet) -> Result<DensityResult> {
    let s = s.normalize();
    let g = build_automaton(&s)?;
    let result = max_mean_cycle(&g);

    let report = bounds_report(&s);
    assert!(
        report.lower <= result.density && result.density <= report.upper,
        "exact density {} escapes closed-form bounds [{}, {}] for {s}",
        result.density,
        report.lower,
        report.upper
    );
    let greedy = greedy_density(&s)?;
    assert!(
        greedy <= result.density,
        "exact density {} below greedy density {} for {s}",
        result.density,
        greedy
    );
    let tiled = tile_pattern(&result.witness_pattern, s.diameter());
    assert!(
        is_packing(&tiled, &s),
        "oracle witness fails the direct packing check for {s}"
    );

    Ok(result)
}

/// Tiles a period pattern far enough that every in-range difference between
/// copies is realized: `t * p >= p + diam`.
fn tile_pattern(pattern: &[bool], diam: u64) -> FiniteIntSet {
    let p = pattern.len() as u64;
    let tiles = 3.max(1 + diam.div_ceil(p));
    let mut elems = Vec::new();
    for t in 0..tiles {
        for (j, &bit) in pattern.iter().enumerate() {
            if bit {
                elems.push((t * p) as i64 + j as i64);
            }
        }
    }
    FiniteIntSet::new(elems).expect("witness pattern has at least one element")
}

/// Best density over all periodic packings with period at most
/// `max_period`, checked by explicit tiling against the packing predicate.
///
/// Deliberately simple-minded: this is the independent cross-check for the
/// automaton oracle, so it shares no reasoning with it.
pub fn brute_force_periodic(s: &FiniteIntSet, max_period: u32) -> Result<Rational> {
    if max_period == 0 || max_period > BRUTE_FORCE_MAX_PERIOD {
        return Err(Error::MaxPeriodOutOfRange {
            requested: max_period,
            max: BRUTE_FORCE_MAX_PERIOD,
        });
    }
    let s = s.normalize();
    let diam = s.diameter();
    let mut best = Rational::zero();
    for p in 1..=u64::from(max_period) {
        let tiles = 3.max(1 + diam.div_ceil(p));
        for pattern_bits in 1u64..(1 << p) {
            let ones = u64::from(pattern_bits.count_ones());
            // Only strictly denser patterns matter.
            if ones * best.denom() <= best.numer() * p {
                continue;
            }
            let mut elems = Vec::with_capacity((ones * tiles) as usize);
            for t in 0..tiles {
                for j in 0..p {
                    if pattern_bits >> j & 1 == 1 {
                        elems.push((t * p + j) as i64);
                    }
                }
            }
            let candidate = FiniteIntSet::new(elems).expect("nonzero pattern");
            if is_packing(&candidate, &s) {
                best = Rational::new(ones, p);
            }
        }
    }
    Ok(best)
}
