//! Packing densities of finite integer sets, exactly.
//!
//! A finite set `S` of integers *packs* a set `A` when the translates
//! `a + S` for `a` in `A` are pairwise disjoint; the packing density of `S`
//! is the largest fraction of the integers such an `A` can occupy. This
//! crate computes that quantity and everything around it with exact
//! rational arithmetic:
//!
//! - [`set`]: finite integer sets, difference sets, the packing predicate,
//!   and canonical forms under translation and reflection.
//! - [`greedy`]: the canonical greedy packing, its eventual periodicity,
//!   and the density it achieves.
//! - [`bounds`]: closed-form lower and upper bounds on the density.
//! - [`oracle`]: the exact density, as a maximum mean cycle of a window
//!   automaton, with a self-verified periodic witness.
//! - [`survey`]: exhaustive sweeps over canonical small sets, including the
//!   verification that no 4-element set packs more sparsely than 1/7, the
//!   minimum attained by `{0,1,4,6}`.
//!
//! The `setpack` binary in the companion crate exposes all of this on the
//! command line.

pub mod bounds;
pub mod error;
pub mod greedy;
pub mod oracle;
pub mod rational;
pub mod set;
pub mod survey;

pub use error::{Error, Result};
pub use rational::Rational;
pub use set::{is_packing, DiffSet, FiniteIntSet};
