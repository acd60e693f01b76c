//! Connection-tableau and given-clause saturation engines for first-order
//! clause logic, plus the scoring functions that let the two exchange
//! subgoal clauses and unit lemmas.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, threads and
//! the command line live in the `tandem` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod entail;
pub mod interrupt;
pub mod kernel;
pub mod lemma;
pub mod problem;
pub mod saturation;
pub mod subgoal;
pub mod tableau;

#[cfg(test)]
mod testutil;
