//! Given-clause saturation: resolution or superposition with tautology
//! deletion, subsumption and (under a precedence) rewriting.
//!
//! Every clause keeps a [`DerivationRecord`] with the counts of expansion
//! and contraction inferences it took part in; the lemma filters read them.

mod heuristic;
mod oracle;
mod order;
mod prover;
mod rules;

pub use heuristic::{symbol_weight, Heuristic, LiteralSum, Origin, RecentFirst, SymbolCount};
pub use oracle::{min_proof_length, BudgetExceeded};
pub use order::{OrderingMode, TermOrder};
pub use prover::{
    saturate, verify_derivation, Activation, ClauseId, Deletion, Derivation, DerivationRecord, DerivationStep, Prover,
    SatConfig, SatLimit, SatOutcome, SatResult, Status, StoredClause,
};
pub use rules::{binary, equality_factor, equality_resolve, factor, resolve, superpose, unary, Calculus, Rule};
