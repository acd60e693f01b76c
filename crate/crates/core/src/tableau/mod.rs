//! Connection tableau calculus: start, extension and reduction under a
//! completeness bound, iterative-deepening proof search, and enumeration of
//! subgoal clauses.

mod enumerate;
mod search;
mod tree;

pub use enumerate::{enumerate_subgoal_clauses, EnumerateConfig, Enumeration, SubgoalRecord};
pub use search::{prove, within_bound, Bound, Limit, ProofStep, ProveConfig, ProveOutcome, ProveResult, TableauProof};
pub use tree::{ClauseRef, Mark, Step, Tableau};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::kernel::{Clause, Literal, Sym};

/// Input literals grouped by (polarity, predicate, arity), in input order.
pub(crate) struct ExtensionIndex {
    map: BTreeMap<(bool, Sym, usize), Vec<(usize, usize)>>,
}

impl ExtensionIndex {
    pub(crate) fn new(inputs: &[Clause]) -> Self {
        let mut map: BTreeMap<(bool, Sym, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in inputs.iter().enumerate() {
            for (li, l) in c.literals().iter().enumerate() {
                map.entry((l.positive, l.pred.clone(), l.args.len())).or_default().push((ci, li));
            }
        }
        ExtensionIndex { map }
    }

    /// Literals that may connect to subgoal `l`.
    pub(crate) fn candidates(&self, l: &Literal) -> &[(usize, usize)] {
        self.map.get(&(!l.positive, l.pred.clone(), l.args.len())).map_or(&[], Vec::as_slice)
    }
}
