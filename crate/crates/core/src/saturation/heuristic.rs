//! Clause selection heuristics.

use crate::kernel::{clause_measures, Clause, Literal};

use super::rules::Rule;

/// What the prover knows about a clause when it is weighed.
#[derive(Clone, Copy, Debug)]
pub struct Origin<'a> {
    pub rule: Rule,
    /// Activation index (0-based) of each premise.
    pub premise_activations: &'a [usize],
    /// Activations performed so far, the current one included.
    pub activations: usize,
}

/// Assigns the weight ω_C; the passive clause of least weight is activated
/// next, ties going to the older clause.
pub trait Heuristic {
    fn weight(&self, c: &Clause, origin: &Origin<'_>) -> u64;

    /// Every n-th activation takes the oldest passive clause instead.
    fn fifo_period(&self) -> Option<usize> {
        None
    }
}

impl<H: Heuristic + ?Sized> Heuristic for &H {
    fn weight(&self, c: &Clause, origin: &Origin<'_>) -> u64 {
        (**self).weight(c, origin)
    }

    fn fifo_period(&self) -> Option<usize> {
        (**self).fifo_period()
    }
}

/// Number of symbols, variables and predicates included.
pub fn symbol_weight(c: &Clause) -> u64 {
    clause_measures(c).symbol_count as u64
}

/// Smallest clause first, with a breadth-first pick every `fifo_period`
/// activations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolCount {
    pub fifo_period: usize,
}

impl Default for SymbolCount {
    fn default() -> Self {
        SymbolCount { fifo_period: 5 }
    }
}

impl Heuristic for SymbolCount {
    fn weight(&self, c: &Clause, _: &Origin<'_>) -> u64 {
        symbol_weight(c)
    }

    fn fifo_period(&self) -> Option<usize> {
        Some(self.fifo_period.max(1))
    }
}

/// First in, first out, except that during the first `until` activations a
/// conclusion of the two most recently activated clauses jumps the queue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecentFirst {
    pub until: usize,
}

impl Heuristic for RecentFirst {
    fn weight(&self, _: &Clause, o: &Origin<'_>) -> u64 {
        let n = o.activations;
        let recent = n >= 2
            && n <= self.until
            && o.premise_activations.contains(&(n - 1))
            && o.premise_activations.contains(&(n - 2));
        u64::from(!recent)
    }
}

/// Sum of a per-literal weight, each literal taken positively.
pub struct LiteralSum<F>(pub F);

impl<F: Fn(&Literal) -> u64> Heuristic for LiteralSum<F> {
    fn weight(&self, c: &Clause, _: &Origin<'_>) -> u64 {
        c.literals().iter().map(|l| (self.0)(&if l.positive { l.clone() } else { l.complement() })).sum()
    }
}
