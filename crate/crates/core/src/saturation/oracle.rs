//! Exact minimal refutation length by exhaustive search, for tiny problems.
//!
//! A refutation is a sequence of inferences, each adding one clause. Every
//! refutation can be reordered so that the inference keys (premise
//! positions, rule, conclusion index) strictly increase, because swapping
//! two adjacent independent steps whose keys are out of order makes the key
//! sequence lexicographically smaller. The search therefore only extends a
//! sequence with inferences whose key exceeds the last one. Conclusions
//! that repeat a clause up to variants are skipped, and so are sequences
//! that leave more unused conclusions than the remaining steps can consume;
//! neither occurs in a shortest refutation.
//!
//! Ground inputs without equality allow two more cuts. A conclusion that is a tautology or is
//! subsumed by a clause already present can be replaced by that clause
//! without lengthening the proof. And no inference shrinks a ground clause
//! by more than one literal, so a conclusion with n literals needs at least
//! n further steps. With two or three steps left the clauses the remaining
//! steps must use are checked directly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::order::{OrderingMode, TermOrder};
use super::rules::{self, Calculus};
use crate::kernel::{is_tautology, subsumes, variant_equal, Clause, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("search budget of {0} nodes exceeded")]
pub struct BudgetExceeded(pub u64);

/// (max premise, other premise, rule, conclusion index).
type Key = (usize, usize, u8, usize);

struct Inference {
    key: Key,
    premises: [usize; 2],
    conclusion: Clause,
}

struct Search {
    calculus: Calculus,
    order: TermOrder,
    ground: bool,
    clauses: Vec<Clause>,
    by_skeleton: BTreeMap<Vec<Literal>, Vec<usize>>,
    /// Conclusions not yet used as a premise.
    dangling: Vec<bool>,
    inferences: Vec<Inference>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn push_clause(&mut self, c: Clause) {
        let pos = self.clauses.len();
        self.by_skeleton.entry(c.skeleton()).or_default().push(pos);
        self.clauses.push(c);
        self.dangling.push(false);
        let mut found = Vec::new();
        for i in 0..=pos {
            let (a, b) = (&self.clauses[pos], &self.clauses[i]);
            for (n, (rule, x)) in rules::binary(self.calculus, &self.order, a, b).into_iter().enumerate() {
                found.push(Inference { key: (pos, i, rule as u8, n), premises: [pos, i], conclusion: x });
            }
        }
        for (n, (rule, x)) in rules::unary(self.calculus, &self.order, &self.clauses[pos]).into_iter().enumerate() {
            found.push(Inference { key: (pos, pos, 100 + rule as u8, n), premises: [pos, pos], conclusion: x });
        }
        found.sort_by_key(|f| f.key);
        self.inferences.extend(found);
    }

    fn pop_clause(&mut self) {
        let c = self.clauses.pop().expect("clause to pop");
        let pos = self.clauses.len();
        let bucket = self.by_skeleton.get_mut(&c.skeleton()).expect("bucket");
        bucket.retain(|&p| p != pos);
        if bucket.is_empty() {
            self.by_skeleton.remove(&c.skeleton());
        }
        self.dangling.pop();
        while self.inferences.last().is_some_and(|f| f.key.0 == pos) {
            self.inferences.pop();
        }
    }

    fn redundant(&self, c: &Clause, left: usize) -> bool {
        if self.ground {
            if c.len() >= left {
                return true;
            }
            // the last step would have to resolve c with a unit already present
            if left == 2 && !self.known(&Clause::unit(c.literals()[0].complement())) {
                return true;
            }
            // {x, y} must next meet {¬x} or {¬x, y}, leaving {y} for {¬y}
            if left == 3 && c.len() == 2 {
                let l = c.literals();
                let unit = |x: &Literal| self.known(&Clause::unit(x.complement()));
                let via = |x: &Literal, y: &Literal| {
                    unit(y) && (unit(x) || self.known(&Clause::new(alloc::vec![x.complement(), y.clone()])))
                };
                if !via(&l[0], &l[1]) && !via(&l[1], &l[0]) {
                    return true;
                }
            }
            is_tautology(c) || self.clauses.iter().any(|d| subsumes(d, c))
        } else {
            self.known(c)
        }
    }

    fn known(&self, c: &Clause) -> bool {
        self.by_skeleton.get(&c.skeleton()).is_some_and(|ps| ps.iter().any(|&p| variant_equal(&self.clauses[p], c)))
    }

    /// A refutation in at most `left` more steps after the inference at
    /// index `from - 1`.
    fn dfs(&mut self, from: usize, left: usize, open: usize) -> Result<bool, BudgetExceeded> {
        if left == 0 {
            return Ok(false);
        }
        let mut i = from;
        while i < self.inferences.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetExceeded(self.budget));
            }
            let (premises, empty) = {
                let f = &self.inferences[i];
                (f.premises, f.conclusion.is_empty())
            };
            if empty {
                return Ok(true);
            }
            let mut used = Vec::new();
            for p in premises {
                if self.dangling[p] && !used.contains(&p) {
                    used.push(p);
                }
            }
            let open_after = open - used.len() + 1;
            // each later step consumes at most one more conclusion than it adds
            if open_after > left || left == 1 || self.redundant(&self.inferences[i].conclusion, left) {
                i += 1;
                continue;
            }
            let c = self.inferences[i].conclusion.clone();
            for &p in &used {
                self.dangling[p] = false;
            }
            self.push_clause(c);
            let pos = self.clauses.len() - 1;
            self.dangling[pos] = true;
            let found = self.dfs(i + 1, left - 1, open_after);
            self.pop_clause();
            for &p in &used {
                self.dangling[p] = true;
            }
            if found? {
                return Ok(true);
            }
            i += 1;
        }
        Ok(false)
    }
}

/// The least number of inferences deriving the empty clause from `clauses`
/// under `calculus`, or `None` if there is no refutation of length at most
/// `max_len`. `budget` caps the number of search nodes.
pub fn min_proof_length(
    clauses: &[Clause],
    calculus: Calculus,
    ordering: &OrderingMode,
    max_len: usize,
    budget: u64,
) -> Result<Option<usize>, BudgetExceeded> {
    search(clauses, calculus, ordering, max_len, budget, true)
}

pub(crate) fn search(
    clauses: &[Clause],
    calculus: Calculus,
    ordering: &OrderingMode,
    max_len: usize,
    budget: u64,
    ground_cuts: bool,
) -> Result<Option<usize>, BudgetExceeded> {
    if clauses.iter().any(Clause::is_empty) {
        return Ok(Some(0));
    }
    let mut s = Search {
        calculus,
        order: TermOrder::new(ordering),
        ground: ground_cuts && clauses.iter().all(|c| c.is_ground() && !c.literals().iter().any(Literal::is_equality)),
        clauses: Vec::new(),
        by_skeleton: BTreeMap::new(),
        dangling: Vec::new(),
        inferences: Vec::new(),
        nodes: 0,
        budget,
    };
    for c in clauses {
        let c = c.normalized();
        if !s.known(&c) {
            s.push_clause(c);
        }
    }
    for len in 1..=max_len {
        if s.dfs(0, len, 0)? {
            return Ok(Some(len));
        }
    }
    Ok(None)
}
