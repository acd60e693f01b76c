//! Subgoal clause enumeration: every tableau of the inference-bounded
//! segment, with its open subgoals collected as a clause.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::tree::{ClauseRef, Tableau};
use super::ExtensionIndex;
use crate::interrupt::Interrupt;
use crate::kernel::{variant_equal, Clause, Literal};
use crate::problem::{Problem, StartMode};

/// A subgoal clause with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgoalRecord {
    /// The open subgoals, variables renumbered from 0.
    pub clause: Clause,
    /// Inferences of the generating tableau, start included.
    pub inferences: usize,
    /// Clause instances attached in the generating tableau, start first.
    pub tableau_clauses: Vec<Clause>,
    pub start: ClauseRef,
}

#[derive(Clone, Debug)]
pub struct EnumerateConfig<'g> {
    /// Inference resource.
    pub k: usize,
    pub mode: StartMode,
    /// Start from these clauses instead of the goal clauses of `mode`.
    pub start_set: Option<&'g [Clause]>,
    /// Stop once this many records are retained.
    pub cap: Option<usize>,
    /// Stop after visiting this many tableaux.
    pub max_nodes: Option<u64>,
    pub regularity: bool,
}

impl Default for EnumerateConfig<'_> {
    fn default() -> Self {
        EnumerateConfig { k: 2, mode: StartMode::CtcNeg, start_set: None, cap: None, max_nodes: None, regularity: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    /// Deduplicated up to variants, in discovery order.
    pub records: Vec<SubgoalRecord>,
    /// Fewest inferences of a closed tableau met on the way.
    pub proof_found: Option<usize>,
    /// The record cap stopped the walk.
    pub capped: bool,
    /// The node budget or an interrupt stopped the walk.
    pub truncated: bool,
    /// Tableaux visited.
    pub nodes: u64,
    /// Reduction steps attempted.
    pub reductions_tried: u64,
}

struct Walk<'a, 'i, I: Interrupt + ?Sized> {
    t: Tableau<'a>,
    index: &'i ExtensionIndex,
    k: usize,
    horn: bool,
    regular: bool,
    cap: Option<usize>,
    max_nodes: Option<u64>,
    interrupt: &'i I,
    inputs_by_skeleton: BTreeMap<Vec<Literal>, Vec<usize>>,
    by_skeleton: BTreeMap<Vec<Literal>, Vec<usize>>,
    /// Normalized clauses already settled: record index, or `None` for
    /// variants of inputs.
    seen: BTreeMap<Clause, Option<usize>>,
    out: Enumeration,
    done: bool,
}

impl<I: Interrupt + ?Sized> Walk<'_, '_, I> {
    /// Selection is the first unfrozen subgoal; every subgoal is either
    /// solved by some step or frozen, so each tableau is visited once.
    fn walk(&mut self, frozen: usize) {
        if self.done {
            return;
        }
        self.out.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.out.nodes > m)
            || (self.out.nodes % 1024 == 0 && self.interrupt.interrupted())
        {
            self.out.truncated = true;
            self.done = true;
            return;
        }
        let open = self.t.open_subgoals();
        if open.is_empty() {
            let i = self.t.inferences();
            self.out.proof_found = Some(self.out.proof_found.map_or(i, |p| p.min(i)));
            self.record();
            return;
        }
        if self.t.inferences() >= self.k || frozen == open.len() {
            self.record();
            return;
        }
        let s = open[frozen];
        if self.regular && !self.t.is_regular_at(s) {
            return;
        }
        let lit = self.t.literal(s);
        let index = self.index;
        for &(ci, li) in index.candidates(&lit) {
            let m = self.t.mark();
            if self.t.extend(s, ci, li) {
                self.walk(frozen);
            }
            self.t.undo(m);
            if self.done {
                return;
            }
        }
        if !self.horn {
            for a in self.t.ancestors(s) {
                if !self.t.literal(a).is_complementary_shape(&lit) {
                    continue;
                }
                let m = self.t.mark();
                self.out.reductions_tried += 1;
                if self.t.reduce(s, a) {
                    self.walk(frozen);
                }
                self.t.undo(m);
                if self.done {
                    return;
                }
            }
        }
        self.walk(frozen + 1);
    }

    fn record(&mut self) {
        let clause = self.t.subgoal_clause().normalized();
        let inferences = self.t.inferences();
        let known = match self.seen.get(&clause) {
            Some(None) => return,
            Some(Some(r)) => Some(*r),
            None => {
                let key = clause.skeleton();
                if let Some(ids) = self.inputs_by_skeleton.get(&key) {
                    if ids.iter().any(|&i| variant_equal(&self.t.inputs()[i], &clause)) {
                        self.seen.insert(clause, None);
                        return;
                    }
                }
                let bucket = self.by_skeleton.entry(key).or_default();
                let found = bucket.iter().copied().find(|&r| variant_equal(&self.out.records[r].clause, &clause));
                if found.is_none() {
                    bucket.push(self.out.records.len());
                }
                self.seen.insert(clause.clone(), Some(found.unwrap_or(self.out.records.len())));
                found
            }
        };
        if let Some(r) = known {
            if inferences < self.out.records[r].inferences {
                self.out.records[r] = SubgoalRecord {
                    clause,
                    inferences,
                    tableau_clauses: self.t.tableau_clauses(),
                    start: self.t.start_clause().expect("recorded tableaux are started"),
                };
            }
            return;
        }
        self.out.records.push(SubgoalRecord {
            clause,
            inferences,
            tableau_clauses: self.t.tableau_clauses(),
            start: self.t.start_clause().expect("recorded tableaux are started"),
        });
        if self.cap.is_some_and(|c| self.out.records.len() >= c) {
            self.out.capped = true;
            self.done = true;
        }
    }
}

/// All subgoal clauses of tableaux with at most `cfg.k` inferences (start
/// included), minus variants of input clauses, deduplicated up to variants
/// keeping the smallest inference count.
pub fn enumerate_subgoal_clauses<I: Interrupt + ?Sized>(
    problem: &Problem,
    cfg: &EnumerateConfig<'_>,
    interrupt: &I,
) -> Enumeration {
    let inputs = problem.clause_list();
    let index = ExtensionIndex::new(&inputs);
    let starts: Vec<(ClauseRef, Clause)> = match cfg.start_set {
        Some(set) => set.iter().enumerate().map(|(i, c)| (ClauseRef::Given(i), c.clone())).collect(),
        None => problem
            .goal_clauses(cfg.mode)
            .indices
            .into_iter()
            .map(|i| (ClauseRef::Input(i), inputs[i].clone()))
            .collect(),
    };
    let horn = problem.is_horn() && starts.iter().all(|(_, c)| c.is_horn());
    let mut inputs_by_skeleton: BTreeMap<Vec<Literal>, Vec<usize>> = BTreeMap::new();
    for (i, c) in inputs.iter().enumerate() {
        inputs_by_skeleton.entry(c.skeleton()).or_default().push(i);
    }
    let mut w = Walk {
        t: Tableau::new(&inputs),
        index: &index,
        k: cfg.k,
        horn,
        regular: cfg.regularity,
        cap: cfg.cap,
        max_nodes: cfg.max_nodes,
        interrupt,
        inputs_by_skeleton,
        by_skeleton: BTreeMap::new(),
        seen: BTreeMap::new(),
        out: Enumeration::default(),
        done: cfg.cap == Some(0) || cfg.k == 0,
    };
    for (r, c) in &starts {
        if w.done {
            break;
        }
        let m = w.t.mark();
        w.t.start(*r, c);
        w.walk(0);
        w.t.undo(m);
    }
    w.out
}
