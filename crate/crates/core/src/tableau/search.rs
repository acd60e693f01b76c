//! Iterative-deepening proof search.

use alloc::vec::Vec;

use super::tree::{ClauseRef, Mark, Step, Tableau};
use super::ExtensionIndex;
use crate::interrupt::Interrupt;
use crate::kernel::{Clause, Term, Var};
use crate::problem::{Problem, StartMode};

/// Completeness bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    /// Inner nodes at depth ≤ n, the root at depth 0.
    Depth,
    /// At most n inferences, the start step included.
    Inference,
    /// Depth ≤ ⌈depth_factor·n⌉ and inferences ≤ ⌈inference_factor·n⌉.
    Weighted { depth_factor: f64, inference_factor: f64 },
}

impl Bound {
    /// (depth cap, inference cap) for resource `n`.
    pub fn caps(self, n: usize) -> (Option<usize>, Option<usize>) {
        match self {
            Bound::Depth => (Some(n), None),
            Bound::Inference => (None, Some(n)),
            Bound::Weighted { depth_factor, inference_factor } => {
                (Some(ceil(depth_factor * n as f64)), Some(ceil(inference_factor * n as f64)))
            }
        }
    }
}

fn ceil(x: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let t = x as usize;
    if (t as f64) < x {
        t + 1
    } else {
        t
    }
}

/// Whether `t` lies in the search-tree segment of `bound` at resource `n`.
pub fn within_bound(t: &Tableau<'_>, bound: Bound, n: usize) -> bool {
    let (dcap, icap) = bound.caps(n);
    dcap.is_none_or(|d| t.max_inner_depth() <= d) && icap.is_none_or(|i| t.inferences() <= i)
}

/// A step together with the bindings its unification made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub step: Step,
    pub bindings: Vec<(Var, Term)>,
}

/// A closed tableau as a replayable inference list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauProof {
    pub steps: Vec<ProofStep>,
    /// Resource of the round that found the proof.
    pub resource: usize,
}

impl TableauProof {
    pub fn inferences(&self) -> usize {
        self.steps.len()
    }

    /// Rebuild the tableau from the trivial one; `Err` names the first step
    /// that fails or reports that the result is not closed.
    pub fn replay<'a>(&self, inputs: &'a [Clause]) -> Result<Tableau<'a>, alloc::string::String> {
        let mut t = Tableau::new(inputs);
        for (i, s) in self.steps.iter().enumerate() {
            if !t.apply(&s.step, &[]) {
                return Err(alloc::format!("step {i} ({:?}) does not apply", s.step));
            }
        }
        if !t.is_closed() {
            return Err(alloc::format!("{} subgoals remain open", t.open_subgoals().len()));
        }
        t.check_invariants(&[])?;
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProveConfig {
    pub mode: StartMode,
    pub bound: Bound,
    pub initial: usize,
    pub step: usize,
    pub max_resource: usize,
    /// Cap on inferences performed over all rounds.
    pub max_work: Option<u64>,
    pub regularity: bool,
    /// Under the depth bound, never retry a subgoal that was closed without
    /// binding a variable from outside its subtree.
    pub solution_cut: bool,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig {
            mode: StartMode::CtcNeg,
            bound: Bound::Inference,
            initial: 1,
            step: 1,
            max_resource: 64,
            max_work: None,
            regularity: true,
            solution_cut: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Resource,
    Work,
    Interrupted,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProveResult {
    Closed(TableauProof),
    /// A round finished without touching the bound: no proof exists.
    Exhausted { resource: usize },
    /// `resource` is the last round searched completely.
    LimitReached { resource: Option<usize>, limit: Limit },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProveOutcome {
    pub result: ProveResult,
    /// Inferences performed over all rounds.
    pub work: u64,
    /// Set when CtcNeg found no negative clause to start from.
    pub no_start_clause: bool,
}

struct Search<'a, 'i, I: Interrupt + ?Sized> {
    t: Tableau<'a>,
    index: &'i ExtensionIndex,
    dcap: Option<usize>,
    icap: Option<usize>,
    horn: bool,
    regular: bool,
    steps: Vec<ProofStep>,
    work: u64,
    max_work: Option<u64>,
    interrupt: &'i I,
    bound_hit: bool,
    stop: Option<Limit>,
    /// Skip alternative solutions of subgoals closed without binding older
    /// variables. Complete when only the depth is bounded.
    cut: bool,
    frames: Vec<Frame>,
}

/// A subgoal being solved: its node, the state before its first step and
/// the level at which its subtree was seen closed.
struct Frame {
    node: usize,
    entry: Mark,
    closed: Option<usize>,
    clean: bool,
}

impl<I: Interrupt + ?Sized> Search<'_, '_, I> {
    /// Inference count and open-subgoal count after a step must leave room
    /// for one inference per remaining subgoal.
    fn fits(&mut self, new_inner_depth: Option<usize>, inferences: usize, open: usize) -> bool {
        let ok = match (self.dcap, new_inner_depth) {
            (Some(cap), Some(d)) => d <= cap,
            _ => true,
        } && self.icap.is_none_or(|cap| inferences + open <= cap);
        if !ok {
            self.bound_hit = true;
        }
        ok
    }

    fn tick(&mut self) {
        self.work += 1;
        if self.max_work.is_some_and(|m| self.work >= m) {
            self.stop = Some(Limit::Work);
        } else if self.work % 256 == 0 && self.interrupt.interrupted() {
            self.stop = Some(Limit::Interrupted);
        }
    }

    /// Flag the frames whose subtrees no longer hold the first subgoal.
    fn note_closed(&mut self, first: usize) {
        let level = self.frames.len();
        for i in (0..self.frames.len()).rev() {
            let f = &self.frames[i];
            if f.closed.is_some() {
                continue;
            }
            if self.t.is_below(first, f.node) {
                break;
            }
            let floor = f.entry.var_floor();
            let clean = self.t.bindings_since(&f.entry).iter().all(|(v, _)| *v >= floor);
            let f = &mut self.frames[i];
            f.closed = Some(level);
            f.clean = clean;
        }
    }

    /// After a failed continuation: whether this subgoal's alternatives can
    /// be skipped. Otherwise forget closures seen deeper down.
    fn cut_here(&mut self, level: usize) -> bool {
        if !self.cut {
            return false;
        }
        if self.frames[level].closed.is_some() && self.frames[level].clean {
            return true;
        }
        for f in &mut self.frames {
            if f.closed.is_some_and(|l| l > level) {
                f.closed = None;
            }
        }
        false
    }

    fn solve(&mut self) -> bool {
        let Some(&s) = self.t.open_subgoals().first() else {
            return true;
        };
        if self.stop.is_some() {
            return false;
        }
        if !self.cut {
            return self.solve_at(s);
        }
        self.note_closed(s);
        let level = self.frames.len();
        self.frames.push(Frame { node: s, entry: self.t.mark(), closed: None, clean: false });
        let solved = self.solve_at(s);
        self.frames.truncate(level);
        solved
    }

    fn solve_at(&mut self, s: usize) -> bool {
        let level = self.frames.len().wrapping_sub(1);
        if self.regular && !self.t.is_regular_at(s) {
            return false;
        }
        let lit = self.t.literal(s);
        let depth = self.t.depth_of(s);
        let inferences = self.t.inferences();
        let open_rest = self.t.open_subgoals().len() - 1;
        let index = self.index;
        for &(ci, li) in index.candidates(&lit) {
            let width = self.t.inputs()[ci].len() - 1;
            if !self.fits(Some(depth), inferences + 1, open_rest + width) {
                continue;
            }
            let m = self.t.mark();
            if self.t.extend(s, ci, li) {
                self.tick();
                let fresh = &self.t.open_subgoals()[..width];
                if !self.regular || fresh.iter().all(|&c| self.t.is_regular_at(c)) {
                    let bindings = self.t.bindings_since(&m);
                    self.steps.push(ProofStep { step: Step::Extension { subgoal: s, clause: ci, literal: li }, bindings });
                    if self.solve() {
                        return true;
                    }
                    self.steps.pop();
                    if self.cut_here(level) {
                        self.t.undo(m);
                        return false;
                    }
                }
            }
            self.t.undo(m);
            if self.stop.is_some() {
                return false;
            }
        }
        if self.horn {
            return false;
        }
        for a in self.t.ancestors(s) {
            let al = self.t.literal(a);
            if !al.is_complementary_shape(&lit) || !self.fits(None, inferences + 1, open_rest) {
                continue;
            }
            let m = self.t.mark();
            if self.t.reduce(s, a) {
                self.tick();
                let bindings = self.t.bindings_since(&m);
                self.steps.push(ProofStep { step: Step::Reduction { subgoal: s, ancestor: a }, bindings });
                if self.solve() {
                    return true;
                }
                self.steps.pop();
                if self.cut_here(level) {
                    self.t.undo(m);
                    return false;
                }
            }
            self.t.undo(m);
            if self.stop.is_some() {
                return false;
            }
        }
        false
    }
}

/// Iterative deepening over `cfg.bound` from `cfg.initial` in steps of
/// `cfg.step`, left-most subgoal selection, extension before reduction.
pub fn prove<I: Interrupt + ?Sized>(problem: &Problem, cfg: &ProveConfig, interrupt: &I) -> ProveOutcome {
    let inputs = problem.clause_list();
    let goals = problem.goal_clauses(cfg.mode);
    let index = ExtensionIndex::new(&inputs);
    let horn = problem.is_horn();
    let mut work = 0u64;
    let mut last_full = None;
    let mut n = cfg.initial;
    let step = cfg.step.max(1);
    loop {
        if n > cfg.max_resource {
            let result = ProveResult::LimitReached { resource: last_full, limit: Limit::Resource };
            return ProveOutcome { result, work, no_start_clause: goals.no_negative_clause };
        }
        let (dcap, icap) = cfg.bound.caps(n);
        let mut search = Search {
            t: Tableau::new(&inputs),
            index: &index,
            dcap,
            icap,
            horn,
            regular: cfg.regularity,
            steps: Vec::new(),
            work,
            max_work: cfg.max_work,
            interrupt,
            bound_hit: false,
            stop: None,
            cut: cfg.solution_cut && dcap.is_some() && icap.is_none(),
            frames: Vec::new(),
        };
        if interrupt.interrupted() {
            search.stop = Some(Limit::Interrupted);
        }
        for &g in &goals.indices {
            if search.stop.is_some() {
                break;
            }
            let width = inputs[g].len();
            if !search.fits(None, 1, width) {
                continue;
            }
            let m = search.t.mark();
            search.t.start(ClauseRef::Input(g), &inputs[g]);
            search.tick();
            search.steps.push(ProofStep { step: Step::Start { clause: ClauseRef::Input(g) }, bindings: Vec::new() });
            if search.solve() {
                let proof = TableauProof { steps: core::mem::take(&mut search.steps), resource: n };
                return ProveOutcome {
                    result: ProveResult::Closed(proof),
                    work: search.work,
                    no_start_clause: goals.no_negative_clause,
                };
            }
            search.steps.clear();
            search.t.undo(m);
        }
        work = search.work;
        if let Some(limit) = search.stop {
            let result = ProveResult::LimitReached { resource: last_full, limit };
            return ProveOutcome { result, work, no_start_clause: goals.no_negative_clause };
        }
        last_full = Some(n);
        if !search.bound_hit {
            return ProveOutcome {
                result: ProveResult::Exhausted { resource: n },
                work,
                no_start_clause: goals.no_negative_clause,
            };
        }
        n += step;
    }
}
