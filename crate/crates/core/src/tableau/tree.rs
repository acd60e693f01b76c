use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::format;
use alloc::vec::Vec;

use crate::kernel::{resolve_literal, unify_atoms_in, Clause, Literal, TrailBindings, Var};

/// Where an attached clause came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseRef {
    /// Index into the input clause list.
    Input(usize),
    /// Index into a caller-supplied list of extra start clauses.
    Given(usize),
}

#[derive(Clone, Debug)]
struct Node {
    /// Renamed-apart literal; bindings live in the trail.
    lit: Literal,
    parent: usize,
    depth: usize,
    children: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Attached {
    source: ClauseRef,
    clause: Clause,
    offset: Var,
}

/// Saved state for [`Tableau::undo`].
#[derive(Clone, Debug)]
pub struct Mark {
    nodes: usize,
    open: Vec<usize>,
    bindings: usize,
    next_var: Var,
    inferences: usize,
    attached: usize,
}

/// One inference of a tableau derivation. Nodes are numbered in creation
/// order with the root as node 0, so a step list replays deterministically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Start { clause: ClauseRef },
    Extension { subgoal: usize, clause: usize, literal: usize },
    Reduction { subgoal: usize, ancestor: usize },
}

/// A connection tableau under construction.
///
/// The tree is an arena of literal nodes. Open subgoals are kept in
/// selection order; closing or expanding a subgoal replaces it in place by
/// its new open children, which gives depth-first, left-most selection.
#[derive(Clone, Debug)]
pub struct Tableau<'a> {
    inputs: &'a [Clause],
    nodes: Vec<Node>,
    open: Vec<usize>,
    bindings: TrailBindings,
    next_var: Var,
    inferences: usize,
    attached: Vec<Attached>,
}

impl Mark {
    /// First variable not yet in use when the mark was taken.
    pub fn var_floor(&self) -> Var {
        self.next_var
    }
}

impl<'a> Tableau<'a> {
    /// The trivial tableau (a root without literal) over `inputs`.
    pub fn new(inputs: &'a [Clause]) -> Self {
        Tableau {
            inputs,
            nodes: alloc::vec![Node { lit: Literal::pos("$root", Vec::new()), parent: 0, depth: 0, children: Vec::new() }],
            open: Vec::new(),
            bindings: TrailBindings::new(),
            next_var: 0,
            inferences: 0,
            attached: Vec::new(),
        }
    }

    pub fn inputs(&self) -> &'a [Clause] {
        self.inputs
    }

    pub fn is_trivial(&self) -> bool {
        self.attached.is_empty()
    }

    pub fn inferences(&self) -> usize {
        self.inferences
    }

    pub fn open_subgoals(&self) -> &[usize] {
        &self.open
    }

    pub fn is_closed(&self) -> bool {
        !self.is_trivial() && self.open.is_empty()
    }

    pub fn depth_of(&self, node: usize) -> usize {
        self.nodes[node].depth
    }

    /// Largest depth of a node with children (the root counts once the
    /// start rule has been applied).
    pub fn max_inner_depth(&self) -> usize {
        self.nodes.iter().filter(|n| !n.children.is_empty()).map(|n| n.depth).max().unwrap_or(0)
    }

    /// Whether `node` lies in the subtree below `root`, `root` included.
    pub fn is_below(&self, node: usize, root: usize) -> bool {
        let mut cur = node;
        while cur != root {
            if cur == 0 || cur < root {
                return false;
            }
            cur = self.nodes[cur].parent;
        }
        true
    }

    pub fn mark(&self) -> Mark {
        Mark {
            nodes: self.nodes.len(),
            open: self.open.clone(),
            bindings: self.bindings.mark(),
            next_var: self.next_var,
            inferences: self.inferences,
            attached: self.attached.len(),
        }
    }

    pub fn undo(&mut self, m: Mark) {
        for id in (m.nodes..self.nodes.len()).rev() {
            let p = self.nodes[id].parent;
            self.nodes[p].children.pop();
        }
        self.nodes.truncate(m.nodes);
        self.open = m.open;
        self.bindings.undo_to(m.bindings);
        self.next_var = m.next_var;
        self.inferences = m.inferences;
        self.attached.truncate(m.attached);
    }

    /// Variable bindings made since `m`, as recorded on the trail.
    pub fn bindings_since(&self, m: &Mark) -> Vec<(Var, crate::kernel::Term)> {
        self.bindings.since(m.bindings)
    }

    /// Literal of `node` under the current substitution.
    pub fn literal(&self, node: usize) -> Literal {
        resolve_literal(&self.bindings, &self.nodes[node].lit)
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        (node != 0).then(|| self.nodes[node].parent)
    }

    /// Proper ancestors of `node`, nearest first, root excluded.
    pub fn ancestors(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[node].parent;
        while cur != 0 {
            out.push(cur);
            cur = self.nodes[cur].parent;
        }
        out
    }

    /// Subgoal clause S_T: the open leaves under the current substitution.
    pub fn subgoal_clause(&self) -> Clause {
        Clause::new(self.open.iter().map(|&n| self.literal(n)).collect())
    }

    /// Tableau clauses as instances under the current substitution.
    pub fn tableau_clauses(&self) -> Vec<Clause> {
        self.attached.iter().map(|a| self.bindings_apply(&a.clause.shifted(a.offset))).collect()
    }

    pub fn start_clause(&self) -> Option<ClauseRef> {
        self.attached.first().map(|a| a.source)
    }

    fn bindings_apply(&self, c: &Clause) -> Clause {
        Clause::new(c.literals().iter().map(|l| resolve_literal(&self.bindings, l)).collect())
    }

    fn fresh_offset(&mut self, c: &Clause) -> Var {
        let off = self.next_var;
        self.next_var += c.max_var().map_or(0, |m| m + 1);
        off
    }

    fn push_node(&mut self, lit: Literal, parent: usize) -> usize {
        let depth = self.nodes[parent].depth + 1;
        let id = self.nodes.len();
        self.nodes.push(Node { lit, parent, depth, children: Vec::new() });
        self.nodes[parent].children.push(id);
        id
    }

    /// Start rule: attach a variant of `clause` below the root.
    pub fn start(&mut self, source: ClauseRef, clause: &Clause) -> bool {
        if !self.is_trivial() {
            return false;
        }
        let off = self.fresh_offset(clause);
        let shifted = clause.shifted(off);
        for l in shifted.literals() {
            let id = self.push_node(l.clone(), 0);
            self.open.push(id);
        }
        self.attached.push(Attached { source, clause: clause.clone(), offset: off });
        self.inferences += 1;
        true
    }

    /// Extension rule: attach a variant of input clause `clause` below the
    /// open leaf `subgoal`, connecting through its `literal`-th literal.
    /// On failure the tableau is unchanged.
    pub fn extend(&mut self, subgoal: usize, clause: usize, literal: usize) -> bool {
        let Some(pos) = self.open.iter().position(|&n| n == subgoal) else {
            return false;
        };
        let inputs = self.inputs;
        let Some(c) = inputs.get(clause) else {
            return false;
        };
        let Some(k) = c.literals().get(literal) else {
            return false;
        };
        if !k.is_complementary_shape(&self.nodes[subgoal].lit) {
            return false;
        }
        let mark = self.bindings.mark();
        let saved_next = self.next_var;
        let off = self.fresh_offset(c);
        let shifted = c.shifted(off);
        let s = self.nodes[subgoal].lit.clone();
        if !unify_atoms_in(&mut self.bindings, &s, &shifted.literals()[literal]) {
            self.bindings.undo_to(mark);
            self.next_var = saved_next;
            return false;
        }
        let mut new_open = Vec::with_capacity(c.len().saturating_sub(1));
        for (i, l) in shifted.literals().iter().enumerate() {
            let id = self.push_node(l.clone(), subgoal);
            if i != literal {
                new_open.push(id);
            }
        }
        self.open.splice(pos..=pos, new_open);
        self.attached.push(Attached { source: ClauseRef::Input(clause), clause: c.clone(), offset: off });
        self.inferences += 1;
        true
    }

    /// Reduction rule: close `subgoal` against a complementary ancestor.
    pub fn reduce(&mut self, subgoal: usize, ancestor: usize) -> bool {
        let Some(pos) = self.open.iter().position(|&n| n == subgoal) else {
            return false;
        };
        if ancestor == 0 || !self.ancestors(subgoal).contains(&ancestor) {
            return false;
        }
        let (s, a) = (self.nodes[subgoal].lit.clone(), self.nodes[ancestor].lit.clone());
        if !s.is_complementary_shape(&a) {
            return false;
        }
        let mark = self.bindings.mark();
        if !unify_atoms_in(&mut self.bindings, &s, &a) {
            self.bindings.undo_to(mark);
            return false;
        }
        self.open.remove(pos);
        self.inferences += 1;
        true
    }

    pub fn apply(&mut self, step: &Step, given: &[Clause]) -> bool {
        match *step {
            Step::Start { clause } => {
                let c = match clause {
                    ClauseRef::Input(i) => self.inputs.get(i),
                    ClauseRef::Given(i) => given.get(i),
                };
                match c {
                    Some(c) => {
                        let c = c.clone();
                        self.start(clause, &c)
                    }
                    None => false,
                }
            }
            Step::Extension { subgoal, clause, literal } => self.extend(subgoal, clause, literal),
            Step::Reduction { subgoal, ancestor } => self.reduce(subgoal, ancestor),
        }
    }

    /// No literal repeated on the branch of `node` (checked against its
    /// ancestors only).
    pub fn is_regular_at(&self, node: usize) -> bool {
        let l = self.literal(node);
        self.ancestors(node).into_iter().all(|a| self.literal(a) != l)
    }

    /// Structural invariants: every tableau clause is an instance of its
    /// source clause, every inner node has a complementary child leaf, and
    /// every closed leaf has a complementary node on its branch.
    pub fn check_invariants(&self, given: &[Clause]) -> Result<(), String> {
        for a in &self.attached {
            let src = match a.source {
                ClauseRef::Input(i) => &self.inputs[i],
                ClauseRef::Given(i) => &given[i],
            };
            let inst = self.bindings_apply(&a.clause.shifted(a.offset));
            if !is_instance(src, &inst) {
                return Err(format!("tableau clause {inst} is not an instance of {src}"));
            }
        }
        let open: BTreeSet<usize> = self.open.iter().copied().collect();
        for (id, n) in self.nodes.iter().enumerate().skip(1) {
            let l = self.literal(id);
            if !n.children.is_empty() {
                let connected = n.children.iter().any(|&c| {
                    self.nodes[c].children.is_empty() && !open.contains(&c) && self.literal(c) == l.complement()
                });
                if !connected {
                    return Err(format!("inner node {id} ({l}) has no complementary child leaf"));
                }
            }
            if n.children.is_empty() && !open.contains(&id) {
                let lc = l.complement();
                if !self.ancestors(id).into_iter().any(|a| self.literal(a) == lc) {
                    return Err(format!("closed leaf {id} ({l}) has no complementary ancestor"));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        self.describe_node(0, 0, &mut s);
        s
    }

    fn describe_node(&self, id: usize, indent: usize, out: &mut String) {
        if id != 0 {
            for _ in 0..indent {
                out.push_str("  ");
            }
            out.push_str(&self.literal(id).to_string());
            if self.open.contains(&id) {
                out.push_str("  (open)");
            }
            out.push('\n');
        }
        for &c in &self.nodes[id].children {
            self.describe_node(c, indent + usize::from(id != 0), out);
        }
    }
}

/// `inst` is σ(src) for some σ, as literal sets.
fn is_instance(src: &Clause, inst: &Clause) -> bool {
    // Match literal-wise onto the instance; src literals may collapse.
    fn go(rest: &[Literal], inst: &[Literal], s: &crate::kernel::Substitution) -> bool {
        let Some((l, rest)) = rest.split_first() else {
            return true;
        };
        inst.iter().any(|m| {
            if m.positive != l.positive {
                return false;
            }
            let mut s2 = s.clone();
            crate::kernel::Unifiable::match_in(l, m, &mut s2) && go(rest, inst, &s2)
        })
    }
    let shifted = match inst.max_var() {
        Some(m) => src.shifted(m + 1),
        None => src.clone(),
    };
    go(shifted.literals(), inst.literals(), &crate::kernel::Substitution::new())
}
