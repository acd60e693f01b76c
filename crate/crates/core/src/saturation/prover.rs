//! The given-clause loop.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::heuristic::{Heuristic, Origin};
use super::order::{OrderingMode, TermOrder};
use super::rules::{self, Calculus, Rule};
use crate::interrupt::Interrupt;
use crate::kernel::{is_tautology, matching, subsumes, variant_equal, Clause, Literal, Term};

pub type ClauseId = usize;

/// How a clause came about and how often it took part in inferences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationRecord {
    pub rule: Rule,
    /// For rewriting: the rewritten clause, then the equations used.
    pub premises: Vec<ClauseId>,
    /// Expansion inferences the clause was a premise of.
    pub epsilon: u64,
    /// Contraction inferences (subsumption, rewriting) it performed.
    pub kappa: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deletion {
    Tautology,
    Subsumed,
    Rewritten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Passive,
    Active,
    Deleted(Deletion),
}

#[derive(Clone, Debug)]
pub struct StoredClause {
    pub clause: Clause,
    pub record: DerivationRecord,
    pub status: Status,
    pub weight: u64,
    /// Insertion order among passive clauses.
    pub seq: u64,
    /// Activation index, once active.
    pub activated: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SatConfig {
    pub calculus: Calculus,
    pub ordering: OrderingMode,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig { calculus: Calculus::Superposition, ordering: OrderingMode::None }
    }
}

/// One step of an exported derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub id: ClauseId,
    pub rule: Rule,
    pub premises: Vec<ClauseId>,
    pub clause: Clause,
}

/// The ancestors of the empty clause, premises before conclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    /// Non-input steps.
    pub fn inferences(&self) -> usize {
        self.steps.iter().filter(|s| s.rule != Rule::Input).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatLimit {
    Activations,
    Interrupted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Refutation(Derivation),
    Saturated,
    LimitReached(SatLimit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatOutcome {
    pub result: SatResult,
    pub activations: usize,
    pub generated: usize,
}

/// What happened to the clause picked by [`Prover::activate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Activation {
    /// The clause (possibly rewritten first) became active.
    Activated { id: ClauseId, generated: usize },
    /// Contraction removed it before it became active.
    Deleted { id: ClauseId, reason: Deletion },
    /// Nothing passive is left.
    Saturated,
}

/// F^P, F^A and the derivation records of one run.
pub struct Prover<H: Heuristic> {
    clauses: Vec<StoredClause>,
    passive: BTreeSet<(u64, u64, ClauseId)>,
    oldest: BTreeSet<(u64, ClauseId)>,
    active: Vec<ClauseId>,
    activations: usize,
    steps: usize,
    seq: u64,
    order: TermOrder,
    calculus: Calculus,
    heuristic: H,
    empty: Option<ClauseId>,
    trace: Vec<ClauseId>,
}

impl<H: Heuristic> Prover<H> {
    /// F^P = the input clauses in order, F^A = ∅.
    pub fn new(inputs: &[Clause], cfg: &SatConfig, heuristic: H) -> Self {
        let mut p = Prover {
            clauses: Vec::new(),
            passive: BTreeSet::new(),
            oldest: BTreeSet::new(),
            active: Vec::new(),
            activations: 0,
            steps: 0,
            seq: 0,
            order: TermOrder::new(&cfg.ordering),
            calculus: cfg.calculus,
            heuristic,
            empty: None,
            trace: Vec::new(),
        };
        for c in inputs {
            let id = p.record(c.clone(), Rule::Input, Vec::new());
            p.insert_passive(id);
        }
        p
    }

    pub fn clauses(&self) -> &[StoredClause] {
        &self.clauses
    }

    pub fn clause(&self, id: ClauseId) -> &StoredClause {
        &self.clauses[id]
    }

    pub fn active(&self) -> &[ClauseId] {
        &self.active
    }

    pub fn passive(&self) -> impl Iterator<Item = ClauseId> + '_ {
        self.passive.iter().map(|&(_, _, id)| id)
    }

    pub fn activations(&self) -> usize {
        self.activations
    }

    /// Clauses in activation order.
    pub fn trace(&self) -> &[ClauseId] {
        &self.trace
    }

    pub fn empty_clause(&self) -> Option<ClauseId> {
        self.empty
    }

    /// Positive unit clauses among the active ones, in activation order.
    pub fn facts(&self) -> Vec<ClauseId> {
        self.trace.iter().copied().filter(|&id| self.clauses[id].status == Status::Active && self.clauses[id].clause.is_fact()).collect()
    }

    fn record(&mut self, clause: Clause, rule: Rule, premises: Vec<ClauseId>) -> ClauseId {
        let id = self.clauses.len();
        if rule.is_expansion() {
            let mut seen = premises.clone();
            seen.sort_unstable();
            seen.dedup();
            for p in seen {
                self.clauses[p].record.epsilon += 1;
            }
        }
        let acts: Vec<usize> = premises.iter().filter_map(|&p| self.clauses[p].activated).collect();
        let weight = self.heuristic.weight(&clause, &Origin { rule, premise_activations: &acts, activations: self.activations });
        self.clauses.push(StoredClause {
            clause,
            record: DerivationRecord { rule, premises, epsilon: 0, kappa: 0 },
            status: Status::Deleted(Deletion::Tautology),
            weight,
            seq: 0,
            activated: None,
        });
        id
    }

    fn insert_passive(&mut self, id: ClauseId) {
        if is_tautology(&self.clauses[id].clause) {
            self.clauses[id].status = Status::Deleted(Deletion::Tautology);
            return;
        }
        self.seq += 1;
        let c = &mut self.clauses[id];
        c.seq = self.seq;
        c.status = Status::Passive;
        self.passive.insert((c.weight, c.seq, id));
        self.oldest.insert((c.seq, id));
    }

    fn remove_passive(&mut self, id: ClauseId, status: Status) {
        let c = &mut self.clauses[id];
        debug_assert_eq!(c.status, Status::Passive);
        self.passive.remove(&(c.weight, c.seq, id));
        self.oldest.remove(&(c.seq, id));
        c.status = status;
    }

    fn pick(&self) -> Option<ClauseId> {
        if let Some(e) = self.empty.filter(|&e| self.clauses[e].status == Status::Passive) {
            return Some(e);
        }
        let fifo = self.heuristic.fifo_period().is_some_and(|f| (self.steps + 1) % f == 0);
        if fifo {
            self.oldest.first().map(|&(_, id)| id)
        } else {
            self.passive.first().map(|&(_, _, id)| id)
        }
    }

    /// Orientable positive unit equations among the active clauses.
    fn demodulators(&self) -> Vec<ClauseId> {
        if self.order.is_empty() {
            return Vec::new();
        }
        self.active
            .iter()
            .copied()
            .filter(|&id| {
                let c = &self.clauses[id].clause;
                c.is_unit() && c.literals()[0].positive && c.literals()[0].is_equality()
            })
            .collect()
    }

    fn normalize(&self, c: &Clause, rules: &[ClauseId]) -> (Clause, Vec<ClauseId>) {
        let eqs: Vec<(ClauseId, &Literal)> = rules.iter().map(|&r| (r, &self.clauses[r].clause.literals()[0])).collect();
        normal_form(&self.order, c, &eqs)
    }

    /// Forward contraction of a fresh or picked clause. Returns the id that
    /// survives (possibly a rewritten copy) or the reason for deletion.
    fn contract(&mut self, id: ClauseId) -> Result<ClauseId, Deletion> {
        let mut id = id;
        let rules = self.demodulators();
        if !rules.is_empty() {
            let (nf, used) = self.normalize(&self.clauses[id].clause, &rules);
            if !used.is_empty() {
                for &r in &used {
                    self.clauses[r].record.kappa += 1;
                }
                let mut premises = alloc::vec![id];
                premises.extend(used);
                let new = self.record(nf, Rule::Rewriting, premises);
                self.clauses[id].status = Status::Deleted(Deletion::Rewritten);
                id = new;
            }
        }
        let c = &self.clauses[id].clause;
        if is_tautology(c) {
            return Err(Deletion::Tautology);
        }
        if let Some(&s) = self.active.iter().find(|&&a| subsumes(&self.clauses[a].clause, c)) {
            self.clauses[s].record.kappa += 1;
            return Err(Deletion::Subsumed);
        }
        Ok(id)
    }

    /// Remove or rewrite clauses made redundant by the new active clause.
    fn back_contract(&mut self, given: ClauseId) -> Vec<ClauseId> {
        let g = self.clauses[given].clause.clone();
        let mut touched = Vec::new();
        let candidates: Vec<ClauseId> = self.active.iter().copied().chain(self.passive()).filter(|&id| id != given).collect();
        for id in &candidates {
            if subsumes(&g, &self.clauses[*id].clause) {
                self.retire(*id, Deletion::Subsumed);
                self.clauses[given].record.kappa += 1;
                touched.push(*id);
            }
        }
        let is_rule = !self.order.is_empty() && g.is_unit() && g.literals()[0].positive && g.literals()[0].is_equality();
        if is_rule {
            for id in candidates {
                if touched.contains(&id) {
                    continue;
                }
                let (nf, used) = self.normalize(&self.clauses[id].clause, &[given]);
                if used.is_empty() {
                    continue;
                }
                self.retire(id, Deletion::Rewritten);
                self.clauses[given].record.kappa += 1;
                touched.push(id);
                let new = self.record(nf, Rule::Rewriting, alloc::vec![id, given]);
                self.admit(new);
            }
        }
        touched
    }

    fn retire(&mut self, id: ClauseId, why: Deletion) {
        match self.clauses[id].status {
            Status::Passive => self.remove_passive(id, Status::Deleted(why)),
            Status::Active => {
                self.active.retain(|&a| a != id);
                self.clauses[id].status = Status::Deleted(why);
            }
            Status::Deleted(_) => {}
        }
    }

    /// Contract a new clause and, if it survives, make it passive.
    fn admit(&mut self, id: ClauseId) {
        match self.contract(id) {
            Ok(kept) => {
                if self.clauses[kept].clause.is_empty() && self.empty.is_none() {
                    self.empty = Some(kept);
                }
                self.insert_passive(kept);
            }
            Err(why) => self.clauses[id].status = Status::Deleted(why),
        }
    }

    /// Select, contract and (if kept) activate one passive clause, adding
    /// every conclusion with the active clauses to F^P.
    pub fn activate(&mut self) -> Activation {
        let Some(id) = self.pick() else { return Activation::Saturated };
        self.steps += 1;
        self.remove_passive(id, Status::Deleted(Deletion::Subsumed));
        let id = match self.contract(id) {
            Ok(kept) => kept,
            Err(reason) => {
                self.clauses[id].status = Status::Deleted(reason);
                return Activation::Deleted { id, reason };
            }
        };
        self.clauses[id].status = Status::Active;
        self.clauses[id].activated = Some(self.activations);
        self.activations += 1;
        self.trace.push(id);
        if self.clauses[id].clause.is_empty() {
            self.empty = Some(id);
            self.active.push(id);
            return Activation::Activated { id, generated: 0 };
        }
        self.back_contract(id);
        self.active.push(id);
        let given = self.clauses[id].clause.clone();
        let mut generated = 0;
        let mut new: Vec<(Rule, Vec<ClauseId>, Clause)> = Vec::new();
        for &a in &self.active {
            let other = &self.clauses[a].clause;
            for (rule, c) in rules::binary(self.calculus, &self.order, &given, other) {
                new.push((rule, alloc::vec![id, a], c));
            }
        }
        for (rule, c) in rules::unary(self.calculus, &self.order, &given) {
            new.push((rule, alloc::vec![id], c));
        }
        for (rule, premises, c) in new {
            generated += 1;
            let nid = self.record(c, rule, premises);
            self.admit(nid);
        }
        Activation::Activated { id, generated }
    }

    /// Run until the empty clause is activated, F^P is empty, or a limit
    /// hits. The interrupt is polled between activations.
    pub fn saturate<I: Interrupt + ?Sized>(&mut self, max_activations: Option<usize>, interrupt: &I) -> SatOutcome {
        let mut generated = 0;
        let result = loop {
            if let Some(e) = self.empty.filter(|&e| self.clauses[e].status == Status::Active) {
                break SatResult::Refutation(self.derivation(e));
            }
            if max_activations.is_some_and(|m| self.activations >= m) {
                break SatResult::LimitReached(SatLimit::Activations);
            }
            if interrupt.interrupted() {
                break SatResult::LimitReached(SatLimit::Interrupted);
            }
            match self.activate() {
                Activation::Saturated => break SatResult::Saturated,
                Activation::Activated { generated: g, .. } => generated += g,
                Activation::Deleted { .. } => {}
            }
        };
        SatOutcome { result, activations: self.activations, generated }
    }

    /// Exactly `min(i, activations until termination)` activations.
    pub fn preprocess<I: Interrupt + ?Sized>(&mut self, i: usize, interrupt: &I) -> SatOutcome {
        self.saturate(Some(i), interrupt)
    }

    /// Ancestors of `id`, premises first.
    pub fn derivation(&self, id: ClauseId) -> Derivation {
        let mut keep = BTreeSet::new();
        let mut stack = alloc::vec![id];
        while let Some(x) = stack.pop() {
            if keep.insert(x) {
                stack.extend(self.clauses[x].record.premises.iter().copied());
            }
        }
        Derivation {
            steps: keep
                .into_iter()
                .map(|x| {
                    let c = &self.clauses[x];
                    DerivationStep { id: x, rule: c.record.rule, premises: c.record.premises.clone(), clause: c.clause.clone() }
                })
                .collect(),
        }
    }

    /// Consistency of the bookkeeping: disjoint sets, premises older than
    /// conclusions, ε equal to the number of expansion records naming the
    /// clause.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut eps: BTreeMap<ClauseId, u64> = BTreeMap::new();
        for (id, c) in self.clauses.iter().enumerate() {
            if c.record.premises.iter().any(|&p| p >= id) {
                return Err(format!("clause {id} has a premise that is not older"));
            }
            if c.record.rule.is_expansion() {
                let mut ps = c.record.premises.clone();
                ps.sort_unstable();
                ps.dedup();
                for p in ps {
                    *eps.entry(p).or_default() += 1;
                }
            }
            let in_passive = self.passive.contains(&(c.weight, c.seq, id));
            let in_active = self.active.contains(&id);
            let ok = match c.status {
                Status::Passive => in_passive && !in_active,
                Status::Active => in_active && !in_passive,
                Status::Deleted(_) => !in_active && !in_passive,
            };
            if !ok {
                return Err(format!("clause {id} status {:?} disagrees with the sets", c.status));
            }
        }
        for (id, c) in self.clauses.iter().enumerate() {
            if c.record.epsilon != eps.get(&id).copied().unwrap_or(0) {
                return Err(format!("clause {id}: epsilon {} but {} records", c.record.epsilon, eps.get(&id).copied().unwrap_or(0)));
            }
        }
        Ok(())
    }
}

/// One-shot saturation.
pub fn saturate<H: Heuristic, I: Interrupt + ?Sized>(
    inputs: &[Clause],
    cfg: &SatConfig,
    heuristic: H,
    max_activations: Option<usize>,
    interrupt: &I,
) -> SatOutcome {
    Prover::new(inputs, cfg, heuristic).saturate(max_activations, interrupt)
}

/// Check that every step of `d` follows from its premises by its rule and
/// that input steps are input clauses.
pub fn verify_derivation(inputs: &[Clause], d: &Derivation, cfg: &SatConfig) -> Result<(), String> {
    let order = TermOrder::new(&cfg.ordering);
    let mut known: BTreeMap<ClauseId, &Clause> = BTreeMap::new();
    for s in &d.steps {
        let prem: Vec<&Clause> = s
            .premises
            .iter()
            .map(|p| known.get(p).copied().ok_or_else(|| format!("step {}: premise {p} not derived earlier", s.id)))
            .collect::<Result<_, _>>()?;
        let ok = match (s.rule, prem.as_slice()) {
            (Rule::Input, []) => inputs.iter().any(|c| variant_equal(c, &s.clause)),
            (Rule::Rewriting, [orig, eqs @ ..]) if !eqs.is_empty() => rewrites_to(&order, orig, eqs, &s.clause),
            (rule, [c]) => rules::unary(cfg.calculus, &order, c).iter().any(|(r, x)| *r == rule && variant_equal(x, &s.clause)),
            (rule, [c, e]) => {
                rules::binary(cfg.calculus, &order, c, e).iter().any(|(r, x)| *r == rule && variant_equal(x, &s.clause))
            }
            _ => false,
        };
        if !ok {
            return Err(format!("step {} ({}) does not follow from its premises", s.id, s.rule.as_str()));
        }
        known.insert(s.id, &s.clause);
    }
    match d.steps.last() {
        Some(s) if s.clause.is_empty() => Ok(()),
        _ => Err("derivation does not end in the empty clause".into()),
    }
}

fn rewrites_to(order: &TermOrder, orig: &Clause, eqs: &[&Clause], target: &Clause) -> bool {
    let eqs: Option<Vec<(ClauseId, &Literal)>> = eqs
        .iter()
        .enumerate()
        .map(|(i, e)| (e.is_unit() && e.literals()[0].positive && e.literals()[0].is_equality()).then(|| (i, &e.literals()[0])))
        .collect();
    eqs.is_some_and(|eqs| variant_equal(&normal_form(order, orig, &eqs).0, target))
}

/// One rewrite step of `t` somewhere with `eq`, if possible.
fn rewrite_term(order: &TermOrder, t: &Term, eq: &Literal) -> Option<Term> {
    for path in t.non_var_positions() {
        let u = t.at(&path).expect("position exists");
        for (l, r) in [(&eq.args[0], &eq.args[1]), (&eq.args[1], &eq.args[0])] {
            if let Some(s) = matching(l, u) {
                let (sl, sr) = (s.apply_term(l), s.apply_term(r));
                if order.gt(&sl, &sr) {
                    return Some(t.replace_at(&path, &sr));
                }
            }
        }
    }
    None
}

/// Normal form of `c` under the oriented instances of `eqs`, with the ids
/// of the equations that fired.
fn normal_form(order: &TermOrder, c: &Clause, eqs: &[(ClauseId, &Literal)]) -> (Clause, Vec<ClauseId>) {
    let mut lits: Vec<Literal> = c.literals().to_vec();
    let mut used = Vec::new();
    loop {
        let mut changed = false;
        'scan: for l in lits.iter_mut() {
            for a in l.args.iter_mut() {
                for &(r, eq) in eqs {
                    if let Some(t) = rewrite_term(order, a, eq) {
                        *a = t;
                        if !used.contains(&r) {
                            used.push(r);
                        }
                        changed = true;
                        break 'scan;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (Clause::new(lits).normalized(), used)
}
