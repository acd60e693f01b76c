//! Scoring and selection of subgoal clauses for transfer to the saturation
//! engine.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::interrupt::Interrupt;
use crate::kernel::{clause_measures, literal_measures, variant_equal, Clause, Literal, Sym};
use crate::problem::{Problem, StartMode};
use crate::tableau::{enumerate_subgoal_clauses, ClauseRef, EnumerateConfig, Enumeration, SubgoalRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionWeights {
    /// Weights of the inference count, the heaviest tableau clause and the
    /// unit similarity.
    pub alpha: [f64; 3],
    pub k: usize,
    /// Candidate cap of variant 1.
    pub nsg: usize,
    pub k1: usize,
    pub k2: usize,
    /// Records refined by variant 2.
    pub nref: usize,
    /// Clauses transferred.
    pub m: usize,
    /// Tableaux visited per enumeration before it stops, marked truncated.
    pub max_nodes: Option<u64>,
}

impl Default for SelectionWeights {
    fn default() -> Self {
        SelectionWeights { alpha: [10.0, 5.0, 1.0], k: 10, nsg: 500, k1: 9, k2: 9, nref: 5, m: 30, max_nodes: Some(250_000) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WeightsError {
    #[error("weights must satisfy alpha1 > alpha2 > alpha3 >= 0")]
    Alpha,
    #[error("resources k, k1 and k2 must be at least 2")]
    Resource,
}

impl SelectionWeights {
    pub fn validate(&self) -> Result<(), WeightsError> {
        let [a1, a2, a3] = self.alpha;
        if !(a1 > a2 && a2 > a3 && a3 >= 0.0) {
            return Err(WeightsError::Alpha);
        }
        if self.k < 2 || self.k1 < 2 || self.k2 < 2 {
            return Err(WeightsError::Resource);
        }
        Ok(())
    }
}

fn fn_counts(l: &Literal) -> BTreeMap<Sym, usize> {
    let mut m = BTreeMap::new();
    for a in &l.args {
        a.for_each_fn(&mut |f, _| *m.entry(f.clone()).or_insert(0) += 1);
    }
    m
}

fn mismatch(a: &Literal, b: &Literal) -> usize {
    let (ca, cb) = (fn_counts(a), fn_counts(b));
    let mut d = 0;
    for (f, n) in &ca {
        d += n.abs_diff(*cb.get(f).unwrap_or(&0));
    }
    for (f, n) in &cb {
        if !ca.contains_key(f) {
            d += n;
        }
    }
    d
}

/// How closely some literal of `s` mirrors the literal of the unit `u`:
/// 1 for a structural mirror, 0 when no literal has the same predicate and
/// opposite sign.
///
/// # Panics
/// If `u` is not a unit clause.
pub fn sim(s: &Clause, u: &Clause) -> f64 {
    assert!(u.is_unit(), "sim needs a unit clause");
    let ul = &u.literals()[0];
    let ud = literal_measures(ul).max_depth;
    s.literals()
        .iter()
        .filter(|l| l.pred == ul.pred && l.positive != ul.positive && l.args.len() == ul.args.len())
        .map(|l| {
            let gap = literal_measures(l).max_depth.abs_diff(ud);
            1.0 / (1.0 + (mismatch(l, ul) + gap) as f64)
        })
        .fold(0.0, f64::max)
}

/// Variable occurrences plus twice the function and predicate symbols.
pub fn theta(c: &Clause) -> usize {
    let m = clause_measures(c);
    m.var_occurrences + 2 * m.function_symbols()
}

/// ψ(S_T) = α1·I + α2·max H(tableau clause) + α3·max sim(S_T, unit).
pub fn psi(r: &SubgoalRecord, h: &dyn Fn(&Clause) -> u64, units: &[Clause], w: &SelectionWeights) -> f64 {
    let max_h = r.tableau_clauses.iter().map(h).max().unwrap_or(0);
    let max_sim = units.iter().map(|u| sim(&r.clause, u)).fold(0.0, f64::max);
    w.alpha[0] * r.inferences as f64 + w.alpha[1] * max_h as f64 + w.alpha[2] * max_sim
}

pub fn phi(r: &SubgoalRecord, h: &dyn Fn(&Clause) -> u64, units: &[Clause], w: &SelectionWeights) -> f64 {
    psi(r, h, units, w) - theta(&r.clause) as f64
}

/// Score used for ranking, with the deterministic tie-breaks.
#[derive(Clone, Debug)]
struct Ranked {
    index: usize,
    score: f64,
    theta: usize,
    text: String,
}

fn rank(scored: &mut [Ranked]) {
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.theta.cmp(&b.theta))
            .then_with(|| a.text.cmp(&b.text))
            .then(a.index.cmp(&b.index))
    });
}

fn ranked(
    records: &[SubgoalRecord],
    score: impl Fn(&SubgoalRecord) -> f64,
) -> Vec<Ranked> {
    let mut v: Vec<Ranked> = records
        .iter()
        .enumerate()
        .map(|(index, r)| Ranked { index, score: score(r), theta: theta(&r.clause), text: r.clause.normalized().to_string() })
        .collect();
    rank(&mut v);
    v
}

/// Variant 1: the subgoal clauses within resource `w.k`, stopping at `w.nsg`
/// candidates.
pub fn generate_variant1<I: Interrupt + ?Sized>(
    problem: &Problem,
    mode: StartMode,
    w: &SelectionWeights,
    interrupt: &I,
) -> Enumeration {
    let cfg = EnumerateConfig { k: w.k, mode, cap: Some(w.nsg), max_nodes: w.max_nodes, ..Default::default() };
    enumerate_subgoal_clauses(problem, &cfg, interrupt)
}

/// Variant 2: all subgoal clauses within `w.k1`, then a second enumeration
/// of resource `w.k2` from the `w.nref` ψ-best of them. Second-stage
/// records add their ancestor's inference count and tableau clauses.
/// `proof_found` refers to the first stage only.
pub fn generate_variant2<I: Interrupt + ?Sized>(
    problem: &Problem,
    mode: StartMode,
    h: &dyn Fn(&Clause) -> u64,
    w: &SelectionWeights,
    interrupt: &I,
) -> Enumeration {
    let cfg = EnumerateConfig { k: w.k1, mode, max_nodes: w.max_nodes, ..Default::default() };
    let mut a = enumerate_subgoal_clauses(problem, &cfg, interrupt);
    if w.nref == 0 || a.records.is_empty() || a.truncated {
        return a;
    }
    let units = problem.unit_clauses();
    let refine: Vec<usize> = ranked(&a.records, |r| psi(r, h, &units, w))
        .into_iter()
        .filter(|r| !a.records[r.index].clause.is_empty())
        .take(w.nref)
        .map(|r| r.index)
        .collect();
    if refine.is_empty() {
        return a;
    }
    let starts: Vec<Clause> = refine.iter().map(|&i| a.records[i].clause.clone()).collect();
    let cfg = EnumerateConfig { k: w.k2, mode, start_set: Some(&starts), max_nodes: w.max_nodes, ..Default::default() };
    let b = enumerate_subgoal_clauses(problem, &cfg, interrupt);
    a.truncated |= b.truncated;
    a.nodes += b.nodes;
    a.reductions_tried += b.reductions_tried;
    for rec in b.records {
        let ClauseRef::Given(g) = rec.start else { unreachable!("second stage starts from given clauses") };
        if a.records.iter().any(|r| variant_equal(&r.clause, &rec.clause)) {
            continue;
        }
        let parent = &a.records[refine[g]];
        // the start clause of the second stage is the parent's subgoal clause
        let mut tableau_clauses = parent.tableau_clauses.clone();
        tableau_clauses.extend(rec.tableau_clauses.into_iter().skip(1));
        let (inferences, start) = (parent.inferences + rec.inferences, parent.start);
        a.records.push(SubgoalRecord { clause: rec.clause, inferences, tableau_clauses, start });
    }
    a
}

/// The `m` candidates of highest φ, ties broken by smaller θ and then by
/// canonical text. Returns indices into `candidates` in rank order.
pub fn select_subgoal_clauses(
    candidates: &[SubgoalRecord],
    m: usize,
    h: &dyn Fn(&Clause) -> u64,
    units: &[Clause],
    w: &SelectionWeights,
) -> Vec<usize> {
    ranked(candidates, |r| phi(r, h, units, w)).into_iter().take(m).map(|r| r.index).collect()
}
