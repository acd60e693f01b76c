//! Selection of bottom-up lemmas: positive units from the saturation
//! preprocess, judged by usage statistics, derivation structure and the
//! subgoals they solve.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::kernel::{literal_measures, unify_all, Clause, Literal, Substitution};
use crate::saturation::{ClauseId, Heuristic, Prover, Rule, Status, StoredClause};

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCandidate {
    pub fact: Clause,
    /// The fact's clause in the prover's store.
    pub id: ClauseId,
    pub epsilon: u64,
    pub kappa: u64,
    /// Superposition steps in the derivation tree.
    pub depth: u64,
}

impl LemmaCandidate {
    pub fn literal(&self) -> &Literal {
        &self.fact.literals()[0]
    }
}

/// γ(l) = min(1, (a + distinct vars) / (b + symbols + depth)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaParams {
    pub a: f64,
    pub b: f64,
}

impl Default for GammaParams {
    fn default() -> Self {
        GammaParams { a: 1.0, b: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterQuotas {
    pub per_filter: usize,
    pub gamma: GammaParams,
    /// Filter (c) admits only lemmas whose ψ_C is strictly positive. Off by
    /// default: with γ ≤ 1 every lemma that solves a subgoal scores below
    /// zero, so filter (c) instead admits any lemma that solves one.
    pub require_positive: bool,
}

impl Default for FilterQuotas {
    fn default() -> Self {
        FilterQuotas { per_filter: 10, gamma: GammaParams::default(), require_positive: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Filter {
    Statistics,
    Derivation,
    Complexity,
}

impl Filter {
    pub fn as_str(self) -> &'static str {
        match self {
            Filter::Statistics => "statistics",
            Filter::Derivation => "derivation",
            Filter::Complexity => "complexity",
        }
    }
}

/// ψ_D for every stored clause: inputs 0, superposition the premise sum
/// plus one, other rules the premise sum. Premises always precede their
/// conclusions, so one pass suffices.
pub fn derivation_depths(clauses: &[StoredClause]) -> Vec<u64> {
    let mut v: Vec<u64> = Vec::with_capacity(clauses.len());
    for c in clauses {
        let sum: u64 = c.record.premises.iter().map(|&p| v[p]).sum();
        v.push(match c.record.rule {
            Rule::Input => 0,
            Rule::Superposition => sum + 1,
            _ => sum,
        });
    }
    v
}

/// The facts of `F^A` as lemma candidates, in activation order.
pub fn candidates<H: Heuristic>(prover: &Prover<H>) -> Vec<LemmaCandidate> {
    let depths = derivation_depths(prover.clauses());
    prover
        .facts()
        .into_iter()
        .map(|id| {
            let c = prover.clause(id);
            debug_assert_eq!(c.status, Status::Active);
            LemmaCandidate {
                fact: c.clause.clone(),
                id,
                epsilon: c.record.epsilon,
                kappa: c.record.kappa,
                depth: depths[id],
            }
        })
        .collect()
}

pub fn psi_s(c: &LemmaCandidate) -> i64 {
    c.kappa as i64 - c.epsilon as i64
}

pub fn psi_d(c: &LemmaCandidate) -> u64 {
    c.depth
}

pub fn gamma(l: &Literal, p: &GammaParams) -> f64 {
    let m = literal_measures(l);
    let g = (p.a + m.distinct_vars as f64) / (p.b + m.symbol_count as f64 + m.max_depth as f64);
    g.clamp(0.0, 1.0)
}

/// Subgoals of `sg` solved together by a lemma and the unifier doing it.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityMatch {
    /// Positions in `sg.literals()`.
    pub solved: Vec<usize>,
    pub sigma: Substitution,
    pub g: f64,
    pub score: f64,
}

const EXHAUSTIVE_LIMIT: usize = 12;

fn size(l: &Literal) -> usize {
    literal_measures(l).symbol_count
}

/// The most general unifier of `fact` with the complement of each chosen
/// literal, and its G value.
fn try_subset(fact: &Literal, lits: &[Literal], chosen: &[usize]) -> Option<(Substitution, f64)> {
    let comps: Vec<Literal> = chosen.iter().map(|&i| lits[i].complement()).collect();
    if comps.iter().any(|c| c.positive != fact.positive) {
        return None;
    }
    let sigma = unify_all(comps.iter().map(|c| (fact, c)))?;
    let growth: usize = chosen.iter().map(|&i| size(&sigma.apply_literal(&lits[i])) - size(&lits[i])).sum();
    Some((sigma, chosen.len() as f64 / (1.0 + growth as f64)))
}

fn better(g: f64, n: usize, best: &Option<(Vec<usize>, Substitution, f64)>) -> bool {
    match best {
        None => true,
        Some((u, _, bg)) => g > *bg || (g == *bg && n > u.len()),
    }
}

/// The (U, σ) maximizing G for `fact` against `sg`, with ψ_C. `None` when
/// no literal of `sg` unifies with the complement of `fact`.
pub fn best_match(fact: &Literal, sg: &Clause, p: &GammaParams) -> Option<ComplexityMatch> {
    let offset = sg.max_var().map_or(0, |v| v + 1);
    let fact = Clause::unit(fact.clone()).shifted(offset).into_literals().remove(0);
    let lits = sg.literals();
    let n = lits.len();
    let mut best: Option<(Vec<usize>, Substitution, f64)> = None;
    if n <= EXHAUSTIVE_LIMIT {
        for mask in 1u32..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if let Some((sigma, g)) = try_subset(&fact, lits, &chosen) {
                if better(g, chosen.len(), &best) {
                    best = Some((chosen, sigma, g));
                }
            }
        }
    } else {
        let mut chosen: Vec<usize> = Vec::new();
        loop {
            let mut step: Option<(Vec<usize>, Substitution, f64)> = None;
            for i in (0..n).filter(|i| !chosen.contains(i)) {
                let mut next = chosen.clone();
                next.push(i);
                next.sort_unstable();
                if let Some((sigma, g)) = try_subset(&fact, lits, &next) {
                    if better(g, next.len(), &step) {
                        step = Some((next, sigma, g));
                    }
                }
            }
            match step {
                Some(s) if better(s.2, s.0.len(), &best) => {
                    chosen = s.0.clone();
                    best = Some(s);
                }
                _ => break,
            }
        }
    }
    let (solved, sigma, g) = best?;
    let mut score = 0.0;
    for (i, l) in lits.iter().enumerate() {
        let gl = gamma(&sigma.apply_literal(l), p);
        if solved.contains(&i) {
            score -= gl;
        } else {
            score += gl - 1.0;
        }
    }
    Some(ComplexityMatch { solved, sigma, g, score })
}

pub fn psi_c(fact: &Literal, sg: &Clause, p: &GammaParams) -> f64 {
    best_match(fact, sg, p).map_or(0.0, |m| m.score)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectedLemma {
    /// Position in the candidate list.
    pub index: usize,
    /// Every filter that picked the lemma, with its score there.
    pub picks: Vec<(Filter, f64)>,
}

fn top_by<K: PartialOrd>(facts: &[LemmaCandidate], texts: &[String], n: usize, key: impl Fn(&LemmaCandidate) -> K) -> Vec<usize> {
    let mut order: Vec<usize> = (0..facts.len()).collect();
    order.sort_by(|&a, &b| {
        key(&facts[b])
            .partial_cmp(&key(&facts[a]))
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| texts[a].cmp(&texts[b]))
            .then(a.cmp(&b))
    });
    order.truncate(n);
    order
}

/// The bottom-up lemmas: the union of the statistics filter, the derivation filter (only
/// with equality) and the complexity filter over `pool`. Lemmas keep the
/// order in which they were first picked.
pub fn select_lemmas(facts: &[LemmaCandidate], pool: &[Clause], q: &FilterQuotas, has_equality: bool) -> Vec<SelectedLemma> {
    let texts: Vec<String> = facts.iter().map(|f| f.fact.normalized().to_string()).collect();
    let mut out: Vec<SelectedLemma> = Vec::new();
    let add = |out: &mut Vec<SelectedLemma>, index: usize, filter: Filter, score: f64| {
        match out.iter_mut().find(|s| s.index == index) {
            Some(s) => s.picks.push((filter, score)),
            None => out.push(SelectedLemma { index, picks: alloc::vec![(filter, score)] }),
        }
    };
    for i in top_by(facts, &texts, q.per_filter, psi_s) {
        add(&mut out, i, Filter::Statistics, psi_s(&facts[i]) as f64);
    }
    if has_equality {
        for i in top_by(facts, &texts, q.per_filter, psi_d) {
            add(&mut out, i, Filter::Derivation, psi_d(&facts[i]) as f64);
        }
    }
    let mut picked: Vec<usize> = Vec::new();
    for sg in pool {
        if picked.len() >= q.per_filter {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, f) in facts.iter().enumerate() {
            let Some(m) = best_match(f.literal(), sg, &q.gamma) else { continue };
            if q.require_positive && m.score <= 0.0 {
                continue;
            }
            let wins = match best {
                None => true,
                Some((b, s)) => m.score > s || (m.score == s && texts[i] < texts[b]),
            };
            if wins {
                best = Some((i, m.score));
            }
        }
        if let Some((i, s)) = best {
            if !picked.contains(&i) {
                picked.push(i);
                add(&mut out, i, Filter::Complexity, s);
            }
        }
    }
    out
}
