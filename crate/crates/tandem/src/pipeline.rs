//! The cooperation pipeline: both preprocessings, the two filters, and the
//! race of the augmented engines.

use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use tandem_core::interrupt::Interrupt;
use tandem_core::kernel::Clause;
use tandem_core::lemma::{candidates, select_lemmas, LemmaCandidate, SelectedLemma};
use tandem_core::problem::{Problem, Role};
use tandem_core::saturation::{
    symbol_weight, Calculus, Derivation, OrderingMode, Prover, SatConfig, SatLimit, SatResult, SymbolCount,
};
use tandem_core::subgoal::{generate_variant1, generate_variant2, select_subgoal_clauses};
use tandem_core::tableau::{prove, ClauseRef, Enumeration, Limit, ProveConfig, ProveResult, Step, TableauProof};

use crate::config::{CooperationConfig, OrderingKind, Sync, Variant};
use crate::race::{race, race_sequential, Attempt, Finish, RaceResult, Side, Stop};
use crate::report::{Counts, Outcome, Phases, ProofText, Report, Winner};

/// LPO precedence: symbols in order of first occurrence, later ones bigger.
pub fn ordering_mode(cfg: &CooperationConfig, p: &Problem) -> OrderingMode {
    match cfg.ordering {
        OrderingKind::None => OrderingMode::None,
        OrderingKind::Precedence => {
            let mut syms = Vec::new();
            for s in p.signature() {
                if !syms.contains(&s.name) {
                    syms.push(s.name.clone());
                }
            }
            OrderingMode::Precedence(syms)
        }
    }
}

pub fn sat_config(cfg: &CooperationConfig, p: &Problem) -> SatConfig {
    SatConfig { calculus: Calculus::Superposition, ordering: ordering_mode(cfg, p) }
}

pub fn new_prover(cfg: &CooperationConfig, p: &Problem, inputs: &[Clause]) -> Prover<SymbolCount> {
    Prover::new(inputs, &sat_config(cfg, p), SymbolCount { fifo_period: cfg.fifo_period })
}

pub fn prove_config(cfg: &CooperationConfig) -> ProveConfig {
    ProveConfig {
        mode: cfg.mode,
        bound: cfg.bound,
        initial: cfg.initial,
        step: cfg.step,
        max_resource: cfg.max_resource,
        max_work: cfg.me_max_work,
        regularity: true,
        solution_cut: true,
    }
}

/// Subgoal clause candidates, generated on `p` with its equality axioms.
pub fn generate_subgoals<I: Interrupt + ?Sized>(cfg: &CooperationConfig, p: &Problem, interrupt: &I) -> Enumeration {
    let me_problem = p.with_equality_axioms();
    match cfg.variant {
        Variant::One => generate_variant1(&me_problem, cfg.mode, &cfg.weights, interrupt),
        Variant::Two => generate_variant2(&me_problem, cfg.mode, &symbol_weight, &cfg.weights, interrupt),
    }
}

/// Indices of the transferred records, in rank order.
pub fn transfer(cfg: &CooperationConfig, p: &Problem, e: &Enumeration) -> Vec<usize> {
    select_subgoal_clauses(&e.records, cfg.weights.m, &symbol_weight, &p.unit_clauses(), &cfg.weights)
}

/// Lemma candidates of a preprocessed prover and the lemmas picked from
/// them against the subgoal clauses in `pool`.
pub fn choose_lemmas(
    cfg: &CooperationConfig,
    p: &Problem,
    prover: &Prover<SymbolCount>,
    pool: &[Clause],
) -> (Vec<LemmaCandidate>, Vec<SelectedLemma>) {
    let facts = candidates(prover);
    let chosen = select_lemmas(&facts, pool, &cfg.quotas, p.has_equality());
    (facts, chosen)
}

/// The ME input: `p`, its equality axioms and the lemmas.
pub fn me_problem(p: &Problem, lemmas: &[Clause]) -> Problem {
    p.with_equality_axioms().extended(lemmas, Role::Axiom, "lemma").expect("lemmas respect the signature")
}

pub fn sat_inputs(p: &Problem, subgoals: &[Clause]) -> Vec<Clause> {
    let mut v = p.clause_list();
    v.extend(subgoals.iter().cloned());
    v
}

pub fn run_me<I: Interrupt + ?Sized>(cfg: &CooperationConfig, p: &Problem, interrupt: &I) -> Attempt<TableauProof> {
    let out = prove(p, &prove_config(cfg), interrupt);
    match out.result {
        ProveResult::Closed(proof) => Attempt::Proved { proof, work: out.work },
        ProveResult::Exhausted { resource } => {
            Attempt::Failed { status: format!("exhausted at resource {resource}"), interrupted: false }
        }
        ProveResult::LimitReached { limit, .. } => {
            let status = match limit {
                Limit::Resource => "resource limit reached",
                Limit::Work => "work limit reached",
                Limit::Interrupted => "interrupted",
            };
            let status = if out.no_start_clause { format!("{status}; no negative start clause") } else { status.into() };
            Attempt::Failed { status, interrupted: limit == Limit::Interrupted }
        }
    }
}

pub fn run_sat<I: Interrupt + ?Sized>(
    cfg: &CooperationConfig,
    p: &Problem,
    inputs: &[Clause],
    interrupt: &I,
) -> Attempt<Derivation> {
    let mut prover = new_prover(cfg, p, inputs);
    let out = prover.saturate(cfg.sat_max_activations, interrupt);
    match out.result {
        SatResult::Refutation(d) => Attempt::Proved { proof: d, work: out.activations as u64 },
        SatResult::Saturated => Attempt::Failed { status: "saturated".into(), interrupted: false },
        SatResult::LimitReached(SatLimit::Activations) => {
            Attempt::Failed { status: "activation limit reached".into(), interrupted: false }
        }
        SatResult::LimitReached(SatLimit::Interrupted) => {
            Attempt::Failed { status: "interrupted".into(), interrupted: true }
        }
    }
}

fn clause_ref(inputs: &[Clause], r: ClauseRef) -> String {
    match r {
        ClauseRef::Input(i) => format!("clause {i} ({})", inputs[i]),
        ClauseRef::Given(i) => format!("given {i}"),
    }
}

pub fn me_proof_lines(inputs: &[Clause], proof: &TableauProof) -> Vec<String> {
    proof
        .steps
        .iter()
        .enumerate()
        .map(|(n, s)| match s.step {
            Step::Start { clause } => format!("{n}: start {}", clause_ref(inputs, clause)),
            Step::Extension { subgoal, clause, literal } => {
                format!("{n}: extend node {subgoal} with literal {literal} of clause {clause} ({})", inputs[clause])
            }
            Step::Reduction { subgoal, ancestor } => format!("{n}: reduce node {subgoal} by ancestor {ancestor}"),
        })
        .collect()
}

pub fn sat_proof_lines(d: &Derivation) -> Vec<String> {
    d.steps
        .iter()
        .map(|s| {
            let premises: Vec<String> = s.premises.iter().map(ToString::to_string).collect();
            if premises.is_empty() {
                format!("{}: {} [{}]", s.id, s.clause, s.rule.as_str())
            } else {
                format!("{}: {} [{} {}]", s.id, s.clause, s.rule.as_str(), premises.join(","))
            }
        })
        .collect()
}

/// Everything a pipeline run produced, for inspection beyond the report.
#[derive(Debug)]
pub struct PipelineRun {
    pub report: Report,
    pub enumeration: Enumeration,
    /// The transferred subgoal clauses.
    pub subgoals: Vec<Clause>,
    pub facts: Vec<LemmaCandidate>,
    /// The selected lemmas.
    pub lemmas: Vec<Clause>,
    pub me_problem: Problem,
    pub sat_inputs: Vec<Clause>,
    pub race: RaceResult<TableauProof, Derivation>,
}

fn ms(d: Duration) -> u64 {
    d.as_millis().try_into().unwrap_or(u64::MAX)
}

pub fn run_pipeline(cfg: &CooperationConfig, name: &str, p: &Problem) -> Report {
    run_pipeline_detailed(cfg, name, p).report
}

pub fn run_pipeline_detailed(cfg: &CooperationConfig, name: &str, p: &Problem) -> PipelineRun {
    let start = Instant::now();
    let deadline = start.checked_add(cfg.timeout);
    let never = AtomicBool::new(false);
    let outer = Stop::new(&never, deadline);

    // phase A
    let td_done = AtomicBool::new(false);
    let mut prover = new_prover(cfg, p, &p.clause_list());
    let (enumeration, td_time, bu_time) = if cfg.deterministic {
        let t = Instant::now();
        let e = generate_subgoals(cfg, p, &outer);
        let td = t.elapsed();
        let t = Instant::now();
        prover.preprocess(cfg.activations, &outer);
        (e, td, t.elapsed())
    } else {
        thread::scope(|s| {
            let td = s.spawn(|| {
                let t = Instant::now();
                let e = generate_subgoals(cfg, p, &outer);
                td_done.store(true, Ordering::Relaxed);
                (e, t.elapsed())
            });
            let t = Instant::now();
            match cfg.effective_sync() {
                Sync::Fixed => {
                    prover.preprocess(cfg.activations, &outer);
                }
                Sync::UntilTopDown => {
                    let stop = Stop::new(&td_done, deadline);
                    prover.preprocess(cfg.sat_max_activations.unwrap_or(usize::MAX), &stop);
                }
            }
            let bu = t.elapsed();
            let (e, td) = td.join().expect("subgoal generation does not panic");
            (e, td, bu)
        })
    };

    // phase B
    let t = Instant::now();
    let picked = transfer(cfg, p, &enumeration);
    let subgoals: Vec<Clause> = picked.iter().map(|&i| enumeration.records[i].clause.clone()).collect();
    let pool: Vec<Clause> = enumeration.records.iter().map(|r| r.clause.clone()).collect();
    let (facts, chosen) = choose_lemmas(cfg, p, &prover, &pool);
    let lemmas: Vec<Clause> = chosen.iter().map(|s| facts[s.index].fact.clone()).collect();
    let me_problem = me_problem(p, &lemmas);
    let sat_inputs = sat_inputs(p, &subgoals);
    let filter_time = t.elapsed();

    // phase C
    let t = Instant::now();
    let me = |stop: &Stop<'_>| run_me(cfg, &me_problem, stop);
    let sat = |stop: &Stop<'_>| run_sat(cfg, p, &sat_inputs, stop);
    let result = if cfg.deterministic { race_sequential(me, sat, deadline) } else { race(me, sat, deadline) };
    let race_time = t.elapsed();

    let (winner, resource, proof) = match (result.winner, &result.me, &result.sat) {
        (Some(Side::Me), Finish::Proved { proof, .. }, _) => (
            Winner::Me,
            Some(proof.resource as u64),
            Some(ProofText { engine: Winner::Me, steps: me_proof_lines(&me_problem.clause_list(), proof) }),
        ),
        (Some(Side::Sat), _, Finish::Proved { proof, work }) => {
            (Winner::Sat, Some(*work), Some(ProofText { engine: Winner::Sat, steps: sat_proof_lines(proof) }))
        }
        _ => (Winner::None, None, None),
    };
    let interrupted = |f: &Finish<_>| matches!(f, Finish::Failed { interrupted: true, .. });
    let outcome = if winner != Winner::None {
        Outcome::Unsat
    } else if outer.timed_out() || interrupted(&result.me) || matches!(&result.sat, Finish::Failed { interrupted: true, .. }) {
        Outcome::Timeout
    } else {
        Outcome::Exhausted
    };

    let mut phases = Phases {
        td_preprocess_ms: ms(td_time),
        bu_preprocess_ms: ms(bu_time),
        filter_ms: ms(filter_time),
        race_ms: ms(race_time),
    };
    let mut wall_ms = ms(start.elapsed());
    if cfg.deterministic {
        phases = Phases::default();
        wall_ms = 0;
    }
    let report = Report {
        problem: name.to_string(),
        result: outcome,
        winner,
        wall_ms,
        phases,
        counts: Counts {
            subgoal_candidates: enumeration.records.len(),
            transferred_subgoals: subgoals.len(),
            facts: facts.len(),
            lemmas: lemmas.len(),
        },
        resource,
        proof,
    };
    PipelineRun { report, enumeration, subgoals, facts, lemmas, me_problem, sat_inputs, race: result }
}
