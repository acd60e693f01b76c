//! Acceptance run: one line per criterion, nonzero exit on any failure.
//! Pass criterion numbers as arguments to run a subset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use tandem::config::{CooperationConfig, Variant};
use tandem::parse_problem;
use tandem::pipeline::{
    choose_lemmas, generate_subgoals, me_problem, new_prover, prove_config, run_me, run_pipeline_detailed, sat_config,
    sat_inputs, transfer,
};
use tandem::race::Attempt;
use tandem_core::entail::{entails, satisfiable};
use tandem_core::interrupt::Never;
use tandem_core::kernel::{unify, variant_equal, Clause, Literal};
use tandem_core::problem::{Problem, StartMode};
use tandem_core::saturation::{
    min_proof_length, superpose, verify_derivation, Calculus, LiteralSum, OrderingMode, Prover, RecentFirst, SatConfig,
    SatLimit, SatResult, TermOrder,
};
use tandem_core::tableau::{enumerate_subgoal_clauses, prove, Bound, EnumerateConfig, ProveConfig, ProveResult};

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const BATTERY: [&str; 20] = [
    "nine_step",
    "goal_tree",
    "fifo_chain",
    "nested_equations",
    "congruence_1",
    "congruence_2",
    "pigeonhole_2",
    "two_literal_square",
    "transitivity",
    "unit_trap",
    "complementary_units",
    "mortal",
    "even",
    "four_binary",
    "paths",
    "equal_chain",
    "fixed_point",
    "eight_ternary",
    "dilemma",
    "witness",
];

/// Node budget of the proof-length search in the random suite.
const RANDOM_BUDGET: u64 = 200_000_000;
/// Activation cap separating the two saturation runs of criterion 11.
const CAP_A: usize = 20;
const DISTRACTORS: usize = 32;
const GOAL_DEPTH: usize = 20;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(format!("{name}.p"))
}

fn fixture(name: &str) -> Problem {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_problem(&text).expect("fixture parses")
}

fn clause(s: &str) -> Clause {
    parse_problem(&format!("cnf(c, axiom, ({s}))."))
        .expect("clause parses")
        .clause_list()
        .remove(0)
}

fn clauses(ss: &[&str]) -> Vec<Clause> {
    ss.iter().map(|s| clause(s)).collect()
}

fn same_set(got: &[Clause], want: &[Clause]) -> bool {
    got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| variant_equal(g, w)))
}

fn show(cs: &[Clause]) -> String {
    cs.iter().map(|c| format!("[{c}]")).collect::<Vec<_>>().join(" ")
}

fn subgoal_set(p: &Problem, k: usize, mode: StartMode) -> Vec<Clause> {
    let cfg = EnumerateConfig { k, mode, ..Default::default() };
    let e = enumerate_subgoal_clauses(p, &cfg, &Never);
    assert!(!e.truncated && !e.capped, "enumeration cut short");
    e.records.into_iter().map(|r| r.clause).collect()
}

fn oracle(cs: &[Clause], calculus: Calculus, max_len: usize, budget: u64) -> Result<Option<usize>, String> {
    min_proof_length(cs, calculus, &OrderingMode::None, max_len, budget)
        .map_err(|e| format!("search budget of {} nodes exhausted", e.0))
}

fn union(a: &[Clause], b: &[Clause]) -> Vec<Clause> {
    a.iter().chain(b).cloned().collect()
}

fn c1_open_goal_tree() -> Outcome {
    let p = fixture("goal_tree_open");
    let want = clauses(&["~p1 | ~p2", "~q1 | ~q2"]);
    for mode in [StartMode::Ctc, StartMode::CtcNeg] {
        let got = subgoal_set(&p, 2, mode);
        check!(same_set(&got, &want), "{mode:?}: got {}", show(&got));
    }
    Ok("both start modes give the two clauses".into())
}

fn c2_nine_steps() -> Outcome {
    let p = fixture("nine_step");
    let c = p.clause_list();
    let s = subgoal_set(&p, 2, StartMode::CtcNeg);
    let want = clauses(&["~l2 | l6 | l7", "~l2 | l6 | ~l7", "l1 | ~l3 | ~l4", "~l1 | ~l3 | ~l4", "~l2 | ~l5 | ~l6"]);
    check!(same_set(&s, &want), "subgoal clauses {}", show(&s));
    let n = oracle(&c, Calculus::Resolution, 12, 1_000_000_000)?;
    check!(n == Some(9), "min proof length of C is {n:?}");
    let m = oracle(&union(&c, &s), Calculus::Resolution, 8, 4_000_000_000)?;
    check!(m.is_none(), "C with subgoal clauses refuted in {m:?}");
    Ok("five clauses; 9 steps; nothing within 8 after adding them".into())
}

fn c3_factoring_square() -> Outcome {
    let p = fixture("two_literal_square");
    let c = p.clause_list();
    let n = oracle(&c, Calculus::Resolution, 6, 100_000_000)?;
    check!(n == Some(3), "min proof length of C is {n:?}");
    let s = subgoal_set(&p, 2, StartMode::Ctc);
    let m = oracle(&union(&c, &s), Calculus::Resolution, 2, 100_000_000)?;
    check!(m.is_none(), "C with {} refuted in {m:?}", show(&s));
    Ok(format!("3 steps, still 3 after adding {}", show(&s)))
}

/// Mostly two- and three-literal clauses, so that refutations are not all
/// a unit or two away.
fn ground_set() -> impl Strategy<Value = Vec<Vec<(usize, bool)>>> {
    let lits = |n| {
        prop::collection::vec((0..6usize, any::<bool>()), n).prop_map(|mut v: Vec<(usize, bool)>| {
            v.sort_unstable();
            v.dedup();
            v
        })
    };
    let clause = prop_oneof![1 => lits(1..=1), 6 => lits(2..=3)];
    prop::collection::vec(clause, 4..=8)
}

fn ground_problem(set: &[Vec<(usize, bool)>]) -> Problem {
    let mut text = String::new();
    for (i, c) in set.iter().enumerate() {
        let lits: Vec<String> = c.iter().map(|&(a, pos)| format!("{}l{a}", if pos { "" } else { "~" })).collect();
        text.push_str(&format!("cnf(c{i}, axiom, ({})).\n", lits.join(" | ")));
    }
    parse_problem(&text).expect("generated problem parses")
}

fn c4_random_shortening() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = ground_set();
    let (mut done, mut tries, mut shortest, mut longest) = (0, 0, usize::MAX, 0);
    while done < 50 {
        tries += 1;
        check!(tries < 1_000_000, "only {done} unsatisfiable sets generated");
        let set = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let p = ground_problem(&set);
        let c = p.clause_list();
        // minimally unsatisfiable sets use every clause, which keeps the
        // refutations from collapsing to a pair of complementary units
        let minimal = (0..c.len()).all(|i| satisfiable(&[&c[..i], &c[i + 1..]].concat()));
        if satisfiable(&c) || !minimal {
            continue;
        }
        let n = oracle(&c, Calculus::Resolution, 16, RANDOM_BUDGET)?
            .ok_or_else(|| format!("no refutation of {} within 16", show(&c)))?;
        let s = subgoal_set(&p, 2, StartMode::Ctc);
        let m = oracle(&union(&c, &s), Calculus::Resolution, n - 1, RANDOM_BUDGET)?;
        check!(m.is_some(), "not shortened below {n}: {}", show(&c));
        longest = longest.max(n);
        shortest = shortest.min(n);
        done += 1;
    }
    Ok(format!("50 sets shortened; minimal refutations of {shortest} to {longest} steps"))
}

fn c5_congruence() -> Outcome {
    for (name, k) in [("congruence_1", 2), ("congruence_2", 3)] {
        let p = fixture(name);
        let c = p.clause_list();
        let n = oracle(&c, Calculus::Superposition, 4, 100_000_000)?;
        check!(n == Some(2), "{name}: superposition refutation length {n:?}");
        let s = subgoal_set(&p.with_equality_axioms(), k, StartMode::Ctc);
        let m = oracle(&union(&c, &s), Calculus::Superposition, 1, 100_000_000)?;
        check!(m.is_none(), "{name}: refuted in {m:?} with {}", show(&s));
    }
    Ok("2 inferences, not fewer with subgoal clauses".into())
}

fn c6_activation_trace() -> Outcome {
    let inputs = fixture("fifo_chain").clause_list();
    let cfg = SatConfig { calculus: Calculus::Resolution, ordering: OrderingMode::None };
    let mut prover = Prover::new(&inputs, &cfg, RecentFirst { until: 9 });
    let out = prover.saturate(None, &Never);
    check!(matches!(out.result, SatResult::Refutation(_)), "no refutation: {:?}", out.result);
    let got: Vec<Clause> = prover.trace().iter().map(|&id| prover.clause(id).clause.clone()).collect();
    let want = clauses(&["~a | ~b | c", "~g | b", "~a | ~g | c", "a", "~g | c", "g", "c", "~c", "$false"]);
    check!(
        got.len() == want.len() && got.iter().zip(&want).all(|(g, w)| variant_equal(g, w)),
        "trace {}",
        show(&got)
    );
    Ok("nine activations ending in the empty clause".into())
}

fn c7_trapped_facts() -> Outcome {
    let p = fixture("unit_trap");
    let inputs = p.clause_list();
    let i = 3u64;
    let h = LiteralSum(move |l: &Literal| {
        let size = tandem_core::kernel::literal_measures(l).symbol_count as u64;
        if l.pred.as_str() == "q" {
            2 + i + size
        } else {
            size
        }
    });
    let cfg = SatConfig { calculus: Calculus::Resolution, ordering: OrderingMode::None };
    let mut prover = Prover::new(&inputs, &cfg, h);
    prover.preprocess(i as usize, &Never);
    let facts: Vec<Clause> = prover.facts().into_iter().map(|id| prover.clause(id).clause.clone()).collect();
    check!(!facts.is_empty(), "no facts");
    let q_lits: Vec<&Literal> = inputs.iter().flat_map(|c| c.literals()).filter(|l| l.pred.as_str() == "q").collect();
    for f in &facts {
        let l = &f.literals()[0];
        check!(l.pred.as_str() == "p", "fact {f} has top symbol {}", l.pred.as_str());
        for q in &q_lits {
            let c = q.complement();
            check!(c.positive != l.positive || unify(l, &c).is_none(), "fact {f} meets {q}");
        }
    }
    Ok(format!("{} facts, all p-atoms: {}", facts.len(), show(&facts)))
}

fn c8_nested_equations() -> Outcome {
    let got = superpose(&clause("h(b) = f(b)"), &clause("f(f(X)) = g(X)"), &TermOrder::new(&OrderingMode::None));
    let want = [clause("f(h(b)) = g(b)"), clause("g(b) = f(h(b))")];
    check!(got.iter().any(|g| want.iter().any(|w| variant_equal(g, w))), "superposition gave {}", show(&got));
    let p = me_problem(&fixture("nested_equations"), &[]);
    let cfg = ProveConfig { bound: Bound::Inference, max_resource: 6, ..prove_config(&CooperationConfig::default()) };
    let out = prove(&p, &cfg, &Never);
    let ProveResult::Closed(proof) = out.result else {
        return Err(format!("not closed: {:?}", out.result));
    };
    check!(proof.resource <= 6, "closed at resource {}", proof.resource);
    proof.replay(&p.clause_list())?;
    Ok(format!("one superposition step; tableau closed at inference resource {}", proof.resource))
}

fn small_ground_problem() -> impl Strategy<Value = Vec<Vec<(usize, bool)>>> {
    let clause = prop::collection::btree_set((0..5usize, any::<bool>()), 1..=3).prop_map(|s| s.into_iter().collect());
    prop::collection::vec(clause, 2..=7)
}

fn small_ground_text(set: &[Vec<(usize, bool)>]) -> String {
    const ATOMS: [&str; 5] = ["p", "q", "r(a)", "r(b)", "s(a, b)"];
    let mut text = String::new();
    for (i, c) in set.iter().enumerate() {
        let lits: Vec<String> = c.iter().map(|&(a, pos)| format!("{}{}", if pos { "" } else { "~" }, ATOMS[a])).collect();
        let role = if c.iter().all(|&(_, pos)| !pos) { "negated_conjecture" } else { "axiom" };
        text.push_str(&format!("cnf(c{i}, {role}, ({})).\n", lits.join(" | ")));
    }
    text
}

fn c9_soundness() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = small_ground_problem();
    let mut cfg = CooperationConfig { activations: 100, ..Default::default() };
    cfg.weights.k = 4;
    let (mut subgoals, mut lemmas) = (0, 0);
    for _ in 0..100 {
        let set = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let p = parse_problem(&small_ground_text(&set)).map_err(|e| e.to_string())?;
        let c = p.clause_list();
        let e = generate_subgoals(&cfg, &p, &Never);
        for r in &e.records {
            check!(entails(&c, &r.clause), "subgoal clause {} not entailed by {}", r.clause, show(&c));
        }
        subgoals += e.records.len();
        let mut prover = new_prover(&cfg, &p, &c);
        prover.preprocess(cfg.activations, &Never);
        let pool: Vec<Clause> = e.records.iter().map(|r| r.clause.clone()).collect();
        let (facts, chosen) = choose_lemmas(&cfg, &p, &prover, &pool);
        for l in &chosen {
            let f = &facts[l.index].fact;
            check!(entails(&c, f), "lemma {f} not entailed by {}", show(&c));
        }
        lemmas += chosen.len();
    }
    Ok(format!("{subgoals} subgoal clauses and {lemmas} lemmas entailed"))
}

fn c10_battery() -> Outcome {
    let cap = 100_000;
    let cfg = CooperationConfig { me_max_work: Some(cap), ..Default::default() };
    let (mut me_max, mut sat_max) = (0, 0);
    for name in BATTERY {
        let p = fixture(name);
        let mp = me_problem(&p, &[]);
        match run_me(&cfg, &mp, &Never) {
            Attempt::Proved { proof, work } => {
                check!(work <= cap, "{name}: ME used {work} inferences");
                proof.replay(&mp.clause_list()).map_err(|e| format!("{name}: {e}"))?;
                me_max = me_max.max(work);
            }
            Attempt::Failed { status, .. } => return Err(format!("{name}: ME {status}")),
        }
        let inputs = p.clause_list();
        let mut prover = new_prover(&cfg, &p, &inputs);
        let out = prover.saturate(Some(cap as usize), &Never);
        let SatResult::Refutation(d) = out.result else {
            return Err(format!("{name}: SAT {:?}", out.result));
        };
        check!(out.generated as u64 <= cap, "{name}: SAT generated {} clauses", out.generated);
        verify_derivation(&inputs, &d, &sat_config(&cfg, &p)).map_err(|e| format!("{name}: {e}"))?;
        sat_max = sat_max.max(out.generated as u64);
    }
    Ok(format!("20 refuted by both; most ME inferences {me_max}, most SAT inferences {sat_max}"))
}

/// A cycle of light binary distractors before a goal that needs a heavy
/// ground term, which the tableau reaches in three inferences.
fn buried_goal(n: usize, depth: usize) -> String {
    let mut s = String::new();
    for i in 0..n {
        s.push_str(&format!("cnf(d{i}, axiom, (e{i} | ~e{})).\n", (i + 1) % n));
    }
    let mut t = "a".to_string();
    for _ in 0..depth {
        t = format!("f({t})");
    }
    s.push_str(&format!("cnf(goal, negated_conjecture, (~g({t}))).\n"));
    s.push_str(&format!("cnf(rule, axiom, (g({t}) | ~h)).\n"));
    s.push_str("cnf(fact, axiom, (h)).\n");
    s
}

fn c11_cooperation() -> Outcome {
    let p = parse_problem(&buried_goal(DISTRACTORS, GOAL_DEPTH)).map_err(|e| e.to_string())?;
    let mut cfg = CooperationConfig { variant: Variant::One, deterministic: true, ..Default::default() };
    cfg.weights.k = 2;
    let Attempt::Proved { proof, .. } = run_me(&cfg, &me_problem(&p, &[]), &Never) else {
        return Err("ME found no proof".into());
    };
    check!(proof.inferences() == 3, "ME proof has {} inferences", proof.inferences());
    let e = generate_subgoals(&cfg, &p, &Never);
    let td: Vec<Clause> = transfer(&cfg, &p, &e).into_iter().map(|i| e.records[i].clause.clone()).collect();
    check!(!td.is_empty(), "nothing transferred");
    let alone = new_prover(&cfg, &p, &p.clause_list()).saturate(Some(CAP_A), &Never);
    check!(
        alone.result == SatResult::LimitReached(SatLimit::Activations),
        "standalone saturation: {:?} after {}",
        alone.result,
        alone.activations
    );
    let unlimited = new_prover(&cfg, &p, &p.clause_list()).saturate(None, &Never);
    let with = new_prover(&cfg, &p, &sat_inputs(&p, &td)).saturate(Some(CAP_A), &Never);
    check!(matches!(with.result, SatResult::Refutation(_)), "with transferred subgoals: {:?}", with.result);
    cfg.sat_max_activations = Some(CAP_A);
    let run = run_pipeline_detailed(&cfg, "buried_goal", &p);
    check!(run.race.sat.is_proved(), "pipeline SAT side: {}", run.race.sat.describe());
    Ok(format!(
        "cap {CAP_A}: alone {} activations uncapped, with {} {} activations",
        unlimited.activations,
        show(&td),
        with.activations
    ))
}

fn c12_determinism() -> Outcome {
    let mut names: Vec<&str> = BATTERY.to_vec();
    names.push("goal_tree_open");
    let solve = |name: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_tandem"))
            .args(["solve", "--deterministic"])
            .arg(fixture_path(name))
            .output()
            .map_err(|e| e.to_string())?;
        check!(matches!(out.status.code(), Some(0 | 1)), "{name}: exit {:?}", out.status.code());
        check!(!out.stdout.is_empty(), "{name}: empty report");
        Ok(out.stdout)
    };
    for name in &names {
        let a = solve(name)?;
        let b = solve(name)?;
        check!(a == b, "{name}: reports differ");
    }
    Ok(format!("{} problems, identical reports", names.len()))
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { number: 1, name: "open goal tree subgoal clauses", limit: secs(1), run: c1_open_goal_tree },
        Criterion { number: 2, name: "nine-step set", limit: secs(600), run: c2_nine_steps },
        Criterion { number: 3, name: "factoring square", limit: secs(60), run: c3_factoring_square },
        Criterion { number: 4, name: "random ground shortening", limit: secs(600), run: c4_random_shortening },
        Criterion { number: 5, name: "congruence lengths", limit: secs(60), run: c5_congruence },
        Criterion { number: 6, name: "activation trace", limit: secs(1), run: c6_activation_trace },
        Criterion { number: 7, name: "trapped facts", limit: secs(1), run: c7_trapped_facts },
        Criterion { number: 8, name: "nested equations", limit: secs(10), run: c8_nested_equations },
        Criterion { number: 9, name: "soundness of subgoals and lemmas", limit: secs(600), run: c9_soundness },
        Criterion { number: 10, name: "battery refuted by both engines", limit: secs(300), run: c10_battery },
        Criterion { number: 11, name: "cooperation on a buried goal", limit: secs(60), run: c11_cooperation },
        Criterion { number: 12, name: "deterministic reports", limit: secs(600), run: c12_determinism },
    ]
}

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria() {
        if !only.is_empty() && !only.contains(&c.number) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| e.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let (pass, detail) = match result {
            Ok(d) if took <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {} ({detail}) [{:.2}s]",
            c.number,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
