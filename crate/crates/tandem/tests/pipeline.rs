use std::path::PathBuf;
use std::time::Duration;

use proptest::prelude::*;

use tandem::config::{CooperationConfig, Sync, Variant};
use tandem::parse_problem;
use tandem::pipeline::{run_pipeline, run_pipeline_detailed, sat_config, PipelineRun};
use tandem::race::{Finish, Side};
use tandem::report::{Outcome, Winner};
use tandem_core::entail::satisfiable;
use tandem_core::problem::Problem;
use tandem_core::saturation::verify_derivation;

fn fixture(name: &str) -> Problem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(format!("{name}.p"));
    parse_problem(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn deterministic() -> CooperationConfig {
    CooperationConfig { deterministic: true, ..Default::default() }
}

fn check_proofs(run: &PipelineRun, p: &Problem, cfg: &CooperationConfig) {
    if let Finish::Proved { proof, .. } = &run.race.me {
        proof.replay(&run.me_problem.clause_list()).unwrap();
    }
    if let Finish::Proved { proof, .. } = &run.race.sat {
        verify_derivation(&run.sat_inputs, proof, &sat_config(cfg, p)).unwrap();
    }
}

const QUICK: [&str; 12] = [
    "nine_step",
    "goal_tree",
    "fifo_chain",
    "nested_equations",
    "pigeonhole_2",
    "two_literal_square",
    "transitivity",
    "unit_trap",
    "complementary_units",
    "mortal",
    "four_binary",
    "eight_ternary",
];

#[test]
fn winners_replay() {
    let cfg = deterministic();
    for name in QUICK {
        let p = fixture(name);
        let run = run_pipeline_detailed(&cfg, name, &p);
        assert_eq!(run.report.result, Outcome::Unsat, "{name}");
        let proof = run.report.proof.as_ref().unwrap();
        assert_eq!(proof.engine, run.report.winner);
        assert!(!proof.steps.is_empty());
        match run.race.winner {
            Some(Side::Me) => assert!(run.race.me.is_proved()),
            Some(Side::Sat) => assert!(run.race.sat.is_proved()),
            None => panic!("{name}: no winner"),
        }
        check_proofs(&run, &p, &cfg);
    }
}

#[test]
fn inputs_of_both_engines_are_equisatisfiable_on_fixtures() {
    let cfg = deterministic();
    for name in ["nine_step", "goal_tree", "goal_tree_open", "fifo_chain", "pigeonhole_2", "four_binary", "eight_ternary"] {
        let p = fixture(name);
        let run = run_pipeline_detailed(&cfg, name, &p);
        let sat = satisfiable(&p.clause_list());
        assert_eq!(satisfiable(&run.me_problem.clause_list()), sat, "{name}");
        assert_eq!(satisfiable(&run.sat_inputs), sat, "{name}");
    }
}

#[test]
fn an_open_problem_is_exhausted() {
    let cfg = CooperationConfig { max_resource: 8, ..deterministic() };
    let report = run_pipeline(&cfg, "open", &fixture("goal_tree_open"));
    assert_eq!(report.result, Outcome::Exhausted);
    assert_eq!(report.winner, Winner::None);
    assert!(report.proof.is_none() && report.resource.is_none());
}

#[test]
fn a_zero_timeout_reports_timeout() {
    for deterministic in [true, false] {
        let cfg = CooperationConfig { timeout: Duration::ZERO, deterministic, ..Default::default() };
        let report = run_pipeline(&cfg, "nine_step", &fixture("nine_step"));
        assert_eq!(report.result, Outcome::Timeout);
    }
}

#[test]
fn threaded_runs_agree_with_deterministic_ones() {
    for sync in [Sync::Fixed, Sync::UntilTopDown] {
        for variant in [Variant::One, Variant::Two] {
            let cfg = CooperationConfig { sync, variant, ..Default::default() };
            for name in ["nine_step", "pigeonhole_2", "mortal"] {
                let p = fixture(name);
                let run = run_pipeline_detailed(&cfg, name, &p);
                assert_eq!(run.report.result, Outcome::Unsat, "{name} {sync:?} {variant:?}");
                check_proofs(&run, &p, &cfg);
            }
            let open = run_pipeline(&CooperationConfig { max_resource: 8, ..cfg.clone() }, "open", &fixture("goal_tree_open"));
            assert_eq!(open.result, Outcome::Exhausted);
        }
    }
}

#[test]
fn deterministic_reports_zero_timings() {
    let report = run_pipeline(&deterministic(), "fifo_chain", &fixture("fifo_chain"));
    assert_eq!(report.wall_ms, 0);
    assert_eq!(report.phases, Default::default());
}

fn ground_text() -> impl Strategy<Value = String> {
    const ATOMS: [&str; 4] = ["p", "q", "r(a)", "r(b)"];
    let lit = (0..4usize, any::<bool>());
    let clause = prop::collection::vec(lit, 1..=3);
    prop::collection::vec(clause, 1..=6).prop_map(|cs| {
        let mut text = String::new();
        for (i, c) in cs.iter().enumerate() {
            let lits: Vec<String> = c.iter().map(|&(a, pos)| format!("{}{}", if pos { "" } else { "~" }, ATOMS[a])).collect();
            let role = if c.iter().all(|&(_, pos)| !pos) { "negated_conjecture" } else { "axiom" };
            text.push_str(&format!("cnf(c{i}, {role}, ({})).\n", lits.join(" | ")));
        }
        text
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pipeline_preserves_satisfiability(text in ground_text()) {
        let p = parse_problem(&text).unwrap();
        let cfg = CooperationConfig { activations: 50, max_resource: 10, ..deterministic() };
        let run = run_pipeline_detailed(&cfg, "random", &p);
        let sat = satisfiable(&p.clause_list());
        prop_assert_eq!(satisfiable(&run.me_problem.clause_list()), sat);
        prop_assert_eq!(satisfiable(&run.sat_inputs), sat);
        // ground problems are decided: a proof exactly when unsatisfiable
        prop_assert_eq!(run.report.result == Outcome::Unsat, !sat);
        check_proofs(&run, &p, &cfg);
    }
}
