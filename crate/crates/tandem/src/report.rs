//! The pipeline report and its JSON and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Unsat,
    Timeout,
    Exhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Me,
    Sat,
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phases {
    pub td_preprocess_ms: u64,
    pub bu_preprocess_ms: u64,
    pub filter_ms: u64,
    pub race_ms: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub subgoal_candidates: usize,
    pub transferred_subgoals: usize,
    pub facts: usize,
    pub lemmas: usize,
}

/// A winning proof: the engine and its steps, one per line of text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofText {
    pub engine: Winner,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub problem: String,
    pub result: Outcome,
    pub winner: Winner,
    pub wall_ms: u64,
    pub phases: Phases,
    pub counts: Counts,
    /// ME: resource of the closing round; SAT: activations.
    pub resource: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<ProofText>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

fn word<T: Serialize>(v: T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("reports serialize") + "\n",
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "problem: {}", r.problem);
            let _ = writeln!(s, "result: {}", word(r.result));
            let _ = writeln!(s, "winner: {}", word(r.winner));
            let _ = writeln!(s, "wall: {} ms", r.wall_ms);
            let p = &r.phases;
            let _ = writeln!(
                s,
                "phases: td_preprocess {} ms, bu_preprocess {} ms, filter {} ms, race {} ms",
                p.td_preprocess_ms, p.bu_preprocess_ms, p.filter_ms, p.race_ms
            );
            let c = &r.counts;
            let _ = writeln!(s, "subgoal candidates: {}", c.subgoal_candidates);
            let _ = writeln!(s, "transferred subgoals: {}", c.transferred_subgoals);
            let _ = writeln!(s, "facts: {}", c.facts);
            let _ = writeln!(s, "lemmas: {}", c.lemmas);
            match r.resource {
                Some(n) => {
                    let _ = writeln!(s, "resource: {n}");
                }
                None => s.push_str("resource: -\n"),
            }
            if let Some(proof) = &r.proof {
                let _ = writeln!(s, "proof ({}):", word(proof.engine));
                for step in &proof.steps {
                    let _ = writeln!(s, "  {step}");
                }
            }
            s
        }
    }
}
