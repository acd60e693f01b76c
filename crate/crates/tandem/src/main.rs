use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::AtomicBool;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tandem::config::CooperationConfig;
use tandem::parse_problem;
use tandem::pipeline::{
    choose_lemmas, generate_subgoals, ordering_mode, me_problem, me_proof_lines, new_prover, run_me, run_pipeline, run_sat,
    sat_proof_lines, transfer,
};
use tandem::race::{Attempt, Stop};
use tandem::report::{emit_report, Format, Outcome};
use tandem_core::kernel::Clause;
use tandem_core::problem::Problem;
use tandem_core::saturation::{min_proof_length, Calculus};

#[derive(Parser)]
#[command(name = "tandem", version, about = "Cooperating connection-tableau and saturation provers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full cooperation pipeline.
    Solve { file: PathBuf },
    /// Run the connection-tableau engine alone.
    Me { file: PathBuf },
    /// Run the saturation engine alone.
    Sat { file: PathBuf },
    /// Generate subgoal clauses and show the transferred ones.
    Subgoals { file: PathBuf },
    /// Preprocess bottom-up and show the selected lemmas.
    Lemmas { file: PathBuf },
    /// Minimal refutation length by exhaustive search.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
        #[arg(long, default_value = "resolution", value_parser = ["resolution", "superposition"])]
        calculus: String,
    },
}

#[derive(Args)]
struct Flags {
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    variant: Option<String>,
    #[arg(long, global = true)]
    bound: Option<String>,
    #[arg(long, global = true)]
    resource: Option<usize>,
    #[arg(long, global = true)]
    step: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    nsg: Option<usize>,
    #[arg(long, global = true)]
    k1: Option<usize>,
    #[arg(long, global = true)]
    k2: Option<usize>,
    #[arg(long, global = true)]
    nref: Option<usize>,
    #[arg(long, global = true)]
    max_subgoals: Option<usize>,
    #[arg(long, global = true)]
    lemmas_per_filter: Option<usize>,
    #[arg(long, global = true)]
    activations: Option<usize>,
    #[arg(long, global = true)]
    ordering: Option<String>,
    /// Seconds; 0 stops at once.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    #[arg(long, global = true)]
    deterministic: bool,
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    /// File of `key = value` lines mirroring these flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn build(&self) -> Result<CooperationConfig> {
        let mut cfg = CooperationConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.apply_file(&text).with_context(|| format!("in {}", path.display()))?;
        }
        let strings = [
            ("mode", self.mode.clone()),
            ("variant", self.variant.clone()),
            ("bound", self.bound.clone()),
            ("ordering", self.ordering.clone()),
        ];
        let numbers = [
            ("resource", self.resource),
            ("step", self.step),
            ("k", self.k),
            ("nsg", self.nsg),
            ("k1", self.k1),
            ("k2", self.k2),
            ("nref", self.nref),
            ("max-subgoals", self.max_subgoals),
            ("lemmas-per-filter", self.lemmas_per_filter),
            ("activations", self.activations),
        ];
        for (key, value) in strings {
            if let Some(v) = value {
                cfg.apply(key, &v)?;
            }
        }
        for (key, value) in numbers {
            if let Some(v) = value {
                cfg.apply(key, &v.to_string())?;
            }
        }
        if let Some(t) = self.timeout {
            cfg.apply("timeout", &t.to_string())?;
        }
        if self.deterministic {
            cfg.deterministic = true;
        }
        if let Some(f) = self.output {
            cfg.output = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load(path: &Path) -> Result<(String, Problem)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let problem = parse_problem(&text).with_context(|| format!("parsing {}", path.display()))?;
    let name = path.file_stem().map_or_else(|| "problem".to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, problem))
}

fn print(cfg: &CooperationConfig, value: serde_json::Value, text: impl FnOnce() -> String) {
    match cfg.output {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize")),
        Format::Text => print!("{}", text()),
    }
}

fn lines(clauses: &[Clause]) -> Vec<String> {
    clauses.iter().map(ToString::to_string).collect()
}

fn engine_report<T>(
    cfg: &CooperationConfig,
    name: &str,
    attempt: Attempt<T>,
    resource: impl Fn(&T) -> u64,
    steps: impl Fn(&T) -> Vec<String>,
) -> u8 {
    match attempt {
        Attempt::Proved { proof, work } => {
            let steps = steps(&proof);
            let r = resource(&proof);
            let v = json!({ "problem": name, "result": "unsat", "work": work, "resource": r, "proof": steps });
            print(cfg, v, || format!("{name}: unsat after {work} work units (resource {r})\n  {}\n", steps.join("\n  ")));
            0
        }
        Attempt::Failed { status, interrupted } => {
            let result = if interrupted { "timeout" } else { "exhausted" };
            let v = json!({ "problem": name, "result": result, "status": status });
            print(cfg, v, || format!("{name}: {result} ({status})\n"));
            1
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = cli.flags.build()?;
    let flag = AtomicBool::new(false);
    let stop = Stop::new(&flag, Instant::now().checked_add(cfg.timeout));
    match cli.command {
        Command::Solve { file } => {
            let (name, p) = load(&file)?;
            let report = run_pipeline(&cfg, &name, &p);
            print!("{}", emit_report(&report, cfg.output));
            Ok(if report.result == Outcome::Unsat { 0 } else { 1 })
        }
        Command::Me { file } => {
            let (name, p) = load(&file)?;
            let p = me_problem(&p, &[]);
            let inputs = p.clause_list();
            let attempt = run_me(&cfg, &p, &stop);
            Ok(engine_report(&cfg, &name, attempt, |t| t.resource as u64, |t| me_proof_lines(&inputs, t)))
        }
        Command::Sat { file } => {
            let (name, p) = load(&file)?;
            let attempt = run_sat(&cfg, &p, &p.clause_list(), &stop);
            let activations = match &attempt {
                Attempt::Proved { work, .. } => *work,
                _ => 0,
            };
            Ok(engine_report(&cfg, &name, attempt, |_| activations, sat_proof_lines))
        }
        Command::Subgoals { file } => {
            let (name, p) = load(&file)?;
            let e = generate_subgoals(&cfg, &p, &stop);
            let picked: Vec<Clause> = transfer(&cfg, &p, &e).into_iter().map(|i| e.records[i].clause.clone()).collect();
            let v = json!({
                "problem": name,
                "candidates": e.records.len(),
                "proof_found": e.proof_found,
                "truncated": e.truncated,
                "transferred": lines(&picked),
            });
            print(&cfg, v, || {
                let mut s = format!("{name}: {} candidates, {} transferred\n", e.records.len(), picked.len());
                for c in &picked {
                    s.push_str(&format!("  {c}\n"));
                }
                s
            });
            Ok(0)
        }
        Command::Lemmas { file } => {
            let (name, p) = load(&file)?;
            let e = generate_subgoals(&cfg, &p, &stop);
            let mut prover = new_prover(&cfg, &p, &p.clause_list());
            prover.preprocess(cfg.activations, &stop);
            let pool: Vec<Clause> = e.records.iter().map(|r| r.clause.clone()).collect();
            let (facts, chosen) = choose_lemmas(&cfg, &p, &prover, &pool);
            let rows: Vec<serde_json::Value> = chosen
                .iter()
                .map(|s| {
                    let picks: Vec<serde_json::Value> =
                        s.picks.iter().map(|(f, score)| json!({ "filter": f.as_str(), "score": score })).collect();
                    json!({ "lemma": facts[s.index].fact.to_string(), "picks": picks })
                })
                .collect();
            let v = json!({ "problem": name, "facts": facts.len(), "lemmas": rows });
            print(&cfg, v, || {
                let mut s = format!("{name}: {} facts, {} lemmas\n", facts.len(), chosen.len());
                for l in &chosen {
                    let by: Vec<&str> = l.picks.iter().map(|(f, _)| f.as_str()).collect();
                    s.push_str(&format!("  {} [{}]\n", facts[l.index].fact, by.join(", ")));
                }
                s
            });
            Ok(0)
        }
        Command::Oracle { file, max_len, budget, calculus } => {
            let (name, p) = load(&file)?;
            let calculus = if calculus == "resolution" { Calculus::Resolution } else { Calculus::Superposition };
            let ordering = ordering_mode(&cfg, &p);
            let n = match min_proof_length(&p.clause_list(), calculus, &ordering, max_len, budget) {
                Ok(n) => n,
                Err(e) => {
                    let v = json!({ "problem": name, "max_len": max_len, "budget_exhausted": e.0 });
                    print(&cfg, v, || format!("{name}: search budget of {} nodes exhausted\n", e.0));
                    return Ok(1);
                }
            };
            let v = json!({ "problem": name, "max_len": max_len, "min_proof_length": n });
            print(&cfg, v, || match n {
                Some(n) => format!("{name}: shortest refutation has {n} inferences\n"),
                None => format!("{name}: no refutation within {max_len} inferences\n"),
            });
            Ok(if n.is_some() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
