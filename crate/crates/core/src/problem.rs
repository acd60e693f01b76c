//! Clause sets with roles, signature checks, equality axioms and start
//! clause selection.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::kernel::{Clause, Literal, Sym, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Axiom,
    Hypothesis,
    /// A negated conjecture.
    Goal,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Goal => "negated_conjecture",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Function,
    Predicate,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: Sym,
    pub arity: usize,
    pub kind: SymbolKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemClause {
    pub name: String,
    pub role: Role,
    pub clause: Clause,
}

impl ProblemClause {
    pub fn new(name: impl Into<String>, role: Role, clause: Clause) -> Self {
        ProblemClause { name: name.into(), role, clause }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("symbol `{symbol}` used with arity {first} and {second}")]
    Arity { symbol: String, first: usize, second: usize },
    #[error("equality needs exactly two arguments")]
    EqualityArity,
}

/// Which clauses may start a tableau.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StartMode {
    /// Every input clause.
    Ctc,
    /// Negative clauses and clauses whose role is goal.
    #[default]
    CtcNeg,
}

/// Start clauses chosen by [`Problem::goal_clauses`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalSelection {
    /// Indices into the problem's clause list, in input order.
    pub indices: Vec<usize>,
    /// Set in `CtcNeg` mode when the problem has no negative clause.
    pub no_negative_clause: bool,
}

/// A clause set with a consistent signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Problem {
    clauses: Vec<ProblemClause>,
    /// Symbols in order of first occurrence.
    signature: Vec<Symbol>,
    has_equality: bool,
}

impl Problem {
    pub fn new(clauses: Vec<ProblemClause>) -> Result<Self, ProblemError> {
        let mut p = Problem { clauses: Vec::new(), signature: Vec::new(), has_equality: false };
        for c in clauses {
            p.push(c)?;
        }
        Ok(p)
    }

    /// Unnamed axioms `c1, c2, …`; negative clauses get no special role.
    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> Result<Self, ProblemError> {
        Problem::new(
            clauses
                .into_iter()
                .enumerate()
                .map(|(i, c)| ProblemClause::new(format!("c{}", i + 1), Role::Axiom, c))
                .collect(),
        )
    }

    pub fn push(&mut self, c: ProblemClause) -> Result<(), ProblemError> {
        let mut sig = self.signature.clone();
        let mut eq = self.has_equality;
        for l in c.clause.literals() {
            if l.pred.is_equality() {
                if l.args.len() != 2 {
                    return Err(ProblemError::EqualityArity);
                }
                eq = true;
            } else {
                note_symbol(&mut sig, &l.pred, l.args.len(), SymbolKind::Predicate)?;
            }
            for a in &l.args {
                note_term(&mut sig, a)?;
            }
        }
        self.signature = sig;
        self.has_equality = eq;
        self.clauses.push(c);
        Ok(())
    }

    /// A copy with `extra` appended under the given role and name prefix.
    pub fn extended(&self, extra: &[Clause], role: Role, prefix: &str) -> Result<Problem, ProblemError> {
        let mut p = self.clone();
        for (i, c) in extra.iter().enumerate() {
            p.push(ProblemClause::new(format!("{prefix}{}", i + 1), role, c.clone()))?;
        }
        Ok(p)
    }

    pub fn clauses(&self) -> &[ProblemClause] {
        &self.clauses
    }

    pub fn clause_list(&self) -> Vec<Clause> {
        self.clauses.iter().map(|c| c.clause.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn signature(&self) -> &[Symbol] {
        &self.signature
    }

    pub fn has_equality(&self) -> bool {
        self.has_equality
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(|c| c.clause.is_horn())
    }

    pub fn unit_clauses(&self) -> Vec<Clause> {
        self.clauses.iter().filter(|c| c.clause.is_unit()).map(|c| c.clause.clone()).collect()
    }

    /// Start clauses for the tableau engine.
    pub fn goal_clauses(&self, mode: StartMode) -> GoalSelection {
        match mode {
            StartMode::Ctc => GoalSelection { indices: (0..self.clauses.len()).collect(), no_negative_clause: false },
            StartMode::CtcNeg => {
                let indices: Vec<usize> = (0..self.clauses.len())
                    .filter(|&i| self.clauses[i].clause.is_negative() || self.clauses[i].role == Role::Goal)
                    .collect();
                let no_negative = !self.clauses.iter().any(|c| c.clause.is_negative());
                GoalSelection { indices, no_negative_clause: no_negative }
            }
        }
    }

    /// Append reflexivity, symmetry, transitivity and one substitution
    /// axiom per argument position of every function and predicate symbol.
    /// No-op without equality.
    pub fn with_equality_axioms(&self) -> Problem {
        if !self.has_equality {
            return self.clone();
        }
        let mut p = self.clone();
        for (name, c) in equality_axioms(&self.signature) {
            p.push(ProblemClause::new(name, Role::Axiom, c)).expect("equality axioms respect the signature");
        }
        p
    }
}

/// The equality axioms for `signature`, named `eq_*`.
pub fn equality_axioms(signature: &[Symbol]) -> Vec<(String, Clause)> {
    let v = |i: Var| Term::Var(i);
    let eq = |pos: bool, a: Term, b: Term| Literal::equality(pos, a, b);
    let mut out = alloc::vec![
        ("eq_refl".to_string(), Clause::unit(eq(true, v(0), v(0)))),
        ("eq_sym".to_string(), Clause::new(alloc::vec![eq(false, v(0), v(1)), eq(true, v(1), v(0))])),
        (
            "eq_trans".to_string(),
            Clause::new(alloc::vec![eq(false, v(0), v(1)), eq(false, v(1), v(2)), eq(true, v(0), v(2))]),
        ),
    ];
    for s in signature {
        for pos in 0..s.arity {
            // x = X0, y = X1, the other arguments X2…
            let args = |hole: Term| -> Vec<Term> {
                (0..s.arity).map(|j| if j == pos { hole.clone() } else { v(2 + j as Var) }).collect()
            };
            let premise = eq(false, v(0), v(1));
            let (name, c) = match s.kind {
                SymbolKind::Function => (
                    format!("eq_subst_{}_{}", s.name, pos + 1),
                    Clause::new(alloc::vec![
                        premise,
                        eq(true, Term::App(s.name.clone(), args(v(0))), Term::App(s.name.clone(), args(v(1)))),
                    ]),
                ),
                SymbolKind::Predicate => (
                    format!("eq_subst_{}_{}", s.name, pos + 1),
                    Clause::new(alloc::vec![
                        premise,
                        Literal { positive: false, pred: s.name.clone(), args: args(v(0)) },
                        Literal { positive: true, pred: s.name.clone(), args: args(v(1)) },
                    ]),
                ),
            };
            out.push((name, c));
        }
    }
    out
}

fn note_symbol(sig: &mut Vec<Symbol>, name: &Sym, arity: usize, kind: SymbolKind) -> Result<(), ProblemError> {
    match sig.iter().find(|s| s.name == *name && s.kind == kind) {
        Some(s) if s.arity != arity => {
            Err(ProblemError::Arity { symbol: name.as_str().to_string(), first: s.arity, second: arity })
        }
        Some(_) => Ok(()),
        None => {
            sig.push(Symbol { name: name.clone(), arity, kind });
            Ok(())
        }
    }
}

fn note_term(sig: &mut Vec<Symbol>, t: &Term) -> Result<(), ProblemError> {
    if let Term::App(f, args) = t {
        note_symbol(sig, f, args.len(), SymbolKind::Function)?;
        for a in args {
            note_term(sig, a)?;
        }
    }
    Ok(())
}

/// Symbol name → rank by first occurrence, predicates and functions in one
/// sequence.
pub fn occurrence_rank(signature: &[Symbol]) -> BTreeMap<Sym, usize> {
    let mut m = BTreeMap::new();
    for s in signature {
        let n = m.len();
        m.entry(s.name.clone()).or_insert(n);
    }
    m
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{} [{}]: {}", c.name, c.role.as_str(), c.clause)?;
        }
        Ok(())
    }
}
