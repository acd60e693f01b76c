//! Expansion rules. Premises are renamed apart internally; conclusions come
//! back normalized.

use alloc::vec::Vec;

use super::order::TermOrder;
use crate::kernel::{unify, variant_equal, Clause, Literal, Substitution, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Calculus {
    /// Binary resolution and factoring on literals of either sign.
    Resolution,
    /// Resolution on non-equality literals, positive factoring,
    /// superposition, equality resolution and equality factoring.
    #[default]
    Superposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Input,
    Resolution,
    Factoring,
    Superposition,
    EqualityResolution,
    EqualityFactoring,
    Rewriting,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Input => "input",
            Rule::Resolution => "resolution",
            Rule::Factoring => "factoring",
            Rule::Superposition => "superposition",
            Rule::EqualityResolution => "equality_resolution",
            Rule::EqualityFactoring => "equality_factoring",
            Rule::Rewriting => "rewriting",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        [
            Rule::Input,
            Rule::Resolution,
            Rule::Factoring,
            Rule::Superposition,
            Rule::EqualityResolution,
            Rule::EqualityFactoring,
            Rule::Rewriting,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
    }

    pub fn is_expansion(self) -> bool {
        !matches!(self, Rule::Input | Rule::Rewriting)
    }
}

/// `d` with its variables moved above those of `c`.
fn apart(c: &Clause, d: &Clause) -> Clause {
    d.shifted(c.max_var().map_or(0, |m| m + 1))
}

/// Whether `σ(lits[i])` is maximal among `σ(lits)`.
fn maximal_after(ord: &TermOrder, lits: &[Literal], i: usize, s: &Substitution) -> bool {
    if ord.is_empty() {
        return true;
    }
    let li = s.apply_literal(&lits[i]);
    lits.iter().enumerate().all(|(j, m)| j == i || !ord.gt_literal(&s.apply_literal(m), &li))
}

fn conclusion(s: &Substitution, lits: impl IntoIterator<Item = Literal>) -> Clause {
    Clause::new(lits.into_iter().map(|l| s.apply_literal(&l)).collect()).normalized()
}

fn push_new(out: &mut Vec<Clause>, c: Clause) {
    if !out.iter().any(|d| variant_equal(d, &c)) {
        out.push(c);
    }
}

/// Binary resolvents on every unifiable complementary pair; under an
/// ordering only on literals maximal after unification.
pub fn resolve(c: &Clause, d: &Clause, ord: &TermOrder) -> Vec<Clause> {
    resolve_on(c, d, ord, true)
}

pub(crate) fn resolve_on(c: &Clause, d: &Clause, ord: &TermOrder, equality: bool) -> Vec<Clause> {
    let d = apart(c, d);
    let (cl, dl) = (c.literals(), d.literals());
    let mut out = Vec::new();
    for (i, l) in cl.iter().enumerate() {
        if !equality && l.is_equality() {
            continue;
        }
        for (j, m) in dl.iter().enumerate() {
            if !l.is_complementary_shape(m) {
                continue;
            }
            let Some(s) = unify(l, m) else { continue };
            if !maximal_after(ord, cl, i, &s) || !maximal_after(ord, dl, j, &s) {
                continue;
            }
            push_new(&mut out, conclusion(&s, c.without(i).into_iter().chain(d.without(j))));
        }
    }
    out
}

/// Binary factors. The superposition calculus factors positive literals
/// only.
pub fn factor(c: &Clause, calculus: Calculus, ord: &TermOrder) -> Vec<Clause> {
    let lits = c.literals();
    let mut out = Vec::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            let (l, m) = (&lits[i], &lits[j]);
            if l.positive != m.positive || (calculus == Calculus::Superposition && !l.positive) {
                continue;
            }
            let Some(s) = unify(l, m) else { continue };
            if !maximal_after(ord, lits, i, &s) {
                continue;
            }
            push_new(&mut out, conclusion(&s, c.without(j)));
        }
    }
    out
}

/// Orientations `(s, t)` of the equality `l`, read as `s → t`.
fn sides(l: &Literal) -> [(&Term, &Term); 2] {
    [(&l.args[0], &l.args[1]), (&l.args[1], &l.args[0])]
}

/// Superposition from the positive equalities of `c` into non-variable
/// subterms of the literals of `d`.
pub fn superpose(c: &Clause, d: &Clause, ord: &TermOrder) -> Vec<Clause> {
    let d = apart(c, d);
    let (cl, dl) = (c.literals(), d.literals());
    let mut out = Vec::new();
    for (i, eq) in cl.iter().enumerate() {
        if !(eq.positive && eq.is_equality()) {
            continue;
        }
        for (s, t) in sides(eq) {
            for (j, target) in dl.iter().enumerate() {
                for (a, arg) in target.args.iter().enumerate() {
                    for path in arg.non_var_positions() {
                        let u = arg.at(&path).expect("position exists");
                        let Some(sub) = unify(s, u) else { continue };
                        let (ss, st) = (sub.apply_term(s), sub.apply_term(t));
                        if ss == st || ord.gt(&st, &ss) {
                            continue;
                        }
                        if !maximal_after(ord, cl, i, &sub) {
                            continue;
                        }
                        let mut rewritten = target.clone();
                        rewritten.args[a] = arg.replace_at(&path, t);
                        let lits = c.without(i).into_iter().chain(d.without(j)).chain(core::iter::once(rewritten));
                        push_new(&mut out, conclusion(&sub, lits));
                    }
                }
            }
        }
    }
    out
}

/// `C ∨ s ≠ t` gives `σ(C)` for `σ = mgu(s, t)`.
pub fn equality_resolve(c: &Clause) -> Vec<Clause> {
    let mut out = Vec::new();
    for (i, l) in c.literals().iter().enumerate() {
        if l.positive || !l.is_equality() {
            continue;
        }
        if let Some(s) = unify(&l.args[0], &l.args[1]) {
            push_new(&mut out, conclusion(&s, c.without(i)));
        }
    }
    out
}

/// `C ∨ s = t ∨ s' = t'` gives `σ(C ∨ t ≠ t' ∨ s' = t')` for
/// `σ = mgu(s, s')`, with `s = t` read in either direction.
pub fn equality_factor(c: &Clause, ord: &TermOrder) -> Vec<Clause> {
    let lits = c.literals();
    let mut out = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        if !(l.positive && l.is_equality()) {
            continue;
        }
        for (j, m) in lits.iter().enumerate() {
            if i == j || !(m.positive && m.is_equality()) {
                continue;
            }
            for (s, t) in sides(l) {
                let (s2, t2) = (&m.args[0], &m.args[1]);
                let Some(sub) = unify(s, s2) else { continue };
                let (ss, st) = (sub.apply_term(s), sub.apply_term(t));
                if ord.gt(&st, &ss) || !maximal_after(ord, lits, i, &sub) {
                    continue;
                }
                let rest = lits.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, x)| x.clone());
                let lits = rest.chain([Literal::equality(false, t.clone(), t2.clone()), m.clone()]);
                push_new(&mut out, conclusion(&sub, lits));
            }
        }
    }
    out
}

/// Every binary conclusion between `c` and `d` (either may be the
/// equation or the target of superposition).
pub fn binary(calculus: Calculus, ord: &TermOrder, c: &Clause, d: &Clause) -> Vec<(Rule, Clause)> {
    let mut out: Vec<(Rule, Clause)> = Vec::new();
    match calculus {
        Calculus::Resolution => {
            out.extend(resolve_on(c, d, ord, true).into_iter().map(|x| (Rule::Resolution, x)));
        }
        Calculus::Superposition => {
            out.extend(resolve_on(c, d, ord, false).into_iter().map(|x| (Rule::Resolution, x)));
            for x in superpose(c, d, ord).into_iter().chain(superpose(d, c, ord)) {
                if !out.iter().any(|(r, y)| *r == Rule::Superposition && variant_equal(y, &x)) {
                    out.push((Rule::Superposition, x));
                }
            }
        }
    }
    out
}

/// Every unary conclusion of `c`.
pub fn unary(calculus: Calculus, ord: &TermOrder, c: &Clause) -> Vec<(Rule, Clause)> {
    let mut out: Vec<(Rule, Clause)> = factor(c, calculus, ord).into_iter().map(|x| (Rule::Factoring, x)).collect();
    if calculus == Calculus::Superposition {
        out.extend(equality_resolve(c).into_iter().map(|x| (Rule::EqualityResolution, x)));
        out.extend(equality_factor(c, ord).into_iter().map(|x| (Rule::EqualityFactoring, x)));
    }
    out
}
