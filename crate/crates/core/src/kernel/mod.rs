//! Terms, literals, clauses and the operations every calculus shares.

mod clause;
mod subst;
mod term;

pub use clause::{Clause, Literal};
pub use subst::{
    matching, resolve, resolve_literal, unify, unify_all, unify_atoms_in, unify_terms_in, Bindings,
    Substitution, TrailBindings, Unifiable,
};
pub use term::{Sym, Term, Var, EQUALITY};

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;

/// Rename `c` so it shares no variable with `used`.
///
/// Renaming shifts every variable past the largest used one, which keeps
/// the literal order stable and makes the renaming injective.
pub fn rename_apart(c: &Clause, used: &BTreeSet<Var>) -> Clause {
    match used.iter().next_back() {
        Some(&max) if c.vars().iter().any(|v| used.contains(v)) => c.shifted(max + 1),
        _ => c.clone(),
    }
}

/// True iff an injective variable renaming maps `c` onto `d`.
pub fn variant_equal(c: &Clause, d: &Clause) -> bool {
    if c.len() != d.len() {
        return false;
    }
    if c == d {
        return true;
    }
    let mut used = alloc::vec![false; d.len()];
    variant_search(c.literals(), d.literals(), &mut used, &mut BTreeMap::new(), &mut BTreeMap::new())
}

fn variant_search(
    rest: &[Literal],
    target: &[Literal],
    used: &mut [bool],
    fwd: &mut BTreeMap<Var, Var>,
    back: &mut BTreeMap<Var, Var>,
) -> bool {
    let Some((lit, rest)) = rest.split_first() else {
        return true;
    };
    for i in 0..target.len() {
        if used[i] || target[i].positive != lit.positive || target[i].pred != lit.pred {
            continue;
        }
        let (mut f2, mut b2) = (fwd.clone(), back.clone());
        let ok = lit.args.len() == target[i].args.len()
            && lit.args.iter().zip(&target[i].args).all(|(x, y)| rename_match(x, y, &mut f2, &mut b2));
        if ok {
            used[i] = true;
            if variant_search(rest, target, used, &mut f2, &mut b2) {
                return true;
            }
            used[i] = false;
        }
    }
    false
}

fn rename_match(x: &Term, y: &Term, fwd: &mut BTreeMap<Var, Var>, back: &mut BTreeMap<Var, Var>) -> bool {
    match (x, y) {
        (Term::Var(a), Term::Var(b)) => {
            match (fwd.get(a), back.get(b)) {
                (Some(b2), _) if b2 != b => return false,
                (_, Some(a2)) if a2 != a => return false,
                _ => {}
            }
            fwd.insert(*a, *b);
            back.insert(*b, *a);
            true
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| rename_match(x, y, fwd, back))
        }
        _ => false,
    }
}

/// Multiset subsumption: some σ maps the literals of `c` injectively into
/// `d`. Injectivity keeps a clause from subsuming its own factors.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    // Target variables are rigid; rename the pattern apart so the two
    // variable sets cannot be confused.
    let c = match d.max_var() {
        Some(m) => c.shifted(m + 1),
        None => c.clone(),
    };
    let mut used = alloc::vec![false; d.len()];
    subsume_search(c.literals(), d.literals(), &mut used, &Substitution::new())
}

fn subsume_search(rest: &[Literal], target: &[Literal], used: &mut [bool], sigma: &Substitution) -> bool {
    let Some((lit, rest)) = rest.split_first() else {
        return true;
    };
    for i in 0..target.len() {
        if used[i] || target[i].positive != lit.positive {
            continue;
        }
        let mut s = sigma.clone();
        if lit.match_in(&target[i], &mut s) {
            used[i] = true;
            if subsume_search(rest, target, used, &s) {
                return true;
            }
            used[i] = false;
        }
    }
    false
}

/// Complementary pair or a positive `t = t`.
pub fn is_tautology(c: &Clause) -> bool {
    let lits = c.literals();
    lits.iter().any(|l| l.positive && l.is_equality() && l.args[0] == l.args[1])
        || lits.iter().enumerate().any(|(i, l)| {
            lits[i + 1..].iter().any(|m| m.positive != l.positive && m.pred == l.pred && m.args == l.args)
        })
}

/// Syntactic size measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Measures {
    /// Every symbol occurrence, variables and the predicate included; the
    /// negation sign is not a symbol.
    pub symbol_count: usize,
    pub var_occurrences: usize,
    pub distinct_vars: usize,
    /// A literal `p(t…)` has depth `1 + max depth(t)`.
    pub max_depth: usize,
}

impl Measures {
    pub fn function_symbols(&self) -> usize {
        self.symbol_count - self.var_occurrences
    }
}

pub fn literal_measures(l: &Literal) -> Measures {
    let mut vars = BTreeSet::new();
    let mut occ = 0;
    l.for_each_var(&mut |v| {
        occ += 1;
        vars.insert(v);
    });
    Measures {
        symbol_count: 1 + l.args.iter().map(Term::size).sum::<usize>(),
        var_occurrences: occ,
        distinct_vars: vars.len(),
        max_depth: 1 + l.args.iter().map(Term::depth).max().unwrap_or(0),
    }
}

pub fn clause_measures(c: &Clause) -> Measures {
    let mut vars = BTreeSet::new();
    let mut m = Measures::default();
    for l in c.literals() {
        let lm = literal_measures(l);
        m.symbol_count += lm.symbol_count;
        m.var_occurrences += lm.var_occurrences;
        m.max_depth = m.max_depth.max(lm.max_depth);
        l.for_each_var(&mut |v| {
            vars.insert(v);
        });
    }
    m.distinct_vars = vars.len();
    m
}

#[cfg(test)]
mod tests;
