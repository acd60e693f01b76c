//! Propositional oracle for ground clause sets: a small DPLL procedure,
//! plus helpers that ground non-ground clauses over a finite term set and
//! instantiate the equality axioms on ground terms.
//!
//! Atoms are opaque; `s = t` is just another atom unless the caller adds
//! [`ground_equality_instances`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::kernel::{Clause, Literal, Substitution, Term, Var};

/// Satisfiability of a set of ground clauses.
///
/// # Panics
/// If a clause is not ground.
pub fn satisfiable(clauses: &[Clause]) -> bool {
    let mut atoms: BTreeMap<Literal, i32> = BTreeMap::new();
    let mut cnf: Vec<Vec<i32>> = Vec::with_capacity(clauses.len());
    for c in clauses {
        assert!(c.is_ground(), "oracle needs ground clauses: {c}");
        let mut row = Vec::with_capacity(c.len());
        for l in c.literals() {
            let key = if l.positive { l.clone() } else { l.complement() };
            let n = atoms.len() as i32 + 1;
            let id = *atoms.entry(key).or_insert(n);
            row.push(if l.positive { id } else { -id });
        }
        cnf.push(row);
    }
    let mut assign = alloc::vec![0i8; atoms.len() + 1];
    dpll(&cnf, &mut assign)
}

/// `premises ⊨ conclusion` for ground clauses.
pub fn entails(premises: &[Clause], conclusion: &Clause) -> bool {
    let mut set: Vec<Clause> = premises.to_vec();
    set.extend(conclusion.literals().iter().map(|l| Clause::unit(l.complement())));
    !satisfiable(&set)
}

fn value(assign: &[i8], lit: i32) -> i8 {
    let v = assign[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

fn dpll(cnf: &[Vec<i32>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    // unit propagation to fixpoint
    loop {
        let mut unit = None;
        for c in cnf {
            let mut open = None;
            let mut open_count = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        open_count += 1;
                        open = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            match open_count {
                0 => {
                    undo(assign, &trail);
                    return false;
                }
                1 => {
                    unit = open;
                    break;
                }
                _ => {}
            }
        }
        match unit {
            Some(l) => {
                assign[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
                trail.push(l.unsigned_abs() as usize);
            }
            None => break,
        }
    }
    let branch = (1..assign.len()).find(|&v| assign[v] == 0);
    let ok = match branch {
        None => true,
        Some(v) => {
            assign[v] = 1;
            if dpll(cnf, assign) {
                true
            } else {
                assign[v] = -1;
                let r = dpll(cnf, assign);
                if !r {
                    assign[v] = 0;
                }
                r
            }
        }
    };
    if !ok {
        undo(assign, &trail);
    }
    ok
}

fn undo(assign: &mut [i8], trail: &[usize]) {
    for &v in trail {
        assign[v] = 0;
    }
}

/// Every ground instance of `clauses` whose variables range over `terms`.
pub fn ground_instances(clauses: &[Clause], terms: &[Term]) -> Vec<Clause> {
    let mut out = BTreeSet::new();
    for c in clauses {
        let vars = c.vars();
        if vars.is_empty() {
            out.insert(c.clone());
            continue;
        }
        if terms.is_empty() {
            continue;
        }
        let mut idx = alloc::vec![0usize; vars.len()];
        loop {
            let s = Substitution::from_pairs(vars.iter().zip(&idx).map(|(v, &i)| (*v, terms[i].clone())));
            out.insert(s.apply_clause(c));
            if !advance(&mut idx, terms.len()) {
                break;
            }
        }
    }
    out.into_iter().collect()
}

/// Odometer step over `base`-ary digits; false after the last tuple.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Ground terms of depth ≤ `depth` over the function symbols of `clauses`
/// (a constant `c0` is added when there is none).
pub fn herbrand_terms(clauses: &[Clause], depth: usize) -> Vec<Term> {
    let mut fns: BTreeSet<(crate::kernel::Sym, usize)> = BTreeSet::new();
    for c in clauses {
        for l in c.literals() {
            for a in &l.args {
                a.for_each_fn(&mut |f, n| {
                    fns.insert((f.clone(), n));
                });
            }
        }
    }
    let mut level: BTreeSet<Term> = fns.iter().filter(|(_, n)| *n == 0).map(|(f, _)| Term::App(f.clone(), Vec::new())).collect();
    if level.is_empty() {
        level.insert(Term::constant("c0"));
    }
    for _ in 1..depth {
        let cur: Vec<Term> = level.iter().cloned().collect();
        for (f, n) in fns.iter().filter(|(_, n)| *n > 0) {
            let mut idx = alloc::vec![0usize; *n];
            loop {
                level.insert(Term::App(f.clone(), idx.iter().map(|&i| cur[i].clone()).collect()));
                if !advance(&mut idx, cur.len()) {
                    break;
                }
            }
        }
    }
    level.into_iter().collect()
}

/// Instances of the equality axioms over the ground terms and atoms that
/// occur in `clauses`: reflexivity, symmetry and transitivity on every
/// subterm, and congruence between occurring applications.
pub fn ground_equality_instances(clauses: &[Clause]) -> Vec<Clause> {
    let mut terms: BTreeSet<Term> = BTreeSet::new();
    let mut atoms: BTreeSet<Literal> = BTreeSet::new();
    for c in clauses {
        for l in c.literals() {
            for a in &l.args {
                collect_subterms(a, &mut terms);
            }
            if !l.is_equality() {
                atoms.insert(if l.positive { l.clone() } else { l.complement() });
            }
        }
    }
    let terms: Vec<Term> = terms.into_iter().collect();
    let eq = |p: bool, a: &Term, b: &Term| Literal::equality(p, a.clone(), b.clone());
    let mut out = Vec::new();
    for s in &terms {
        out.push(Clause::unit(eq(true, s, s)));
        for t in &terms {
            out.push(Clause::new(alloc::vec![eq(false, s, t), eq(true, t, s)]));
            for u in &terms {
                out.push(Clause::new(alloc::vec![eq(false, s, t), eq(false, t, u), eq(true, s, u)]));
            }
        }
    }
    // congruence: f(…s…) = f(…t…) whenever both occur and differ in one place
    for x in &terms {
        for y in &terms {
            if let (Term::App(f, xs), Term::App(g, ys)) = (x, y) {
                if f == g && xs.len() == ys.len() && x != y {
                    if let Some(i) = single_difference(xs, ys) {
                        out.push(Clause::new(alloc::vec![eq(false, &xs[i], &ys[i]), eq(true, x, y)]));
                    }
                }
            }
        }
    }
    for a in &atoms {
        for b in &atoms {
            if a.pred == b.pred && a != b {
                if let Some(i) = single_difference(&a.args, &b.args) {
                    out.push(Clause::new(alloc::vec![eq(false, &a.args[i], &b.args[i]), a.complement(), b.clone()]));
                }
            }
        }
    }
    out
}

fn single_difference(xs: &[Term], ys: &[Term]) -> Option<usize> {
    let diffs: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] != ys[i]).collect();
    (diffs.len() == 1).then(|| diffs[0])
}

fn collect_subterms(t: &Term, out: &mut BTreeSet<Term>) {
    if !t.is_ground() {
        return;
    }
    if out.insert(t.clone()) {
        if let Term::App(_, args) = t {
            for a in args {
                collect_subterms(a, out);
            }
        }
    }
}

/// Variables of a clause set, for callers that need to ground it.
pub fn clause_vars(clauses: &[Clause]) -> BTreeSet<Var> {
    clauses.iter().flat_map(|c| c.vars()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{clause, clauses};

    #[test]
    fn propositional_cases() {
        assert!(!satisfiable(&clauses(&["p", "~p"])));
        assert!(satisfiable(&clauses(&["p | q", "~p"])));
        assert!(!satisfiable(&[Clause::empty()]));
        assert!(satisfiable(&[]));
        assert!(entails(&clauses(&["p | q", "~q"]), &clause("p")));
        assert!(!entails(&clauses(&["p | q"]), &clause("p")));
    }

    #[test]
    fn pigeonhole_three_two() {
        let php = clauses(&[
            "p11 | p12", "p21 | p22", "p31 | p32",
            "~p11 | ~p21", "~p11 | ~p31", "~p21 | ~p31",
            "~p12 | ~p22", "~p12 | ~p32", "~p22 | ~p32",
        ]);
        assert!(!satisfiable(&php));
        assert!(satisfiable(&php[1..]));
    }

    #[test]
    fn grounding_over_terms() {
        let cs = clauses(&["p(a)", "~p(X) | p(f(X))", "~p(f(f(a)))"]);
        let terms = herbrand_terms(&cs, 3);
        assert_eq!(terms.len(), 3);
        assert!(!satisfiable(&ground_instances(&cs, &terms)));
    }

    #[test]
    fn equality_instances_make_congruence_visible() {
        let cs = clauses(&["a = b", "f(a) != f(b)"]);
        assert!(satisfiable(&cs));
        let mut with_eq = cs.clone();
        with_eq.extend(ground_equality_instances(&cs));
        assert!(!satisfiable(&with_eq));
    }

    // Brute-force cross-check of DPLL against truth tables.
    proptest::proptest! {
        #[test]
        fn dpll_agrees_with_truth_tables(rows in proptest::collection::vec(
            proptest::collection::vec((0usize..4, proptest::bool::ANY), 1..4), 0..9)) {
            let names = ["a", "b", "c", "d"];
            let cs: Vec<Clause> = rows.iter().map(|r| {
                r.iter().map(|&(v, pos)| Literal::new(pos, names[v], Vec::new())).collect()
            }).collect();
            let brute = (0u32..16).any(|m| rows.iter().all(|r| r.iter().any(|&(v, pos)| ((m >> v) & 1 == 1) == pos)));
            proptest::prop_assert_eq!(satisfiable(&cs), brute);
        }
    }
}
