//! Substitutions, unification (with occurs check) and one-sided matching.
//!
//! Unification runs against any [`Bindings`] store. [`Substitution`] is the
//! persistent map used by the saturation engine and filters; the tableau
//! engine supplies a trail-based store so it can undo bindings cheaply.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::clause::{Clause, Literal};
use super::term::{Term, Var};

/// A store of (possibly triangular) variable bindings.
pub trait Bindings {
    fn lookup(&self, v: Var) -> Option<&Term>;
    fn bind(&mut self, v: Var, t: Term);
}

/// Finite map from variables to terms.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Bindings for Substitution {
    fn lookup(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    fn bind(&mut self, v: Var, t: Term) {
        self.map.insert(v, t);
    }
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Self::new();
        for (v, t) in pairs {
            if t != Term::Var(v) {
                s.map.insert(v, t);
            }
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    /// Resolve triangular bindings so that applying once equals applying
    /// twice, and drop identity bindings.
    pub fn normalize(&self) -> Substitution {
        let mut out = BTreeMap::new();
        for v in self.map.keys() {
            let t = resolve(self, &Term::Var(*v));
            if t != Term::Var(*v) {
                out.insert(*v, t);
            }
        }
        Substitution { map: out }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        t.map_vars(&mut |v| self.map.get(&v).cloned().unwrap_or(Term::Var(v)))
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        l.map_vars(&mut |v| self.map.get(&v).cloned().unwrap_or(Term::Var(v)))
    }

    /// Clause instance, re-deduplicated as a set.
    pub fn apply_clause(&self, c: &Clause) -> Clause {
        if self.map.is_empty() {
            return c.clone();
        }
        c.map_vars(&mut |v| self.map.get(&v).cloned().unwrap_or(Term::Var(v)))
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut map: BTreeMap<Var, Term> = self.map.iter().map(|(v, t)| (*v, other.apply_term(t))).collect();
        for (v, t) in &other.map {
            map.entry(*v).or_insert_with(|| t.clone());
        }
        map.retain(|v, t| *t != Term::Var(*v));
        Substitution { map }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "X{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

/// Follow variable bindings until an unbound variable or an application.
fn walk<'a, B: Bindings>(b: &'a B, mut t: &'a Term) -> &'a Term {
    while let Term::Var(v) = t {
        match b.lookup(*v) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

/// Fully apply the bindings in `b` to `t`.
pub fn resolve<B: Bindings>(b: &B, t: &Term) -> Term {
    match walk(b, t) {
        Term::Var(v) => Term::Var(*v),
        Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| resolve(b, a)).collect()),
    }
}

pub fn resolve_literal<B: Bindings>(b: &B, l: &Literal) -> Literal {
    Literal { positive: l.positive, pred: l.pred.clone(), args: l.args.iter().map(|a| resolve(b, a)).collect() }
}

fn occurs_in<B: Bindings>(b: &B, v: Var, t: &Term) -> bool {
    match walk(b, t) {
        Term::Var(w) => *w == v,
        Term::App(_, args) => args.iter().any(|a| occurs_in(b, v, a)),
    }
}

/// Unify `s` and `t`, extending `b`. On failure `b` may hold partial
/// bindings; callers that need atomicity must snapshot or trail.
pub fn unify_terms_in<B: Bindings>(b: &mut B, s: &Term, t: &Term) -> bool {
    if let Term::Var(x) = s {
        if let Some(bound) = b.lookup(*x) {
            let bound = bound.clone();
            return unify_terms_in(b, &bound, t);
        }
    }
    if let Term::Var(y) = t {
        if let Some(bound) = b.lookup(*y) {
            let bound = bound.clone();
            return unify_terms_in(b, s, &bound);
        }
    }
    match (s, t) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => {
            if occurs_in(b, *x, t) {
                return false;
            }
            b.bind(*x, t.clone());
            true
        }
        (_, Term::Var(y)) => {
            if occurs_in(b, *y, s) {
                return false;
            }
            b.bind(*y, s.clone());
            true
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_terms_in(b, x, y))
        }
    }
}

/// Unify two atoms (polarity ignored).
pub fn unify_atoms_in<B: Bindings>(b: &mut B, l: &Literal, m: &Literal) -> bool {
    l.pred == m.pred
        && l.args.len() == m.args.len()
        && l.args.iter().zip(&m.args).all(|(x, y)| unify_terms_in(b, x, y))
}

/// Values that can be unified and matched structurally.
pub trait Unifiable {
    fn unify_in<B: Bindings>(&self, other: &Self, b: &mut B) -> bool;
    fn match_in(&self, target: &Self, s: &mut Substitution) -> bool;
}

impl Unifiable for Term {
    fn unify_in<B: Bindings>(&self, other: &Self, b: &mut B) -> bool {
        unify_terms_in(b, self, other)
    }

    fn match_in(&self, target: &Self, s: &mut Substitution) -> bool {
        match_terms_in(s, self, target)
    }
}

impl Unifiable for Literal {
    fn unify_in<B: Bindings>(&self, other: &Self, b: &mut B) -> bool {
        unify_atoms_in(b, self, other)
    }

    fn match_in(&self, target: &Self, s: &mut Substitution) -> bool {
        self.pred == target.pred
            && self.args.len() == target.args.len()
            && self.args.iter().zip(&target.args).all(|(p, t)| match_terms_in(s, p, t))
    }
}

/// Most general unifier, idempotent, or `None`.
pub fn unify<T: Unifiable>(s: &T, t: &T) -> Option<Substitution> {
    let mut b = Substitution::new();
    if s.unify_in(t, &mut b) {
        Some(b.normalize())
    } else {
        None
    }
}

/// Simultaneous unifier of all pairs.
pub fn unify_all<'a, T: Unifiable + 'a>(pairs: impl IntoIterator<Item = (&'a T, &'a T)>) -> Option<Substitution> {
    let mut b = Substitution::new();
    for (s, t) in pairs {
        if !s.unify_in(t, &mut b) {
            return None;
        }
    }
    Some(b.normalize())
}

/// One-sided matching: `σ(pattern) = target`; variables of `target` are
/// treated as constants.
pub fn match_terms_in(s: &mut Substitution, pattern: &Term, target: &Term) -> bool {
    match pattern {
        Term::Var(v) => match s.map.get(v) {
            Some(bound) => bound == target,
            None => {
                s.map.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, xs) => match target {
            Term::App(g, ys) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_terms_in(s, x, y))
            }
            Term::Var(_) => false,
        },
    }
}

pub fn matching<T: Unifiable>(pattern: &T, target: &T) -> Option<Substitution> {
    let mut s = Substitution::new();
    if pattern.match_in(target, &mut s) {
        s.map.retain(|v, t| *t != Term::Var(*v));
        Some(s)
    } else {
        None
    }
}

/// Trail-based bindings indexed by variable number.
#[derive(Clone, Default, Debug)]
pub struct TrailBindings {
    slots: Vec<Option<Term>>,
    trail: Vec<Var>,
}

impl Bindings for TrailBindings {
    fn lookup(&self, v: Var) -> Option<&Term> {
        self.slots.get(v as usize).and_then(Option::as_ref)
    }

    fn bind(&mut self, v: Var, t: Term) {
        let i = v as usize;
        if i >= self.slots.len() {
            self.slots.resize(i + 1, None);
        }
        self.slots[i] = Some(t);
        self.trail.push(v);
    }
}

impl TrailBindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail entry");
            self.slots[v as usize] = None;
        }
    }

    /// Bindings made since `mark`, unresolved.
    pub fn since(&self, mark: usize) -> Vec<(Var, Term)> {
        self.trail[mark..]
            .iter()
            .map(|v| (*v, self.slots[*v as usize].clone().expect("trailed var is bound")))
            .collect()
    }

    pub fn to_substitution(&self) -> Substitution {
        let mut s = Substitution::new();
        for (i, t) in self.slots.iter().enumerate() {
            if let Some(t) = t {
                s.bind(i as Var, t.clone());
            }
        }
        s.normalize()
    }
}
