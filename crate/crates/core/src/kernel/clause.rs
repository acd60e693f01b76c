use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::term::{Sym, Term, Var};

/// A possibly negated atom. Equality atoms use the predicate `=`.
///
/// Field order fixes the canonical literal order: polarity (negative
/// first), predicate name, then structural argument order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, pred: &str, args: Vec<Term>) -> Self {
        Literal { positive, pred: Sym::new(pred), args }
    }

    pub fn pos(pred: &str, args: Vec<Term>) -> Self {
        Literal::new(true, pred, args)
    }

    pub fn neg(pred: &str, args: Vec<Term>) -> Self {
        Literal::new(false, pred, args)
    }

    pub fn equality(positive: bool, lhs: Term, rhs: Term) -> Self {
        Literal { positive, pred: Sym::equality(), args: alloc::vec![lhs, rhs] }
    }

    pub fn is_equality(&self) -> bool {
        self.pred.is_equality() && self.args.len() == 2
    }

    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, pred: self.pred.clone(), args: self.args.clone() }
    }

    /// Same predicate and arity, opposite polarity.
    pub fn is_complementary_shape(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.pred == other.pred && self.args.len() == other.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Literal {
        Literal {
            positive: self.positive,
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.map_vars(f)).collect(),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        self.args.iter().for_each(|a| a.for_each_var(f));
    }

    /// The atom viewed as a term (predicate as head symbol).
    pub fn atom_term(&self) -> Term {
        Term::App(self.pred.clone(), self.args.clone())
    }

    pub fn max_var(&self) -> Option<Var> {
        let mut m = None;
        self.for_each_var(&mut |v| m = Some(m.map_or(v, |w: Var| w.max(v))));
        m
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equality() {
            let op = if self.positive { "=" } else { "!=" };
            return write!(f, "{} {} {}", self.args[0], op, self.args[1]);
        }
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", Term::App(self.pred.clone(), self.args.clone()))
    }
}

/// A clause: a duplicate-free, canonically ordered set of literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(mut lits: Vec<Literal>) -> Self {
        lits.sort();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Self {
        Clause { lits: Vec::new() }
    }

    pub fn unit(lit: Literal) -> Self {
        Clause { lits: alloc::vec![lit] }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn into_literals(self) -> Vec<Literal> {
        self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    pub fn is_ground(&self) -> bool {
        self.lits.iter().all(Literal::is_ground)
    }

    pub fn is_negative(&self) -> bool {
        !self.lits.is_empty() && self.lits.iter().all(|l| !l.positive)
    }

    pub fn is_horn(&self) -> bool {
        self.lits.iter().filter(|l| l.positive).count() <= 1
    }

    /// Positive unit clause.
    pub fn is_fact(&self) -> bool {
        self.lits.len() == 1 && self.lits[0].positive
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.iter().filter_map(Literal::max_var).max()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = Vec::new();
        for l in &self.lits {
            l.for_each_var(&mut |v| {
                if !vs.contains(&v) {
                    vs.push(v)
                }
            });
        }
        vs
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Clause {
        Clause::new(self.lits.iter().map(|l| l.map_vars(f)).collect())
    }

    /// Shift every variable by `offset`. Preserves the relative variable
    /// order, so the literal order is unchanged.
    pub fn shifted(&self, offset: Var) -> Clause {
        if offset == 0 {
            return self.clone();
        }
        Clause { lits: self.lits.iter().map(|l| l.map_vars(&mut |v| Term::Var(v + offset))).collect() }
    }

    /// Rename variables to 0.. in order of first occurrence. Iterated to a
    /// fixpoint since renaming can reorder literals.
    pub fn normalized(&self) -> Clause {
        let mut cur = self.clone();
        for _ in 0..4 {
            let mut map: BTreeMap<Var, Var> = BTreeMap::new();
            let next = cur.map_vars(&mut |v| {
                let n = map.len() as Var;
                Term::Var(*map.entry(v).or_insert(n))
            });
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    /// The clause with every variable collapsed to `X0`. Variants share a
    /// skeleton, so it serves as a bucket key for variant lookups.
    pub fn skeleton(&self) -> Vec<Literal> {
        let mut lits: Vec<Literal> = self.lits.iter().map(|l| l.map_vars(&mut |_| Term::Var(0))).collect();
        lits.sort();
        lits
    }

    pub fn without(&self, idx: usize) -> Vec<Literal> {
        self.lits.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, l)| l.clone()).collect()
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Clause::new(iter.into_iter().collect())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
