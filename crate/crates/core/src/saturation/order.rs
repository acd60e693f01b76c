//! Lexicographic path ordering over a symbol precedence.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::kernel::{Clause, Literal, Sym, Term};

/// The ordering that restricts inferences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum OrderingMode {
    /// The empty ordering: nothing is greater than anything else.
    #[default]
    None,
    /// LPO over the given precedence, later symbols bigger. Symbols not
    /// listed sit below every listed one, ordered by name.
    Precedence(Vec<Sym>),
}

/// A compiled [`OrderingMode`].
#[derive(Clone, Debug, Default)]
pub struct TermOrder {
    rank: Option<BTreeMap<Sym, usize>>,
}

impl TermOrder {
    pub fn new(mode: &OrderingMode) -> Self {
        match mode {
            OrderingMode::None => TermOrder { rank: None },
            OrderingMode::Precedence(p) => {
                TermOrder { rank: Some(p.iter().enumerate().map(|(i, s)| (s.clone(), i + 1)).collect()) }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_none()
    }

    fn prec_cmp(rank: &BTreeMap<Sym, usize>, f: &Sym, fa: usize, g: &Sym, ga: usize) -> core::cmp::Ordering {
        let rf = rank.get(f).copied().unwrap_or(0);
        let rg = rank.get(g).copied().unwrap_or(0);
        rf.cmp(&rg).then_with(|| f.as_str().cmp(g.as_str())).then(fa.cmp(&ga))
    }

    /// `s ≻ t`.
    pub fn gt(&self, s: &Term, t: &Term) -> bool {
        match &self.rank {
            None => false,
            Some(rank) => lpo(rank, s, t),
        }
    }

    /// Literal order: atoms by LPO, a negative literal above the positive
    /// one on the same atom.
    pub fn gt_literal(&self, l: &Literal, m: &Literal) -> bool {
        if self.rank.is_none() {
            return false;
        }
        if l.pred == m.pred && l.args == m.args {
            return !l.positive && m.positive;
        }
        self.gt(&l.atom_term(), &m.atom_term())
    }

    /// Literals of `c` not below any other literal of `c`.
    pub fn maximal(&self, c: &Clause) -> Vec<bool> {
        let lits = c.literals();
        lits.iter()
            .enumerate()
            .map(|(i, l)| !lits.iter().enumerate().any(|(j, m)| i != j && self.gt_literal(m, l)))
            .collect()
    }
}

fn lpo(rank: &BTreeMap<Sym, usize>, s: &Term, t: &Term) -> bool {
    let Term::App(f, ss) = s else { return false };
    if ss.iter().any(|si| si == t || lpo(rank, si, t)) {
        return true;
    }
    let Term::App(g, ts) = t else { return false };
    match TermOrder::prec_cmp(rank, f, ss.len(), g, ts.len()) {
        core::cmp::Ordering::Greater => ts.iter().all(|tj| lpo(rank, s, tj)),
        core::cmp::Ordering::Equal => {
            let Some(i) = ss.iter().zip(ts).position(|(a, b)| a != b) else { return false };
            lpo(rank, &ss[i], &ts[i]) && ts[i + 1..].iter().all(|tj| lpo(rank, s, tj))
        }
        core::cmp::Ordering::Less => false,
    }
}
