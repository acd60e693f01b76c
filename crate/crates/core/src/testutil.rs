//! Compact clause notation for unit tests: `"~p(X,f(a)) | q(Y)"`,
//! `"f(X) = a"`, `"a != b"`. Uppercase identifiers are variables, numbered
//! per call in order of first appearance.

use alloc::string::String;
use alloc::vec::Vec;

use crate::kernel::{Clause, Literal, Term};

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<String>,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        assert!(self.pos > start, "identifier expected at {}", self.pos);
        String::from(core::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn term(&mut self) -> Term {
        let name = self.ident();
        if name.as_bytes()[0].is_ascii_uppercase() {
            let idx = match self.vars.iter().position(|v| *v == name) {
                Some(i) => i,
                None => {
                    self.vars.push(name);
                    self.vars.len() - 1
                }
            };
            return Term::Var(idx as u32);
        }
        let mut args = Vec::new();
        if self.eat("(") {
            loop {
                args.push(self.term());
                if self.eat(")") {
                    break;
                }
                assert!(self.eat(","), "',' expected");
            }
        }
        Term::app(&name, args)
    }

    fn literal(&mut self) -> Literal {
        let negated = self.eat("~");
        let lhs = self.term();
        let lit = if self.eat("!=") {
            Literal::equality(false, lhs, self.term())
        } else if self.eat("=") {
            Literal::equality(true, lhs, self.term())
        } else {
            match lhs {
                Term::App(p, args) => Literal::new(true, p.as_str(), args),
                Term::Var(_) => panic!("variable as atom"),
            }
        };
        if negated {
            lit.complement()
        } else {
            lit
        }
    }
}

pub fn lit(s: &str) -> Literal {
    Reader { src: s.as_bytes(), pos: 0, vars: Vec::new() }.literal()
}

pub fn term(s: &str) -> Term {
    Reader { src: s.as_bytes(), pos: 0, vars: Vec::new() }.term()
}

pub fn clause(s: &str) -> Clause {
    let mut r = Reader { src: s.as_bytes(), pos: 0, vars: Vec::new() };
    if r.eat("$false") {
        return Clause::empty();
    }
    let mut lits = alloc::vec![r.literal()];
    while r.peek() == Some(b'|') {
        r.pos += 1;
        lits.push(r.literal());
    }
    Clause::new(lits)
}

pub fn clauses(items: &[&str]) -> Vec<Clause> {
    items.iter().map(|s| clause(s)).collect()
}

/// Pair of terms sharing one variable numbering.
pub fn term_pair(a: &str, b: &str) -> (Term, Term) {
    let joined = alloc::format!("w({a},{b})");
    match term(&joined) {
        Term::App(_, mut args) => {
            let y = args.pop().unwrap();
            let x = args.pop().unwrap();
            (x, y)
        }
        Term::Var(_) => unreachable!(),
    }
}

pub fn problem(items: &[&str]) -> crate::problem::Problem {
    crate::problem::Problem::from_clauses(clauses(items)).expect("consistent signature")
}

/// The nine ground clauses of the proof-length counterexample for negative
/// start clauses.
pub const NINE_STEP: [&str; 9] = [
    "l4 | l6 | l7",
    "l4 | l6 | ~l7",
    "l3 | ~l4",
    "l3 | ~l6",
    "~l2 | ~l4",
    "l4 | ~l5 | ~l6",
    "~l2 | l5",
    "l1 | l2 | ~l3",
    "~l1 | l2 | ~l3",
];
