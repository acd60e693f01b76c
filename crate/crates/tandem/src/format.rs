//! The problem file format: `cnf(name, role, (lit | lit ...)).` statements
//! with `%` line comments.

use std::fmt::Write as _;

use tandem_core::kernel::{Clause, Literal, Term};
use tandem_core::problem::{Problem, ProblemClause, Role};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, column: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Position of the next token.
    fn here(&mut self) -> (usize, usize) {
        self.skip_trivia();
        (self.line, self.column)
    }

    fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.pos == self.src.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_trivia();
        self.peek_char()
    }

    fn looking_at(&mut self, s: &str) -> bool {
        self.skip_trivia();
        self.src[self.pos..].starts_with(s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.looking_at(s) {
            for _ in s.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
            Err(self.error(format!("expected `{s}`, found {found}")))
        }
    }

    /// `[A-Za-z0-9_$]+`; the caller checks the leading character.
    fn word(&mut self) -> Result<String, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if c.is_ascii_alphanumeric() || c == '_' || (c == '$' && self.pos == start) {
                self.bump();
            } else {
                break;
            }
        }
        if self.pos == start {
            let found = self.peek_char().map_or("end of input".to_string(), |c| format!("`{c}`"));
            return Err(self.error(format!("expected an identifier, found {found}")));
        }
        Ok(self.src[start..self.pos].to_string())
    }
}

struct Parser<'a> {
    lx: Lexer<'a>,
    vars: Vec<String>,
}

impl Parser<'_> {
    fn term(&mut self) -> Result<Term, ParseError> {
        let (line, column) = self.lx.here();
        let name = self.lx.word()?;
        let first = name.chars().next().expect("nonempty word");
        if first.is_ascii_uppercase() {
            let idx = match self.vars.iter().position(|v| *v == name) {
                Some(i) => i,
                None => {
                    self.vars.push(name);
                    self.vars.len() - 1
                }
            };
            return Ok(Term::Var(idx as u32));
        }
        if !first.is_ascii_lowercase() {
            return Err(ParseError { line, column, message: format!("`{name}` is not a valid identifier") });
        }
        let mut args = Vec::new();
        if self.lx.eat("(") {
            loop {
                args.push(self.term()?);
                if self.lx.eat(")") {
                    break;
                }
                self.lx.expect(",")?;
            }
        }
        Ok(Term::app(&name, args))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = self.lx.eat("~");
        let (line, column) = self.lx.here();
        let lhs = self.term()?;
        let lit = if self.lx.eat("!=") {
            Literal::equality(false, lhs, self.term()?)
        } else if self.lx.eat("=") {
            Literal::equality(true, lhs, self.term()?)
        } else {
            match lhs {
                Term::App(p, args) => Literal::new(true, p.as_str(), args),
                Term::Var(_) => {
                    return Err(ParseError { line, column, message: "a variable cannot be an atom".into() });
                }
            }
        };
        Ok(if negated { lit.complement() } else { lit })
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.vars.clear();
        self.lx.expect("(")?;
        let mut lits = Vec::new();
        if !self.lx.eat("$false") {
            loop {
                lits.push(self.literal()?);
                if !self.lx.eat("|") {
                    break;
                }
            }
        }
        self.lx.expect(")")?;
        Ok(Clause::new(lits))
    }

    fn statement(&mut self) -> Result<ProblemClause, ParseError> {
        let kw = self.lx.word()?;
        if kw != "cnf" {
            return Err(self.lx.error(format!("expected `cnf`, found `{kw}`")));
        }
        self.lx.expect("(")?;
        let name = self.lx.word()?;
        self.lx.expect(",")?;
        let (line, column) = self.lx.here();
        let role = match self.lx.word()?.as_str() {
            "axiom" => Role::Axiom,
            "hypothesis" => Role::Hypothesis,
            "negated_conjecture" => Role::Goal,
            other => return Err(ParseError { line, column, message: format!("unknown role `{other}`") }),
        };
        self.lx.expect(",")?;
        let clause = self.clause()?;
        self.lx.expect(")")?;
        self.lx.expect(".")?;
        Ok(ProblemClause::new(name, role, clause))
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut p = Parser { lx: Lexer::new(text), vars: Vec::new() };
    let mut problem = Problem::default();
    while !p.lx.at_end() {
        let (line, column) = p.lx.here();
        let c = p.statement()?;
        problem.push(c).map_err(|e| ParseError { line, column, message: e.to_string() })?;
    }
    Ok(problem)
}

/// One statement per line, variables written `X0, X1, ...`; the empty
/// clause is written `$false`.
pub fn serialize(p: &Problem) -> String {
    let mut out = String::new();
    for c in p.clauses() {
        writeln!(out, "cnf({}, {}, ({})).", c.name, c.role.as_str(), c.clause).expect("writing to a string");
    }
    out
}
