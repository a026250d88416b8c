//! Surface syntax for types, terms and formulas.
//!
//! ```text
//! type    ::= prod ('->' type)?
//! prod    ::= Nat | Unit | '(' type ')' ('*' prod)?
//! term    ::= '\' x ':' type '.' term | 'if' term 'then' term 'else' term | app
//! app     ::= ('S' | 'fst' | 'snd') atom | atom atom*
//! atom    ::= x | numeral | 'R[' type ']' | '<' term ',' term '>' | '()' | '(' term ')'
//!           | '?(' formula ')' | '{' n, ... '}' | '@' name
//! formula ::= ('forall' | 'exists') x (':' type)? (',' ...)* '.' formula | imp
//! imp     ::= or ('->' imp)?
//! or      ::= and ('\/' and)*
//! and     ::= unary ('/\' unary)*
//! unary   ::= '~' unary | 'bot' | 'bot[' term ']' | P '(' term, ... ')' | term '=' term | '(' formula ')'
//! ```
//!
//! Free variables of a formula default to `Nat`; free variables of a term
//! must come from the supplied context.

use thiserror::Error;

use crate::kernel::{SimpleType, Term, TypingContext};
use crate::logic::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse_type(text: &str) -> Result<SimpleType, ParseError> {
    let mut p = Parser::new(text, false)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term whose free variables are typed by `ctx`.
pub fn parse_term(text: &str, ctx: &TypingContext) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, false)?;
    p.ctx = ctx.iter().map(|(n, t)| (n.to_string(), t.clone())).collect();
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_closed_term(text: &str) -> Result<Term, ParseError> {
    parse_term(text, &TypingContext::new())
}

/// Parses a formula; unknown variables are taken to be free and of type `Nat`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_in(text, &TypingContext::new())
}

pub fn parse_formula_in(text: &str, ctx: &TypingContext) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, true)?;
    p.ctx = ctx.iter().map(|(n, t)| (n.to_string(), t.clone())).collect();
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

const KEYWORDS: &[&str] = &[
    "if", "then", "else", "fst", "snd", "S", "R", "forall", "exists", "bot", "Nat", "Unit",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
    Eof,
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<(String, SimpleType)>,
    ctx: Vec<(String, SimpleType)>,
    free_nat: bool,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |&(o, _)| o);
            let n = src[off..end]
                .parse::<u64>()
                .map_err(|_| (off, "numeral out of range".to_string()))?;
            out.push((Tok::Num(n), off));
            i = j;
            continue;
        }
        if c == 'λ' {
            out.push((Tok::Sym("\\"), off));
            i += 1;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |&(o, _)| o);
            let word = &src[off..end];
            let tok = match word {
                "ℕ" => Tok::Ident("Nat".into()),
                _ => Tok::Ident(word.to_string()),
            };
            out.push((tok, off));
            i = j;
            continue;
        }
        let (sym, width): (&'static str, usize) = match (c, next) {
            ('-', Some('>')) => ("->", 2),
            ('\\', Some('/')) => ("\\/", 2),
            ('/', Some('\\')) => ("/\\", 2),
            ('\\', _) => ("\\", 1),
            ('→', _) => ("->", 1),
            ('∧', _) => ("/\\", 1),
            ('∨', _) => ("\\/", 1),
            ('¬', _) => ("~", 1),
            ('~', _) => ("~", 1),
            ('×', _) | ('*', _) => ("*", 1),
            (':', _) => (":", 1),
            ('.', _) => (".", 1),
            (',', _) => (",", 1),
            ('(', _) => ("(", 1),
            (')', _) => (")", 1),
            ('<', _) | ('⟨', _) => ("<", 1),
            ('>', _) | ('⟩', _) => (">", 1),
            ('[', _) => ("[", 1),
            (']', _) => ("]", 1),
            ('{', _) => ("{", 1),
            ('}', _) => ("}", 1),
            ('?', _) => ("?", 1),
            ('@', _) => ("@", 1),
            ('=', _) => ("=", 1),
            ('∀', _) => {
                out.push((Tok::Ident("forall".into()), off));
                i += 1;
                continue;
            }
            ('∃', _) => {
                out.push((Tok::Ident("exists".into()), off));
                i += 1;
                continue;
            }
            ('⊥', _) => {
                out.push((Tok::Ident("bot".into()), off));
                i += 1;
                continue;
            }
            _ => return Err((off, format!("unexpected character `{c}`"))),
        };
        out.push((Tok::Sym(sym), off));
        i += width;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

impl<'s> Parser<'s> {
    fn new(src: &'s str, free_nat: bool) -> Result<Self, ParseError> {
        let toks = lex(src).map_err(|(off, msg)| make_error(src, off, msg))?;
        Ok(Parser {
            src,
            toks,
            pos: 0,
            scope: Vec::new(),
            ctx: Vec::new(),
            free_nat,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(make_error(self.src, self.toks[self.pos].1, msg.into()))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", describe(self.peek())))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), ParseError> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", describe(self.peek())))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.err(format!("unexpected {} after end of input", describe(t))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) if !KEYWORDS.contains(&x.as_str()) => {
                self.bump();
                Ok(x)
            }
            t => self.err(format!("expected an identifier, found {}", describe(&t))),
        }
    }

    fn lookup(&self, x: &str) -> Option<SimpleType> {
        self.scope
            .iter()
            .rev()
            .chain(self.ctx.iter())
            .find(|(n, _)| n == x)
            .map(|(_, t)| t.clone())
    }

    // Types.

    fn ty(&mut self) -> Result<SimpleType, ParseError> {
        let left = self.prod_ty()?;
        if self.is_sym("->") {
            self.bump();
            let right = self.ty()?;
            return Ok(SimpleType::arrow(left, right));
        }
        Ok(left)
    }

    fn prod_ty(&mut self) -> Result<SimpleType, ParseError> {
        let left = match self.bump() {
            Tok::Ident(k) if k == "Nat" => SimpleType::Nat,
            Tok::Ident(k) if k == "Unit" => SimpleType::Unit,
            Tok::Sym("(") => {
                let t = self.ty()?;
                self.expect_sym(")")?;
                t
            }
            t => {
                self.pos -= 1;
                return self.err(format!("expected a type, found {}", describe(&t)));
            }
        };
        if self.is_sym("*") {
            self.bump();
            let right = self.prod_ty()?;
            return Ok(SimpleType::product(left, right));
        }
        Ok(left)
    }

    // Terms.

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.is_sym("\\") {
            self.bump();
            let x = self.ident()?;
            self.expect_sym(":")?;
            let ty = self.ty()?;
            self.expect_sym(".")?;
            self.scope.push((x.clone(), ty.clone()));
            let body = self.term();
            self.scope.pop();
            return Ok(Term::lam(x, ty, body?));
        }
        if self.is_kw("if") {
            self.bump();
            let c = self.term()?;
            self.expect_kw("then")?;
            let a = self.term()?;
            self.expect_kw("else")?;
            let b = self.term()?;
            return Ok(Term::ite(c, a, b));
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Num(_) => true,
            Tok::Ident(x) => x == "R" || !KEYWORDS.contains(&x.as_str()),
            Tok::Sym(s) => matches!(*s, "<" | "(" | "?" | "{" | "@"),
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let prefix = match self.peek() {
            Tok::Ident(k) if k == "S" => Some(Term::succ as fn(Term) -> Term),
            Tok::Ident(k) if k == "fst" => Some(Term::proj1 as fn(Term) -> Term),
            Tok::Ident(k) if k == "snd" => Some(Term::proj2 as fn(Term) -> Term),
            _ => None,
        };
        let mut head = match prefix {
            Some(op) => {
                self.bump();
                op(self.atom()?)
            }
            None => self.atom()?,
        };
        while self.starts_atom() {
            let arg = self.atom()?;
            head = Term::app(head, arg);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Term::numeral(n))
            }
            Tok::Ident(k) if k == "R" => {
                self.bump();
                self.expect_sym("[")?;
                let ty = self.ty()?;
                self.expect_sym("]")?;
                Ok(Term::Rec(ty))
            }
            Tok::Ident(x) if !KEYWORDS.contains(&x.as_str()) => {
                self.bump();
                match self.lookup(&x) {
                    Some(ty) => Ok(Term::Var(x, ty)),
                    None if self.free_nat => Ok(Term::nat_var(x)),
                    None => {
                        self.pos -= 1;
                        self.err(format!("unbound variable `{x}`"))
                    }
                }
            }
            Tok::Sym("<") => {
                self.bump();
                let a = self.term()?;
                self.expect_sym(",")?;
                let b = self.term()?;
                self.expect_sym(">")?;
                Ok(Term::pair(a, b))
            }
            Tok::Sym("(") => {
                self.bump();
                if self.is_sym(")") {
                    self.bump();
                    return Ok(Term::UnitVal);
                }
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Sym("?") => {
                self.bump();
                self.expect_sym("(")?;
                let f = self.formula()?;
                self.expect_sym(")")?;
                Ok(Term::query(f))
            }
            Tok::Sym("{") => {
                self.bump();
                let mut vals = Vec::new();
                loop {
                    match self.bump() {
                        Tok::Num(n) => vals.push(n),
                        t => {
                            self.pos -= 1;
                            return self.err(format!("expected a table entry, found {}", describe(&t)));
                        }
                    }
                    if self.is_sym(",") {
                        self.bump();
                        continue;
                    }
                    self.expect_sym("}")?;
                    break;
                }
                Ok(Term::Table(vals))
            }
            Tok::Sym("@") => {
                self.bump();
                let name = self.ident()?;
                Ok(Term::Extern(name))
            }
            t => self.err(format!("expected a term, found {}", describe(&t))),
        }
    }

    // Formulas.

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantified();
        }
        self.implication()
    }

    fn quantified(&mut self) -> Result<Formula, ParseError> {
        let universal = self.is_kw("forall");
        self.bump();
        let mut binders = Vec::new();
        loop {
            let x = self.ident()?;
            let ty = if self.is_sym(":") {
                self.bump();
                self.ty()?
            } else {
                SimpleType::Nat
            };
            binders.push((x, ty));
            if self.is_sym(",") {
                self.bump();
                continue;
            }
            break;
        }
        self.expect_sym(".")?;
        let depth = self.scope.len();
        self.scope.extend(binders.iter().cloned());
        let body = self.formula();
        self.scope.truncate(depth);
        let mut f = body?;
        for (x, ty) in binders.into_iter().rev() {
            f = if universal {
                Formula::forall_typed(x, ty, f)
            } else {
                Formula::exists_typed(x, ty, f)
            };
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.is_sym("->") {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.is_sym("\\/") {
            self.bump();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.is_sym("/\\") {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.is_sym("~") {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantified();
        }
        if self.is_kw("bot") {
            self.bump();
            if self.is_sym("[") {
                self.bump();
                let t = self.term()?;
                self.expect_sym("]")?;
                return Ok(Formula::Realizes(t));
            }
            return Ok(Formula::Bot);
        }
        if self.is_sym("(") {
            let saved = self.pos;
            self.bump();
            if let Ok(f) = self.formula() {
                if self.is_sym(")") {
                    self.bump();
                    if !self.is_sym("=") {
                        return Ok(f);
                    }
                }
            }
            self.pos = saved;
            return self.equation();
        }
        if let Tok::Ident(p) = self.peek().clone() {
            let is_pred = !KEYWORDS.contains(&p.as_str())
                && self.lookup(&p).is_none()
                && matches!(self.peek_at(1), Tok::Sym("("));
            if is_pred {
                self.bump();
                self.bump();
                let mut args = Vec::new();
                if !self.is_sym(")") {
                    loop {
                        args.push(self.term()?);
                        if self.is_sym(",") {
                            self.bump();
                            continue;
                        }
                        break;
                    }
                }
                self.expect_sym(")")?;
                return Ok(Formula::Atom(p, args));
            }
        }
        self.equation()
    }

    fn equation(&mut self) -> Result<Formula, ParseError> {
        let a = self.term()?;
        self.expect_sym("=")?;
        let b = self.term()?;
        Ok(Formula::Eq(a, b))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(x) => format!("`{x}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

fn make_error(src: &str, offset: usize, message: String) -> ParseError {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError {
        offset,
        line,
        column,
        message,
    }
}
