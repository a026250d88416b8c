//! System T: simple types, terms, typing, substitution and normalization.

mod normalize;
mod print;
mod subst;
mod typecheck;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Formula;

pub use normalize::{normalize, normalize_with, NoOracle, Normalizer, Oracle, DEFAULT_FUEL};
pub use subst::{alpha_eq, fresh_name, substitute, substitute_closed};
pub use typecheck::{typecheck, TypingContext};

/// Simple types over the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleType {
    Nat,
    Arrow(Box<SimpleType>, Box<SimpleType>),
    Product(Box<SimpleType>, Box<SimpleType>),
    Unit,
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn product(l: SimpleType, r: SimpleType) -> SimpleType {
        SimpleType::Product(Box::new(l), Box::new(r))
    }

    /// `args[0] -> args[1] -> ... -> res`.
    pub fn arrows(args: &[SimpleType], res: SimpleType) -> SimpleType {
        args.iter().rev().fold(res, |acc, a| SimpleType::arrow(a.clone(), acc))
    }

    /// `Nat -> Nat`, the type of counter functions.
    pub fn nat_to_nat() -> SimpleType {
        SimpleType::arrow(SimpleType::Nat, SimpleType::Nat)
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, SimpleType::Unit)
    }

    /// Type of the recursor `R[rho] : rho -> (Nat -> rho -> rho) -> Nat -> rho`.
    pub fn recursor(rho: &SimpleType) -> SimpleType {
        let step = SimpleType::arrows(&[SimpleType::Nat, rho.clone()], rho.clone());
        SimpleType::arrows(&[rho.clone(), step, SimpleType::Nat], rho.clone())
    }
}

/// A System T term.
///
/// Beyond the core calculus there are three host-facing constants:
/// `Query` tests a quantifier-free formula against the environment oracle
/// (0 when it holds), `Table` is a finite function on the naturals and
/// `Extern` names a function supplied by the oracle at run time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, SimpleType),
    Zero,
    Succ(Box<Term>),
    Lambda(String, SimpleType, Box<Term>),
    App(Box<Term>, Box<Term>),
    Rec(SimpleType),
    Pair(Box<Term>, Box<Term>),
    Proj1(Box<Term>),
    Proj2(Box<Term>),
    UnitVal,
    IfThenElse(Box<Term>, Box<Term>, Box<Term>),
    Query(Box<Formula>),
    Table(Vec<u64>),
    Extern(String),
}

impl Term {
    pub fn var(name: impl Into<String>, ty: SimpleType) -> Term {
        Term::Var(name.into(), ty)
    }

    pub fn nat_var(name: impl Into<String>) -> Term {
        Term::Var(name.into(), SimpleType::Nat)
    }

    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::Succ(Box::new(t));
        }
        t
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn lam(x: impl Into<String>, ty: SimpleType, body: Term) -> Term {
        Term::Lambda(x.into(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pair(l: Term, r: Term) -> Term {
        Term::Pair(Box::new(l), Box::new(r))
    }

    pub fn proj1(t: Term) -> Term {
        Term::Proj1(Box::new(t))
    }

    pub fn proj2(t: Term) -> Term {
        Term::Proj2(Box::new(t))
    }

    pub fn ite(c: Term, t: Term, e: Term) -> Term {
        Term::IfThenElse(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn query(f: Formula) -> Term {
        Term::Query(Box::new(f))
    }

    /// Value of a numeral, if this term is one.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn is_numeral(&self) -> bool {
        self.as_numeral().is_some()
    }

    /// Splits an application spine into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        subst::collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, x: &str) -> bool {
        subst::occurs_free(self, x)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of `IfThenElse` nodes, counting those nested inside queries.
    pub fn count_ifs(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, Term::IfThenElse(..)) {
                n += 1;
            }
        });
        n
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Pre-order traversal over subterms (atom arguments of queries included).
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Succ(a) | Term::Proj1(a) | Term::Proj2(a) | Term::Lambda(_, _, a) => a.visit(f),
            Term::App(a, b) | Term::Pair(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::IfThenElse(c, a, b) => {
                c.visit(f);
                a.visit(f);
                b.visit(f);
            }
            Term::Query(phi) => phi.visit_terms(&mut |t| t.visit(f)),
            Term::Var(..) | Term::Zero | Term::Rec(_) | Term::UnitVal | Term::Table(_) | Term::Extern(_) => {}
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_type(self, f, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_term(self, f, print::Prec::Top)
    }
}

/// Step of a path from the root of a term to one of its subterms.
pub type TermPath = Vec<&'static str>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch at {}: expected {expected}, found {found}", show_path(.path))]
    TypeMismatch {
        path: TermPath,
        expected: String,
        found: String,
    },
    #[error("normalization ran out of fuel after {0} steps")]
    FuelExhausted(u64),
}

fn show_path(path: &TermPath) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        format!("root.{}", path.join("."))
    }
}
