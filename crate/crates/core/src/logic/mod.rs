//! First-order formulas over decidable predicates, finite environments
//! and the brute-force truth oracle.

mod env;
mod eval;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{fresh_name, substitute, substitute_closed, KernelError, SimpleType, Term};

pub use env::{CounterFunction, EnvError, PredicateEnv};
pub use eval::{domain_values, eval_qf, oracle_eval, EnvOracle, MAX_DOMAIN, MAX_TABLE_ENUMERATION};

/// A first-order formula.
///
/// `Not a` is represented as `Implies(a, Bot)`. `Eq` compares two
/// natural-number terms and is the flag test `b = 0` produced by the
/// disjunction clauses; `Realizes(t)` is the statement "t realizes bot",
/// which only arises from the modified realizability translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Bot,
    Realizes(Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, SimpleType, Box<Formula>),
    Exists(String, SimpleType, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bot)
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), SimpleType::Nat, Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), SimpleType::Nat, Box::new(body))
    }

    pub fn forall_typed(x: impl Into<String>, ty: SimpleType, body: Formula) -> Formula {
        Formula::Forall(x.into(), ty, Box::new(body))
    }

    pub fn exists_typed(x: impl Into<String>, ty: SimpleType, body: Formula) -> Formula {
        Formula::Exists(x.into(), ty, Box::new(body))
    }

    /// The operand of a negation `a -> bot`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::Bot | Formula::Realizes(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Quantifier-free and built only from decidable atoms: predicates in
    /// `decidable` (every predicate when `None`), equations and `bot`.
    pub fn is_decidable_qf(&self, decidable: Option<&BTreeSet<String>>) -> bool {
        match self {
            Formula::Atom(p, _) => decidable.is_none_or(|d| d.contains(p)),
            Formula::Eq(..) | Formula::Bot => true,
            Formula::Realizes(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_decidable_qf(decidable) && b.is_decidable_qf(decidable)
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Predicate symbols occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal over subformulas.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Forall(_, _, a) | Formula::Exists(_, _, a) => a.visit(f),
            _ => {}
        }
    }

    /// Visits every term directly held by an atom, equation or realizer formula.
    pub fn visit_terms(&self, f: &mut dyn FnMut(&Term)) {
        self.visit(&mut |phi| match phi {
            Formula::Atom(_, args) => args.iter().for_each(&mut *f),
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Realizes(t) => f(t),
            _ => {}
        });
    }

    /// Rebuilds the formula with every held term transformed.
    pub fn try_map_terms<E>(&self, g: &mut dyn FnMut(&Term) -> Result<Term, E>) -> Result<Formula, E> {
        Ok(match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(&mut *g).collect::<Result<_, _>>()?),
            Formula::Eq(a, b) => Formula::Eq(g(a)?, g(b)?),
            Formula::Bot => Formula::Bot,
            Formula::Realizes(t) => Formula::Realizes(g(t)?),
            Formula::And(a, b) => Formula::and(a.try_map_terms(g)?, b.try_map_terms(g)?),
            Formula::Or(a, b) => Formula::or(a.try_map_terms(g)?, b.try_map_terms(g)?),
            Formula::Implies(a, b) => Formula::implies(a.try_map_terms(g)?, b.try_map_terms(g)?),
            Formula::Forall(x, ty, a) => Formula::Forall(x.clone(), ty.clone(), Box::new(a.try_map_terms(g)?)),
            Formula::Exists(x, ty, a) => Formula::Exists(x.clone(), ty.clone(), Box::new(a.try_map_terms(g)?)),
        })
    }

    pub fn map_terms(&self, g: &mut dyn FnMut(&Term) -> Term) -> Formula {
        self.try_map_terms::<std::convert::Infallible>(&mut |t| Ok(g(t)))
            .unwrap_or_else(|e| match e {})
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for x in t.free_vars() {
                if !bound.contains(&x) {
                    out.insert(x);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Realizes(t) => add_term(t, bound, out),
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, _, a) | Formula::Exists(x, _, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|t| t.has_free(x)),
            Formula::Eq(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Realizes(t) => t.has_free(x),
            Formula::Bot => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Forall(y, _, a) | Formula::Exists(y, _, a) => y != x && a.has_free(x),
        }
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |phi| {
            if let Formula::Forall(x, _, _) | Formula::Exists(x, _, _) = phi {
                out.insert(x.clone());
            }
        });
        self.visit_terms(&mut |t| {
            t.visit(&mut |s| match s {
                Term::Var(x, _) | Term::Lambda(x, _, _) => {
                    out.insert(x.clone());
                }
                _ => {}
            })
        });
        out
    }

    /// Capture-avoiding substitution `self[x := s]`.
    pub fn substitute(&self, x: &str, s: &Term) -> Formula {
        if !self.has_free(x) {
            return self.clone();
        }
        match self {
            Formula::Forall(y, ty, a) | Formula::Exists(y, ty, a) => {
                let rebuild = |y: String, a: Formula| match self {
                    Formula::Forall(..) => Formula::Forall(y, ty.clone(), Box::new(a)),
                    _ => Formula::Exists(y, ty.clone(), Box::new(a)),
                };
                if s.has_free(y) {
                    let fv = s.free_vars();
                    let y2 = fresh_name(y, &|n| fv.contains(n) || a.has_free(n) || n == x);
                    let renamed = a.substitute(y, &Term::Var(y2.clone(), ty.clone()));
                    rebuild(y2, renamed.substitute(x, s))
                } else {
                    rebuild(y.clone(), a.substitute(x, s))
                }
            }
            _ => self.map_shallow(&mut |phi| phi.substitute(x, s), &mut |t| substitute(t, x, s)),
        }
    }

    /// Simultaneous substitution of closed terms (no capture possible).
    pub fn substitute_closed(&self, map: &BTreeMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Forall(y, ty, a) | Formula::Exists(y, ty, a) => {
                let inner = if map.contains_key(y) {
                    let mut m = map.clone();
                    m.remove(y);
                    a.substitute_closed(&m)
                } else {
                    a.substitute_closed(map)
                };
                match self {
                    Formula::Forall(..) => Formula::Forall(y.clone(), ty.clone(), Box::new(inner)),
                    _ => Formula::Exists(y.clone(), ty.clone(), Box::new(inner)),
                }
            }
            _ => self.map_shallow(&mut |phi| phi.substitute_closed(map), &mut |t| {
                substitute_closed(t, map)
            }),
        }
    }

    /// Applies `sub` to immediate subformulas and `term` to held terms.
    /// Quantifiers are passed to `sub` whole.
    fn map_shallow(&self, sub: &mut dyn FnMut(&Formula) -> Formula, term: &mut dyn FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(&mut *term).collect()),
            Formula::Eq(a, b) => Formula::Eq(term(a), term(b)),
            Formula::Realizes(t) => Formula::Realizes(term(t)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(sub(a), sub(b)),
            Formula::Or(a, b) => Formula::or(sub(a), sub(b)),
            Formula::Implies(a, b) => Formula::implies(sub(a), sub(b)),
            Formula::Forall(..) | Formula::Exists(..) => sub(self),
        }
    }

    pub(crate) fn canonical_with(&self, bound: &mut Vec<String>) -> Formula {
        match self {
            Formula::Forall(x, ty, a) | Formula::Exists(x, ty, a) => {
                let name = format!("#{}", bound.len());
                bound.push(x.clone());
                let inner = a.canonical_with(bound);
                bound.pop();
                match self {
                    Formula::Forall(..) => Formula::Forall(name, ty.clone(), Box::new(inner)),
                    _ => Formula::Exists(name, ty.clone(), Box::new(inner)),
                }
            }
            Formula::And(a, b) => Formula::and(a.canonical_with(bound), b.canonical_with(bound)),
            Formula::Or(a, b) => Formula::or(a.canonical_with(bound), b.canonical_with(bound)),
            Formula::Implies(a, b) => Formula::implies(a.canonical_with(bound), b.canonical_with(bound)),
            _ => self.map_terms(&mut |t| Formula::canonical_term(t, bound)),
        }
    }

    /// The formula with bound variables renamed by depth; α-equivalent
    /// formulas have equal canonical forms.
    pub fn canonical(&self) -> Formula {
        self.canonical_with(&mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }

    /// Normalizes every held term (no oracle).
    pub fn normalize_terms(&self) -> Result<Formula, KernelError> {
        self.try_map_terms(&mut |t| crate::kernel::normalize(t, crate::kernel::DEFAULT_FUEL))
    }

    /// Number of connectives and quantifiers above the atoms.
    pub fn depth(&self) -> usize {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, _, a) | Formula::Exists(_, _, a) => 1 + a.depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_formula(self, f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("formula is not quantifier-free: {0}")]
    NotQuantifierFree(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("domain bound {0} exceeds the supported maximum of {MAX_DOMAIN}")]
    DomainTooLarge(u64),
    #[error("cannot enumerate values of type {0} over the finite domain")]
    NotEnumerable(String),
    #[error("atom argument `{0}` does not evaluate to a numeral")]
    NonNumeral(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
