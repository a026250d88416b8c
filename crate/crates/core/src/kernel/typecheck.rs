use serde::{Deserialize, Serialize};

use super::{KernelError, SimpleType, Term, TermPath};
use crate::logic::Formula;

/// Free-variable typing context. Names are unique; insertion order is kept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypingContext {
    entries: Vec<(String, SimpleType)>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or rebinds `name`.
    pub fn insert(&mut self, name: impl Into<String>, ty: SimpleType) {
        let name = name.into();
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = ty,
            None => self.entries.push((name, ty)),
        }
    }

    pub fn with(mut self, name: impl Into<String>, ty: SimpleType) -> Self {
        self.insert(name, ty);
        self
    }

    pub fn get(&self, name: &str) -> Option<&SimpleType> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SimpleType)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(String, SimpleType)> for TypingContext {
    fn from_iter<I: IntoIterator<Item = (String, SimpleType)>>(iter: I) -> Self {
        let mut ctx = TypingContext::new();
        for (n, t) in iter {
            ctx.insert(n, t);
        }
        ctx
    }
}

/// Computes the type of `t` under `ctx`.
pub fn typecheck(t: &Term, ctx: &TypingContext) -> Result<SimpleType, KernelError> {
    let mut checker = Checker {
        ctx,
        locals: Vec::new(),
        path: Vec::new(),
    };
    checker.check(t)
}

struct Checker<'a> {
    ctx: &'a TypingContext,
    locals: Vec<(String, SimpleType)>,
    path: TermPath,
}

impl Checker<'_> {
    fn lookup(&self, name: &str) -> Option<&SimpleType> {
        self.locals
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
            .or_else(|| self.ctx.get(name))
    }

    fn mismatch(&self, expected: impl ToString, found: impl ToString) -> KernelError {
        KernelError::TypeMismatch {
            path: self.path.clone(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn sub(&mut self, step: &'static str, t: &Term) -> Result<SimpleType, KernelError> {
        self.path.push(step);
        let r = self.check(t)?;
        self.path.pop();
        Ok(r)
    }

    fn expect(&mut self, step: &'static str, t: &Term, want: &SimpleType) -> Result<(), KernelError> {
        let got = self.sub(step, t)?;
        if &got != want {
            self.path.push(step);
            let e = self.mismatch(want, &got);
            self.path.pop();
            return Err(e);
        }
        Ok(())
    }

    fn check(&mut self, t: &Term) -> Result<SimpleType, KernelError> {
        match t {
            Term::Var(x, ty) => match self.lookup(x) {
                None => Err(KernelError::UnboundVariable(x.clone())),
                Some(bound) if bound != ty => Err(self.mismatch(bound, ty)),
                Some(_) => Ok(ty.clone()),
            },
            Term::Zero => Ok(SimpleType::Nat),
            Term::Succ(a) => {
                self.expect("succ", a, &SimpleType::Nat)?;
                Ok(SimpleType::Nat)
            }
            Term::Lambda(x, ty, body) => {
                self.locals.push((x.clone(), ty.clone()));
                let r = self.sub("body", body);
                self.locals.pop();
                Ok(SimpleType::arrow(ty.clone(), r?))
            }
            Term::App(f, a) => {
                let ft = self.sub("fun", f)?;
                match ft {
                    SimpleType::Arrow(dom, cod) => {
                        self.expect("arg", a, &dom)?;
                        Ok(*cod)
                    }
                    other => {
                        self.path.push("fun");
                        let e = self.mismatch("a function type", other);
                        self.path.pop();
                        Err(e)
                    }
                }
            }
            Term::Rec(rho) => Ok(SimpleType::recursor(rho)),
            Term::Pair(l, r) => {
                let lt = self.sub("left", l)?;
                let rt = self.sub("right", r)?;
                Ok(SimpleType::product(lt, rt))
            }
            Term::Proj1(p) | Term::Proj2(p) => match self.sub("proj", p)? {
                SimpleType::Product(l, r) => Ok(if matches!(t, Term::Proj1(_)) { *l } else { *r }),
                other => {
                    self.path.push("proj");
                    let e = self.mismatch("a product type", other);
                    self.path.pop();
                    Err(e)
                }
            },
            Term::UnitVal => Ok(SimpleType::Unit),
            Term::IfThenElse(c, a, b) => {
                self.expect("cond", c, &SimpleType::Nat)?;
                let at = self.sub("then", a)?;
                self.expect("else", b, &at)?;
                Ok(at)
            }
            Term::Query(phi) => {
                self.path.push("query");
                let r = self.check_query(phi);
                self.path.pop();
                r?;
                Ok(SimpleType::Nat)
            }
            Term::Table(tab) => {
                if tab.is_empty() {
                    return Err(self.mismatch("a non-empty table", "{}"));
                }
                Ok(SimpleType::nat_to_nat())
            }
            Term::Extern(_) => Ok(SimpleType::nat_to_nat()),
        }
    }

    fn check_query(&mut self, phi: &Formula) -> Result<(), KernelError> {
        match phi {
            Formula::Atom(_, args) => {
                for a in args {
                    self.expect("atom", a, &SimpleType::Nat)?;
                }
                Ok(())
            }
            Formula::Eq(a, b) => {
                self.expect("atom", a, &SimpleType::Nat)?;
                self.expect("atom", b, &SimpleType::Nat)
            }
            Formula::Bot => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.check_query(a)?;
                self.check_query(b)
            }
            Formula::Realizes(_) | Formula::Forall(..) | Formula::Exists(..) => {
                Err(self.mismatch("a decidable quantifier-free formula", phi))
            }
        }
    }
}
