use std::collections::BTreeMap;

use super::env::all_tables;
use super::{Formula, LogicError, PredicateEnv};
use crate::kernel::{substitute_closed, Normalizer, Oracle, SimpleType, Term, DEFAULT_FUEL};

/// Largest domain bound accepted by the brute-force oracle.
pub const MAX_DOMAIN: u64 = 12;

/// Largest number of `Nat -> Nat` tables a quantifier may range over.
pub const MAX_TABLE_ENUMERATION: u128 = 4096;

/// Kernel oracle backed by a predicate environment.
#[derive(Clone, Copy, Debug)]
pub struct EnvOracle<'e>(pub &'e PredicateEnv);

impl Oracle for EnvOracle<'_> {
    fn atom(&self, pred: &str, args: &[u64]) -> Option<bool> {
        self.0.holds(pred, args).ok()
    }
}

/// Classical truth of a quantifier-free formula under `valuation`.
pub fn eval_qf(f: &Formula, env: &PredicateEnv, valuation: &BTreeMap<String, u64>) -> Result<bool, LogicError> {
    if !f.is_quantifier_free() {
        return Err(LogicError::NotQuantifierFree(f.to_string()));
    }
    if let Some(x) = f.free_vars().into_iter().find(|x| !valuation.contains_key(x)) {
        return Err(LogicError::UnboundVariable(x));
    }
    let scope = valuation.iter().map(|(k, v)| (k.clone(), Term::numeral(*v))).collect();
    Evaluator::new(env).eval(f, &mut Scope(scope))
}

/// Classical truth of a closed formula, quantifiers ranging over the carrier
/// (or over all tables, for `Nat -> Nat` quantifiers).
pub fn oracle_eval(f: &Formula, env: &PredicateEnv) -> Result<bool, LogicError> {
    if env.domain() > MAX_DOMAIN {
        return Err(LogicError::DomainTooLarge(env.domain()));
    }
    if let Some(x) = f.free_vars().into_iter().next() {
        return Err(LogicError::UnboundVariable(x));
    }
    Evaluator::new(env).eval(f, &mut Scope(BTreeMap::new()))
}

/// All closed values of `ty` the oracle quantifies over.
pub fn domain_values(ty: &SimpleType, domain: u64) -> Result<Vec<Term>, LogicError> {
    match ty {
        SimpleType::Nat => Ok((0..domain).map(Term::numeral).collect()),
        SimpleType::Unit => Ok(vec![Term::UnitVal]),
        SimpleType::Arrow(a, b) if **a == SimpleType::Nat && **b == SimpleType::Nat => {
            if (domain as u128).pow(domain as u32) > MAX_TABLE_ENUMERATION {
                return Err(LogicError::NotEnumerable(ty.to_string()));
            }
            Ok(all_tables(domain).map(Term::Table).collect())
        }
        SimpleType::Product(a, b) => {
            let (xs, ys) = (domain_values(a, domain)?, domain_values(b, domain)?);
            Ok(xs
                .iter()
                .flat_map(|x| ys.iter().map(move |y| Term::pair(x.clone(), y.clone())))
                .collect())
        }
        _ => Err(LogicError::NotEnumerable(ty.to_string())),
    }
}

struct Scope(BTreeMap<String, Term>);

pub(crate) struct Evaluator<'e> {
    env: &'e PredicateEnv,
}

impl<'e> Evaluator<'e> {
    pub(crate) fn new(env: &'e PredicateEnv) -> Self {
        Evaluator { env }
    }

    fn nat(&self, t: &Term, scope: &Scope) -> Result<u64, LogicError> {
        if let Some(v) = t.as_numeral() {
            return Ok(v);
        }
        if let Term::Var(x, _) = t {
            if let Some(v) = scope.0.get(x).and_then(Term::as_numeral) {
                return Ok(v);
            }
        }
        let closed = substitute_closed(t, &scope.0);
        let oracle = EnvOracle(self.env);
        let mut n = Normalizer::new(DEFAULT_FUEL, &oracle);
        n.eval_nat(closed.clone())?
            .ok_or_else(|| LogicError::NonNumeral(closed.to_string()))
    }

    fn eval(&self, f: &Formula, scope: &mut Scope) -> Result<bool, LogicError> {
        match f {
            Formula::Bot | Formula::Realizes(_) => Ok(false),
            Formula::Atom(p, args) => {
                let vals = args.iter().map(|a| self.nat(a, scope)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.env.holds(p, &vals)?)
            }
            Formula::Eq(a, b) => Ok(self.nat(a, scope)? == self.nat(b, scope)?),
            Formula::And(a, b) => Ok(self.eval(a, scope)? && self.eval(b, scope)?),
            Formula::Or(a, b) => Ok(self.eval(a, scope)? || self.eval(b, scope)?),
            Formula::Implies(a, b) => Ok(!self.eval(a, scope)? || self.eval(b, scope)?),
            Formula::Forall(x, ty, body) | Formula::Exists(x, ty, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let values = domain_values(ty, self.env.domain())?;
                let saved = scope.0.remove(x);
                let mut result = universal;
                for v in values {
                    scope.0.insert(x.clone(), v);
                    let r = self.eval(body, scope);
                    match r {
                        Ok(b) if b != universal => {
                            result = !universal;
                            break;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            restore(scope, x, saved);
                            return Err(e);
                        }
                    }
                }
                restore(scope, x, saved);
                Ok(result)
            }
        }
    }
}

fn restore(scope: &mut Scope, x: &str, saved: Option<Term>) {
    match saved {
        Some(v) => scope.0.insert(x.to_string(), v),
        None => scope.0.remove(x),
    };
}
