use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{normalize_with, KernelError, Term, DEFAULT_FUEL};

use super::eval::EnvOracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("domain bound must be at least 1")]
    EmptyDomain,
    #[error("predicate `{0}` is not declared in the environment")]
    UnknownPredicate(String),
    #[error("family predicate `{0}` expects exactly two arguments, got {1}")]
    FamilyArity(String, usize),
    #[error("`{0}` is declared both as a predicate and as a family")]
    DuplicatePredicate(String),
    #[error("invalid environment document: {0}")]
    Json(String),
    #[error("counter function did not evaluate to a numeral at argument {0}")]
    CounterNotNumeral(u64),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A finite model: carrier `{0..domain-1}`, a truth table for each plain
/// predicate and, for indexed families `P_n(m)`, a set of `(n, m)` pairs.
///
/// Arguments are reduced modulo the domain bound before lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateEnv {
    domain: u64,
    tables: BTreeMap<String, BTreeSet<Vec<u64>>>,
    family: BTreeMap<String, BTreeSet<(u64, u64)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvDoc {
    domain: u64,
    #[serde(default)]
    preds: BTreeMap<String, Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    family: BTreeMap<String, Vec<[u64; 2]>>,
}

impl PredicateEnv {
    pub fn new(domain: u64) -> Result<Self, EnvError> {
        if domain == 0 {
            return Err(EnvError::EmptyDomain);
        }
        Ok(PredicateEnv {
            domain,
            tables: BTreeMap::new(),
            family: BTreeMap::new(),
        })
    }

    /// A unary predicate given by its characteristic function on the carrier.
    pub fn unary(domain: u64, name: &str, holds: impl Fn(u64) -> bool) -> Result<Self, EnvError> {
        let mut env = PredicateEnv::new(domain)?;
        env.declare(name)?;
        for n in 0..domain {
            env.set(name, &[n], holds(n))?;
        }
        Ok(env)
    }

    /// Unary predicate from the bits of `mask` (bit `n` set means `P(n)`).
    pub fn unary_from_mask(domain: u64, name: &str, mask: u64) -> Result<Self, EnvError> {
        PredicateEnv::unary(domain, name, |n| mask >> n & 1 == 1)
    }

    /// Every unary environment for `name` over the carrier, in mask order.
    pub fn all_unary(domain: u64, name: &str) -> Result<Vec<Self>, EnvError> {
        (0..1u64 << domain)
            .map(|mask| PredicateEnv::unary_from_mask(domain, name, mask))
            .collect()
    }

    /// A family `name_n(m)` given by its characteristic function on the carrier.
    pub fn family_from_fn(domain: u64, name: &str, holds: impl Fn(u64, u64) -> bool) -> Result<Self, EnvError> {
        let mut env = PredicateEnv::new(domain)?;
        env.declare_family(name)?;
        for n in 0..domain {
            for m in 0..domain {
                if holds(n, m) {
                    env.family.get_mut(name).expect("declared").insert((n, m));
                }
            }
        }
        Ok(env)
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    /// Declares `name` as a plain predicate that holds nowhere yet.
    pub fn declare(&mut self, name: &str) -> Result<(), EnvError> {
        if self.family.contains_key(name) {
            return Err(EnvError::DuplicatePredicate(name.to_string()));
        }
        self.tables.entry(name.to_string()).or_default();
        Ok(())
    }

    pub fn declare_family(&mut self, name: &str) -> Result<(), EnvError> {
        if self.tables.contains_key(name) {
            return Err(EnvError::DuplicatePredicate(name.to_string()));
        }
        self.family.entry(name.to_string()).or_default();
        Ok(())
    }

    /// Sets the truth value of a plain predicate on `args`.
    pub fn set(&mut self, name: &str, args: &[u64], value: bool) -> Result<(), EnvError> {
        let key = self.reduce(args);
        if let Some(fam) = self.family.get_mut(name) {
            let [n, m] = key[..] else {
                return Err(EnvError::FamilyArity(name.to_string(), key.len()));
            };
            if value {
                fam.insert((n, m));
            } else {
                fam.remove(&(n, m));
            }
            return Ok(());
        }
        let table = self.tables.entry(name.to_string()).or_default();
        if value {
            table.insert(key);
        } else {
            table.remove(&key);
        }
        Ok(())
    }

    fn reduce(&self, args: &[u64]) -> Vec<u64> {
        args.iter().map(|a| a % self.domain).collect()
    }

    /// Truth value of `name(args)`; arguments are taken modulo the domain.
    pub fn holds(&self, name: &str, args: &[u64]) -> Result<bool, EnvError> {
        if let Some(fam) = self.family.get(name) {
            let [n, m] = args[..] else {
                return Err(EnvError::FamilyArity(name.to_string(), args.len()));
            };
            return Ok(fam.contains(&(n % self.domain, m % self.domain)));
        }
        match self.tables.get(name) {
            Some(t) => Ok(t.contains(&self.reduce(args))),
            None => Err(EnvError::UnknownPredicate(name.to_string())),
        }
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.tables.contains_key(name) || self.family.contains_key(name)
    }

    pub fn is_family(&self, name: &str) -> bool {
        self.family.contains_key(name)
    }

    /// Declared predicate and family symbols.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.tables.keys().chain(self.family.keys()).cloned().collect()
    }

    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        let doc: EnvDoc = serde_json::from_str(text).map_err(|e| EnvError::Json(e.to_string()))?;
        let mut env = PredicateEnv::new(doc.domain)?;
        for (name, tuples) in doc.preds {
            env.declare(&name)?;
            for t in tuples {
                env.set(&name, &t, true)?;
            }
        }
        for (name, pairs) in doc.family {
            env.declare_family(&name)?;
            for [n, m] in pairs {
                env.set(&name, &[n, m], true)?;
            }
        }
        Ok(env)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = EnvDoc {
            domain: self.domain,
            preds: self
                .tables
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
                .collect(),
            family: self
                .family
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|&(n, m)| [n, m]).collect()))
                .collect(),
        };
        serde_json::to_value(doc).expect("environment serializes")
    }
}

/// A counter (challenge) function on the naturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CounterFunction {
    /// Values on `0..len`; arguments are reduced modulo the table length.
    Table(Vec<u64>),
    /// A closed term of type `Nat -> Nat`.
    Term(Term),
}

impl CounterFunction {
    pub fn constant(domain: u64, value: u64) -> Self {
        CounterFunction::Table(vec![value; domain as usize])
    }

    pub fn apply(&self, n: u64, env: &PredicateEnv) -> Result<u64, EnvError> {
        match self {
            CounterFunction::Table(t) => Ok(t[(n % t.len() as u64) as usize]),
            CounterFunction::Term(f) => {
                let out = normalize_with(&Term::app(f.clone(), Term::numeral(n)), DEFAULT_FUEL, &EnvOracle(env))?;
                out.as_numeral().ok_or(EnvError::CounterNotNumeral(n))
            }
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            CounterFunction::Table(t) => Term::Table(t.clone()),
            CounterFunction::Term(f) => f.clone(),
        }
    }

    /// Every table `{0..d-1} -> {0..d-1}`, in lexicographic order.
    pub fn all_tables(domain: u64) -> impl Iterator<Item = CounterFunction> {
        all_tables(domain).map(CounterFunction::Table)
    }
}

/// Lexicographic enumeration of all functions `{0..d-1} -> {0..d-1}`.
pub(crate) fn all_tables(domain: u64) -> impl Iterator<Item = Vec<u64>> {
    let d = domain as usize;
    let total = (domain as u128).pow(domain as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0u64; d];
        for slot in t.iter_mut().rev() {
            *slot = (code % domain as u128) as u64;
            code /= domain as u128;
        }
        t
    })
}
