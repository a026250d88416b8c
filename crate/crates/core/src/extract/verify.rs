use std::collections::BTreeMap;

use super::{Realizer, VerifyError};
use crate::kernel::{normalize, SimpleType, Term, DEFAULT_FUEL};
use crate::logic::{domain_values, eval_qf, CounterFunction, PredicateEnv};

/// Where the counter values come from.
#[derive(Clone, Debug, Default)]
pub enum CounterSource {
    /// Every value of every counter component over the finite domain.
    #[default]
    Exhaustive,
    /// These functions for each `Nat -> Nat` component; `Nat` components
    /// still range over the domain.
    Functions(Vec<CounterFunction>),
    /// Explicit tuples, one term per counter component.
    Tuples(Vec<Vec<Term>>),
}

/// A failing instance: the values used and the instantiated matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<(String, Term)>,
    pub matrix: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        let ce = self.counterexample.as_ref().map(|c| {
            serde_json::json!({
                "assignment": c.assignment.iter().map(|(n, t)| (n.clone(), serde_json::Value::String(t.to_string()))).collect::<serde_json::Map<_, _>>(),
                "matrix": c.matrix,
            })
        });
        serde_json::json!({
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": ce,
        })
    }
}

/// Checks the realizer's matrix at every parameter and counter value,
/// stopping at the first failure. Values are tried in lexicographic order
/// of the slots, parameters first.
pub fn verify_realizer(
    r: &Realizer,
    env: &PredicateEnv,
    counters: &CounterSource,
) -> Result<VerificationReport, VerifyError> {
    let d = env.domain();
    let mut slots: Vec<(String, Vec<Term>)> = Vec::new();
    for (name, ty) in &r.params {
        slots.push((name.clone(), values(name, ty, d, None)?));
    }
    let counter: Vec<&(String, SimpleType)> = r.signature.counter.iter().filter(|(_, t)| !t.is_unit()).collect();
    let tuples: Option<&Vec<Vec<Term>>> = match counters {
        CounterSource::Exhaustive => {
            for (name, ty) in &counter {
                slots.push((name.clone(), values(name, ty, d, None)?));
            }
            None
        }
        CounterSource::Functions(fs) => {
            for (name, ty) in &counter {
                slots.push((name.clone(), values(name, ty, d, Some(fs))?));
            }
            None
        }
        CounterSource::Tuples(ts) => {
            if let Some(bad) = ts.iter().find(|t| t.len() != counter.len()) {
                return Err(VerifyError::CounterArity {
                    expected: counter.len(),
                    found: bad.len(),
                });
            }
            Some(ts)
        }
    };
    let components = r.components();
    let mut checked = 0u64;
    let mut rows: Box<dyn Iterator<Item = Vec<Term>>> =
        Box::new(product(slots.iter().map(|(_, v)| v.clone()).collect()));
    if let Some(ts) = tuples {
        let ts = ts.clone();
        rows = Box::new(rows.flat_map(move |p| ts.clone().into_iter().map(move |t| [p.clone(), t].concat())));
    }
    let mut names: Vec<String> = slots.iter().map(|(n, _)| n.clone()).collect();
    if tuples.is_some() {
        names.extend(counter.iter().map(|(n, _)| n.clone()));
    }
    for row in rows {
        checked += 1;
        let subst: BTreeMap<String, Term> = names.iter().cloned().zip(row.iter().cloned()).collect();
        let mut map = subst.clone();
        for ((w, ty), c) in r.signature.witness.iter().zip(&components) {
            if !ty.is_unit() {
                let inst = crate::kernel::substitute_closed(c, &subst);
                map.insert(w.clone(), normalize(&inst, DEFAULT_FUEL)?);
            }
        }
        let matrix = r.signature.matrix.substitute_closed(&map);
        if !eval_qf(&matrix, env, &BTreeMap::new())? {
            return Ok(VerificationReport {
                passed: false,
                checked,
                counterexample: Some(Counterexample {
                    assignment: names.iter().cloned().zip(row).collect(),
                    matrix: matrix.normalize_terms().unwrap_or(matrix).to_string(),
                }),
            });
        }
    }
    Ok(VerificationReport {
        passed: true,
        checked,
        counterexample: None,
    })
}

fn values(name: &str, ty: &SimpleType, d: u64, fs: Option<&Vec<CounterFunction>>) -> Result<Vec<Term>, VerifyError> {
    let nat_to_nat = SimpleType::nat_to_nat();
    match (ty, fs) {
        (t, Some(fs)) if *t == nat_to_nat => Ok(fs.iter().map(CounterFunction::to_term).collect()),
        (SimpleType::Nat, _) => Ok((0..d).map(Term::numeral).collect()),
        (t, None) if *t == nat_to_nat => domain_values(t, d).map_err(|_| not_enumerable(name, ty)),
        _ => Err(not_enumerable(name, ty)),
    }
}

fn not_enumerable(name: &str, ty: &SimpleType) -> VerifyError {
    VerifyError::CounterTypeNotEnumerable {
        name: name.to_string(),
        ty: ty.to_string(),
    }
}

/// Lexicographic cartesian product, the last coordinate varying fastest.
fn product(sets: Vec<Vec<Term>>) -> impl Iterator<Item = Vec<Term>> {
    let total: usize = sets.iter().map(Vec::len).product();
    (0..total).map(move |mut code| {
        let mut row = vec![Term::UnitVal; sets.len()];
        for (i, set) in sets.iter().enumerate().rev() {
            row[i] = set[code % set.len()].clone();
            code /= set.len();
        }
        row
    })
}
