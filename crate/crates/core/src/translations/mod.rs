//! Formula-level interpretations: negative translations, double-negation
//! simplification, modified realizability and the Dialectica interpretation.

mod dialectica;
mod mr;
mod negative;
pub(crate) mod tuple;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::kernel::{SimpleType, Term};
use crate::logic::Formula;

pub(crate) use dialectica::{dial_matrix, dial_shape, imp_parts, types, Shape, Slot};
pub use dialectica::{dialectica_translate, dialectica_translate_with};
pub use mr::mr_translate;
pub use negative::{negative_translate, simplify_double_neg};

/// Which double-negation translation to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NegVariant {
    #[default]
    Kuroda,
    GoedelGentzen,
}

impl FromStr for NegVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kuroda" => Ok(NegVariant::Kuroda),
            "gg" | "goedel-gentzen" => Ok(NegVariant::GoedelGentzen),
            other => Err(format!("unknown negative translation `{other}`")),
        }
    }
}

impl fmt::Display for NegVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NegVariant::Kuroda => "kuroda",
            NegVariant::GoedelGentzen => "gg",
        })
    }
}

/// Realizer type of `bot` when it is read as a predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BotConfig {
    pub bot_type: SimpleType,
}

impl Default for BotConfig {
    fn default() -> Self {
        BotConfig {
            bot_type: SimpleType::Nat,
        }
    }
}

/// Witness tuple, counter tuple and matrix of a translated formula.
///
/// Empty tuples appear as a single `Unit` component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSignature {
    pub witness: Vec<(String, SimpleType)>,
    pub counter: Vec<(String, SimpleType)>,
    pub matrix: Formula,
}

impl WitnessSignature {
    pub fn witness_types(&self) -> Vec<SimpleType> {
        self.witness.iter().map(|(_, t)| t.clone()).collect()
    }

    pub fn counter_types(&self) -> Vec<SimpleType> {
        self.counter.iter().map(|(_, t)| t.clone()).collect()
    }

    /// Type of the realizer term: the witness components paired right-nested.
    pub fn witness_type(&self) -> SimpleType {
        tuple::tuple_type(&self.witness_types())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list = |v: &[(String, SimpleType)]| {
            v.iter()
                .map(|(n, t)| json!({"name": n, "type": t.to_string()}))
                .collect::<Vec<_>>()
        };
        json!({
            "witnessTypes": list(&self.witness),
            "counterTypes": list(&self.counter),
            "matrix": self.matrix.to_string(),
        })
    }

    /// Terms standing for the witness (or counter) components: variables for
    /// proper components, `()` for Unit placeholders.
    pub(crate) fn slot_terms(slots: &[(String, SimpleType)]) -> Vec<Term> {
        slots
            .iter()
            .map(|(n, t)| {
                if t.is_unit() {
                    Term::UnitVal
                } else {
                    Term::Var(n.clone(), t.clone())
                }
            })
            .collect()
    }
}

/// Deterministic fresh names: `base` followed by the smallest unused index.
#[derive(Clone, Debug, Default)]
pub(crate) struct NameGen {
    used: BTreeSet<String>,
    next: BTreeMap<String, usize>,
}

impl NameGen {
    pub(crate) fn avoiding(names: impl IntoIterator<Item = String>) -> Self {
        NameGen {
            used: names.into_iter().collect(),
            next: BTreeMap::new(),
        }
    }

    pub(crate) fn fresh(&mut self, base: &str) -> String {
        let counter = self.next.entry(base.to_string()).or_insert(1);
        loop {
            let name = format!("{base}{counter}");
            *counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}
