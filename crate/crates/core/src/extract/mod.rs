//! A mini Hilbert calculus, Dialectica extraction over it, the modified
//! realizability realizer for the drinker paradox and brute-force
//! verification of realizers over finite environments.

mod derivation;
mod dialectica;
mod mr;
mod verify;

use thiserror::Error;

use serde_json::{json, Value};

use crate::kernel::{KernelError, SimpleType, Term, TypingContext};
use crate::logic::{Formula, LogicError};
use crate::syntax::{parse_formula, parse_formula_in, parse_term, parse_type};
use crate::translations::WitnessSignature;

pub(crate) use derivation::Detail;
pub use derivation::{AxiomKind, Derivation, DerivationError, Node, RuleKind};
pub use dialectica::{extract_dialectica, extract_dialectica_with, interpreted_goal};
pub use mr::builtin_mr_realizer;
pub use verify::{verify_realizer, CounterSource, Counterexample, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("unsupported node: {0}")]
    UnsupportedNode(String),
    #[error("contraction test is not decidable: `{0}`")]
    ContractionNotDecidable(String),
    #[error("malformed realizer document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("counter `{name}` of type {ty} cannot be enumerated; supply test values")]
    CounterTypeNotEnumerable { name: String, ty: String },
    #[error("signature has {expected} counter components, {found} values supplied")]
    CounterArity { expected: usize, found: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// An extracted program together with the interpretation it realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizer {
    /// Closed except for `params`; a tuple of the witness components.
    pub term: Term,
    pub signature: WitnessSignature,
    /// Free first-order variables of the conclusion, universally read.
    pub params: Vec<(String, SimpleType)>,
    pub provenance: Vec<String>,
}

impl Realizer {
    /// Witness components as separate terms, matching `signature.witness`.
    pub fn components(&self) -> Vec<Term> {
        let n = self.signature.witness.len();
        match n {
            1 => vec![self.term.clone()],
            _ => crate::translations::tuple::untuple(&self.term, n)
                .into_iter()
                .map(|t| crate::kernel::normalize(&t, crate::kernel::DEFAULT_FUEL).unwrap_or(t))
                .collect(),
        }
    }

    /// `{"term", "type", "signature", "params", "provenance"}` with terms,
    /// types and formulas in surface syntax.
    pub fn to_json(&self) -> Value {
        let params: Vec<Value> = self
            .params
            .iter()
            .map(|(n, t)| json!({"name": n, "type": t.to_string()}))
            .collect();
        json!({
            "term": self.term.to_string(),
            "type": self.signature.witness_type().to_string(),
            "signature": self.signature.to_json(),
            "params": params,
            "provenance": self.provenance,
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self, ExtractError> {
        let bad = |m: String| ExtractError::Malformed(m);
        let text = |v: &Value, key: &str| -> Result<String, ExtractError> {
            v.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| bad(format!("missing string `{key}`")))
        };
        let slots = |v: &Value, key: &str| -> Result<Vec<(String, SimpleType)>, ExtractError> {
            let Some(list) = v.get(key) else {
                return Ok(Vec::new());
            };
            let list = list.as_array().ok_or_else(|| bad(format!("`{key}` is not a list")))?;
            list.iter()
                .map(|s| {
                    let ty = parse_type(&text(s, "type")?).map_err(|e| bad(e.to_string()))?;
                    Ok((text(s, "name")?, ty))
                })
                .collect()
        };
        let params = slots(doc, "params")?;
        let sig = doc.get("signature").ok_or_else(|| bad("missing `signature`".into()))?;
        let witness = slots(sig, "witnessTypes")?;
        let counter = slots(sig, "counterTypes")?;
        let mut ctx = TypingContext::new();
        for (n, t) in params.iter().chain(&witness).chain(&counter) {
            ctx.insert(n.clone(), t.clone());
        }
        let matrix = parse_formula_in(&text(sig, "matrix")?, &ctx).map_err(|e| bad(format!("matrix: {e}")))?;
        let mut term_ctx = TypingContext::new();
        for (n, t) in &params {
            term_ctx.insert(n.clone(), t.clone());
        }
        let term = parse_term(&text(doc, "term")?, &term_ctx).map_err(|e| bad(format!("term: {e}")))?;
        let provenance = doc
            .get("provenance")
            .and_then(Value::as_array)
            .map(|l| l.iter().filter_map(|s| s.as_str().map(str::to_string)).collect())
            .unwrap_or_default();
        Ok(Realizer {
            term,
            signature: WitnessSignature {
                witness,
                counter,
                matrix,
            },
            params,
            provenance,
        })
    }
}

/// The built-in derivations.
#[derive(Clone, Debug)]
pub struct Builtins {
    /// Classical derivation of `exists n. forall m. P(n) -> P(m)`.
    pub dp: Derivation,
    /// `exists f. forall n, m. P_n(f n) -> P_n(m)` with the family as a binary atom.
    pub dp_omega: Formula,
}

fn f(text: &str) -> Formula {
    parse_formula(text).expect("builtin formula parses")
}

/// The drinker paradox derivation and its sequential form.
pub fn builtin_derivations() -> Builtins {
    Builtins {
        dp: dp_derivation().expect("builtin derivation checks"),
        dp_omega: f("exists f:Nat -> Nat. forall n, m. P(n, f n) -> P(n, m)"),
    }
}

/// The left branch of the drinker derivation: `(exists k. ~P(k)) -> DP`.
pub fn dp_left_branch() -> Result<Derivation, DerivationError> {
    use AxiomKind::*;
    use RuleKind::*;
    let l1 = Derivation::axiom(PropTautology, f("~P(k) -> P(k) -> P(m)"))?;
    let l2 = Derivation::rule(ForallR, vec![l1], f("~P(k) -> forall m. P(k) -> P(m)"))?;
    let l3ax = Derivation::axiom(
        ExistsAx,
        f("(forall m. P(k) -> P(m)) -> exists n. forall m. P(n) -> P(m)"),
    )?;
    let l3 = Derivation::rule(
        ModusPonens,
        vec![l2, l3ax],
        f("~P(k) -> exists n. forall m. P(n) -> P(m)"),
    )?;
    Derivation::rule(
        ExistsR,
        vec![l3],
        f("(exists k. ~P(k)) -> exists n. forall m. P(n) -> P(m)"),
    )
}

/// The right branch: `(forall k. P(k)) -> DP`.
pub fn dp_right_branch() -> Result<Derivation, DerivationError> {
    use AxiomKind::*;
    use RuleKind::*;
    let r1 = Derivation::axiom(PropTautology, f("P(m) -> P(0) -> P(m)"))?;
    let r2ax = Derivation::axiom(ForallAx, f("(forall k. P(k)) -> P(m)"))?;
    let r2 = Derivation::rule(ModusPonens, vec![r2ax, r1], f("(forall k. P(k)) -> P(0) -> P(m)"))?;
    let r3 = Derivation::rule(ForallR, vec![r2], f("(forall k. P(k)) -> forall m. P(0) -> P(m)"))?;
    let r4ax = Derivation::axiom(
        ExistsAx,
        f("(forall m. P(0) -> P(m)) -> exists n. forall m. P(n) -> P(m)"),
    )?;
    Derivation::rule(
        ModusPonens,
        vec![r3, r4ax],
        f("(forall k. P(k)) -> exists n. forall m. P(n) -> P(m)"),
    )
}

fn dp_derivation() -> Result<Derivation, DerivationError> {
    use AxiomKind::*;
    use RuleKind::*;
    let dp = "exists n. forall m. P(n) -> P(m)";
    let combined = Derivation::rule(
        OrCombine,
        vec![dp_left_branch()?, dp_right_branch()?],
        f(&format!("(exists k. ~P(k)) \\/ (forall k. P(k)) -> ({dp}) \\/ ({dp})")),
    )?;
    let lem = Derivation::axiom(LemDecidable, f("(exists k. ~P(k)) \\/ forall k. P(k)"))?;
    let both = Derivation::rule(ModusPonens, vec![lem, combined], f(&format!("({dp}) \\/ ({dp})")))?;
    Derivation::rule(Contraction, vec![both], f(dp))
}
