//! Parsing of the small textual inputs the command line accepts.

use pif_core::extract::{interpreted_goal, ExtractError, Realizer};
use pif_core::kernel::{typecheck, KernelError, Term, TypingContext};
use pif_core::learning::QueryState;
use pif_core::logic::{CounterFunction, EnvError, Formula, PredicateEnv};
use pif_core::syntax::{parse_closed_term, ParseError};
use pif_core::translations::dialectica_translate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("`{0}` is not a natural number")]
    NotANumber(String),
    #[error("empty table")]
    EmptyTable,
    #[error("`{0}` is not a literal of the form P(0) or ~P(0)")]
    BadLiteral(String),
    #[error("realizer term has type {found}, the goal needs {expected}")]
    RealizerType { found: String, expected: String },
    #[error("{0} environments is too many to enumerate; pass --env or a smaller --domain")]
    TooManyEnvs(u128),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Upper bound on the environments `envs_over` will build.
pub const MAX_ENVS: u128 = 1 << 16;

/// Whitespace- or comma-separated naturals; `#` starts a comment.
pub fn parse_numbers(text: &str) -> Result<Vec<u64>, InputError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|w| !w.is_empty())
        .map(|w| w.parse().map_err(|_| InputError::NotANumber(w.to_string())))
        .collect()
}

/// A counter function: a plain list `5,0,0`, a table literal `{5, 0, 0}`
/// or any closed `Nat -> Nat` term.
pub fn parse_counter(text: &str) -> Result<CounterFunction, InputError> {
    let t = text.trim();
    if t.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
        let vals = parse_numbers(t)?;
        if vals.is_empty() {
            return Err(InputError::EmptyTable);
        }
        return Ok(CounterFunction::Table(vals));
    }
    Ok(match parse_closed_term(t)? {
        Term::Table(v) if v.is_empty() => return Err(InputError::EmptyTable),
        Term::Table(v) => CounterFunction::Table(v),
        other => CounterFunction::Term(other),
    })
}

/// Comma-separated literals such as `P(0), ~Q(1, 2)`.
pub fn parse_literals(text: &str) -> Result<QueryState, InputError> {
    let mut s = QueryState::new();
    let mut depth = 0usize;
    let mut start = 0;
    let mut parts = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    for part in parts.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || InputError::BadLiteral(part.to_string());
        let (polarity, rest) = match part.strip_prefix('~') {
            Some(r) => (false, r.trim_start()),
            None => (true, part),
        };
        let open = rest.find('(').ok_or_else(bad)?;
        let inner = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let pred = rest[..open].trim();
        if pred.is_empty() || !pred.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad());
        }
        let args = parse_numbers(inner).map_err(|_| bad())?;
        s.push(pred, &args, polarity);
    }
    Ok(s)
}

/// A realizer document, or a bare closed term realizing the Dialectica
/// reading of `goal`.
pub fn load_realizer(text: &str, goal: &Formula) -> Result<Realizer, InputError> {
    if text.trim_start().starts_with('{') {
        return Ok(Realizer::from_json(&serde_json::from_str(text)?)?);
    }
    let term = parse_closed_term(text.trim())?;
    let signature = dialectica_translate(&interpreted_goal(goal, None));
    let found = typecheck(&term, &TypingContext::new())?;
    if found != signature.witness_type() {
        return Err(InputError::RealizerType {
            found: found.to_string(),
            expected: signature.witness_type().to_string(),
        });
    }
    Ok(Realizer {
        term,
        signature,
        params: Vec::new(),
        provenance: vec!["term file".to_string()],
    })
}

/// Every environment over `domain` deciding the given unary predicates.
pub fn envs_over(preds: &[String], domain: u64) -> Result<Vec<PredicateEnv>, InputError> {
    let bits = domain as u128 * preds.len() as u128;
    if bits >= 128 || 1u128 << bits > MAX_ENVS {
        return Err(InputError::TooManyEnvs(if bits >= 128 { u128::MAX } else { 1 << bits }));
    }
    let mut out = Vec::with_capacity(1 << bits);
    for code in 0u64..(1 << bits) {
        let mut env = PredicateEnv::new(domain)?;
        for (i, p) in preds.iter().enumerate() {
            env.declare(p)?;
            for k in 0..domain {
                if code >> (i as u64 * domain + k) & 1 == 1 {
                    env.set(p, &[k], true)?;
                }
            }
        }
        out.push(env);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pif_core::syntax::parse_formula;

    #[test]
    fn counters() {
        assert_eq!(parse_counter("5,0, 0").unwrap(), CounterFunction::Table(vec![5, 0, 0]));
        assert_eq!(parse_counter("{1, 2}").unwrap(), CounterFunction::Table(vec![1, 2]));
        assert!(matches!(
            parse_counter(r"\m:Nat. S m").unwrap(),
            CounterFunction::Term(_)
        ));
        assert!(matches!(parse_counter(""), Err(InputError::EmptyTable)));
        assert!(parse_counter("x y").is_err());
    }

    #[test]
    fn numbers_with_comments() {
        assert_eq!(parse_numbers("3 1 # first two\n2,0\n").unwrap(), vec![3, 1, 2, 0]);
        assert!(parse_numbers("3 -1").is_err());
    }

    #[test]
    fn literals() {
        let s = parse_literals("P(0), ~P(3), Q(1, 2)").unwrap();
        assert_eq!(s.to_strings(), vec!["P(0)", "~P(3)", "Q(1, 2)"]);
        assert!(parse_literals("").unwrap().literals.is_empty());
        assert!(parse_literals("P0").is_err());
        assert!(parse_literals("~(1)").is_err());
    }

    #[test]
    fn bare_terms_get_the_goal_signature() {
        let dp = parse_formula("exists n. forall m. P(n) -> P(m)").unwrap();
        let r = load_realizer(r"\g:Nat -> Nat. 0", &dp).unwrap();
        assert_eq!(r.signature.witness_type().to_string(), "(Nat -> Nat) -> Nat");
        assert!(matches!(
            load_realizer(r"\x:Nat. x", &dp),
            Err(InputError::RealizerType { .. })
        ));
    }

    #[test]
    fn env_enumeration() {
        let envs = envs_over(&["P".into(), "Q".into()], 2).unwrap();
        assert_eq!(envs.len(), 16);
        assert!(matches!(envs_over(&["P".into()], 17), Err(InputError::TooManyEnvs(_))));
    }
}
