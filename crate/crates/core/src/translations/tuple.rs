//! Tuple plumbing shared by the interpretations.
//!
//! A tuple of types is *canonical* when its Unit components have been
//! dropped, except that an all-Unit tuple keeps one Unit placeholder. A
//! *raw* tuple is a concatenation of canonical sub-tuples as produced by a
//! clause; `expand` and `select` convert between term lists for the two.

use crate::kernel::{SimpleType, Term};

/// Terms for each raw position given terms for the canonical components.
pub(crate) fn expand(raw: &[SimpleType], canonical: &[Term]) -> Vec<Term> {
    let mut it = canonical.iter().filter(|_| raw.iter().any(|t| !t.is_unit()));
    raw.iter()
        .map(|t| {
            if t.is_unit() {
                Term::UnitVal
            } else {
                it.next().cloned().expect("canonical tuple shorter than its raw shape")
            }
        })
        .collect()
}

/// Canonical terms from terms at every raw position.
pub(crate) fn select(raw: &[SimpleType], full: &[Term]) -> Vec<Term> {
    debug_assert_eq!(raw.len(), full.len());
    let kept: Vec<Term> = raw
        .iter()
        .zip(full)
        .filter(|(t, _)| !t.is_unit())
        .map(|(_, x)| x.clone())
        .collect();
    if kept.is_empty() {
        vec![Term::UnitVal]
    } else {
        kept
    }
}

/// `args -> res` with Unit arguments skipped; a Unit result stays Unit.
pub(crate) fn curry(args: &[SimpleType], res: &SimpleType) -> SimpleType {
    if res.is_unit() {
        return SimpleType::Unit;
    }
    args.iter()
        .rev()
        .filter(|a| !a.is_unit())
        .fold(res.clone(), |acc, a| SimpleType::arrow(a.clone(), acc))
}

/// Applies a curried function to the non-Unit arguments. A Unit-typed
/// function yields `()`.
pub(crate) fn app_skip(f: &Term, f_ty: &SimpleType, args: &[(Term, SimpleType)]) -> Term {
    if f_ty.is_unit() {
        return Term::UnitVal;
    }
    args.iter()
        .filter(|(_, t)| !t.is_unit())
        .fold(f.clone(), |acc, (a, _)| Term::app(acc, a.clone()))
}

/// Abstracts over the non-Unit parameters. A Unit body yields `()`.
pub(crate) fn lam_skip(params: &[(String, SimpleType)], body: Term, body_ty: &SimpleType) -> Term {
    if body_ty.is_unit() {
        return Term::UnitVal;
    }
    params
        .iter()
        .rev()
        .filter(|(_, t)| !t.is_unit())
        .fold(body, |acc, (x, t)| Term::lam(x.clone(), t.clone(), acc))
}

/// Right-nested product of the components; a single component is itself.
pub(crate) fn tuple_type(types: &[SimpleType]) -> SimpleType {
    match types {
        [] => SimpleType::Unit,
        [t] => t.clone(),
        [t, rest @ ..] => SimpleType::product(t.clone(), tuple_type(rest)),
    }
}

/// Right-nested pairing, matching [`tuple_type`].
pub(crate) fn tuple_term(terms: &[Term]) -> Term {
    match terms {
        [] => Term::UnitVal,
        [t] => t.clone(),
        [t, rest @ ..] => Term::pair(t.clone(), tuple_term(rest)),
    }
}

/// Projections out of a right-nested tuple of `n` components.
pub(crate) fn untuple(t: &Term, n: usize) -> Vec<Term> {
    let mut out = Vec::with_capacity(n);
    let mut cur = t.clone();
    for i in 0..n {
        if i + 1 == n {
            out.push(cur.clone());
        } else {
            out.push(Term::proj1(cur.clone()));
            cur = Term::proj2(cur);
        }
    }
    out
}
