use std::collections::BTreeSet;

use super::NegVariant;
use crate::logic::Formula;

fn nn(f: Formula) -> Formula {
    Formula::not(Formula::not(f))
}

/// Double-negation translation of `f`.
///
/// Kuroda: `A^N = ~~A*`, where `*` leaves atoms alone, is homomorphic on
/// connectives and `exists`, and sends `forall x. B` to `forall x. ~~B*`.
///
/// Goedel-Gentzen: atoms `P` become `~~P`, `bot` stays, conjunction,
/// implication and `forall` are homomorphic, `A \/ B` becomes
/// `~(~A /\ ~B)` and `exists x. A` becomes `~forall x. ~A`.
pub fn negative_translate(f: &Formula, v: NegVariant) -> Formula {
    match v {
        NegVariant::Kuroda => nn(kuroda_star(f)),
        NegVariant::GoedelGentzen => gg(f),
    }
}

fn kuroda_star(f: &Formula) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) | Formula::Bot | Formula::Realizes(_) => f.clone(),
        Formula::And(a, b) => Formula::and(kuroda_star(a), kuroda_star(b)),
        Formula::Or(a, b) => Formula::or(kuroda_star(a), kuroda_star(b)),
        Formula::Implies(a, b) => Formula::implies(kuroda_star(a), kuroda_star(b)),
        Formula::Forall(x, ty, a) => Formula::forall_typed(x.clone(), ty.clone(), nn(kuroda_star(a))),
        Formula::Exists(x, ty, a) => Formula::exists_typed(x.clone(), ty.clone(), kuroda_star(a)),
    }
}

fn gg(f: &Formula) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => nn(f.clone()),
        Formula::Bot | Formula::Realizes(_) => f.clone(),
        Formula::And(a, b) => Formula::and(gg(a), gg(b)),
        Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(gg(a)), Formula::not(gg(b)))),
        Formula::Implies(a, b) => Formula::implies(gg(a), gg(b)),
        Formula::Forall(x, ty, a) => Formula::forall_typed(x.clone(), ty.clone(), gg(a)),
        Formula::Exists(x, ty, a) => Formula::not(Formula::forall_typed(x.clone(), ty.clone(), Formula::not(gg(a)))),
    }
}

/// Bottom-up removal of `~~A` whenever `A` is quantifier-free over decidable
/// atoms (predicates in `decidable`, or every predicate when `None`;
/// equations and `bot` always count).
pub fn simplify_double_neg(f: &Formula, decidable: Option<&BTreeSet<String>>) -> Formula {
    let g = match f {
        Formula::And(a, b) => Formula::and(simplify_double_neg(a, decidable), simplify_double_neg(b, decidable)),
        Formula::Or(a, b) => Formula::or(simplify_double_neg(a, decidable), simplify_double_neg(b, decidable)),
        Formula::Implies(a, b) => {
            Formula::implies(simplify_double_neg(a, decidable), simplify_double_neg(b, decidable))
        }
        Formula::Forall(x, ty, a) => Formula::forall_typed(x.clone(), ty.clone(), simplify_double_neg(a, decidable)),
        Formula::Exists(x, ty, a) => Formula::exists_typed(x.clone(), ty.clone(), simplify_double_neg(a, decidable)),
        _ => f.clone(),
    };
    match g.as_negation().and_then(Formula::as_negation) {
        Some(inner) if inner.is_decidable_qf(decidable) => inner.clone(),
        _ => g,
    }
}
