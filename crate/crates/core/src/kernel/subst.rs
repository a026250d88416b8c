use std::collections::{BTreeMap, BTreeSet};

use super::Term;
use crate::logic::Formula;

pub(crate) fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x, _) => {
            if !bound.iter().any(|b| b == x) {
                out.insert(x.clone());
            }
        }
        Term::Lambda(x, _, body) => {
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::Succ(a) | Term::Proj1(a) | Term::Proj2(a) => collect_free(a, bound, out),
        Term::App(a, b) | Term::Pair(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::IfThenElse(c, a, b) => {
            collect_free(c, bound, out);
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Query(phi) => {
            for x in phi.free_vars() {
                if !bound.contains(&x) {
                    out.insert(x);
                }
            }
        }
        Term::Zero | Term::Rec(_) | Term::UnitVal | Term::Table(_) | Term::Extern(_) => {}
    }
}

pub(crate) fn occurs_free(t: &Term, x: &str) -> bool {
    match t {
        Term::Var(y, _) => y == x,
        Term::Lambda(y, _, body) => y != x && occurs_free(body, x),
        Term::Succ(a) | Term::Proj1(a) | Term::Proj2(a) => occurs_free(a, x),
        Term::App(a, b) | Term::Pair(a, b) => occurs_free(a, x) || occurs_free(b, x),
        Term::IfThenElse(c, a, b) => occurs_free(c, x) || occurs_free(a, x) || occurs_free(b, x),
        Term::Query(phi) => phi.has_free(x),
        Term::Zero | Term::Rec(_) | Term::UnitVal | Term::Table(_) | Term::Extern(_) => false,
    }
}

/// A variant of `base` (priming it) that avoids every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &dyn Fn(&str) -> bool) -> String {
    let mut name = format!("{base}'");
    while avoid(&name) {
        name.push('\'');
    }
    name
}

/// Capture-avoiding substitution `t[x := s]`.
pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    if !occurs_free(t, x) {
        return t.clone();
    }
    let fv = s.free_vars();
    subst_rec(t, x, s, &fv)
}

fn subst_rec(t: &Term, x: &str, s: &Term, fv: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y, _) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        Term::Lambda(y, ty, body) => {
            if y == x || !occurs_free(body, x) {
                return t.clone();
            }
            if fv.contains(y) {
                let y2 = fresh_name(y, &|n| fv.contains(n) || occurs_free(body, n) || n == x);
                let renamed = subst_rec(
                    body,
                    y,
                    &Term::Var(y2.clone(), ty.clone()),
                    &BTreeSet::from([y2.clone()]),
                );
                Term::lam(y2, ty.clone(), subst_rec(&renamed, x, s, fv))
            } else {
                Term::lam(y.clone(), ty.clone(), subst_rec(body, x, s, fv))
            }
        }
        Term::Succ(a) => Term::succ(subst_rec(a, x, s, fv)),
        Term::Proj1(a) => Term::proj1(subst_rec(a, x, s, fv)),
        Term::Proj2(a) => Term::proj2(subst_rec(a, x, s, fv)),
        Term::App(a, b) => Term::app(subst_rec(a, x, s, fv), subst_rec(b, x, s, fv)),
        Term::Pair(a, b) => Term::pair(subst_rec(a, x, s, fv), subst_rec(b, x, s, fv)),
        Term::IfThenElse(c, a, b) => Term::ite(subst_rec(c, x, s, fv), subst_rec(a, x, s, fv), subst_rec(b, x, s, fv)),
        Term::Query(phi) => Term::query(phi.substitute(x, s)),
        Term::Zero | Term::Rec(_) | Term::UnitVal | Term::Table(_) | Term::Extern(_) => t.clone(),
    }
}

/// Simultaneous substitution of closed terms. Since the replacements are
/// closed no renaming is ever needed; binders only shadow.
pub fn substitute_closed(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(y, _) => map.get(y).cloned().unwrap_or_else(|| t.clone()),
        Term::Lambda(y, ty, body) => {
            if map.contains_key(y) {
                let mut inner = map.clone();
                inner.remove(y);
                Term::lam(y.clone(), ty.clone(), substitute_closed(body, &inner))
            } else {
                Term::lam(y.clone(), ty.clone(), substitute_closed(body, map))
            }
        }
        Term::Succ(a) => Term::succ(substitute_closed(a, map)),
        Term::Proj1(a) => Term::proj1(substitute_closed(a, map)),
        Term::Proj2(a) => Term::proj2(substitute_closed(a, map)),
        Term::App(a, b) => Term::app(substitute_closed(a, map), substitute_closed(b, map)),
        Term::Pair(a, b) => Term::pair(substitute_closed(a, map), substitute_closed(b, map)),
        Term::IfThenElse(c, a, b) => Term::ite(
            substitute_closed(c, map),
            substitute_closed(a, map),
            substitute_closed(b, map),
        ),
        Term::Query(phi) => Term::query(phi.substitute_closed(map)),
        Term::Zero | Term::Rec(_) | Term::UnitVal | Term::Table(_) | Term::Extern(_) => t.clone(),
    }
}

/// Renames every bound variable to its binding depth so that
/// α-equivalent terms become structurally equal.
pub(crate) fn canonical(t: &Term, bound: &mut Vec<String>) -> Term {
    match t {
        Term::Var(x, ty) => match bound.iter().rposition(|b| b == x) {
            Some(i) => Term::Var(format!("#{i}"), ty.clone()),
            None => t.clone(),
        },
        Term::Lambda(x, ty, body) => {
            let name = format!("#{}", bound.len());
            bound.push(x.clone());
            let b = canonical(body, bound);
            bound.pop();
            Term::lam(name, ty.clone(), b)
        }
        Term::Succ(a) => Term::succ(canonical(a, bound)),
        Term::Proj1(a) => Term::proj1(canonical(a, bound)),
        Term::Proj2(a) => Term::proj2(canonical(a, bound)),
        Term::App(a, b) => Term::app(canonical(a, bound), canonical(b, bound)),
        Term::Pair(a, b) => Term::pair(canonical(a, bound), canonical(b, bound)),
        Term::IfThenElse(c, a, b) => Term::ite(canonical(c, bound), canonical(a, bound), canonical(b, bound)),
        Term::Query(phi) => Term::query(phi.canonical_with(bound)),
        Term::Zero | Term::Rec(_) | Term::UnitVal | Term::Table(_) | Term::Extern(_) => t.clone(),
    }
}

/// α-equivalence.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    canonical(a, &mut Vec::new()) == canonical(b, &mut Vec::new())
}

impl Formula {
    pub(crate) fn canonical_term(t: &Term, bound: &mut Vec<String>) -> Term {
        canonical(t, bound)
    }
}
