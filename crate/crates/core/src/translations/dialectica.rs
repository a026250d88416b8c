use std::collections::BTreeSet;

use super::tuple::{app_skip, curry, expand};
use super::{simplify_double_neg, NameGen, WitnessSignature};
use crate::kernel::{SimpleType, Term};
use crate::logic::Formula;

/// One tuple component: its type and the name it is derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Slot {
    pub ty: SimpleType,
    pub hint: String,
}

impl Slot {
    fn new(ty: SimpleType, hint: impl Into<String>) -> Self {
        Slot { ty, hint: hint.into() }
    }

    fn unit() -> Self {
        Slot::new(SimpleType::Unit, "u")
    }
}

/// Witness and counter tuples of a formula's interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Shape {
    pub wit: Vec<Slot>,
    pub ctr: Vec<Slot>,
}

pub(crate) fn types(slots: &[Slot]) -> Vec<SimpleType> {
    slots.iter().map(|s| s.ty.clone()).collect()
}

pub(crate) fn canon_slots(raw: Vec<Slot>) -> Vec<Slot> {
    let kept: Vec<Slot> = raw.into_iter().filter(|s| !s.ty.is_unit()).collect();
    if kept.is_empty() {
        vec![Slot::unit()]
    } else {
        kept
    }
}

/// Raw shapes of each clause, before canonicalization.
pub(crate) struct ImpParts {
    pub fs: Vec<Slot>,
    pub gs: Vec<Slot>,
}

pub(crate) fn imp_parts(a: &Shape, b: &Shape) -> ImpParts {
    let aw = types(&a.wit);
    let fs = b
        .wit
        .iter()
        .map(|u| Slot::new(curry(&aw, &u.ty), u.hint.clone()))
        .collect();
    let mut args = aw.clone();
    args.extend(types(&b.ctr));
    let gs = a
        .ctr
        .iter()
        .map(|y| Slot::new(curry(&args, &y.ty), y.hint.clone()))
        .collect();
    ImpParts { fs, gs }
}

/// Tuple shapes of the Dialectica interpretation of `f`.
pub(crate) fn dial_shape(f: &Formula) -> Shape {
    match f {
        Formula::Atom(..) | Formula::Eq(..) | Formula::Bot | Formula::Realizes(_) => Shape {
            wit: vec![Slot::unit()],
            ctr: vec![Slot::unit()],
        },
        Formula::And(a, b) => {
            let (a, b) = (dial_shape(a), dial_shape(b));
            Shape {
                wit: canon_slots([a.wit, b.wit].concat()),
                ctr: canon_slots([a.ctr, b.ctr].concat()),
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (dial_shape(a), dial_shape(b));
            Shape {
                wit: [vec![Slot::new(SimpleType::Nat, "b")], a.wit, b.wit].concat(),
                ctr: [a.ctr, b.ctr].concat(),
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (dial_shape(a), dial_shape(b));
            let parts = imp_parts(&a, &b);
            Shape {
                wit: canon_slots([parts.fs, parts.gs].concat()),
                ctr: canon_slots([a.wit, b.ctr].concat()),
            }
        }
        Formula::Exists(z, ty, a) => {
            let a = dial_shape(a);
            Shape {
                wit: canon_slots([vec![Slot::new(ty.clone(), z.clone())], a.wit].concat()),
                ctr: a.ctr,
            }
        }
        Formula::Forall(z, ty, a) => {
            let a = dial_shape(a);
            Shape {
                wit: canon_slots(
                    a.wit
                        .iter()
                        .map(|w| Slot::new(curry(std::slice::from_ref(ty), &w.ty), w.hint.clone()))
                        .collect(),
                ),
                ctr: canon_slots([vec![Slot::new(ty.clone(), z.clone())], a.ctr].concat()),
            }
        }
    }
}

fn typed(terms: &[Term], slots: &[Slot]) -> Vec<(Term, SimpleType)> {
    terms.iter().cloned().zip(slots.iter().map(|s| s.ty.clone())).collect()
}

/// The quantifier-free matrix `|f|^x_y` for canonical witness terms `x`
/// and counter terms `y`.
pub(crate) fn dial_matrix(f: &Formula, x: &[Term], y: &[Term]) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) | Formula::Bot | Formula::Realizes(_) => f.clone(),
        Formula::And(a, b) => {
            let (sa, sb) = (dial_shape(a), dial_shape(b));
            let xs = expand(&[types(&sa.wit), types(&sb.wit)].concat(), x);
            let ys = expand(&[types(&sa.ctr), types(&sb.ctr)].concat(), y);
            let (xa, xb) = xs.split_at(sa.wit.len());
            let (ya, yb) = ys.split_at(sa.ctr.len());
            Formula::and(dial_matrix(a, xa, ya), dial_matrix(b, xb, yb))
        }
        Formula::Or(a, b) => {
            let (sa, sb) = (dial_shape(a), dial_shape(b));
            let flag = x[0].clone();
            let (xa, xb) = x[1..].split_at(sa.wit.len());
            let (ya, yb) = y.split_at(sa.ctr.len());
            debug_assert_eq!(xb.len(), sb.wit.len());
            let zero = Formula::Eq(flag, Term::Zero);
            Formula::and(
                Formula::implies(zero.clone(), dial_matrix(a, xa, ya)),
                Formula::implies(Formula::not(zero), dial_matrix(b, xb, yb)),
            )
        }
        Formula::Implies(a, b) => {
            let (sa, sb) = (dial_shape(a), dial_shape(b));
            let parts = imp_parts(&sa, &sb);
            let fg = expand(&[types(&parts.fs), types(&parts.gs)].concat(), x);
            let (fpart, gpart) = fg.split_at(parts.fs.len());
            let xv = expand(&[types(&sa.wit), types(&sb.ctr)].concat(), y);
            let (xa, v) = xv.split_at(sa.wit.len());
            let xa_typed = typed(xa, &sa.wit);
            let args: Vec<(Term, SimpleType)> = [xa_typed.clone(), typed(v, &sb.ctr)].concat();
            let gxv: Vec<Term> = gpart
                .iter()
                .zip(&parts.gs)
                .map(|(g, s)| app_skip(g, &s.ty, &args))
                .collect();
            let fx: Vec<Term> = fpart
                .iter()
                .zip(&parts.fs)
                .map(|(f, s)| app_skip(f, &s.ty, &xa_typed))
                .collect();
            Formula::implies(dial_matrix(a, xa, &gxv), dial_matrix(b, &fx, v))
        }
        Formula::Exists(z, ty, a) => {
            let sa = dial_shape(a);
            let xs = expand(&[vec![ty.clone()], types(&sa.wit)].concat(), x);
            let body = a.substitute(z, &xs[0]);
            dial_matrix(&body, &xs[1..], y)
        }
        Formula::Forall(z, ty, a) => {
            let sa = dial_shape(a);
            let ys = expand(&[vec![ty.clone()], types(&sa.ctr)].concat(), y);
            let curried: Vec<SimpleType> = sa.wit.iter().map(|w| curry(std::slice::from_ref(ty), &w.ty)).collect();
            let fs = expand(&curried, x);
            let point = [(ys[0].clone(), ty.clone())];
            let w: Vec<Term> = fs.iter().zip(&curried).map(|(f, t)| app_skip(f, t, &point)).collect();
            let body = a.substitute(z, &ys[0]);
            dial_matrix(&body, &w, &ys[1..])
        }
    }
}

/// Names the slots of a shape with deterministic fresh names.
pub(crate) fn name_slots(slots: &[Slot], gen: &mut NameGen) -> Vec<(String, SimpleType)> {
    slots.iter().map(|s| (gen.fresh(&s.hint), s.ty.clone())).collect()
}

/// Dialectica interpretation with every predicate treated as decidable.
pub fn dialectica_translate(f: &Formula) -> WitnessSignature {
    dialectica_translate_with(f, None)
}

/// Dialectica interpretation: witness tuple, counter tuple and the
/// quantifier-free matrix, with inner double negations over `decidable`
/// atoms removed from the matrix.
pub fn dialectica_translate_with(f: &Formula, decidable: Option<&BTreeSet<String>>) -> WitnessSignature {
    let shape = dial_shape(f);
    let mut gen = NameGen::avoiding(f.all_names());
    let witness = name_slots(&shape.wit, &mut gen);
    let counter = name_slots(&shape.ctr, &mut gen);
    let x = WitnessSignature::slot_terms(&witness);
    let y = WitnessSignature::slot_terms(&counter);
    let matrix = simplify_double_neg(&dial_matrix(f, &x, &y), decidable);
    WitnessSignature {
        witness,
        counter,
        matrix,
    }
}
