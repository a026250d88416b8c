use super::dialectica::{canon_slots, name_slots, types, Slot};
use super::tuple::{app_skip, curry, expand};
use super::{BotConfig, NameGen, WitnessSignature};
use crate::kernel::{SimpleType, Term};
use crate::logic::Formula;

/// Realizer tuple of `f` under modified realizability, `bot` carrying `bot_type`.
fn mr_shape(f: &Formula, bot: &SimpleType) -> Vec<Slot> {
    match f {
        Formula::Bot => vec![Slot {
            ty: bot.clone(),
            hint: "a".into(),
        }],
        Formula::Atom(..) | Formula::Eq(..) | Formula::Realizes(_) => vec![Slot {
            ty: SimpleType::Unit,
            hint: "u".into(),
        }],
        Formula::And(a, b) => canon_slots([mr_shape(a, bot), mr_shape(b, bot)].concat()),
        Formula::Or(a, b) => [
            vec![Slot {
                ty: SimpleType::Nat,
                hint: "b".into(),
            }],
            mr_shape(a, bot),
            mr_shape(b, bot),
        ]
        .concat(),
        Formula::Implies(a, b) => {
            let aw = types(&mr_shape(a, bot));
            canon_slots(
                mr_shape(b, bot)
                    .into_iter()
                    .map(|u| Slot {
                        ty: curry(&aw, &u.ty),
                        hint: u.hint,
                    })
                    .collect(),
            )
        }
        Formula::Exists(z, ty, a) => canon_slots(
            [
                vec![Slot {
                    ty: ty.clone(),
                    hint: z.clone(),
                }],
                mr_shape(a, bot),
            ]
            .concat(),
        ),
        Formula::Forall(_, ty, a) => canon_slots(
            mr_shape(a, bot)
                .into_iter()
                .map(|w| Slot {
                    ty: curry(std::slice::from_ref(ty), &w.ty),
                    hint: w.hint,
                })
                .collect(),
        ),
    }
}

/// The formula `x mr f` for canonical realizer terms `x`.
fn mr_matrix(f: &Formula, x: &[Term], bot: &SimpleType, gen: &mut NameGen) -> Formula {
    match f {
        Formula::Bot => Formula::Realizes(x[0].clone()),
        Formula::Atom(..) | Formula::Eq(..) | Formula::Realizes(_) => f.clone(),
        Formula::And(a, b) => {
            let (sa, sb) = (mr_shape(a, bot), mr_shape(b, bot));
            let xs = expand(&[types(&sa), types(&sb)].concat(), x);
            let (xa, xb) = xs.split_at(sa.len());
            Formula::and(mr_matrix(a, xa, bot, gen), mr_matrix(b, xb, bot, gen))
        }
        Formula::Or(a, b) => {
            let sa = mr_shape(a, bot);
            let zero = Formula::Eq(x[0].clone(), Term::Zero);
            let (xa, xb) = x[1..].split_at(sa.len());
            Formula::and(
                Formula::implies(zero.clone(), mr_matrix(a, xa, bot, gen)),
                Formula::implies(Formula::not(zero), mr_matrix(b, xb, bot, gen)),
            )
        }
        Formula::Implies(a, b) => {
            let (sa, sb) = (mr_shape(a, bot), mr_shape(b, bot));
            let aw = types(&sa);
            let curried: Vec<SimpleType> = sb.iter().map(|u| curry(&aw, &u.ty)).collect();
            let fs = expand(&curried, x);
            let bound = name_slots(&sa, gen);
            let xa = WitnessSignature::slot_terms(&bound);
            let typed: Vec<(Term, SimpleType)> = xa.iter().cloned().zip(aw.iter().cloned()).collect();
            let fx: Vec<Term> = fs.iter().zip(&curried).map(|(f, t)| app_skip(f, t, &typed)).collect();
            let mut body = Formula::implies(mr_matrix(a, &xa, bot, gen), mr_matrix(b, &fx, bot, gen));
            for (name, ty) in bound.into_iter().rev() {
                if !ty.is_unit() {
                    body = Formula::forall_typed(name, ty, body);
                }
            }
            body
        }
        Formula::Exists(z, ty, a) => {
            let sa = mr_shape(a, bot);
            let xs = expand(&[vec![ty.clone()], types(&sa)].concat(), x);
            mr_matrix(&a.substitute(z, &xs[0]), &xs[1..], bot, gen)
        }
        Formula::Forall(z, ty, a) => {
            let sa = mr_shape(a, bot);
            let curried: Vec<SimpleType> = sa.iter().map(|w| curry(std::slice::from_ref(ty), &w.ty)).collect();
            let fs = expand(&curried, x);
            let zn = gen.fresh(z);
            let zt = Term::Var(zn.clone(), ty.clone());
            let point = [(zt.clone(), ty.clone())];
            let w: Vec<Term> = fs.iter().zip(&curried).map(|(f, t)| app_skip(f, t, &point)).collect();
            Formula::forall_typed(zn, ty.clone(), mr_matrix(&a.substitute(z, &zt), &w, bot, gen))
        }
    }
}

/// Modified realizability: realizer tuple and the formula `x mr f`, with
/// `bot` read as a predicate realized by terms of `cfg.bot_type`.
pub fn mr_translate(f: &Formula, cfg: &BotConfig) -> WitnessSignature {
    let shape = mr_shape(f, &cfg.bot_type);
    let mut gen = NameGen::avoiding(f.all_names());
    let witness = name_slots(&shape, &mut gen);
    let x = WitnessSignature::slot_terms(&witness);
    let matrix = mr_matrix(f, &x, &cfg.bot_type, &mut gen);
    WitnessSignature {
        witness,
        counter: Vec::new(),
        matrix,
    }
}
