use super::Realizer;
use crate::kernel::{SimpleType, Term};
use crate::logic::Formula;
use crate::syntax::parse_formula;
use crate::translations::{mr_translate, negative_translate, BotConfig, NegVariant};

/// `Phi p := p 0 h_p` with `h_p := \m a. if P(0) -> P(m) then a else p m (\n b. b)`,
/// realizing the Kuroda translation of the drinker paradox under modified
/// realizability with `bot` realized at `cfg.bot_type`.
pub fn builtin_mr_realizer(cfg: &BotConfig) -> Realizer {
    let tau = cfg.bot_type.clone();
    let nat = SimpleType::Nat;
    let cont = SimpleType::arrows(&[nat.clone(), tau.clone()], tau.clone());
    let sigma = SimpleType::arrows(&[nat.clone(), cont.clone()], tau.clone());
    let p = Term::var("p", sigma.clone());
    let m = Term::nat_var("m");
    let test = Formula::implies(
        Formula::atom("P", vec![Term::Zero]),
        Formula::atom("P", vec![m.clone()]),
    );
    let skip = Term::lam(
        "n",
        nat.clone(),
        Term::lam("b", tau.clone(), Term::var("b", tau.clone())),
    );
    let h = Term::lam(
        "m",
        nat,
        Term::lam(
            "a",
            tau.clone(),
            Term::ite(Term::query(test), Term::var("a", tau), Term::apps(p.clone(), [m, skip])),
        ),
    );
    let term = Term::lam("p", sigma, Term::apps(p, [Term::Zero, h]));
    let dp = parse_formula("exists n. forall m. P(n) -> P(m)").expect("builtin formula parses");
    let signature = mr_translate(&negative_translate(&dp, NegVariant::Kuroda), cfg);
    Realizer {
        term,
        signature,
        params: Vec::new(),
        provenance: vec!["builtin: modified realizability realizer of the drinker paradox".into()],
    }
}
