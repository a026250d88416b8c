mod common;

use pif_core::kernel::SimpleType;
use pif_core::logic::*;
use pif_core::syntax::{parse_formula, parse_type};
use pif_core::translations::*;
use proptest::prelude::*;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn ty(s: &str) -> SimpleType {
    parse_type(s).unwrap()
}

fn dp() -> Formula {
    f("exists n. forall m. P(n) -> P(m)")
}

fn dp_n() -> Formula {
    simplify_double_neg(&negative_translate(&dp(), NegVariant::Kuroda), None)
}

#[test]
fn kuroda_of_an_atom() {
    assert_eq!(negative_translate(&f("P(x)"), NegVariant::Kuroda), f("~~P(x)"));
}

#[test]
fn kuroda_of_a_universal() {
    assert_eq!(
        negative_translate(&f("forall x. P(x)"), NegVariant::Kuroda),
        f("~~forall x. ~~P(x)")
    );
}

#[test]
fn kuroda_of_the_drinker() {
    let k = negative_translate(&dp(), NegVariant::Kuroda);
    assert_eq!(k, f("~~exists n. forall m. ~~(P(n) -> P(m))"));
    // The paper-style form pushes the inner double negation onto the atom.
    let shown = f("~~exists n. forall m. P(n) -> ~~P(m)");
    for env in common::all_unary_envs(3) {
        assert_eq!(oracle_eval(&k, &env).unwrap(), oracle_eval(&shown, &env).unwrap());
    }
    assert_eq!(dp_n(), f("~~exists n. forall m. P(n) -> P(m)"));
}

#[test]
fn goedel_gentzen_of_the_drinker() {
    let gg = negative_translate(&dp(), NegVariant::GoedelGentzen);
    assert!(!gg.is_quantifier_free());
    for env in common::all_unary_envs(3) {
        assert!(oracle_eval(&gg, &env).unwrap());
    }
}

#[test]
fn simplification_examples() {
    assert_eq!(simplify_double_neg(&f("~~(P(n) -> ~~P(m))"), None), f("P(n) -> P(m)"));
    assert_eq!(simplify_double_neg(&f("~~bot"), None), Formula::Bot);
    assert_eq!(simplify_double_neg(&f("~~exists n. P(n)"), None), f("~~exists n. P(n)"));
}

#[test]
fn simplification_respects_the_decidable_set() {
    let only_q = ["Q".to_string()].into_iter().collect();
    assert_eq!(simplify_double_neg(&f("~~P(0)"), Some(&only_q)), f("~~P(0)"));
    assert_eq!(simplify_double_neg(&f("~~Q(0)"), Some(&only_q)), f("Q(0)"));
}

#[test]
fn mr_of_a_prime_formula() {
    let s = mr_translate(&f("P(0)"), &BotConfig::default());
    assert_eq!(s.witness_types(), vec![SimpleType::Unit]);
    assert_eq!(s.matrix, f("P(0)"));
}

#[test]
fn mr_of_a_disjunction() {
    let s = mr_translate(&f("P(0) \\/ Q(1)"), &BotConfig::default());
    assert_eq!(
        s.witness_types(),
        vec![SimpleType::Nat, SimpleType::Unit, SimpleType::Unit]
    );
    let b = &s.witness[0].0;
    let expect = f(&format!("({b} = 0 -> P(0)) /\\ (~{b} = 0 -> Q(1))"));
    assert_eq!(s.matrix, expect);
}

#[test]
fn mr_of_the_negated_drinker() {
    for tau in ["Nat", "Nat -> Nat"] {
        let cfg = BotConfig { bot_type: ty(tau) };
        let s = mr_translate(&negative_translate(&dp(), NegVariant::Kuroda), &cfg);
        let sigma = ty(&format!("Nat -> (Nat -> ({tau}) -> {tau}) -> {tau}"));
        assert_eq!(s.witness_type(), SimpleType::arrow(sigma, ty(tau)), "{tau}");
        assert!(!s.matrix.is_quantifier_free());
    }
}

#[test]
fn dialectica_of_a_prime_formula() {
    let s = dialectica_translate(&f("P(0)"));
    assert_eq!(s.witness_types(), vec![SimpleType::Unit]);
    assert_eq!(s.counter_types(), vec![SimpleType::Unit]);
    assert_eq!(s.matrix, f("P(0)"));
}

#[test]
fn dialectica_of_the_drinker() {
    let s = dialectica_translate(&dp_n());
    assert_eq!(s.witness_types(), vec![ty("(Nat -> Nat) -> Nat")]);
    assert_eq!(s.counter_types(), vec![ty("Nat -> Nat")]);
    let (phi, g) = (&s.witness[0].0, &s.counter[0].0);
    assert_eq!(s.matrix.to_string(), format!("P({phi} {g}) -> P({g} ({phi} {g}))"));
}

#[test]
fn dialectica_of_a_negation() {
    let a = f("forall m. exists k. Q(m) /\\ P(k)");
    let inner = dialectica_translate(&a);
    let s = dialectica_translate(&Formula::not(a));
    let x = inner.witness_type();
    let y = pif_core::kernel::SimpleType::Nat;
    assert_eq!(s.witness_types(), vec![SimpleType::arrow(x.clone(), y)]);
    assert_eq!(s.counter_types(), vec![x]);
    assert!(matches!(&s.matrix, Formula::Implies(_, b) if **b == Formula::Bot));
}

/// `exists x. forall y. matrix` with Unit slots dropped.
fn expand(s: &WitnessSignature) -> Formula {
    let mut body = s.matrix.clone();
    for (y, t) in s.counter.iter().rev() {
        if !t.is_unit() {
            body = Formula::forall_typed(y.clone(), t.clone(), body);
        }
    }
    for (x, t) in s.witness.iter().rev() {
        if !t.is_unit() {
            body = Formula::exists_typed(x.clone(), t.clone(), body);
        }
    }
    body
}

fn enumerable(s: &WitnessSignature) -> bool {
    s.witness
        .iter()
        .chain(&s.counter)
        .all(|(_, t)| matches!(t, SimpleType::Nat | SimpleType::Unit) || *t == SimpleType::nat_to_nat())
}

#[test]
fn characterization_on_the_drinker() {
    for env in common::all_unary_envs(3) {
        let s = dialectica_translate(&dp());
        if enumerable(&s) {
            assert_eq!(
                oracle_eval(&dp(), &env).unwrap(),
                oracle_eval(&expand(&s), &env).unwrap()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negative_translation_preserves_truth(seed in any::<u64>(), d in 1u64..4) {
        let mut r = common::rng(seed);
        let a = common::random_formula(&mut r, 4);
        let env = common::random_unary_env(&mut r, d, &["P", "Q"]);
        let truth = oracle_eval(&a, &env).unwrap();
        for v in [NegVariant::Kuroda, NegVariant::GoedelGentzen] {
            prop_assert_eq!(oracle_eval(&negative_translate(&a, v), &env).unwrap(), truth);
        }
    }

    #[test]
    fn simplification_preserves_truth(seed in any::<u64>(), d in 1u64..4) {
        let mut r = common::rng(seed);
        let a = negative_translate(&common::random_formula(&mut r, 4), NegVariant::Kuroda);
        let env = common::random_unary_env(&mut r, d, &["P", "Q"]);
        prop_assert_eq!(
            oracle_eval(&simplify_double_neg(&a, None), &env).unwrap(),
            oracle_eval(&a, &env).unwrap()
        );
    }

    #[test]
    fn dialectica_matrix_is_quantifier_free(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::random_formula(&mut r, 4);
        prop_assert!(dialectica_translate(&a).matrix.is_quantifier_free());
    }

    #[test]
    fn mr_of_prime_formulas_has_no_content(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::random_formula(&mut r, 0);
        prop_assume!(a != Formula::Bot);
        prop_assert_eq!(mr_translate(&a, &BotConfig::default()).witness_types(), vec![SimpleType::Unit]);
    }

    #[test]
    // Disjunction flags need two values, so the carrier has at least two elements.
    fn dialectica_characterization(seed in any::<u64>(), d in 2u64..4) {
        let mut r = common::rng(seed);
        let a = common::random_formula(&mut r, 4);
        let s = dialectica_translate(&a);
        prop_assume!(enumerable(&s));
        let env = common::random_unary_env(&mut r, d, &["P", "Q"]);
        prop_assert_eq!(oracle_eval(&a, &env).unwrap(), oracle_eval(&expand(&s), &env).unwrap());
    }
}
