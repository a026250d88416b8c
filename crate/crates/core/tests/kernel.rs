mod common;

use common::{nat, TermGen};
use pif_core::extract::{builtin_derivations, extract_dialectica};
use pif_core::kernel::*;
use pif_core::logic::EnvOracle;
use pif_core::syntax::{parse_closed_term, parse_term, parse_type};
use proptest::prelude::*;

fn ty(s: &str) -> SimpleType {
    parse_type(s).unwrap()
}

fn closed(s: &str) -> Term {
    parse_closed_term(s).unwrap()
}

#[test]
fn identity_has_arrow_type() {
    assert_eq!(
        typecheck(&closed(r"\x:Nat. x"), &TypingContext::new()).unwrap(),
        ty("Nat -> Nat")
    );
}

#[test]
fn recursor_signature() {
    let r = Term::Rec(nat());
    assert_eq!(
        typecheck(&r, &TypingContext::new()).unwrap(),
        ty("Nat -> (Nat -> Nat -> Nat) -> Nat -> Nat")
    );
}

#[test]
fn applying_a_number_to_a_function_is_a_mismatch() {
    let t = Term::app(closed(r"\x:Nat. x"), closed(r"\y:Nat. y"));
    let err = typecheck(&t, &TypingContext::new()).unwrap_err();
    assert!(matches!(err, KernelError::TypeMismatch { .. }), "{err}");
}

#[test]
fn unbound_variables_are_reported() {
    let err = typecheck(&Term::nat_var("z"), &TypingContext::new()).unwrap_err();
    assert_eq!(err, KernelError::UnboundVariable("z".into()));
}

#[test]
fn beta_step_then_successor() {
    let t = Term::app(closed(r"\x:Nat. S x"), Term::numeral(2));
    assert_eq!(normalize(&t, DEFAULT_FUEL).unwrap(), Term::numeral(3));
}

#[test]
fn factorial_by_recursion() {
    // mult via iterated addition, both by R[Nat].
    let add = r"\a:Nat. \b:Nat. R[Nat] a (\k:Nat. \acc:Nat. S acc) b";
    let mul = format!(r"\a:Nat. \b:Nat. R[Nat] 0 (\k:Nat. \acc:Nat. ({add}) acc a) b");
    let fact = format!(r"\n:Nat. R[Nat] 1 (\k:Nat. \acc:Nat. ({mul}) (S k) acc) n");
    let t = Term::app(closed(&fact), Term::numeral(4));
    assert_eq!(normalize(&t, DEFAULT_FUEL).unwrap().as_numeral(), Some(24));
    let mut expect = 1;
    for k in 1..=5 {
        expect *= k;
    }
    let t5 = Term::app(closed(&fact), Term::numeral(5));
    assert_eq!(normalize(&t5, DEFAULT_FUEL).unwrap().as_numeral(), Some(expect));
}

fn case_split(env: &pif_core::logic::PredicateEnv, g0: u64) -> u64 {
    let p = |k| env.holds("P", &[k]).unwrap();
    if !p(0) || p(g0) {
        0
    } else {
        g0
    }
}

#[test]
fn drinker_realizer_on_successor_counter() {
    let r = extract_dialectica(&builtin_derivations().dp).unwrap();
    let succ = closed(r"\m:Nat. S m");
    for (env, expect) in [
        (common::unary_env(4, |n| n > 0), 0),
        (common::unary_env(4, |n| n == 0), 1),
    ] {
        let t = Term::app(r.term.clone(), succ.clone());
        let out = normalize_with(&t, DEFAULT_FUEL, &EnvOracle(&env)).unwrap();
        assert_eq!(out.as_numeral(), Some(case_split(&env, 1)));
        assert_eq!(out.as_numeral(), Some(expect));
    }
}

#[test]
fn tiny_budget_runs_out() {
    let t = Term::app(closed(r"\x:Nat. S x"), Term::numeral(2));
    assert!(matches!(normalize(&t, 0), Err(KernelError::FuelExhausted(_))));
}

#[test]
fn dead_branches_are_not_forced() {
    let bomb = Term::Query(Box::new(pif_core::syntax::parse_formula("P(0)").unwrap()));
    let t = Term::ite(Term::numeral(0), Term::numeral(7), bomb);
    assert_eq!(normalize(&t, DEFAULT_FUEL).unwrap().as_numeral(), Some(7));
}

#[test]
fn substitution_under_other_binder() {
    let ctx = TypingContext::new().with("x", nat());
    let t = parse_term(r"\y:Nat. x", &ctx).unwrap();
    assert_eq!(substitute(&t, "x", &Term::Zero), closed(r"\y:Nat. 0"));
}

#[test]
fn substitution_leaves_bound_occurrences() {
    let t = closed(r"\x:Nat. x");
    assert_eq!(substitute(&t, "x", &Term::Zero), t);
}

#[test]
fn substitution_avoids_capture() {
    let ctx = TypingContext::new().with("x", ty("Nat -> Nat"));
    let t = parse_term(r"\y:Nat. x y", &ctx).unwrap();
    let s = parse_term(r"\z:Nat. y", &TypingContext::new().with("y", nat())).unwrap();
    let out = substitute(&t, "x", &s);
    let expect = parse_term(r"\w:Nat. (\z:Nat. y) w", &TypingContext::new().with("y", nat())).unwrap();
    assert!(alpha_eq(&out, &expect), "{out}");
    assert!(out.has_free("y"));
}

#[test]
fn alpha_equivalence_ignores_binder_names() {
    assert!(alpha_eq(&closed(r"\a:Nat. \b:Nat. a"), &closed(r"\x:Nat. \y:Nat. x")));
    assert!(!alpha_eq(&closed(r"\a:Nat. \b:Nat. a"), &closed(r"\x:Nat. \y:Nat. y")));
}

#[test]
fn printer_and_parser_round_trip_on_fixed_terms() {
    for s in [
        r"\x:Nat. x",
        "R[Nat -> Nat]",
        "<1, ()>",
        r"if 0 then 2 else S 3",
        r"\f:(Nat -> Nat) -> Nat. f (\y:Nat. y)",
        r"\p:Nat * Nat. fst p",
        "{0,3,1}",
    ] {
        let t = closed(s);
        assert_eq!(closed(&t.to_string()), t, "{s}");
    }
}

fn random_term(seed: u64) -> (Term, SimpleType) {
    let mut g = TermGen::new(seed);
    let size = 1 + (seed % 30) as usize;
    g.closed(size)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_terms_typecheck_at_their_target(seed in any::<u64>()) {
        let (t, ty) = random_term(seed);
        prop_assert_eq!(typecheck(&t, &TypingContext::new()).unwrap(), ty);
    }

    #[test]
    fn subject_reduction(seed in any::<u64>()) {
        let (t, ty) = random_term(seed);
        let nf = normalize(&t, DEFAULT_FUEL).unwrap();
        prop_assert_eq!(typecheck(&nf, &TypingContext::new()).unwrap(), ty);
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let (t, _) = random_term(seed);
        let nf = normalize(&t, DEFAULT_FUEL).unwrap();
        prop_assert_eq!(normalize(&nf, DEFAULT_FUEL).unwrap(), nf);
    }

    #[test]
    fn ground_normal_forms_are_values(seed in any::<u64>()) {
        let (t, ty) = random_term(seed);
        let nf = normalize(&t, DEFAULT_FUEL).unwrap();
        match ty {
            SimpleType::Nat => prop_assert!(nf.is_numeral(), "{}", nf),
            SimpleType::Unit => prop_assert_eq!(nf, Term::UnitVal),
            _ => {}
        }
    }

    #[test]
    fn normalization_is_deterministic(seed in any::<u64>()) {
        let (t, _) = random_term(seed);
        prop_assert_eq!(normalize(&t, DEFAULT_FUEL).unwrap(), normalize(&t.clone(), DEFAULT_FUEL).unwrap());
    }

    #[test]
    fn printer_round_trips(seed in any::<u64>()) {
        let (t, _) = random_term(seed);
        prop_assert_eq!(parse_closed_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn alpha_eq_is_reflexive_and_respects_renaming(seed in any::<u64>()) {
        let (t, _) = random_term(seed);
        prop_assert!(alpha_eq(&t, &t));
        let renamed = parse_closed_term(&t.to_string().replace("x", "q")).unwrap();
        prop_assert!(alpha_eq(&t, &renamed));
    }
}
