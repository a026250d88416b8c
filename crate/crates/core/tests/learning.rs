mod common;

use common::Expr;
use pif_core::extract::{builtin_derivations, extract_dialectica};
use pif_core::kernel::{normalize_with, Term, DEFAULT_FUEL};
use pif_core::learning::*;
use pif_core::logic::*;
use pif_core::syntax::parse_closed_term;
use proptest::prelude::*;
use rand::Rng;

fn omega_instance() -> PredicateEnv {
    PredicateEnv::family_from_fn(4, "P", |n, m| m != n + 1).unwrap()
}

#[test]
fn drinker_learning_passing_env() {
    let env = common::unary_env(4, |_| true);
    let g = CounterFunction::Table(vec![2, 3, 1, 0]);
    let t = dp_learn(&env, &g, 10).unwrap();
    assert_eq!(t.limit, 0);
    assert_eq!(t.steps.len(), 1);
    assert!(t.terminated);
    assert_eq!(t.to_trace().kinds(), vec!["set", "query", "end"]);
}

#[test]
fn drinker_learning_one_update() {
    let env = common::unary_env(4, |k| k != 3);
    let g = CounterFunction::constant(4, 3);
    let t = dp_learn(&env, &g, 10).unwrap();
    assert_eq!(t.limit, 3);
    assert_eq!(t.steps.len(), 2);
    assert_eq!(t.updates(), 1);
    assert_eq!(t.to_trace().kinds(), vec!["set", "query", "update", "query", "end"]);
}

#[test]
fn immediate_success_returns_the_start() {
    let l: LearningAlgorithm<'_, u64, u64> = LearningAlgorithm::new(|_| Ok(true), |x| Ok(*x), |_, y| *y);
    let t = run_learning(&l, 7, 3).unwrap();
    assert_eq!((t.limit, t.steps.len(), t.terminated), (7, 1, true));
}

#[test]
fn running_out_of_fuel_is_reported() {
    let l: LearningAlgorithm<'_, u64, u64> = LearningAlgorithm::new(|_| Ok(false), |x| Ok(x + 1), |_, y| *y);
    let t = run_learning(&l, 0, 4).unwrap();
    assert!(!t.terminated);
    assert_eq!(t.steps.len(), 4);
    assert_eq!(t.limit, 4);
    assert!(check_trace(&l, &t).is_ok());
}

#[test]
fn validator_catches_tampering() {
    let env = common::unary_env(4, |k| k != 3);
    let g = CounterFunction::constant(4, 3);
    let l = dp_learning(&env, &g);
    let mut t = run_learning(&l, 0, 10).unwrap();
    assert!(check_trace(&l, &t).is_ok());
    t.limit = 2;
    assert!(check_trace(&l, &t).is_err());
}

#[test]
fn omega_instance_learns_two_points() {
    let om = Functional::host(|f| f.lookup(0));
    let ph = Functional::host(|f| f.lookup(0) + 1);
    let (f, t) = dp_omega_solve(&om, &ph, &omega_instance(), "P", 10).unwrap();
    assert!(t.terminated);
    assert_eq!(t.updates(), 2);
    assert_eq!(f.default, 0);
    assert_eq!(
        f.overrides.clone().into_iter().collect::<Vec<_>>(),
        vec![(0, 1), (1, 2)]
    );
    let blocks: Vec<Point> = t.steps.iter().filter_map(|s| s.block).collect();
    assert_eq!(blocks, vec![Point(0, 1), Point(1, 2)]);
}

#[test]
fn omega_instance_with_term_functionals() {
    let om = Functional::Term(parse_closed_term(r"\f:Nat -> Nat. f 0").unwrap());
    let ph = Functional::Term(parse_closed_term(r"\f:Nat -> Nat. S (f 0)").unwrap());
    let (f, t) = dp_omega_solve(&om, &ph, &omega_instance(), "P", 10).unwrap();
    assert_eq!(t.updates(), 2);
    assert_eq!(f.to_string(), "{0->1, 1->2, _->0}");
}

#[test]
fn omega_with_positive_family_stops_at_once() {
    let env = PredicateEnv::family_from_fn(4, "P", |_, m| m > 0).unwrap();
    let om = Functional::host(|f| (f.lookup(2) + 1) % 4);
    let ph = Functional::host(|f| f.lookup(1));
    let (f, t) = dp_omega_solve(&om, &ph, &env, "P", 10).unwrap();
    assert_eq!(t.steps.len(), 1);
    assert_eq!(f, FiniteFunction::constant(0));
}

#[test]
fn omega_with_false_family_stops_at_once() {
    let env = PredicateEnv::family_from_fn(3, "P", |_, _| false).unwrap();
    let om = Functional::host(|f| f.lookup(1));
    let ph = Functional::host(|_| 2);
    let (_, t) = dp_omega_solve(&om, &ph, &env, "P", 10).unwrap();
    assert_eq!(t.steps.len(), 1);
    assert!(t.terminated);
}

#[test]
fn finite_function_logs_lookups() {
    let f = FiniteFunction::constant(4).updated(2, 1);
    assert_eq!(f.lookup(2), 1);
    assert_eq!(f.lookup(0), 4);
    assert_eq!(f.peek(3), 4);
    assert_eq!(f.log(), vec![2, 0]);
    f.clear_log();
    assert!(f.log().is_empty());
}

#[test]
fn term_functionals_only_see_the_log() {
    let env = omega_instance();
    let f = FiniteFunction::constant(0).updated(0, 3);
    let om = Functional::Term(parse_closed_term(r"\f:Nat -> Nat. f (f 0)").unwrap());
    assert_eq!(om.apply(&f, &env).unwrap(), 0);
    assert_eq!(f.log(), vec![0, 3]);
}

fn lits(s: &QueryState) -> Vec<String> {
    s.to_strings()
}

#[test]
fn stateful_case_not_p0() {
    let env = common::unary_env(4, |k| k != 0);
    let g = CounterFunction::constant(4, 2);
    let (w, s) = stateful_dp_realizer(&g, &env, QueryState::new()).unwrap();
    assert_eq!((w, lits(&s)), (0, vec!["~P(0)".to_string()]));
}

#[test]
fn stateful_case_p_g0() {
    let env = common::unary_env(4, |_| true);
    let g = CounterFunction::constant(4, 2);
    let (w, s) = stateful_dp_realizer(&g, &env, QueryState::new()).unwrap();
    assert_eq!((w, lits(&s)), (0, vec!["P(0)".to_string(), "P(2)".to_string()]));
}

#[test]
fn stateful_case_not_p_g0() {
    let env = common::unary_env(4, |k| k != 2);
    let g = CounterFunction::constant(4, 2);
    let (w, s) = stateful_dp_realizer(&g, &env, QueryState::new()).unwrap();
    assert_eq!((w, lits(&s)), (2, vec!["P(0)".to_string(), "~P(2)".to_string()]));
}

#[test]
fn stateful_appends_to_the_given_state() {
    let env = common::unary_env(4, |_| true);
    let g = CounterFunction::constant(4, 0);
    let mut s = QueryState::new();
    s.push("P", &[3], true);
    let (_, s) = stateful_dp_realizer(&g, &env, s).unwrap();
    assert_eq!(lits(&s), vec!["P(3)", "P(0)", "P(0)"]);
}

#[test]
fn memo_answers_from_a_saturated_state() {
    let env = common::unary_env(4, |_| true);
    let g = CounterFunction::constant(4, 2);
    let mut s = QueryState::new();
    s.push("P", &[0], true);
    s.push("P", &[2], true);
    let (w, s2, calls) = stateful_dp_realizer_memo(&g, &env, s.clone()).unwrap();
    assert_eq!((w, calls), (0, 0));
    assert_eq!(s2, s);
}

#[test]
fn memo_counts_fresh_tests() {
    let g = CounterFunction::constant(4, 2);
    let not_p0 = common::unary_env(4, |k| k != 0);
    assert_eq!(stateful_dp_realizer_memo(&g, &not_p0, QueryState::new()).unwrap().2, 1);
    let p_all = common::unary_env(4, |_| true);
    assert_eq!(stateful_dp_realizer_memo(&g, &p_all, QueryState::new()).unwrap().2, 2);
}

#[test]
fn memo_rejects_a_lying_state() {
    let env = common::unary_env(4, |_| true);
    let mut s = QueryState::new();
    s.push("P", &[0], false);
    let err = stateful_dp_realizer_memo(&CounterFunction::constant(4, 1), &env, s).unwrap_err();
    assert_eq!(err, LearningError::InconsistentState("~P(0)".into()));
}

#[test]
fn state_monad_laws_on_a_counter() {
    let tick = || StateM::new(|s: u64| (s, s + 1));
    let (x, s) = StateM::unit(5u64).bind(|x| StateM::unit(x + 1)).run(0);
    assert_eq!((x, s), (6, 0));
    let (x, s) = tick()
        .bind(move |a| tick().bind(move |b| StateM::unit(a * 10 + b)))
        .run(3);
    assert_eq!((x, s), (34, 5));
    let (x, s) = tick().bind(StateM::unit).run(9);
    assert_eq!((x, s), (9, 10));
}

#[test]
fn drinker_learning_agrees_with_dialectica() {
    let r = extract_dialectica(&builtin_derivations().dp).unwrap();
    for env in common::all_unary_envs(4) {
        for g in CounterFunction::all_tables(env.domain()) {
            let l = dp_learning(&env, &g);
            let t = run_learning(&l, 0, 5).unwrap();
            assert!(t.terminated && t.steps.len() <= 2);
            assert!(check_trace(&l, &t).is_ok());
            let dial = normalize_with(&Term::app(r.term.clone(), g.to_term()), DEFAULT_FUEL, &EnvOracle(&env))
                .unwrap()
                .as_numeral()
                .unwrap();
            assert_eq!(t.limit, dial);
            let (w, _) = stateful_dp_realizer(&g, &env, QueryState::new()).unwrap();
            assert_eq!(w, dial);
        }
    }
}

/// Q of the sequential instance, evaluated directly.
fn omega_q(f: &FiniteFunction, om: &Expr, ph: &Expr, env: &PredicateEnv) -> bool {
    let d = env.domain();
    let n = om.eval(f, d);
    !env.holds("P", &[n, f.peek(n)]).unwrap() || env.holds("P", &[n, ph.eval(f, d)]).unwrap()
}

fn omega_case(seed: u64) {
    let mut r = common::rng(seed);
    let d = r.gen_range(1..=5);
    let env = common::random_family(&mut r, d);
    let (om, ph) = (Expr::random(&mut r, d, 3), Expr::random(&mut r, d, 3));
    let (omf, phf) = (om.functional(d), ph.functional(d));
    let l = dp_omega_learning(&omf, &phf, &env, "P");
    let t = run_learning(&l, FiniteFunction::constant(0), d as usize + 2).unwrap();
    assert!(t.terminated, "seed {seed}");
    assert!(omega_q(&t.limit, &om, &ph, &env));
    assert!(change_counts(&t).values().all(|&c| c <= 1), "seed {seed}");
    assert!(check_trace(&l, &t).is_ok());
}

#[test]
fn omega_random_suite() {
    for seed in 0..500 {
        omega_case(seed);
    }
}

proptest! {
    #[test]
    fn omega_single_write(seed in any::<u64>()) {
        omega_case(seed);
    }

    #[test]
    fn stateful_states_are_truthful(mask in 0u64..16, table in proptest::collection::vec(0u64..4, 4), pre in proptest::collection::vec(0u64..4, 0..4)) {
        let env = PredicateEnv::unary_from_mask(4, "P", mask).unwrap();
        let g = CounterFunction::Table(table);
        let mut s = QueryState::new();
        for k in pre {
            s.push("P", &[k], env.holds("P", &[k]).unwrap());
        }
        let (w, s1) = stateful_dp_realizer(&g, &env, s.clone()).unwrap();
        prop_assert!(s1.truthful(&env).unwrap());
        prop_assert_eq!(&s1.literals[..s.literals.len()], &s.literals[..]);
        let tests = s1.literals.len() - s.literals.len();
        let (wm, s2, calls) = stateful_dp_realizer_memo(&g, &env, s.clone()).unwrap();
        prop_assert_eq!(w, wm);
        prop_assert!(calls <= tests);
        prop_assert!(s2.truthful(&env).unwrap());
        let (_, _, again) = stateful_dp_realizer_memo(&g, &env, s2).unwrap();
        prop_assert_eq!(again, 0);
    }
}
