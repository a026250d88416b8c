//! One pass/fail line per acceptance criterion. Exits non-zero on any failure.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use pif_core::epsilon::{dp_problem, dp_witness, substitution_solve};
use pif_core::extract::*;
use pif_core::game::{play, strategy_from_realizer, Counter, GameInstance};
use pif_core::kernel::*;
use pif_core::learning::*;
use pif_core::logic::*;
use pif_core::syntax::{parse_closed_term, parse_formula};
use pif_core::translations::{dialectica_translate, BotConfig};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn dp() -> Formula {
    parse_formula("exists n. forall m. P(n) -> P(m)").unwrap()
}

fn dial_witness(r: &Realizer, g: &CounterFunction, env: &PredicateEnv) -> Result<u64, String> {
    normalize_with(&Term::app(r.term.clone(), g.to_term()), DEFAULT_FUEL, &EnvOracle(env))
        .map_err(|e| e.to_string())?
        .as_numeral()
        .ok_or_else(|| "realizer did not return a numeral".into())
}

fn tautology() -> Check {
    let mut n = 0;
    for env in common::all_unary_envs(4) {
        ensure(
            oracle_eval(&dp(), &env).map_err(|e| e.to_string())?,
            format!("DP false in {}", env.to_json()),
        )?;
        n += 1;
    }
    Ok(format!("{n} predicate tables"))
}

fn dialectica_soundness() -> Check {
    let r = extract_dialectica(&builtin_derivations().dp).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for env in common::all_unary_envs(4) {
        let rep = verify_realizer(&r, &env, &CounterSource::Exhaustive).map_err(|e| e.to_string())?;
        ensure(rep.passed, format!("counterexample {:?}", rep.counterexample))?;
        checked += rep.checked;
    }
    Ok(format!("{checked} (env, g) pairs"))
}

fn epsilon_figure() -> Check {
    let env = common::unary_env(6, |k| k != 5);
    let (w, sol) = dp_witness(&env, &CounterFunction::Table(vec![5, 0, 0, 0, 0, 0])).map_err(|e| e.to_string())?;
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("golden/epsilon_dp_failing.json")).map_err(|e| e.to_string())?;
    ensure(sol.trace.to_json() == golden, "trace differs from golden file")?;
    ensure(w == 5, format!("witness {w}"))?;
    let p = dp_problem();
    let mut worst = 0;
    for env in common::all_unary_envs(4) {
        for h in CounterFunction::all_tables(env.domain()) {
            let u: BTreeMap<_, _> = p.universal_ids().into_iter().map(|id| (id, h.clone())).collect();
            let s = substitution_solve(&p, &env, &u, None).map_err(|e| e.to_string())?;
            worst = worst.max(s.repairs);
        }
    }
    ensure(worst <= 2, format!("{worst} repairs"))?;
    Ok(format!("golden trace matches; at most {worst} repairs"))
}

fn learning_length() -> Check {
    let r = extract_dialectica(&builtin_derivations().dp).map_err(|e| e.to_string())?;
    let mut n = 0;
    for env in common::all_unary_envs(4) {
        for g in CounterFunction::all_tables(env.domain()) {
            let t = dp_learn(&env, &g, 5).map_err(|e| e.to_string())?;
            ensure(t.terminated && t.steps.len() <= 2, "procedure longer than two")?;
            ensure(t.limit == dial_witness(&r, &g, &env)?, "limit differs from realizer")?;
            n += 1;
        }
    }
    Ok(format!("{n} instances"))
}

fn omega_solver() -> Check {
    let env = PredicateEnv::family_from_fn(4, "P", |n, m| m != n + 1).map_err(|e| e.to_string())?;
    let om = Functional::host(|f| f.lookup(0));
    let ph = Functional::host(|f| f.lookup(0) + 1);
    let (f, t) = dp_omega_solve(&om, &ph, &env, "P", 10).map_err(|e| e.to_string())?;
    ensure(t.updates() == 2, format!("{} updates", t.updates()))?;
    ensure(f.to_string() == "{0->1, 1->2, _->0}", format!("limit {f}"))?;
    for seed in 0..500u64 {
        let mut r = common::rng(seed);
        let d = r.gen_range(1..=5);
        let fam = common::random_family(&mut r, d);
        let (a, b) = (common::Expr::random(&mut r, d, 3), common::Expr::random(&mut r, d, 3));
        let (om, ph) = (a.functional(d), b.functional(d));
        let (lim, t) = dp_omega_solve(&om, &ph, &fam, "P", d as usize + 2).map_err(|e| e.to_string())?;
        ensure(t.terminated, format!("seed {seed} did not terminate"))?;
        let n = a.eval(&lim, d);
        let q = !fam.holds("P", &[n, lim.peek(n)]).unwrap() || fam.holds("P", &[n, b.eval(&lim, d)]).unwrap();
        ensure(q, format!("seed {seed}: Q fails at the limit"))?;
        ensure(
            change_counts(&t).values().all(|&c| c <= 1),
            format!("seed {seed}: a coordinate changed twice"),
        )?;
    }
    Ok("fixed instance exact; 500 sampled instances".into())
}

fn mr_realizer() -> Check {
    for tau in ["Nat", "Nat -> Nat"] {
        let tau = pif_core::syntax::parse_type(tau).unwrap();
        let r = builtin_mr_realizer(&BotConfig { bot_type: tau.clone() });
        let cont = SimpleType::arrows(&[SimpleType::Nat, tau.clone()], tau.clone());
        let sigma = SimpleType::arrows(&[SimpleType::Nat, cont], tau.clone());
        let got = typecheck(&r.term, &TypingContext::new()).map_err(|e| e.to_string())?;
        ensure(got == SimpleType::arrow(sigma, tau.clone()), format!("type {got}"))?;
    }
    let r = builtin_mr_realizer(&BotConfig::default());
    let p = parse_closed_term(r"\e:Nat. \h:Nat -> Nat -> Nat. h 3 e").unwrap();
    let eval = |env: &PredicateEnv| {
        normalize_with(&Term::app(r.term.clone(), p.clone()), DEFAULT_FUEL, &EnvOracle(env))
            .ok()
            .and_then(|t| t.as_numeral())
    };
    ensure(eval(&common::unary_env(4, |_| true)) == Some(0), "YES branch")?;
    ensure(eval(&common::unary_env(4, |k| k != 3)) == Some(3), "NO branch")?;
    Ok("types for Nat and Nat -> Nat; both branches".into())
}

fn stateful() -> Check {
    let g = CounterFunction::constant(4, 2);
    type Case = (fn(u64) -> bool, u64, &'static [&'static str]);
    let cases: [Case; 3] = [
        (|k| k != 0, 0, &["~P(0)"]),
        (|_| true, 0, &["P(0)", "P(2)"]),
        (|k| k != 2, 2, &["P(0)", "~P(2)"]),
    ];
    for (p, w, lits) in cases {
        let env = common::unary_env(4, p);
        let (got, s) = stateful_dp_realizer(&g, &env, QueryState::new()).map_err(|e| e.to_string())?;
        ensure(
            got == w && s.to_strings() == lits,
            format!("case {lits:?}: got {got} {s}"),
        )?;
    }
    let mut r = common::rng(7);
    for _ in 0..1000 {
        let env = common::random_unary_env(&mut r, 4, &["P"]);
        let g = common::random_table(&mut r, 4);
        let mut s = QueryState::new();
        for _ in 0..r.gen_range(0..4) {
            let k = r.gen_range(0..4);
            s.push("P", &[k], env.holds("P", &[k]).unwrap());
        }
        let (_, s1) = stateful_dp_realizer(&g, &env, s).map_err(|e| e.to_string())?;
        ensure(s1.truthful(&env).unwrap(), "untruthful state")?;
        let (_, _, calls) = stateful_dp_realizer_memo(&g, &env, s1).map_err(|e| e.to_string())?;
        ensure(calls == 0, "saturated state still queried the env")?;
    }
    Ok("three cases exact; 1000 random triples".into())
}

fn agreement() -> Check {
    let r = extract_dialectica(&builtin_derivations().dp).map_err(|e| e.to_string())?;
    let matrix = parse_formula("P(n) -> P(m)").unwrap();
    let mut n = 0;
    for env in common::all_unary_envs(4) {
        let game = GameInstance::new(matrix.clone(), env.clone()).map_err(|e| e.to_string())?;
        for g in CounterFunction::all_tables(env.domain()) {
            let CounterFunction::Table(tab) = &g else {
                unreachable!()
            };
            let dial = dial_witness(&r, &g, &env)?;
            let (eps, _) = dp_witness(&env, &g).map_err(|e| e.to_string())?;
            let learn = dp_learn(&env, &g, 5).map_err(|e| e.to_string())?.limit;
            let mut el = strategy_from_realizer(&r).map_err(|e| e.to_string())?;
            let won = play(&game, &mut el, &mut Counter(tab.clone()))
                .map_err(|e| e.to_string())?
                .winning_move();
            ensure(
                eps == dial && learn == dial && won == Some(dial),
                format!("disagreement: eps {eps}, dialectica {dial}, learning {learn}, game {won:?}"),
            )?;
            n += 1;
        }
    }
    Ok(format!("{n} (env, counter) pairs"))
}

fn characterization() -> Check {
    let mut r = common::rng(2024);
    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < 200 {
        drawn += 1;
        ensure(drawn < 100_000, "generator rarely yields Nat-typed tuples")?;
        let a = common::random_formula(&mut r, 4);
        let s = dialectica_translate(&a);
        if !s
            .witness
            .iter()
            .chain(&s.counter)
            .all(|(_, t)| matches!(t, SimpleType::Nat | SimpleType::Unit))
        {
            continue;
        }
        let mut body = s.matrix.clone();
        for (y, t) in s.counter.iter().rev().filter(|(_, t)| !t.is_unit()) {
            body = Formula::forall_typed(y.clone(), t.clone(), body);
        }
        for (x, t) in s.witness.iter().rev().filter(|(_, t)| !t.is_unit()) {
            body = Formula::exists_typed(x.clone(), t.clone(), body);
        }
        let d = r.gen_range(2..=3);
        let env = common::random_unary_env(&mut r, d, &["P", "Q"]);
        let lhs = oracle_eval(&a, &env).map_err(|e| e.to_string())?;
        let rhs = oracle_eval(&body, &env).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, format!("{a}: {lhs} vs {rhs}"))?;
        accepted += 1;
    }
    Ok(format!("200 formulas ({drawn} drawn)"))
}

fn kernel_properties() -> Check {
    for seed in 0..1000u64 {
        let mut g = common::TermGen::new(seed);
        let (t, ty) = g.closed(1 + (seed % 30) as usize);
        let nf = normalize(&t, DEFAULT_FUEL).map_err(|e| format!("seed {seed}: {e}"))?;
        let nty = typecheck(&nf, &TypingContext::new()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(nty == ty, format!("seed {seed}: subject reduction"))?;
        ensure(
            normalize(&nf, DEFAULT_FUEL).ok().as_ref() == Some(&nf),
            format!("seed {seed}: idempotence"),
        )?;
        if ty == SimpleType::Nat {
            ensure(nf.is_numeral(), format!("seed {seed}: {nf} is not a numeral"))?;
        }
    }
    Ok("1000 terms".into())
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("drinker is a finite-domain tautology", tautology),
        (
            "Dialectica realizer is sound on all envs and counters",
            dialectica_soundness,
        ),
        ("epsilon trace on the failing env; at most 2 repairs", epsilon_figure),
        ("learning procedures have length at most two", learning_length),
        ("sequential drinker solver", omega_solver),
        ("modified realizability realizer", mr_realizer),
        ("stateful realizer and memoization", stateful),
        ("cross-interpretation agreement", agreement),
        ("Dialectica characterization on random formulas", characterization),
        ("kernel subject reduction and idempotence", kernel_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2}. {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
