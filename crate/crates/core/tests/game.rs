mod common;

use pif_core::extract::{builtin_derivations, builtin_mr_realizer, extract_dialectica, Realizer};
use pif_core::game::*;
use pif_core::logic::*;
use pif_core::syntax::{parse_closed_term, parse_formula};
use pif_core::translations::BotConfig;

fn dp_game(env: PredicateEnv) -> GameInstance {
    GameInstance::new(parse_formula("P(n) -> P(m)").unwrap(), env).unwrap()
}

fn dp_realizer() -> Realizer {
    extract_dialectica(&builtin_derivations().dp).unwrap()
}

#[test]
fn default_round_bound() {
    assert_eq!(dp_game(common::unary_env(4, |_| true)).max_rounds, 5);
}

#[test]
fn realizer_strategy_plays_zero_then_the_refutation() {
    let g = dp_game(common::unary_env(4, |k| k != 3));
    let mut el = strategy_from_realizer(&dp_realizer()).unwrap();
    let t = play(&g, &mut el, &mut Scripted::new(vec![3, 1])).unwrap();
    assert_eq!(t.winner, Winner::Eloise);
    let moves: Vec<(u64, u64, bool)> = t.rounds.iter().map(|r| (r.eloise, r.abelard, r.value)).collect();
    assert_eq!(moves, vec![(0, 3, false), (3, 1, true)]);
    assert_eq!(el.table(), &[3, 0, 0, 0]);
}

#[test]
fn after_the_update_every_challenge_fails() {
    let env = common::unary_env(4, |k| k != 3);
    for m in 0..4 {
        let g = dp_game(env.clone());
        let mut el = strategy_from_realizer(&dp_realizer()).unwrap();
        let t = play(&g, &mut el, &mut Scripted::new(vec![3, m])).unwrap();
        assert_eq!(t.winning_move(), Some(3));
    }
}

#[test]
fn constant_strategy_loses_to_an_adversary() {
    let g = dp_game(common::unary_env(4, |k| k != 3));
    let mut el = pif_core::game::RealizerStrategy::from_term(parse_closed_term(r"\g:Nat -> Nat. 0").unwrap()).unwrap();
    let t = play(&g, &mut el, &mut Exhaustive).unwrap();
    assert_eq!(t.winner, Winner::Abelard);
    assert_eq!(t.rounds.len(), g.max_rounds);
    assert!(t.rounds.iter().all(|r| r.eloise == 0 && !r.value));
}

#[test]
fn false_predicate_is_won_by_the_first_move() {
    let g = dp_game(common::unary_env(3, |_| false));
    let mut el = strategy_from_realizer(&dp_realizer()).unwrap();
    let t = play(&g, &mut el, &mut Exhaustive).unwrap();
    assert_eq!((t.rounds.len(), t.winning_move()), (1, Some(0)));
}

#[test]
fn wrong_shape_realizers_are_rejected() {
    let mr = builtin_mr_realizer(&BotConfig::default());
    assert!(matches!(strategy_from_realizer(&mr), Err(GameError::ShapeMismatch(_))));
    let bad = RealizerStrategy::from_term(parse_closed_term(r"\x:Nat. x").unwrap());
    assert!(matches!(bad, Err(GameError::ShapeMismatch(_))));
}

#[test]
fn transcript_json() {
    let g = dp_game(common::unary_env(4, |k| k != 3));
    let t = play(&g, &mut Backtracking, &mut Scripted::new(vec![3, 0])).unwrap();
    let j = t.to_json();
    assert_eq!(j["winner"], "eloise");
    assert_eq!(j["rounds"][0]["abelard"], 3);
    assert_eq!(j["rounds"][1]["value"], true);
}

/// Every Abelard strategy of the first two rounds: a first challenge and,
/// for each possible second witness, a reply.
fn two_round_strategies(d: u64) -> Vec<(u64, Vec<u64>)> {
    let mut out = Vec::new();
    for first in 0..d {
        for reply in CounterFunction::all_tables(d) {
            let CounterFunction::Table(t) = reply else {
                unreachable!()
            };
            out.push((first, t));
        }
    }
    out
}

struct Adaptive {
    first: u64,
    reply: Vec<u64>,
}

impl AbelardStrategy for Adaptive {
    fn challenge(&mut self, _: &GameInstance, n: u64, history: &[Round]) -> Result<Option<u64>, GameError> {
        Ok(Some(if history.is_empty() {
            self.first
        } else {
            self.reply[n as usize]
        }))
    }
}

#[test]
fn realizer_strategy_wins_within_two_rounds() {
    let r = dp_realizer();
    for env in common::all_unary_envs(4) {
        let d = env.domain();
        let g = dp_game(env);
        for (first, reply) in two_round_strategies(d) {
            let mut el = strategy_from_realizer(&r).unwrap();
            let t = play(&g, &mut el, &mut Adaptive { first, reply }).unwrap();
            assert_eq!(t.winner, Winner::Eloise);
            assert!(t.rounds.len() <= 2);
        }
    }
}

#[test]
fn transcripts_replay_from_recorded_moves() {
    let r = dp_realizer();
    for env in common::all_unary_envs(3) {
        let g = dp_game(env.clone());
        for h in CounterFunction::all_tables(env.domain()) {
            let CounterFunction::Table(tab) = h else { unreachable!() };
            for eloise in 0..2 {
                let run = |ab: &mut dyn AbelardStrategy| -> Transcript {
                    if eloise == 0 {
                        play(&g, &mut strategy_from_realizer(&r).unwrap(), ab).unwrap()
                    } else {
                        play(&g, &mut Backtracking, ab).unwrap()
                    }
                };
                let t = run(&mut Counter(tab.clone()));
                let again = run(&mut Scripted::new(t.abelard_moves()));
                assert_eq!(again, t);
            }
        }
    }
}
