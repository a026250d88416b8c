//! The Eloise/Abelard game on a matrix `A(n, m)` read as `exists n. forall m. A(n, m)`.
//!
//! Each round Eloise names a witness `n` and Abelard answers with a
//! challenge `m`. A true round ends the game in Eloise's favour: Abelard
//! failed to refute her current witness. A false round lets her change her
//! mind. If every one of `max_rounds` rounds is false, Abelard wins.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde_json::{json, Value};
use thiserror::Error;

use crate::extract::Realizer;
use crate::kernel::{normalize_with, KernelError, SimpleType, Term, TypingContext, DEFAULT_FUEL};
use crate::logic::{eval_qf, EnvOracle, Formula, LogicError, PredicateEnv};

#[derive(Debug, Error)]
pub enum GameError {
    #[error("{player} played {value}, outside the domain 0..{domain}")]
    StrategyOutOfDomain { player: Player, value: u64, domain: u64 },
    #[error("realizer does not have the shape of a drinker strategy: {0}")]
    ShapeMismatch(String),
    #[error("matrix may only mention the variables n and m, found {0}")]
    FreeVariables(String),
    #[error("terminal i/o failed: {0}")]
    Io(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Eloise,
    Abelard,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eloise => "eloise",
            Player::Abelard => "abelard",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Winner {
    Eloise,
    Abelard,
    /// A player stopped before the game was decided.
    Undecided,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Eloise => "eloise",
            Winner::Abelard => "abelard",
            Winner::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Round {
    pub eloise: u64,
    pub abelard: u64,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub rounds: Vec<Round>,
    pub winner: Winner,
}

impl Transcript {
    /// Eloise's move in the round she won.
    pub fn winning_move(&self) -> Option<u64> {
        match self.winner {
            Winner::Eloise => self.rounds.last().map(|r| r.eloise),
            _ => None,
        }
    }

    pub fn abelard_moves(&self) -> Vec<u64> {
        self.rounds.iter().map(|r| r.abelard).collect()
    }

    pub fn to_json(&self) -> Value {
        let rounds: Vec<Value> = self
            .rounds
            .iter()
            .map(|r| json!({"eloise": r.eloise, "abelard": r.abelard, "value": r.value}))
            .collect();
        json!({"rounds": rounds, "winner": self.winner.as_str()})
    }
}

#[derive(Clone, Debug)]
pub struct GameInstance {
    pub matrix: Formula,
    pub env: PredicateEnv,
    pub max_rounds: usize,
}

impl GameInstance {
    /// A game with the default bound of `domain + 1` rounds.
    pub fn new(matrix: Formula, env: PredicateEnv) -> Result<Self, GameError> {
        if !matrix.is_quantifier_free() {
            return Err(LogicError::NotQuantifierFree(matrix.to_string()).into());
        }
        let extra: Vec<String> = matrix
            .free_vars()
            .into_iter()
            .filter(|x| x != "n" && x != "m")
            .collect();
        if !extra.is_empty() {
            return Err(GameError::FreeVariables(extra.join(", ")));
        }
        let max_rounds = env.domain() as usize + 1;
        Ok(GameInstance {
            matrix,
            env,
            max_rounds,
        })
    }

    pub fn with_max_rounds(mut self, rounds: usize) -> Self {
        self.max_rounds = rounds;
        self
    }

    pub fn domain(&self) -> u64 {
        self.env.domain()
    }

    pub fn value(&self, n: u64, m: u64) -> Result<bool, GameError> {
        let val = BTreeMap::from([("n".to_string(), n), ("m".to_string(), m)]);
        Ok(eval_qf(&self.matrix, &self.env, &val)?)
    }
}

/// Eloise picks a witness given the rounds so far; `None` resigns.
pub trait EloiseStrategy {
    fn witness(&mut self, game: &GameInstance, history: &[Round]) -> Result<Option<u64>, GameError>;
}

/// Abelard challenges Eloise's witness `n`; `None` stops the game.
pub trait AbelardStrategy {
    fn challenge(&mut self, game: &GameInstance, n: u64, history: &[Round]) -> Result<Option<u64>, GameError>;
}

/// Plays rounds until one is true or `max_rounds` are used up.
pub fn play(
    game: &GameInstance,
    eloise: &mut dyn EloiseStrategy,
    abelard: &mut dyn AbelardStrategy,
) -> Result<Transcript, GameError> {
    let d = game.domain();
    let mut rounds = Vec::new();
    let check = |player, value: u64| {
        if value >= d {
            Err(GameError::StrategyOutOfDomain {
                player,
                value,
                domain: d,
            })
        } else {
            Ok(value)
        }
    };
    while rounds.len() < game.max_rounds {
        let Some(n) = eloise.witness(game, &rounds)? else {
            return Ok(Transcript {
                rounds,
                winner: Winner::Undecided,
            });
        };
        let n = check(Player::Eloise, n)?;
        let Some(m) = abelard.challenge(game, n, &rounds)? else {
            return Ok(Transcript {
                rounds,
                winner: Winner::Undecided,
            });
        };
        let m = check(Player::Abelard, m)?;
        let value = game.value(n, m)?;
        rounds.push(Round {
            eloise: n,
            abelard: m,
            value,
        });
        if value {
            return Ok(Transcript {
                rounds,
                winner: Winner::Eloise,
            });
        }
    }
    Ok(Transcript {
        rounds,
        winner: Winner::Abelard,
    })
}

/// Eloise replaying a realizer of type `(Nat -> Nat) -> Nat` against the
/// table of Abelard's refutations, initially constant 0.
#[derive(Clone, Debug)]
pub struct RealizerStrategy {
    term: Term,
    table: Vec<u64>,
}

impl RealizerStrategy {
    pub fn from_term(term: Term) -> Result<Self, GameError> {
        let expected = SimpleType::arrow(SimpleType::nat_to_nat(), SimpleType::Nat);
        match crate::kernel::typecheck(&term, &TypingContext::new()) {
            Ok(ty) if ty == expected => Ok(RealizerStrategy {
                term,
                table: Vec::new(),
            }),
            Ok(ty) => Err(GameError::ShapeMismatch(format!(
                "term has type {ty}, expected {expected}"
            ))),
            Err(e) => Err(GameError::ShapeMismatch(e.to_string())),
        }
    }

    /// The counter table the realizer currently sees.
    pub fn table(&self) -> &[u64] {
        &self.table
    }
}

/// Turns a closed single-witness realizer with a `Nat -> Nat` counter into
/// an Eloise strategy.
pub fn strategy_from_realizer(r: &Realizer) -> Result<RealizerStrategy, GameError> {
    if !r.params.is_empty() {
        return Err(GameError::ShapeMismatch("realizer has free parameters".into()));
    }
    let counters = r.signature.counter_types();
    let live: Vec<&SimpleType> = counters.iter().filter(|t| !t.is_unit()).collect();
    if r.signature.witness.len() != 1 || live.len() != 1 || *live[0] != SimpleType::nat_to_nat() {
        return Err(GameError::ShapeMismatch(format!(
            "expected one witness against a Nat -> Nat counter, found {} witness(es) and counters [{}]",
            r.signature.witness.len(),
            counters.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        )));
    }
    RealizerStrategy::from_term(r.term.clone())
}

impl EloiseStrategy for RealizerStrategy {
    fn witness(&mut self, game: &GameInstance, history: &[Round]) -> Result<Option<u64>, GameError> {
        let d = game.domain() as usize;
        if self.table.len() != d || history.is_empty() {
            self.table = vec![0; d];
        }
        if let Some(last) = history.last() {
            if !last.value {
                self.table[last.eloise as usize] = last.abelard;
            }
        }
        let app = Term::app(self.term.clone(), Term::Table(self.table.clone()));
        let out = normalize_with(&app, DEFAULT_FUEL, &EnvOracle(&game.env))?;
        out.as_numeral()
            .map(Some)
            .ok_or_else(|| GameError::ShapeMismatch(format!("realizer returned {out}, not a numeral")))
    }
}

/// Eloise plays 0, then always Abelard's last challenge.
#[derive(Clone, Copy, Debug, Default)]
pub struct Backtracking;

impl EloiseStrategy for Backtracking {
    fn witness(&mut self, _: &GameInstance, history: &[Round]) -> Result<Option<u64>, GameError> {
        Ok(Some(history.last().map_or(0, |r| r.abelard)))
    }
}

/// A fixed list of moves for either player; running out stops the game.
#[derive(Clone, Debug, Default)]
pub struct Scripted {
    moves: Vec<u64>,
    next: usize,
}

impl Scripted {
    pub fn new(moves: Vec<u64>) -> Self {
        Scripted { moves, next: 0 }
    }

    fn pop(&mut self) -> Option<u64> {
        let m = self.moves.get(self.next).copied();
        self.next += 1;
        m
    }
}

impl EloiseStrategy for Scripted {
    fn witness(&mut self, _: &GameInstance, _: &[Round]) -> Result<Option<u64>, GameError> {
        Ok(self.pop())
    }
}

impl AbelardStrategy for Scripted {
    fn challenge(&mut self, _: &GameInstance, _: u64, _: &[Round]) -> Result<Option<u64>, GameError> {
        Ok(self.pop())
    }
}

/// Abelard answering `n` with `g(n)`.
#[derive(Clone, Debug)]
pub struct Counter(pub Vec<u64>);

impl AbelardStrategy for Counter {
    fn challenge(&mut self, _: &GameInstance, n: u64, _: &[Round]) -> Result<Option<u64>, GameError> {
        Ok(self.0.get(n as usize).copied().or(Some(0)))
    }
}

/// Abelard searching the domain for a refutation, playing 0 if none exists.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exhaustive;

impl AbelardStrategy for Exhaustive {
    fn challenge(&mut self, game: &GameInstance, n: u64, _: &[Round]) -> Result<Option<u64>, GameError> {
        for m in 0..game.domain() {
            if !game.value(n, m)? {
                return Ok(Some(m));
            }
        }
        Ok(Some(0))
    }
}

/// Abelard read line by line from a terminal. Invalid input re-prompts;
/// end of input or `q` stops the game.
pub struct Interactive<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> Interactive<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Interactive { input, output }
    }
}

impl<R: BufRead, W: Write> AbelardStrategy for Interactive<R, W> {
    fn challenge(&mut self, game: &GameInstance, n: u64, history: &[Round]) -> Result<Option<u64>, GameError> {
        let io = |e: std::io::Error| GameError::Io(e.to_string());
        writeln!(self.output, "round {}: eloise plays n = {n}", history.len() + 1).map_err(io)?;
        loop {
            write!(self.output, "abelard m> ").map_err(io)?;
            self.output.flush().map_err(io)?;
            let mut line = String::new();
            if self.input.read_line(&mut line).map_err(io)? == 0 {
                return Ok(None);
            }
            let line = line.trim();
            if line == "q" || line == "quit" {
                return Ok(None);
            }
            match line.parse::<u64>() {
                Ok(m) if m < game.domain() => return Ok(Some(m)),
                _ => writeln!(self.output, "enter a number in 0..{}", game.domain()).map_err(io)?,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn dp_game(env: PredicateEnv) -> GameInstance {
        GameInstance::new(parse_formula("P(n) -> P(m)").unwrap(), env).unwrap()
    }

    #[test]
    fn backtracking_wins_at_once_when_p_always_holds() {
        let g = dp_game(PredicateEnv::unary(4, "P", |_| true).unwrap());
        let t = play(&g, &mut Backtracking, &mut Exhaustive).unwrap();
        assert_eq!(t.winner, Winner::Eloise);
        assert_eq!(t.rounds.len(), 1);
    }

    #[test]
    fn refuted_witness_is_replaced_by_the_challenge() {
        let g = dp_game(PredicateEnv::unary(4, "P", |k| k != 3).unwrap());
        let t = play(&g, &mut Backtracking, &mut Scripted::new(vec![3, 0])).unwrap();
        assert_eq!(
            t.rounds,
            vec![
                Round {
                    eloise: 0,
                    abelard: 3,
                    value: false
                },
                Round {
                    eloise: 3,
                    abelard: 0,
                    value: true
                }
            ]
        );
    }

    #[test]
    fn true_matrix_is_won_in_round_one() {
        let g = GameInstance::new(
            Formula::implies(Formula::Bot, Formula::Bot),
            PredicateEnv::new(3).unwrap(),
        )
        .unwrap();
        let t = play(&g, &mut Scripted::new(vec![2]), &mut Scripted::new(vec![1])).unwrap();
        assert_eq!(t.winner, Winner::Eloise);
        assert_eq!(t.rounds.len(), 1);
    }

    #[test]
    fn out_of_domain_moves_are_rejected() {
        let g = dp_game(PredicateEnv::unary(2, "P", |_| true).unwrap());
        let err = play(&g, &mut Scripted::new(vec![5]), &mut Exhaustive).unwrap_err();
        assert!(matches!(
            err,
            GameError::StrategyOutOfDomain {
                player: Player::Eloise,
                value: 5,
                ..
            }
        ));
    }

    #[test]
    fn stray_variables_are_rejected() {
        let env = PredicateEnv::new(2).unwrap();
        assert!(matches!(
            GameInstance::new(parse_formula("P(k)").unwrap(), env),
            Err(GameError::FreeVariables(_))
        ));
    }

    #[test]
    fn interactive_reprompts_until_valid() {
        let g = dp_game(PredicateEnv::unary(4, "P", |k| k != 2).unwrap());
        let mut out = Vec::new();
        let mut ab = Interactive::new(&b"9\nx\n2\n1\n"[..], &mut out);
        let t = play(&g, &mut Backtracking, &mut ab).unwrap();
        assert_eq!(t.abelard_moves(), vec![2, 1]);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.matches("abelard m> ").count(), 4);
    }

    #[test]
    fn interactive_end_of_input_leaves_the_game_undecided() {
        let g = dp_game(PredicateEnv::unary(4, "P", |k| k != 2).unwrap());
        let mut ab = Interactive::new(&b""[..], Vec::new());
        let t = play(&g, &mut Backtracking, &mut ab).unwrap();
        assert_eq!(t.winner, Winner::Undecided);
        assert!(t.rounds.is_empty());
    }
}
