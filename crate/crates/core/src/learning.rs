//! Learning procedures and state-threaded realizers.
//!
//! A learning algorithm is a triple `(Q, xi, oplus)`: starting from `x0`
//! it keeps `x` while `Q(x)` holds and moves to `x oplus xi(x)` otherwise.
//! The drinker paradox and its sequential form are both solved this way.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::kernel::{normalize_with, Oracle, Term, DEFAULT_FUEL};
use crate::logic::{CounterFunction, EnvError, EnvOracle, LogicError, PredicateEnv};
use crate::trace::{Step, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearningError {
    #[error("state literal {0} contradicts the environment")]
    InconsistentState(String),
    #[error("functional did not evaluate to a numeral: {0}")]
    NonNumeral(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

impl From<crate::kernel::KernelError> for LearningError {
    fn from(e: crate::kernel::KernelError) -> Self {
        LearningError::Env(EnvError::Kernel(e))
    }
}

type Verdict<'a, X> = Box<dyn Fn(&X) -> Result<bool, LearningError> + 'a>;
type Block<'a, X, B> = Box<dyn Fn(&X) -> Result<B, LearningError> + 'a>;
type Combine<'a, X, B> = Box<dyn Fn(&X, &B) -> X + 'a>;

/// The triple `(Q, xi, oplus)` over approximations `X` and blocks `B`.
pub struct LearningAlgorithm<'a, X, B> {
    pub q: Verdict<'a, X>,
    pub xi: Block<'a, X, B>,
    pub oplus: Combine<'a, X, B>,
}

impl<'a, X, B> LearningAlgorithm<'a, X, B> {
    pub fn new(
        q: impl Fn(&X) -> Result<bool, LearningError> + 'a,
        xi: impl Fn(&X) -> Result<B, LearningError> + 'a,
        oplus: impl Fn(&X, &B) -> X + 'a,
    ) -> Self {
        LearningAlgorithm {
            q: Box::new(q),
            xi: Box::new(xi),
            oplus: Box::new(oplus),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearningStep<X, B> {
    pub approx: X,
    pub verdict: bool,
    /// The block learned when the verdict failed.
    pub block: Option<B>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearningTrace<X, B> {
    pub steps: Vec<LearningStep<X, B>>,
    pub limit: X,
    pub terminated: bool,
}

impl<X: fmt::Display, B: fmt::Display> LearningTrace<X, B> {
    pub fn updates(&self) -> usize {
        self.steps.iter().filter(|s| s.block.is_some()).count()
    }

    /// `set x0`, then a `query` per step and an `update` per failed query,
    /// closed by `end`.
    pub fn to_trace(&self) -> Trace {
        let mut t = Trace::new();
        if let Some(first) = self.steps.first() {
            t.push(Step::new("set").with("approx", first.approx.to_string()));
        }
        for s in &self.steps {
            t.push(
                Step::new("query")
                    .with("approx", s.approx.to_string())
                    .with("value", s.verdict),
            );
            if let Some(b) = &s.block {
                t.push(Step::new("update").with("block", b.to_string()));
            }
        }
        t.push(
            Step::new("end")
                .with("limit", self.limit.to_string())
                .with("terminated", self.terminated),
        );
        t
    }
}

/// Iterates the algorithm from `x0`, evaluating `Q` at most `fuel` times.
/// Without termination within the budget the trace ends with
/// `terminated = false`.
pub fn run_learning<X: Clone, B: Clone>(
    l: &LearningAlgorithm<'_, X, B>,
    x0: X,
    fuel: usize,
) -> Result<LearningTrace<X, B>, LearningError> {
    let mut steps = Vec::new();
    let mut x = x0;
    for _ in 0..fuel.max(1) {
        if (l.q)(&x)? {
            steps.push(LearningStep {
                approx: x.clone(),
                verdict: true,
                block: None,
            });
            return Ok(LearningTrace {
                steps,
                limit: x,
                terminated: true,
            });
        }
        let b = (l.xi)(&x)?;
        let next = (l.oplus)(&x, &b);
        steps.push(LearningStep {
            approx: x,
            verdict: false,
            block: Some(b),
        });
        x = next;
    }
    Ok(LearningTrace {
        steps,
        limit: x,
        terminated: false,
    })
}

/// Re-checks a trace against the recursion, independently of the runner.
/// Returns a description of the first violation.
pub fn check_trace<X: Clone + PartialEq + fmt::Debug, B: PartialEq + fmt::Debug>(
    l: &LearningAlgorithm<'_, X, B>,
    trace: &LearningTrace<X, B>,
) -> Result<(), String> {
    let n = trace.steps.len();
    for (i, s) in trace.steps.iter().enumerate() {
        let q = (l.q)(&s.approx).map_err(|e| e.to_string())?;
        if q != s.verdict {
            return Err(format!("step {i}: recorded verdict {} but Q gives {q}", s.verdict));
        }
        let next = trace.steps.get(i + 1).map(|t| &t.approx).unwrap_or(&trace.limit);
        if q {
            if s.block.is_some() || i + 1 != n || *next != s.approx {
                return Err(format!("step {i}: passing approximation must end the trace"));
            }
        } else {
            let b = (l.xi)(&s.approx).map_err(|e| e.to_string())?;
            if s.block.as_ref() != Some(&b) {
                return Err(format!("step {i}: block {:?} differs from xi {:?}", s.block, b));
            }
            let expect = (l.oplus)(&s.approx, &b);
            if *next != expect {
                return Err(format!("step {i}: next approximation {next:?}, expected {expect:?}"));
            }
        }
    }
    let last_passed = trace.steps.last().is_some_and(|s| s.verdict);
    if trace.terminated != last_passed {
        return Err("terminated flag disagrees with the last verdict".into());
    }
    Ok(())
}

/// The drinker paradox against `g`: `Q(x) = P(x) -> P(g x)`, `xi = g`,
/// `x oplus y = y`.
pub fn dp_learning<'a>(env: &'a PredicateEnv, g: &'a CounterFunction) -> LearningAlgorithm<'a, u64, u64> {
    LearningAlgorithm::new(
        move |x: &u64| Ok(!env.holds("P", &[*x])? || env.holds("P", &[g.apply(*x, env)?])?),
        move |x: &u64| Ok(g.apply(*x, env)?),
        |_, y| *y,
    )
}

/// Runs the drinker procedure from 0.
pub fn dp_learn(
    env: &PredicateEnv,
    g: &CounterFunction,
    fuel: usize,
) -> Result<LearningTrace<u64, u64>, LearningError> {
    run_learning(&dp_learning(env, g), 0, fuel)
}

/// A function on the naturals given by a default and finitely many
/// overrides, logging every argument it is asked about.
#[derive(Debug, Default)]
pub struct FiniteFunction {
    pub default: u64,
    pub overrides: BTreeMap<u64, u64>,
    log: RefCell<Vec<u64>>,
}

impl Clone for FiniteFunction {
    fn clone(&self) -> Self {
        FiniteFunction {
            default: self.default,
            overrides: self.overrides.clone(),
            log: RefCell::new(Vec::new()),
        }
    }
}

impl PartialEq for FiniteFunction {
    fn eq(&self, other: &Self) -> bool {
        self.default == other.default && self.overrides == other.overrides
    }
}

impl Eq for FiniteFunction {}

impl FiniteFunction {
    pub fn constant(default: u64) -> Self {
        FiniteFunction {
            default,
            ..Default::default()
        }
    }

    pub fn lookup(&self, n: u64) -> u64 {
        self.log.borrow_mut().push(n);
        self.peek(n)
    }

    /// Value without logging.
    pub fn peek(&self, n: u64) -> u64 {
        self.overrides.get(&n).copied().unwrap_or(self.default)
    }

    /// `f[n := x]`.
    pub fn updated(&self, n: u64, x: u64) -> Self {
        let mut g = self.clone();
        g.overrides.insert(n, x);
        g
    }

    pub fn log(&self) -> Vec<u64> {
        self.log.borrow().clone()
    }

    pub fn clear_log(&self) {
        self.log.borrow_mut().clear();
    }

    pub fn to_json(&self) -> Value {
        let ov: serde_json::Map<String, Value> =
            self.overrides.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({"default": self.default, "overrides": ov})
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.overrides.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}->{v}")?;
        }
        if !self.overrides.is_empty() {
            f.write_str(", ")?;
        }
        write!(f, "_->{}}}", self.default)
    }
}

/// A pair `(n, x)` learned by the sequential procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point(pub u64, pub u64);

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// A functional `(Nat -> Nat) -> Nat` that sees its argument only through
/// [`FiniteFunction::lookup`].
pub enum Functional<'a> {
    Host(Box<dyn Fn(&FiniteFunction) -> u64 + 'a>),
    /// A closed term applied to `@f`, which resolves to the finite function.
    Term(Term),
}

impl<'a> Functional<'a> {
    pub fn host(f: impl Fn(&FiniteFunction) -> u64 + 'a) -> Self {
        Functional::Host(Box::new(f))
    }

    pub fn apply(&self, f: &FiniteFunction, env: &PredicateEnv) -> Result<u64, LearningError> {
        match self {
            Functional::Host(h) => Ok(h(f)),
            Functional::Term(t) => {
                let oracle = FunctionOracle { env, f };
                let app = Term::app(t.clone(), Term::Extern("f".into()));
                let v = normalize_with(&app, DEFAULT_FUEL, &oracle)?;
                v.as_numeral().ok_or_else(|| LearningError::NonNumeral(v.to_string()))
            }
        }
    }
}

struct FunctionOracle<'e> {
    env: &'e PredicateEnv,
    f: &'e FiniteFunction,
}

impl Oracle for FunctionOracle<'_> {
    fn atom(&self, pred: &str, args: &[u64]) -> Option<bool> {
        EnvOracle(self.env).atom(pred, args)
    }

    fn apply_extern(&self, name: &str, arg: u64) -> Option<u64> {
        (name == "f").then(|| self.f.lookup(arg))
    }
}

/// The sequential drinker procedure: `Q(f) = P_{omega f}(f(omega f)) ->
/// P_{omega f}(phi f)`, `xi(f) = (omega f, phi f)`, `f oplus (n, x) = f[n := x]`,
/// with the family read from the binary atom `family`.
pub fn dp_omega_learning<'a>(
    omega: &'a Functional<'a>,
    phi: &'a Functional<'a>,
    env: &'a PredicateEnv,
    family: &'a str,
) -> LearningAlgorithm<'a, FiniteFunction, Point> {
    LearningAlgorithm::new(
        move |f: &FiniteFunction| {
            let n = omega.apply(f, env)?;
            if !env.holds(family, &[n, f.lookup(n)])? {
                return Ok(true);
            }
            Ok(env.holds(family, &[n, phi.apply(f, env)?])?)
        },
        move |f: &FiniteFunction| Ok(Point(omega.apply(f, env)?, phi.apply(f, env)?)),
        |f, p| f.updated(p.0, p.1),
    )
}

/// Runs the sequential procedure from the constant-0 function.
pub fn dp_omega_solve(
    omega: &Functional<'_>,
    phi: &Functional<'_>,
    env: &PredicateEnv,
    family: &str,
    fuel: usize,
) -> Result<(FiniteFunction, LearningTrace<FiniteFunction, Point>), LearningError> {
    let l = dp_omega_learning(omega, phi, env, family);
    let trace = run_learning(&l, FiniteFunction::constant(0), fuel)?;
    Ok((trace.limit.clone(), trace))
}

/// For each argument, how often its value changes along the trace.
pub fn change_counts(trace: &LearningTrace<FiniteFunction, Point>) -> BTreeMap<u64, usize> {
    let mut fs: Vec<&FiniteFunction> = trace.steps.iter().map(|s| &s.approx).collect();
    fs.push(&trace.limit);
    let keys: BTreeSet<u64> = fs.iter().flat_map(|f| f.overrides.keys().copied()).collect();
    keys.into_iter()
        .map(|n| {
            let changes = fs.windows(2).filter(|w| w[0].peek(n) != w[1].peek(n)).count();
            (n, changes)
        })
        .collect()
}

/// A tested literal `P(args)` or `~P(args)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub pred: String,
    pub args: Vec<u64>,
    pub polarity: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(u64::to_string).collect();
        write!(
            f,
            "{}{}({})",
            if self.polarity { "" } else { "~" },
            self.pred,
            args.join(", ")
        )
    }
}

/// The finite information gathered about the environment, in test order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryState {
    pub literals: Vec<Literal>,
}

impl QueryState {
    pub fn new() -> Self {
        QueryState::default()
    }

    pub fn push(&mut self, pred: &str, args: &[u64], polarity: bool) {
        self.literals.push(Literal {
            pred: pred.to_string(),
            args: args.to_vec(),
            polarity,
        });
    }

    /// Recorded truth value of `pred(args)`, if any.
    pub fn lookup(&self, pred: &str, args: &[u64]) -> Option<bool> {
        self.literals
            .iter()
            .find(|l| l.pred == pred && l.args == args)
            .map(|l| l.polarity)
    }

    /// Every literal agrees with `env`.
    pub fn truthful(&self, env: &PredicateEnv) -> Result<bool, LearningError> {
        for l in &self.literals {
            if env.holds(&l.pred, &l.args)? != l.polarity {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.literals.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for QueryState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

/// A state transformer `S -> (X, S)`.
pub struct StateM<'a, S, X>(Box<dyn FnOnce(S) -> (X, S) + 'a>);

impl<'a, S: 'a, X: 'a> StateM<'a, S, X> {
    pub fn new(f: impl FnOnce(S) -> (X, S) + 'a) -> Self {
        StateM(Box::new(f))
    }

    pub fn unit(x: X) -> Self {
        StateM::new(move |s| (x, s))
    }

    pub fn bind<Y: 'a>(self, k: impl FnOnce(X) -> StateM<'a, S, Y> + 'a) -> StateM<'a, S, Y> {
        StateM::new(move |s| {
            let (x, s) = (self.0)(s);
            (k(x).0)(s)
        })
    }

    pub fn run(self, s: S) -> (X, S) {
        (self.0)(s)
    }
}

/// Tests `pred(args)` against the environment and appends the literal.
/// Lookup failures read as false and are not recorded.
fn test<'a>(env: &'a PredicateEnv, pred: &'a str, args: Vec<u64>) -> StateM<'a, QueryState, bool> {
    StateM::new(move |mut s: QueryState| match env.holds(pred, &args) {
        Ok(v) => {
            s.push(pred, &args, v);
            (v, s)
        }
        Err(_) => (false, s),
    })
}

/// The drinker realizer threading a query log:
/// `~P(0)` gives 0; `P(0), P(g 0)` gives 0; `P(0), ~P(g 0)` gives `g 0`.
pub fn stateful_dp_realizer(
    g: &CounterFunction,
    env: &PredicateEnv,
    s: QueryState,
) -> Result<(u64, QueryState), LearningError> {
    let g0 = g.apply(0, env)?;
    let prog = test(env, "P", vec![0]).bind(move |p0| {
        if !p0 {
            StateM::unit(0)
        } else {
            test(env, "P", vec![g0]).bind(move |pg| StateM::unit(if pg { 0 } else { g0 }))
        }
    });
    Ok(prog.run(s))
}

/// As [`stateful_dp_realizer`], answering tests from the state first. The
/// state is audited against the environment up front (those lookups are not
/// counted); only fresh tests are counted and appended.
pub fn stateful_dp_realizer_memo(
    g: &CounterFunction,
    env: &PredicateEnv,
    mut s: QueryState,
) -> Result<(u64, QueryState, usize), LearningError> {
    for l in &s.literals {
        if env.holds(&l.pred, &l.args)? != l.polarity {
            return Err(LearningError::InconsistentState(l.to_string()));
        }
    }
    let mut calls = 0;
    let mut ask = |s: &mut QueryState, n: u64| -> Result<bool, LearningError> {
        if let Some(v) = s.lookup("P", &[n]) {
            return Ok(v);
        }
        calls += 1;
        let v = env.holds("P", &[n])?;
        s.push("P", &[n], v);
        Ok(v)
    };
    let g0 = g.apply(0, env)?;
    let w = if ask(&mut s, 0)? && !ask(&mut s, g0)? { g0 } else { 0 };
    Ok((w, s, calls))
}
