//! Epsilonization of derivations and the substitution solver.
//!
//! Quantifiers are replaced by epsilon terms: `exists x. A` becomes
//! `A(εx A)` and `forall x. A` becomes `A(εx ~A)`. Every instance of a
//! quantifier axiom yields a critical axiom, and the solver looks for
//! natural-number values of the existential epsilon terms that make all
//! critical axioms true, starting from 0 and repairing the first failing
//! axiom until none fails.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::extract::{AxiomKind, Derivation, Detail, Node, RuleKind};
use crate::kernel::{normalize_with, substitute, substitute_closed, SimpleType, Term, DEFAULT_FUEL};
use crate::logic::{eval_qf, CounterFunction, EnvOracle, Formula, LogicError, PredicateEnv};
use crate::trace::{Step, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsilonError {
    #[error("cannot epsilonize: {0}")]
    UnsupportedNode(String),
    #[error("no repair left after {0} repairs")]
    FuelExhausted(usize),
    #[error("no interpretation supplied for the universal term {0}")]
    MissingInterpretation(String),
    #[error("universal term {0} takes {1} parameters; counter functions take one")]
    UnsupportedArity(String, usize),
    #[error("critical axiom {0} fails but its target {1} is universal and cannot be repaired")]
    CannotRepair(String, String),
    #[error("term `{0}` does not evaluate to a numeral")]
    NonNumeral(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

impl From<crate::kernel::KernelError> for EpsilonError {
    fn from(e: crate::kernel::KernelError) -> Self {
        EpsilonError::Logic(LogicError::Kernel(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Solved for by the substitution method.
    Existential,
    /// Interpreted by a caller-supplied counter function.
    Universal,
}

/// An epsilon term `εx A(x, p1, ..., pk)`, abstracted over its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonTerm {
    pub id: String,
    pub bound_var: String,
    /// The matrix with parameters written `#1`, `#2`, ...
    pub matrix: Formula,
    pub role: Role,
    pub arity: usize,
    pub rank: usize,
}

impl EpsilonTerm {
    /// The term `id p1 ... pk` for given parameters.
    pub fn apply(&self, params: Vec<Term>) -> Term {
        let ty = SimpleType::arrows(&vec![SimpleType::Nat; self.arity], SimpleType::Nat);
        Term::apps(Term::Var(self.id.clone(), ty), params)
    }
}

impl fmt::Display for EpsilonTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = (1..=self.arity).map(|i| format!("#{i}")).collect();
        if params.is_empty() {
            write!(f, "{} := ε{}. {}", self.id, self.bound_var, self.matrix)
        } else {
            write!(
                f,
                "{}[{}] := ε{}. {}",
                self.id,
                params.join(", "),
                self.bound_var,
                self.matrix
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    /// From `B(t) -> exists x. B(x)`: `B(t) -> B(εx B)`.
    Exists,
    /// From `(forall x. A(x)) -> A(t)`: `A(εx ~A) -> A(t)`.
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalAxiom {
    pub id: String,
    pub kind: CriticalKind,
    /// The `t` of the instance.
    pub instance: Term,
    /// The epsilon term the axiom constrains, applied to its parameters.
    pub target: Term,
    pub target_id: String,
    pub formula: Formula,
}

/// Everything the solver needs: the epsilon terms, the critical axioms in
/// examination order and the epsilonized conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonProblem {
    pub terms: Vec<EpsilonTerm>,
    pub axioms: Vec<CriticalAxiom>,
    pub conclusion: Formula,
}

impl EpsilonProblem {
    pub fn term(&self, id: &str) -> Option<&EpsilonTerm> {
        self.terms.iter().find(|t| t.id == id)
    }

    pub fn universal_ids(&self) -> Vec<String> {
        self.terms
            .iter()
            .filter(|t| t.role == Role::Universal)
            .map(|t| t.id.clone())
            .collect()
    }
}

/// Values of existential epsilon terms, keyed by id and parameter values.
/// Missing entries read as 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EpsilonAssignment {
    values: BTreeMap<(String, Vec<u64>), u64>,
}

impl EpsilonAssignment {
    pub fn get(&self, id: &str, params: &[u64]) -> u64 {
        self.values
            .get(&(id.to_string(), params.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn set(&mut self, id: &str, params: &[u64], value: u64) {
        self.values.insert((id.to_string(), params.to_vec()), value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.values.iter().map(|((id, ps), v)| (key_name(id, ps), *v))
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.entries().map(|(k, v)| (k, json!(v))).collect::<Map<_, _>>())
    }
}

fn key_name(id: &str, ps: &[u64]) -> String {
    if ps.is_empty() {
        id.to_string()
    } else {
        let ps: Vec<String> = ps.iter().map(u64::to_string).collect();
        format!("{id}[{}]", ps.join(", "))
    }
}

#[derive(Default)]
struct Epsilonizer {
    terms: Vec<EpsilonTerm>,
    /// Identity keys: the matrix with the bound variable written `#x`.
    keys: Vec<Formula>,
}

const BOUND: &str = "#x";

impl Epsilonizer {
    fn is_eps(&self, name: &str) -> bool {
        self.terms.iter().any(|t| t.id == name)
    }

    /// Epsilon form of `f`. `polarity` is tracked for the conclusion only,
    /// where it decides which terms are universal.
    fn eps(&mut self, f: &Formula, polarity: Option<bool>) -> Result<Formula, EpsilonError> {
        Ok(match f {
            Formula::Atom(..) | Formula::Eq(..) | Formula::Bot | Formula::Realizes(_) => f.clone(),
            Formula::And(a, b) => Formula::and(self.eps(a, polarity)?, self.eps(b, polarity)?),
            Formula::Or(a, b) => Formula::or(self.eps(a, polarity)?, self.eps(b, polarity)?),
            Formula::Implies(a, b) => Formula::implies(self.eps(a, polarity.map(|p| !p))?, self.eps(b, polarity)?),
            Formula::Exists(x, ty, a) | Formula::Forall(x, ty, a) => {
                if *ty != SimpleType::Nat {
                    return Err(EpsilonError::UnsupportedNode(format!(
                        "quantifier over {ty} in `{f}`; only Nat quantifiers are epsilonized"
                    )));
                }
                let exists = matches!(f, Formula::Exists(..));
                let body = self.eps(a, polarity)?;
                let universal = polarity.is_some_and(|p| p != exists);
                let matrix = if exists {
                    body.clone()
                } else {
                    Formula::not(body.clone())
                };
                let e = self.term_for(x, &matrix, universal);
                body.substitute(x, &e)
            }
        })
    }

    /// The epsilon term `εx matrix`, registered on first use.
    fn term_for(&mut self, x: &str, matrix: &Formula, universal: bool) -> Term {
        let mut params: Vec<Term> = Vec::new();
        let key = matrix.map_terms(&mut |t| self.abstract_term(t, x, &mut params));
        let role = if universal { Role::Universal } else { Role::Existential };
        let idx = match self.keys.iter().position(|k| *k == key) {
            Some(i) => {
                if universal {
                    self.terms[i].role = Role::Universal;
                }
                i
            }
            None => {
                let mut rank = 0;
                key.visit_terms(&mut |t| {
                    t.visit(&mut |s| {
                        if let Term::Var(n, _) = s {
                            if let Some(e) = self.terms.iter().find(|e| &e.id == n) {
                                rank = rank.max(e.rank);
                            }
                        }
                    })
                });
                let base = format!("ε_{x}");
                let mut id = base.clone();
                let mut i = 2;
                while self.is_eps(&id) {
                    id = format!("{base}{i}");
                    i += 1;
                }
                let display = key.substitute(BOUND, &Term::nat_var(x));
                self.terms.push(EpsilonTerm {
                    id,
                    bound_var: x.to_string(),
                    matrix: display,
                    role,
                    arity: params.len(),
                    rank: rank + 1,
                });
                self.keys.push(key);
                self.terms.len() - 1
            }
        };
        self.terms[idx].apply(params)
    }

    /// Replaces maximal `x`-free argument subterms by `#i` placeholders,
    /// collecting them in `params`.
    fn abstract_term(&self, t: &Term, x: &str, params: &mut Vec<Term>) -> Term {
        if !t.has_free(x) {
            let i = match params.iter().position(|p| p == t) {
                Some(i) => i,
                None => {
                    params.push(t.clone());
                    params.len() - 1
                }
            };
            return Term::nat_var(format!("#{}", i + 1));
        }
        match t {
            Term::Var(..) => Term::nat_var(BOUND),
            Term::Succ(a) => Term::succ(self.abstract_term(a, x, params)),
            Term::App(..) => {
                let (head, args) = t.spine();
                let args: Vec<Term> = args.into_iter().map(|a| self.abstract_term(a, x, params)).collect();
                Term::apps(substitute(head, x, &Term::nat_var(BOUND)), args)
            }
            _ => substitute(t, x, &Term::nat_var(BOUND)),
        }
    }
}

/// Epsilon terms, critical axioms (ordered by rank of their target, then
/// by position in the derivation) and the epsilonized conclusion.
pub fn epsilonize(d: &Derivation) -> Result<EpsilonProblem, EpsilonError> {
    let mut ez = Epsilonizer::default();
    let conclusion = ez.eps(d.conclusion(), Some(true))?;
    let mut found = Vec::new();
    walk(&mut ez, d, &BTreeMap::new(), &mut found)?;
    let rank = |a: &CriticalAxiom| ez.terms.iter().find(|e| e.id == a.target_id).map_or(0, |e| e.rank);
    found.sort_by_key(rank);
    for (i, a) in found.iter_mut().enumerate() {
        a.id = format!("C{}", i + 1);
    }
    Ok(EpsilonProblem {
        terms: ez.terms,
        axioms: found,
        conclusion,
    })
}

fn without(sigma: &BTreeMap<String, Term>, x: &str) -> BTreeMap<String, Term> {
    let mut s = sigma.clone();
    s.remove(x);
    s
}

fn walk(
    ez: &mut Epsilonizer,
    d: &Derivation,
    sigma: &BTreeMap<String, Term>,
    out: &mut Vec<CriticalAxiom>,
) -> Result<(), EpsilonError> {
    match d.node() {
        Node::Axiom(kind @ (AxiomKind::ExistsAx | AxiomKind::ForallAx)) => {
            let Detail::Instance { var, body, term } = &d.detail else {
                unreachable!("quantifier axioms carry their instance")
            };
            let a = ez.eps(&body.substitute_closed(&without(sigma, var)), None)?;
            let t = substitute_closed(term, sigma);
            let (kind, matrix) = match kind {
                AxiomKind::ExistsAx => (CriticalKind::Exists, a.clone()),
                _ => (CriticalKind::Forall, Formula::not(a.clone())),
            };
            let target = ez.term_for(var, &matrix, false);
            let at_t = a.substitute(var, &t);
            let at_e = a.substitute(var, &target);
            let formula = match kind {
                CriticalKind::Exists => Formula::implies(at_t, at_e),
                CriticalKind::Forall => Formula::implies(at_e, at_t),
            };
            let (Term::Var(target_id, _), _) = target.spine() else {
                unreachable!()
            };
            out.push(CriticalAxiom {
                id: String::new(),
                kind,
                instance: t,
                target_id: target_id.clone(),
                target,
                formula,
            });
            Ok(())
        }
        Node::Axiom(_) => Ok(()),
        Node::Rule(kind @ (RuleKind::ForallR | RuleKind::ExistsR), ps) => {
            let Detail::Eigen { var, body, eigen } = &d.detail else {
                unreachable!("quantifier rules carry their eigenvariable")
            };
            let b = ez.eps(&body.substitute_closed(&without(sigma, var)), None)?;
            let matrix = if *kind == RuleKind::ForallR { Formula::not(b) } else { b };
            let e = ez.term_for(var, &matrix, false);
            let mut inner = sigma.clone();
            inner.insert(eigen.clone(), e);
            walk(ez, &ps[0], &inner, out)
        }
        Node::Rule(_, ps) => {
            for p in ps {
                walk(ez, p, sigma, out)?;
            }
            Ok(())
        }
    }
}

/// Evaluation of epsilon formulas under an assignment.
struct Valuation<'a> {
    problem: &'a EpsilonProblem,
    assignment: &'a EpsilonAssignment,
    universal: &'a BTreeMap<String, CounterFunction>,
    env: &'a PredicateEnv,
}

impl Valuation<'_> {
    fn nat(&self, t: &Term) -> Result<u64, EpsilonError> {
        let r = self.resolve(t, false)?;
        let n = normalize_with(&r, DEFAULT_FUEL, &EnvOracle(self.env))?;
        n.as_numeral().ok_or_else(|| EpsilonError::NonNumeral(t.to_string()))
    }

    /// Replaces epsilon applications by their values. With `display`,
    /// universal terms stay symbolic (their parameters are still resolved).
    fn resolve(&self, t: &Term, display: bool) -> Result<Term, EpsilonError> {
        if let (Term::Var(id, _), args) = t.spine() {
            if let Some(e) = self.problem.term(id) {
                if display && e.role == Role::Universal {
                    let args = args
                        .into_iter()
                        .map(|a| self.resolve(a, true))
                        .collect::<Result<Vec<_>, _>>()?;
                    return Ok(e.apply(args));
                }
                let vals = args.into_iter().map(|a| self.nat(a)).collect::<Result<Vec<_>, _>>()?;
                return Ok(Term::numeral(self.lookup(e, &vals)?));
            }
        }
        let r = |s: &Term| self.resolve(s, display);
        Ok(match t {
            Term::Succ(a) => Term::succ(r(a)?),
            Term::App(a, b) => Term::app(r(a)?, r(b)?),
            Term::Pair(a, b) => Term::pair(r(a)?, r(b)?),
            Term::Proj1(a) => Term::proj1(r(a)?),
            Term::Proj2(a) => Term::proj2(r(a)?),
            Term::Lambda(x, ty, a) => Term::lam(x.clone(), ty.clone(), r(a)?),
            Term::IfThenElse(c, a, b) => Term::ite(r(c)?, r(a)?, r(b)?),
            other => other.clone(),
        })
    }

    fn lookup(&self, e: &EpsilonTerm, vals: &[u64]) -> Result<u64, EpsilonError> {
        match e.role {
            Role::Existential => Ok(self.assignment.get(&e.id, vals)),
            Role::Universal => {
                let f = self
                    .universal
                    .get(&e.id)
                    .ok_or_else(|| EpsilonError::MissingInterpretation(e.id.clone()))?;
                let arg = match vals {
                    [] => 0,
                    [n] => *n,
                    _ => return Err(EpsilonError::UnsupportedArity(e.id.clone(), vals.len())),
                };
                Ok(f.apply(arg, self.env).map_err(LogicError::from)?)
            }
        }
    }

    fn holds(&self, f: &Formula) -> Result<bool, EpsilonError> {
        let closed = f.try_map_terms(&mut |t| self.resolve(t, false))?;
        Ok(eval_qf(&closed, self.env, &BTreeMap::new())?)
    }

    fn show(&self, f: &Formula) -> Result<Formula, EpsilonError> {
        f.try_map_terms(&mut |t| self.resolve(t, true))
    }
}

/// Truth of a critical axiom (or any epsilon formula) under an assignment.
pub fn evaluate(
    problem: &EpsilonProblem,
    f: &Formula,
    assignment: &EpsilonAssignment,
    universal: &BTreeMap<String, CounterFunction>,
    env: &PredicateEnv,
) -> Result<bool, EpsilonError> {
    Valuation {
        problem,
        assignment,
        universal,
        env,
    }
    .holds(f)
}

/// Result of a successful solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub assignment: EpsilonAssignment,
    pub trace: Trace,
    pub repairs: usize,
}

/// Default repair budget: `(#axioms)^2 + 8`.
pub fn default_fuel(problem: &EpsilonProblem) -> usize {
    problem.axioms.len().pow(2) + 8
}

/// Assigns 0 to every existential term, queries the conclusion, then
/// repairs the first failing critical axiom (setting its target to the
/// value of its instance term) and restarts from the head of the list,
/// until every axiom holds.
pub fn substitution_solve(
    problem: &EpsilonProblem,
    env: &PredicateEnv,
    universal: &BTreeMap<String, CounterFunction>,
    fuel: Option<usize>,
) -> Result<Solution, EpsilonError> {
    let fuel = fuel.unwrap_or_else(|| default_fuel(problem));
    let mut assignment = EpsilonAssignment::default();
    for e in &problem.terms {
        if e.role == Role::Existential && e.arity == 0 {
            assignment.set(&e.id, &[], 0);
        }
    }
    let mut trace = Trace::new();
    if problem.axioms.is_empty() {
        return Ok(Solution {
            assignment,
            trace,
            repairs: 0,
        });
    }
    trace.push(Step::new("init").with("assignment", assignment.to_json()));
    {
        let v = Valuation {
            problem,
            assignment: &assignment,
            universal,
            env,
        };
        trace.push(
            Step::new("query")
                .with("formula", v.show(&problem.conclusion)?.to_string())
                .with("value", v.holds(&problem.conclusion)?),
        );
    }
    let mut repairs = 0;
    loop {
        let v = Valuation {
            problem,
            assignment: &assignment,
            universal,
            env,
        };
        let mut failing = None;
        for a in &problem.axioms {
            if !v.holds(&a.formula)? {
                failing = Some(a);
                break;
            }
        }
        let Some(a) = failing else { break };
        if repairs >= fuel {
            return Err(EpsilonError::FuelExhausted(repairs));
        }
        let e = problem.term(&a.target_id).expect("target registered");
        if e.role == Role::Universal {
            return Err(EpsilonError::CannotRepair(a.id.clone(), e.id.clone()));
        }
        let (_, args) = a.target.spine();
        let params = args.into_iter().map(|t| v.nat(t)).collect::<Result<Vec<_>, _>>()?;
        let value = v.nat(&a.instance)?;
        assignment.set(&e.id, &params, value);
        repairs += 1;
        trace.push(
            Step::new("repair")
                .with("axiom", a.id.clone())
                .with("term", key_name(&e.id, &params))
                .with("value", value)
                .with("assignment", assignment.to_json()),
        );
    }
    trace.push(Step::new("end").with("assignment", assignment.to_json()));
    Ok(Solution {
        assignment,
        trace,
        repairs,
    })
}

/// The drinker paradox instance with `h` interpreting the universal term.
pub fn dp_problem() -> EpsilonProblem {
    epsilonize(&crate::extract::builtin_derivations().dp).expect("drinker derivation epsilonizes")
}

/// Solves the drinker instance and returns the value of the witness term.
pub fn dp_witness(env: &PredicateEnv, h: &CounterFunction) -> Result<(u64, Solution), EpsilonError> {
    let problem = dp_problem();
    let universal = problem.universal_ids().into_iter().map(|id| (id, h.clone())).collect();
    let sol = substitution_solve(&problem, env, &universal, None)?;
    let witness = first_existential(&problem).expect("conclusion mentions its witness term");
    Ok((sol.assignment.get(&witness, &[]), sol))
}

fn first_existential(problem: &EpsilonProblem) -> Option<String> {
    let mut found = None;
    problem.conclusion.visit_terms(&mut |t| {
        t.visit(&mut |s| {
            if let Term::Var(id, _) = s {
                if found.is_none()
                    && problem
                        .term(id)
                        .is_some_and(|e| e.role == Role::Existential && e.arity == 0)
                {
                    found = Some(id.clone());
                }
            }
        })
    });
    found
}
