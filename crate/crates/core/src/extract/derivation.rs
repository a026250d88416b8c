use std::fmt;

use thiserror::Error;

use crate::kernel::Term;
use crate::logic::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    /// `B(t) -> exists x. B(x)`
    ExistsAx,
    /// `(forall x. A(x)) -> A(t)`
    ForallAx,
    /// `A \/ ~A`, or `(exists x. ~A(x)) \/ forall x. A(x)`, for quantifier-free decidable `A`.
    LemDecidable,
    /// A quantifier-free propositional tautology.
    PropTautology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// From `A(k) -> B` infer `(exists x. A(x)) -> B`, `k` not free in the conclusion.
    ExistsR,
    /// From `A -> B(m)` infer `A -> forall x. B(x)`, `m` not free in the conclusion.
    ForallR,
    /// From `A` and `A -> B` infer `B`; from `X -> Y` and `Y -> Z` infer `X -> Z`.
    ModusPonens,
    /// From `C \/ C` infer `C`.
    Contraction,
    /// From `A -> C` and `B -> D` infer `A \/ B -> C \/ D`.
    OrCombine,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomKind::ExistsAx => "exists-ax",
            AxiomKind::ForallAx => "forall-ax",
            AxiomKind::LemDecidable => "lem",
            AxiomKind::PropTautology => "taut",
        })
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::ExistsR => "exists-r",
            RuleKind::ForallR => "forall-r",
            RuleKind::ModusPonens => "mp",
            RuleKind::Contraction => "ctr",
            RuleKind::OrCombine => "or-combine",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("{kind} does not apply to `{formula}`: {reason}")]
    BadAxiom {
        kind: AxiomKind,
        formula: String,
        reason: String,
    },
    #[error("{kind} cannot conclude `{conclusion}`: {reason}")]
    BadRule {
        kind: RuleKind,
        conclusion: String,
        reason: String,
    },
}

/// What construction-time checking learned about a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Detail {
    None,
    /// Quantifier axiom: bound variable, body and the instance term.
    Instance {
        var: String,
        body: Formula,
        term: Term,
    },
    /// Quantifier rule: bound variable, body and the eigenvariable.
    Eigen {
        var: String,
        body: Formula,
        eigen: String,
    },
    /// Modus ponens proper: premises are `A` and `A -> B`.
    Detach,
    /// Chaining of two implications.
    Chain,
}

/// A node of the mini Hilbert calculus, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    node: Node,
    conclusion: Formula,
    pub(crate) detail: Detail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Axiom(AxiomKind),
    Rule(RuleKind, Vec<Derivation>),
}

impl Derivation {
    pub fn axiom(kind: AxiomKind, formula: Formula) -> Result<Self, DerivationError> {
        let bad = |reason: &str| DerivationError::BadAxiom {
            kind,
            formula: formula.to_string(),
            reason: reason.to_string(),
        };
        let detail = match kind {
            AxiomKind::PropTautology => {
                if !formula.is_decidable_qf(None) {
                    return Err(bad("not quantifier-free"));
                }
                if !is_tautology(&formula) {
                    return Err(bad("not a tautology"));
                }
                Detail::None
            }
            AxiomKind::ExistsAx => {
                let Formula::Implies(ante, cons) = &formula else {
                    return Err(bad("expected an implication"));
                };
                let Formula::Exists(x, _, body) = &**cons else {
                    return Err(bad("conclusion is not existential"));
                };
                match instance_of(body, x, ante) {
                    Some(t) => Detail::Instance {
                        var: x.clone(),
                        body: (**body).clone(),
                        term: t.unwrap_or(Term::Zero),
                    },
                    None => return Err(bad("premise is not an instance of the body")),
                }
            }
            AxiomKind::ForallAx => {
                let Formula::Implies(ante, cons) = &formula else {
                    return Err(bad("expected an implication"));
                };
                let Formula::Forall(x, _, body) = &**ante else {
                    return Err(bad("premise is not universal"));
                };
                match instance_of(body, x, cons) {
                    Some(t) => Detail::Instance {
                        var: x.clone(),
                        body: (**body).clone(),
                        term: t.unwrap_or(Term::Zero),
                    },
                    None => return Err(bad("conclusion is not an instance of the body")),
                }
            }
            AxiomKind::LemDecidable => {
                let Formula::Or(l, r) = &formula else {
                    return Err(bad("expected a disjunction"));
                };
                if !lem_shape(l, r) && !lem_shape(r, l) {
                    return Err(bad("not an excluded-middle instance over a decidable matrix"));
                }
                Detail::None
            }
        };
        Ok(Derivation {
            node: Node::Axiom(kind),
            conclusion: formula,
            detail,
        })
    }

    pub fn rule(kind: RuleKind, premises: Vec<Derivation>, conclusion: Formula) -> Result<Self, DerivationError> {
        let bad = |reason: &str| DerivationError::BadRule {
            kind,
            conclusion: conclusion.to_string(),
            reason: reason.to_string(),
        };
        let arity = match kind {
            RuleKind::ExistsR | RuleKind::ForallR | RuleKind::Contraction => 1,
            RuleKind::ModusPonens | RuleKind::OrCombine => 2,
        };
        if premises.len() != arity {
            return Err(bad(&format!("expected {arity} premise(s), got {}", premises.len())));
        }
        let p: Vec<&Formula> = premises.iter().map(|d| &d.conclusion).collect();
        let detail = match kind {
            RuleKind::ForallR => {
                let (Formula::Implies(a, bm), Formula::Implies(a2, all)) = (p[0], &conclusion) else {
                    return Err(bad("premise and conclusion must be implications"));
                };
                let Formula::Forall(x, _, body) = &**all else {
                    return Err(bad("conclusion must end in a universal"));
                };
                if !a.alpha_eq(a2) {
                    return Err(bad("antecedents differ"));
                }
                let eigen =
                    eigen_instance(body, x, bm).ok_or_else(|| bad("premise is not an instance by a variable"))?;
                if conclusion.has_free(&eigen) {
                    return Err(bad(&format!("eigenvariable `{eigen}` is free in the conclusion")));
                }
                Detail::Eigen {
                    var: x.clone(),
                    body: (**body).clone(),
                    eigen,
                }
            }
            RuleKind::ExistsR => {
                let (Formula::Implies(ak, b), Formula::Implies(ex, b2)) = (p[0], &conclusion) else {
                    return Err(bad("premise and conclusion must be implications"));
                };
                let Formula::Exists(x, _, body) = &**ex else {
                    return Err(bad("conclusion must start with an existential"));
                };
                if !b.alpha_eq(b2) {
                    return Err(bad("consequents differ"));
                }
                let eigen =
                    eigen_instance(body, x, ak).ok_or_else(|| bad("premise is not an instance by a variable"))?;
                if conclusion.has_free(&eigen) {
                    return Err(bad(&format!("eigenvariable `{eigen}` is free in the conclusion")));
                }
                Detail::Eigen {
                    var: x.clone(),
                    body: (**body).clone(),
                    eigen,
                }
            }
            RuleKind::ModusPonens => {
                let detach = matches!(p[1], Formula::Implies(a, b) if a.alpha_eq(p[0]) && b.alpha_eq(&conclusion));
                let chain = match (p[0], p[1], &conclusion) {
                    (Formula::Implies(x, y), Formula::Implies(y2, z), Formula::Implies(x2, z2)) => {
                        y.alpha_eq(y2) && x.alpha_eq(x2) && z.alpha_eq(z2)
                    }
                    _ => false,
                };
                if detach {
                    Detail::Detach
                } else if chain {
                    Detail::Chain
                } else {
                    return Err(bad("premises neither detach nor chain to the conclusion"));
                }
            }
            RuleKind::OrCombine => match (p[0], p[1], &conclusion) {
                (Formula::Implies(a, c), Formula::Implies(b, d), Formula::Implies(ab, cd)) => {
                    let ok = matches!((&**ab, &**cd), (Formula::Or(a2, b2), Formula::Or(c2, d2))
                        if a.alpha_eq(a2) && b.alpha_eq(b2) && c.alpha_eq(c2) && d.alpha_eq(d2));
                    if !ok {
                        return Err(bad("conclusion does not combine the premises"));
                    }
                    Detail::None
                }
                _ => return Err(bad("premises and conclusion must be implications")),
            },
            RuleKind::Contraction => match p[0] {
                Formula::Or(a, b) if a.alpha_eq(b) && a.alpha_eq(&conclusion) => Detail::None,
                _ => return Err(bad("premise is not a disjunction of the conclusion with itself")),
            },
        };
        Ok(Derivation {
            node: Node::Rule(kind, premises),
            conclusion,
            detail,
        })
    }

    pub fn conclusion(&self) -> &Formula {
        &self.conclusion
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn premises(&self) -> &[Derivation] {
        match &self.node {
            Node::Axiom(_) => &[],
            Node::Rule(_, ps) => ps,
        }
    }

    pub fn label(&self) -> String {
        match &self.node {
            Node::Axiom(k) => k.to_string(),
            Node::Rule(k, _) => k.to_string(),
        }
    }

    /// Number of nodes with the given rule kind.
    pub fn count_rule(&self, kind: RuleKind) -> usize {
        let here = usize::from(matches!(&self.node, Node::Rule(k, _) if *k == kind));
        here + self.premises().iter().map(|d| d.count_rule(kind)).sum::<usize>()
    }

    pub fn size(&self) -> usize {
        1 + self.premises().iter().map(Derivation::size).sum::<usize>()
    }

    /// Indented one-node-per-line rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&format!(
            "{}[{}] {}\n",
            "  ".repeat(depth),
            self.label(),
            self.conclusion
        ));
        for p in self.premises() {
            p.render_into(depth + 1, out);
        }
    }
}

fn lem_shape(a: &Formula, b: &Formula) -> bool {
    if let Some(na) = b.as_negation() {
        if na.alpha_eq(a) && a.is_decidable_qf(None) {
            return true;
        }
    }
    match (a, b) {
        (Formula::Exists(x, tx, neg), Formula::Forall(y, ty, pos)) if tx == ty => match neg.as_negation() {
            Some(inner) => {
                let renamed = pos.substitute(y, &Term::Var(x.clone(), ty.clone()));
                inner.alpha_eq(&renamed) && inner.is_decidable_qf(None)
            }
            None => false,
        },
        _ => false,
    }
}

/// Truth-table check treating each distinct atom, equation and realizer
/// formula as a propositional letter.
pub(crate) fn is_tautology(f: &Formula) -> bool {
    let mut letters: Vec<Formula> = Vec::new();
    f.visit(&mut |g| {
        if matches!(g, Formula::Atom(..) | Formula::Eq(..) | Formula::Realizes(_)) && !letters.contains(g) {
            letters.push(g.clone());
        }
    });
    if letters.len() > 16 {
        return false;
    }
    (0u32..1 << letters.len()).all(|mask| prop_eval(f, &letters, mask))
}

fn prop_eval(f: &Formula, letters: &[Formula], mask: u32) -> bool {
    match f {
        Formula::Bot => false,
        Formula::And(a, b) => prop_eval(a, letters, mask) && prop_eval(b, letters, mask),
        Formula::Or(a, b) => prop_eval(a, letters, mask) || prop_eval(b, letters, mask),
        Formula::Implies(a, b) => !prop_eval(a, letters, mask) || prop_eval(b, letters, mask),
        _ => {
            let i = letters.iter().position(|l| l == f).expect("letter collected");
            mask >> i & 1 == 1
        }
    }
}

/// If `target` is `body[x := t]` for some `t`, returns `Some(Some(t))`, or
/// `Some(None)` when `x` does not occur in `body`.
pub(crate) fn instance_of(body: &Formula, x: &str, target: &Formula) -> Option<Option<Term>> {
    let mut found = None;
    let mut bound = Vec::new();
    if match_formula(body, target, x, &mut bound, &mut found) {
        Some(found)
    } else {
        None
    }
}

fn eigen_instance(body: &Formula, x: &str, target: &Formula) -> Option<String> {
    match instance_of(body, x, target)? {
        Some(Term::Var(m, _)) => Some(m),
        Some(_) => None,
        None => Some(x.to_string()),
    }
}

/// Structural matching up to α-equivalence. `bound` pairs the binder names
/// of pattern and target currently in scope.
fn match_formula(
    p: &Formula,
    t: &Formula,
    x: &str,
    bound: &mut Vec<(String, String)>,
    found: &mut Option<Term>,
) -> bool {
    match (p, t) {
        (Formula::Bot, Formula::Bot) => true,
        (Formula::Atom(a, xs), Formula::Atom(b, ys)) => {
            a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, u)| match_term(s, u, x, bound, found))
        }
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
            match_term(a1, a2, x, bound, found) && match_term(b1, b2, x, bound, found)
        }
        (Formula::Realizes(a), Formula::Realizes(b)) => match_term(a, b, x, bound, found),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            match_formula(a1, a2, x, bound, found) && match_formula(b1, b2, x, bound, found)
        }
        (Formula::Forall(y1, t1, a1), Formula::Forall(y2, t2, a2))
        | (Formula::Exists(y1, t1, a1), Formula::Exists(y2, t2, a2)) => {
            if t1 != t2 || std::mem::discriminant(p) != std::mem::discriminant(t) {
                return false;
            }
            if y1 == x {
                // `x` is shadowed: the subformulas must agree exactly.
                return Formula::Forall(y1.clone(), t1.clone(), a1.clone()).alpha_eq(&Formula::Forall(
                    y2.clone(),
                    t2.clone(),
                    a2.clone(),
                ));
            }
            bound.push((y1.clone(), y2.clone()));
            let r = match_formula(a1, a2, x, bound, found);
            bound.pop();
            r
        }
        _ => false,
    }
}

fn match_term(p: &Term, t: &Term, x: &str, bound: &mut Vec<(String, String)>, found: &mut Option<Term>) -> bool {
    match (p, t) {
        (Term::Var(a, _), _) if a == x && !bound.iter().any(|(b, _)| b == x) => {
            // The instance must not mention variables bound at this point.
            if bound.iter().any(|(_, b)| t.has_free(b)) {
                return false;
            }
            match found {
                Some(prev) => crate::kernel::alpha_eq(prev, t),
                None => {
                    *found = Some(t.clone());
                    true
                }
            }
        }
        (Term::Var(a, ta), Term::Var(b, tb)) => {
            if ta != tb {
                return false;
            }
            let pa = bound.iter().rposition(|(l, _)| l == a);
            let pb = bound.iter().rposition(|(_, r)| r == b);
            match (pa, pb) {
                (Some(i), Some(j)) => i == j,
                (None, None) => a == b,
                _ => false,
            }
        }
        (Term::Lambda(a, ta, ba), Term::Lambda(b, tb, bb)) => {
            if ta != tb {
                return false;
            }
            if a == x {
                return crate::kernel::alpha_eq(p, t);
            }
            bound.push((a.clone(), b.clone()));
            let r = match_term(ba, bb, x, bound, found);
            bound.pop();
            r
        }
        (Term::Succ(a), Term::Succ(b)) | (Term::Proj1(a), Term::Proj1(b)) | (Term::Proj2(a), Term::Proj2(b)) => {
            match_term(a, b, x, bound, found)
        }
        (Term::App(a1, b1), Term::App(a2, b2)) | (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
            match_term(a1, a2, x, bound, found) && match_term(b1, b2, x, bound, found)
        }
        (Term::IfThenElse(c1, a1, b1), Term::IfThenElse(c2, a2, b2)) => {
            match_term(c1, c2, x, bound, found)
                && match_term(a1, a2, x, bound, found)
                && match_term(b1, b2, x, bound, found)
        }
        (Term::Query(f1), Term::Query(f2)) => match_formula(f1, f2, x, bound, found),
        _ => {
            if p.has_free(x) {
                return false;
            }
            p == t
        }
    }
}
