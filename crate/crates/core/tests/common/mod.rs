//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use pif_core::kernel::{SimpleType, Term};
use pif_core::learning::{FiniteFunction, Functional};
use pif_core::logic::{CounterFunction, Formula, PredicateEnv};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn nat() -> SimpleType {
    SimpleType::Nat
}

/// Every unary environment for `P` over domains `1..=max`.
pub fn all_unary_envs(max: u64) -> Vec<PredicateEnv> {
    (1..=max)
        .flat_map(|d| PredicateEnv::all_unary(d, "P").unwrap())
        .collect()
}

pub fn unary_env(d: u64, holds: impl Fn(u64) -> bool) -> PredicateEnv {
    PredicateEnv::unary(d, "P", holds).unwrap()
}

pub fn random_unary_env(r: &mut StdRng, d: u64, preds: &[&str]) -> PredicateEnv {
    let mut env = PredicateEnv::new(d).unwrap();
    for p in preds {
        env.declare(p).unwrap();
        for k in 0..d {
            env.set(p, &[k], r.gen_bool(0.5)).unwrap();
        }
    }
    env
}

pub fn random_table(r: &mut StdRng, d: u64) -> CounterFunction {
    CounterFunction::Table((0..d).map(|_| r.gen_range(0..d)).collect())
}

const TYPES: [&str; 5] = ["Nat", "Nat->Nat", "Nat*Nat", "Unit", "(Nat->Nat)->Nat"];

pub fn small_type(r: &mut StdRng) -> SimpleType {
    pif_core::syntax::parse_type(TYPES[r.gen_range(0..TYPES.len())]).unwrap()
}

/// A random well-typed term of type `ty` in context `ctx`, of roughly
/// `size` nodes.
pub struct TermGen {
    pub rng: StdRng,
    fresh: usize,
}

impl TermGen {
    pub fn new(seed: u64) -> Self {
        TermGen {
            rng: rng(seed),
            fresh: 0,
        }
    }

    pub fn closed(&mut self, size: usize) -> (Term, SimpleType) {
        let ty = small_type(&mut self.rng);
        (self.term(&ty, &[], size), ty)
    }

    pub fn term(&mut self, ty: &SimpleType, ctx: &[(String, SimpleType)], size: usize) -> Term {
        let vars: Vec<&(String, SimpleType)> = ctx.iter().filter(|(_, t)| t == ty).collect();
        if !vars.is_empty() && (size <= 1 || self.rng.gen_bool(0.2)) {
            let (x, t) = vars[self.rng.gen_range(0..vars.len())];
            return Term::var(x.clone(), t.clone());
        }
        if size > 3 && self.rng.gen_bool(0.25) {
            return self.eliminator(ty, ctx, size);
        }
        match ty {
            SimpleType::Nat => {
                if size <= 1 {
                    return Term::numeral(self.rng.gen_range(0..3));
                }
                match self.rng.gen_range(0..3) {
                    0 => Term::succ(self.term(ty, ctx, size - 1)),
                    1 => {
                        let s = (size - 1) / 3;
                        Term::ite(self.term(ty, ctx, s), self.term(ty, ctx, s), self.term(ty, ctx, s))
                    }
                    _ => Term::numeral(self.rng.gen_range(0..3)),
                }
            }
            SimpleType::Unit => Term::UnitVal,
            SimpleType::Arrow(a, b) => {
                self.fresh += 1;
                let x = format!("x{}", self.fresh);
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), (**a).clone()));
                Term::lam(x, (**a).clone(), self.term(b, &inner, size.saturating_sub(1)))
            }
            SimpleType::Product(a, b) => {
                let s = size.saturating_sub(1) / 2;
                Term::pair(self.term(a, ctx, s), self.term(b, ctx, s))
            }
        }
    }

    /// An application, projection or recursion whose result has type `ty`.
    fn eliminator(&mut self, ty: &SimpleType, ctx: &[(String, SimpleType)], size: usize) -> Term {
        let s = (size - 1) / 3;
        match self.rng.gen_range(0..3) {
            0 => {
                let a = if self.rng.gen_bool(0.7) {
                    nat()
                } else {
                    SimpleType::nat_to_nat()
                };
                let f = self.term(&SimpleType::arrow(a.clone(), ty.clone()), ctx, s.max(1) * 2);
                Term::app(f, self.term(&a, ctx, s))
            }
            1 => {
                let other = if self.rng.gen_bool(0.5) {
                    nat()
                } else {
                    SimpleType::Unit
                };
                if self.rng.gen_bool(0.5) {
                    Term::proj1(self.term(&SimpleType::product(ty.clone(), other), ctx, s * 2))
                } else {
                    Term::proj2(self.term(&SimpleType::product(other, ty.clone()), ctx, s * 2))
                }
            }
            _ => {
                let step = SimpleType::arrows(&[nat(), ty.clone()], ty.clone());
                let n = Term::numeral(self.rng.gen_range(0..4));
                Term::apps(
                    Term::Rec(ty.clone()),
                    [self.term(ty, ctx, s), self.term(&step, ctx, s), n],
                )
            }
        }
    }
}

/// Random closed formula of depth at most `depth` over unary `P`, `Q`.
pub fn random_formula(r: &mut StdRng, depth: usize) -> Formula {
    fn go(r: &mut StdRng, depth: usize, bound: &mut Vec<String>, next: &mut usize) -> Formula {
        let leaf = depth == 0 || r.gen_bool(0.25);
        if leaf {
            if r.gen_bool(0.08) {
                return Formula::Bot;
            }
            let pred = if r.gen_bool(0.6) { "P" } else { "Q" };
            let arg = if bound.is_empty() || r.gen_bool(0.2) {
                Term::numeral(r.gen_range(0..2))
            } else {
                Term::nat_var(bound[r.gen_range(0..bound.len())].clone())
            };
            return Formula::atom(pred, vec![arg]);
        }
        match r.gen_range(0..6) {
            0 => Formula::and(go(r, depth - 1, bound, next), go(r, depth - 1, bound, next)),
            1 => Formula::or(go(r, depth - 1, bound, next), go(r, depth - 1, bound, next)),
            2 => Formula::implies(go(r, depth - 1, bound, next), go(r, depth - 1, bound, next)),
            3 => Formula::not(go(r, depth - 1, bound, next)),
            k => {
                *next += 1;
                let x = format!("v{next}");
                bound.push(x.clone());
                let body = go(r, depth - 1, bound, next);
                bound.pop();
                if k == 4 {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                }
            }
        }
    }
    go(r, depth, &mut Vec::new(), &mut 0)
}

/// A continuous expression over the argument function, valued in `0..d`.
#[derive(Clone, Debug)]
pub enum Expr {
    Const(u64),
    Call(Box<Expr>),
    Shift(Box<Expr>, u64),
}

impl Expr {
    pub fn random(r: &mut StdRng, d: u64, depth: usize) -> Expr {
        match if depth == 0 { 0 } else { r.gen_range(0..3) } {
            0 => Expr::Const(r.gen_range(0..d)),
            1 => Expr::Call(Box::new(Expr::random(r, d, depth - 1))),
            _ => Expr::Shift(Box::new(Expr::random(r, d, depth - 1)), r.gen_range(1..d.max(2))),
        }
    }

    pub fn eval(&self, f: &FiniteFunction, d: u64) -> u64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Call(e) => f.lookup(e.eval(f, d)) % d,
            Expr::Shift(e, c) => (e.eval(f, d) + c) % d,
        }
    }

    pub fn functional(&self, d: u64) -> Functional<'static> {
        let e = self.clone();
        Functional::host(move |f| e.eval(f, d))
    }
}

/// A random family `P_n(m)` over `0..d`.
pub fn random_family(r: &mut StdRng, d: u64) -> PredicateEnv {
    let bits: Vec<bool> = (0..d * d).map(|_| r.gen_bool(0.5)).collect();
    PredicateEnv::family_from_fn(d, "P", |n, m| bits[(n * d + m) as usize]).unwrap()
}
