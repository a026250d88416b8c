use super::{substitute, KernelError, Term};
use crate::logic::Formula;

/// Default contraction budget.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Answers the host-facing constants during reduction.
///
/// `None` leaves the constant stuck, which is what happens when no
/// environment is attached.
pub trait Oracle {
    fn atom(&self, pred: &str, args: &[u64]) -> Option<bool>;

    fn apply_extern(&self, _name: &str, _arg: u64) -> Option<u64> {
        None
    }
}

/// The oracle that knows nothing: queries and externs stay stuck.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoOracle;

impl Oracle for NoOracle {
    fn atom(&self, _pred: &str, _args: &[u64]) -> Option<bool> {
        None
    }
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn atom(&self, pred: &str, args: &[u64]) -> Option<bool> {
        (**self).atom(pred, args)
    }

    fn apply_extern(&self, name: &str, arg: u64) -> Option<u64> {
        (**self).apply_extern(name, arg)
    }
}

/// Normal form of `t` with no oracle attached.
pub fn normalize(t: &Term, fuel: u64) -> Result<Term, KernelError> {
    Normalizer::new(fuel, &NoOracle).nf(t.clone())
}

/// Normal form of `t`, resolving queries, tables and externs through `oracle`.
pub fn normalize_with(t: &Term, fuel: u64, oracle: &dyn Oracle) -> Result<Term, KernelError> {
    Normalizer::new(fuel, oracle).nf(t.clone())
}

/// Leftmost-outermost reducer with a contraction budget.
pub struct Normalizer<'o> {
    fuel: u64,
    steps: u64,
    oracle: &'o dyn Oracle,
}

impl<'o> Normalizer<'o> {
    pub fn new(fuel: u64, oracle: &'o dyn Oracle) -> Self {
        Normalizer { fuel, steps: 0, oracle }
    }

    /// Contractions performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn tick(&mut self) -> Result<(), KernelError> {
        if self.steps >= self.fuel {
            return Err(KernelError::FuelExhausted(self.steps));
        }
        self.steps += 1;
        Ok(())
    }

    /// Full normal form.
    pub fn nf(&mut self, t: Term) -> Result<Term, KernelError> {
        let h = self.whnf(t)?;
        Ok(match h {
            Term::Lambda(x, ty, body) => Term::Lambda(x, ty, Box::new(self.nf(*body)?)),
            Term::Succ(a) => Term::Succ(Box::new(self.nf(*a)?)),
            Term::Pair(a, b) => Term::pair(self.nf(*a)?, self.nf(*b)?),
            Term::App(f, a) => Term::app(self.nf(*f)?, self.nf(*a)?),
            Term::Proj1(a) => Term::proj1(self.nf(*a)?),
            Term::Proj2(a) => Term::proj2(self.nf(*a)?),
            Term::IfThenElse(c, a, b) => Term::ite(self.nf(*c)?, self.nf(*a)?, self.nf(*b)?),
            Term::Query(phi) => Term::query(phi.try_map_terms(&mut |t| self.nf(t.clone()))?),
            other => other,
        })
    }

    /// Evaluates a closed natural-number term to its value, if it reaches a numeral.
    pub fn eval_nat(&mut self, t: Term) -> Result<Option<u64>, KernelError> {
        Ok(self.nf(t)?.as_numeral())
    }

    /// Weak head normal form.
    pub fn whnf(&mut self, mut t: Term) -> Result<Term, KernelError> {
        loop {
            t = match t {
                Term::App(..) => {
                    let (head, mut args) = unspine(t);
                    let head = self.whnf(head)?;
                    match head {
                        Term::Lambda(x, _, body) => {
                            self.tick()?;
                            let a = args.remove(0);
                            respine(substitute(&body, &x, &a), args)
                        }
                        Term::Rec(rho) if args.len() >= 3 => {
                            let mut rest = args.split_off(3);
                            let n = args.pop().expect("three args");
                            let b = args.pop().expect("three args");
                            let a = args.pop().expect("three args");
                            match self.whnf(n)? {
                                Term::Zero => {
                                    self.tick()?;
                                    respine(a, rest)
                                }
                                Term::Succ(m) => {
                                    self.tick()?;
                                    let inner = Term::apps(Term::Rec(rho), [a, b.clone(), (*m).clone()]);
                                    respine(Term::apps(b, [*m, inner]), rest)
                                }
                                stuck => {
                                    let mut all = vec![a, b, stuck];
                                    all.append(&mut rest);
                                    return Ok(respine(Term::Rec(rho), all));
                                }
                            }
                        }
                        Term::Table(tab) if !args.is_empty() => {
                            let a = args.remove(0);
                            let a = self.nf(a)?;
                            match a.as_numeral() {
                                Some(v) => {
                                    self.tick()?;
                                    let out = tab[(v % tab.len() as u64) as usize];
                                    respine(Term::numeral(out), args)
                                }
                                None => {
                                    args.insert(0, a);
                                    return Ok(respine(Term::Table(tab), args));
                                }
                            }
                        }
                        Term::Extern(name) if !args.is_empty() => {
                            let a = args.remove(0);
                            let a = self.nf(a)?;
                            match a.as_numeral().and_then(|v| self.oracle.apply_extern(&name, v)) {
                                Some(out) => {
                                    self.tick()?;
                                    respine(Term::numeral(out), args)
                                }
                                None => {
                                    args.insert(0, a);
                                    return Ok(respine(Term::Extern(name), args));
                                }
                            }
                        }
                        other => return Ok(respine(other, args)),
                    }
                }
                Term::Proj1(p) => match self.whnf(*p)? {
                    Term::Pair(a, _) => {
                        self.tick()?;
                        *a
                    }
                    stuck => return Ok(Term::proj1(stuck)),
                },
                Term::Proj2(p) => match self.whnf(*p)? {
                    Term::Pair(_, b) => {
                        self.tick()?;
                        *b
                    }
                    stuck => return Ok(Term::proj2(stuck)),
                },
                Term::IfThenElse(c, a, b) => match self.whnf(*c)? {
                    Term::Zero => {
                        self.tick()?;
                        *a
                    }
                    Term::Succ(_) => {
                        self.tick()?;
                        *b
                    }
                    stuck => return Ok(Term::IfThenElse(Box::new(stuck), a, b)),
                },
                Term::Query(phi) => match self.decide(&phi)? {
                    Some(v) => {
                        self.tick()?;
                        return Ok(Term::numeral(u64::from(!v)));
                    }
                    None => return Ok(Term::Query(phi)),
                },
                other => return Ok(other),
            };
        }
    }

    /// Truth value of a quantifier-free formula through the oracle.
    /// Connectives short-circuit left to right, so an implication whose
    /// premise fails never consults its conclusion.
    pub fn decide(&mut self, phi: &Formula) -> Result<Option<bool>, KernelError> {
        Ok(match phi {
            Formula::Bot => Some(false),
            Formula::Atom(p, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval_nat(a.clone())? {
                        Some(v) => vals.push(v),
                        None => return Ok(None),
                    }
                }
                self.oracle.atom(p, &vals)
            }
            Formula::Eq(a, b) => {
                let (Some(x), Some(y)) = (self.eval_nat(a.clone())?, self.eval_nat(b.clone())?) else {
                    return Ok(None);
                };
                Some(x == y)
            }
            Formula::And(a, b) => match self.decide(a)? {
                Some(false) => Some(false),
                Some(true) => self.decide(b)?,
                None => None,
            },
            Formula::Or(a, b) => match self.decide(a)? {
                Some(true) => Some(true),
                Some(false) => self.decide(b)?,
                None => None,
            },
            Formula::Implies(a, b) => match self.decide(a)? {
                Some(false) => Some(true),
                Some(true) => self.decide(b)?,
                None => None,
            },
            Formula::Realizes(_) | Formula::Forall(..) | Formula::Exists(..) => None,
        })
    }
}

fn unspine(mut t: Term) -> (Term, Vec<Term>) {
    let mut args = Vec::new();
    while let Term::App(f, a) = t {
        args.push(*a);
        t = *f;
    }
    args.reverse();
    (t, args)
}

fn respine(head: Term, args: Vec<Term>) -> Term {
    Term::apps(head, args)
}
