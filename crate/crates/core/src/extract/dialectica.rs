//! Dialectica extraction over the mini calculus.
//!
//! Every node's conclusion `C` is interpreted through `C' = simplify(gg(C))`
//! and the node produces terms for the canonical witness tuple of `C'`.
//! Implications are handled through [`Imp`], which splits a realizer of
//! `A -> B` into its forward part `f` (witnesses of `B` from witnesses of
//! `A`) and backward part `g` (counters of `A` from witnesses of `A` and
//! counters of `B`).

use std::collections::BTreeSet;

use super::derivation::{AxiomKind, RuleKind};
use super::derivation::{Derivation, Detail, Node};
use super::{ExtractError, Realizer};
use crate::kernel::{normalize, substitute, SimpleType, Term, DEFAULT_FUEL};
use crate::logic::Formula;
use crate::translations::tuple::{app_skip, curry, expand, lam_skip, select, tuple_term};
use crate::translations::{
    dial_matrix, dial_shape, dialectica_translate_with, imp_parts, negative_translate, simplify_double_neg, types,
    NameGen, NegVariant, Shape, Slot,
};

/// Dialectica extraction, every predicate decidable.
pub fn extract_dialectica(d: &Derivation) -> Result<Realizer, ExtractError> {
    extract_dialectica_with(d, None)
}

pub fn extract_dialectica_with(d: &Derivation, decidable: Option<&BTreeSet<String>>) -> Result<Realizer, ExtractError> {
    let mut names = BTreeSet::new();
    collect_names(d, &mut names);
    let mut ex = Extractor {
        decidable: decidable.cloned(),
        gen: NameGen::avoiding(names),
        provenance: Vec::new(),
    };
    let comps = ex.realize(d)?;
    let conclusion = ex.interp(d.conclusion());
    let signature = dialectica_translate_with(&conclusion, decidable);
    let term = if signature.witness.iter().all(|(_, t)| t.is_unit()) {
        Term::UnitVal
    } else {
        tuple_term(&comps)
    };
    let params = d
        .conclusion()
        .free_vars()
        .into_iter()
        .map(|x| (x, SimpleType::Nat))
        .collect();
    Ok(Realizer {
        term,
        signature,
        params,
        provenance: ex.provenance,
    })
}

/// The formula whose Dialectica matrix an extracted realizer satisfies:
/// the Goedel-Gentzen translation of `c` with decidable double negations removed.
pub fn interpreted_goal(c: &Formula, decidable: Option<&BTreeSet<String>>) -> Formula {
    simplify_double_neg(&negative_translate(c, NegVariant::GoedelGentzen), decidable)
}

fn collect_names(d: &Derivation, out: &mut BTreeSet<String>) {
    out.extend(d.conclusion().all_names());
    for p in d.premises() {
        collect_names(p, out);
    }
}

struct Extractor {
    decidable: Option<BTreeSet<String>>,
    gen: NameGen,
    provenance: Vec<String>,
}

/// Shapes of an implication `A -> B` between interpreted formulas.
struct Imp {
    a: Shape,
    b: Shape,
    fs: Vec<SimpleType>,
    gs: Vec<SimpleType>,
}

impl Imp {
    fn new(a: Shape, b: Shape) -> Self {
        let parts = imp_parts(&a, &b);
        Imp {
            fs: types(&parts.fs),
            gs: types(&parts.gs),
            a,
            b,
        }
    }

    fn raw(&self) -> Vec<SimpleType> {
        [self.fs.clone(), self.gs.clone()].concat()
    }

    fn split(&self, w: &[Term]) -> (Vec<Term>, Vec<Term>) {
        let all = expand(&self.raw(), w);
        let (f, g) = all.split_at(self.fs.len());
        (f.to_vec(), g.to_vec())
    }

    fn a_wit(&self, x: &[Term]) -> Vec<(Term, SimpleType)> {
        x.iter().cloned().zip(self.a.wit.iter().map(|s| s.ty.clone())).collect()
    }

    fn apply_f(&self, f: &[Term], x: &[Term]) -> Vec<Term> {
        let args = self.a_wit(x);
        f.iter().zip(&self.fs).map(|(fj, ty)| app_skip(fj, ty, &args)).collect()
    }

    fn apply_g(&self, g: &[Term], x: &[Term], v: &[Term]) -> Vec<Term> {
        let mut args = self.a_wit(x);
        args.extend(v.iter().cloned().zip(self.b.ctr.iter().map(|s| s.ty.clone())));
        g.iter().zip(&self.gs).map(|(gi, ty)| app_skip(gi, ty, &args)).collect()
    }

    /// Builds a realizer from `body(x, v) = (witnesses of B, counters of A)`.
    fn build(
        &self,
        gen: &mut NameGen,
        body: impl FnOnce(&mut NameGen, &[Term], &[Term]) -> Result<(Vec<Term>, Vec<Term>), ExtractError>,
    ) -> Result<Vec<Term>, ExtractError> {
        let xp = params(gen, &self.a.wit.iter().map(|s| s.ty.clone()).collect::<Vec<_>>(), "x");
        let vp = params(gen, &self.b.ctr.iter().map(|s| s.ty.clone()).collect::<Vec<_>>(), "v");
        let x = param_terms(&xp);
        let v = param_terms(&vp);
        let (u, y) = body(gen, &x, &v)?;
        debug_assert_eq!(u.len(), self.fs.len());
        debug_assert_eq!(y.len(), self.gs.len());
        let xv = [xp.clone(), vp].concat();
        let mut full: Vec<Term> = u
            .into_iter()
            .zip(&self.fs)
            .map(|(uj, ty)| lam_skip(&xp, uj, ty))
            .collect();
        full.extend(y.into_iter().zip(&self.gs).map(|(yi, ty)| lam_skip(&xv, yi, ty)));
        Ok(select(&self.raw(), &full))
    }
}

fn params(gen: &mut NameGen, types: &[SimpleType], hint: &str) -> Vec<(String, SimpleType)> {
    types
        .iter()
        .map(|t| {
            if t.is_unit() {
                ("_".to_string(), SimpleType::Unit)
            } else {
                (gen.fresh(hint), t.clone())
            }
        })
        .collect()
}

fn param_terms(ps: &[(String, SimpleType)]) -> Vec<Term> {
    ps.iter()
        .map(|(n, t)| {
            if t.is_unit() {
                Term::UnitVal
            } else {
                Term::Var(n.clone(), t.clone())
            }
        })
        .collect()
}

fn normalize_all(ts: Vec<Term>) -> Result<Vec<Term>, ExtractError> {
    ts.iter()
        .map(|t| normalize(t, DEFAULT_FUEL).map_err(ExtractError::from))
        .collect()
}

fn unsupported(d: &Derivation, why: &str) -> ExtractError {
    ExtractError::UnsupportedNode(format!("{} `{}`: {why}", d.label(), d.conclusion()))
}

impl Extractor {
    fn interp(&self, c: &Formula) -> Formula {
        interpreted_goal(c, self.decidable.as_ref())
    }

    fn shape(&self, c: &Formula) -> Shape {
        dial_shape(&self.interp(c))
    }

    fn trivial(&self, c: &Formula) -> bool {
        self.shape(c).wit.iter().all(|s| s.ty.is_unit())
    }

    /// Layout of an implication conclusion, checking that its interpretation
    /// is the implication of the interpretations.
    fn imp(&self, d: &Derivation, a: &Formula, b: &Formula) -> Result<Imp, ExtractError> {
        let whole = self.interp(&Formula::implies(a.clone(), b.clone()));
        let (ia, ib) = (self.interp(a), self.interp(b));
        if whole != Formula::implies(ia.clone(), ib.clone()) {
            return Err(unsupported(d, "interpretation does not split at the implication"));
        }
        Ok(Imp::new(dial_shape(&ia), dial_shape(&ib)))
    }

    fn realize(&mut self, d: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let c = d.conclusion();
        if self.trivial(c) {
            self.provenance.push(format!("{}: trivial witness for {c}", d.label()));
            return Ok(vec![Term::UnitVal]);
        }
        let out = match d.node() {
            Node::Axiom(AxiomKind::ForallAx) => self.forall_ax(d)?,
            Node::Axiom(AxiomKind::ExistsAx) => self.exists_ax(d)?,
            Node::Axiom(_) => return Err(unsupported(d, "axiom with a non-trivial interpretation")),
            Node::Rule(RuleKind::ModusPonens, ps) => match d.detail {
                Detail::Detach => {
                    let a = self.realize(&ps[0])?;
                    let r = self.realize(&ps[1])?;
                    let Formula::Implies(pa, pb) = ps[1].conclusion() else {
                        unreachable!()
                    };
                    let imp = self.imp(&ps[1], pa, pb)?;
                    let (f, _) = imp.split(&r);
                    imp.apply_f(&f, &a)
                }
                Detail::Chain => self.chain(d, &ps[0], &ps[1])?,
                _ => unreachable!("modus ponens carries its form"),
            },
            Node::Rule(RuleKind::ForallR, ps) => self.forall_r(d, &ps[0])?,
            Node::Rule(RuleKind::ExistsR, ps) => self.exists_r(d, &ps[0])?,
            Node::Rule(RuleKind::Contraction, ps) => self.contraction(d, &ps[0])?,
            Node::Rule(RuleKind::OrCombine, _) => {
                return Err(unsupported(d, "disjunction combination outside a contraction"))
            }
        };
        let out = normalize_all(out)?;
        self.provenance.push(format!(
            "{}: {} => {}",
            d.label(),
            c,
            out.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        ));
        Ok(out)
    }

    /// `forall y. A(y) -> A(t)`: instantiate the witness functions at `t`
    /// and answer the counter with `t` and the counter of `A(t)`.
    fn forall_ax(&mut self, d: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let Detail::Instance { body, term, .. } = &d.detail else {
            unreachable!()
        };
        let Formula::Implies(all, inst) = d.conclusion() else {
            unreachable!()
        };
        let imp = self.imp(d, all, inst)?;
        let qt = quant_type(all);
        let inner = self.shape(body);
        let curried: Vec<SimpleType> = inner
            .wit
            .iter()
            .map(|w| curry(std::slice::from_ref(&qt), &w.ty))
            .collect();
        let ctr_raw: Vec<SimpleType> = [vec![qt.clone()], inner.ctr.iter().map(|s| s.ty.clone()).collect()].concat();
        let t = term.clone();
        imp.build(&mut self.gen, |_, x, v| {
            let fs = expand(&curried, x);
            let u = fs
                .iter()
                .zip(&curried)
                .map(|(f, ty)| app_skip(f, ty, &[(t.clone(), qt.clone())]))
                .collect();
            let y = select(&ctr_raw, &[vec![t.clone()], v.to_vec()].concat());
            Ok((u, y))
        })
    }

    /// `B(t) -> exists y. B(y)`, whose interpretation is
    /// `B'(t) -> ~forall y. ~B'(y)`: the witness answers every challenge
    /// `H` with `t` and the given witnesses; the counter of `B'(t)` is read
    /// off `H` at `t`.
    fn exists_ax(&mut self, d: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let Detail::Instance { var, body, term } = &d.detail else {
            unreachable!()
        };
        let Formula::Implies(inst, ex) = d.conclusion() else {
            unreachable!()
        };
        let imp = self.imp(d, inst, ex)?;
        let qt = quant_type(ex);
        let b2 = self.interp(body);
        let neg = Formula::not(b2.clone());
        let all = Formula::forall_typed(var.clone(), qt.clone(), neg.clone());
        let (s_b2, s_neg, s_all) = (dial_shape(&b2), dial_shape(&neg), dial_shape(&all));
        let target = dial_shape(&Formula::not(all.clone()));
        if types(&target.wit) != types(&imp.b.wit) || types(&target.ctr) != types(&imp.b.ctr) {
            return Err(unsupported(d, "unexpected interpretation of the existential"));
        }
        // Raw tuples along the chain B' -> ~B' -> forall y ~B' -> ~forall y ~B'.
        let neg_imp = Imp::new(s_b2.clone(), dial_shape(&Formula::Bot));
        let all_wit_raw: Vec<SimpleType> = s_neg
            .wit
            .iter()
            .map(|w| curry(std::slice::from_ref(&qt), &w.ty))
            .collect();
        let all_ctr_raw: Vec<SimpleType> = [vec![qt.clone()], types(&s_neg.ctr)].concat();
        let all_wit = types(&s_all.wit);
        let top_raw: Vec<SimpleType> = s_all.ctr.iter().map(|c| curry(&all_wit, &c.ty)).collect();
        let t = term.clone();
        imp.build(&mut self.gen, |gen, x, w| {
            // Witness of ~forall y ~B': for each challenge component, a
            // function of the challenge H returning t or one of x.
            let hp = params(gen, &all_wit, "h");
            let neg_ctr_terms = select(&neg_imp_ctr_raw(&s_b2), &[x.to_vec(), vec![Term::UnitVal]].concat());
            let comps = select(&all_ctr_raw, &[vec![t.clone()], neg_ctr_terms].concat());
            let u = select(
                &top_raw,
                &comps
                    .into_iter()
                    .zip(&top_raw)
                    .map(|(c, ty)| lam_skip(&hp, c, ty))
                    .collect::<Vec<_>>(),
            );
            // Counter of B'(t): apply each H component to t, then to x.
            let hs = expand(&all_wit_raw, w);
            let at_t: Vec<Term> = hs
                .iter()
                .zip(&all_wit_raw)
                .map(|(h, ty)| app_skip(h, ty, &[(t.clone(), qt.clone())]))
                .collect();
            let (_, g) = neg_imp.split(&at_t);
            let y = neg_imp.apply_g(&g, x, &[Term::UnitVal]);
            Ok((u, y))
        })
    }

    /// `X -> Y` and `Y -> Z` give `X -> Z` by composing forwards and
    /// threading the counter backwards.
    fn chain(&mut self, d: &Derivation, p1: &Derivation, p2: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let (Formula::Implies(x, y), Formula::Implies(_, z)) = (p1.conclusion(), p2.conclusion()) else {
            unreachable!()
        };
        let r1 = self.realize(p1)?;
        let r2 = self.realize(p2)?;
        let l1 = self.imp(p1, x, y)?;
        let l2 = self.imp(p2, y, z)?;
        let l3 = self.imp(d, x, z)?;
        let (f1, g1) = l1.split(&r1);
        let (f2, g2) = l2.split(&r2);
        l3.build(&mut self.gen, |_, xs, w| {
            let mid = l1.apply_f(&f1, xs);
            let u = l2.apply_f(&f2, &mid);
            let v_y = l2.apply_g(&g2, &mid, w);
            let y = l1.apply_g(&g1, xs, &v_y);
            Ok((u, y))
        })
    }

    /// From `A -> B(m)` to `A -> forall y. B(y)`: abstract the witnesses
    /// over `m` and read `m` off the counter.
    fn forall_r(&mut self, d: &Derivation, p: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let Detail::Eigen { body, eigen, .. } = &d.detail else {
            unreachable!()
        };
        let (Formula::Implies(a, bm), Formula::Implies(_, all)) = (p.conclusion(), d.conclusion()) else {
            unreachable!()
        };
        let r = self.realize(p)?;
        let lp = self.imp(p, a, bm)?;
        let lc = self.imp(d, a, all)?;
        let qt = quant_type(all);
        let inner = self.shape(body);
        let ctr_raw: Vec<SimpleType> = [vec![qt.clone()], types(&inner.ctr)].concat();
        let curried: Vec<SimpleType> = inner
            .wit
            .iter()
            .map(|w| curry(std::slice::from_ref(&qt), &w.ty))
            .collect();
        let (f, g) = lp.split(&r);
        let m = eigen.clone();
        lc.build(&mut self.gen, |gen, x, w| {
            let ws = expand(&ctr_raw, w);
            let (mt, v) = (ws[0].clone(), &ws[1..]);
            let fresh = gen.fresh(&m);
            let mv = Term::Var(fresh.clone(), qt.clone());
            let u_m = lp.apply_f(&f, x);
            let lams: Vec<Term> = u_m
                .iter()
                .zip(&curried)
                .map(|(uj, ty)| lam_skip(&[(fresh.clone(), qt.clone())], substitute(uj, &m, &mv), ty))
                .collect();
            let u = select(&curried, &lams);
            let y = lp.apply_g(&g, x, v).iter().map(|yi| substitute(yi, &m, &mt)).collect();
            Ok((u, y))
        })
    }

    /// From `A(k) -> B` to `(exists y. A(y)) -> B` for quantifier-free `A`:
    /// the witness of the existential is `k`.
    fn exists_r(&mut self, d: &Derivation, p: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let Detail::Eigen { body, eigen, .. } = &d.detail else {
            unreachable!()
        };
        if !body.is_quantifier_free() {
            return Err(unsupported(d, "existential rule over a quantified formula"));
        }
        let (Formula::Implies(ak, b), Formula::Implies(ex, _)) = (p.conclusion(), d.conclusion()) else {
            unreachable!()
        };
        let r = self.realize(p)?;
        let lp = self.imp(p, ak, b)?;
        let lc = self.imp(d, ex, b)?;
        if types(&lc.a.wit) != [SimpleType::Nat] || types(&lc.a.ctr) != [SimpleType::Unit] {
            return Err(unsupported(d, "unexpected interpretation of the existential premise"));
        }
        let (f, _) = lp.split(&r);
        let k = eigen.clone();
        lc.build(&mut self.gen, |_, x, _| {
            let u = lp
                .apply_f(&f, &[Term::UnitVal])
                .iter()
                .map(|uj| substitute(uj, &k, &x[0]))
                .collect();
            Ok((u, vec![Term::UnitVal]))
        })
    }

    /// `C` from `C \/ C` obtained by excluded middle on a decidable matrix
    /// and the two branch implications: a definition by cases on the
    /// matrix of `C` at the positive branch's witness.
    fn contraction(&mut self, d: &Derivation, p: &Derivation) -> Result<Vec<Term>, ExtractError> {
        let shape_err = || unsupported(d, "expected excluded middle combined with two branch implications");
        let (Node::Rule(RuleKind::ModusPonens, mp), Detail::Detach) = (p.node(), &p.detail) else {
            return Err(shape_err());
        };
        let (lem, comb) = (&mp[0], &mp[1]);
        let (Node::Axiom(AxiomKind::LemDecidable), Node::Rule(RuleKind::OrCombine, branches)) =
            (lem.node(), comb.node())
        else {
            return Err(shape_err());
        };
        let Formula::Or(first, _) = lem.conclusion() else {
            unreachable!()
        };
        let (neg_branch, pos_branch) = if matches!(&**first, Formula::Exists(..)) {
            (&branches[0], &branches[1])
        } else {
            (&branches[1], &branches[0])
        };
        let c = d.conclusion();
        let c2 = self.interp(c);
        if c2.as_negation().is_none() {
            return Err(unsupported(d, "interpreted conclusion is not a negation"));
        }
        let sc = dial_shape(&c2);
        if sc.wit.len() != 1 {
            return Err(unsupported(
                d,
                "interpreted conclusion has more than one witness component",
            ));
        }
        let w_ty = sc.wit[0].ty.clone();
        let ps1 = self.realize(neg_branch)?;
        let ps23 = self.realize(pos_branch)?;
        let (Formula::Implies(na, _), Formula::Implies(pa, _)) = (neg_branch.conclusion(), pos_branch.conclusion())
        else {
            unreachable!()
        };
        let l1 = self.imp(neg_branch, na, c)?;
        let l2 = self.imp(pos_branch, pa, c)?;
        if types(&l1.a.wit) != [SimpleType::Nat] || types(&l2.a.ctr) != [SimpleType::Nat] {
            return Err(unsupported(
                d,
                "excluded middle is not over a single natural-number variable",
            ));
        }
        let (f1, _) = l1.split(&ps1);
        let (f2, g2) = l2.split(&ps23);
        let yp = params(&mut self.gen, &types(&sc.ctr), "y");
        let y = param_terms(&yp);
        // Positive branch: witness Psi2 y and the challenge Psi3 y for A.
        let psi2 = l2.apply_f(&f2, &[Term::UnitVal]);
        let psi2_y = app_skip(&psi2[0], &w_ty, &typed(&y, &sc.ctr));
        let psi3_y = l2.apply_g(&g2, &[Term::UnitVal], &y)[0].clone();
        // Negative branch at k = Psi3 y.
        let psi1 = l1.apply_f(&f1, &[psi3_y]);
        let psi1_y = app_skip(&psi1[0], &w_ty, &typed(&y, &sc.ctr));
        let test = dial_matrix(&c2, &psi2, &y);
        let test = simplify_double_neg(&test, None).normalize_terms()?;
        if !test.is_decidable_qf(self.decidable.as_ref()) {
            return Err(ExtractError::ContractionNotDecidable(test.to_string()));
        }
        let body = Term::ite(Term::query(test), psi2_y, psi1_y);
        Ok(vec![lam_skip(&yp, body, &w_ty)])
    }
}

fn neg_imp_ctr_raw(s: &Shape) -> Vec<SimpleType> {
    [types(&s.wit), vec![SimpleType::Unit]].concat()
}

fn typed(terms: &[Term], slots: &[Slot]) -> Vec<(Term, SimpleType)> {
    terms.iter().cloned().zip(types(slots)).collect()
}

fn quant_type(f: &Formula) -> SimpleType {
    match f {
        Formula::Forall(_, ty, _) | Formula::Exists(_, ty, _) => ty.clone(),
        _ => SimpleType::Nat,
    }
}
