use std::fmt;

use super::Formula;
use crate::kernel::SimpleType;

// Binding strength: 0 quantifier, 1 implication, 2 disjunction, 3 conjunction, 4 negation.
pub(crate) fn fmt_formula(phi: &Formula, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    let open = |f: &mut fmt::Formatter<'_>, wrap: bool| if wrap { f.write_str("(") } else { Ok(()) };
    let close = |f: &mut fmt::Formatter<'_>, wrap: bool| if wrap { f.write_str(")") } else { Ok(()) };
    match phi {
        Formula::Bot => f.write_str("bot"),
        Formula::Realizes(t) => write!(f, "bot[{t}]"),
        Formula::Atom(p, args) => {
            write!(f, "{p}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")
        }
        Formula::Eq(a, b) => write!(f, "{a} = {b}"),
        Formula::Forall(x, ty, body) | Formula::Exists(x, ty, body) => {
            let wrap = prec > 0;
            open(f, wrap)?;
            f.write_str(if matches!(phi, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            })?;
            f.write_str(x)?;
            if *ty != SimpleType::Nat {
                write!(f, ":{ty}")?;
            }
            f.write_str(". ")?;
            fmt_formula(body, f, 0)?;
            close(f, wrap)
        }
        Formula::Implies(a, b) if **b == Formula::Bot => {
            f.write_str("~")?;
            fmt_formula(a, f, 4)
        }
        Formula::Implies(a, b) => {
            let wrap = prec > 1;
            open(f, wrap)?;
            fmt_formula(a, f, 2)?;
            f.write_str(" -> ")?;
            fmt_formula(b, f, 1)?;
            close(f, wrap)
        }
        Formula::Or(a, b) => {
            let wrap = prec > 2;
            open(f, wrap)?;
            fmt_formula(a, f, 2)?;
            f.write_str(" \\/ ")?;
            fmt_formula(b, f, 3)?;
            close(f, wrap)
        }
        Formula::And(a, b) => {
            let wrap = prec > 3;
            open(f, wrap)?;
            fmt_formula(a, f, 3)?;
            f.write_str(" /\\ ")?;
            fmt_formula(b, f, 4)?;
            close(f, wrap)
        }
    }
}
