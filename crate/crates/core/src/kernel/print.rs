use std::fmt;

use super::{SimpleType, Term};

pub(crate) fn fmt_type(t: &SimpleType, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match t {
        SimpleType::Nat => f.write_str("Nat"),
        SimpleType::Unit => f.write_str("Unit"),
        SimpleType::Arrow(a, b) => {
            if prec > 0 {
                f.write_str("(")?;
            }
            fmt_type(a, f, 1)?;
            f.write_str(" -> ")?;
            fmt_type(b, f, 0)?;
            if prec > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
        SimpleType::Product(a, b) => {
            if prec > 1 {
                f.write_str("(")?;
            }
            fmt_type(a, f, 2)?;
            f.write_str(" * ")?;
            fmt_type(b, f, 1)?;
            if prec > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Prec {
    Top,
    App,
    Arg,
}

pub(crate) fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, prec: Prec) -> fmt::Result {
    if let Some(n) = t.as_numeral() {
        return write!(f, "{n}");
    }
    // Epsilon terms print with bracketed parameters, as in `ε_m[n]`.
    if let (Term::Var(head, _), args) = t.spine() {
        if head.starts_with("ε_") && !args.is_empty() {
            write!(f, "{head}[")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                fmt_term(a, f, Prec::Top)?;
            }
            return f.write_str("]");
        }
    }
    match t {
        Term::Var(x, _) => f.write_str(x),
        Term::Zero => f.write_str("0"),
        Term::UnitVal => f.write_str("()"),
        Term::Rec(ty) => write!(f, "R[{ty}]"),
        Term::Extern(name) => write!(f, "@{name}"),
        Term::Table(tab) => {
            f.write_str("{")?;
            for (i, v) in tab.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")
        }
        Term::Pair(a, b) => {
            f.write_str("<")?;
            fmt_term(a, f, Prec::Top)?;
            f.write_str(", ")?;
            fmt_term(b, f, Prec::Top)?;
            f.write_str(">")
        }
        Term::Query(phi) => write!(f, "?({phi})"),
        Term::Lambda(x, ty, body) => paren(f, prec > Prec::Top, |f| {
            write!(f, "\\{x}:{ty}. ")?;
            fmt_term(body, f, Prec::Top)
        }),
        Term::IfThenElse(c, a, b) => paren(f, prec > Prec::Top, |f| {
            f.write_str("if ")?;
            fmt_term(c, f, Prec::Top)?;
            f.write_str(" then ")?;
            fmt_term(a, f, Prec::Top)?;
            f.write_str(" else ")?;
            fmt_term(b, f, Prec::Top)
        }),
        Term::App(a, b) => paren(f, prec == Prec::Arg, |f| {
            fmt_term(a, f, Prec::App)?;
            f.write_str(" ")?;
            fmt_term(b, f, Prec::Arg)
        }),
        Term::Succ(a) | Term::Proj1(a) | Term::Proj2(a) => paren(f, prec == Prec::Arg, |f| {
            f.write_str(match t {
                Term::Succ(_) => "S ",
                Term::Proj1(_) => "fst ",
                _ => "snd ",
            })?;
            fmt_term(a, f, Prec::Arg)
        }),
    }
}

fn paren(
    f: &mut fmt::Formatter<'_>,
    wrap: bool,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if wrap {
        f.write_str("(")?;
    }
    body(f)?;
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}
