use std::fmt;

use super::formula::{Formula, Var};
use super::signature::STAT;

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn binder(v: &Var) -> String {
    if v.sort == STAT {
        v.name.clone()
    } else {
        format!("{}:{}", v.name, v.sort)
    }
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// `trailing` is set when more input follows the printed text, in which case
/// an open-ended quantifier has to be closed off with parentheses.
fn write(f: &Formula, min: u8, trailing: bool, out: &mut String) {
    let lvl = level(f);
    let opens_right = matches!(f, Formula::Exists(..) | Formula::Forall(..));
    if lvl < min || (opens_right && trailing) {
        out.push('(');
        write(f, 0, false, out);
        out.push(')');
        return;
    }
    let names = |vs: &[Var]| {
        vs.iter()
            .map(|v| v.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match f {
        Formula::Atom { rel, args } => {
            out.push_str(rel);
            out.push('(');
            out.push_str(&names(args));
            out.push(')');
        }
        Formula::Manifest { args, dynamic } => {
            if args.len() == 1 {
                out.push_str(&args[0].name);
            } else {
                out.push('(');
                out.push_str(&names(args));
                out.push(')');
            }
            out.push_str(" <<- ");
            out.push_str(&dynamic.name);
        }
        Formula::Eq(a, b) => {
            out.push_str(&a.name);
            out.push_str(" = ");
            out.push_str(&b.name);
        }
        Formula::Not(a) | Formula::Dia(a) | Formula::Box(a) => {
            out.push_str(match f {
                Formula::Not(_) => "not ",
                Formula::Dia(_) => "dia ",
                _ => "box ",
            });
            write(a, UNARY, trailing, out);
        }
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            out.push_str(if matches!(f, Formula::Exists(..)) {
                "exists "
            } else {
                "forall "
            });
            out.push_str(&binder(v));
            out.push_str(". ");
            write(a, 0, false, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            // left associative
            write(a, lvl, true, out);
            out.push_str(if lvl == AND { " and " } else { " or " });
            write(b, lvl + 1, trailing, out);
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            // right associative
            write(a, lvl + 1, true, out);
            out.push_str(if lvl == IMP { " -> " } else { " <-> " });
            write(b, lvl, trailing, out);
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, false, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
