use std::fmt::Write;

use crate::adapt::AdaptProcess;
use crate::comp::CompProcess;

/// Prints a compensable process in the syntax accepted by `parse_comp`.
pub fn print_comp(p: &CompProcess) -> String {
    let mut s = String::new();
    comp(p, false, &mut s);
    s
}

/// Prints an adaptable process in the syntax accepted by `parse_adapt`.
pub fn print_adapt(p: &AdaptProcess) -> String {
    let mut s = String::new();
    adapt(p, false, &mut s);
    s
}

// `tight` is set where a parallel composition needs parentheses: after a
// prefix, under `!` and under `new`.
fn comp(p: &CompProcess, tight: bool, s: &mut String) {
    use CompProcess::*;
    match p {
        Nil => s.push('0'),
        Var(x) => s.push_str(x.as_str()),
        In(a, q) => {
            let _ = write!(s, "{a}.");
            comp(q, true, s);
        }
        Out(a, q) => {
            let _ = write!(s, "~{a}.");
            comp(q, true, s);
        }
        Repl(q) => {
            s.push('!');
            comp(q, true, s);
        }
        Restrict(a, q) => {
            let _ = write!(s, "new {a}. ");
            comp(q, true, s);
        }
        Par(a, b) => {
            if tight {
                s.push('(');
            }
            comp(a, true, s);
            s.push_str(" | ");
            comp(b, false, s);
            if tight {
                s.push(')');
            }
        }
        Trans(t, a, b) => {
            let _ = write!(s, "{t}[");
            comp(a, false, s);
            s.push_str(", ");
            comp(b, false, s);
            s.push(']');
        }
        Protected(q) => {
            s.push('<');
            comp(q, false, s);
            s.push('>');
        }
        CompUpdate(x, r, q) => {
            let _ = write!(s, "inst({x} => ");
            comp(r, false, s);
            s.push_str(").");
            comp(q, true, s);
        }
    }
}

fn adapt(p: &AdaptProcess, tight: bool, s: &mut String) {
    use AdaptProcess::*;
    match p {
        Nil => s.push('0'),
        Var(x) => s.push_str(x.as_str()),
        In(a, q) => {
            let _ = write!(s, "{a}.");
            adapt(q, true, s);
        }
        Out(a, q) => {
            let _ = write!(s, "~{a}.");
            adapt(q, true, s);
        }
        Repl(q) => {
            s.push('!');
            adapt(q, true, s);
        }
        Restrict(a, q) => {
            let _ = write!(s, "new {a}. ");
            adapt(q, true, s);
        }
        Par(a, b) => {
            if tight {
                s.push('(');
            }
            adapt(a, true, s);
            s.push_str(" | ");
            adapt(b, false, s);
            if tight {
                s.push(')');
            }
        }
        Loc(l, q) => {
            let _ = write!(s, "{l}[");
            adapt(q, false, s);
            s.push(']');
        }
        Update(l, x, q, c) => {
            let _ = write!(s, "upd {l}({x} => ");
            adapt(q, false, s);
            s.push_str(").");
            adapt(c, true, s);
        }
    }
}
