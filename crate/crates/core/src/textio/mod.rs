//! Concrete syntax for both calculi.
//!
//! `0`, `a.P`, `~a.P`, `!P`, `new a. P`, `P | Q` and parentheses are
//! shared. Compensable processes add `t[P, Q]`, `<P>`, process variables
//! and `inst(X => R).P`; adaptable processes add `l[P]` and
//! `upd l(X => Q).P`. Prefixes bind tighter than `|`, which associates to
//! the right. A prefix without continuation stands for `.0`. `#` starts a
//! line comment.

mod lex;
mod parse;
mod print;

pub use parse::{parse_adapt, parse_adapt_reserved, parse_comp};
pub use print::{print_adapt, print_comp};
