//! Compensable processes: CCS extended with transactions `t[P, Q]`,
//! protected blocks `<P>` and compensation updates `inst(X => R).P`.

mod congruence;
mod extract;
mod lts;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::names::{Name, ProcVar};

pub use congruence::{congruent, normalize};
pub use extract::{extract, no_comp};
pub use lts::{classify_tau, transitions, Label, Origin, Step, TauShape};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompProcess {
    Nil,
    In(Name, Box<CompProcess>),
    Out(Name, Box<CompProcess>),
    Repl(Box<CompProcess>),
    Restrict(Name, Box<CompProcess>),
    Par(Box<CompProcess>, Box<CompProcess>),
    /// `t[default, compensation]`
    Trans(Name, Box<CompProcess>, Box<CompProcess>),
    Protected(Box<CompProcess>),
    Var(ProcVar),
    /// `inst(X => R).P`; `X` binds in `R` only.
    CompUpdate(ProcVar, Box<CompProcess>, Box<CompProcess>),
}

/// Which extraction function an LTS uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Semantics {
    /// Discarding
    D,
    /// Preserving
    P,
    /// Aborting
    A,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::D, Semantics::P, Semantics::A];
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Semantics> {
        match s {
            "D" | "d" => Ok(Semantics::D),
            "P" | "p" => Ok(Semantics::P),
            "A" | "a" => Ok(Semantics::A),
            _ => Err(Error::Usage(format!(
                "unknown semantics `{s}` (expected D, P or A)"
            ))),
        }
    }
}

impl std::fmt::Display for Semantics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Semantics::D => "D",
            Semantics::P => "P",
            Semantics::A => "A",
        })
    }
}

pub fn nil() -> CompProcess {
    CompProcess::Nil
}

pub fn inp(a: &Name, p: CompProcess) -> CompProcess {
    CompProcess::In(a.clone(), Box::new(p))
}

pub fn out(a: &Name, p: CompProcess) -> CompProcess {
    CompProcess::Out(a.clone(), Box::new(p))
}

pub fn repl(p: CompProcess) -> CompProcess {
    CompProcess::Repl(Box::new(p))
}

pub fn restrict(a: &Name, p: CompProcess) -> CompProcess {
    CompProcess::Restrict(a.clone(), Box::new(p))
}

pub fn par(p: CompProcess, q: CompProcess) -> CompProcess {
    CompProcess::Par(Box::new(p), Box::new(q))
}

/// Right-nested parallel composition; `Nil` for an empty list.
pub fn par_all(ps: impl IntoIterator<Item = CompProcess>) -> CompProcess {
    let mut ps: Vec<_> = ps.into_iter().collect();
    let Some(mut acc) = ps.pop() else {
        return CompProcess::Nil;
    };
    while let Some(p) = ps.pop() {
        acc = par(p, acc);
    }
    acc
}

pub fn trans(t: &Name, p: CompProcess, q: CompProcess) -> CompProcess {
    CompProcess::Trans(t.clone(), Box::new(p), Box::new(q))
}

pub fn protected(p: CompProcess) -> CompProcess {
    CompProcess::Protected(Box::new(p))
}

pub fn var(x: &ProcVar) -> CompProcess {
    CompProcess::Var(x.clone())
}

pub fn inst(x: &ProcVar, r: CompProcess, p: CompProcess) -> CompProcess {
    CompProcess::CompUpdate(x.clone(), Box::new(r), Box::new(p))
}

impl CompProcess {
    /// AST node count.
    pub fn size(&self) -> usize {
        use CompProcess::*;
        1 + match self {
            Nil | Var(_) => 0,
            In(_, p) | Out(_, p) | Repl(p) | Restrict(_, p) | Protected(p) => p.size(),
            Par(p, q) | Trans(_, p, q) | CompUpdate(_, p, q) => p.size() + q.size(),
        }
    }

    /// Checks that no transaction or protected block occurs behind an
    /// input or output prefix.
    pub fn well_formed(&self) -> Result<()> {
        fn scan(p: &CompProcess, guarded: bool) -> Result<()> {
            use CompProcess::*;
            match p {
                Nil | Var(_) => Ok(()),
                In(_, q) | Out(_, q) => scan(q, true),
                Repl(q) | Restrict(_, q) => scan(q, guarded),
                Par(a, b) | CompUpdate(_, a, b) => {
                    scan(a, guarded)?;
                    scan(b, guarded)
                }
                Trans(..) | Protected(_) if guarded => Err(Error::IllFormed(format!(
                    "{} occurs behind a prefix: `{}`",
                    if matches!(p, Trans(..)) {
                        "transaction"
                    } else {
                        "protected block"
                    },
                    crate::textio::print_comp(p)
                ))),
                Trans(_, a, b) => {
                    scan(a, false)?;
                    scan(b, false)
                }
                Protected(q) => scan(q, false),
            }
        }
        scan(self, false)
    }

    /// True when the term has no compensation update and no process variable.
    pub fn is_static(&self) -> bool {
        self.find_dynamic().is_none()
    }

    pub(crate) fn find_dynamic(&self) -> Option<&CompProcess> {
        use CompProcess::*;
        match self {
            CompUpdate(..) | Var(_) => Some(self),
            Nil => None,
            In(_, p) | Out(_, p) | Repl(p) | Restrict(_, p) | Protected(p) => p.find_dynamic(),
            Par(p, q) | Trans(_, p, q) => p.find_dynamic().or_else(|| q.find_dynamic()),
        }
    }

    pub fn has_repl(&self) -> bool {
        use CompProcess::*;
        match self {
            Repl(_) => true,
            Nil | Var(_) => false,
            In(_, p) | Out(_, p) | Restrict(_, p) | Protected(p) => p.has_repl(),
            Par(p, q) | Trans(_, p, q) | CompUpdate(_, p, q) => p.has_repl() || q.has_repl(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<ProcVar> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<ProcVar>, out: &mut BTreeSet<ProcVar>) {
        use CompProcess::*;
        match self {
            Nil => {}
            Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            In(_, p) | Out(_, p) | Repl(p) | Restrict(_, p) | Protected(p) => {
                p.collect_free_vars(bound, out)
            }
            Par(p, q) | Trans(_, p, q) => {
                p.collect_free_vars(bound, out);
                q.collect_free_vars(bound, out);
            }
            CompUpdate(x, r, p) => {
                bound.push(x.clone());
                r.collect_free_vars(bound, out);
                bound.pop();
                p.collect_free_vars(bound, out);
            }
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_names(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_names(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        use CompProcess::*;
        let mut add = |n: &Name, bound: &Vec<Name>| {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        };
        match self {
            Nil | Var(_) => {}
            In(a, p) | Out(a, p) => {
                add(a, bound);
                p.collect_free_names(bound, out);
            }
            Repl(p) | Protected(p) => p.collect_free_names(bound, out),
            Restrict(a, p) => {
                bound.push(a.clone());
                p.collect_free_names(bound, out);
                bound.pop();
            }
            Par(p, q) | CompUpdate(_, p, q) => {
                p.collect_free_names(bound, out);
                q.collect_free_names(bound, out);
            }
            Trans(t, p, q) => {
                add(t, bound);
                p.collect_free_names(bound, out);
                q.collect_free_names(bound, out);
            }
        }
    }

    pub(crate) fn max_bound_id(&self) -> Option<u32> {
        use CompProcess::*;
        let own = |n: &Name| match n {
            Name::Bound(i) => Some(*i),
            _ => None,
        };
        match self {
            Nil | Var(_) => None,
            In(a, p) | Out(a, p) | Restrict(a, p) => own(a).max(p.max_bound_id()),
            Repl(p) | Protected(p) => p.max_bound_id(),
            Par(p, q) | CompUpdate(_, p, q) => p.max_bound_id().max(q.max_bound_id()),
            Trans(t, p, q) => own(t).max(p.max_bound_id()).max(q.max_bound_id()),
        }
    }

    /// Renames free occurrences of name `from` to `to`. `to` must not be
    /// captured, which holds whenever `to` is fresh.
    pub(crate) fn rename_name(&self, from: &Name, to: &Name) -> CompProcess {
        use CompProcess::*;
        let r = |n: &Name| if n == from { to.clone() } else { n.clone() };
        match self {
            Nil | Var(_) => self.clone(),
            In(a, p) => In(r(a), Box::new(p.rename_name(from, to))),
            Out(a, p) => Out(r(a), Box::new(p.rename_name(from, to))),
            Repl(p) => repl(p.rename_name(from, to)),
            Protected(p) => protected(p.rename_name(from, to)),
            Restrict(a, _) if a == from => self.clone(),
            Restrict(a, p) => restrict(a, p.rename_name(from, to)),
            Par(p, q) => par(p.rename_name(from, to), q.rename_name(from, to)),
            Trans(t, p, q) => trans(&r(t), p.rename_name(from, to), q.rename_name(from, to)),
            CompUpdate(x, q, p) => inst(x, q.rename_name(from, to), p.rename_name(from, to)),
        }
    }

    /// Capture-avoiding substitution `self{q/x}`.
    pub fn substitute(&self, x: &ProcVar, q: &CompProcess) -> CompProcess {
        let fv_q = q.free_vars();
        let fn_q = q.free_names();
        let mut next = self
            .max_bound_id()
            .max(q.max_bound_id())
            .map_or(0, |i| i + 1);
        self.subst(x, q, &fv_q, &fn_q, &mut next)
    }

    fn subst(
        &self,
        x: &ProcVar,
        q: &CompProcess,
        fv_q: &BTreeSet<ProcVar>,
        fn_q: &BTreeSet<Name>,
        next: &mut u32,
    ) -> CompProcess {
        use CompProcess::*;
        let go = |p: &CompProcess, next: &mut u32| p.subst(x, q, fv_q, fn_q, next);
        match self {
            Nil => Nil,
            Var(y) if y == x => q.clone(),
            Var(_) => self.clone(),
            In(a, p) => inp(a, go(p, next)),
            Out(a, p) => out(a, go(p, next)),
            Repl(p) => repl(go(p, next)),
            Protected(p) => protected(go(p, next)),
            Par(p, r) => {
                let p = go(p, next);
                par(p, go(r, next))
            }
            Trans(t, p, r) => {
                let p = go(p, next);
                trans(t, p, go(r, next))
            }
            Restrict(a, p) => {
                if fn_q.contains(a) && p.free_vars().contains(x) {
                    let fresh = Name::Bound(*next);
                    *next += 1;
                    restrict(&fresh, go(&p.rename_name(a, &fresh), next))
                } else {
                    restrict(a, go(p, next))
                }
            }
            CompUpdate(y, r, p) => {
                let cont = go(p, next);
                if y == x {
                    inst(y, (**r).clone(), cont)
                } else if fv_q.contains(y) && r.free_vars().contains(x) {
                    let fv_r = r.free_vars();
                    let fresh =
                        ProcVar::fresh(y, |v| fv_q.contains(v) || fv_r.contains(v) || v == x);
                    let r = r.substitute(y, &var(&fresh));
                    inst(&fresh, go(&r, next), cont)
                } else {
                    inst(y, go(r, next), cont)
                }
            }
        }
    }

    /// Top-level components of a parallel composition, left to right.
    pub fn par_components(&self) -> Vec<&CompProcess> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a CompProcess, out: &mut Vec<&'a CompProcess>) {
            match p {
                CompProcess::Par(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => out.push(p),
            }
        }
        walk(self, &mut out);
        out
    }
}
