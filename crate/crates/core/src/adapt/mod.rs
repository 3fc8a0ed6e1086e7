//! Adaptable processes: CCS with transparent, nestable locations `l[P]` and
//! update prefixes `upd l(X => Q).P` that rewrite a whole located process.

pub(crate) mod congruence;
mod graph;
mod reduce;

use std::collections::BTreeSet;

use crate::names::{Name, ProcVar};

pub use congruence::{congruent, normalize};
pub use graph::{reachable, reachable_all, Limits, ReductionGraph};
pub use reduce::{reductions, reductions_with};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdaptProcess {
    Nil,
    In(Name, Box<AdaptProcess>),
    Out(Name, Box<AdaptProcess>),
    /// `upd l(X => body).cont`; `X` binds in `body` only.
    Update(Name, ProcVar, Box<AdaptProcess>, Box<AdaptProcess>),
    Loc(Name, Box<AdaptProcess>),
    Repl(Box<AdaptProcess>),
    Par(Box<AdaptProcess>, Box<AdaptProcess>),
    Restrict(Name, Box<AdaptProcess>),
    Var(ProcVar),
}

use AdaptProcess::*;

pub fn nil() -> AdaptProcess {
    Nil
}

pub fn inp(a: &Name, p: AdaptProcess) -> AdaptProcess {
    In(a.clone(), Box::new(p))
}

pub fn out(a: &Name, p: AdaptProcess) -> AdaptProcess {
    Out(a.clone(), Box::new(p))
}

pub fn upd(l: &Name, x: &ProcVar, body: AdaptProcess, cont: AdaptProcess) -> AdaptProcess {
    Update(l.clone(), x.clone(), Box::new(body), Box::new(cont))
}

/// `kill l`: removes location `l` together with its content.
pub fn kill(l: &Name, cont: AdaptProcess) -> AdaptProcess {
    upd(l, &ProcVar::new("Y"), Nil, cont)
}

/// `del l`: removes the location `l`, releasing its content.
pub fn del(l: &Name, cont: AdaptProcess) -> AdaptProcess {
    let x = ProcVar::new("X");
    upd(l, &x, Var(x.clone()), cont)
}

/// `l <= body`: replaces location `l` and its content with `body`.
pub fn write(l: &Name, body: AdaptProcess, cont: AdaptProcess) -> AdaptProcess {
    let fv = body.free_vars();
    let y = ProcVar::fresh(&ProcVar::new("Y"), |v| fv.contains(v));
    upd(l, &y, body, cont)
}

pub fn loc(l: &Name, p: AdaptProcess) -> AdaptProcess {
    Loc(l.clone(), Box::new(p))
}

pub fn repl(p: AdaptProcess) -> AdaptProcess {
    Repl(Box::new(p))
}

pub fn par(p: AdaptProcess, q: AdaptProcess) -> AdaptProcess {
    Par(Box::new(p), Box::new(q))
}

pub fn par_all(ps: impl IntoIterator<Item = AdaptProcess>) -> AdaptProcess {
    let mut ps: Vec<_> = ps.into_iter().collect();
    let Some(mut acc) = ps.pop() else {
        return Nil;
    };
    while let Some(p) = ps.pop() {
        acc = par(p, acc);
    }
    acc
}

pub fn restrict(a: &Name, p: AdaptProcess) -> AdaptProcess {
    Restrict(a.clone(), Box::new(p))
}

pub fn var(x: &ProcVar) -> AdaptProcess {
    Var(x.clone())
}

impl AdaptProcess {
    pub fn size(&self) -> usize {
        1 + match self {
            Nil | Var(_) => 0,
            In(_, p) | Out(_, p) | Loc(_, p) | Repl(p) | Restrict(_, p) => p.size(),
            Par(p, q) | Update(_, _, p, q) => p.size() + q.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<ProcVar> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<ProcVar>, out: &mut BTreeSet<ProcVar>) {
        match self {
            Nil => {}
            Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            In(_, p) | Out(_, p) | Loc(_, p) | Repl(p) | Restrict(_, p) => {
                p.collect_free_vars(bound, out)
            }
            Par(p, q) => {
                p.collect_free_vars(bound, out);
                q.collect_free_vars(bound, out);
            }
            Update(_, x, body, cont) => {
                bound.push(x.clone());
                body.collect_free_vars(bound, out);
                bound.pop();
                cont.collect_free_vars(bound, out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_names(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_names(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut add = |n: &Name, bound: &Vec<Name>| {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        };
        match self {
            Nil | Var(_) => {}
            In(a, p) | Out(a, p) | Loc(a, p) => {
                add(a, bound);
                p.collect_free_names(bound, out);
            }
            Repl(p) => p.collect_free_names(bound, out),
            Restrict(a, p) => {
                bound.push(a.clone());
                p.collect_free_names(bound, out);
                bound.pop();
            }
            Par(p, q) => {
                p.collect_free_names(bound, out);
                q.collect_free_names(bound, out);
            }
            Update(l, _, body, cont) => {
                add(l, bound);
                body.collect_free_names(bound, out);
                cont.collect_free_names(bound, out);
            }
        }
    }

    /// Every name occurring anywhere in the term, free or bound.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            out.insert(n.clone());
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Nil | Var(_) => {}
            In(a, p) | Out(a, p) | Loc(a, p) | Restrict(a, p) => {
                f(a);
                p.visit_names(f);
            }
            Repl(p) => p.visit_names(f),
            Par(p, q) => {
                p.visit_names(f);
                q.visit_names(f);
            }
            Update(l, _, body, cont) => {
                f(l);
                body.visit_names(f);
                cont.visit_names(f);
            }
        }
    }

    pub(crate) fn max_bound_id(&self) -> Option<u32> {
        let mut m = None;
        self.visit_names(&mut |n| {
            if let Name::Bound(i) = n {
                m = m.max(Some(*i));
            }
        });
        m
    }

    pub(crate) fn rename_name(&self, from: &Name, to: &Name) -> AdaptProcess {
        let r = |n: &Name| if n == from { to.clone() } else { n.clone() };
        match self {
            Nil | Var(_) => self.clone(),
            In(a, p) => inp(&r(a), p.rename_name(from, to)),
            Out(a, p) => out(&r(a), p.rename_name(from, to)),
            Loc(a, p) => loc(&r(a), p.rename_name(from, to)),
            Repl(p) => repl(p.rename_name(from, to)),
            Restrict(a, _) if a == from => self.clone(),
            Restrict(a, p) => restrict(a, p.rename_name(from, to)),
            Par(p, q) => par(p.rename_name(from, to), q.rename_name(from, to)),
            Update(l, x, b, c) => upd(&r(l), x, b.rename_name(from, to), c.rename_name(from, to)),
        }
    }

    /// Capture-avoiding substitution `self{q/x}`.
    pub fn substitute(&self, x: &ProcVar, q: &AdaptProcess) -> AdaptProcess {
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
        q: &AdaptProcess,
        fv_q: &BTreeSet<ProcVar>,
        fn_q: &BTreeSet<Name>,
        next: &mut u32,
    ) -> AdaptProcess {
        let go = |p: &AdaptProcess, next: &mut u32| p.subst(x, q, fv_q, fn_q, next);
        match self {
            Nil => Nil,
            Var(y) if y == x => q.clone(),
            Var(_) => self.clone(),
            In(a, p) => inp(a, go(p, next)),
            Out(a, p) => out(a, go(p, next)),
            Loc(l, p) => loc(l, go(p, next)),
            Repl(p) => repl(go(p, next)),
            Par(p, r) => {
                let p = go(p, next);
                par(p, go(r, next))
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
            Update(l, y, body, cont) => {
                let cont = go(cont, next);
                if y == x {
                    upd(l, y, (**body).clone(), cont)
                } else if fv_q.contains(y) && body.free_vars().contains(x) {
                    let fv_b = body.free_vars();
                    let fresh =
                        ProcVar::fresh(y, |v| fv_q.contains(v) || fv_b.contains(v) || v == x);
                    let body = body.substitute(y, &var(&fresh));
                    upd(l, &fresh, go(&body, next), cont)
                } else {
                    upd(l, y, go(body, next), cont)
                }
            }
        }
    }

    pub fn par_components(&self) -> Vec<&AdaptProcess> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a AdaptProcess, out: &mut Vec<&'a AdaptProcess>) {
            match p {
                Par(a, b) => {
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
