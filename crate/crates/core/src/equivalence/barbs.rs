use std::collections::BTreeSet;

use serde::Serialize;

use crate::adapt::AdaptProcess::{self, *};
use crate::adapt::{normalize, par_all};
use crate::names::Name;

/// An observable action: a name with a polarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Barb {
    pub name: Name,
    pub output: bool,
}

impl std::fmt::Display for Barb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.output {
            write!(f, "~{}", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

impl Serialize for Barb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Unguarded prefixes on names that are not restricted. Locations and
/// replication are transparent; update prefixes are not observable.
pub fn barbs(p: &AdaptProcess) -> BTreeSet<Barb> {
    fn go(p: &AdaptProcess, hidden: &mut Vec<Name>, out: &mut BTreeSet<Barb>) {
        match p {
            Nil | Var(_) | Update(..) => {}
            In(a, _) | Out(a, _) => {
                if !hidden.contains(a) {
                    out.insert(Barb {
                        name: a.clone(),
                        output: matches!(p, Out(..)),
                    });
                }
            }
            Loc(_, q) | Repl(q) => go(q, hidden, out),
            Par(a, b) => {
                go(a, hidden, out);
                go(b, hidden, out);
            }
            Restrict(a, q) => {
                hidden.push(a.clone());
                go(q, hidden, out);
                hidden.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

/// Removes components that can never act: empty locations no update in
/// the term refers to, and top-level updates on locations that occur
/// nowhere in the term. The result is strongly bisimilar to the input.
pub fn collect_garbage(p: &AdaptProcess) -> AdaptProcess {
    let mut cur = normalize(p);
    loop {
        let (names, comps) = crate::adapt::congruence::split_scope(&cur);
        let info: Vec<_> = comps
            .iter()
            .map(|c| {
                let (mut updated, mut located) = (BTreeSet::new(), BTreeSet::new());
                targets(c, &mut updated, &mut located);
                (updated, located)
            })
            .collect();
        // an inert component only counts what the others could do to it
        let elsewhere = |i: usize, l: &Name, updated: bool| {
            info.iter()
                .enumerate()
                .any(|(j, (u, loc))| j != i && if updated { u } else { loc }.contains(l))
        };
        let kept: Vec<_> = comps
            .iter()
            .enumerate()
            .filter(|(i, c)| match c {
                Loc(l, q) if matches!(**q, Nil) => elsewhere(*i, l, true),
                Update(l, ..) => elsewhere(*i, l, false),
                _ => true,
            })
            .map(|(_, c)| c.clone())
            .collect();
        if kept.len() == comps.len() {
            return cur;
        }
        let body = par_all(kept);
        let next = names
            .iter()
            .rev()
            .fold(body, |acc, a| crate::adapt::restrict(a, acc));
        cur = normalize(&next);
    }
}

/// Every name used as an update target and every name used as a
/// location, anywhere in `p`.
fn targets(p: &AdaptProcess, updated: &mut BTreeSet<Name>, located: &mut BTreeSet<Name>) {
    match p {
        Nil | Var(_) => {}
        In(_, q) | Out(_, q) | Repl(q) | Restrict(_, q) => targets(q, updated, located),
        Loc(l, q) => {
            located.insert(l.clone());
            targets(q, updated, located);
        }
        Update(l, _, b, c) => {
            updated.insert(l.clone());
            targets(b, updated, located);
            targets(c, updated, located);
        }
        Par(a, b) => {
            targets(a, updated, located);
            targets(b, updated, located);
        }
    }
}
