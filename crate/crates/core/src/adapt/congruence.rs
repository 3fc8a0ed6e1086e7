//! Canonical forms for structural congruence on adaptable processes:
//! α-conversion, the monoid laws of `|`, scope extrusion through `|` and
//! locations, and `(νa)0 ≡ 0`. Replication is never unfolded.

use std::collections::HashMap;

use super::AdaptProcess::{self, *};
use super::{inp, loc, out, par, par_all, repl, restrict, upd};
use crate::names::{Name, ProcVar};

const FRESH_BASE: u32 = 1 << 30;

pub fn normalize(p: &AdaptProcess) -> AdaptProcess {
    let p = canon_vars(p, &mut Vec::new());
    let mut next = p.max_bound_id().map_or(0, |i| i + 1).max(FRESH_BASE);
    let p = freshen(&p, &mut Vec::new(), &mut next);
    // canonical ids start above any free bound name so they cannot capture it
    let floor = p
        .free_names()
        .iter()
        .filter_map(|a| match a {
            Name::Bound(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut p = canon_names(&rebuild(structural(&p)), &mut { floor });
    for _ in 0..4 {
        let q = canon_names(&freshen(&p, &mut Vec::new(), &mut { FRESH_BASE }), &mut {
            floor
        });
        if q == p {
            break;
        }
        p = q;
    }
    p
}

pub fn congruent(p: &AdaptProcess, q: &AdaptProcess) -> bool {
    normalize(p) == normalize(q)
}

/// Splits a normal form into its top-level restricted names and the
/// parallel components underneath.
pub(crate) fn split_scope(p: &AdaptProcess) -> (Vec<Name>, Vec<AdaptProcess>) {
    let mut names = Vec::new();
    let mut body = p;
    while let Restrict(a, q) = body {
        names.push(a.clone());
        body = q;
    }
    let comps = match body {
        Nil => vec![],
        _ => body.par_components().into_iter().cloned().collect(),
    };
    (names, comps)
}

/// Renames every restriction binder to a fresh id from `next`.
pub(crate) fn freshen(
    p: &AdaptProcess,
    env: &mut Vec<(Name, Name)>,
    next: &mut u32,
) -> AdaptProcess {
    let look = |n: &Name, env: &Vec<(Name, Name)>| {
        env.iter()
            .rev()
            .find(|(from, _)| from == n)
            .map_or_else(|| n.clone(), |(_, to)| to.clone())
    };
    match p {
        Nil | Var(_) => p.clone(),
        In(a, q) => inp(&look(a, env), freshen(q, env, next)),
        Out(a, q) => out(&look(a, env), freshen(q, env, next)),
        Loc(l, q) => loc(&look(l, env), freshen(q, env, next)),
        Repl(q) => repl(freshen(q, env, next)),
        Par(a, b) => par(freshen(a, env, next), freshen(b, env, next)),
        Update(l, x, b, c) => upd(
            &look(l, env),
            x,
            freshen(b, env, next),
            freshen(c, env, next),
        ),
        Restrict(a, q) => {
            let b = Name::Bound(*next);
            *next += 1;
            env.push((a.clone(), b.clone()));
            let q = freshen(q, env, next);
            env.pop();
            restrict(&b, q)
        }
    }
}

fn canon_vars(p: &AdaptProcess, env: &mut Vec<(ProcVar, ProcVar)>) -> AdaptProcess {
    match p {
        Nil => Nil,
        Var(x) => Var(env
            .iter()
            .rev()
            .find(|(from, _)| from == x)
            .map_or_else(|| x.clone(), |(_, to)| to.clone())),
        In(a, q) => inp(a, canon_vars(q, env)),
        Out(a, q) => out(a, canon_vars(q, env)),
        Loc(l, q) => loc(l, canon_vars(q, env)),
        Repl(q) => repl(canon_vars(q, env)),
        Restrict(a, q) => restrict(a, canon_vars(q, env)),
        Par(a, b) => par(canon_vars(a, env), canon_vars(b, env)),
        Update(l, x, b, c) => {
            let to = ProcVar::canonical(env.len() as u32);
            env.push((x.clone(), to.clone()));
            let b = canon_vars(b, env);
            env.pop();
            upd(l, &to, b, canon_vars(c, env))
        }
    }
}

struct Scope {
    names: Vec<Name>,
    comps: Vec<AdaptProcess>,
}

fn structural(p: &AdaptProcess) -> Scope {
    let single = |c: AdaptProcess| Scope {
        names: vec![],
        comps: vec![c],
    };
    match p {
        Nil => Scope {
            names: vec![],
            comps: vec![],
        },
        Var(_) => single(p.clone()),
        In(a, q) => single(inp(a, rebuild(structural(q)))),
        Out(a, q) => single(out(a, rebuild(structural(q)))),
        Repl(q) => single(repl(rebuild(structural(q)))),
        Update(l, x, b, c) => single(upd(l, x, rebuild(structural(b)), rebuild(structural(c)))),
        Restrict(a, q) => {
            let mut s = structural(q);
            s.names.insert(0, a.clone());
            s
        }
        Par(a, b) => {
            let mut s = structural(a);
            let t = structural(b);
            s.names.extend(t.names);
            s.comps.extend(t.comps);
            s
        }
        Loc(l, q) => {
            let mut s = structural(q);
            s.comps.sort();
            s.comps = vec![loc(l, par_all(std::mem::take(&mut s.comps)))];
            s
        }
    }
}

fn rebuild(mut s: Scope) -> AdaptProcess {
    let fns: Vec<_> = s.comps.iter().map(|c| c.free_names()).collect();
    s.names.retain(|a| fns.iter().any(|f| f.contains(a)));
    s.comps.sort();
    s.names.sort();
    let mut p = par_all(s.comps);
    for a in s.names.iter().rev() {
        p = restrict(a, p);
    }
    p
}

fn erase(p: &AdaptProcess) -> AdaptProcess {
    let e = |n: &Name| match n {
        Name::Bound(_) => Name::Bound(u32::MAX),
        _ => n.clone(),
    };
    match p {
        Nil | Var(_) => p.clone(),
        In(a, q) => inp(&e(a), erase(q)),
        Out(a, q) => out(&e(a), erase(q)),
        Loc(l, q) => loc(&e(l), erase(q)),
        Repl(q) => repl(erase(q)),
        Restrict(a, q) => restrict(&e(a), erase(q)),
        Par(a, b) => par(erase(a), erase(b)),
        Update(l, x, b, c) => upd(&e(l), x, erase(b), erase(c)),
    }
}

fn names_in_order(p: &AdaptProcess, out: &mut Vec<Name>) {
    let push = |n: &Name, out: &mut Vec<Name>| {
        if !out.contains(n) {
            out.push(n.clone());
        }
    };
    match p {
        Nil | Var(_) => {}
        In(a, q) | Out(a, q) | Loc(a, q) | Restrict(a, q) => {
            push(a, out);
            names_in_order(q, out);
        }
        Repl(q) => names_in_order(q, out),
        Par(a, b) => {
            names_in_order(a, out);
            names_in_order(b, out);
        }
        Update(l, _, b, c) => {
            push(l, out);
            names_in_order(b, out);
            names_in_order(c, out);
        }
    }
}

pub(crate) fn rename_map(p: &AdaptProcess, m: &HashMap<Name, Name>) -> AdaptProcess {
    let r = |n: &Name| m.get(n).cloned().unwrap_or_else(|| n.clone());
    match p {
        Nil | Var(_) => p.clone(),
        In(a, q) => inp(&r(a), rename_map(q, m)),
        Out(a, q) => out(&r(a), rename_map(q, m)),
        Loc(l, q) => loc(&r(l), rename_map(q, m)),
        Repl(q) => repl(rename_map(q, m)),
        Restrict(a, q) => restrict(&r(a), rename_map(q, m)),
        Par(a, b) => par(rename_map(a, m), rename_map(b, m)),
        Update(l, x, b, c) => upd(&r(l), x, rename_map(b, m), rename_map(c, m)),
    }
}

fn canon_names(p: &AdaptProcess, counter: &mut u32) -> AdaptProcess {
    match p {
        Restrict(..) | Par(..) => {
            let (names, mut comps) = split_scope(p);
            comps.sort_by_cached_key(erase);
            let mut order = Vec::new();
            for c in &comps {
                names_in_order(c, &mut order);
            }
            let mut map = HashMap::new();
            let mut fresh = Vec::new();
            for n in order.into_iter().filter(|n| names.contains(n)) {
                let to = Name::Bound(*counter);
                *counter += 1;
                fresh.push(to.clone());
                map.insert(n, to);
            }
            let mut comps: Vec<_> = comps
                .iter()
                .map(|c| canon_names(&rename_map(c, &map), counter))
                .collect();
            comps.sort();
            let mut out = par_all(comps);
            for a in fresh.iter().rev() {
                out = restrict(a, out);
            }
            out
        }
        Nil | Var(_) => p.clone(),
        In(a, q) => inp(a, canon_names(q, counter)),
        Out(a, q) => out(a, canon_names(q, counter)),
        Loc(l, q) => loc(l, canon_names(q, counter)),
        Repl(q) => repl(canon_names(q, counter)),
        Update(l, x, b, c) => {
            let b = canon_names(b, counter);
            upd(l, x, b, canon_names(c, counter))
        }
    }
}
