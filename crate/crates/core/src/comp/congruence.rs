//! Canonical forms for structural congruence on compensable processes.
//!
//! `normalize` decides the fragment of ≡ generated by α-conversion, the
//! monoid laws of `|`, scope extrusion of restrictions through `|`, `<·>`
//! and transaction bodies, `<<P>> ≡ <P>`, `<0> ≡ 0`, `(νa)0 ≡ 0` and
//! `(νa)~a ≡ 0`. Replication is never unfolded, so `!P ≡ P | !P` is not
//! decided.

use std::collections::HashMap;

use super::CompProcess::{self, *};
use super::{inp, inst, out, par_all, protected, repl, restrict, trans};
use crate::names::{Name, ProcVar};

/// Ids handed out while freshening stay clear of the canonical range.
const FRESH_BASE: u32 = 1 << 30;

pub fn normalize(p: &CompProcess) -> CompProcess {
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
    // Ties between equally shaped components are broken by position, so a
    // second pass over the sorted output can still move names around.
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

/// Sound, and complete for every axiom except replication unfolding.
pub fn congruent(p: &CompProcess, q: &CompProcess) -> bool {
    normalize(p) == normalize(q)
}

fn canon_vars(p: &CompProcess, env: &mut Vec<(ProcVar, ProcVar)>) -> CompProcess {
    match p {
        Nil => Nil,
        Var(x) => Var(env
            .iter()
            .rev()
            .find(|(from, _)| from == x)
            .map_or_else(|| x.clone(), |(_, to)| to.clone())),
        In(a, q) => inp(a, canon_vars(q, env)),
        Out(a, q) => out(a, canon_vars(q, env)),
        Repl(q) => repl(canon_vars(q, env)),
        Restrict(a, q) => restrict(a, canon_vars(q, env)),
        Protected(q) => protected(canon_vars(q, env)),
        Par(a, b) => super::par(canon_vars(a, env), canon_vars(b, env)),
        Trans(t, a, b) => trans(t, canon_vars(a, env), canon_vars(b, env)),
        CompUpdate(x, r, k) => {
            let to = ProcVar::canonical(env.len() as u32);
            env.push((x.clone(), to.clone()));
            let r = canon_vars(r, env);
            env.pop();
            inst(&to, r, canon_vars(k, env))
        }
    }
}

fn freshen(p: &CompProcess, env: &mut Vec<(Name, Name)>, next: &mut u32) -> CompProcess {
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
        Repl(q) => repl(freshen(q, env, next)),
        Protected(q) => protected(freshen(q, env, next)),
        Par(a, b) => super::par(freshen(a, env, next), freshen(b, env, next)),
        Trans(t, a, b) => trans(&look(t, env), freshen(a, env, next), freshen(b, env, next)),
        CompUpdate(x, r, k) => inst(x, freshen(r, env, next), freshen(k, env, next)),
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

/// A parallel composition of components under a block of restrictions.
struct Scope {
    names: Vec<Name>,
    comps: Vec<CompProcess>,
}

/// Flattens `p` into scope form, assuming every binder is unique.
fn structural(p: &CompProcess) -> Scope {
    let single = |c: CompProcess| Scope {
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
        CompUpdate(x, r, k) => single(inst(x, rebuild(structural(r)), rebuild(structural(k)))),
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
        Protected(q) => {
            let mut s = structural(q);
            s.comps = match s.comps.len() {
                0 => vec![],
                1 if matches!(s.comps[0], Protected(_)) => s.comps,
                _ => vec![protected(par_all(std::mem::take(&mut s.comps)))],
            };
            s
        }
        Trans(t, a, b) => {
            let s = structural(a);
            let comp = rebuild(structural(b));
            Scope {
                names: s.names,
                comps: vec![trans(t, par_all(s.comps), comp)],
            }
        }
    }
}

/// Drops useless restrictions and `(νa)~a` pairs, then reassembles.
fn rebuild(mut s: Scope) -> CompProcess {
    loop {
        let before = (s.names.len(), s.comps.len());
        let fns: Vec<_> = s.comps.iter().map(|c| c.free_names()).collect();
        let mut drop_comp = vec![false; s.comps.len()];
        s.names.retain(|a| {
            let users: Vec<usize> = (0..fns.len()).filter(|&i| fns[i].contains(a)).collect();
            match users.as_slice() {
                [] => false,
                [i] if !drop_comp[*i] && s.comps[*i] == out(a, Nil) => {
                    drop_comp[*i] = true;
                    false
                }
                _ => true,
            }
        });
        let mut i = 0;
        s.comps.retain(|_| {
            i += 1;
            !drop_comp[i - 1]
        });
        if (s.names.len(), s.comps.len()) == before {
            break;
        }
    }
    s.comps.sort();
    s.names.sort();
    let mut p = par_all(s.comps);
    for a in s.names.iter().rev() {
        p = restrict(a, p);
    }
    p
}

fn erase(p: &CompProcess) -> CompProcess {
    let e = |n: &Name| match n {
        Name::Bound(_) => Name::Bound(u32::MAX),
        _ => n.clone(),
    };
    match p {
        Nil | Var(_) => p.clone(),
        In(a, q) => inp(&e(a), erase(q)),
        Out(a, q) => out(&e(a), erase(q)),
        Repl(q) => repl(erase(q)),
        Protected(q) => protected(erase(q)),
        Restrict(a, q) => restrict(&e(a), erase(q)),
        Par(a, b) => super::par(erase(a), erase(b)),
        Trans(t, a, b) => trans(&e(t), erase(a), erase(b)),
        CompUpdate(x, r, k) => inst(x, erase(r), erase(k)),
    }
}

fn names_in_order(p: &CompProcess, out: &mut Vec<Name>) {
    let push = |n: &Name, out: &mut Vec<Name>| {
        if !out.contains(n) {
            out.push(n.clone());
        }
    };
    match p {
        Nil | Var(_) => {}
        In(a, q) | Out(a, q) | Restrict(a, q) => {
            push(a, out);
            names_in_order(q, out);
        }
        Repl(q) | Protected(q) => names_in_order(q, out),
        Par(a, b) | CompUpdate(_, a, b) => {
            names_in_order(a, out);
            names_in_order(b, out);
        }
        Trans(t, a, b) => {
            push(t, out);
            names_in_order(a, out);
            names_in_order(b, out);
        }
    }
}

fn rename_map(p: &CompProcess, m: &HashMap<Name, Name>) -> CompProcess {
    let r = |n: &Name| m.get(n).cloned().unwrap_or_else(|| n.clone());
    match p {
        Nil | Var(_) => p.clone(),
        In(a, q) => inp(&r(a), rename_map(q, m)),
        Out(a, q) => out(&r(a), rename_map(q, m)),
        Repl(q) => repl(rename_map(q, m)),
        Protected(q) => protected(rename_map(q, m)),
        Restrict(a, q) => restrict(&r(a), rename_map(q, m)),
        Par(a, b) => super::par(rename_map(a, m), rename_map(b, m)),
        Trans(t, a, b) => trans(&r(t), rename_map(a, m), rename_map(b, m)),
        CompUpdate(x, r2, k) => inst(x, rename_map(r2, m), rename_map(k, m)),
    }
}

/// Gives restricted names canonical ids in order of first occurrence,
/// visiting parallel components sorted by their shape with bound names
/// erased.
fn canon_names(p: &CompProcess, counter: &mut u32) -> CompProcess {
    match p {
        Restrict(..) | Par(..) => {
            let mut names = Vec::new();
            let mut body = p;
            while let Restrict(a, q) = body {
                names.push(a.clone());
                body = q;
            }
            let mut comps: Vec<CompProcess> = body.par_components().into_iter().cloned().collect();
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
        Repl(q) => repl(canon_names(q, counter)),
        Protected(q) => protected(canon_names(q, counter)),
        Trans(t, a, b) => {
            let a = canon_names(a, counter);
            trans(t, a, canon_names(b, counter))
        }
        CompUpdate(x, r, k) => {
            let r = canon_names(r, counter);
            inst(x, r, canon_names(k, counter))
        }
    }
}
