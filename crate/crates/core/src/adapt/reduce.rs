//! One-step reductions of adaptable processes.
//!
//! Terms are normalized first, which hoists every unguarded restriction to
//! the top. Below that block, a communication redex is an unguarded output
//! and an unguarded input on the same name, and an update redex is an
//! unguarded `upd l(..)` together with an unguarded location `l[..]` that
//! does not contain it. Since locations are single-child, two such
//! positions always meet at a parallel composition.

use std::collections::HashMap;

use super::congruence::{freshen, rename_map, split_scope};
use super::AdaptProcess::{self, *};
use super::{normalize, par, par_all, restrict};
use crate::names::Name;

/// Child index along a path: 0/1 for the sides of `|`, 0 for a location.
type Path = Vec<u8>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SiteKind {
    In,
    Out,
    Update,
    Loc,
}

#[derive(Debug, Clone)]
struct Site {
    kind: SiteKind,
    name: Option<Name>,
    path: Path,
}

fn sites(p: &AdaptProcess, path: &mut Path, out: &mut Vec<Site>) {
    let mut push = |kind, name: Option<&Name>, path: &Path| {
        out.push(Site {
            kind,
            name: name.cloned(),
            path: path.clone(),
        })
    };
    match p {
        Nil | Var(_) | Restrict(..) | Repl(_) => {}
        In(a, _) => push(SiteKind::In, Some(a), path),
        Out(a, _) => push(SiteKind::Out, Some(a), path),
        Update(l, ..) => push(SiteKind::Update, Some(l), path),
        Loc(l, q) => {
            push(SiteKind::Loc, Some(l), path);
            path.push(0);
            sites(q, path, out);
            path.pop();
        }
        Par(a, b) => {
            path.push(0);
            sites(a, path, out);
            path.pop();
            path.push(1);
            sites(b, path, out);
            path.pop();
        }
    }
}

fn at<'a>(p: &'a AdaptProcess, path: &[u8]) -> &'a AdaptProcess {
    match (p, path.split_first()) {
        (_, None) => p,
        (Par(a, _), Some((0, rest))) => at(a, rest),
        (Par(_, b), Some((1, rest))) => at(b, rest),
        (Loc(_, q), Some((0, rest))) => at(q, rest),
        _ => unreachable!("stale path"),
    }
}

fn replace_at(p: &AdaptProcess, path: &[u8], with: AdaptProcess) -> AdaptProcess {
    match (p, path.split_first()) {
        (_, None) => with,
        (Par(a, b), Some((0, rest))) => par(replace_at(a, rest, with), (**b).clone()),
        (Par(a, b), Some((1, rest))) => par((**a).clone(), replace_at(b, rest, with)),
        (Loc(l, q), Some((0, rest))) => super::loc(l, replace_at(q, rest, with)),
        _ => unreachable!("stale path"),
    }
}

/// All one-step reducts, normalized and without duplicates, with one copy
/// of each unguarded replication available.
pub fn reductions(p: &AdaptProcess) -> Vec<AdaptProcess> {
    reductions_with(p, 1)
}

/// Like [`reductions`], with `replication_bound` copies of each replicated
/// process, nested replications included. Two copies are enough for any
/// binary redex, so values above 2 behave like 2; 0 leaves replicated
/// processes inert.
pub fn reductions_with(p: &AdaptProcess, replication_bound: usize) -> Vec<AdaptProcess> {
    let n = normalize(p);
    let (mut names, comps) = split_scope(&n);
    let mut next = n.max_bound_id().map_or(0, |i| i + 1);
    let mut unfolder = Unfolder {
        copies: replication_bound.min(2),
        names: &mut names,
        next: &mut next,
        regions: Vec::new(),
    };
    let body = unfolder.unfold(&par_all(comps), &mut Vec::new());
    let regions = std::mem::take(&mut unfolder.regions);

    let mut all = Vec::new();
    sites(&body, &mut Vec::new(), &mut all);
    let mut found = Vec::new();
    redexes(&body, &names, &all, &regions, &mut found);

    let mut out: Vec<AdaptProcess> = Vec::with_capacity(found.len());
    for r in found {
        let r = normalize(&r);
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Replaces every unguarded `!Q` by `Q1 | .. | Qk | !Q`, recursively, and
/// records where each copy sits.
struct Unfolder<'a> {
    copies: usize,
    names: &'a mut Vec<Name>,
    next: &'a mut u32,
    regions: Vec<Path>,
}

impl Unfolder<'_> {
    fn unfold(&mut self, p: &AdaptProcess, path: &mut Path) -> AdaptProcess {
        match p {
            Par(a, b) => {
                path.push(0);
                let a = self.unfold(a, path);
                path.pop();
                path.push(1);
                let b = self.unfold(b, path);
                path.pop();
                par(a, b)
            }
            Loc(l, q) => {
                path.push(0);
                let q = self.unfold(q, path);
                path.pop();
                super::loc(l, q)
            }
            Repl(q) if self.copies > 0 => {
                let mut layout = Vec::new();
                for i in 0..self.copies {
                    let (ns, copy) = fresh_copy(q, self.next);
                    self.names.extend(ns);
                    let mut region = path.clone();
                    region.extend(std::iter::repeat_n(1, i));
                    region.push(0);
                    self.regions.push(region.clone());
                    layout.push(self.unfold(&copy, &mut region));
                }
                layout.push(p.clone());
                par_all(layout)
            }
            _ => p.clone(),
        }
    }
}

/// A copy of a replicated body with its restrictions renamed apart and
/// returned separately, so they can join the top-level scope.
fn fresh_copy(q: &AdaptProcess, next: &mut u32) -> (Vec<Name>, AdaptProcess) {
    let copy = normalize(&freshen(q, &mut Vec::new(), next));
    let (ns, cs) = split_scope(&copy);
    let map: HashMap<Name, Name> = ns
        .iter()
        .map(|a| {
            let b = Name::Bound(*next);
            *next += 1;
            (a.clone(), b)
        })
        .collect();
    let names = ns.iter().map(|a| map[a].clone()).collect();
    (names, rename_map(&par_all(cs), &map))
}

fn is_prefix(a: &[u8], b: &[u8]) -> bool {
    b.len() >= a.len() && &b[..a.len()] == a
}

/// Drops the copies that take no part in a redex at `a` and `b`; by
/// `Q | !Q = !Q` they are absorbed back into their replication.
fn prune(body: &AdaptProcess, regions: &[Path], a: &Site, b: &Site) -> AdaptProcess {
    let mut idle: Vec<&Path> = regions
        .iter()
        .filter(|r| !is_prefix(r, &a.path) && !is_prefix(r, &b.path))
        .collect();
    idle.sort_by_key(|r| r.len());
    let mut dropped: Vec<&Path> = Vec::new();
    let mut out = body.clone();
    for r in idle {
        if dropped.iter().any(|d| is_prefix(d, r)) {
            continue;
        }
        out = replace_at(&out, r, Nil);
        dropped.push(r);
    }
    out
}

fn redexes(
    body: &AdaptProcess,
    names: &[Name],
    sites: &[Site],
    regions: &[Path],
    found: &mut Vec<AdaptProcess>,
) {
    let wrap = |p: AdaptProcess| names.iter().rev().fold(p, |acc, a| restrict(a, acc));
    for o in sites.iter().filter(|s| s.kind == SiteKind::Out) {
        for i in sites
            .iter()
            .filter(|s| s.kind == SiteKind::In && s.name == o.name)
        {
            let (Out(_, po), In(_, pi)) = (at(body, &o.path), at(body, &i.path)) else {
                unreachable!()
            };
            let r = prune(body, regions, o, i);
            let r = replace_at(&r, &o.path, (**po).clone());
            let r = replace_at(&r, &i.path, (**pi).clone());
            found.push(wrap(r));
        }
    }
    for u in sites.iter().filter(|s| s.kind == SiteKind::Update) {
        for l in sites
            .iter()
            .filter(|s| s.kind == SiteKind::Loc && s.name == u.name)
        {
            if is_prefix(&l.path, &u.path) {
                continue;
            }
            let (Update(_, x, q, cont), Loc(..)) = (at(body, &u.path), at(body, &l.path)) else {
                unreachable!()
            };
            let r = prune(body, regions, u, l);
            let Loc(_, content) = at(&r, &l.path) else {
                unreachable!()
            };
            let content = q.substitute(x, content);
            let r = replace_at(&r, &u.path, (**cont).clone());
            let r = replace_at(&r, &l.path, content);
            found.push(wrap(r));
        }
    }
}
