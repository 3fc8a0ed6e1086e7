//! Exhaustive enumeration of small closed terms over a fixed alphabet.

use std::collections::HashMap;

use compadapt::adapt::{self, AdaptProcess};
use compadapt::comp::{self, CompProcess};
use compadapt::names::{Name, ProcVar};
use rayon::prelude::*;

pub fn alphabet(n: usize) -> Vec<Name> {
    ["a", "b", "c", "d"][..n]
        .iter()
        .map(|s| Name::user(s))
        .collect()
}

fn x() -> ProcVar {
    ProcVar::new("X")
}

/// Well-formed compensable terms. `var` allows `X` (inside a compensation
/// body); `guarded` forbids transactions and protected blocks.
pub struct CompTerms {
    names: Vec<Name>,
    memo: HashMap<(usize, bool, bool), Vec<CompProcess>>,
}

impl CompTerms {
    pub fn new(names: Vec<Name>) -> Self {
        CompTerms {
            names,
            memo: HashMap::new(),
        }
    }

    pub fn of_size(&mut self, size: usize, var: bool, guarded: bool) -> Vec<CompProcess> {
        if let Some(v) = self.memo.get(&(size, var, guarded)) {
            return v.clone();
        }
        let v = self.build(size, var, guarded);
        self.memo.insert((size, var, guarded), v.clone());
        v
    }

    fn build(&mut self, size: usize, var: bool, guarded: bool) -> Vec<CompProcess> {
        let mut out = Vec::new();
        if size == 0 {
            return out;
        }
        if size == 1 {
            out.push(comp::nil());
            if var {
                out.push(comp::var(&x()));
            }
            return out;
        }
        let names = self.names.clone();
        for k in self.of_size(size - 1, var, true) {
            for a in &names {
                out.push(comp::inp(a, k.clone()));
                out.push(comp::out(a, k.clone()));
            }
        }
        for k in self.of_size(size - 1, var, guarded) {
            out.push(comp::repl(k.clone()));
            for a in &names {
                out.push(comp::restrict(a, k.clone()));
            }
        }
        if !guarded {
            for k in self.of_size(size - 1, var, false) {
                out.push(comp::protected(k));
            }
        }
        for i in 1..size - 1 {
            let j = size - 1 - i;
            let (ls, rs) = (self.of_size(i, var, guarded), self.of_size(j, var, guarded));
            for l in &ls {
                for r in &rs {
                    out.push(comp::par(l.clone(), r.clone()));
                }
            }
            let (rbody, cont) = (
                self.of_size(i, true, guarded),
                self.of_size(j, var, guarded),
            );
            for r in &rbody {
                for k in &cont {
                    out.push(comp::inst(&x(), r.clone(), k.clone()));
                }
            }
            if !guarded {
                let (ds, cs) = (self.of_size(i, var, false), self.of_size(j, var, false));
                for t in &names {
                    for d in &ds {
                        for c in &cs {
                            out.push(comp::trans(t, d.clone(), c.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// All closed well-formed terms of size at most `max`.
    pub fn up_to(&mut self, max: usize) -> Vec<CompProcess> {
        (1..=max)
            .flat_map(|s| self.of_size(s, false, false))
            .collect()
    }
}

/// Closed adaptable terms. Sizes up to `max - 1` are materialised; the
/// largest size is streamed to `f` in parallel.
pub struct AdaptTerms {
    names: Vec<Name>,
    memo: HashMap<(usize, bool), Vec<AdaptProcess>>,
}

impl AdaptTerms {
    pub fn new(names: Vec<Name>) -> Self {
        AdaptTerms {
            names,
            memo: HashMap::new(),
        }
    }

    pub fn of_size(&mut self, size: usize, var: bool) -> Vec<AdaptProcess> {
        if let Some(v) = self.memo.get(&(size, var)) {
            return v.clone();
        }
        let mut out = Vec::new();
        self.visit(size, var, &mut |p| out.push(p));
        self.memo.insert((size, var), out.clone());
        out
    }

    fn visit(&mut self, size: usize, var: bool, f: &mut dyn FnMut(AdaptProcess)) {
        if size == 0 {
            return;
        }
        if size == 1 {
            f(adapt::nil());
            if var {
                f(adapt::var(&x()));
            }
            return;
        }
        let names = self.names.clone();
        for k in self.of_size(size - 1, var) {
            f(adapt::repl(k.clone()));
            for a in &names {
                f(adapt::inp(a, k.clone()));
                f(adapt::out(a, k.clone()));
                f(adapt::loc(a, k.clone()));
                f(adapt::restrict(a, k.clone()));
            }
        }
        for i in 1..size - 1 {
            let j = size - 1 - i;
            let (ls, rs) = (self.of_size(i, var), self.of_size(j, var));
            for l in &ls {
                for r in &rs {
                    f(adapt::par(l.clone(), r.clone()));
                }
            }
            let (bs, cs) = (self.of_size(i, true), self.of_size(j, var));
            for l in &names {
                for b in &bs {
                    for c in &cs {
                        f(adapt::upd(l, &x(), b.clone(), c.clone()));
                    }
                }
            }
        }
    }

    /// Runs `check` on every closed term of size at most `max`, in
    /// parallel, and returns the number of terms visited.
    pub fn for_each_up_to(&mut self, max: usize, check: impl Fn(&AdaptProcess) + Sync) -> usize {
        let mut count = 0;
        for s in 1..max {
            let terms = self.of_size(s, false);
            terms.par_iter().for_each(&check);
            count += terms.len();
        }
        // the largest size is checked in batches to bound memory
        let mut batch = Vec::new();
        let flush = |batch: &mut Vec<AdaptProcess>| {
            batch.par_iter().for_each(&check);
            batch.len()
        };
        self.visit(max, false, &mut |p| {
            batch.push(p);
            if batch.len() >= 100_000 {
                count += flush(&mut batch);
                batch.clear();
            }
        });
        count + flush(&mut batch)
    }
}
