//! A second implementation of adaptable-process reduction. The term is
//! flattened into a soup of prefixes, located sub-soups and replications,
//! with every active restriction opened to a globally fresh name and every
//! replication unfolded into tagged copies. A redex is any pair of soup
//! items that can meet; copies the redex does not use are dropped again.

use std::collections::{BTreeSet, HashMap};

use compadapt::adapt::{self, normalize, AdaptProcess, AdaptProcess::*};
use compadapt::names::Name;

enum Node {
    Act(AdaptProcess),
    Loc(Name, Vec<Item>),
    Repl(AdaptProcess),
}

struct Item {
    node: Node,
    copy: Option<usize>,
}

struct Soup {
    names: Vec<Name>,
    parent: Vec<Option<usize>>,
    copies: usize,
}

/// Renames free occurrences of `a` to `b`; `b` is fresh, so nothing is
/// captured.
fn rename(p: &AdaptProcess, a: &Name, b: &Name) -> AdaptProcess {
    let n = |x: &Name| if x == a { b.clone() } else { x.clone() };
    match p {
        Nil | Var(_) => p.clone(),
        In(x, k) => adapt::inp(&n(x), rename(k, a, b)),
        Out(x, k) => adapt::out(&n(x), rename(k, a, b)),
        Update(l, v, q, k) => adapt::upd(&n(l), v, rename(q, a, b), rename(k, a, b)),
        Loc(l, q) => adapt::loc(&n(l), rename(q, a, b)),
        Repl(q) => adapt::repl(rename(q, a, b)),
        Par(x, y) => adapt::par(rename(x, a, b), rename(y, a, b)),
        Restrict(x, _) if x == a => p.clone(),
        Restrict(x, q) => adapt::restrict(x, rename(q, a, b)),
    }
}

impl Soup {
    fn flatten(&mut self, p: &AdaptProcess, copy: Option<usize>, out: &mut Vec<Item>) {
        match p {
            Nil => {}
            Par(a, b) => {
                self.flatten(a, copy, out);
                self.flatten(b, copy, out);
            }
            Restrict(a, q) => {
                let b = Name::user(&format!("h{}", self.names.len()));
                self.names.push(b.clone());
                self.flatten(&rename(q, a, &b), copy, out);
            }
            Loc(l, q) => {
                let mut inner = Vec::new();
                self.flatten(q, copy, &mut inner);
                out.push(Item {
                    node: Node::Loc(l.clone(), inner),
                    copy,
                });
            }
            Repl(q) => {
                out.push(Item {
                    node: Node::Repl((**q).clone()),
                    copy,
                });
                for _ in 0..self.copies {
                    let id = self.parent.len();
                    self.parent.push(copy);
                    self.flatten(q, Some(id), out);
                }
            }
            _ => out.push(Item {
                node: Node::Act(p.clone()),
                copy,
            }),
        }
    }

    fn chain(&self, mut c: Option<usize>, into: &mut BTreeSet<usize>) {
        while let Some(i) = c {
            into.insert(i);
            c = self.parent[i];
        }
    }

    fn kept(&self, c: Option<usize>, used: &BTreeSet<usize>) -> bool {
        let mut all = BTreeSet::new();
        self.chain(c, &mut all);
        all.is_subset(used)
    }

    fn rebuild(
        &self,
        items: &[Item],
        addr: &mut Vec<usize>,
        used: &BTreeSet<usize>,
        swap: &HashMap<Vec<usize>, AdaptProcess>,
    ) -> AdaptProcess {
        let mut parts = Vec::new();
        for (i, it) in items.iter().enumerate() {
            if !self.kept(it.copy, used) {
                continue;
            }
            addr.push(i);
            parts.push(match (swap.get(addr), &it.node) {
                (Some(p), _) => p.clone(),
                (None, Node::Act(p)) => p.clone(),
                (None, Node::Repl(q)) => adapt::repl(q.clone()),
                (None, Node::Loc(l, inner)) => adapt::loc(l, self.rebuild(inner, addr, used, swap)),
            });
            addr.pop();
        }
        adapt::par_all(parts)
    }
}

fn addresses<'a>(items: &'a [Item], addr: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Item)>) {
    for (i, it) in items.iter().enumerate() {
        addr.push(i);
        out.push((addr.clone(), it));
        if let Node::Loc(_, inner) = &it.node {
            addresses(inner, addr, out);
        }
        addr.pop();
    }
}

/// Every reduct of `p`, normalized, with `copies` copies of each
/// replication.
pub fn reductions(p: &AdaptProcess, copies: usize) -> BTreeSet<AdaptProcess> {
    let mut soup = Soup {
        names: Vec::new(),
        parent: Vec::new(),
        copies,
    };
    let mut items = Vec::new();
    soup.flatten(p, None, &mut items);
    let mut all = Vec::new();
    addresses(&items, &mut Vec::new(), &mut all);

    let mut out = BTreeSet::new();
    for (x, ix) in &all {
        for (y, iy) in &all {
            let mut used = BTreeSet::new();
            soup.chain(ix.copy, &mut used);
            soup.chain(iy.copy, &mut used);
            let mut swap = HashMap::new();
            match (&ix.node, &iy.node) {
                (Node::Act(Out(a, k)), Node::Act(In(b, h))) if a == b => {
                    swap.insert(x.clone(), (**k).clone());
                    swap.insert(y.clone(), (**h).clone());
                }
                (Node::Act(Update(l, v, q, k)), Node::Loc(m, inner))
                    if l == m && !x.starts_with(y) =>
                {
                    let content = soup.rebuild(inner, &mut y.clone(), &used, &HashMap::new());
                    swap.insert(x.clone(), (**k).clone());
                    swap.insert(y.clone(), q.substitute(v, &content));
                }
                _ => continue,
            }
            let body = soup.rebuild(&items, &mut Vec::new(), &used, &swap);
            let whole = soup
                .names
                .iter()
                .rev()
                .fold(body, |acc, a| adapt::restrict(a, acc));
            out.insert(normalize(&whole));
        }
    }
    out
}
