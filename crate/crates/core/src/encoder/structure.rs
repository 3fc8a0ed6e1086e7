use crate::adapt::{self, AdaptProcess};
use crate::comp::CompProcess::{self, *};
use crate::comp::Semantics;
use crate::names::{rn, Name, ReservedKind};

/// Number of protected blocks an abort has to collect. Under aborting
/// semantics every nested transaction also contributes its compensation.
pub fn npb(p: &CompProcess, kappa: Semantics) -> usize {
    match p {
        Protected(_) => 1,
        Trans(_, body, _) if kappa == Semantics::A => npb(body, kappa) + 1,
        Par(a, b) => npb(a, kappa) + npb(b, kappa),
        Restrict(_, q) | CompUpdate(_, _, q) => npb(q, kappa),
        _ => 0,
    }
}

/// Number of transactions in `p`, nested ones included.
pub fn nt(p: &CompProcess) -> usize {
    match p {
        Trans(_, body, _) => nt(body) + 1,
        Par(a, b) => nt(a) + nt(b),
        Restrict(_, q) | CompUpdate(_, _, q) => nt(q),
        _ => 0,
    }
}

/// Transactions of `p` reachable through `|`, restriction and the
/// continuation of `inst`, in document order, with their defaults.
fn transactions(p: &CompProcess, out: &mut Vec<(Name, CompProcess)>) {
    match p {
        Trans(t, body, _) => out.push((t.clone(), (**body).clone())),
        Par(a, b) => {
            transactions(a, out);
            transactions(b, out);
        }
        Restrict(_, q) | CompUpdate(_, _, q) => transactions(q, out),
        _ => {}
    }
}

/// Names of the transactions directly inside `p`, not counting those
/// nested in other transactions.
pub fn top_level_transactions(p: &CompProcess) -> Vec<Name> {
    let mut out = Vec::new();
    transactions(p, &mut out);
    out.into_iter().map(|(t, _)| t).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentTree {
    pub name: Name,
    pub children: Vec<ContainmentTree>,
}

impl ContainmentTree {
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(ContainmentTree::node_count)
            .sum::<usize>()
    }

    pub fn post_order(&self) -> Vec<&Name> {
        let mut out = Vec::new();
        self.walk(&mut out);
        out
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a Name>) {
        for c in &self.children {
            c.walk(out);
        }
        out.push(&self.name);
    }
}

/// The nesting structure of the transactions in `p`, under a root `t`.
pub fn containment_tree(t: &Name, p: &CompProcess) -> ContainmentTree {
    let mut found = Vec::new();
    transactions(p, &mut found);
    ContainmentTree {
        name: t.clone(),
        children: found
            .iter()
            .map(|(c, body)| containment_tree(c, body))
            .collect(),
    }
}

/// `~l_c.k_c` for every transaction `c` of the tree in post-order, ending
/// with the root.
pub fn activation_process(t: &Name, p: &CompProcess) -> AdaptProcess {
    let tree = containment_tree(t, p);
    tree.post_order()
        .into_iter()
        .rev()
        .fold(adapt::nil(), |acc, c| {
            adapt::out(
                &rn(ReservedKind::L, c),
                adapt::inp(&rn(ReservedKind::K, c), acc),
            )
        })
}

/// What the auxiliary encoding of a transaction needs to know about its
/// default activity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    /// Protected blocks to collect, as given by [`npb`].
    pub blocks: usize,
    /// Transactions to preserve, as given by [`nt`]; only used by the
    /// preserving encoding.
    pub transactions: usize,
    /// Transactions directly inside the default; only used by the aborting
    /// encoding.
    pub nested: Vec<Name>,
}

impl Counts {
    pub fn of(default: &CompProcess, kappa: Semantics) -> Counts {
        Counts {
            blocks: npb(default, kappa),
            transactions: nt(default),
            nested: top_level_transactions(default),
        }
    }
}
