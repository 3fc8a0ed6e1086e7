use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::barbs::{barbs, collect_garbage, Barb};
use crate::adapt::{reachable_all, AdaptProcess, Limits, ReductionGraph};
use crate::error::{Error, Result};

/// Weak barbed bisimilarity classes of the states of `g`: `blocks[i] ==
/// blocks[j]` iff states `i` and `j` are weakly bisimilar. Only meaningful
/// when the graph is not truncated.
pub fn weak_classes(g: &ReductionGraph) -> Vec<u32> {
    let n = g.len();
    let mut dg = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| dg.add_node(())).collect();
    for (i, succ) in g.succ.iter().enumerate() {
        for &j in succ {
            dg.add_edge(nodes[i], nodes[j], ());
        }
    }
    // successors come before predecessors in this order
    let sccs = tarjan_scc(&dg);
    let mut scc_of = vec![0usize; n];
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            scc_of[v.index()] = c;
        }
    }
    let mut scc_succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); sccs.len()];
    for (i, succ) in g.succ.iter().enumerate() {
        for &j in succ {
            if scc_of[i] != scc_of[j] {
                scc_succ[scc_of[i]].insert(scc_of[j]);
            }
        }
    }

    let strong: Vec<BTreeSet<Barb>> = g.states.iter().map(barbs).collect();
    let mut weak_scc: Vec<BTreeSet<Barb>> = Vec::with_capacity(sccs.len());
    for (c, members) in sccs.iter().enumerate() {
        let mut b: BTreeSet<Barb> = members
            .iter()
            .flat_map(|v| strong[v.index()].iter().cloned())
            .collect();
        for &d in &scc_succ[c] {
            b.extend(weak_scc[d].iter().cloned());
        }
        weak_scc.push(b);
    }
    let mut blocks = renumber((0..n).map(|i| weak_scc[scc_of[i]].clone()));
    let mut count = distinct(&blocks);
    loop {
        let mut reach: Vec<Vec<u32>> = Vec::with_capacity(sccs.len());
        for (c, members) in sccs.iter().enumerate() {
            let mut r: BTreeSet<u32> = members.iter().map(|v| blocks[v.index()]).collect();
            for &d in &scc_succ[c] {
                r.extend(reach[d].iter().copied());
            }
            reach.push(r.into_iter().collect());
        }
        let next = renumber((0..n).map(|i| (blocks[i], reach[scc_of[i]].clone())));
        let next_count = distinct(&next);
        blocks = next;
        if next_count == count {
            return blocks;
        }
        count = next_count;
    }
}

fn renumber<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<u32> {
    let mut ids = HashMap::new();
    keys.map(|k| {
        let next = ids.len() as u32;
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

fn distinct(blocks: &[u32]) -> usize {
    blocks.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Weak barbed bisimilarity of two closed processes, decided over their
/// bounded reduction graphs. Truncation makes the answer inconclusive.
pub fn weak_equiv(p: &AdaptProcess, q: &AdaptProcess, limits: Limits) -> Result<bool> {
    if collect_garbage(p) == collect_garbage(q) {
        return Ok(true);
    }
    let g = reachable_all(&[p.clone(), q.clone()], limits);
    if g.truncated {
        return Err(Error::Inconclusive(format!(
            "state space exceeds the bounds (depth {}, {} states)",
            limits.depth, limits.max_states
        )));
    }
    let blocks = weak_classes(&g);
    Ok(blocks[g.roots[0]] == blocks[g.roots[1]])
}
