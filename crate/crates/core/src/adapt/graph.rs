//! Bounded exploration of the reduction relation.

use std::collections::HashMap;

use rayon::prelude::*;

use super::reduce::reductions_with;
use super::{normalize, AdaptProcess};

/// Bounds for [`reachable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of reductions from the root.
    pub depth: usize,
    /// Exploration stops once this many states are known.
    pub max_states: usize,
    /// Unfoldings per replication per step, see `reductions_with`.
    pub replication_bound: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            depth: 24,
            max_states: 20_000,
            replication_bound: 1,
        }
    }
}

/// States reachable from one or more roots, identified up to the
/// canonical form. The roots come first, in the order given.
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    pub states: Vec<AdaptProcess>,
    pub succ: Vec<Vec<usize>>,
    /// Distance from the nearest root.
    pub depth: Vec<usize>,
    pub roots: Vec<usize>,
    open: Vec<bool>,
    index: HashMap<AdaptProcess, usize>,
    /// Some state was left unexpanded because of the limits.
    pub truncated: bool,
}

impl ReductionGraph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the state congruent to `p`, if reached.
    pub fn find(&self, p: &AdaptProcess) -> Option<usize> {
        self.index.get(&normalize(p)).copied()
    }

    /// Index of a state already in canonical form.
    pub fn find_normal(&self, p: &AdaptProcess) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// A shortest reduction sequence from state `from` to state `to`,
    /// both ends included.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if i == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &j in &self.succ[i] {
                if prev[j] == usize::MAX {
                    prev[j] = i;
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// States reachable from `from` in zero or more steps, in breadth-first
    /// order.
    pub fn reachable_from(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut order = vec![from];
        let mut k = 0;
        while k < order.len() {
            for &j in &self.succ[order[k]] {
                if !seen[j] {
                    seen[j] = true;
                    order.push(j);
                }
            }
            k += 1;
        }
        order
    }

    /// Whether the successors of state `i` are known to be complete.
    pub fn is_closed(&self, i: usize) -> bool {
        !self.open[i]
    }
}

/// Breadth-first exploration from `p`.
pub fn reachable(p: &AdaptProcess, limits: Limits) -> ReductionGraph {
    reachable_all(std::slice::from_ref(p), limits)
}

/// Breadth-first exploration from several roots at once, sharing states.
pub fn reachable_all(roots: &[AdaptProcess], limits: Limits) -> ReductionGraph {
    let mut g = ReductionGraph {
        states: Vec::new(),
        succ: Vec::new(),
        depth: Vec::new(),
        roots: Vec::new(),
        open: Vec::new(),
        index: HashMap::new(),
        truncated: false,
    };
    let mut frontier = Vec::new();
    for r in roots {
        let r = normalize(r);
        let i = match g.index.get(&r) {
            Some(&i) => i,
            None => {
                let i = g.states.len();
                g.index.insert(r.clone(), i);
                g.states.push(r);
                g.succ.push(Vec::new());
                g.depth.push(0);
                g.open.push(false);
                frontier.push(i);
                i
            }
        };
        g.roots.push(i);
    }
    let mut d = 0;
    while !frontier.is_empty() {
        let expanded: Vec<Vec<AdaptProcess>> = frontier
            .par_iter()
            .map(|&i| reductions_with(&g.states[i], limits.replication_bound))
            .collect();
        if d == limits.depth {
            for (&i, rs) in frontier.iter().zip(&expanded) {
                if !rs.is_empty() {
                    g.open[i] = true;
                    g.truncated = true;
                }
            }
            break;
        }
        let mut next = Vec::new();
        for (&i, rs) in frontier.iter().zip(expanded) {
            for r in rs {
                let j = match g.index.get(&r) {
                    Some(&j) => j,
                    None => {
                        if g.states.len() >= limits.max_states {
                            g.truncated = true;
                            g.open[i] = true;
                            continue;
                        }
                        let j = g.states.len();
                        g.index.insert(r.clone(), j);
                        g.states.push(r);
                        g.succ.push(Vec::new());
                        g.depth.push(d + 1);
                        g.open.push(false);
                        next.push(j);
                        j
                    }
                };
                if !g.succ[i].contains(&j) {
                    g.succ[i].push(j);
                }
            }
        }
        frontier = next;
        d += 1;
    }
    g
}
