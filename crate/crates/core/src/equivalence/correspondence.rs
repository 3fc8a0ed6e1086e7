use std::collections::HashMap;

use serde::{Serialize, Serializer};

use super::barbs::collect_garbage;
use super::bisim::weak_classes;
use crate::adapt::{normalize, reachable_all, AdaptProcess, Limits, ReductionGraph};
use crate::comp::{classify_tau, transitions, CompProcess, Label, Semantics, TauShape};
use crate::encoder::{encode, EncodingConfig, Mode};
use crate::error::Result;
use crate::textio::{print_adapt, print_comp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Every source step is matched by target reductions.
    Forward,
    /// Every target reduction can be completed to a source step.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// The search hit its bounds before deciding.
    Inconclusive,
}

/// How a reached state has to relate to the encoding of the source
/// successor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Congruent,
    WeaklyBisimilar,
}

impl Relation {
    /// Static discarding and preserving encodings are expected to reach the
    /// encoding itself; the others only up to administrative residue.
    pub fn for_config(config: &EncodingConfig) -> Relation {
        match (config.mode, config.semantics) {
            (Mode::Static, Semantics::D | Semantics::P) => Relation::Congruent,
            _ => Relation::WeaklyBisimilar,
        }
    }
}

fn print_trace<S: Serializer>(
    trace: &[AdaptProcess],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(trace.iter().map(print_adapt))
}

#[derive(Debug, Clone, Serialize)]
pub struct StepVerdict {
    pub outcome: Outcome,
    /// Forward: the source successor. Backward: the target reduct.
    pub subject: String,
    /// The source step involved, once known.
    pub shape: Option<TauShape>,
    /// The source successor whose encoding was reached.
    pub matched: Option<String>,
    /// Target states from the start of the search to the matching state;
    /// each is a one-step reduct of the previous one.
    #[serde(serialize_with = "print_trace")]
    pub witness: Vec<AdaptProcess>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub direction: Direction,
    pub semantics: Semantics,
    pub mode: Mode,
    pub path: String,
    pub source: String,
    pub relation: Relation,
    pub depth: usize,
    pub states: usize,
    pub truncated: bool,
    pub verdicts: Vec<StepVerdict>,
}

impl CorrespondenceReport {
    pub fn count(&self, o: Outcome) -> usize {
        self.verdicts.iter().filter(|v| v.outcome == o).count()
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome == Outcome::Pass)
    }

    pub fn failures(&self) -> usize {
        self.count(Outcome::Fail)
    }

    pub fn inconclusive(&self) -> usize {
        self.count(Outcome::Inconclusive)
    }
}

/// Search bounds; the depth defaults to `8 + 5 * size` of the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub depth: Option<usize>,
    pub max_states: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            depth: None,
            max_states: 50_000,
        }
    }
}

pub fn default_depth(p: &CompProcess) -> usize {
    8 + 5 * p.size()
}

pub fn check_forward(
    p: &CompProcess,
    config: &EncodingConfig,
    opts: CheckOptions,
) -> Result<CorrespondenceReport> {
    Ok(Analysis::new(p, config, opts)?.forward())
}

pub fn check_backward(
    p: &CompProcess,
    config: &EncodingConfig,
    opts: CheckOptions,
) -> Result<CorrespondenceReport> {
    Ok(Analysis::new(p, config, opts)?.backward())
}

/// Both directions over a single exploration.
pub fn check_both(
    p: &CompProcess,
    config: &EncodingConfig,
    opts: CheckOptions,
) -> Result<(CorrespondenceReport, CorrespondenceReport)> {
    let a = Analysis::new(p, config, opts)?;
    Ok((a.forward(), a.backward()))
}

struct SourceStep {
    target: CompProcess,
    shape: std::result::Result<TauShape, String>,
    encoded: AdaptProcess,
    root: usize,
}

struct Analysis<'a> {
    source: &'a CompProcess,
    config: &'a EncodingConfig,
    relation: Relation,
    depth: usize,
    steps: Vec<SourceStep>,
    graph: ReductionGraph,
    blocks: Option<Vec<u32>>,
    garbage_free: std::cell::RefCell<HashMap<usize, AdaptProcess>>,
}

impl<'a> Analysis<'a> {
    fn new(
        source: &'a CompProcess,
        config: &'a EncodingConfig,
        opts: CheckOptions,
    ) -> Result<Self> {
        let kappa = config.semantics;
        let relation = Relation::for_config(config);
        let encoded = encode(source, config)?;
        let mut steps = Vec::new();
        for s in transitions(source, kappa)? {
            if s.label != Label::Tau {
                continue;
            }
            let shape = classify_tau(source, kappa, &s).map_err(|e| e.to_string());
            steps.push(SourceStep {
                encoded: encode(&s.target, config)?,
                target: s.target,
                shape,
                root: 0,
            });
        }
        let depth = opts.depth.unwrap_or_else(|| default_depth(source));
        let limits = Limits {
            depth,
            max_states: opts.max_states,
            replication_bound: 1,
        };
        let mut roots = vec![encoded];
        // for weak matching the successors' own behaviour is needed too
        if relation == Relation::WeaklyBisimilar {
            roots.extend(steps.iter().map(|s| s.encoded.clone()));
        }
        let graph = reachable_all(&roots, limits);
        for (i, s) in steps.iter_mut().enumerate() {
            s.root = match relation {
                Relation::WeaklyBisimilar => graph.roots[i + 1],
                Relation::Congruent => usize::MAX,
            };
        }
        let blocks = (relation == Relation::WeaklyBisimilar && !graph.truncated)
            .then(|| weak_classes(&graph));
        Ok(Analysis {
            source,
            config,
            relation,
            depth,
            steps,
            graph,
            blocks,
            garbage_free: Default::default(),
        })
    }

    fn report(&self, direction: Direction, verdicts: Vec<StepVerdict>) -> CorrespondenceReport {
        CorrespondenceReport {
            direction,
            semantics: self.config.semantics,
            mode: self.config.mode,
            path: self.config.path.to_string(),
            source: print_comp(self.source),
            relation: self.relation,
            depth: self.depth,
            states: self.graph.len(),
            truncated: self.graph.truncated,
            verdicts,
        }
    }

    fn gc(&self, s: usize) -> AdaptProcess {
        let mut cache = self.garbage_free.borrow_mut();
        cache
            .entry(s)
            .or_insert_with(|| collect_garbage(&self.graph.states[s]))
            .clone()
    }

    /// Whether graph state `s` stands for the encoding of step `i`'s
    /// successor. `None` when that cannot be decided within the bounds.
    fn matches(&self, s: usize, i: usize, target_normal: &AdaptProcess) -> Option<bool> {
        match (self.relation, &self.blocks) {
            (Relation::Congruent, _) => Some(self.graph.states[s] == *target_normal),
            (Relation::WeaklyBisimilar, Some(b)) => Some(b[s] == b[self.steps[i].root]),
            // without the full graph only garbage-free equality is safe
            (Relation::WeaklyBisimilar, None) => {
                if self.gc(s) == self.gc(self.steps[i].root) {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    /// Searches the states reachable from `start` for one matching any of
    /// `candidates`; returns the step index and the state.
    fn search(&self, start: usize, candidates: &[usize]) -> (Outcome, Option<(usize, usize)>) {
        let normals: Vec<AdaptProcess> = candidates
            .iter()
            .map(|&i| normalize(&self.steps[i].encoded))
            .collect();
        let reach = self.graph.reachable_from(start);
        let mut undecided = false;
        for &s in &reach {
            for (&i, normal) in candidates.iter().zip(&normals) {
                match self.matches(s, i, normal) {
                    Some(true) => return (Outcome::Pass, Some((i, s))),
                    Some(false) => {}
                    None => undecided = true,
                }
            }
        }
        if undecided || reach.iter().any(|&s| !self.graph.is_closed(s)) {
            (Outcome::Inconclusive, None)
        } else {
            (Outcome::Fail, None)
        }
    }

    fn witness(&self, from: usize, to: usize) -> Vec<AdaptProcess> {
        self.graph
            .path(from, to)
            .expect("matched state is reachable")
            .into_iter()
            .map(|j| self.graph.states[j].clone())
            .collect()
    }

    fn forward(&self) -> CorrespondenceReport {
        let root = self.graph.roots[0];
        let verdicts = (0..self.steps.len())
            .map(|i| {
                let step = &self.steps[i];
                let (mut outcome, found) = self.search(root, &[i]);
                let mut note = None;
                if let Err(e) = &step.shape {
                    outcome = Outcome::Fail;
                    note = Some(format!("unclassified source step: {e}"));
                } else if outcome != Outcome::Pass {
                    note = Some(format!(
                        "no reachable state {} the encoding of the successor",
                        match self.relation {
                            Relation::Congruent => "congruent to",
                            Relation::WeaklyBisimilar => "weakly bisimilar to",
                        }
                    ));
                }
                StepVerdict {
                    outcome,
                    subject: print_comp(&step.target),
                    shape: step.shape.clone().ok(),
                    matched: found.map(|_| print_comp(&step.target)),
                    witness: found.map_or_else(Vec::new, |(_, s)| self.witness(root, s)),
                    note,
                }
            })
            .collect();
        self.report(Direction::Forward, verdicts)
    }

    fn backward(&self) -> CorrespondenceReport {
        let root = self.graph.roots[0];
        let all: Vec<usize> = (0..self.steps.len()).collect();
        let verdicts = self.graph.succ[root]
            .iter()
            .map(|&q| {
                let (outcome, found) = self.search(q, &all);
                let mut witness = vec![self.graph.states[root].clone()];
                if let Some((_, s)) = found {
                    witness.extend(self.witness(q, s));
                }
                StepVerdict {
                    outcome,
                    subject: print_adapt(&self.graph.states[q]),
                    shape: found.and_then(|(i, _)| self.steps[i].shape.clone().ok()),
                    matched: found.map(|(i, _)| print_comp(&self.steps[i].target)),
                    witness,
                    note: (outcome != Outcome::Pass).then(|| {
                        "no source step whose encoding is reachable from this reduct".to_string()
                    }),
                }
            })
            .collect();
        self.report(Direction::Backward, verdicts)
    }
}
