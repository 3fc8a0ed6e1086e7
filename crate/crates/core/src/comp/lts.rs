//! The labelled transition systems of compensable processes, one per
//! extraction semantics.

use std::fmt;

use serde::Serialize;

use super::CompProcess::{self, *};
use super::{extract, no_comp, par, protected, repl, restrict, trans, Semantics};
use crate::error::{Error, Result};
use crate::names::{Name, ProcVar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    In(Name),
    Out(Name),
    Tau,
    /// `λX.R`, offered by a compensation update to its transaction.
    Lambda(ProcVar, CompProcess),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::In(a) => write!(f, "{a}"),
            Label::Out(a) => write!(f, "~{a}"),
            Label::Tau => f.write_str("tau"),
            Label::Lambda(x, r) => write!(f, "lambda {x}. {}", crate::textio::print_comp(r)),
        }
    }
}

/// The rule that produced a transition. For τ-steps this is the
/// case of the τ-step classification it falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Origin {
    Prefix,
    RecoverOut,
    Inst,
    Comm,
    AbortExternal,
    AbortInternal,
    CompUpdate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauShape {
    /// Synchronisation between an output and an input prefix.
    Comm,
    /// A transaction aborted by a signal from outside it.
    AbortExternal,
    /// A transaction aborted by a signal from its own default activity.
    AbortInternal,
    /// A compensation update installed into its transaction.
    CompUpdate,
}

impl fmt::Display for TauShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauShape::Comm => "comm",
            TauShape::AbortExternal => "abort-external",
            TauShape::AbortInternal => "abort-internal",
            TauShape::CompUpdate => "comp-update",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub label: Label,
    pub target: CompProcess,
    pub origin: Origin,
}

/// All one-step transitions of a well-formed term, in a fixed
/// left-to-right order, without duplicates.
pub fn transitions(p: &CompProcess, kappa: Semantics) -> Result<Vec<Step>> {
    p.well_formed()?;
    let mut steps = derive(p, kappa);
    let mut seen = std::collections::HashSet::new();
    steps.retain(|s| seen.insert((s.label.clone(), s.target.clone())));
    Ok(steps)
}

fn step(label: Label, target: CompProcess, origin: Origin) -> Step {
    Step {
        label,
        target,
        origin,
    }
}

fn derive(p: &CompProcess, kappa: Semantics) -> Vec<Step> {
    match p {
        Nil | Var(_) => vec![],
        In(a, k) => vec![step(Label::In(a.clone()), (**k).clone(), Origin::Prefix)],
        Out(a, k) => vec![step(Label::Out(a.clone()), (**k).clone(), Origin::Prefix)],
        CompUpdate(x, r, k) => vec![step(
            Label::Lambda(x.clone(), (**r).clone()),
            (**k).clone(),
            Origin::Inst,
        )],
        Repl(q) => derive(q, kappa)
            .into_iter()
            .map(|s| Step {
                target: par(s.target, repl((**q).clone())),
                ..s
            })
            .collect(),
        Protected(q) => derive(q, kappa)
            .into_iter()
            .map(|s| Step {
                target: protected(s.target),
                ..s
            })
            .collect(),
        Restrict(a, q) => derive(q, kappa)
            .into_iter()
            .filter(|s| !matches!(&s.label, Label::In(b) | Label::Out(b) if b == a))
            .map(|s| Step {
                target: restrict(a, s.target),
                ..s
            })
            .collect(),
        Par(l, r) => {
            let left = derive(l, kappa);
            let right = derive(r, kappa);
            let mut out = Vec::new();
            for s in &left {
                out.push(Step {
                    target: par(s.target.clone(), (**r).clone()),
                    ..s.clone()
                });
            }
            for s in &right {
                out.push(Step {
                    target: par((**l).clone(), s.target.clone()),
                    ..s.clone()
                });
            }
            let sync = |i: &Step, o: &Step| match (&i.label, &o.label) {
                (Label::In(a), Label::Out(b)) if a == b => {
                    Some(if i.origin == Origin::RecoverOut {
                        Origin::AbortExternal
                    } else {
                        Origin::Comm
                    })
                }
                _ => None,
            };
            for s in &left {
                for t in &right {
                    if let Some(origin) = sync(s, t).or_else(|| sync(t, s)) {
                        out.push(step(
                            Label::Tau,
                            par(s.target.clone(), t.target.clone()),
                            origin,
                        ));
                    }
                }
            }
            out
        }
        Trans(t, body, comp) => {
            let inner = derive(body, kappa);
            let mut out = Vec::new();
            let aborted =
                |rest: &CompProcess| par(extract(rest, kappa), protected((**comp).clone()));
            if no_comp(body) {
                for s in &inner {
                    if !matches!(s.label, Label::Lambda(..)) {
                        out.push(Step {
                            target: trans(t, s.target.clone(), (**comp).clone()),
                            ..s.clone()
                        });
                    }
                }
                for s in &inner {
                    if s.label == Label::Out(t.clone()) {
                        out.push(step(Label::Tau, aborted(&s.target), Origin::AbortInternal));
                    }
                }
                out.push(step(
                    Label::In(t.clone()),
                    aborted(body),
                    Origin::RecoverOut,
                ));
            }
            for s in inner {
                if let Label::Lambda(x, r) = &s.label {
                    out.push(step(
                        Label::Tau,
                        trans(t, s.target.clone(), r.substitute(x, comp)),
                        Origin::CompUpdate,
                    ));
                }
            }
            out
        }
    }
}

/// Which kind of τ-step `step` is, read off the derivation that produced it.
pub fn classify_tau(p: &CompProcess, kappa: Semantics, step: &Step) -> Result<TauShape> {
    if step.label != Label::Tau {
        return Err(Error::Usage(format!("`{}` is not a tau step", step.label)));
    }
    let found = transitions(p, kappa)?
        .into_iter()
        .find(|s| s.label == Label::Tau && s.target == step.target)
        .ok_or_else(|| Error::Usage("step is not a transition of the term".into()))?;
    match found.origin {
        Origin::Comm => Ok(TauShape::Comm),
        Origin::AbortExternal => Ok(TauShape::AbortExternal),
        Origin::AbortInternal => Ok(TauShape::AbortInternal),
        Origin::CompUpdate => Ok(TauShape::CompUpdate),
        o => Err(Error::Usage(format!("tau step with non-tau origin {o:?}"))),
    }
}
