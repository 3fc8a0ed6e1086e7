//! Behavioural equivalence on adaptable processes and the operational
//! correspondence checks for the encodings.

mod barbs;
mod bisim;
mod correspondence;

pub use barbs::{barbs, collect_garbage, Barb};
pub use bisim::{weak_classes, weak_equiv};
pub use correspondence::{
    check_backward, check_both, check_forward, default_depth, CheckOptions, CorrespondenceReport,
    Direction, Outcome, Relation, StepVerdict,
};
