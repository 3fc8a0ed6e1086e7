//! Encodings of compensable processes into adaptable processes, one per
//! compensation policy, for static compensations and for compensations
//! updated at run time.

mod encode;
mod structure;

use serde::Serialize;

use crate::comp::Semantics;
use crate::names::Path;

pub use encode::{aux_encode, encode};
pub use structure::{
    activation_process, containment_tree, npb, nt, top_level_transactions, ContainmentTree, Counts,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Compensations are fixed: no `inst` and no process variables.
    Static,
    /// Compensations may be replaced by `inst(X => R).P`.
    Dynamic,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Mode> {
        match s {
            "static" => Ok(Mode::Static),
            "dynamic" => Ok(Mode::Dynamic),
            _ => Err(crate::Error::Usage(format!(
                "unknown mode `{s}` (expected static or dynamic)"
            ))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Static => "static",
            Mode::Dynamic => "dynamic",
        })
    }
}

/// Deliberate defects, used to check that the correspondence checker
/// notices a broken encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mutation {
    /// Collected protected blocks stay inside the aborted transaction
    /// instead of being moved out through `z`.
    SkipEscape,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodingConfig {
    pub semantics: Semantics,
    pub mode: Mode,
    /// The path the top-level term is encoded at.
    pub path: Path,
    pub mutation: Option<Mutation>,
}

impl EncodingConfig {
    pub fn new(semantics: Semantics, mode: Mode) -> EncodingConfig {
        EncodingConfig {
            semantics,
            mode,
            path: Path::empty(),
            mutation: None,
        }
    }

    pub fn at(mut self, path: Path) -> EncodingConfig {
        self.path = path;
        self
    }

    pub fn with_mutation(mut self, m: Mutation) -> EncodingConfig {
        self.mutation = Some(m);
        self
    }

    /// All six semantics/mode combinations.
    pub fn all() -> impl Iterator<Item = EncodingConfig> {
        [Mode::Static, Mode::Dynamic].into_iter().flat_map(|m| {
            Semantics::ALL
                .into_iter()
                .map(move |k| EncodingConfig::new(k, m))
        })
    }
}
