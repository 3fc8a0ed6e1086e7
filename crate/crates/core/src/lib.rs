//! Compensable transactions, adaptable processes, and the encodings from
//! the former into the latter.
//!
//! - [`comp`]: the transactional calculus with its labelled semantics.
//! - [`adapt`]: processes with located, updatable components.
//! - [`encoder`]: translations for the three compensation policies.
//! - [`equivalence`]: operational correspondence and weak barbed checks.
//! - [`textio`]: concrete syntax.
//! - [`fuzz`]: random terms and correspondence fuzzing.

pub mod adapt;
pub mod comp;
pub mod encoder;
pub mod equivalence;
mod error;
pub mod fuzz;
pub mod names;
pub mod textio;

pub use error::{Error, Pos, Result};

/// The guide, compiled so its examples run as doc-tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/compensable.md")]
    pub mod compensable {}
    #[doc = include_str!("../../../book/src/adaptable.md")]
    pub mod adaptable {}
    #[doc = include_str!("../../../book/src/encodings.md")]
    pub mod encodings {}
    #[doc = include_str!("../../../book/src/checking.md")]
    pub mod checking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
