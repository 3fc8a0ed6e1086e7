//! Names, paths and process variables.
//!
//! User names come from source text. Reserved names are the auxiliary
//! channels and locations introduced by the encodings (`l_t`, `p_ρ`, ...);
//! they are built from a kind and an index and can never be written in a
//! source term. Bound names are the canonical names given to restricted
//! channels by normalization.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Name {
    User(Arc<str>),
    /// Canonical name of a restricted channel, printed `_n`.
    Bound(u32),
    Reserved(Arc<Reserved>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reserved {
    pub kind: ReservedKind,
    pub index: ReservedIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ReservedKind {
    L,
    K,
    M,
    P,
    Beta,
    Gamma,
    Z,
    U,
    V,
    V1,
    F,
    G,
    A,
    J,
}

impl ReservedKind {
    pub const ALL: [ReservedKind; 14] = [
        ReservedKind::L,
        ReservedKind::K,
        ReservedKind::M,
        ReservedKind::P,
        ReservedKind::Beta,
        ReservedKind::Gamma,
        ReservedKind::Z,
        ReservedKind::U,
        ReservedKind::V,
        ReservedKind::V1,
        ReservedKind::F,
        ReservedKind::G,
        ReservedKind::A,
        ReservedKind::J,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReservedKind::L => "l",
            ReservedKind::K => "k",
            ReservedKind::M => "m",
            ReservedKind::P => "p",
            ReservedKind::Beta => "beta",
            ReservedKind::Gamma => "gamma",
            ReservedKind::Z => "z",
            ReservedKind::U => "u",
            ReservedKind::V => "v",
            ReservedKind::V1 => "v1",
            ReservedKind::F => "f",
            ReservedKind::G => "g",
            ReservedKind::A => "a",
            ReservedKind::J => "j",
        }
    }

    pub fn parse(s: &str) -> Option<ReservedKind> {
        ReservedKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// `l`, `k`, `m` and `gamma` are indexed by a transaction name; every
    /// other kind is indexed by a path.
    pub fn indexed_by_name(self) -> bool {
        matches!(
            self,
            ReservedKind::L | ReservedKind::K | ReservedKind::M | ReservedKind::Gamma
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReservedIndex {
    Name(Name),
    Path(Path),
}

/// A sequence of transaction names, innermost first. `t,ρ` is
/// `rho.push_front(t)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Name>);

impl Path {
    pub fn empty() -> Path {
        Path(Vec::new())
    }

    pub fn new(names: Vec<Name>) -> Path {
        Path(names)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[Name] {
        &self.0
    }

    /// The path `t,self`.
    pub fn push_front(&self, t: &Name) -> Path {
        let mut names = Vec::with_capacity(self.0.len() + 1);
        names.push(t.clone());
        names.extend(self.0.iter().cloned());
        Path(names)
    }

    /// Splits `t,ρ` into `(t, ρ)`.
    pub fn split_head(&self) -> Option<(&Name, Path)> {
        let (head, rest) = self.0.split_first()?;
        Some((head, Path(rest.to_vec())))
    }
}

/// Parses `ε` (or an empty string) and comma-separated user names.
impl std::str::FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Path> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(Path::empty());
        }
        s.split(',')
            .map(|t| validate_user_name(t.trim()))
            .collect::<Result<Vec<_>>>()
            .map(Path)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl Name {
    pub fn user(s: &str) -> Name {
        Name::User(Arc::from(s))
    }

    pub fn is_reserved(&self) -> bool {
        matches!(self, Name::Reserved(_))
    }

    pub fn as_reserved(&self) -> Option<&Reserved> {
        match self {
            Name::Reserved(r) => Some(r),
            _ => None,
        }
    }

    /// Every name mentioned by this name, including the names inside a
    /// reserved name's index.
    pub fn for_each_component(&self, f: &mut impl FnMut(&Name)) {
        f(self);
        if let Name::Reserved(r) = self {
            match &r.index {
                ReservedIndex::Name(n) => n.for_each_component(f),
                ReservedIndex::Path(p) => p.0.iter().for_each(|n| n.for_each_component(f)),
            }
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::User(s) => f.write_str(s),
            Name::Bound(i) => write!(f, "_{i}"),
            Name::Reserved(r) => match &r.index {
                ReservedIndex::Name(n) => write!(f, "${}.{}", r.kind.as_str(), n),
                ReservedIndex::Path(p) => write!(f, "${}.{}", r.kind.as_str(), p),
            },
        }
    }
}

/// Builds the reserved name `kind_index`. Injective in `(kind, index)`.
pub fn reserved(kind: ReservedKind, index: ReservedIndex) -> Result<Name> {
    match (&index, kind.indexed_by_name()) {
        (ReservedIndex::Name(_), true) | (ReservedIndex::Path(_), false) => {
            Ok(Name::Reserved(Arc::new(Reserved { kind, index })))
        }
        (ReservedIndex::Name(_), false) => Err(Error::Usage(format!(
            "reserved kind `{}` is indexed by a path, not a name",
            kind.as_str()
        ))),
        (ReservedIndex::Path(_), true) => Err(Error::Usage(format!(
            "reserved kind `{}` is indexed by a transaction name, not a path",
            kind.as_str()
        ))),
    }
}

/// Name-indexed reserved name; the caller guarantees the sort.
pub(crate) fn rn(kind: ReservedKind, t: &Name) -> Name {
    debug_assert!(kind.indexed_by_name());
    Name::Reserved(Arc::new(Reserved {
        kind,
        index: ReservedIndex::Name(t.clone()),
    }))
}

/// Path-indexed reserved name; the caller guarantees the sort.
pub(crate) fn rp(kind: ReservedKind, path: &Path) -> Name {
    debug_assert!(!kind.indexed_by_name());
    Name::Reserved(Arc::new(Reserved {
        kind,
        index: ReservedIndex::Path(path.clone()),
    }))
}

pub const KEYWORDS: [&str; 3] = ["new", "inst", "upd"];

/// Checks that `text` is a legal user name: nonempty, starts with an ASCII
/// lowercase letter, continues with alphanumerics, `_` or `'`, and is not a
/// keyword.
pub fn validate_user_name(text: &str) -> Result<Name> {
    let err = |offset: usize, msg: String| Error::Parse {
        pos: crate::error::Pos::of(text, offset),
        msg,
    };
    let mut chars = text.char_indices();
    match chars.next() {
        None => return Err(err(0, "empty name".into())),
        Some((_, '$')) => return Err(err(0, format!("`{text}` uses the reserved namespace"))),
        Some((_, c)) if !c.is_ascii_lowercase() => {
            return Err(err(
                0,
                format!("name `{text}` must start with a lowercase letter"),
            ))
        }
        _ => {}
    }
    for (i, c) in chars {
        if c == '$' {
            return Err(err(i, format!("`{text}` uses the reserved namespace")));
        }
        if !(c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
            return Err(err(i, format!("illegal character `{c}` in name")));
        }
    }
    if KEYWORDS.contains(&text) {
        return Err(err(0, format!("`{text}` is a keyword")));
    }
    Ok(Name::user(text))
}

/// A process variable (`X`, `Y`, ...).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProcVar(Arc<str>);

impl ProcVar {
    pub fn new(s: &str) -> ProcVar {
        ProcVar(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Canonical name of the variable bound at binder level `level`.
    pub fn canonical(level: u32) -> ProcVar {
        ProcVar(Arc::from(format!("_X{level}")))
    }

    /// A variable distinct from every variable accepted by `avoid`.
    pub fn fresh(base: &ProcVar, avoid: impl Fn(&ProcVar) -> bool) -> ProcVar {
        let stem = base
            .0
            .trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
        let stem = if stem.is_empty() { "X" } else { stem };
        (0u32..)
            .map(|i| ProcVar(Arc::from(format!("{stem}'{i}"))))
            .find(|v| !avoid(v))
            .expect("unbounded search")
    }
}

impl fmt::Display for ProcVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
