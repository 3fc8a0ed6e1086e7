use super::lex::{lex, Tok};
use crate::adapt::{self, AdaptProcess};
use crate::comp::{self, CompProcess};
use crate::error::{Error, Pos, Result};
use crate::names::{
    reserved, validate_user_name, Name, Path, ProcVar, ReservedIndex, ReservedKind,
};

/// Parses a compensable process. Reserved names are rejected and the
/// result is checked for well-formedness.
pub fn parse_comp(text: &str) -> Result<CompProcess> {
    let p: CompProcess = Parser::new(text, false)?.whole()?;
    p.well_formed()?;
    Ok(p)
}

/// Parses an adaptable process written by a user: reserved names are
/// rejected.
pub fn parse_adapt(text: &str) -> Result<AdaptProcess> {
    Parser::new(text, false)?.whole()
}

/// Parses an adaptable process that may mention reserved names, as found
/// in printed encodings.
pub fn parse_adapt_reserved(text: &str) -> Result<AdaptProcess> {
    Parser::new(text, true)?.whole()
}

trait Syntax: Sized {
    fn nil() -> Self;
    fn inp(a: Name, p: Self) -> Self;
    fn out(a: Name, p: Self) -> Self;
    fn repl(p: Self) -> Self;
    fn restrict(a: Name, p: Self) -> Self;
    fn par(p: Self, q: Self) -> Self;
    fn var(x: ProcVar) -> Self;
    /// `l[P]` for locations, `t[P, Q]` for transactions.
    fn bracket(l: Name, parts: Vec<Self>) -> std::result::Result<Self, String>;
    fn protected(_p: Self) -> Option<Self> {
        None
    }
    fn inst(_x: ProcVar, _r: Self, _p: Self) -> Option<Self> {
        None
    }
    fn upd(_l: Name, _x: ProcVar, _q: Self, _p: Self) -> Option<Self> {
        None
    }
}

impl Syntax for CompProcess {
    fn nil() -> Self {
        comp::nil()
    }
    fn inp(a: Name, p: Self) -> Self {
        comp::inp(&a, p)
    }
    fn out(a: Name, p: Self) -> Self {
        comp::out(&a, p)
    }
    fn repl(p: Self) -> Self {
        comp::repl(p)
    }
    fn restrict(a: Name, p: Self) -> Self {
        comp::restrict(&a, p)
    }
    fn par(p: Self, q: Self) -> Self {
        comp::par(p, q)
    }
    fn var(x: ProcVar) -> Self {
        comp::var(&x)
    }
    fn bracket(t: Name, parts: Vec<Self>) -> std::result::Result<Self, String> {
        match <[Self; 2]>::try_from(parts) {
            Ok([p, q]) => Ok(comp::trans(&t, p, q)),
            Err(_) => Err(format!(
                "transaction `{t}` needs a default and a compensation: `{t}[P, Q]`"
            )),
        }
    }
    fn protected(p: Self) -> Option<Self> {
        Some(comp::protected(p))
    }
    fn inst(x: ProcVar, r: Self, p: Self) -> Option<Self> {
        Some(comp::inst(&x, r, p))
    }
}

impl Syntax for AdaptProcess {
    fn nil() -> Self {
        adapt::nil()
    }
    fn inp(a: Name, p: Self) -> Self {
        adapt::inp(&a, p)
    }
    fn out(a: Name, p: Self) -> Self {
        adapt::out(&a, p)
    }
    fn repl(p: Self) -> Self {
        adapt::repl(p)
    }
    fn restrict(a: Name, p: Self) -> Self {
        adapt::restrict(&a, p)
    }
    fn par(p: Self, q: Self) -> Self {
        adapt::par(p, q)
    }
    fn var(x: ProcVar) -> Self {
        adapt::var(&x)
    }
    fn bracket(l: Name, parts: Vec<Self>) -> std::result::Result<Self, String> {
        match <[Self; 1]>::try_from(parts) {
            Ok([p]) => Ok(adapt::loc(&l, p)),
            Err(_) => Err(format!("location `{l}` holds a single process: `{l}[P]`")),
        }
    }
    fn upd(l: Name, x: ProcVar, q: Self, p: Self) -> Option<Self> {
        Some(adapt::upd(&l, &x, q, p))
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    at: usize,
    allow_reserved: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, allow_reserved: bool) -> Result<Self> {
        Ok(Parser {
            text,
            toks: lex(text)?,
            at: 0,
            allow_reserved,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error_at(&self, offset: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: Pos::of(self.text, offset),
            msg: msg.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        self.error_at(
            self.offset(),
            format!("expected {wanted}, found {}", self.peek()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn whole<P: Syntax>(&mut self) -> Result<P> {
        let p = self.proc()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("`|` or end of input"));
        }
        Ok(p)
    }

    fn proc<P: Syntax>(&mut self) -> Result<P> {
        let p = self.prefixed()?;
        if *self.peek() == Tok::Bar {
            self.bump();
            Ok(P::par(p, self.proc()?))
        } else {
            Ok(p)
        }
    }

    /// The continuation after a prefix; a missing `.P` means `.0`.
    fn continuation<P: Syntax>(&mut self) -> Result<P> {
        if *self.peek() == Tok::Dot {
            self.bump();
            self.prefixed()
        } else {
            Ok(P::nil())
        }
    }

    fn prefixed<P: Syntax>(&mut self) -> Result<P> {
        let start = self.offset();
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(P::nil())
            }
            Tok::Tilde => {
                self.bump();
                let a = self.name()?;
                Ok(P::out(a, self.continuation()?))
            }
            Tok::Bang => {
                self.bump();
                Ok(P::repl(self.prefixed()?))
            }
            Tok::LParen => {
                self.bump();
                let p = self.proc()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Var(_) => Ok(P::var(self.var()?)),
            Tok::LAngle => {
                self.bump();
                let p = self.proc()?;
                self.expect(Tok::RAngle)?;
                P::protected(p).ok_or_else(|| {
                    self.error_at(start, "protected blocks belong to compensable processes")
                })
            }
            Tok::Ident(w) if w == "new" => {
                self.bump();
                let a = self.name()?;
                self.expect(Tok::Dot)?;
                Ok(P::restrict(a, self.prefixed()?))
            }
            Tok::Ident(w) if w == "inst" => {
                self.bump();
                let (x, r) = self.abstraction()?;
                let p = self.continuation()?;
                P::inst(x, r, p)
                    .ok_or_else(|| self.error_at(start, "`inst` belongs to compensable processes"))
            }
            Tok::Ident(w) if w == "upd" => {
                self.bump();
                let l = self.name()?;
                let (x, q) = self.abstraction()?;
                let p = self.continuation()?;
                P::upd(l, x, q, p)
                    .ok_or_else(|| self.error_at(start, "`upd` belongs to adaptable processes"))
            }
            Tok::Ident(_) | Tok::Bound(_) | Tok::Dollar => {
                let a = self.name()?;
                if *self.peek() == Tok::LBrack {
                    self.bump();
                    let mut parts = vec![self.proc()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        parts.push(self.proc()?);
                    }
                    self.expect(Tok::RBrack)?;
                    P::bracket(a, parts).map_err(|m| self.error_at(start, m))
                } else {
                    Ok(P::inp(a, self.continuation()?))
                }
            }
            _ => Err(self.unexpected("a process")),
        }
    }

    /// `(X => Q).`, shared by `inst` and `upd`.
    fn abstraction<P: Syntax>(&mut self) -> Result<(ProcVar, P)> {
        self.expect(Tok::LParen)?;
        let x = self.var()?;
        self.expect(Tok::Arrow)?;
        let q = self.proc()?;
        self.expect(Tok::RParen)?;
        Ok((x, q))
    }

    fn var(&mut self) -> Result<ProcVar> {
        match self.bump() {
            Tok::Var(x) => Ok(ProcVar::new(&x)),
            _ => {
                self.at -= 1;
                Err(self.unexpected("a process variable"))
            }
        }
    }

    fn name(&mut self) -> Result<Name> {
        let at = self.offset();
        match self.bump() {
            Tok::Ident(w) => validate_user_name(&w).map_err(|e| match e {
                Error::Parse { msg, .. } => self.error_at(at, msg),
                e => e,
            }),
            Tok::Bound(i) => Ok(Name::Bound(i)),
            Tok::Dollar if self.allow_reserved => self.reserved_tail(at),
            Tok::Dollar => Err(self.error_at(at, "`$` names are reserved for encodings")),
            _ => {
                self.at -= 1;
                Err(self.unexpected("a name"))
            }
        }
    }

    /// After `$`: `kind.index`, where the index is a name or a path
    /// (`ε` or comma-separated names, innermost first).
    fn reserved_tail(&mut self, at: usize) -> Result<Name> {
        let kind = match self.bump() {
            Tok::Ident(k) => ReservedKind::parse(&k),
            _ => None,
        }
        .ok_or_else(|| self.error_at(at, "unknown reserved name kind"))?;
        self.expect(Tok::Dot)?;
        let index = if kind.indexed_by_name() {
            ReservedIndex::Name(self.plain_name()?)
        } else if *self.peek() == Tok::Epsilon {
            self.bump();
            ReservedIndex::Path(Path::empty())
        } else {
            let mut names = vec![self.plain_name()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                names.push(self.plain_name()?);
            }
            ReservedIndex::Path(Path::new(names))
        };
        reserved(kind, index).map_err(|e| self.error_at(at, e.to_string()))
    }

    fn plain_name(&mut self) -> Result<Name> {
        if *self.peek() == Tok::Dollar {
            return Err(self.unexpected("a transaction name"));
        }
        self.name()
    }
}
