use super::CompProcess::{self, *};
use super::{par, protected, restrict, Semantics};

/// The extraction function for semantics `kappa`: what survives of a
/// transaction's default activity when the transaction is aborted.
pub fn extract(p: &CompProcess, kappa: Semantics) -> CompProcess {
    match p {
        Trans(_, body, comp) => match kappa {
            Semantics::D => Nil,
            Semantics::P => p.clone(),
            Semantics::A => par(extract(body, kappa), protected((**comp).clone())),
        },
        Protected(_) => p.clone(),
        Par(a, b) => par(extract(a, kappa), extract(b, kappa)),
        Restrict(a, q) => restrict(a, extract(q, kappa)),
        Repl(_) | CompUpdate(..) | In(..) | Out(..) | Nil | Var(_) => Nil,
    }
}

/// True when `p` has no compensation update waiting to fire for the
/// enclosing transaction: none is reachable through `|`, `ν`, `<·>` or `!`
/// without crossing a prefix or a nested transaction.
pub fn no_comp(p: &CompProcess) -> bool {
    match p {
        CompUpdate(..) => false,
        Par(a, b) => no_comp(a) && no_comp(b),
        Restrict(_, q) | Protected(q) | Repl(q) => no_comp(q),
        Nil | Var(_) | In(..) | Out(..) | Trans(..) => true,
    }
}
