//! A second derivation of the compensable LTS. Instead of recursing on the
//! term, it picks the active prefixes (and transactions) by position, fires
//! them, and walks the enclosing frames outwards applying the side
//! conditions of each rule. Pairs meet at the `|` that separates them.

use std::collections::BTreeSet;

use compadapt::comp::{self, normalize, CompProcess, CompProcess::*, Label, Origin, Semantics};

type Pos = Vec<usize>;

pub type Move = (Label, CompProcess, Origin);

fn child(p: &CompProcess, i: usize) -> &CompProcess {
    match (p, i) {
        (Par(a, _), 0) => a,
        (Par(_, b), 1) => b,
        (Repl(q) | Restrict(_, q) | Protected(q) | Trans(_, q, _), 0) => q,
        _ => panic!("no child {i}"),
    }
}

fn at<'a>(p: &'a CompProcess, pos: &[usize]) -> &'a CompProcess {
    pos.iter().fold(p, |q, &i| child(q, i))
}

fn extr(p: &CompProcess, kappa: Semantics) -> CompProcess {
    match p {
        Par(a, b) => comp::par(extr(a, kappa), extr(b, kappa)),
        Restrict(a, q) => comp::restrict(a, extr(q, kappa)),
        Protected(_) => p.clone(),
        Trans(_, d, c) => match kappa {
            Semantics::D => Nil,
            Semantics::P => p.clone(),
            Semantics::A => comp::par(extr(d, kappa), comp::protected((**c).clone())),
        },
        _ => Nil,
    }
}

/// True when no compensation update is active outside nested transactions.
fn quiet(p: &CompProcess) -> bool {
    match p {
        CompUpdate(..) => false,
        Par(a, b) => quiet(a) && quiet(b),
        Repl(q) | Restrict(_, q) | Protected(q) => quiet(q),
        _ => true,
    }
}

/// Positions of everything that can fire on its own.
fn active(p: &CompProcess, pos: &mut Pos, out: &mut Vec<Pos>) {
    match p {
        In(..) | Out(..) | CompUpdate(..) => out.push(pos.clone()),
        Trans(..) => {
            out.push(pos.clone());
            pos.push(0);
            active(child(p, 0), pos, out);
            pos.pop();
        }
        Par(..) => {
            for i in 0..2 {
                pos.push(i);
                active(child(p, i), pos, out);
                pos.pop();
            }
        }
        Repl(_) | Restrict(..) | Protected(_) => {
            pos.push(0);
            active(child(p, 0), pos, out);
            pos.pop();
        }
        Nil | Var(_) => {}
    }
}

fn fire(p: &CompProcess, kappa: Semantics) -> Option<Move> {
    match p {
        In(a, k) => Some((Label::In(a.clone()), (**k).clone(), Origin::Prefix)),
        Out(a, k) => Some((Label::Out(a.clone()), (**k).clone(), Origin::Prefix)),
        CompUpdate(x, r, k) => Some((
            Label::Lambda(x.clone(), (**r).clone()),
            (**k).clone(),
            Origin::Inst,
        )),
        Trans(t, d, c) if quiet(d) => Some((
            Label::In(t.clone()),
            comp::par(extr(d, kappa), comp::protected((**c).clone())),
            Origin::RecoverOut,
        )),
        _ => None,
    }
}

/// Carries a move made by the subterm at `pos[..from]` out to depth `to`.
fn lift(
    root: &CompProcess,
    pos: &[usize],
    from: usize,
    to: usize,
    m: Move,
    kappa: Semantics,
    out: &mut Vec<Move>,
) {
    let (mut label, mut sub, mut origin) = m;
    for i in (to..from).rev() {
        let node = at(root, &pos[..i]);
        sub = match node {
            Par(_, b) if pos[i] == 0 => comp::par(sub, (**b).clone()),
            Par(a, _) => comp::par((**a).clone(), sub),
            Repl(q) => comp::par(sub, comp::repl((**q).clone())),
            Protected(_) => comp::protected(sub),
            Restrict(a, _) => {
                if matches!(&label, Label::In(b) | Label::Out(b) if b == a) {
                    return;
                }
                comp::restrict(a, sub)
            }
            Trans(t, d, c) => {
                if let Label::Lambda(x, r) = &label {
                    let next = comp::trans(t, sub, r.substitute(x, c));
                    label = Label::Tau;
                    origin = Origin::CompUpdate;
                    next
                } else {
                    if !quiet(d) {
                        return;
                    }
                    if label == Label::Out(t.clone()) {
                        let aborted = comp::par(extr(&sub, kappa), comp::protected((**c).clone()));
                        lift(
                            root,
                            pos,
                            i,
                            to,
                            (Label::Tau, aborted, Origin::AbortInternal),
                            kappa,
                            out,
                        );
                    }
                    comp::trans(t, sub, (**c).clone())
                }
            }
            _ => unreachable!("not a frame"),
        };
    }
    out.push((label, sub, origin));
}

fn complementary(x: &Label, y: &Label) -> bool {
    matches!((x, y), (Label::In(a), Label::Out(b)) | (Label::Out(a), Label::In(b)) if a == b)
}

/// Every transition of `p`, as (label, normalized target, origin).
pub fn transitions(p: &CompProcess, kappa: Semantics) -> BTreeSet<(String, CompProcess, String)> {
    let mut leaves = Vec::new();
    active(p, &mut Vec::new(), &mut leaves);
    let mut moves = Vec::new();
    for l in &leaves {
        if let Some(m) = fire(at(p, l), kappa) {
            lift(p, l, l.len(), 0, m, kappa, &mut moves);
        }
    }
    // synchronisations, at the `|` where two positions part ways
    for (i, l) in leaves.iter().enumerate() {
        for r in &leaves[i + 1..] {
            let split = l.iter().zip(r).take_while(|(a, b)| a == b).count();
            if split == l.len() || split == r.len() || !matches!(at(p, &l[..split]), Par(..)) {
                continue;
            }
            let (Some(ml), Some(mr)) = (fire(at(p, l), kappa), fire(at(p, r), kappa)) else {
                continue;
            };
            let (mut ls, mut rs) = (Vec::new(), Vec::new());
            lift(p, l, l.len(), split + 1, ml, kappa, &mut ls);
            lift(p, r, r.len(), split + 1, mr, kappa, &mut rs);
            for (la, sa, oa) in &ls {
                for (lb, sb, ob) in &rs {
                    if !complementary(la, lb) {
                        continue;
                    }
                    let origin = if *oa == Origin::RecoverOut || *ob == Origin::RecoverOut {
                        Origin::AbortExternal
                    } else {
                        Origin::Comm
                    };
                    let sub = if l[split] == 0 {
                        comp::par(sa.clone(), sb.clone())
                    } else {
                        comp::par(sb.clone(), sa.clone())
                    };
                    lift(p, l, split, 0, (Label::Tau, sub, origin), kappa, &mut moves);
                }
            }
        }
    }
    moves
        .into_iter()
        .map(|(l, t, o)| (l.to_string(), normalize(&t), format!("{o:?}")))
        .collect()
}
