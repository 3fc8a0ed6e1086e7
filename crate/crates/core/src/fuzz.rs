//! Seeded random compensable terms and differential correspondence
//! testing of the encodings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::comp::{self, CompProcess};
use crate::encoder::EncodingConfig;
use crate::equivalence::{check_both, CheckOptions, CorrespondenceReport, Direction};
use crate::names::{Name, ProcVar};
use crate::textio::print_comp;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on the AST node count.
    pub max_size: usize,
    /// Upper bound on transaction nesting.
    pub max_nesting: usize,
    /// Generate `inst` updates; every term then contains at least one.
    pub dynamic: bool,
    /// Number of plain channel names.
    pub alphabet: usize,
    pub replication: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_size: 12,
            max_nesting: 3,
            dynamic: false,
            alphabet: 2,
            replication: false,
        }
    }
}

const CHANNELS: [&str; 6] = ["a", "b", "c", "d", "e", "h"];

struct Gen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    transactions: Vec<Name>,
    next_transaction: usize,
}

#[derive(Clone, Copy)]
struct Ctx {
    guarded: bool,
    nesting: usize,
    /// Directly inside a transaction default, where `inst` may appear.
    in_default: bool,
    /// Process variables in scope.
    vars: usize,
}

impl Gen<'_> {
    fn channel(&mut self) -> Name {
        let k = self.cfg.alphabet.clamp(1, CHANNELS.len());
        Name::user(CHANNELS[self.rng.gen_range(0..k)])
    }

    /// A channel or, sometimes, a transaction name to signal on.
    fn prefix_name(&mut self) -> (Name, bool) {
        if self.rng.gen_bool(0.35) {
            let t = Name::user(&format!(
                "t{}",
                self.rng.gen_range(1..=self.cfg.max_nesting.max(1) + 1)
            ));
            (t, true)
        } else {
            let a = self.channel();
            (a, self.rng.gen_bool(0.5))
        }
    }

    fn term(&mut self, budget: usize, cx: Ctx) -> CompProcess {
        #[derive(Clone, Copy)]
        enum K {
            Nil,
            Var,
            Prefix,
            Par,
            Restrict,
            Protected,
            Trans,
            Inst,
            Repl,
        }
        let mut options = vec![(K::Nil, 2), (K::Prefix, 6)];
        // under a prefix a substituted compensation could put a transaction
        // behind it
        if cx.vars > 0 && !cx.guarded {
            options.push((K::Var, 3));
        }
        if budget >= 3 {
            options.push((K::Par, 5));
        }
        if budget >= 2 {
            options.push((K::Restrict, 1));
            if !cx.guarded {
                options.push((K::Protected, 3));
            }
            if self.cfg.replication {
                options.push((K::Repl, 1));
            }
        }
        if budget >= 3 && !cx.guarded && cx.nesting < self.cfg.max_nesting {
            options.push((K::Trans, 6));
        }
        if budget >= 3 && self.cfg.dynamic && cx.in_default && !cx.guarded {
            options.push((K::Inst, 5));
        }
        if budget == 1 {
            options.retain(|(k, _)| matches!(k, K::Nil | K::Var));
        }
        let kind = options
            .choose_weighted(&mut self.rng, |o| o.1)
            .expect("nonempty")
            .0;
        match kind {
            K::Nil => comp::nil(),
            K::Var => comp::var(&ProcVar::new(&format!(
                "X{}",
                self.rng.gen_range(0..cx.vars)
            ))),
            K::Prefix => {
                let (a, output) = self.prefix_name();
                let rest = if self.rng.gen_bool(0.5) {
                    1
                } else {
                    self.rng.gen_range(1..budget.max(2))
                };
                let cont = self.term(
                    rest.min(budget - 1),
                    Ctx {
                        guarded: true,
                        ..cx
                    },
                );
                if output {
                    comp::out(&a, cont)
                } else {
                    comp::inp(&a, cont)
                }
            }
            K::Par => {
                let left = self.rng.gen_range(1..=budget - 2);
                let p = self.term(left, cx);
                let q = self.term(budget - 1 - left, cx);
                comp::par(p, q)
            }
            K::Restrict => {
                let a = self.channel();
                comp::restrict(&a, self.term(budget - 1, cx))
            }
            K::Protected => comp::protected(self.term(
                budget - 1,
                Ctx {
                    in_default: false,
                    ..cx
                },
            )),
            K::Repl => comp::repl(self.term(
                budget - 1,
                Ctx {
                    in_default: false,
                    ..cx
                },
            )),
            K::Trans => {
                self.next_transaction += 1;
                let t = Name::user(&format!("t{}", self.next_transaction));
                self.transactions.push(t.clone());
                let left = self.rng.gen_range(1..=budget - 2);
                let inner = Ctx {
                    nesting: cx.nesting + 1,
                    in_default: true,
                    ..cx
                };
                let p = self.term(left, inner);
                let q = self.term(
                    (budget - 1 - left).min(3),
                    Ctx {
                        in_default: false,
                        ..inner
                    },
                );
                comp::trans(&t, p, q)
            }
            K::Inst => {
                let x = ProcVar::new(&format!("X{}", cx.vars));
                let left = self.rng.gen_range(1..=budget - 2);
                let r = self.term(
                    left,
                    Ctx {
                        vars: cx.vars + 1,
                        in_default: false,
                        ..cx
                    },
                );
                let p = self.term(budget - 1 - left, cx);
                comp::inst(&x, r, p)
            }
        }
    }
}

/// The `i`-th term of the sequence determined by `cfg`.
pub fn gen_term(cfg: &GenConfig, i: u64) -> CompProcess {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(i);
    let mut g = Gen {
        cfg,
        rng,
        transactions: Vec::new(),
        next_transaction: 0,
    };
    let top = Ctx {
        guarded: false,
        nesting: 0,
        in_default: false,
        vars: 0,
    };
    for _ in 0..64 {
        g.transactions.clear();
        g.next_transaction = 0;
        let max = cfg.max_size.max(1);
        let budget = if g.rng.gen_bool(0.8) {
            g.rng.gen_range(max.div_ceil(2)..=max)
        } else {
            g.rng.gen_range(1..=max)
        };
        let mut p = g.term(budget, top);
        // an abort signal makes the interesting steps reachable
        if !g.transactions.is_empty() && p.size() + 3 <= cfg.max_size && g.rng.gen_bool(0.7) {
            let t = g.transactions.choose(&mut g.rng).expect("nonempty").clone();
            p = comp::par(p, comp::out(&t, comp::nil()));
        }
        if !cfg.dynamic || !p.is_static() {
            debug_assert!(p.well_formed().is_ok() && p.free_vars().is_empty());
            return p;
        }
    }
    // a minimal dynamic term when the draws keep missing
    let x = ProcVar::new("X0");
    let t = Name::user("t1");
    comp::par(
        comp::trans(&t, comp::inst(&x, comp::var(&x), comp::nil()), comp::nil()),
        comp::out(&t, comp::nil()),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub term: String,
    /// A smaller term failing the same direction.
    pub shrunk: String,
    pub direction: Direction,
    pub report: CorrespondenceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub generator: GenConfig,
    pub count: u64,
    pub passed: u64,
    pub failed: u64,
    /// Terms failing the forward and the backward check; a term can count
    /// in both.
    pub forward_failed: u64,
    pub backward_failed: u64,
    pub inconclusive: u64,
    /// Terms the encoder or checker rejected outright.
    pub errors: Vec<(u64, String)>,
    pub counterexamples: Vec<Counterexample>,
}

enum SampleResult {
    Pass,
    Inconclusive,
    Fail(Box<Counterexample>, [bool; 2]),
    Error(String),
}

fn failing_direction(
    p: &CompProcess,
    config: &EncodingConfig,
    opts: CheckOptions,
) -> Option<(Direction, CorrespondenceReport)> {
    let (f, b) = check_both(p, config, opts).ok()?;
    [f, b]
        .into_iter()
        .find(|r| r.failures() > 0)
        .map(|r| (r.direction, r))
}

/// Terms one step smaller than `p`: a subterm replaced by `0` or by one
/// of its own children. Only well-formed closed results are kept.
pub fn shrink_candidates(p: &CompProcess) -> Vec<CompProcess> {
    use CompProcess::*;
    let mut out: Vec<CompProcess> = Vec::new();
    let children: Vec<&CompProcess> = match p {
        Nil | Var(_) => vec![],
        In(_, q) | Out(_, q) | Repl(q) | Restrict(_, q) | Protected(q) => vec![q],
        Par(a, b) | Trans(_, a, b) | CompUpdate(_, a, b) => vec![a, b],
    };
    if !matches!(p, Nil) {
        out.push(Nil);
    }
    out.extend(children.iter().map(|c| (*c).clone()));
    let rebuild = |i: usize, c: CompProcess| -> CompProcess {
        match (p, i) {
            (In(a, _), _) => comp::inp(a, c),
            (Out(a, _), _) => comp::out(a, c),
            (Repl(_), _) => comp::repl(c),
            (Restrict(a, _), _) => comp::restrict(a, c),
            (Protected(_), _) => comp::protected(c),
            (Par(_, b), 0) => comp::par(c, (**b).clone()),
            (Par(a, _), _) => comp::par((**a).clone(), c),
            (Trans(t, _, q), 0) => comp::trans(t, c, (**q).clone()),
            (Trans(t, d, _), _) => comp::trans(t, (**d).clone(), c),
            (CompUpdate(x, _, q), 0) => comp::inst(x, c, (**q).clone()),
            (CompUpdate(x, r, _), _) => comp::inst(x, (**r).clone(), c),
            (Nil | Var(_), _) => unreachable!(),
        }
    };
    for (i, c) in children.iter().enumerate() {
        for s in shrink_candidates(c) {
            out.push(rebuild(i, s));
        }
    }
    out.retain(|q| q.size() < p.size() && q.well_formed().is_ok() && q.free_vars().is_empty());
    out.sort_by_key(CompProcess::size);
    out.dedup();
    out
}

/// Greedily shrinks `p` while it keeps failing in `direction`.
pub fn shrink(
    p: &CompProcess,
    config: &EncodingConfig,
    opts: CheckOptions,
    direction: Direction,
) -> CompProcess {
    let mut cur = p.clone();
    'outer: loop {
        for cand in shrink_candidates(&cur) {
            if failing_direction(&cand, config, opts).is_some_and(|(d, _)| d == direction) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Checks both correspondence directions on `count` generated terms.
pub fn fuzz_correspondence(
    gen: &GenConfig,
    count: u64,
    config: &EncodingConfig,
    opts: CheckOptions,
) -> FuzzSummary {
    let results: Vec<(u64, SampleResult)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let p = gen_term(gen, i);
            let r = match check_both(&p, config, opts) {
                Err(e) => SampleResult::Error(e.to_string()),
                Ok((f, b)) => {
                    let undecided = f.inconclusive() + b.inconclusive() > 0;
                    let failing = [f.failures() > 0, b.failures() > 0];
                    match [f, b].into_iter().find(|r| r.failures() > 0) {
                        Some(report) => {
                            let shrunk = shrink(&p, config, opts, report.direction);
                            SampleResult::Fail(
                                Box::new(Counterexample {
                                    index: i,
                                    term: print_comp(&p),
                                    shrunk: print_comp(&shrunk),
                                    direction: report.direction,
                                    report,
                                }),
                                failing,
                            )
                        }
                        None if undecided => SampleResult::Inconclusive,
                        None => SampleResult::Pass,
                    }
                }
            };
            (i, r)
        })
        .collect();
    let mut s = FuzzSummary {
        generator: gen.clone(),
        count,
        passed: 0,
        failed: 0,
        forward_failed: 0,
        backward_failed: 0,
        inconclusive: 0,
        errors: Vec::new(),
        counterexamples: Vec::new(),
    };
    for (i, r) in results {
        match r {
            SampleResult::Pass => s.passed += 1,
            SampleResult::Inconclusive => s.inconclusive += 1,
            SampleResult::Fail(c, [f, b]) => {
                s.failed += 1;
                s.forward_failed += f as u64;
                s.backward_failed += b as u64;
                s.counterexamples.push(*c);
            }
            SampleResult::Error(e) => s.errors.push((i, e)),
        }
    }
    s
}
