//! Acceptance run: one line per criterion, with its runtime and budget.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail for reasons that
//! lie in the encodings themselves (see the README). Their lines still
//! print FAIL; the run only exits non-zero when some other criterion
//! fails, or when a known red fails in an unexpected way.

mod common;

use std::time::{Duration, Instant};

use common::enumerate::{alphabet, AdaptTerms, CompTerms};
use common::{gen, lts_oracle, reduction_oracle};
use compadapt::adapt::{self, reachable, AdaptProcess, Limits};
use compadapt::comp::{self, CompProcess, Label, Semantics};
use compadapt::encoder::{activation_process, encode, npb, EncodingConfig, Mode, Mutation};
use compadapt::equivalence::CheckOptions;
use compadapt::fuzz::{fuzz_correspondence, gen_term, FuzzSummary, GenConfig};
use compadapt::names::{Name, Path, ProcVar};
use compadapt::textio::{parse_adapt, parse_adapt_reserved, parse_comp, print_adapt, print_comp};
use rayon::prelude::*;

const KNOWN_RED: [u32; 3] = [5, 6, 8];

/// Length of the shortest reduction sequence from the encoded discarding example
/// source to the encoded compensated state, as found by BFS.
const DISCARDING_WITNESS: usize = 7;

struct Verdict {
    pass: bool,
    detail: String,
    /// For known reds: the failure has the documented shape.
    expected_shape: bool,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
        expected_shape: true,
    }
}

fn n(s: &str) -> Name {
    Name::user(s)
}

type Criterion = (u32, &'static str, u64, fn() -> Verdict);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "three extraction semantics", 1, three_semantics),
        (
            2,
            "discarding example reaches its compensated state",
            1,
            discarding_example,
        ),
        (
            3,
            "preserving example reaches the displayed state",
            5,
            preserving_example,
        ),
        (
            4,
            "activation process of the five-transaction example",
            1,
            activation,
        ),
        (5, "static correspondence fuzz", 300, static_fuzz),
        (6, "dynamic correspondence fuzz", 300, dynamic_fuzz),
        (7, "substitution commutes with encoding", 30, substitution),
        (8, "block counts agree with extraction", 10, counts),
        (
            9,
            "transitions and reductions agree with oracles",
            120,
            oracles,
        ),
        (10, "parser round-trip", 10, round_trip),
        (11, "mutated encoder is caught", 60, mutation),
    ];
    let mut unexpected = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let pass = v.pass && in_time;
        let known = KNOWN_RED.contains(&id);
        println!(
            "criterion {id:>2} {}: {name}: {} [{:.2}s / {budget}s]{}",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            if !pass && known { " (known red)" } else { "" },
        );
        if !pass && (!known || !v.expected_shape || !in_time) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}

fn tau_targets(p: &CompProcess, kappa: Semantics) -> Vec<CompProcess> {
    comp::transitions(p, kappa)
        .unwrap()
        .into_iter()
        .filter(|s| s.label == Label::Tau)
        .map(|s| s.target)
        .collect()
}

fn three_semantics() -> Verdict {
    let p = parse_comp("~t | t[t1[p1, q1] | t2[<p2>, q2] | r | <p3>, q5]").unwrap();
    let expected = [
        (Semantics::D, "<p3> | <q5>"),
        (Semantics::P, "t1[p1, q1] | t2[<p2>, q2] | <p3> | <q5>"),
        (Semantics::A, "<p3> | <q5> | <p2> | <q1> | <q2>"),
    ];
    let mut ok = true;
    for (kappa, want) in expected {
        let got = tau_targets(&p, kappa);
        let want = parse_comp(want).unwrap();
        ok &= got.len() == 1 && comp::congruent(&got[0], &want);
    }
    verdict(
        ok,
        "one tau step per semantics, each congruent to the expected residue",
    )
}

fn discarding_example() -> Verdict {
    let cfg = EncodingConfig::new(Semantics::D, Mode::Static);
    let src = encode(&parse_comp("t[r | <p>, q] | ~t").unwrap(), &cfg).unwrap();
    let goal = encode(&parse_comp("<p> | <q>").unwrap(), &cfg).unwrap();
    let g = reachable(
        &src,
        Limits {
            depth: 12,
            ..Limits::default()
        },
    );
    let Some(i) = g.find(&goal) else {
        return verdict(false, format!("goal not reached ({} states)", g.len()));
    };
    let len = g.path(0, i).map(|w| w.len() - 1);
    verdict(
        len == Some(DISCARDING_WITNESS),
        format!("witness of length {len:?} (frozen at {DISCARDING_WITNESS})"),
    )
}

fn preserving_example() -> Verdict {
    let cfg = EncodingConfig::new(Semantics::P, Mode::Static);
    let src = encode(&parse_comp("t[t1[p1, q1] | <p>, q] | ~t").unwrap(), &cfg).unwrap();
    // M is the content of beta_{t,e} in the encoding of t1[p1, q1] at (t)
    let nested = encode(
        &parse_comp("t1[p1, q1]").unwrap(),
        &cfg.clone().at(Path::new(vec![n("t")])),
    )
    .unwrap();
    let m = match nested.par_components().first() {
        Some(AdaptProcess::Loc(_, m)) => (**m).clone(),
        _ => return verdict(false, "unexpected shape of the nested encoding"),
    };
    let AdaptProcess::Loc(beta, _) = parse_adapt_reserved("$beta.ε[0]").unwrap() else {
        unreachable!()
    };
    let blocks = encode(&parse_comp("<p> | <q>").unwrap(), &cfg).unwrap();
    let goal = adapt::par(adapt::loc(&beta, m), blocks);
    let g = reachable(
        &src,
        Limits {
            depth: 30,
            ..Limits::default()
        },
    );
    match g.find(&goal) {
        Some(i) => verdict(
            true,
            format!("reached at depth {} of {} states", g.depth[i], g.len()),
        ),
        None => verdict(false, format!("not reached in {} states", g.len())),
    }
}

fn activation() -> Verdict {
    let p = parse_comp("a[c[0, 0] | 0, 0] | b[0 | d[0, 0] | e[0, 0], 0]").unwrap();
    let got = print_adapt(&activation_process(&n("t"), &p));
    let want = "~$l.c.$k.c.~$l.a.$k.a.~$l.d.$k.d.~$l.e.$k.e.~$l.b.$k.b.~$l.t.$k.t.0";
    verdict(got == want, got)
}

/// A transaction inside the default activity of another one.
fn has_nested(p: &CompProcess) -> bool {
    fn walk(p: &CompProcess, inside: bool) -> bool {
        use CompProcess::*;
        match p {
            Trans(_, d, c) => inside || walk(d, true) || walk(c, false),
            Par(a, b) | CompUpdate(_, a, b) => walk(a, inside) || walk(b, inside),
            In(_, q) | Out(_, q) | Repl(q) | Restrict(_, q) | Protected(q) => walk(q, inside),
            Nil | Var(_) => false,
        }
    }
    walk(p, false)
}

fn summary_line(kappa: Semantics, s: &FuzzSummary) -> String {
    format!(
        "{kappa}: {} terms, {} fwd / {} bwd failures, {} inconclusive, {} errors",
        s.count,
        s.forward_failed,
        s.backward_failed,
        s.inconclusive,
        s.errors.len()
    )
}

fn run_fuzz(
    dynamic: bool,
    count: u64,
    mutation: Option<Mutation>,
) -> Vec<(Semantics, FuzzSummary)> {
    let gen = GenConfig {
        seed: 2024,
        dynamic,
        ..GenConfig::default()
    };
    let mode = if dynamic { Mode::Dynamic } else { Mode::Static };
    let kappas: &[Semantics] = if mutation.is_some() {
        &[Semantics::D]
    } else {
        &Semantics::ALL
    };
    kappas
        .iter()
        .map(|&k| {
            let mut cfg = EncodingConfig::new(k, mode);
            cfg.mutation = mutation;
            (
                k,
                fuzz_correspondence(&gen, count, &cfg, CheckOptions::default()),
            )
        })
        .collect()
}

fn clean(s: &FuzzSummary) -> bool {
    s.failed == 0 && s.inconclusive == 0 && s.errors.is_empty()
}

fn terms_of(s: &FuzzSummary, dir: compadapt::equivalence::Direction) -> Vec<CompProcess> {
    s.counterexamples
        .iter()
        .filter(|c| c.direction == dir)
        .map(|c| parse_comp(&c.term).unwrap())
        .collect()
}

fn static_fuzz() -> Verdict {
    let runs = run_fuzz(false, 500, None);
    let pass = runs.iter().all(|(_, s)| clean(s));
    // the documented failures all involve a nested transaction
    let expected_shape = runs.iter().all(|(_, s)| {
        s.inconclusive == 0
            && s.errors.is_empty()
            && s.counterexamples
                .iter()
                .all(|c| has_nested(&parse_comp(&c.term).unwrap()))
    });
    let detail = runs
        .iter()
        .map(|(k, s)| summary_line(*k, s))
        .collect::<Vec<_>>()
        .join("; ");
    Verdict {
        pass,
        detail,
        expected_shape,
    }
}

fn dynamic_fuzz() -> Verdict {
    use compadapt::equivalence::Direction;
    let runs = run_fuzz(true, 200, None);
    let pass = runs.iter().all(|(_, s)| clean(s));
    // forward failures only where a preserved nested transaction outlives
    // its parent; backward failures are aborts overtaking a pending update
    let expected_shape = runs.iter().all(|(k, s)| {
        let first_fwd = terms_of(s, Direction::Forward);
        s.errors.is_empty()
            && s.inconclusive == 0
            && (s.forward_failed == 0 || (*k == Semantics::P && first_fwd.iter().all(has_nested)))
    });
    let detail = runs
        .iter()
        .map(|(k, s)| summary_line(*k, s))
        .collect::<Vec<_>>()
        .join("; ");
    Verdict {
        pass,
        detail,
        expected_shape,
    }
}

fn mutation() -> Verdict {
    let base = run_fuzz(false, 500, None).remove(0).1;
    let mutated = run_fuzz(false, 500, Some(Mutation::SkipEscape)).remove(0).1;
    verdict(
        mutated.failed > base.failed,
        format!(
            "{} failing terms with the mutation, {} without",
            mutated.failed, base.failed
        ),
    )
}

fn substitution() -> Verdict {
    let x = ProcVar::new("X");
    let (mut planted, mut bad) = (0, Vec::new());
    for i in 0..200u64 {
        let mut rng = gen::rng(i);
        let dynamic = i % 2 == 0;
        let r0 = gen_term(
            &GenConfig {
                seed: 71,
                dynamic,
                ..GenConfig::default()
            },
            i,
        );
        let mut r = gen::plant(&r0, &x, &mut rng);
        if r.free_vars().is_empty() {
            r = comp::par(r, comp::var(&x));
        }
        let q = gen_term(
            &GenConfig {
                seed: 72,
                max_size: 6,
                dynamic: !dynamic,
                ..GenConfig::default()
            },
            i,
        );
        planted += r.free_vars().contains(&x) as usize;
        for kappa in Semantics::ALL {
            let cfg = EncodingConfig::new(kappa, Mode::Dynamic);
            let lhs = adapt::normalize(&encode(&r.substitute(&x, &q), &cfg).unwrap());
            let rhs = adapt::normalize(
                &encode(&r, &cfg)
                    .unwrap()
                    .substitute(&x, &encode(&q, &cfg).unwrap()),
            );
            if lhs != rhs {
                bad.push(format!(
                    "{kappa}: R = {}, Q = {}",
                    print_comp(&r),
                    print_comp(&q)
                ));
            }
        }
    }
    verdict(
        bad.is_empty() && planted == 200,
        format!(
            "200 triples ({planted} with X free), {} mismatches {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn top_blocks(p: &CompProcess) -> usize {
    use CompProcess::*;
    match p {
        Protected(_) => 1,
        Par(a, b) => top_blocks(a) + top_blocks(b),
        Restrict(_, q) => top_blocks(q),
        _ => 0,
    }
}

fn counts() -> Verdict {
    let (mut static_bad, mut dynamic_bad, mut off_shape) = (0, 0, 0);
    for i in 0..500u64 {
        let p = gen_term(
            &GenConfig {
                seed: 81,
                dynamic: i % 2 == 1,
                ..GenConfig::default()
            },
            i,
        );
        for kappa in [Semantics::D, Semantics::A] {
            if top_blocks(&comp::extract(&p, kappa)) != npb(&p, kappa) {
                // blocks behind a pending inst are counted but not extracted
                off_shape += (p.is_static() || kappa != Semantics::A) as usize;
                if p.is_static() {
                    static_bad += 1;
                } else {
                    dynamic_bad += 1;
                }
            }
        }
    }
    Verdict {
        pass: static_bad + dynamic_bad == 0,
        detail: format!(
            "500 terms: {static_bad} disagreements on static terms, {dynamic_bad} on dynamic ones"
        ),
        expected_shape: off_shape == 0,
    }
}

fn oracles() -> Verdict {
    let terms = CompTerms::new(alphabet(2)).up_to(7);
    let lts_bad: usize = terms
        .par_iter()
        .map(|p| {
            Semantics::ALL
                .iter()
                .filter(|&&k| {
                    let lib: std::collections::BTreeSet<_> = comp::transitions(p, k)
                        .unwrap()
                        .into_iter()
                        .map(|s| {
                            (
                                s.label.to_string(),
                                comp::normalize(&s.target),
                                format!("{:?}", s.origin),
                            )
                        })
                        .collect();
                    lib != lts_oracle::transitions(p, k)
                })
                .count()
        })
        .sum();
    let red_bad = std::sync::atomic::AtomicUsize::new(0);
    let mut adapt_terms = 0;
    for copies in 1..=2 {
        adapt_terms = AdaptTerms::new(alphabet(2)).for_each_up_to(7, |p| {
            let lib: std::collections::BTreeSet<_> =
                adapt::reductions_with(p, copies).into_iter().collect();
            if lib != reduction_oracle::reductions(p, copies) {
                red_bad.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
        });
    }
    let red_bad = red_bad.into_inner();
    verdict(
        lts_bad == 0 && red_bad == 0,
        format!(
            "{} compensable terms x 3 semantics: {lts_bad} disagreements; {adapt_terms} adaptable terms x 2 replication bounds: {red_bad} disagreements",
            terms.len()
        ),
    )
}

fn round_trip() -> Verdict {
    let mut bad = 0;
    for i in 0..1000u64 {
        let p = comp::normalize(&gen_term(
            &GenConfig {
                seed: 101,
                dynamic: i % 2 == 0,
                ..GenConfig::default()
            },
            i,
        ));
        bad += (parse_comp(&print_comp(&p)).ok() != Some(p)) as usize;
        let q = adapt::normalize(&gen::adapt_term(&mut gen::rng(i), 14));
        bad += (parse_adapt(&print_adapt(&q)).ok() != Some(q)) as usize;
    }
    verdict(
        bad == 0,
        format!("1000 terms per calculus, {bad} mismatches"),
    )
}
