//! Seeded generators the library does not need itself.

use compadapt::adapt::{self, AdaptProcess};
use compadapt::comp::{CompProcess, CompProcess::*};
use compadapt::names::{Name, ProcVar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_name(rng: &mut ChaCha8Rng) -> Name {
    Name::user(["a", "b", "l", "m"][rng.gen_range(0..4)])
}

/// A random closed adaptable term of size at most `budget`.
pub fn adapt_term(rng: &mut ChaCha8Rng, budget: usize) -> AdaptProcess {
    adapt_rec(rng, budget, &mut Vec::new())
}

fn adapt_rec(rng: &mut ChaCha8Rng, budget: usize, vars: &mut Vec<ProcVar>) -> AdaptProcess {
    if budget <= 1 {
        return match vars.last() {
            Some(x) if rng.gen_bool(0.5) => adapt::var(x),
            _ => adapt::nil(),
        };
    }
    let a = pick_name(rng);
    match rng.gen_range(0..8) {
        0 => adapt::inp(&a, adapt_rec(rng, budget - 1, vars)),
        1 => adapt::out(&a, adapt_rec(rng, budget - 1, vars)),
        2 => adapt::loc(&a, adapt_rec(rng, budget - 1, vars)),
        3 => adapt::restrict(&a, adapt_rec(rng, budget - 1, vars)),
        4 => adapt::repl(adapt_rec(rng, budget - 1, vars)),
        5 | 6 if budget >= 3 => {
            let left = rng.gen_range(1..budget - 1);
            adapt::par(
                adapt_rec(rng, left, vars),
                adapt_rec(rng, budget - 1 - left, vars),
            )
        }
        7 if budget >= 3 => {
            let left = rng.gen_range(1..budget - 1);
            let x = ProcVar::new(["X", "Y"][rng.gen_range(0..2)]);
            vars.push(x.clone());
            let body = adapt_rec(rng, left, vars);
            vars.pop();
            adapt::upd(&a, &x, body, adapt_rec(rng, budget - 1 - left, vars))
        }
        _ => adapt::nil(),
    }
}

/// Replaces some unguarded `0` leaves of `p` by `X`, staying out of
/// transaction defaults and prefix continuations, where the substituted
/// process would land at a different path or behind a prefix.
pub fn plant(p: &CompProcess, x: &ProcVar, rng: &mut ChaCha8Rng) -> CompProcess {
    match p {
        Nil if rng.gen_bool(0.6) => Var(x.clone()),
        Par(a, b) => Par(Box::new(plant(a, x, rng)), Box::new(plant(b, x, rng))),
        Restrict(a, q) => Restrict(a.clone(), Box::new(plant(q, x, rng))),
        Protected(q) => Protected(Box::new(plant(q, x, rng))),
        Trans(t, d, c) => Trans(t.clone(), d.clone(), Box::new(plant(c, x, rng))),
        CompUpdate(y, r, k) if y != x => {
            CompUpdate(y.clone(), Box::new(plant(r, x, rng)), k.clone())
        }
        _ => p.clone(),
    }
}

/// Generator terms drawn through proptest, so failures report a seed.
pub fn comp_terms(
    dynamic: bool,
    max_size: usize,
) -> impl proptest::strategy::Strategy<Value = CompProcess> {
    use proptest::prelude::*;
    (any::<u64>(), 0..64u64).prop_map(move |(seed, i)| {
        let cfg = compadapt::fuzz::GenConfig {
            seed,
            max_size,
            dynamic,
            ..Default::default()
        };
        compadapt::fuzz::gen_term(&cfg, i)
    })
}

pub fn adapt_terms(max_size: usize) -> impl proptest::strategy::Strategy<Value = AdaptProcess> {
    use proptest::prelude::*;
    any::<u64>().prop_map(move |seed| adapt_term(&mut rng(seed), max_size))
}
