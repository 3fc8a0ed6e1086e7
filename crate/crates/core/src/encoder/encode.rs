use std::collections::BTreeSet;

use super::structure::{activation_process, Counts};
use super::{EncodingConfig, Mode, Mutation};
use crate::adapt::{
    del, inp, kill, loc, nil, out, par, par_all, repl, restrict, upd, var, write, AdaptProcess,
};
use crate::comp::{CompProcess, Semantics};
use crate::error::{Error, Result};
use crate::names::{rn, rp, Name, Path, ProcVar, ReservedKind as K};
use crate::textio::print_comp;

/// Encodes `p` at `config.path`.
pub fn encode(p: &CompProcess, config: &EncodingConfig) -> Result<AdaptProcess> {
    p.well_formed()?;
    if config.mode == Mode::Static {
        if let Some(d) = p.find_dynamic() {
            return Err(Error::Usage(format!(
                "the static encoding does not handle `{}`; use the dynamic mode",
                print_comp(d)
            )));
        }
    }
    Ok(Encoder { config }.enc(p, &config.path))
}

/// The process that, on abort of the transaction at the head of `path`,
/// collects what survives of its default and installs the compensation
/// `q`.
pub fn aux_encode(
    q: &CompProcess,
    path: &Path,
    counts: &Counts,
    config: &EncodingConfig,
) -> Result<AdaptProcess> {
    let Some((t, rho)) = path.split_head() else {
        return Err(Error::Usage(
            "the auxiliary encoding needs a nonempty path".into(),
        ));
    };
    Ok(Encoder { config }.aux(q, t, &rho, counts))
}

struct Encoder<'a> {
    config: &'a EncodingConfig,
}

/// `base`, unless it is in `avoid`; the result is added to `avoid`.
fn fresh_var(base: &str, avoid: &mut BTreeSet<ProcVar>) -> ProcVar {
    let base = ProcVar::new(base);
    let x = if avoid.contains(&base) {
        ProcVar::fresh(&base, |v| avoid.contains(v))
    } else {
        base
    };
    avoid.insert(x.clone());
    x
}

fn seq(prefixes: &[(bool, Name)], end: AdaptProcess) -> AdaptProcess {
    prefixes.iter().rev().fold(
        end,
        |acc, (output, a)| if *output { out(a, acc) } else { inp(a, acc) },
    )
}

impl Encoder<'_> {
    fn enc(&self, p: &CompProcess, rho: &Path) -> AdaptProcess {
        use CompProcess::*;
        match p {
            Nil => nil(),
            Var(x) => var(x),
            In(a, q) => inp(a, self.enc(q, rho)),
            Out(a, q) => out(a, self.enc(q, rho)),
            Repl(q) => repl(self.enc(q, rho)),
            Restrict(a, q) => restrict(a, self.enc(q, rho)),
            Par(a, b) => par(self.enc(a, rho), self.enc(b, rho)),
            Protected(q) => loc(&rp(K::P, rho), self.enc(q, &Path::empty())),
            Trans(t, body, comp) => self.transaction(t, body, comp, rho),
            CompUpdate(y, r, q) => self.comp_update(y, r, q, rho),
        }
    }

    fn transaction(
        &self,
        t: &Name,
        body: &CompProcess,
        comp: &CompProcess,
        rho: &Path,
    ) -> AdaptProcess {
        let tp = rho.push_front(t);
        let counts = Counts::of(body, self.config.semantics);
        let inner = loc(t, self.enc(body, &tp));
        let aux = self.aux(comp, t, rho, &counts);
        let (l, k) = (rn(K::L, t), rn(K::K, t));
        match self.config.semantics {
            Semantics::D => par_all([
                inner,
                aux,
                seq(&[(false, t.clone()), (true, l), (false, k)], nil()),
            ]),
            Semantics::P => {
                let (j, a, beta) = (rp(K::J, &tp), rp(K::A, &tp), rp(K::Beta, rho));
                let trigger = seq(
                    &[(false, t.clone()), (true, l), (false, k), (true, j.clone())],
                    nil(),
                );
                par(
                    loc(&beta, par_all([inner, aux, trigger])),
                    inp(&j, del(&beta, out(&a, nil()))),
                )
            }
            Semantics::A => {
                let gamma = loc(&rn(K::Gamma, t), inp(t, activation_process(t, body)));
                par_all([inner, aux, gamma])
            }
        }
    }

    /// Re-arms the γ locations of the transactions nested in `t`, then
    /// kills `t`'s own.
    fn gamma(&self, t: &Name, nested: &[Name]) -> AdaptProcess {
        let (l, k) = (rn(K::L, t), rn(K::K, t));
        nested
            .iter()
            .rev()
            .fold(kill(&rn(K::Gamma, t), nil()), |acc, c| {
                let g = rn(K::Gamma, c);
                let z = ProcVar::new("Z");
                let body = loc(
                    &g,
                    restrict(&l, restrict(&k, par(var(&z), inp(&l, out(&k, nil()))))),
                );
                upd(&g, &z, body, acc)
            })
    }

    pub(super) fn aux(
        &self,
        q: &CompProcess,
        t: &Name,
        rho: &Path,
        counts: &Counts,
    ) -> AdaptProcess {
        let kappa = self.config.semantics;
        let dynamic = self.config.mode == Mode::Dynamic;
        let tp = rho.push_front(t);
        let (l, m, k) = (rn(K::L, t), rn(K::M, t), rn(K::K, t));
        let (a, z, p_rho, p_tp) = (rp(K::A, &tp), rp(K::Z, &tp), rp(K::P, rho), rp(K::P, &tp));
        let q_enc = self.enc(q, &Path::empty());

        let stored = if dynamic {
            loc(
                &rp(K::U, &tp),
                out(&rp(K::F, &tp), out(&rp(K::G, &tp), nil())),
            )
        } else {
            q_enc.clone()
        };
        let cell = loc(&p_rho, stored);

        let mut finish = kill(t, nil());
        if kappa == Semantics::A {
            finish = kill(t, self.gamma(t, &counts.nested));
        }
        let tail = inp(&m, out(&k, finish));

        let n = counts.blocks;
        let mt = if kappa == Semantics::P {
            counts.transactions
        } else {
            0
        };
        let collect = if n == 0 && mt == 0 {
            // with nothing to collect the compensation itself waits for the
            // β location to go
            let release = match kappa {
                Semantics::P => out(&m, inp(&a, cell)),
                _ => out(&m, cell),
            };
            par(inp(&l, release), tail)
        } else {
            let mut avoid = q_enc.free_vars();
            let xs: Vec<_> = (1..=n)
                .map(|i| fresh_var(&format!("X{i}"), &mut avoid))
                .collect();
            let ys: Vec<_> = (1..=mt)
                .map(|i| fresh_var(&format!("Y{i}"), &mut avoid))
                .collect();
            let blocks = par_all(xs.iter().map(|x| loc(&p_rho, var(x))));
            let beta_rho = rp(K::Beta, rho);
            let kept = par_all(ys.iter().map(|y| loc(&beta_rho, var(y))));
            let comp_cell = out(&m, cell);
            let content = if kappa != Semantics::P {
                par(blocks, comp_cell)
            } else if mt == 0 {
                par(inp(&a, blocks), comp_cell)
            } else if n == 0 {
                par(inp(&a, kept), comp_cell)
            } else {
                par_all([blocks, inp(&a, kept), comp_cell])
            };
            let body = match self.config.mutation {
                Some(Mutation::SkipEscape) => content,
                None => write(&z, content, nil()),
            };
            let beta_tp = rp(K::Beta, &tp);
            let targets: Vec<(&Name, &ProcVar)> = xs
                .iter()
                .map(|x| (&p_tp, x))
                .chain(ys.iter().map(|y| (&beta_tp, y)))
                .collect();
            let (first, rest) = targets.split_first().expect("n + m > 0");
            let chain = rest
                .iter()
                .rev()
                .fold(body, |acc, (loc_name, x)| upd(loc_name, x, acc, nil()));
            let outer = upd(first.0, first.1, chain, par(loc(&z, nil()), tail));
            inp(&l, outer)
        };

        if dynamic {
            par(collect, self.swap_cell(&tp, q_enc))
        } else {
            collect
        }
    }

    /// `v[upd u(Z){Z | v1[Q] | f.del v1.del v.g}]`: holds the current
    /// compensation until it is either released into `u` on abort or
    /// swapped by `inst`.
    fn swap_cell(&self, tp: &Path, q_enc: AdaptProcess) -> AdaptProcess {
        let (u, v, v1, f, g) = (
            rp(K::U, tp),
            rp(K::V, tp),
            rp(K::V1, tp),
            rp(K::F, tp),
            rp(K::G, tp),
        );
        let mut avoid = q_enc.free_vars();
        let z = fresh_var("Z", &mut avoid);
        let release = inp(&f, del(&v1, del(&v, inp(&g, nil()))));
        loc(
            &v,
            upd(&u, &z, par_all([var(&z), loc(&v1, q_enc), release]), nil()),
        )
    }

    fn comp_update(
        &self,
        y: &ProcVar,
        r: &CompProcess,
        q: &CompProcess,
        rho: &Path,
    ) -> AdaptProcess {
        let (u, v, v1, f, g) = (
            rp(K::U, rho),
            rp(K::V, rho),
            rp(K::V1, rho),
            rp(K::F, rho),
            rp(K::G, rho),
        );
        let mut r_enc = self.enc(r, &Path::empty());
        let q_enc = self.enc(q, rho);
        let mut avoid: BTreeSet<ProcVar> = r_enc
            .free_vars()
            .union(&q_enc.free_vars())
            .cloned()
            .collect();
        // the continuation sits under the binder of `Y` but must not see it
        let y = if q_enc.free_vars().contains(y) {
            let y2 = fresh_var(y.as_str(), &mut avoid);
            r_enc = r_enc.substitute(y, &var(&y2));
            y2
        } else {
            avoid.insert(y.clone());
            y.clone()
        };
        let x = fresh_var("X", &mut avoid);
        let reinstall = upd(&v, &x, par(var(&x), self.swap_cell(rho, r_enc)), nil());
        let body = par(out(&g, reinstall), q_enc);
        par(
            loc(&u, nil()),
            upd(&v1, &y, body, out(&f, par(loc(&v, nil()), loc(&v1, nil())))),
        )
    }
}
