use std::io::{BufRead, Write};
use std::path::Path as FsPath;

use compadapt::comp::{self, classify_tau, transitions, CompProcess, Label, Semantics};
use compadapt::encoder::{encode, EncodingConfig, Mode};
use compadapt::equivalence::{
    check_both, default_depth, CheckOptions, CorrespondenceReport, Outcome,
};
use compadapt::fuzz::{fuzz_correspondence, FuzzSummary, GenConfig};
use compadapt::names::Path;
use compadapt::textio::{parse_adapt, parse_comp, print_adapt, print_comp};
use compadapt::{adapt, Error, Result};
use serde_json::json;

use super::{Bounds, Calculus, Command, Dir, Encoding, COUNTEREXAMPLE, INCONCLUSIVE, OK};

fn read(file: &FsPath) -> Result<String> {
    let text = if file.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(file)
    };
    text.map_err(|e| Error::Usage(format!("cannot read {}: {e}", file.display())))
}

fn read_comp(file: &FsPath) -> Result<CompProcess> {
    parse_comp(&read(file)?)
}

fn config(enc: &Encoding) -> EncodingConfig {
    let mode = if enc.dynamic {
        Mode::Dynamic
    } else {
        Mode::Static
    };
    EncodingConfig::new(enc.semantics, mode)
}

fn options(b: Bounds) -> CheckOptions {
    CheckOptions {
        depth: b.depth,
        max_states: b.max_states,
    }
}

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Parse { calculus, file } => {
            let text = read(&file)?;
            match calculus {
                Calculus::Comp => println!("{}", print_comp(&comp::normalize(&parse_comp(&text)?))),
                Calculus::Adapt => {
                    println!("{}", print_adapt(&adapt::normalize(&parse_adapt(&text)?)))
                }
            }
            Ok(OK)
        }
        Command::Steps { semantics, file } => {
            let p = read_comp(&file)?;
            for line in step_lines(&p, semantics)? {
                println!("{line}");
            }
            Ok(OK)
        }
        Command::Trace { semantics, file } => {
            let p = read_comp(&file)?;
            let stdin = std::io::stdin();
            trace(p, semantics, &mut stdin.lock(), &mut std::io::stdout())
        }
        Command::Encode { enc, path, file } => {
            let p = read_comp(&file)?;
            let cfg = config(&enc).at(path.parse::<Path>()?);
            println!("{}", print_adapt(&encode(&p, &cfg)?));
            Ok(OK)
        }
        Command::Check {
            enc,
            bounds,
            direction,
            json,
            file,
        } => {
            let p = read_comp(&file)?;
            check(&p, &config(&enc), options(bounds), direction, json)
        }
        Command::Fuzz {
            semantics,
            dynamic,
            count,
            size,
            seed,
            bounds,
            json,
        } => {
            let gen = GenConfig {
                seed,
                max_size: size,
                dynamic,
                ..GenConfig::default()
            };
            fuzz(&gen, semantics, count, options(bounds), json)
        }
    }
}

fn step_lines(p: &CompProcess, kappa: Semantics) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, s) in transitions(p, kappa)?.iter().enumerate() {
        let label = match &s.label {
            Label::Tau => format!("tau ({})", classify_tau(p, kappa, s)?),
            l => l.to_string(),
        };
        out.push(format!(
            "[{i}] {label} -> {}",
            print_comp(&comp::normalize(&s.target))
        ));
    }
    Ok(out)
}

/// Prints the enabled transitions, reads an index, applies that transition
/// and repeats until `q`, end of input, or a term without transitions.
pub fn trace(
    mut p: CompProcess,
    kappa: Semantics,
    input: &mut impl BufRead,
    out: &mut impl Write,
) -> Result<u8> {
    let io = |e: std::io::Error| Error::Usage(e.to_string());
    loop {
        writeln!(out, "{}", print_comp(&p)).map_err(io)?;
        let steps = transitions(&p, kappa)?;
        if steps.is_empty() {
            writeln!(out, "no transitions").map_err(io)?;
            return Ok(OK);
        }
        for line in step_lines(&p, kappa)? {
            writeln!(out, "  {line}").map_err(io)?;
        }
        let chosen = loop {
            write!(out, "> ").map_err(io)?;
            out.flush().map_err(io)?;
            let mut line = String::new();
            if input.read_line(&mut line).map_err(io)? == 0 {
                return Ok(OK);
            }
            match line.trim() {
                "q" => return Ok(OK),
                s => match s.parse::<usize>() {
                    Ok(i) if i < steps.len() => break i,
                    _ => {
                        writeln!(out, "expected an index below {} or q", steps.len()).map_err(io)?
                    }
                },
            }
        };
        p = comp::normalize(&steps[chosen].target);
    }
}

fn status(outcomes: impl IntoIterator<Item = (usize, usize)>) -> u8 {
    let (mut fail, mut open) = (0, 0);
    for (f, i) in outcomes {
        fail += f;
        open += i;
    }
    if fail > 0 {
        COUNTEREXAMPLE
    } else if open > 0 {
        INCONCLUSIVE
    } else {
        OK
    }
}

fn check(
    p: &CompProcess,
    cfg: &EncodingConfig,
    opts: CheckOptions,
    dir: Dir,
    json: bool,
) -> Result<u8> {
    let (f, b) = check_both(p, cfg, opts)?;
    let reports: Vec<CorrespondenceReport> = match dir {
        Dir::Fwd => vec![f],
        Dir::Bwd => vec![b],
        Dir::Both => vec![f, b],
    };
    let code = status(reports.iter().map(|r| (r.failures(), r.inconclusive())));
    if json {
        let doc = json!({
            "command": "check",
            "source": print_comp(p),
            "semantics": cfg.semantics,
            "mode": cfg.mode,
            "path": cfg.path.to_string(),
            "depth": opts.depth.unwrap_or_else(|| default_depth(p)),
            "max_states": opts.max_states,
            "outcome": outcome_name(code),
            "reports": reports,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("report serializes")
        );
    } else {
        for r in &reports {
            print_report(r);
        }
    }
    Ok(code)
}

fn outcome_name(code: u8) -> &'static str {
    match code {
        OK => "pass",
        COUNTEREXAMPLE => "fail",
        _ => "inconclusive",
    }
}

fn print_report(r: &CorrespondenceReport) {
    println!(
        "{:?} {} {} at {}: {} steps, {} pass, {} fail, {} inconclusive ({} states, depth {}{})",
        r.direction,
        r.semantics,
        r.mode,
        r.path,
        r.verdicts.len(),
        r.count(Outcome::Pass),
        r.failures(),
        r.inconclusive(),
        r.states,
        r.depth,
        if r.truncated { ", truncated" } else { "" },
    );
    for v in &r.verdicts {
        let shape = v.shape.map(|s| format!(" ({s})")).unwrap_or_default();
        let steps = if v.witness.is_empty() {
            String::new()
        } else {
            format!(" in {} reductions", v.witness.len() - 1)
        };
        println!("  {:?}{shape}: {}{steps}", v.outcome, v.subject);
        if let Some(note) = &v.note {
            println!("    {note}");
        }
    }
}

fn fuzz(
    gen: &GenConfig,
    kappa: Option<Semantics>,
    count: u64,
    opts: CheckOptions,
    json: bool,
) -> Result<u8> {
    let mode = if gen.dynamic {
        Mode::Dynamic
    } else {
        Mode::Static
    };
    let kappas = kappa.map_or(Semantics::ALL.to_vec(), |k| vec![k]);
    let runs: Vec<(Semantics, FuzzSummary)> = kappas
        .into_iter()
        .map(|k| {
            (
                k,
                fuzz_correspondence(gen, count, &EncodingConfig::new(k, mode), opts),
            )
        })
        .collect();
    let code = status(
        runs.iter()
            .map(|(_, s)| (s.failed as usize, s.inconclusive as usize + s.errors.len())),
    );
    if json {
        let doc = json!({
            "command": "fuzz",
            "seed": gen.seed,
            "count": count,
            "size": gen.max_size,
            "mode": mode,
            "depth": opts.depth,
            "max_states": opts.max_states,
            "outcome": outcome_name(code),
            "runs": runs.iter().map(|(k, s)| json!({ "semantics": k, "summary": s })).collect::<Vec<_>>(),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("summary serializes")
        );
    } else {
        for (k, s) in &runs {
            println!(
                "{k} {mode}: {} terms, {} pass, {} fail ({} fwd, {} bwd), {} inconclusive, {} errors",
                s.count, s.passed, s.failed, s.forward_failed, s.backward_failed, s.inconclusive, s.errors.len()
            );
            for c in &s.counterexamples {
                println!("  #{} {:?}: {}", c.index, c.direction, c.term);
                println!("    shrunk: {}", c.shrunk);
            }
            for (i, e) in &s.errors {
                println!("  #{i} error: {e}");
            }
        }
    }
    Ok(code)
}
