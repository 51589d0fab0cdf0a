//! Command-line front end.
//!
//! [`run`] parses an argument vector, dispatches to `hecke-core`, and returns the exit
//! code together with everything destined for stdout and stderr, so the binary and the
//! tests share one code path. Exit codes: 0 success, 1 `verify` mismatch, 2 usage or
//! domain error.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use hecke_core::closedform::{alpha, alpha_table, verify};
use hecke_core::hecke::{expand_with, ExpandOptions};
use hecke_core::qpoly::{parse_rational, Rational};
use hecke_core::seq::{classify, enumerate_tight, is_tight, GenSequence, TightClass};
use hecke_core::walk::{self, Distribution, Probs, WalkConfig};
use hecke_core::{Error, Perm};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Seed used by randomized commands in table mode when none is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(stderr: String) -> Self {
        CommandResult {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.stderr.push_str(&note.into());
        self.stderr.push('\n');
        self
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hecke",
    version,
    about = "Hecke algebra products, tight sequences, and random walks on S_n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand Q(r) in the standard basis T_w
    Expand {
        /// Comma-separated sequence, e.g. 1,2,1,2
        seq: GenSequence,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Tab-separated table (the default)
        #[arg(long)]
        table: bool,
        /// Allow degrees above the size guard
        #[arg(long)]
        force: bool,
    },
    /// Closed-form coefficient of T_w in Q(r)
    Alpha {
        seq: GenSequence,
        /// Comma-separated one-line notation, e.g. 1,2,4,3
        perm: Perm,
        /// Pad the permutation to this degree
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form coefficients on the whole Bruhat downset of r
    AlphaTable {
        seq: GenSequence,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the closed form with brute-force expansion; exits 1 on any mismatch
    Verify {
        seq: GenSequence,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Tight sequences
    #[command(subcommand)]
    Tight(TightCommand),
    /// Random walks driven by a sequence
    #[command(subcommand)]
    Walk(WalkCommand),
}

#[derive(Debug, Subcommand)]
enum TightCommand {
    /// Is the sequence tight?
    Check {
        seq: GenSequence,
        #[arg(long)]
        json: bool,
    },
    /// All tight sequences of a given length
    Enumerate {
        length: usize,
        #[arg(long)]
        json: bool,
    },
    /// Which closed-form result covers the sequence
    Classify {
        seq: GenSequence,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Restart budget per sample before giving up
    #[arg(long, default_value_t = walk::DEFAULT_MAX_RESTARTS)]
    max_restarts: u64,
}

#[derive(Debug, Subcommand)]
enum WalkCommand {
    /// Exact law of the final permutation
    Exact {
        seq: GenSequence,
        /// Rational in (0, 1], e.g. 1/2
        #[arg(long)]
        q: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of the law
    Simulate {
        seq: GenSequence,
        #[arg(long)]
        q: String,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Simulation against the exact law, with total variation distance
    Compare {
        seq: GenSequence,
        #[arg(long)]
        q: String,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult::usage(text)
            } else {
                CommandResult::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(result) => result,
        Err(e) => CommandResult::usage(format!("error: {e}\n")),
    }
}

fn dispatch(command: Command) -> Result<CommandResult, Error> {
    match command {
        Command::Expand {
            seq,
            degree,
            json,
            table: _,
            force,
        } => cmd_expand(&seq, degree, json, force),
        Command::Alpha {
            seq,
            perm,
            degree,
            json,
        } => cmd_alpha(&seq, perm, degree, json),
        Command::AlphaTable { seq, degree, json } => cmd_alpha_table(&seq, degree, json),
        Command::Verify { seq, degree, json } => cmd_verify(&seq, degree, json),
        Command::Tight(TightCommand::Check { seq, json }) => {
            let tight = is_tight(&seq);
            Ok(CommandResult::ok(if json {
                line(&json!({ "sequence": seq, "tight": tight }))
            } else {
                format!("{tight}\n")
            }))
        }
        Command::Tight(TightCommand::Enumerate { length, json }) => {
            let all = enumerate_tight(length);
            Ok(CommandResult::ok(if json {
                line(&json!(all))
            } else {
                all.iter().map(|r| format!("{r}\n")).collect()
            }))
        }
        Command::Tight(TightCommand::Classify { seq, json }) => cmd_classify(&seq, json),
        Command::Walk(WalkCommand::Exact {
            seq,
            q,
            degree,
            json,
        }) => cmd_walk_exact(&seq, &q, degree, json),
        Command::Walk(WalkCommand::Simulate {
            seq,
            q,
            sampling,
            degree,
            json,
        }) => cmd_walk_simulate(&seq, &q, &sampling, degree, json),
        Command::Walk(WalkCommand::Compare {
            seq,
            q,
            sampling,
            degree,
            json,
        }) => cmd_walk_compare(&seq, &q, &sampling, degree, json),
    }
}

fn line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn rational_json(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn cmd_expand(
    seq: &GenSequence,
    degree: Option<usize>,
    json: bool,
    force: bool,
) -> Result<CommandResult, Error> {
    let h = expand_with(seq, ExpandOptions { degree, force })?;
    if json {
        return Ok(CommandResult::ok(line(
            &serde_json::to_value(&h).expect("serializable"),
        )));
    }
    let mut out = String::new();
    for (w, c) in h.terms() {
        writeln!(out, "{w}\t{c}").unwrap();
    }
    Ok(CommandResult::ok(out))
}

fn cmd_alpha(
    seq: &GenSequence,
    perm: Perm,
    degree: Option<usize>,
    json: bool,
) -> Result<CommandResult, Error> {
    let w = match degree {
        Some(m) => perm.pad(m)?,
        None => perm,
    };
    let a = alpha(seq, &w)?;
    Ok(CommandResult::ok(if json {
        line(&json!({ "sequence": seq, "perm": w, "alpha": a }))
    } else {
        format!("{a}\n")
    }))
}

fn cmd_alpha_table(
    seq: &GenSequence,
    degree: Option<usize>,
    json: bool,
) -> Result<CommandResult, Error> {
    let table = alpha_table(seq, degree)?;
    let n = degree.unwrap_or(seq.natural_degree());
    if json {
        let entries: Vec<Value> = table
            .iter()
            .map(|(w, a)| json!({ "perm": w, "alpha": a }))
            .collect();
        let class = classify(seq);
        return Ok(CommandResult::ok(line(&json!({
            "sequence": seq,
            "degree": n,
            "classification": class,
            "entries": entries,
        }))));
    }
    let mut out = String::new();
    for (w, a) in &table {
        writeln!(out, "{w}\t{a}").unwrap();
    }
    Ok(CommandResult::ok(out))
}

fn cmd_verify(
    seq: &GenSequence,
    degree: Option<usize>,
    json: bool,
) -> Result<CommandResult, Error> {
    let report = verify(seq, degree)?;
    let code = if report.all_match {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let stdout = if json {
        line(&serde_json::to_value(&report).expect("serializable"))
    } else {
        let mut out = String::new();
        writeln!(
            out,
            "sequence {}  degree {}  class {}",
            report.sequence, report.degree, report.classification
        )
        .unwrap();
        for (w, e) in &report.entries {
            let status = if e.matches { "ok" } else { "MISMATCH" };
            writeln!(out, "{w}\t{}\t{}\t{status}", e.closed, e.oracle).unwrap();
        }
        writeln!(out, "all_match: {}", report.all_match).unwrap();
        out
    };
    let mut result = CommandResult {
        exit_code: code,
        stdout,
        stderr: String::new(),
    };
    if !report.classification.is_covered() {
        result = result.with_note(format!(
            "note: {} is not covered by the closed formula; nothing to compare",
            report.sequence
        ));
    }
    if !report.all_match {
        result = result.with_note(format!(
            "{} of {} coefficients disagree",
            report.mismatches().count(),
            report.entries.len()
        ));
    }
    Ok(result)
}

fn cmd_classify(seq: &GenSequence, json: bool) -> Result<CommandResult, Error> {
    let class = classify(seq);
    let stdout = if json {
        line(&json!({
            "sequence": seq,
            "class": class,
            "uses_inverse": class.uses_inverse(),
        }))
    } else {
        format!("{class}\n")
    };
    let mut result = CommandResult::ok(stdout);
    if matches!(class, TightClass::NotCovered { truncated: true }) {
        result = result.with_note(
            "warning: commutation class search hit its cap; the sequence may still be covered",
        );
    }
    Ok(result)
}

fn distribution_rows(d: &Distribution) -> Vec<Value> {
    match d.probs() {
        Probs::Exact(m) => m
            .iter()
            .map(|(w, p)| json!({ "perm": w, "p": rational_json(p) }))
            .collect(),
        Probs::Empirical(m) => m
            .iter()
            .map(|(w, p)| json!({ "perm": w, "p": p }))
            .collect(),
    }
}

fn cmd_walk_exact(
    seq: &GenSequence,
    q: &str,
    degree: Option<usize>,
    json: bool,
) -> Result<CommandResult, Error> {
    let q = parse_rational(q)?;
    let d = walk::exact_distribution(seq, &q, degree)?;
    if json {
        return Ok(CommandResult::ok(line(&json!({
            "degree": d.degree(),
            "mode": "exact",
            "q": rational_json(&q),
            "probs": distribution_rows(&d),
        }))));
    }
    let mut out = String::new();
    for (w, p) in d.exact_probs().expect("exact") {
        writeln!(out, "{w}\t{p}").unwrap();
    }
    Ok(CommandResult::ok(out))
}

fn sampling_config(q: &Rational, sampling: &SampleArgs, json: bool) -> Result<WalkConfig, Error> {
    let seed = match (sampling.seed, json) {
        (Some(seed), _) => seed,
        (None, false) => DEFAULT_SEED,
        (None, true) => {
            return Err(Error::Parse(
                "--seed is required together with --json".to_string(),
            ))
        }
    };
    Ok(
        WalkConfig::new(q.clone(), sampling.samples, seed)?
            .with_max_restarts(sampling.max_restarts),
    )
}

fn cmd_walk_simulate(
    seq: &GenSequence,
    q: &str,
    sampling: &SampleArgs,
    degree: Option<usize>,
    json: bool,
) -> Result<CommandResult, Error> {
    let q = parse_rational(q)?;
    let config = sampling_config(&q, sampling, json)?;
    let d = walk::simulate(seq, &config, degree)?;
    if json {
        return Ok(CommandResult::ok(line(&json!({
            "degree": d.degree(),
            "mode": "empirical",
            "samples": config.samples,
            "seed": config.seed,
            "probs": distribution_rows(&d),
        }))));
    }
    let mut out = String::new();
    for w in d.support() {
        writeln!(out, "{w}\t{:.6}", d.prob_f64(w)).unwrap();
    }
    Ok(CommandResult::ok(out))
}

fn cmd_walk_compare(
    seq: &GenSequence,
    q: &str,
    sampling: &SampleArgs,
    degree: Option<usize>,
    json: bool,
) -> Result<CommandResult, Error> {
    let q = parse_rational(q)?;
    let config = sampling_config(&q, sampling, json)?;
    let exact = walk::exact_distribution(seq, &q, degree)?;
    let empirical = walk::simulate(seq, &config, degree)?;
    let tv = walk::total_variation(&exact, &empirical)?;
    let mut perms: Vec<&Perm> = exact.support();
    perms.extend(empirical.support());
    perms.sort();
    perms.dedup();
    if json {
        let rows: Vec<Value> = perms
            .iter()
            .map(|w| {
                json!({
                    "perm": w,
                    "exact": rational_json(&exact.exact_prob(w).expect("exact")),
                    "empirical": empirical.prob_f64(w),
                })
            })
            .collect();
        return Ok(CommandResult::ok(line(&json!({
            "degree": exact.degree(),
            "samples": config.samples,
            "seed": config.seed,
            "tv": tv.to_f64(),
            "rows": rows,
        }))));
    }
    let mut out = String::new();
    writeln!(out, "tv\t{tv}").unwrap();
    for w in perms {
        let p = exact.exact_prob(w).expect("exact");
        writeln!(out, "{w}\t{p}\t{:.6}", empirical.prob_f64(w)).unwrap();
    }
    Ok(CommandResult::ok(out))
}
