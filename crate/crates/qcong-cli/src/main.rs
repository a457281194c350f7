//! `qcong` — expand classical q-products and batch-verify coefficient
//! identities, congruences, parity patterns, densities, and eta-quotient
//! profiles.
//!
//! Exit codes: 0 when every gated check passes, 1 when any check fails, 2
//! when the run could not produce a verdict (bad flags, parse errors,
//! unreadable files, or a truncation above the configured cap).

#![forbid(unsafe_code)]

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcong_cli::{
    cmd_congruence, cmd_density, cmd_eta_check, cmd_expand, cmd_oracle_compare, cmd_parity,
    cmd_verify, parse_quotient, EtaTarget, ExpandOutput, ManifestResult, RunManifest,
};
use qcong_core::{set_max_truncation, Error, Result, Source, Status};

#[derive(Parser)]
#[command(
    name = "qcong",
    version,
    about = "Exact truncated q-series engine with an independent combinatorial oracle",
    long_about = "Expands classical q-products and batch-verifies coefficient identities, \
                  arithmetic-progression congruences, parity patterns, residue densities, \
                  and eta-quotient profiles. Set QCONG_MAX_TRUNC to cap how many \
                  coefficients any single evaluation may request (default 1000000)."
)]
struct Cli {
    /// Emit the run manifest (or expansion) as pretty JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Cmd,
}

/// Which route computes progression coefficients.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceArg {
    /// Generating-function expansion only
    Series,
    /// Direct partition counting only
    Oracle,
    /// Both routes, which must also agree with each other
    Both,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Series => Source::Series,
            SourceArg::Oracle => Source::Oracle,
            SourceArg::Both => Source::Both,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand an expression and print its coefficients a(0), a(1), …
    Expand {
        /// Expression in the grammar of docs/expression-grammar.md
        expr: String,
        /// Number of coefficients to produce
        #[arg(long, default_value_t = 20)]
        trunc: usize,
        /// Reduce every coefficient modulo M
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },
    /// Check registry entries and emit a run manifest
    Verify {
        /// Registry JSON file (defaults to the built-in registry)
        #[arg(long, value_name = "PATH")]
        registry: Option<PathBuf>,
        /// Glob over entry ids, with * and ? wildcards
        #[arg(long, default_value = "*")]
        filter: String,
        /// Comparison order for two-sided identities
        #[arg(long, default_value_t = 200)]
        trunc: usize,
        /// Compare identities modulo M instead of exactly
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },
    /// Check that a(STEP·n + OFFSET) ≡ residue (mod M) for all n below a bound
    Congruence {
        /// Progression step
        #[arg(value_name = "STEP")]
        m: usize,
        /// Progression offset
        #[arg(value_name = "OFFSET")]
        r: usize,
        /// Modulus of the congruence
        #[arg(long = "mod", value_name = "M", default_value_t = 4)]
        modulus: u64,
        /// Expected residue
        #[arg(long, default_value_t = 0)]
        residue: u64,
        /// Number of progression terms to scan
        #[arg(long, default_value_t = 200)]
        bound: usize,
        /// Which route computes the coefficients
        #[arg(long, value_enum, default_value_t = SourceArg::Both)]
        source: SourceArg,
    },
    /// Check the odd-index parity pattern of the distinct-part stream
    Parity {
        /// Number of odd indices 2n+1 to scan
        #[arg(long, default_value_t = 100_000)]
        bound: usize,
    },
    /// Report residue densities of an expression's coefficient stream
    Density {
        /// Expression in the grammar of docs/expression-grammar.md
        expr: String,
        /// Modulus of the residue classes
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        /// Residue class to count
        #[arg(long, default_value_t = 0)]
        residue: u64,
        /// Comma-separated cutoffs X; each density counts indices below X
        #[arg(long, value_delimiter = ',', default_value = "1000")]
        checkpoints: Vec<usize>,
    },
    /// Profile an eta quotient: weight, admissibility sums, cusp orders
    EtaCheck {
        /// Index into the built-in 5-power family
        #[arg(long, conflicts_with_all = ["level", "quotient"])]
        k: Option<u32>,
        /// Congruence-subgroup level for --quotient
        #[arg(long, requires = "quotient")]
        level: Option<u64>,
        /// Quotient as comma-separated delta:exponent pairs, e.g. 1:-1,2:3
        #[arg(long, requires = "level")]
        quotient: Option<String>,
    },
    /// Compare a series expansion against direct partition counting
    OracleCompare {
        /// Parts divisible by ELL are forbidden in the counted partitions
        #[arg(long, default_value_t = 5)]
        ell: u64,
        /// Number of coefficients to compare
        #[arg(long, default_value_t = 200)]
        bound: usize,
    },
}

enum Outcome {
    Manifest(RunManifest),
    Expansion(ExpandOutput),
}

fn run(cmd: Cmd) -> Result<Outcome> {
    Ok(match cmd {
        Cmd::Expand {
            expr,
            trunc,
            modulus,
        } => Outcome::Expansion(cmd_expand(&expr, trunc, modulus)?),
        Cmd::Verify {
            registry,
            filter,
            trunc,
            modulus,
        } => {
            let text = match &registry {
                Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidArgument(format!(
                        "cannot read registry file {}: {e}",
                        path.display()
                    ))
                })?),
                None => None,
            };
            Outcome::Manifest(cmd_verify(text.as_deref(), &filter, trunc, modulus)?)
        }
        Cmd::Congruence {
            m,
            r,
            modulus,
            residue,
            bound,
            source,
        } => Outcome::Manifest(cmd_congruence(
            m,
            r,
            modulus,
            residue,
            bound,
            source.into(),
        )?),
        Cmd::Parity { bound } => Outcome::Manifest(cmd_parity(bound)?),
        Cmd::Density {
            expr,
            modulus,
            residue,
            checkpoints,
        } => Outcome::Manifest(cmd_density(&expr, modulus, residue, &checkpoints)?),
        Cmd::EtaCheck { k, level, quotient } => {
            let target = match (k, level, quotient) {
                (Some(k), None, None) => EtaTarget::Power(k),
                (None, Some(level), Some(spec)) => EtaTarget::Quotient {
                    level,
                    terms: parse_quotient(&spec)?,
                },
                _ => {
                    return Err(Error::InvalidArgument(
                        "pass either --k K, or --level N together with --quotient d:r,…".into(),
                    ))
                }
            };
            Outcome::Manifest(cmd_eta_check(&target)?)
        }
        Cmd::OracleCompare { ell, bound } => Outcome::Manifest(cmd_oracle_compare(ell, bound)?),
    })
}

fn render_manifest_text(m: &RunManifest) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", m.command);
    for (key, value) in &m.parameters {
        let _ = writeln!(out, "  {key} = {value}");
    }
    for result in &m.results {
        match result {
            ManifestResult::Verification(v) => match &v.status {
                Status::Pass => {
                    let _ = writeln!(
                        out,
                        "{}: PASS (order {}, {} ms)",
                        v.id,
                        v.order_checked,
                        v.elapsed.as_millis()
                    );
                }
                Status::Fail { exponent, lhs, rhs } => {
                    let _ = writeln!(out, "{}: FAIL at q^{exponent} (lhs {lhs}, rhs {rhs})", v.id);
                }
            },
            ManifestResult::Density(d) => {
                for p in &d.points {
                    let _ = writeln!(
                        out,
                        "density[mod {}, residue {}] X = {}: count {}, density {}",
                        d.modulus, d.residue, p.x, p.count, p.density
                    );
                }
            }
        }
    }
    let _ = writeln!(out, "overall: {}", if m.passed() { "pass" } else { "fail" });
    out
}

fn render_expansion_text(e: &ExpandOutput) -> String {
    let mut out = String::new();
    for (n, coefficient) in e.coefficients.iter().enumerate() {
        let _ = writeln!(out, "{n} {coefficient}");
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(raw) = std::env::var_os("QCONG_MAX_TRUNC") {
        match raw.to_str().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(cap) if cap > 0 => {
                set_max_truncation(cap);
            }
            _ => {
                eprintln!("qcong: QCONG_MAX_TRUNC must be a positive integer, got {raw:?}");
                return ExitCode::from(2);
            }
        }
    }

    match run(cli.command) {
        Ok(Outcome::Expansion(expansion)) => {
            if cli.json {
                match serde_json::to_string_pretty(&expansion) {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("qcong: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                print!("{}", render_expansion_text(&expansion));
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Manifest(manifest)) => {
            if cli.json {
                match manifest.to_json() {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("qcong: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                print!("{}", render_manifest_text(&manifest));
            }
            if manifest.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("qcong: {e}");
            ExitCode::from(2)
        }
    }
}
