//! Library half of the `apack` binary: argument types, spec parsing, sweeps
//! and report rendering.

pub mod commands;
pub mod report;
pub mod spec;
pub mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;

use apack_core::corpus::CorpusBounds;
use apack_core::{HalfInt, Weight};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Format, Report, Section};
use spec::Input;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRACE_TRIALS: usize = 100;
pub const DEFAULT_SWEEP_TRIALS: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn core(e: apack_core::Error) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(name = "apack", version, about = "Arthur-packet translation combinatorics")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads for parallel sweeps; never changes the output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct SpecArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Comma-separated offsets `T₁,…` (one per discrete copy); canonical when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub offsets: Option<String>,
    #[arg(long)]
    pub threshold: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group, blocks, parity, component group and Levi data of a parameter.
    Info(SpecArgs),
    /// Infinitesimal characters on both sides of the transfer.
    Infchar(SpecArgs),
    /// The dominating parameter `ψ₊` and the map `A(ψ₊) → A(ψ)`.
    Dominate(SpecArgs),
    /// Translation weight and the orbit-uniqueness check.
    Translate(SpecArgs),
    /// Translates a packet of `ψ₊` given as input down to `ψ`.
    Packet {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        plus_packet: PathBuf,
    },
    /// Runs a verification sweep.
    Verify {
        suite: Suite,
        #[command(flatten)]
        spec: SpecArgs,
        /// Sweep the exhaustive good-parity corpus instead of a single spec.
        #[arg(long)]
        corpus: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        height_bound: Option<i64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long)]
        endo_rank: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Uniqueness,
    TwistedTrace,
    Filtration,
    Parity,
    Norms,
    Kostant,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Uniqueness => "uniqueness",
            Suite::TwistedTrace => "twisted-trace",
            Suite::Filtration => "filtration",
            Suite::Parity => "parity",
            Suite::Norms => "norms",
            Suite::Kostant => "kostant",
            Suite::All => "all",
        }
    }
}

/// Parsed spec plus resolved offsets and threshold.
struct Resolved {
    input: Input,
    offsets: Option<Vec<HalfInt>>,
    threshold: Option<HalfInt>,
}

fn resolve(args: &SpecArgs, echo: &mut BTreeMap<String, String>) -> Result<Option<Resolved>, CliError> {
    let Some(path) = &args.spec else {
        if args.offsets.is_some() || args.threshold.is_some() {
            return Err(CliError::Input("--offsets and --threshold need --spec".into()));
        }
        return Ok(None);
    };
    let input = spec::parse_spec(path)?;
    let offsets = match &args.offsets {
        Some(s) if s == "canonical" => None,
        Some(s) => {
            echo.insert("offsets".into(), s.clone());
            Some(spec::parse_halfints(s)?)
        }
        None => input.options.offsets.clone(),
    };
    let threshold = match &args.threshold {
        Some(s) => {
            echo.insert("threshold".into(), s.clone());
            Some(s.parse::<HalfInt>().map_err(CliError::core)?)
        }
        None => input.options.threshold,
    };
    Ok(Some(Resolved {
        input,
        offsets,
        threshold,
    }))
}

fn require(r: Option<Resolved>) -> Result<Resolved, CliError> {
    r.ok_or_else(|| CliError::Input("--spec is required".into()))
}

/// Runs one command and builds its report. Input errors come back as `Err`.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let mut echo = BTreeMap::new();
    let mut extra_bytes: Vec<Vec<u8>> = Vec::new();
    let mut seed = None;
    let mut sections = BTreeMap::new();
    let (command, resolved) = match &cli.command {
        Command::Info(a) => {
            let r = require(resolve(a, &mut echo)?)?;
            sections.insert("info".into(), commands::info(&r.input.psi, r.threshold));
            ("info".to_string(), Some(r))
        }
        Command::Infchar(a) => {
            let r = require(resolve(a, &mut echo)?)?;
            sections.insert("infchar".into(), verify::norms_for(&r.input.psi)?);
            ("infchar".to_string(), Some(r))
        }
        Command::Dominate(a) => {
            let r = require(resolve(a, &mut echo)?)?;
            if gate(&r, &mut sections) {
                sections.insert(
                    "dominate".into(),
                    commands::dominate(&r.input.psi, r.offsets.as_deref(), r.threshold)?,
                );
            }
            ("dominate".to_string(), Some(r))
        }
        Command::Translate(a) => {
            let r = require(resolve(a, &mut echo)?)?;
            if gate(&r, &mut sections) {
                let offsets = verify::resolve_offsets(&r.input.psi, r.offsets.as_deref(), r.threshold);
                sections.insert("translate".into(), verify::uniqueness(&r.input.psi, &offsets, r.threshold)?);
            }
            ("translate".to_string(), Some(r))
        }
        Command::Packet { spec: a, plus_packet } => {
            let r = require(resolve(a, &mut echo)?)?;
            let (packet, bytes) = spec::parse_packet(plus_packet)?;
            extra_bytes.push(bytes);
            if gate(&r, &mut sections) {
                sections.insert("packet".into(), commands::packet(&packet, &r.input.psi)?);
            }
            ("packet".to_string(), Some(r))
        }
        Command::Verify {
            suite,
            spec: a,
            corpus,
            seed: seed_flag,
            trials,
            height_bound,
            n,
            mu,
            endo_rank,
        } => {
            let r = resolve(a, &mut echo)?;
            if *corpus && r.is_some() {
                return Err(CliError::Input("--corpus and --spec are exclusive".into()));
            }
            let s = seed_flag
                .or_else(|| r.as_ref().and_then(|r| r.input.options.seed))
                .unwrap_or(DEFAULT_SEED);
            seed = Some(s);
            if *corpus {
                echo.insert("corpus".into(), "true".into());
            }
            if let Some(t) = trials {
                echo.insert("trials".into(), t.to_string());
            }
            if let Some(n) = n {
                echo.insert("n".into(), n.to_string());
            }
            if let Some(m) = mu {
                echo.insert("mu".into(), m.clone());
            }
            if let Some(k) = endo_rank {
                echo.insert("endo_rank".into(), k.to_string());
            }
            let h = height_bound.or_else(|| r.as_ref().and_then(|r| r.input.options.height_bound));
            if let Some(h) = h {
                echo.insert("height_bound".into(), h.to_string());
            }
            let mu = mu.as_deref().map(spec::parse_halfints).transpose()?.map(Weight);
            let job = VerifyJob {
                resolved: r.as_ref(),
                corpus: *corpus,
                seed: s,
                trials: *trials,
                height_bound: h,
                n: *n,
                mu,
                endo_rank: *endo_rank,
            };
            run_suite(*suite, &job, &mut sections)?;
            (format!("verify {}", suite.name()), r)
        }
    };
    let spec_bytes = resolved.as_ref().map(|r| r.input.bytes.clone()).unwrap_or_default();
    let echo_json = serde_json::to_string(&echo).expect("string map serializes");
    let mut parts: Vec<&[u8]> = vec![command.as_bytes(), echo_json.as_bytes(), &spec_bytes];
    parts.extend(extra_bytes.iter().map(Vec::as_slice));
    Ok(Report {
        input_sha256: spec::sha256_hex(&parts),
        command,
        args: echo,
        seed,
        sections,
    })
}

/// Adds a failing parity section when `ψ` is not of good parity.
fn gate(r: &Resolved, sections: &mut BTreeMap<String, Section>) -> bool {
    if r.input.psi.is_good_parity() {
        return true;
    }
    sections.insert("parity".into(), verify::parity(&r.input.psi));
    false
}

struct VerifyJob<'a> {
    resolved: Option<&'a Resolved>,
    corpus: bool,
    seed: u64,
    trials: Option<usize>,
    height_bound: Option<i64>,
    n: Option<usize>,
    mu: Option<Weight>,
    endo_rank: Option<usize>,
}

fn run_suite(suite: Suite, job: &VerifyJob<'_>, sections: &mut BTreeMap<String, Section>) -> Result<(), CliError> {
    let bounds = CorpusBounds::default();
    let good = job.resolved.is_none_or(|r| r.input.psi.is_good_parity());
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Parity) {
        let s = match job.resolved {
            Some(r) => verify::parity(&r.input.psi),
            None => verify::parity_sweep(job.trials.unwrap_or(DEFAULT_SWEEP_TRIALS), job.seed),
        };
        sections.insert("parity".into(), s);
    } else if !good {
        let r = job.resolved.expect("bad parity implies a spec");
        sections.insert("parity".into(), verify::parity(&r.input.psi));
    }
    if wants(Suite::Norms) {
        let mut s = verify::norm_sweep(job.trials.unwrap_or(DEFAULT_SWEEP_TRIALS), job.seed);
        if let Some(r) = job.resolved {
            let own = verify::norms_for(&r.input.psi)?;
            s.violations.extend(own.violations);
            s.results = serde_json::json!({ "random": s.results, "spec": own.results });
        }
        sections.insert("norms".into(), s);
    }
    if wants(Suite::Uniqueness) && good {
        let s = match job.resolved {
            Some(r) => {
                let offsets = verify::resolve_offsets(&r.input.psi, r.offsets.as_deref(), r.threshold);
                verify::uniqueness(&r.input.psi, &offsets, r.threshold)?
            }
            None if job.corpus || suite == Suite::All => verify::uniqueness_corpus(&bounds),
            None => return Err(CliError::Input("uniqueness needs --spec or --corpus".into())),
        };
        sections.insert("uniqueness".into(), s);
    }
    if wants(Suite::Filtration) && good {
        let s = match job.resolved {
            Some(r) => {
                let offsets = verify::resolve_offsets(&r.input.psi, r.offsets.as_deref(), r.threshold);
                verify::filtration(&r.input.psi, &offsets, r.threshold, job.height_bound)?
            }
            None if job.corpus || suite == Suite::All => verify::filtration_corpus(&bounds),
            None => return Err(CliError::Input("filtration needs --spec or --corpus".into())),
        };
        sections.insert("filtration".into(), s);
    }
    if wants(Suite::TwistedTrace) || wants(Suite::Kostant) {
        let cases = verify::trace_cases(job.n, job.mu.as_ref(), job.endo_rank)?;
        if wants(Suite::TwistedTrace) {
            let trials = match suite {
                Suite::All => DEFAULT_TRACE_TRIALS,
                _ => job.trials.unwrap_or(DEFAULT_TRACE_TRIALS),
            };
            sections.insert("twisted_trace".into(), verify::twisted_trace(&cases, trials, job.seed)?);
        }
        if wants(Suite::Kostant) {
            let mut weights: Vec<Weight> = cases.into_iter().map(|(w, _)| w).collect();
            weights.dedup();
            sections.insert("kostant".into(), verify::kostant(&weights)?);
        }
    }
    Ok(())
}
