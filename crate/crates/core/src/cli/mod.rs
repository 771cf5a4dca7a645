//! Command-line front end: `build`, `extract`, `refresh`, `reason`,
//! `query`, `assess`, `export` and `stats`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 consistency
//! violations under `reason --strict`.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
pub mod config;

pub use config::{ExtractorChoice, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0} consistency violation(s)")]
    Violations(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Violations(_) => 3,
        }
    }
}

macro_rules! data_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Data(e.to_string())
            }
        })*
    };
}

data_error!(
    crate::rdf::StoreError,
    crate::ontology::OntologyError,
    crate::extraction::ExtractionError,
    crate::reasoner::ReasonerError
);

impl From<crate::llm_refresh::RefreshError> for CliError {
    fn from(e: crate::llm_refresh::RefreshError) -> Self {
        match e {
            crate::llm_refresh::RefreshError::Config(m) => CliError::Usage(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "onconet", version, about = "Build, enrich, reason over, query and assess a cancer-biomarker KG")]
struct Cli {
    #[command(flatten)]
    settings: SettingFlags,
    #[command(subcommand)]
    command: Command,
}

/// Flags that mirror configuration keys.
#[derive(Debug, Args)]
struct SettingFlags {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// KG dump (canonical N-Triples; provenance in `<kg>.prov.jsonl`).
    #[arg(long, global = true)]
    kg: Option<String>,
    /// Seed file or directory of `.ttl`/`.nt` files.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Directory of `.txt` documents.
    #[arg(long, global = true)]
    corpus: Option<String>,
    /// Tab-separated alias table for the gazetteer.
    #[arg(long, global = true)]
    aliases: Option<String>,
    /// User rule file, added after the built-in rules.
    #[arg(long, global = true)]
    rules: Option<String>,
    /// `builtin`, `subprocess:<cmd>` or `http:<url>`.
    #[arg(long, global = true)]
    extractor: Option<String>,
    /// Minimum score for linking a mention to an entity (default 0.5).
    #[arg(long, global = true)]
    theta_link: Option<String>,
    /// Query latency budget for the performance score (default 50).
    #[arg(long, global = true)]
    latency_budget_ms: Option<String>,
    /// `accept_new`, `accept_new_and_queue_conflicts` or `dry_run`.
    #[arg(long, global = true)]
    policy: Option<String>,
    /// Pin every timestamp to this RFC 3339 instant.
    #[arg(long, global = true)]
    fixed_time: Option<String>,
    /// Chat-completions URL of the LLM service.
    #[arg(long, global = true)]
    llm_endpoint: Option<String>,
    /// Model name sent with each LLM request.
    #[arg(long, global = true)]
    llm_model: Option<String>,
    /// Environment variable holding the LLM credential.
    #[arg(long, global = true)]
    llm_credential_env: Option<String>,
    /// Maximum LLM requests in flight.
    #[arg(long, global = true)]
    concurrency: Option<String>,
}

impl SettingFlags {
    fn to_map(&self) -> BTreeMap<String, String> {
        [
            ("kg", &self.kg),
            ("seed", &self.seed),
            ("corpus", &self.corpus),
            ("aliases", &self.aliases),
            ("rules", &self.rules),
            ("extractor", &self.extractor),
            ("theta_link", &self.theta_link),
            ("latency_budget_ms", &self.latency_budget_ms),
            ("policy", &self.policy),
            ("fixed_time", &self.fixed_time),
            ("llm_endpoint", &self.llm_endpoint),
            ("llm_model", &self.llm_model),
            ("llm_credential_env", &self.llm_credential_env),
            ("concurrency", &self.concurrency),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k.to_owned(), v)))
        .collect()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and validate the seed, then write the KG.
    Build {
        /// Output dump; defaults to --kg.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract triples from the corpus into the KG.
    Extract,
    /// Ask an LLM for triples per document, triage them and apply the policy.
    Refresh {
        /// Canned response returned for every document.
        #[arg(long, conflicts_with = "mock_dir")]
        mock_response: Option<PathBuf>,
        /// Directory of canned responses named `<doc id>.txt`.
        #[arg(long)]
        mock_dir: Option<PathBuf>,
        /// Audit log; defaults to `<kg>.audit.jsonl`.
        #[arg(long)]
        audit: Option<PathBuf>,
        /// Review queue; defaults to `<kg>.review.nt`.
        #[arg(long)]
        queue: Option<PathBuf>,
        /// Mint `ono:` IRIs for unknown entities instead of rejecting them.
        #[arg(long)]
        allow_minting: bool,
    },
    /// Saturate the KG and report consistency violations.
    Reason {
        /// Exit with status 3 when violations are found.
        #[arg(long)]
        strict: bool,
        /// Explain a triple given as three terms, e.g. "ono:TP53 rdf:type ono:POTSF".
        #[arg(long)]
        explain: Vec<String>,
        /// Print every inferred triple.
        #[arg(long)]
        show_inferred: bool,
    },
    /// Evaluate a DL class expression, or start the interactive loop.
    Query {
        expression: Option<String>,
        #[arg(long, conflicts_with = "expression")]
        repl: bool,
        /// Query the asserted graph without saturating it first.
        #[arg(long)]
        no_reason: bool,
        #[arg(long)]
        json: bool,
    },
    /// Score the KG on six quality dimensions.
    Assess {
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Assess the saturated graph.
        #[arg(long)]
        saturate: bool,
        /// Passes over the benchmark query set.
        #[arg(long, default_value_t = 20)]
        rounds: usize,
    },
    /// Write the KG as canonical N-Triples.
    Export {
        #[arg(long)]
        out: PathBuf,
        /// Also write the provenance sidecar next to the output.
        #[arg(long)]
        with_provenance: bool,
    },
    /// Counts by class and predicate.
    Stats,
}

/// Runs the CLI against the process environment and standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdin = io::stdin();
    let mut input = stdin.lock();
    run_with(
        argv,
        &|k| std::env::var(k).ok(),
        &mut input,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}

/// Runs the CLI with explicit environment lookup and streams.
pub fn run_with<I, S>(
    argv: I,
    env: &dyn Fn(&str) -> Option<String>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli, env, input, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(
    cli: Cli,
    env: &dyn Fn(&str) -> Option<String>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let config_path = cli.settings.config.clone().or_else(|| env("ONCONET_CONFIG").map(PathBuf::from));
    let file = match config_path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?;
            config::parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::resolve(file, cli.settings.to_map(), env);
    let mut io = commands::Streams { input, out, err };
    match cli.command {
        Command::Build { out } => commands::build(&cfg, out, &mut io),
        Command::Extract => commands::extract(&cfg, &mut io),
        Command::Refresh {
            mock_response,
            mock_dir,
            audit,
            queue,
            allow_minting,
        } => commands::refresh(
            &cfg,
            commands::RefreshArgs {
                mock_response,
                mock_dir,
                audit,
                queue,
                allow_minting,
            },
            env,
            &mut io,
        ),
        Command::Reason {
            strict,
            explain,
            show_inferred,
        } => commands::reason(&cfg, strict, &explain, show_inferred, &mut io),
        Command::Query {
            expression,
            repl,
            no_reason,
            json,
        } => commands::query(&cfg, expression.as_deref(), repl, no_reason, json, &mut io),
        Command::Assess { json, saturate, rounds } => commands::assess(&cfg, json, saturate, rounds, &mut io),
        Command::Export { out, with_provenance } => commands::export(&cfg, &out, with_provenance, &mut io),
        Command::Stats => commands::stats(&cfg, &mut io),
    }
}
