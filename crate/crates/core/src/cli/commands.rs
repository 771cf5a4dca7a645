//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::clock::Clock;
use crate::dlq;
use crate::extraction::{
    emit_outcomes, load_corpus, ExternalExtractor, HttpExtractor, Pipeline, SubprocessExtractor,
};
use crate::llm_refresh::{
    client::ENV_API_KEY, refresh_corpus, HttpClient, HttpClientConfig, LlmClient, MockClient, ParseOptions, Policy,
    RefreshConfig,
};
use crate::ontology::{cancer_counts, gazetteer, load_seed_with, terms, Gazetteer};
use crate::quality::{assess as assess_quality, QualityConfig};
use crate::rdf::{load_kg, save_kg, serialize_ntriples, serialize_provenance, sidecar_path, Graph, Iri, Term, Triple};
use crate::reasoner::{check_consistency, explain, parse_rules, rule_set, saturate, Constraints, Rule, Saturation};

use super::config::{ExtractorChoice, RunConfig};
use super::CliError;

pub struct Streams<'a> {
    pub input: &'a mut dyn BufRead,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Data(format!("write failed: {e}"))
}

macro_rules! say {
    ($w:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(io_err)?
    };
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_existing_kg(cfg: &RunConfig) -> Result<(PathBuf, Graph), CliError> {
    let path = cfg.kg_path()?;
    if !path.exists() {
        return Err(CliError::Data(format!("{}: no KG here; run build first", path.display())));
    }
    let g = load_kg(&path)?;
    Ok((path, g))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_gazetteer(cfg: &RunConfig, graph: &Graph) -> Result<Gazetteer, CliError> {
    let mut gz = gazetteer(graph);
    if cfg.get("aliases").is_some() {
        let path = cfg.existing_path("aliases")?;
        let text = fs::read_to_string(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        gz.load_aliases(&text, graph)?;
    }
    Ok(gz)
}

fn load_rules(cfg: &RunConfig, graph: &Graph) -> Result<Vec<Rule>, CliError> {
    let user = match cfg.get("rules") {
        None => Vec::new(),
        Some(_) => {
            let path = cfg.existing_path("rules")?;
            let text = fs::read_to_string(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            parse_rules(&text, graph.prefixes()).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        }
    };
    Ok(rule_set(&user)?)
}

pub fn build(cfg: &RunConfig, out: Option<PathBuf>, io: &mut Streams) -> Result<(), CliError> {
    let seed = cfg.existing_path("seed")?;
    let clock = cfg.clock()?;
    let graph = load_seed_with(&seed, &clock)?;
    let target = match out {
        Some(p) => p,
        None => cfg.kg_path()?,
    };
    save_kg(&graph, &target)?;
    say!(io.out, "built {} triples -> {}", graph.len(), target.display());
    Ok(())
}

pub fn extract(cfg: &RunConfig, io: &mut Streams) -> Result<(), CliError> {
    let (path, mut graph) = load_existing_kg(cfg)?;
    let corpus = cfg.existing_path("corpus")?;
    let docs = load_corpus(&corpus)?;
    let clock = cfg.clock()?;
    let gz = load_gazetteer(cfg, &graph)?;
    let outcomes = {
        let mut pipeline = Pipeline::new(&graph, &gz).with_theta_link(cfg.theta_link()?);
        let external: Option<Box<dyn ExternalExtractor>> = match cfg.extractor()? {
            ExtractorChoice::Builtin => None,
            ExtractorChoice::Subprocess(cmd) => Some(Box::new(SubprocessExtractor::new(&cmd)?)),
            ExtractorChoice::Http(url) => Some(Box::new(HttpExtractor::new(&url, Duration::from_secs(60)))),
        };
        if let Some(ext) = external {
            pipeline = pipeline.with_external(ext);
        }
        pipeline.process_all(&docs)?
    };
    let report = emit_outcomes(&outcomes, &mut graph, &clock);
    for w in &report.warnings {
        say!(io.err, "warning: {w}");
    }
    for t in &report.emitted.inserted {
        say!(io.out, "{}", t.to_ntriples());
    }
    say!(
        io.out,
        "documents={} mentions={} unlinked={} candidates={} missing_mappings={} inserted={} duplicates={} skipped={}",
        report.documents,
        report.mentions,
        report.unlinked,
        report.candidates,
        report.missing_mappings,
        report.emitted.inserted.len(),
        report.emitted.duplicates,
        report.emitted.skipped
    );
    save_kg(&graph, &path)?;
    Ok(())
}

pub struct RefreshArgs {
    pub mock_response: Option<PathBuf>,
    pub mock_dir: Option<PathBuf>,
    pub audit: Option<PathBuf>,
    pub queue: Option<PathBuf>,
    pub allow_minting: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn refresh(
    cfg: &RunConfig,
    args: RefreshArgs,
    env: &dyn Fn(&str) -> Option<String>,
    io: &mut Streams,
) -> Result<(), CliError> {
    let (path, mut graph) = load_existing_kg(cfg)?;
    let corpus = cfg.existing_path("corpus")?;
    let docs = load_corpus(&corpus)?;
    let clock = cfg.clock()?;
    let gz = load_gazetteer(cfg, &graph)?;
    let rules = load_rules(cfg, &graph)?;
    let client: Box<dyn LlmClient> = if let Some(file) = &args.mock_response {
        Box::new(MockClient::new(read(file)?))
    } else if let Some(dir) = &args.mock_dir {
        let mut mock = MockClient::new("");
        for d in &docs {
            let file = dir.join(format!("{}.txt", d.id));
            if file.exists() {
                mock = mock.with_rule(d.body.trim(), read(&file)?);
            }
        }
        Box::new(mock)
    } else {
        let endpoint = cfg
            .get("llm_endpoint")
            .ok_or_else(|| CliError::Usage("refresh needs --llm-endpoint or a mock response".into()))?;
        let model = cfg
            .get("llm_model")
            .ok_or_else(|| CliError::Usage("refresh needs --llm-model".into()))?;
        let credential_env = cfg.get("llm_credential_env").unwrap_or(ENV_API_KEY).to_owned();
        if env(&credential_env).is_none_or(|c| c.is_empty()) {
            return Err(CliError::Usage(format!("credential variable {credential_env} is not set")));
        }
        Box::new(HttpClient::new(HttpClientConfig {
            endpoint: endpoint.to_owned(),
            model: model.to_owned(),
            credential_env,
            temperature: 0.0,
            timeout: Duration::from_secs(60),
        })?)
    };
    let policy = cfg.policy()?;
    let config = RefreshConfig {
        parse: ParseOptions {
            allow_minting: args.allow_minting,
        },
        policy,
        concurrency: cfg.concurrency()?,
        ..Default::default()
    };
    let outcome = refresh_corpus(&docs, &mut graph, &rules, &gz, client.as_ref(), &config, &clock)?;
    for d in &outcome.documents {
        let (n, c, x, i) = d.diff.sizes();
        say!(
            io.out,
            "{} new={n} confirmed={c} conflicting={x} invalid={i} inserted={} queued={}",
            d.doc_id,
            d.applied.inserted.len(),
            d.applied.queued
        );
    }
    say!(io.out, "policy={policy} inserted={} queued={}", outcome.inserted(), outcome.queue.len());
    write_file(&args.audit.unwrap_or_else(|| with_suffix(&path, ".audit.jsonl")), &outcome.audit.to_jsonl())?;
    write_file(&args.queue.unwrap_or_else(|| with_suffix(&path, ".review.nt")), &outcome.queue.render())?;
    if policy != Policy::DryRun {
        save_kg(&graph, &path)?;
    }
    if !outcome.failures.is_empty() {
        for (doc, e) in &outcome.failures {
            say!(io.err, "{doc}: {e}");
        }
        return Err(CliError::Data(format!("{} document(s) failed", outcome.failures.len())));
    }
    Ok(())
}

/// Reads "s p o" with prefixed names or `<iri>` terms.
fn parse_triple_arg(graph: &Graph, text: &str) -> Result<Triple, CliError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let [s, p, o] = parts.as_slice() else {
        return Err(CliError::Usage(format!("expected three terms, got {text:?}")));
    };
    let iri = |t: &str| -> Result<Iri, CliError> {
        let full = match t.strip_prefix('<').and_then(|x| x.strip_suffix('>')) {
            Some(inner) => inner.to_owned(),
            None if t == "a" => crate::rdf::vocab::RDF_TYPE.to_owned(),
            None => graph
                .expand_prefixed(t)
                .ok_or_else(|| CliError::Usage(format!("cannot expand {t:?}")))?,
        };
        Iri::new(full).map_err(|e| CliError::Usage(e.to_string()))
    };
    Triple::new(Term::Iri(iri(s)?), iri(p)?, Term::Iri(iri(o)?)).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn reason(
    cfg: &RunConfig,
    strict: bool,
    explain_args: &[String],
    show_inferred: bool,
    io: &mut Streams,
) -> Result<(), CliError> {
    let (_, graph) = load_existing_kg(cfg)?;
    let rules = load_rules(cfg, &graph)?;
    let clock = cfg.clock()?;
    let sat = saturate(&graph, &rules, &clock);
    say!(
        io.out,
        "asserted={} inferred={} rounds={}",
        graph.len(),
        sat.inferred.len(),
        sat.rounds
    );
    if show_inferred {
        for t in &sat.inferred {
            say!(io.out, "{}", t.to_ntriples());
        }
    }
    for text in explain_args {
        let t = parse_triple_arg(&sat.graph, text)?;
        let e = explain(&sat, &t)?;
        write!(io.out, "{}", e.render(&sat.graph)).map_err(io_err)?;
    }
    let violations = check_consistency(&sat.graph, &Constraints::from_graph(&sat.graph));
    for v in &violations {
        say!(io.out, "{v}");
        for t in &v.offending {
            say!(io.out, "  {}", t.to_ntriples());
        }
    }
    say!(io.out, "violations={}", violations.len());
    if strict && !violations.is_empty() {
        return Err(CliError::Violations(violations.len()));
    }
    Ok(())
}

fn saturated(cfg: &RunConfig, graph: &Graph, reason: bool, clock: &Clock) -> Result<Saturation, CliError> {
    let rules = if reason { load_rules(cfg, graph)? } else { Vec::new() };
    Ok(saturate(graph, &rules, clock))
}

pub fn query(
    cfg: &RunConfig,
    expression: Option<&str>,
    repl: bool,
    no_reason: bool,
    json: bool,
    io: &mut Streams,
) -> Result<(), CliError> {
    let (_, graph) = load_existing_kg(cfg)?;
    let clock = cfg.clock()?;
    let sat = saturated(cfg, &graph, !no_reason, &clock)?;
    if repl {
        return dlq::repl(&sat, &mut *io.input, &mut *io.out).map_err(io_err);
    }
    let text = expression.ok_or_else(|| CliError::Usage("query needs an expression or --repl".into()))?;
    let expr = dlq::parse(text, sat.graph.prefixes()).map_err(|e| CliError::Usage(format!("query: {e}")))?;
    let result = dlq::evaluate(&expr, &sat.graph);
    for w in &result.warnings {
        say!(io.err, "warning: {w}");
    }
    if json {
        say!(io.out, "{}", serde_json::to_string_pretty(&result).expect("result serialises"));
    } else {
        write!(io.out, "{}", result.render(&sat.graph)).map_err(io_err)?;
    }
    Ok(())
}

pub fn assess(
    cfg: &RunConfig,
    json: Option<PathBuf>,
    saturate: bool,
    rounds: usize,
    io: &mut Streams,
) -> Result<(), CliError> {
    let (_, graph) = load_existing_kg(cfg)?;
    let clock = cfg.clock()?;
    let config = QualityConfig {
        latency_budget: cfg.latency_budget()?,
        saturate,
        benchmark_rounds: rounds,
        ..Default::default()
    };
    let report = assess_quality(&graph, &config, &clock);
    write!(io.out, "{}", report.render_table()).map_err(io_err)?;
    if let Some(path) = json {
        write_file(&path, &(report.to_json() + "\n"))?;
    }
    Ok(())
}

pub fn export(cfg: &RunConfig, out: &Path, with_provenance: bool, io: &mut Streams) -> Result<(), CliError> {
    let (_, graph) = load_existing_kg(cfg)?;
    write_file(out, &serialize_ntriples(&graph))?;
    if with_provenance {
        write_file(&sidecar_path(out), &serialize_provenance(&graph))?;
    }
    say!(io.out, "exported {} triples -> {}", graph.len(), out.display());
    Ok(())
}

pub fn stats(cfg: &RunConfig, io: &mut Streams) -> Result<(), CliError> {
    let (_, graph) = load_existing_kg(cfg)?;
    let (tcga, flagged) = cancer_counts(&graph);
    say!(io.out, "triples\t{}", graph.len());
    say!(io.out, "cancer_instances\t{tcga}");
    say!(io.out, "flagged_cancer_instances\t{flagged}");
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    for (_, c) in graph.pairs(&terms::rdf_type()) {
        let name = c.as_iri().map_or_else(|| c.to_string(), |i| graph.compact(i));
        *classes.entry(name).or_default() += 1;
    }
    for (c, n) in &classes {
        say!(io.out, "class\t{c}\t{n}");
    }
    let mut predicates: BTreeMap<String, usize> = BTreeMap::new();
    for t in graph.iter() {
        *predicates.entry(graph.compact(t.predicate())).or_default() += 1;
    }
    for (p, n) in &predicates {
        say!(io.out, "predicate\t{p}\t{n}");
    }
    Ok(())
}
