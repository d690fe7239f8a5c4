//! `sltau`: classification, closure poset, strata and oracle runs for
//! SL(n) ⋊ <τ> in characteristic 2.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sltau_core::classes::{enumerate_classes, ClassDescription};
use sltau_core::induction::{poset, InduceConfig, Poset};
use sltau_core::oracle::{
    cross_validate, load_or_build, verify_unipotent_lemma, UnipotentLemmaReport, ValidationReport,
};
use sltau_core::strata::{strata_partition, StratumDescriptor};
use sltau_core::Error;

#[derive(Parser, Debug)]
#[command(name = "sltau", version, about = "Jordan classes, closures and strata of SL(n) ⋊ <τ> over GF(2)-bar")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jordan-class families of the τ-coset with dimensions and isolation flags.
    Classify(RunArgs),
    /// Closure poset of the families (Hasse diagram as DOT, full relation as JSON).
    Poset(RunArgs),
    /// Strata as fibers of E; --verify runs the regular-closure cross-check.
    Strata(RunArgs),
    /// Exhaustive enumeration of SL(n, 2^m) ⋊ <τ> and checks against it.
    Oracle(RunArgs),
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    /// Field degree of the enumerated group (oracle).
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Samples per seed when inducing orbits.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// First of three consecutive sampling seeds.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Field degree for sampling U_P.
    #[arg(long = "max-degree", default_value_t = 8)]
    max_degree: u32,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the Hasse diagram here (poset).
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Snapshot cache directory (oracle).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Run the consistency cross-checks (strata).
    #[arg(long)]
    verify: bool,
}

/// Resolved run configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct RunConfig {
    command: String,
    n: usize,
    m: u32,
    induce: InduceConfig,
    json: Option<PathBuf>,
    dot: Option<PathBuf>,
    cache: Option<PathBuf>,
    verify: bool,
}

impl RunConfig {
    fn new(command: &str, a: &RunArgs) -> Result<RunConfig, Error> {
        if a.samples == 0 {
            return Err(Error::InvalidInput("--samples must be positive".into()));
        }
        if !(1..=8).contains(&a.max_degree) {
            return Err(Error::UnsupportedDegree(a.max_degree));
        }
        Ok(RunConfig {
            command: command.to_string(),
            n: a.n,
            m: a.m,
            induce: InduceConfig { samples: a.samples, field: a.max_degree, seeds: (a.seed..a.seed + 3).collect() },
            json: a.json.clone(),
            dot: a.dot.clone(),
            cache: a.cache.clone(),
            verify: a.verify,
        })
    }
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ClassifyReport {
    schema_version: u32,
    n: usize,
    classes: Vec<ClassDescription>,
}

#[derive(Serialize, Deserialize)]
struct PosetReport {
    schema_version: u32,
    poset: Poset,
}

#[derive(Serialize, Deserialize)]
struct StrataReport {
    schema_version: u32,
    n: usize,
    verified: bool,
    strata: Vec<StratumDescriptor>,
}

#[derive(Serialize, Deserialize)]
struct OracleReport {
    schema_version: u32,
    n: usize,
    m: u32,
    cache_hit: bool,
    group_order: usize,
    validation: ValidationReport,
    unipotent_lemma: Option<UnipotentLemmaReport>,
    passed: bool,
}

enum Failure {
    Usage(String),
    Consistency(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::UnsupportedRank(_)
            | Error::UnsupportedDegree(_)
            | Error::UnsupportedSize(_)
            | Error::InvalidInput(_)
            | Error::Parse(_)
            | Error::BudgetExceeded(_) => Failure::Usage(e.to_string()),
            _ => Failure::Consistency(e.to_string()),
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit_json<T: Serialize>(cfg: &RunConfig, report: &T) -> Result<(), Failure> {
    if let Some(path) = &cfg.json {
        let text = serde_json::to_string_pretty(report).map_err(|e| Failure::Consistency(e.to_string()))? + "\n";
        write_out(path, &text)?;
    }
    Ok(())
}

fn check_rank(n: usize) -> Result<(), Failure> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedRank(n).into());
    }
    Ok(())
}

fn classify(cfg: &RunConfig) -> Result<(), Failure> {
    check_rank(cfg.n)?;
    let classes = enumerate_classes(cfg.n)?;
    if cfg.json.as_deref() != Some(Path::new("-")) {
        println!("{} Jordan-class families in the τ-coset of SL({})", classes.len(), cfg.n);
        for c in &classes {
            println!(
                "  {:<18} orbit dim {:>2}  class dim {:>2}  T-rank {}{}",
                c.name,
                c.orbit_dimension,
                c.dimension,
                c.label.t_lattice.rank(),
                if c.isolated { "  isolated" } else { "" }
            );
        }
    }
    emit_json(cfg, &ClassifyReport { schema_version: SCHEMA_VERSION, n: cfg.n, classes })
}

fn cmd_poset(cfg: &RunConfig) -> Result<(), Failure> {
    check_rank(cfg.n)?;
    let p = poset(cfg.n, &cfg.induce)?;
    if !p.is_partial_order() {
        return Err(Failure::Consistency("closure relation is not a partial order".into()));
    }
    if cfg.json.as_deref() != Some(Path::new("-")) && cfg.dot.as_deref() != Some(Path::new("-")) {
        println!("{} strict relations, {} in the Hasse diagram", p.edges.len(), p.hasse.len());
        for e in &p.edges {
            println!("  {} <= {}", e.lower.name(), e.upper.name());
        }
    }
    if let Some(path) = &cfg.dot {
        write_out(path, &p.to_dot())?;
    }
    emit_json(cfg, &PosetReport { schema_version: SCHEMA_VERSION, poset: p })
}

fn cmd_strata(cfg: &RunConfig) -> Result<(), Failure> {
    check_rank(cfg.n)?;
    let strata = strata_partition(cfg.n, &cfg.induce, cfg.verify)?;
    if cfg.json.as_deref() != Some(Path::new("-")) {
        println!("{} strata{}", strata.len(), if cfg.verify { " (verified)" } else { "" });
        for s in &strata {
            let names: Vec<String> = s.members.iter().map(|m| m.name()).collect();
            println!("  E = {:<14} dim {:>2}  {}", s.e_label.to_string(), s.orbit_dimension, names.join(", "));
        }
    }
    emit_json(cfg, &StrataReport { schema_version: SCHEMA_VERSION, n: cfg.n, verified: cfg.verify, strata })
}

fn cmd_oracle(cfg: &RunConfig) -> Result<bool, Failure> {
    let (snap, cache_hit) = load_or_build(cfg.n, cfg.m, cfg.cache.as_deref(), true)?;
    let validation = cross_validate(&snap, &cfg.induce)?;
    let unipotent_lemma = if cfg.n == 3 {
        let ext = if cfg.m == 1 { Some(load_or_build(3, 2, cfg.cache.as_deref(), false)?.0) } else { None };
        Some(verify_unipotent_lemma(&snap, ext.as_ref())?)
    } else {
        None
    };
    let passed = validation.passed() && unipotent_lemma.as_ref().is_none_or(UnipotentLemmaReport::passed);
    if cfg.json.as_deref() != Some(Path::new("-")) {
        println!(
            "SL({}, 2^{}) ⋊ <τ>: {} elements{}",
            cfg.n,
            cfg.m,
            snap.order(),
            if cache_hit { " (cached)" } else { "" }
        );
        for c in &validation.checks {
            println!("  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        if let Some(r) = &unipotent_lemma {
            println!(
                "  [{}] unipotent lemma ({}): tau {} / u1tau {}, {} rational u1tau classes",
                if r.passed() { "pass" } else { "FAIL" },
                r.geometric_check,
                r.tau_count,
                r.u1_count,
                r.rational_u1_classes
            );
        }
        for f in &validation.families {
            println!("  {:<18} {} G°-classes, {} elements", f.family, f.g0_classes, f.elements);
        }
    }
    emit_json(
        cfg,
        &OracleReport {
            schema_version: SCHEMA_VERSION,
            n: cfg.n,
            m: cfg.m,
            cache_hit,
            group_order: snap.order(),
            validation,
            unipotent_lemma,
            passed,
        },
    )?;
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let (name, args) = match &cli.command {
        Command::Classify(a) => ("classify", a),
        Command::Poset(a) => ("poset", a),
        Command::Strata(a) => ("strata", a),
        Command::Oracle(a) => ("oracle", a),
    };
    let cfg = RunConfig::new(name, args)?;
    match cli.command {
        Command::Classify(_) => classify(&cfg).map(|_| true),
        Command::Poset(_) => cmd_poset(&cfg).map(|_| true),
        Command::Strata(_) => cmd_strata(&cfg).map(|_| true),
        Command::Oracle(_) => cmd_oracle(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Consistency(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
