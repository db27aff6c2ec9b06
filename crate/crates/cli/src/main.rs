//! `softnet`: build level- or reticulation-minimal networks from clusters.
//!
//! Exit codes: 0 found (or check passed), 1 no network within the limit
//! (or check failed), 2 inconclusive, 3 input error, 4 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use softnet::assembly::{minimize, MinimizeReport, MinimizeStatus, Mode};
use softnet::generators::{GeneratorCache, GeneratorKind, DEFAULT_PARAMETER_LIMIT};
use softnet::network::parse_enewick_shared;
use softnet::oracle::{count_completions, oracle_min_level, oracle_min_reticulation, OracleConfig};
use softnet::random::{random_instance, RandomParams};
use softnet::solver::{SolverConfig, DEFAULT_BRANCH_CAP};
use softnet::{ClusterSet, Format, Network};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "softnet", version, about = "Minimum level and reticulation networks representing a set of clusters")]
struct Cli {
    /// Same inputs give byte-identical outputs (drops timings from reports).
    #[arg(long, global = true, env = "SOFTNET_DETERMINISTIC")]
    deterministic: bool,
    /// Worker threads for independent components.
    #[arg(long, global = true, default_value_t = 1, env = "SOFTNET_JOBS")]
    jobs: usize,
    /// JSON file memoizing enumerated generators between runs.
    #[arg(long, global = true, env = "SOFTNET_GENERATOR_CACHE")]
    generator_cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the smallest level or reticulation number and a witness.
    Solve(SolveArgs),
    /// Does a network represent every cluster of a file?
    Check {
        network: PathBuf,
        clusters: PathBuf,
    },
    /// Union of the clusters of rooted trees given in Newick, one per line.
    ClustersFromTrees {
        trees: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random binary network and its softwired clusters.
    RandomInstance(RandomArgs),
    /// List the level-k or r-reticulation generators.
    EnumerateGenerators {
        #[arg(long, value_enum, default_value_t = KindArg::Level)]
        kind: KindArg,
        #[arg(long)]
        parameter: usize,
        #[arg(long, value_enum, default_value_t = GeneratorFormat::Json)]
        format: GeneratorFormat,
    },
    /// Exhaustive minimum for small inputs.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, conflicts_with = "reticulation")]
    level: bool,
    #[arg(long)]
    reticulation: bool,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        if self.reticulation {
            Mode::Reticulation
        } else {
            Mode::Level
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    clusters: PathBuf,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, default_value_t = DEFAULT_PARAMETER_LIMIT, env = "SOFTNET_MAX_PARAMETER")]
    max_parameter: usize,
    #[arg(long, default_value_t = DEFAULT_BRANCH_CAP, env = "SOFTNET_BRANCH_CAP")]
    branch_cap: u64,
    /// Witness format on stdout; `json` prints the full report instead.
    #[arg(long, value_enum, default_value_t = OutFormat::Enewick, env = "SOFTNET_FORMAT")]
    format: OutFormat,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    taxa: usize,
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Total reticulations; defaults to the level.
    #[arg(long)]
    max_reticulations: Option<usize>,
    #[arg(long, default_value_t = 0, env = "SOFTNET_SEED")]
    seed: u64,
    #[arg(long)]
    network_out: Option<PathBuf>,
    #[arg(long)]
    clusters_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Enewick)]
    format: OutFormat,
}

#[derive(Args)]
struct OracleArgs {
    /// Required unless `--pin-counts` is given.
    clusters: Option<PathBuf>,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, default_value_t = 2, env = "SOFTNET_MAX_PARAMETER")]
    max_parameter: usize,
    /// Print completion counts per generator as regression constants.
    #[arg(long)]
    pin_counts: bool,
    /// Largest taxon count for `--pin-counts`.
    #[arg(long, default_value_t = 4)]
    pin_taxa: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Enewick,
    Dot,
    Json,
}

impl OutFormat {
    fn network(self) -> Format {
        match self {
            OutFormat::Enewick => Format::ENewick,
            OutFormat::Dot => Format::Dot,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Level,
    Reticulation,
}

impl From<KindArg> for GeneratorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Level => GeneratorKind::Level,
            KindArg::Reticulation => GeneratorKind::Reticulation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorFormat {
    Json,
    Dot,
}

/// Errors carry the exit code they map to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 3,
        error: error.into(),
    }
}

fn internal(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 4,
        error: error.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.generator_cache.is_some() {
        GeneratorCache::init_global(cli.generator_cache.clone());
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Solve(args) => solve(cli, args),
        Command::Check { network, clusters } => check(network, clusters),
        Command::ClustersFromTrees { trees, output } => clusters_from_trees(trees, output.as_deref()),
        Command::RandomInstance(args) => random(args),
        Command::EnumerateGenerators {
            kind,
            parameter,
            format,
        } => enumerate_generators((*kind).into(), *parameter, *format),
        Command::Oracle(args) => oracle(args),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(internal),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn read_clusters(path: &Path) -> Result<ClusterSet, Failure> {
    let text = read(path)?;
    ClusterSet::parse(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(input)
}

fn read_network(path: &Path) -> Result<Network, Failure> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        Network::from_json(&text)
    } else {
        Network::from_enewick(&text)
    };
    parsed.with_context(|| format!("in {}", path.display())).map_err(input)
}

fn solve(cli: &Cli, args: &SolveArgs) -> Result<u8, Failure> {
    let cs = read_clusters(&args.clusters)?;
    if args.max_parameter > DEFAULT_PARAMETER_LIMIT {
        return Err(input(anyhow!(
            "--max-parameter {} exceeds the generator limit {}",
            args.max_parameter,
            DEFAULT_PARAMETER_LIMIT
        )));
    }
    let config = SolverConfig {
        branch_cap: args.branch_cap,
        parameter_limit: args.max_parameter,
        jobs: cli.jobs.max(1),
    };
    let start = Instant::now();
    let report = minimize(&cs, args.mode.mode(), &config).map_err(internal)?;
    let elapsed = start.elapsed();
    let mut json = report_json(&report, &cs);
    if !cli.deterministic {
        json["elapsed_ms"] = json!(elapsed.as_millis() as u64);
    }
    let json_text = serde_json::to_string_pretty(&json).expect("report serializes") + "\n";
    if let Some(path) = &args.report {
        write_or_print(Some(path), &json_text)?;
    }
    match (args.format, &report.witness) {
        (OutFormat::Json, _) => write_or_print(None, &json_text)?,
        (f, Some(w)) => write_or_print(None, &w.serialize(f.network()))?,
        (_, None) => {}
    }
    let summary = match report.parameter {
        Some(p) => format!("{:?} {p}", report.mode),
        None => format!("no network up to {}", args.max_parameter),
    };
    eprintln!("{} ({:?})", summary.to_lowercase(), report.status);
    Ok(match report.status {
        MinimizeStatus::Found => 0,
        MinimizeStatus::RefutedUpToLimit => 1,
        MinimizeStatus::Inconclusive => 2,
    })
}

fn report_json(report: &MinimizeReport, cs: &ClusterSet) -> Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["exact"] = json!(report.is_exact());
    v["taxa"] = json!(cs.n());
    v["clusters"] = json!(cs.len());
    v["witness"] = match &report.witness {
        Some(w) => json!(w.to_enewick()),
        None => Value::Null,
    };
    v
}

fn check(network: &Path, clusters: &Path) -> Result<u8, Failure> {
    let net = read_network(network)?;
    let cs = read_clusters(clusters)?;
    let net = net
        .with_universe(cs.universe())
        .context("network and cluster file disagree on the taxa")
        .map_err(input)?;
    let missing = net.unrepresented(&cs);
    for c in &missing {
        println!("missing {}", cs.format(c));
    }
    if missing.is_empty() {
        println!("represents all {} clusters", cs.len());
        Ok(0)
    } else {
        Ok(1)
    }
}

fn clusters_from_trees(trees: &Path, output: Option<&Path>) -> Result<u8, Failure> {
    let text = read(trees)?;
    let nets = parse_enewick_shared(&text)
        .with_context(|| format!("in {}", trees.display()))
        .map_err(input)?;
    if nets.is_empty() {
        return Err(input(anyhow!("{} holds no trees", trees.display())));
    }
    let mut clusters = Vec::new();
    for (i, t) in nets.iter().enumerate() {
        if !t.is_tree() {
            return Err(input(anyhow!("entry {} is not a tree", i + 1)));
        }
        clusters.extend(t.softwired_clusters().clusters().iter().cloned());
    }
    let universe = nets[0].universe().clone();
    let cs = ClusterSet::new(universe, clusters).map_err(input)?;
    write_or_print(output, &cs.to_text())?;
    Ok(0)
}

fn random(args: &RandomArgs) -> Result<u8, Failure> {
    let mut params = RandomParams::new(args.taxa, args.level);
    if let Some(r) = args.max_reticulations {
        params.max_reticulations = r;
    }
    let (net, cs) = random_instance(&params, args.seed).map_err(input)?;
    write_or_print(args.network_out.as_deref(), &net.serialize(args.format.network()))?;
    write_or_print(args.clusters_out.as_deref(), &cs.to_text())?;
    Ok(0)
}

fn enumerate_generators(kind: GeneratorKind, parameter: usize, format: GeneratorFormat) -> Result<u8, Failure> {
    let list = GeneratorCache::global()
        .get(kind, parameter, DEFAULT_PARAMETER_LIMIT)
        .map_err(input)?;
    let text = match format {
        GeneratorFormat::Json => {
            let items: Vec<Value> = list
                .iter()
                .map(|g| serde_json::from_str(&g.to_json()).expect("generator json"))
                .collect();
            serde_json::to_string_pretty(&items).expect("json") + "\n"
        }
        GeneratorFormat::Dot => list.iter().map(|g| g.to_dot()).collect(),
    };
    write_or_print(None, &text)?;
    eprintln!("{} generators", list.len());
    Ok(0)
}

fn oracle(args: &OracleArgs) -> Result<u8, Failure> {
    if args.pin_counts {
        let mut rows = Vec::new();
        for kind in [GeneratorKind::Level, GeneratorKind::Reticulation] {
            for k in 1..=args.max_parameter {
                let list = GeneratorCache::global()
                    .get(kind, k, DEFAULT_PARAMETER_LIMIT)
                    .map_err(input)?;
                for (i, g) in list.iter().enumerate() {
                    let counts: Vec<u64> = (1..=args.pin_taxa).map(|n| count_completions(g, n)).collect();
                    rows.push(json!({"kind": kind, "parameter": k, "generator": i, "completions": counts}));
                }
            }
        }
        let out = json!({"schema_version": SCHEMA_VERSION, "taxa": (1..=args.pin_taxa).collect::<Vec<_>>(), "counts": rows});
        write_or_print(None, &(serde_json::to_string_pretty(&out).expect("json") + "\n"))?;
        return Ok(0);
    }
    let path = args
        .clusters
        .as_deref()
        .ok_or_else(|| input(anyhow!("a cluster file is required")))?;
    let cs = read_clusters(path)?;
    let config = OracleConfig::default();
    let mode = args.mode.mode();
    let result = match mode {
        Mode::Level => oracle_min_level(&cs, args.max_parameter, &config),
        Mode::Reticulation => oracle_min_reticulation(&cs, args.max_parameter, &config),
    }
    .map_err(input)?;
    let mut v = serde_json::to_value(&result).expect("json");
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["mode"] = json!(mode);
    write_or_print(None, &(serde_json::to_string_pretty(&v).expect("json") + "\n"))?;
    Ok(if result.minimum.is_some() { 0 } else { 1 })
}
