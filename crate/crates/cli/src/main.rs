//! `colearn`: run collaborative learners, search sample budgets, and emit
//! hard instances or dataset partitions.

mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use colearn_core::harness::{
    budget_search, dataset_instance, load_csv, partition, resolve_delta, run_fixed, trial_run,
    write_diagnostics, write_results, BudgetSearchSpec, Dataset, DeltaReading, DiagnosticsRun,
    InstanceSource, Ladder, PartitionSpec, PartitionStrategy, ResultRow, TargetRate,
};
use colearn_core::instances::{
    gen_big_phi, gen_class_dup, gen_phi, gen_psi, read_instance, write_instance, HardInstance,
    InstanceMeta,
};
use colearn_core::learners::{LogBase, SampleSizeProfile, TreeParams};
use colearn_core::mw::{Algorithm, TestMode};
use colearn_core::{Instance, LearnerSpec};

#[derive(Parser, Debug)]
#[command(
    name = "colearn",
    version,
    about = "Collaborative PAC learning experiments"
)]
struct Cli {
    /// Flat `key = value` file with long flag names as keys; command-line flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run algorithms at a fixed budget and print one result row per (algorithm, epsilon).
    #[command(args_override_self = true)]
    Run(RunArgs),
    /// Search the budget ladder for the smallest budget meeting the success target.
    #[command(args_override_self = true)]
    BudgetSearch(SearchArgs),
    /// Write a generated hard instance to an instance file.
    #[command(args_override_self = true)]
    GenInstance(GenArgs),
    /// Partition a CSV dataset among players and write the instance file.
    #[command(args_override_self = true)]
    Partition(PartitionArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GeneratorKind {
    Phi,
    BigPhi,
    Psi,
    ClassDup,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ProfileKind {
    Theory,
    Tuned,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LogBaseArg {
    Natural,
    Two,
}

fn trimmed_f64(s: &str) -> Result<f64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))
}

fn trimmed_algorithm(s: &str) -> Result<Algorithm, String> {
    s.trim()
        .parse()
        .map_err(|e: colearn_core::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
struct GeneratorArgs {
    /// Hard-instance generator.
    #[arg(long, value_enum)]
    generator: Option<GeneratorKind>,
    /// Number of players.
    #[arg(long)]
    k: Option<usize>,
    /// Generator dimension.
    #[arg(long)]
    d: Option<u32>,
    /// Outlier support size for `class-dup`.
    #[arg(long, default_value_t = 20)]
    outlier: u32,
    /// Shared support size for `class-dup`.
    #[arg(long, default_value_t = 20)]
    shared: u32,
}

#[derive(Args, Debug, Clone)]
struct DatasetArgs {
    /// CSV dataset with a header row.
    #[arg(long, value_name = "CSV")]
    dataset: Option<PathBuf>,
    #[arg(long, default_value = "class")]
    label_col: String,
    /// random | class-dup | feature-threshold | feature-grid
    #[arg(long, default_value = "random")]
    partition: String,
    /// Two class tokens for `class-dup`, first is the outlier player.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,
    /// Feature name or index for `feature-threshold`.
    #[arg(long)]
    feature: Option<String>,
    /// Cut for `feature-threshold`; defaults to the median.
    #[arg(long)]
    threshold: Option<f64>,
    /// Two feature names or indices for `feature-grid`.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,
    #[arg(long, default_value_t = 10)]
    tree_depth: usize,
    #[arg(long, default_value_t = 1)]
    min_leaf: usize,
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Instance file from `gen-instance` or `partition`.
    #[arg(long, value_name = "PATH")]
    instance: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Epsilon parameter of the generated distributions; defaults to the first grid value.
    #[arg(long)]
    instance_epsilon: Option<f64>,
    /// Seed for generating or partitioning the instance; defaults to --seed.
    #[arg(long)]
    instance_seed: Option<u64>,
    /// Draw a fresh generated instance for every trial.
    #[arg(long)]
    fresh_instances: bool,
    #[command(flatten)]
    data: DatasetArgs,
}

#[derive(Args, Debug, Clone)]
struct ExperimentArgs {
    /// Comma-separated algorithms: naive, basicmw, mweights.
    #[arg(long, value_delimiter = ',', value_parser = trimmed_algorithm, default_value = "mweights")]
    algo: Vec<Algorithm>,
    /// Comma-separated epsilon grid.
    #[arg(long, value_delimiter = ',', value_parser = trimmed_f64, default_value = "0.1")]
    epsilon: Vec<f64>,
    #[arg(long, default_value_t = 0.9)]
    delta: f64,
    /// literal: --delta is the failure probability; confidence: it is 1 - delta.
    #[arg(long, default_value = "literal")]
    delta_reading: DeltaReading,
    #[arg(long, value_enum, default_value_t = ProfileKind::Tuned)]
    profile: ProfileKind,
    /// Log base of the tuned profile.
    #[arg(long, value_enum, default_value_t = LogBaseArg::Natural)]
    log_base: LogBaseArg,
    /// sampled | exact
    #[arg(long, default_value = "sampled")]
    test_mode: TestMode,
    /// Override the number of rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Seeded trials per configuration.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Success fraction a configuration must reach, e.g. 0.9 or 9/10.
    #[arg(long, default_value = "0.9")]
    target: TargetRate,
    /// Result CSV; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// The `d` handed to the sample-size formula; defaults to the class VC dimension.
    #[arg(long)]
    budget: Option<u64>,
    /// Per-round diagnostics CSV.
    #[arg(long, value_name = "PATH")]
    diagnostics: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long, default_value_t = 1)]
    ladder_start: u64,
    #[arg(long, default_value_t = 1.25)]
    ladder_step: f64,
    #[arg(long, default_value_t = 1 << 20)]
    ladder_max: u64,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

fn main() -> Result<()> {
    let args = config::expand(std::env::args_os().collect::<Vec<OsString>>())?;
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::BudgetSearch(a) => cmd_search(a),
        Command::GenInstance(a) => cmd_gen(a),
        Command::Partition(a) => cmd_partition(a),
    }
}

fn generate(g: &GeneratorArgs, epsilon: f64, seed: u64) -> Result<HardInstance> {
    let Some(kind) = g.generator else {
        bail!("--generator is required");
    };
    let need_k = || g.k.context("--k is required for this generator");
    let need_d = || g.d.context("--d is required for this generator");
    Ok(match kind {
        GeneratorKind::Phi => gen_phi(need_d()?, epsilon, seed)?,
        GeneratorKind::BigPhi => gen_big_phi(need_k()?, need_d()?, epsilon, seed)?,
        GeneratorKind::Psi => gen_psi(need_k()?, need_d()?, epsilon, seed)?,
        GeneratorKind::ClassDup => gen_class_dup(need_k()?, g.outlier, g.shared, seed)?,
    })
}

fn strategy(args: &DatasetArgs, ds: &Dataset) -> Result<PartitionStrategy> {
    let feature = |name: &str| {
        ds.feature_index(name)
            .with_context(|| format!("no feature `{name}`"))
    };
    Ok(match args.partition.parse::<PartitionStrategy>()? {
        PartitionStrategy::ClassDup { .. } => PartitionStrategy::ClassDup {
            classes: match args.classes.as_slice() {
                [] => None,
                [a, b] => Some((a.trim().to_string(), b.trim().to_string())),
                _ => bail!("--classes takes exactly two class tokens"),
            },
        },
        PartitionStrategy::FeatureThreshold { .. } => PartitionStrategy::FeatureThreshold {
            feature: feature(args.feature.as_deref().unwrap_or("0"))?,
            threshold: args.threshold,
        },
        PartitionStrategy::FeatureGrid { .. } => PartitionStrategy::FeatureGrid {
            features: match args.features.as_slice() {
                [] => (0, 1),
                [a, b] => (feature(a.trim())?, feature(b.trim())?),
                _ => bail!("--features takes exactly two features"),
            },
        },
        other => other,
    })
}

fn tree(args: &DatasetArgs) -> TreeParams {
    TreeParams {
        max_depth: args.tree_depth,
        min_leaf: args.min_leaf,
    }
}

fn dataset_id(path: &Path, strategy: &PartitionStrategy, k: usize) -> String {
    let stem = path
        .file_stem()
        .map_or("dataset".into(), |s| s.to_string_lossy().into_owned());
    format!("{stem}-{strategy}-k{k}")
}

fn instance_source(args: &InstanceArgs, seed: u64, epsilons: &[f64]) -> Result<InstanceSource> {
    let sources = [
        args.instance.is_some(),
        args.generator.generator.is_some(),
        args.data.dataset.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        bail!("give exactly one of --instance, --generator or --dataset");
    }
    let instance_seed = args.instance_seed.unwrap_or(seed);
    if let Some(path) = &args.instance {
        let (instance, _) = read_instance(path)?;
        return Ok(InstanceSource::fixed(instance));
    }
    if args.generator.generator.is_some() {
        let epsilon = args.instance_epsilon.unwrap_or(epsilons[0]);
        let g = args.generator.clone();
        if args.fresh_instances {
            let probe = generate(&g, epsilon, instance_seed)?;
            let id = probe
                .id()
                .rsplit_once("-s")
                .map_or(probe.id(), |(p, _)| p.to_string());
            return Ok(InstanceSource::generated(id, move |s| {
                generate(&g, epsilon, s)
                    .map(|h| h.to_instance())
                    .map_err(|e| colearn_core::Error::Precondition(e.to_string()))
            }));
        }
        return Ok(InstanceSource::fixed(
            generate(&g, epsilon, instance_seed)?.to_instance(),
        ));
    }
    let path = args.data.dataset.as_ref().expect("checked above");
    let k = args.generator.k.context("--k is required with --dataset")?;
    let ds = load_csv(path, &args.data.label_col)?;
    let strategy = strategy(&args.data, &ds)?;
    let spec = PartitionSpec {
        strategy: strategy.clone(),
        k,
    };
    let parts = partition(&ds, &spec, instance_seed)?;
    let instance = dataset_instance(dataset_id(path, &strategy, k), &parts, tree(&args.data))?;
    Ok(InstanceSource::fixed(instance))
}

fn search_spec(
    e: &ExperimentArgs,
    default_runs: usize,
    ladder: Ladder,
) -> Result<BudgetSearchSpec> {
    let profile = match e.profile {
        ProfileKind::Theory => SampleSizeProfile::default(),
        ProfileKind::Tuned => SampleSizeProfile::Tuned {
            log_base: match e.log_base {
                LogBaseArg::Natural => LogBase::Natural,
                LogBaseArg::Two => LogBase::Two,
            },
        },
    };
    let spec = BudgetSearchSpec {
        epsilons: e.epsilon.clone(),
        runs: e.runs.unwrap_or(default_runs),
        target: e.target,
        ladder,
        delta: resolve_delta(e.delta, e.delta_reading)?,
        profile,
        test_mode: e.test_mode,
        rounds_override: e.rounds,
        seed: e.seed,
    };
    spec.validate()?;
    Ok(spec)
}

fn emit(rows: &[ResultRow], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_results(rows, std::io::BufWriter::new(file))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_results(rows, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn default_budget(instance: &Instance) -> Result<u64> {
    match &instance.learner {
        LearnerSpec::Erm(class) => Ok(class.vc_dim()),
        _ => bail!("--budget is required for tree-learned instances"),
    }
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let spec = search_spec(&a.experiment, 1, Ladder::default())?;
    let source = instance_source(&a.instance, spec.seed, &spec.epsilons)?;
    let budget = match a.budget {
        Some(b) => b,
        None => default_budget(source.instance(spec.seed)?.as_ref())?,
    };
    let mut rows = Vec::new();
    for &algorithm in &a.experiment.algo {
        for &epsilon in &spec.epsilons {
            rows.push(run_fixed(&source, algorithm, epsilon, budget, &spec)?);
        }
    }
    if let Some(path) = &a.diagnostics {
        let mut runs = Vec::new();
        for &algorithm in &a.experiment.algo {
            for &epsilon in &spec.epsilons {
                for j in 0..spec.runs as u64 {
                    let (_, result) = trial_run(&source, algorithm, epsilon, budget, &spec, j)?;
                    runs.push((algorithm, epsilon, j, result.diagnostics));
                }
            }
        }
        let labeled: Vec<DiagnosticsRun> = runs
            .iter()
            .map(|(algorithm, epsilon, run, rounds)| DiagnosticsRun {
                algorithm: *algorithm,
                epsilon: *epsilon,
                run: *run,
                rounds,
            })
            .collect();
        let file =
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_diagnostics(&labeled, std::io::BufWriter::new(file))?;
    }
    emit(&rows, a.experiment.out.as_deref())
}

fn cmd_search(a: SearchArgs) -> Result<()> {
    let ladder = Ladder {
        start: a.ladder_start,
        step: a.ladder_step,
        max: a.ladder_max,
    };
    let spec = search_spec(&a.experiment, 100, ladder)?;
    let source = instance_source(&a.instance, spec.seed, &spec.epsilons)?;
    let mut rows = Vec::new();
    for &algorithm in &a.experiment.algo {
        let found = budget_search(&source, algorithm, &spec)?;
        for r in &found {
            eprintln!(
                "{} {} eps={} budget={}",
                r.instance,
                r.algorithm,
                r.epsilon,
                r.budget.map_or("not-found".into(), |b| b.to_string())
            );
        }
        rows.extend(found);
    }
    emit(&rows, a.experiment.out.as_deref())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let h = generate(&a.generator, a.epsilon, a.seed)?;
    write_instance(&a.out, &h.to_instance(), &h.meta())?;
    eprintln!(
        "wrote {} ({} players) to {}",
        h.id(),
        h.k(),
        a.out.display()
    );
    Ok(())
}

fn cmd_partition(a: PartitionArgs) -> Result<()> {
    let path = a.data.dataset.as_ref().context("--dataset is required")?;
    let ds = load_csv(path, &a.data.label_col)?;
    let strategy = strategy(&a.data, &ds)?;
    let spec = PartitionSpec {
        strategy: strategy.clone(),
        k: a.k,
    };
    let parts = partition(&ds, &spec, a.seed)?;
    let players = parts.point_masses(&ds)?;
    let instance = Instance::new(
        dataset_id(path, &strategy, a.k),
        players,
        LearnerSpec::Tree(tree(&a.data)),
    )?;
    let file_name = path
        .file_name()
        .map_or(String::new(), |s| s.to_string_lossy().into_owned());
    let meta = InstanceMeta {
        generator: format!("partition-{strategy}"),
        seed: a.seed,
        params: vec![
            ("dataset".into(), file_name),
            ("label-col".into(), a.data.label_col.clone()),
            ("rows".into(), ds.len().to_string()),
        ],
        ..Default::default()
    };
    write_instance(&a.out, &instance, &meta)?;
    eprintln!(
        "wrote {} players over {} backing rows to {}",
        a.k,
        parts.backing_rows(),
        a.out.display()
    );
    Ok(())
}
