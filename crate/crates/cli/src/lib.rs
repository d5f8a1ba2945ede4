//! Command-line front end: reads `.mbd`/`.obs` files, runs a diagnosis engine,
//! generates benchmark instances and writes statistics as CSV.

pub mod grid;
pub mod stats;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mbdiag_core::benchgen::{encode_netlist, gen_buggy_encoder, gen_c17, EncoderParams, Netlist};
use mbdiag_core::engines::{
    aggregated_enumerate, ihsd_enumerate, separate_enumerate, EngineConfig, Outcome, RunStats,
};
use mbdiag_core::format::{parse_mbd, parse_obs, write_mbd, write_obs};
use mbdiag_core::hitting_set::Minimality;
use mbdiag_core::mbd::{
    aggregate_size, ComponentId, ComponentSet, ConsistencyChecker, Diagnosis, Family, MbdError, Observation,
    SystemDescription,
};
use mbdiag_core::par::{self, Execution};

use grid::Grid;
use stats::{write_stats, StatsRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BUDGET: i32 = 10;
pub const EXIT_NO_DIAGNOSIS: i32 = 20;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

const DEFAULT_TIMEOUT: &str = "600";

#[derive(Debug, Parser)]
#[command(name = "mbdiag", version, about = "Model-based diagnosis of multiple failing observations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute diagnoses; one line of sorted component ids per diagnosis.
    Diagnose(DiagnoseArgs),
    /// Write benchmark instances as `.mbd` and `.obs` files.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Check whether a component set is a minimal diagnosis.
    Check(CheckArgs),
    /// Run engines over a grid of buggy-encoder instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Ihsd,
    Aggregated,
    Separate,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Ihsd => "ihsd",
            EngineKind::Aggregated => "aggregated",
            EngineKind::Separate => "separate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MinimalityArg {
    Subset,
    Cardinality,
}

impl From<MinimalityArg> for Minimality {
    fn from(m: MinimalityArg) -> Minimality {
        match m {
            MinimalityArg::Subset => Minimality::Subset,
            MinimalityArg::Cardinality => Minimality::Cardinality,
        }
    }
}

#[derive(Debug, Args)]
struct RunOptions {
    #[arg(long, value_enum, default_value = "subset")]
    minimality: MinimalityArg,
    /// Stop after K diagnoses.
    #[arg(long = "max-diags", value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    max_diags: Option<u64>,
    /// Time budget per run, in seconds.
    #[arg(long, value_name = "S", default_value = DEFAULT_TIMEOUT)]
    timeout: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Give up after this many explanations (hitting-set engine only).
    #[arg(long = "max-explanations", value_name = "N")]
    max_explanations: Option<usize>,
    /// Disable data-parallel work.
    #[arg(long)]
    sequential: bool,
}

impl RunOptions {
    fn config(&self) -> Result<EngineConfig, CliError> {
        if self.timeout.is_nan() || self.timeout <= 0.0 || !self.timeout.is_finite() {
            return Err(CliError::Usage(format!("timeout must be positive, got {}", self.timeout)));
        }
        Ok(EngineConfig {
            mode: self.minimality.into(),
            max_diagnoses: self.max_diags.map(|k| k as usize),
            time_budget: Some(Duration::from_secs_f64(self.timeout)),
            seed: self.seed,
            max_explanations: self.max_explanations,
            execution: if self.sequential { Execution::Sequential } else { Execution::default() },
        })
    }
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[arg(long, value_enum, default_value = "ihsd")]
    engine: EngineKind,
    #[command(flatten)]
    run: RunOptions,
    /// Write a one-row statistics CSV here.
    #[arg(long, value_name = "FILE")]
    stats: Option<PathBuf>,
    system: PathBuf,
    observations: PathBuf,
}

#[derive(Debug, Subcommand)]
enum GenerateCommand {
    /// The buggy-encoder family.
    Encoder {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[arg(long = "pad-hard", default_value_t = 0)]
        pad_hard: u32,
        #[arg(long = "pad-soft", default_value_t = 0)]
        pad_soft: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out", value_name = "DIR")]
        out: PathBuf,
    },
    /// The C17 circuit with its five failing observations.
    C17 {
        #[arg(short = 'o', long = "out", value_name = "DIR")]
        out: PathBuf,
    },
    /// Encode a gate netlist (system file only).
    Netlist {
        file: PathBuf,
        #[arg(short = 'o', long = "out", value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    system: PathBuf,
    observations: PathBuf,
    /// Components as names or ids, e.g. "c3,c7" or "f41 f42".
    #[arg(long, allow_hyphen_values = true)]
    delta: String,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// `full` or `r=LIST;k=LIST` with items `N`, `A..B` or `A..B/STEP`.
    #[arg(long)]
    grid: String,
    #[arg(long, value_name = "FILE")]
    stats: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ihsd")]
    engines: Vec<EngineKind>,
    #[command(flatten)]
    run: RunOptions,
    /// Run grid points concurrently (timings then share the machine).
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<MbdError> for CliError {
    fn from(e: MbdError) -> CliError {
        match e {
            MbdError::UnknownVariable { .. } | MbdError::ContradictoryObservation { .. } => {
                CliError::Parse(e.to_string())
            }
            MbdError::UnknownComponent(_) | MbdError::UnknownObservation(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> CliError {
    CliError::Failure(format!("{}: {e}", path.display()))
}

/// Runs the tool with process stdout and stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the tool, writing results to `out` and messages to `err`; returns the exit code.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::Diagnose(a) => diagnose(&a, out, err),
        Command::Generate(g) => generate(&g, out),
        Command::Check(a) => check(&a, out),
        Command::Bench(a) => bench(&a, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "mbdiag: {}", e.message());
            e.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(system: &Path, observations: &Path) -> Result<(SystemDescription, Vec<Observation>), CliError> {
    let sd = parse_mbd(&read_file(system)?).map_err(|e| CliError::Parse(format!("{}: {e}", system.display())))?;
    let obs = parse_obs(&read_file(observations)?, sd.num_system_vars())
        .map_err(|e| CliError::Parse(format!("{}: {e}", observations.display())))?;
    Ok((sd, obs))
}

/// Everything a single engine run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub diagnoses: Vec<Diagnosis>,
    pub stats: RunStats,
    pub vars: u64,
    pub clauses: u64,
    pub exhausted: bool,
    pub percent_enumerated: Option<f64>,
}

fn encoder_params(sd: &SystemDescription) -> Option<EncoderParams> {
    sd.family.map(|Family::BuggyEncoder { r, k }| EncoderParams::new(r, k))
}

/// Runs one engine and gathers the figures reported in the statistics CSV.
pub fn run_engine(
    engine: EngineKind,
    sd: &SystemDescription,
    observations: &[Observation],
    config: &EngineConfig,
) -> Result<RunSummary, MbdError> {
    let mut diagnoses = Vec::new();
    let sink = |d: &Diagnosis| diagnoses.push(d.clone());
    let (mut vars, mut clauses) = (sd.num_vars() as u64, sd.num_clauses() as u64);
    let mut percent = None;
    let mut exhausted;
    let stats = match engine {
        EngineKind::Ihsd => {
            let report = ihsd_enumerate(sd, observations, config, sink)?;
            exhausted = matches!(report.stats.outcome, Outcome::Complete | Outcome::NoDiagnosis);
            report.stats
        }
        EngineKind::Aggregated => {
            (vars, clauses) = aggregate_size(sd, observations);
            let stats = aggregated_enumerate(sd, observations, config, sink)?;
            exhausted = matches!(stats.outcome, Outcome::Complete | Outcome::NoDiagnosis);
            stats
        }
        EngineKind::Separate => {
            let report = separate_enumerate(sd, observations, config, sink)?;
            exhausted = report.all_exhausted();
            let found: usize = report.per_obs.iter().map(|o| o.diagnoses.len()).sum();
            let family_total = encoder_params(sd)
                .filter(|p| p.r as usize == observations.len())
                .map(|p| p.per_observation_total());
            percent = match family_total {
                Some(total) => Some((100.0 * found as f64 / total).min(100.0)),
                None if exhausted => Some(100.0),
                None => None,
            };
            exhausted &= report.stats.outcome != Outcome::BudgetExhausted;
            report.stats
        }
    };
    Ok(RunSummary {
        diagnoses,
        stats,
        vars,
        clauses,
        exhausted,
        percent_enumerated: percent,
    })
}

fn record(instance: &str, engine: EngineKind, sd: &SystemDescription, run: &RunSummary) -> StatsRecord {
    let family = encoder_params(sd);
    StatsRecord {
        instance: instance.to_string(),
        engine: engine.name().to_string(),
        r: family.map(|p| p.r),
        k: family.map(|p| p.k),
        vars: run.vars,
        clauses: run.clauses,
        diagnoses: run.stats.diagnoses_emitted as u64,
        explanations: run.stats.explanations_found as u64,
        sat_calls: run.stats.sat_calls,
        elapsed_s: run.stats.elapsed_seconds,
        exhausted: run.exhausted,
        percent_enumerated: run.percent_enumerated,
    }
}

fn save_stats(path: &Path, records: &[StatsRecord]) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
    write_stats(io::BufWriter::new(file), records).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

/// Sorted by size, then lexicographically, without duplicates.
fn canonical(mut diagnoses: Vec<Diagnosis>) -> Vec<Diagnosis> {
    diagnoses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    diagnoses.dedup();
    diagnoses
}

fn diagnose(a: &DiagnoseArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let config = a.run.config()?;
    let (sd, obs) = load(&a.system, &a.observations)?;
    let run = run_engine(a.engine, &sd, &obs, &config)?;
    for d in canonical(run.diagnoses.clone()) {
        writeln!(out, "{d}").map_err(|e| CliError::Failure(e.to_string()))?;
    }
    let outcome = run.stats.outcome;
    if a.engine == EngineKind::Separate && outcome == Outcome::BudgetExhausted {
        let _ = writeln!(
            err,
            "WARNING: per-observation enumeration did not finish; no assembled result is sound, none reported"
        );
    }
    let _ = writeln!(
        err,
        "c outcome {} diagnoses {} explanations {} sat_calls {} elapsed {:.3}s",
        outcome.as_str(),
        run.stats.diagnoses_emitted,
        run.stats.explanations_found,
        run.stats.sat_calls,
        run.stats.elapsed_seconds
    );
    if let Some(path) = &a.stats {
        let instance = a.system.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        save_stats(path, &[record(&instance, a.engine, &sd, &run)])?;
    }
    Ok(outcome.exit_code())
}

fn write_instance(dir: &Path, stem: &str, sd: &SystemDescription, obs: Option<&[Observation]>) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let mut written = Vec::new();
    let sys = dir.join(format!("{stem}.mbd"));
    fs::write(&sys, write_mbd(sd)).map_err(|e| io_failure(&sys, e))?;
    written.push(sys);
    if let Some(obs) = obs {
        let path = dir.join(format!("{stem}.obs"));
        fs::write(&path, write_obs(obs)).map_err(|e| io_failure(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

pub fn encoder_instance_name(r: u32, k: u32) -> String {
    format!("encoder_r{r}_k{k}")
}

fn generate(g: &GenerateCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    let written = match g {
        GenerateCommand::Encoder {
            r,
            k,
            pad_hard,
            pad_soft,
            seed,
            out: dir,
        } => {
            if *r < 2 || *k < 1 {
                return Err(CliError::Usage("the encoder family needs --r >= 2 and --k >= 1".into()));
            }
            let params = EncoderParams {
                r: *r,
                k: *k,
                padding_hard: *pad_hard,
                padding_soft: *pad_soft,
                seed: *seed,
            };
            let (sd, obs) = gen_buggy_encoder(&params);
            write_instance(dir, &encoder_instance_name(*r, *k), &sd, Some(&obs))?
        }
        GenerateCommand::C17 { out: dir } => {
            let (sd, obs) = gen_c17();
            write_instance(dir, "c17", &sd, Some(&obs))?
        }
        GenerateCommand::Netlist { file, out: dir } => {
            let net = Netlist::parse(&read_file(file)?).map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
            let sd = encode_netlist(&net).map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
            let stem = file.file_stem().map_or_else(|| "netlist".into(), |s| s.to_string_lossy().into_owned());
            write_instance(dir, &stem, &sd, None)?
        }
    };
    for p in written {
        writeln!(out, "{}", p.display()).map_err(|e| CliError::Failure(e.to_string()))?;
    }
    Ok(EXIT_OK)
}

/// Resolves component names first, then `cN` or plain ids.
fn parse_delta(sd: &SystemDescription, text: &str) -> Result<ComponentSet, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|token| {
            if let Some(c) = sd.component_by_name(token) {
                return Ok(c);
            }
            let digits = token.strip_prefix('c').unwrap_or(token);
            match digits.parse::<u32>() {
                Ok(id) if id >= 1 && sd.contains_component(ComponentId::new(id)) => Ok(ComponentId::new(id)),
                _ => Err(CliError::Usage(format!("unknown component '{token}'"))),
            }
        })
        .collect()
}

fn check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (sd, obs) = load(&a.system, &a.observations)?;
    let delta = parse_delta(&sd, &a.delta)?;
    let mut checker = ConsistencyChecker::new(&sd);
    let mut valid = true;
    for o in &obs {
        if !checker.is_consistent(&delta, o)? {
            valid = false;
            break;
        }
    }
    let (verdict, code) = if !valid {
        ("INVALID", EXIT_FAILURE)
    } else if checker.verify_diagnosis(&delta, &obs)? {
        ("VALID MINIMAL", EXIT_OK)
    } else {
        ("VALID NOT-MINIMAL", EXIT_FAILURE)
    };
    writeln!(out, "{verdict}").map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(code)
}

fn bench(a: &BenchArgs, err: &mut dyn Write) -> Result<i32, CliError> {
    let config = a.run.config()?;
    let grid = Grid::parse(&a.grid).map_err(|e| CliError::Usage(e.to_string()))?;
    let jobs: Vec<(u32, u32, EngineKind)> = grid
        .points()
        .into_iter()
        .flat_map(|(r, k)| a.engines.iter().map(move |&e| (r, k, e)))
        .collect();
    let exec = if a.parallel { Execution::default() } else { Execution::Sequential };
    let results = par::map(exec, &jobs, |&(r, k, engine)| {
        let (sd, obs) = gen_buggy_encoder(&EncoderParams::new(r, k));
        let run = run_engine(engine, &sd, &obs, &config)?;
        log::info!(
            "{} {}: {} in {:.3}s",
            encoder_instance_name(r, k),
            engine.name(),
            run.stats.outcome.as_str(),
            run.stats.elapsed_seconds
        );
        Ok::<_, MbdError>(record(&encoder_instance_name(r, k), engine, &sd, &run))
    });
    let records: Vec<StatsRecord> = results.into_iter().collect::<Result<_, _>>()?;
    let solved = records.iter().filter(|r| r.exhausted).count();
    let _ = writeln!(err, "c {} runs, {} finished within budget", records.len(), solved);
    save_stats(&a.stats, &records)?;
    Ok(EXIT_OK)
}
