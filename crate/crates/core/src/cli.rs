//! Command-line front end.
//!
//! Each command produces a list of named output files in memory. They are
//! written under `--out` together with a [`RunManifest`], or printed to
//! stdout when no directory is given. `replay` reruns a manifest and checks
//! every output hash.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{concavity_certificate, sandwich, BoundReport, SandwichConfig, SearchMode};
use crate::error::{domain, Error, Result};
use crate::expanding::{default_levels, det_ratio, waterfill, DoublingStrategy, Figure3Mixture};
use crate::generate::{FamilySpec, Instance};
use crate::manifest::{sha256_hex, RunManifest, MANIFEST_FILE};
use crate::network::{parse_network, MetricNetwork};
use crate::pathwise::{rcpt_optimal_growth, PathwiseDoubling, RcptDoubling};
use crate::profile::RadiusProfile;
use crate::sim::{
    default_candidates, dump_samples_csv, estimate_ratio, solve_small_game, GameConfig,
    RandomizedStrategy, RatioEstimate, SimConfig,
};
use crate::ynet::{literal_reading, y_mixture, y_verify};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "netsearch",
    version,
    about = "Competitive search on rooted metric networks"
)]
pub struct Cli {
    /// Worker threads, 0 for all cores. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Directory for outputs and the run manifest; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Optimal deterministic ratio, radius profile and water-filling schedule.
    Analyze(AnalyzeArgs),
    /// Lower and upper bounds on the randomized search ratio.
    Bounds(BoundsArgs),
    /// Monte-Carlo estimate of a randomized strategy's ratio.
    Simulate(SimulateArgs),
    /// Verify the optimal mixture on a Y-shaped network.
    Ynet(YnetArgs),
    /// Solve the discretized search game on a small network.
    Game(GameArgs),
    /// Rerun a manifest and compare every output byte for byte.
    Replay(ReplayArgs),
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Network file, or a family spec such as `y:1,1`.
    #[arg(long)]
    pub net: Option<String>,

    /// Family spec: `star:m`, `star:m,len`, `y:L,M`, `figure3:n`.
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Doublings probed for unbounded families.
    #[arg(long, default_value_t = 20)]
    pub budget: u32,

    /// Truncation radius for the profile and schedule of a family.
    #[arg(long, default_value_t = 16.0)]
    pub radius: f64,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// `expanding` or `pathwise`.
    #[arg(long, default_value = "expanding")]
    pub mode: String,

    #[arg(long, default_value_t = 12)]
    pub budget: u32,

    /// Coordinate sweeps of the branch-depth search.
    #[arg(long, default_value_t = 4)]
    pub sweeps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    Doubling,
    Figure3Mixture,
    Rcpt,
    PathwiseDoubling,
    YnetMixture,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, value_enum)]
    pub strategy: StrategyName,

    #[arg(long, default_value_t = 10_000)]
    pub n: usize,

    #[arg(long, env = "NETSEARCH_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Interior candidate points per arc.
    #[arg(long, default_value_t = 4)]
    pub grid: usize,

    /// Truncation radius for unbounded families.
    #[arg(long, default_value_t = 16.0)]
    pub radius: f64,

    #[arg(long, allow_hyphen_values = true)]
    pub j_min: Option<i32>,

    #[arg(long, allow_hyphen_values = true)]
    pub j_max: Option<i32>,

    /// Growth factor of the randomized postman tours; defaults to 1+√2.
    #[arg(long)]
    pub r: Option<f64>,

    /// Also write every sample as `samples.csv`.
    #[arg(long)]
    pub dump_samples: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct YnetArgs {
    pub l: f64,
    pub m: f64,

    #[arg(long, default_value_t = 200)]
    pub grid: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct GameArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Longest edge of the discretization.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,

    #[arg(long, default_value_t = 0.02)]
    pub gap: f64,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Named output files of one command.
pub type Files = Vec<(String, Vec<u8>)>;

/// The part of a command line that determines its outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Invocation {
    pub format: Format,
    pub command: Command,
}

/// Outputs of one run. `failure` holds a verification failure detected
/// after the outputs were produced.
#[derive(Debug)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub files: Vec<(String, Vec<u8>)>,
    pub failure: Option<Error>,
}

struct Loaded {
    inst: Instance,
    spec: Option<FamilySpec>,
    sha: String,
}

fn load_input(input: &InputArgs) -> Result<Loaded> {
    let (text, allow_file) = match (&input.net, &input.family) {
        (Some(n), None) => (n.as_str(), true),
        (None, Some(f)) => (f.as_str(), false),
        _ => return domain("give exactly one of --net and --family"),
    };
    if allow_file && Path::new(text).is_file() {
        let bytes = std::fs::read(text)?;
        let net = parse_network(&String::from_utf8_lossy(&bytes))?;
        return Ok(Loaded {
            inst: Instance::Net(net),
            spec: None,
            sha: sha256_hex(&bytes),
        });
    }
    let spec: FamilySpec = text.parse().map_err(|e| match e {
        Error::Parse { msg, .. } if allow_file => Error::Parse {
            line: 0,
            msg: format!("`{text}` is neither a readable file nor a family spec ({msg})"),
        },
        other => other,
    })?;
    let sha = match &spec {
        FamilySpec::File(p) => sha256_hex(&std::fs::read(p)?),
        _ => sha256_hex(text.as_bytes()),
    };
    Ok(Loaded {
        inst: spec.instantiate()?,
        spec: Some(spec),
        sha,
    })
}

/// Rewrites a relative `--net` path as an absolute one so that manifests
/// replay from any directory.
fn canonical_input(input: &mut InputArgs) {
    if let Some(n) = &input.net {
        if let Ok(p) = std::fs::canonicalize(n) {
            if p.is_file() {
                input.net = Some(p.to_string_lossy().into_owned());
            }
        }
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner()
        .map_err(|e| Error::Domain(format!("csv: {e}")))
}

fn bounded(inst: &Instance, radius: f64) -> Result<MetricNetwork> {
    match inst {
        Instance::Net(net) => Ok(net.clone()),
        Instance::Family(f) => {
            if !(radius > 0.0) {
                return domain(format!("radius must be positive, got {radius}"));
            }
            f.ball(radius)
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    bounded: bool,
    sigma: f64,
    argmax_r: f64,
    certified: bool,
    root_degree: usize,
    /// Truncation radius for families; `r_max` otherwise.
    radius: f64,
    total_measure: f64,
    concavity: crate::bounds::ConcavityCertificate,
    breakpoints: Vec<crate::profile::Breakpoint>,
    schedule: Vec<crate::expanding::SegmentJson>,
}

fn analyze(a: &AnalyzeArgs, format: Format, m: &mut RunManifest) -> Result<Files> {
    let loaded = load_input(&a.input)?;
    m.input_sha256 = Some(loaded.sha);
    let det = det_ratio(&loaded.inst, a.budget)?;
    let net = bounded(&loaded.inst, a.radius)?;
    let profile = RadiusProfile::of(&net);
    let sched = waterfill(&net);
    let report = AnalyzeReport {
        bounded: loaded.inst.is_bounded(),
        sigma: det.sigma,
        argmax_r: det.argmax_r,
        certified: det.certified,
        root_degree: net.root_degree(),
        radius: net.r_max(),
        total_measure: net.total_measure(),
        concavity: concavity_certificate(&profile),
        breakpoints: profile.breakpoints().to_vec(),
        schedule: sched.to_json(&net),
    };
    Ok(match format {
        Format::Json => vec![("analyze.json".into(), json_bytes(&report)?)],
        Format::Csv => {
            let bp = report
                .breakpoints
                .iter()
                .map(|b| {
                    let ratio = if b.r > 0.0 { b.f / b.r } else { f64::NAN };
                    vec![
                        b.r.to_string(),
                        b.f.to_string(),
                        b.slope.to_string(),
                        ratio.to_string(),
                    ]
                })
                .collect();
            let sc = report
                .schedule
                .iter()
                .map(|s| {
                    vec![
                        s.phase.to_string(),
                        s.arc.clone(),
                        s.from.to_string(),
                        s.to.to_string(),
                        s.cum_measure.to_string(),
                    ]
                })
                .collect();
            vec![
                (
                    "breakpoints.csv".into(),
                    csv_bytes(&["r", "f", "slope", "f_over_r"], bp)?,
                ),
                (
                    "schedule.csv".into(),
                    csv_bytes(&["phase", "arc", "from", "to", "cum_measure"], sc)?,
                ),
            ]
        }
    })
}

fn bounds_cmd(
    a: &BoundsArgs,
    format: Format,
    m: &mut RunManifest,
) -> Result<(Files, Option<Error>)> {
    let loaded = load_input(&a.input)?;
    m.input_sha256 = Some(loaded.sha);
    let mode: SearchMode = a.mode.parse()?;
    let cfg = SandwichConfig {
        budget: a.budget,
        sweeps: a.sweeps,
    };
    let report: BoundReport = sandwich(&loaded.inst, mode, &cfg)?;
    let files = match format {
        Format::Json => vec![("bounds.json".into(), json_bytes(&report)?)],
        Format::Csv => {
            let mut rows = Vec::new();
            for (side, list) in [("lower", &report.lower), ("upper", &report.upper)] {
                for e in list {
                    rows.push(vec![side.to_string(), e.name.clone(), e.value.to_string()]);
                }
            }
            vec![(
                "bounds.csv".into(),
                csv_bytes(&["side", "name", "value"], rows)?,
            )]
        }
    };
    let failure = (!report.consistent).then(|| {
        Error::Verification(format!(
            "lower bound {} exceeds upper bound {}",
            report.rho_lo, report.rho_hi
        ))
    });
    Ok((files, failure))
}

#[derive(Serialize)]
struct SimulateReport {
    strategy: StrategyName,
    params: serde_json::Value,
    estimate: RatioEstimate,
}

fn simulate(
    a: &SimulateArgs,
    format: Format,
    threads: usize,
    m: &mut RunManifest,
) -> Result<Files> {
    let loaded = load_input(&a.input)?;
    m.input_sha256 = Some(loaded.sha);
    m.seed = Some(a.seed);
    let base = bounded(&loaded.inst, a.radius)?;
    let inst = Instance::Net(base.clone());
    let min_distance = || -> Result<f64> {
        default_candidates(&base, a.grid)?
            .iter()
            .map(|c| c.distance)
            .reduce(f64::min)
            .ok_or_else(|| Error::Domain("no candidate points".into()))
    };
    let levels = || -> Result<(i32, i32)> {
        let (lo, hi) = default_levels(base.r_max(), min_distance()?);
        Ok((a.j_min.unwrap_or(lo), a.j_max.unwrap_or(hi)))
    };
    let (strategy, params): (Box<dyn RandomizedStrategy>, serde_json::Value) = match a.strategy {
        StrategyName::Doubling => {
            let (lo, hi) = levels()?;
            (
                Box::new(DoublingStrategy::new(&inst, lo, hi)?),
                serde_json::json!({ "j_min": lo, "j_max": hi }),
            )
        }
        StrategyName::PathwiseDoubling => {
            let (lo, hi) = levels()?;
            (
                Box::new(PathwiseDoubling::new(&inst, lo, hi)?),
                serde_json::json!({ "j_min": lo, "j_max": hi }),
            )
        }
        StrategyName::Rcpt => {
            let r = a.r.unwrap_or_else(rcpt_optimal_growth);
            if !(r > 1.0) {
                return domain(format!("growth factor must exceed 1, got {r}"));
            }
            let lo = a
                .j_min
                .unwrap_or((min_distance()?.ln() / r.ln()).floor() as i32 - 1);
            let hi = a
                .j_max
                .unwrap_or((base.r_max().ln() / r.ln() - 1e-9).ceil() as i32);
            (
                Box::new(RcptDoubling::new(&inst, r, lo, hi.max(lo))?),
                serde_json::json!({ "r": r, "i_min": lo, "i_max": hi.max(lo) }),
            )
        }
        StrategyName::Figure3Mixture => match loaded.spec {
            Some(FamilySpec::Figure3 { n }) => (
                Box::new(Figure3Mixture::new(n)?),
                serde_json::json!({ "n": n }),
            ),
            _ => return domain("figure3-mixture needs a figure3:n input"),
        },
        StrategyName::YnetMixture => match loaded.spec {
            Some(FamilySpec::Y { l, m }) => {
                let mix = y_mixture(l, m)?;
                let params =
                    serde_json::json!({ "l": l, "m": m, "probabilities": mix.probabilities });
                (Box::new(mix), params)
            }
            _ => return domain("ynet-mixture needs a y:L,M input"),
        },
    };
    let candidates = default_candidates(strategy.network(), a.grid)?;
    let cfg = SimConfig {
        n: a.n,
        seed: a.seed,
        threads,
    };
    let estimate = estimate_ratio(strategy.as_ref(), &candidates, &cfg)?;
    let mut files = Vec::new();
    match format {
        Format::Json => {
            let report = SimulateReport {
                strategy: a.strategy,
                params,
                estimate,
            };
            files.push(("estimate.json".into(), json_bytes(&report)?));
        }
        Format::Csv => {
            let rows = estimate
                .candidates
                .iter()
                .map(|c| {
                    vec![
                        c.label.clone(),
                        c.distance.to_string(),
                        c.mean_time.to_string(),
                        c.ratio.to_string(),
                        c.se.to_string(),
                    ]
                })
                .collect();
            files.push((
                "estimate.csv".into(),
                csv_bytes(&["candidate", "distance", "mean_time", "ratio", "se"], rows)?,
            ));
        }
    }
    if a.dump_samples {
        let mut buf = Vec::new();
        dump_samples_csv(&mut buf, strategy.as_ref(), &candidates, &cfg)?;
        files.push(("samples.csv".into(), buf));
    }
    Ok(files)
}

fn ynet(a: &YnetArgs, format: Format, m: &mut RunManifest) -> Result<Files> {
    m.input_sha256 = Some(sha256_hex(format!("y:{},{}", a.l, a.m).as_bytes()));
    let report = y_verify(a.l, a.m, a.grid)?;
    let literal = literal_reading(a.l, a.m)?;
    Ok(match format {
        Format::Json => vec![(
            "ynet.json".into(),
            json_bytes(&serde_json::json!({ "verify": report, "literal_reading": literal }))?,
        )],
        Format::Csv => {
            let p = &report.params;
            let mut rows = vec![
                vec!["l".into(), p.l.to_string()],
                vec!["m".into(), p.m.to_string()],
                vec!["m_eff".into(), p.m_eff.to_string()],
                vec!["v".into(), p.v.to_string()],
            ];
            for (name, q) in ["p_a", "p_b", "p_c", "p_d"]
                .iter()
                .zip(report.probabilities)
            {
                rows.push(vec![name.to_string(), q.to_string()]);
            }
            rows.push(vec!["certificate".into(), report.certificate.to_string()]);
            rows.push(vec![
                "max_left_error".into(),
                report.max_left_error.to_string(),
            ]);
            rows.push(vec![
                "max_right_error".into(),
                report.max_right_error.to_string(),
            ]);
            vec![("ynet.csv".into(), csv_bytes(&["key", "value"], rows)?)]
        }
    })
}

fn game(a: &GameArgs, format: Format, m: &mut RunManifest) -> Result<Files> {
    let loaded = load_input(&a.input)?;
    m.input_sha256 = Some(loaded.sha);
    let net = match &loaded.inst {
        Instance::Net(net) => net,
        Instance::Family(_) => return domain("the game needs a bounded network"),
    };
    let sol = solve_small_game(net, &GameConfig::new(a.h, a.gap))?;
    Ok(match format {
        Format::Json => vec![("game.json".into(), json_bytes(&sol)?)],
        Format::Csv => {
            let mut rows = Vec::new();
            for (role, mix) in [("hider", &sol.hider), ("searcher", &sol.searcher)] {
                for e in mix {
                    rows.push(vec![
                        role.to_string(),
                        e.strategy.clone(),
                        e.probability.to_string(),
                    ]);
                }
            }
            vec![(
                "game.csv".into(),
                csv_bytes(&["role", "strategy", "probability"], rows)?,
            )]
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze(_) => "analyze",
        Command::Bounds(_) => "bounds",
        Command::Simulate(_) => "simulate",
        Command::Ynet(_) => "ynet",
        Command::Game(_) => "game",
        Command::Replay(_) => "replay",
    }
}

/// Runs one non-replay invocation entirely in memory.
pub fn execute(inv: &Invocation, threads: usize) -> Result<RunOutput> {
    let mut inv = inv.clone();
    match &mut inv.command {
        Command::Analyze(a) => canonical_input(&mut a.input),
        Command::Bounds(a) => canonical_input(&mut a.input),
        Command::Simulate(a) => canonical_input(&mut a.input),
        Command::Game(a) => canonical_input(&mut a.input),
        Command::Ynet(_) => {}
        Command::Replay(_) => return domain("a replay cannot be executed as a run"),
    }
    let mut manifest = RunManifest::new(
        command_name(&inv.command),
        serde_json::to_value(&inv)?,
        threads,
    );
    let mut failure = None;
    let files = match &inv.command {
        Command::Analyze(a) => analyze(a, inv.format, &mut manifest)?,
        Command::Bounds(a) => {
            let (files, f) = bounds_cmd(a, inv.format, &mut manifest)?;
            failure = f;
            files
        }
        Command::Simulate(a) => simulate(a, inv.format, threads, &mut manifest)?,
        Command::Ynet(a) => ynet(a, inv.format, &mut manifest)?,
        Command::Game(a) => game(a, inv.format, &mut manifest)?,
        Command::Replay(_) => unreachable!(),
    };
    manifest.record_outputs(&files);
    Ok(RunOutput {
        manifest,
        files,
        failure,
    })
}

/// Parses command-line arguments (without the program name) and runs them
/// with [`execute`].
pub fn execute_args<S: AsRef<str>>(args: &[S]) -> Result<RunOutput> {
    let argv = std::iter::once("netsearch").chain(args.iter().map(|s| s.as_ref()));
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    let inv = Invocation {
        format: cli.format,
        command: cli.command,
    };
    execute(&inv, cli.threads)
}

#[derive(Debug, Serialize)]
pub struct ReplayReport {
    pub command: String,
    pub identical: Vec<String>,
    pub mismatched: Vec<String>,
}

/// Reruns `manifest` and compares its input and output hashes.
pub fn replay(manifest: &RunManifest, threads: usize) -> Result<(RunOutput, ReplayReport)> {
    let inv: Invocation = serde_json::from_value(manifest.config.clone())?;
    let run = execute(&inv, threads)?;
    if run.manifest.input_sha256 != manifest.input_sha256 {
        return Err(Error::Verification(
            "input differs from the recorded hash".into(),
        ));
    }
    let mismatched = manifest.mismatches(&run.files);
    let identical = run
        .files
        .iter()
        .map(|(n, _)| n.clone())
        .filter(|n| !mismatched.contains(n))
        .collect();
    let report = ReplayReport {
        command: manifest.command.clone(),
        identical,
        mismatched,
    };
    Ok((run, report))
}

fn write_outputs(dir: &Path, run: &RunOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, bytes) in &run.files {
        std::fs::write(dir.join(name), bytes)?;
    }
    std::fs::write(dir.join(MANIFEST_FILE), run.manifest.to_json()?)?;
    Ok(())
}

fn emit(out: Option<&Path>, run: &RunOutput) -> Result<()> {
    match out {
        Some(dir) => write_outputs(dir, run),
        None => {
            let mut stdout = std::io::stdout().lock();
            for (_, bytes) in &run.files {
                stdout.write_all(bytes)?;
            }
            let mut stderr = std::io::stderr().lock();
            writeln!(stderr, "{}", serde_json::to_string(&run.manifest)?)?;
            Ok(())
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::Disconnected(_) | Error::NotTree(_) => {
            EXIT_PARSE
        }
        Error::Verification(_) => EXIT_VERIFICATION,
        Error::Budget(_) => EXIT_BUDGET,
        Error::Domain(_) | Error::Io(_) => EXIT_FAILURE,
    }
}

/// Runs a parsed command line, writing outputs; returns the exit status.
pub fn run(cli: Cli) -> Result<()> {
    if let Command::Replay(r) = &cli.command {
        let recorded = RunManifest::load(&r.manifest)?;
        let (run, report) = replay(&recorded, cli.threads)?;
        if let Some(dir) = &cli.out {
            write_outputs(dir, &run)?;
        }
        println!("{}", serde_json::to_string_pretty(&report)?);
        if !report.mismatched.is_empty() {
            return Err(Error::Verification(format!(
                "outputs differ: {}",
                report.mismatched.join(", ")
            )));
        }
        return run.failure.map_or(Ok(()), Err);
    }
    let inv = Invocation {
        format: cli.format,
        command: cli.command,
    };
    let run = execute(&inv, cli.threads)?;
    emit(cli.out.as_deref(), &run)?;
    run.failure.map_or(Ok(()), Err)
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
