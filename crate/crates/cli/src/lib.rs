//! Implementation of the `capacity` command line tool: channel loading,
//! solver orchestration, report formatting, and exit-code policy.
//!
//! Exit codes: 0 converged, 1 error, 2 not converged, 3 lockstep violation
//! (the `--algorithm all` regression tripwire).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use alphacap::solver::{solve, solve_all, InitPolicy, SolveResult, SolverConfig};
use alphacap::verify::{capacity_oracle, GridSpec};
use alphacap::{channels, Channel, Distribution, ObjectiveKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_LOCKSTEP_VIOLATION: i32 = 3;

/// Lockstep tolerance for the `all` tripwire.
pub const LOCKSTEP_TOL: f64 = 1e-9;

/// Environment variable raising the oracle's simplex-grid dimension guard.
pub const MAX_GRID_DIM_ENV: &str = "CAPACITY_MAX_GRID_DIM";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{col}: {msg}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unknown builtin or missing file: {0}")]
    UnknownBuiltin(String),
    #[error("invalid init spec {0:?}: expected uniform, random, or a readable weights file")]
    BadInit(String),
    #[error("channel {path}: {source}")]
    InvalidChannel {
        path: String,
        source: alphacap::Error,
    },
    #[error(transparent)]
    Core(#[from] alphacap::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Shannon,
    S1,
    S2,
    A1,
    A2,
    /// Run S1, S2, A1 and A2 together and assert their lockstep.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Compute the capacity or an order-alpha capacity of a discrete channel.
#[derive(Debug, Parser)]
#[command(name = "capacity", version, about)]
pub struct Args {
    /// Channel source: a file path or a builtin name
    /// (nakagawa5, identity2..identity8, bsc01, useless3).
    #[arg(long)]
    pub channel: String,

    /// Which alternating-maximization scheme to run.
    #[arg(long, value_enum, default_value_t = Algorithm::S1)]
    pub algorithm: Algorithm,

    /// Order of the information measure; values within 1e-9 of 1 run the
    /// Shannon iteration.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    /// Stop once successive objective values differ by less than this.
    #[arg(long, default_value_t = 1e-7)]
    pub epsilon: f64,

    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,

    /// Initial input distribution: uniform, random, or a weights file.
    #[arg(long, default_value = "uniform")]
    pub init: String,

    /// Seed for --init random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the full iteration trace as JSON.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cross-check the capacity against the simplex-grid oracle.
    #[arg(long)]
    pub verify_oracle: bool,

    /// Grid step used by --verify-oracle.
    #[arg(long, default_value_t = 1e-3)]
    pub oracle_step: f64,

    /// Write the validated channel back out in the text format.
    #[arg(long)]
    pub export_channel: Option<PathBuf>,
}

/// One solver run, flattened for reporting. JSON output carries the full
/// objective-value sequences; text output rounds to five decimals.
#[derive(Debug, Serialize)]
pub struct Report {
    pub algorithm: String,
    pub alpha: f64,
    pub capacity_nats: f64,
    pub capacity_bits: f64,
    pub iterations: usize,
    pub converged: bool,
    pub shannon_dispatch: bool,
    pub p_final: Vec<f64>,
    pub channel_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_capacity_nats: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_kk: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_next: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct Output {
    runs: Vec<Report>,
}

#[derive(Debug, Serialize)]
struct TraceFileEntry<'a> {
    algorithm: String,
    alpha: f64,
    trace: &'a alphacap::solver::IterationTrace,
}

/// SHA-256 over the validated channel: dimensions, then the row-major
/// entries as little-endian doubles.
pub fn channel_digest(w: &Channel) -> String {
    let mut hasher = Sha256::new();
    hasher.update((w.n_in() as u64).to_le_bytes());
    hasher.update((w.n_out() as u64).to_le_bytes());
    for &v in w.entries() {
        hasher.update(v.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for b in digest {
        let _ = write!(hex, "{b:02x}");
    }
    hex
}

fn builtin(name: &str) -> Option<Result<Channel>> {
    match name {
        "nakagawa5" => Some(Ok(channels::nakagawa5())),
        "bsc01" => Some(channels::bsc(0.1).map_err(CliError::Core)),
        "useless3" => Some(Ok(channels::useless3())),
        _ => {
            let n = name.strip_prefix("identity")?.parse::<usize>().ok()?;
            if (2..=8).contains(&n) {
                Some(channels::identity(n).map_err(CliError::Core))
            } else {
                None
            }
        }
    }
}

/// Plain-text channel format: one row per line, whitespace-separated
/// probabilities, `#` comments.
pub fn parse_channel_text(text: &str, path: &str) -> Result<Channel> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col, token) in line.split_whitespace().enumerate() {
            let value = token.parse::<f64>().map_err(|e| CliError::Parse {
                path: path.to_string(),
                line: lineno + 1,
                col: col + 1,
                msg: format!("bad probability {token:?}: {e}"),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Channel::from_rows(&rows).map_err(|source| CliError::InvalidChannel {
        path: path.to_string(),
        source,
    })
}

/// Structured channel format: `{"n_in": .., "n_out": .., "rows": [[..]]}`.
#[derive(Debug, Deserialize)]
struct ChannelFile {
    n_in: usize,
    n_out: usize,
    rows: Vec<Vec<f64>>,
}

fn parse_channel_json(text: &str, path: &str) -> Result<Channel> {
    let file: ChannelFile = serde_json::from_str(text)?;
    if file.rows.len() != file.n_in || file.rows.iter().any(|r| r.len() != file.n_out) {
        return Err(CliError::InvalidChannel {
            path: path.to_string(),
            source: alphacap::Error::DimensionMismatch {
                left: file.rows.len(),
                right: file.n_in,
            },
        });
    }
    Channel::from_rows(&file.rows).map_err(|source| CliError::InvalidChannel {
        path: path.to_string(),
        source,
    })
}

/// Resolve a builtin name or load and validate a channel file.
pub fn load_channel(source: &str) -> Result<Channel> {
    if let Some(result) = builtin(source) {
        return result;
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::UnknownBuiltin(source.to_string()));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: source.to_string(),
        source: e,
    })?;
    if text.trim_start().starts_with('{') {
        parse_channel_json(&text, source)
    } else {
        parse_channel_text(&text, source)
    }
}

/// Serialize a channel in the text format with round-trip-exact decimals.
pub fn export_channel_text(w: &Channel) -> String {
    let mut out = String::new();
    for x in 0..w.n_in() {
        let row: Vec<String> = w.row(x).iter().map(|v| format!("{v}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_init(args: &Args, n_in: usize) -> Result<InitPolicy> {
    match args.init.as_str() {
        "uniform" => Ok(InitPolicy::Uniform),
        "random" => Ok(InitPolicy::Random { seed: args.seed }),
        path => {
            let text = fs::read_to_string(path)
                .map_err(|_| CliError::BadInit(args.init.clone()))?;
            let weights: Vec<f64> = text
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| CliError::BadInit(args.init.clone())))
                .collect::<Result<_>>()?;
            if weights.len() != n_in {
                return Err(CliError::Core(alphacap::Error::DimensionMismatch {
                    left: weights.len(),
                    right: n_in,
                }));
            }
            Ok(InitPolicy::Explicit(Distribution::from_weights(&weights)?))
        }
    }
}

/// Largest objective-value gap between the four traces of an `all` run;
/// mismatched stop iterations count as a violation outright.
pub fn lockstep_gap(results: &BTreeMap<ObjectiveKind, SolveResult>) -> f64 {
    let traces: Vec<Vec<f64>> = ObjectiveKind::ALPHA_KINDS
        .iter()
        .filter_map(|k| results.get(k).map(|r| r.trace.f_kk_values()))
        .collect();
    let mut gap: f64 = 0.0;
    for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            if traces[i].len() != traces[j].len() {
                return f64::INFINITY;
            }
            for (a, b) in traces[i].iter().zip(&traces[j]) {
                gap = gap.max((a - b).abs());
            }
        }
    }
    gap
}

fn oracle_check(w: &Channel, alpha: f64, step: f64) -> Result<f64> {
    let max_dim = std::env::var(MAX_GRID_DIM_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(alphacap::verify::DEFAULT_MAX_GRID_DIM);
    let grid = GridSpec::new(w.n_in(), step)?.with_max_dim(max_dim);
    Ok(capacity_oracle(w, alpha, &grid)?.value())
}

fn build_report(
    result: &SolveResult,
    digest: &str,
    oracle: Option<f64>,
    include_trace: bool,
) -> Report {
    Report {
        algorithm: result.requested_kind.label().to_string(),
        alpha: result.alpha,
        capacity_nats: result.capacity.value(),
        capacity_bits: result.capacity.bits(),
        iterations: result.iterations,
        converged: result.converged,
        shannon_dispatch: result.shannon_dispatch,
        p_final: result.p_final.probs().to_vec(),
        channel_digest: digest.to_string(),
        oracle_capacity_nats: oracle,
        oracle_delta: oracle.map(|o| result.capacity.value() - o),
        f_kk: include_trace.then(|| result.trace.f_kk_values()),
        f_next: include_trace.then(|| result.trace.f_next_values()),
    }
}

fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algorithm    {}", report.algorithm);
    let _ = writeln!(s, "alpha        {:.5}", report.alpha);
    let _ = writeln!(
        s,
        "capacity     {:.5} nats   {:.5} bits",
        report.capacity_nats, report.capacity_bits
    );
    let _ = writeln!(
        s,
        "iterations   {} ({})",
        report.iterations,
        if report.converged { "converged" } else { "not converged" }
    );
    let p: Vec<String> = report.p_final.iter().map(|v| format!("{v:.5}")).collect();
    let _ = writeln!(s, "p_final      {}", p.join(" "));
    let _ = writeln!(s, "channel      sha256:{}", report.channel_digest);
    if let (Some(oracle), Some(delta)) = (report.oracle_capacity_nats, report.oracle_delta) {
        let _ = writeln!(s, "oracle       {oracle:.5} nats   delta {delta:.2e}");
    }
    if report.shannon_dispatch {
        let _ = writeln!(s, "note         alpha within 1e-9 of 1: ran the Shannon iteration");
    }
    s
}

/// Execute a run request. Returns the exit code; the report goes to stdout.
pub fn execute(args: &Args) -> Result<i32> {
    let w = load_channel(&args.channel)?;
    let digest = channel_digest(&w);

    if let Some(path) = &args.export_channel {
        fs::write(path, export_channel_text(&w)).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }

    let init = parse_init(args, w.n_in())?;
    let config = SolverConfig::new(args.alpha, args.epsilon)
        .with_max_iter(args.max_iter)
        .with_init(init.clone());

    let oracle = if args.verify_oracle {
        Some(oracle_check(&w, args.alpha, args.oracle_step)?)
    } else {
        None
    };

    let mut lockstep_violation = false;
    let results: Vec<SolveResult> = match args.algorithm {
        Algorithm::All => {
            let map = solve_all(&w, &config, false)?;
            if init == InitPolicy::Uniform {
                let gap = lockstep_gap(&map);
                if gap > LOCKSTEP_TOL {
                    eprintln!(
                        "lockstep violation: the four algorithms diverged by {gap:.3e} (> {LOCKSTEP_TOL:.0e}) from the uniform init"
                    );
                    lockstep_violation = true;
                }
            }
            map.into_values().collect()
        }
        single => {
            let kind = match single {
                Algorithm::Shannon => ObjectiveKind::Shannon,
                Algorithm::S1 => ObjectiveKind::S1,
                Algorithm::S2 => ObjectiveKind::S2,
                Algorithm::A1 => ObjectiveKind::A1,
                Algorithm::A2 => ObjectiveKind::A2,
                Algorithm::All => unreachable!(),
            };
            vec![solve(kind, &w, &config)?]
        }
    };

    if let Some(path) = &args.trace_out {
        let entries: Vec<TraceFileEntry> = results
            .iter()
            .map(|r| TraceFileEntry {
                algorithm: r.requested_kind.label().to_string(),
                alpha: r.alpha,
                trace: &r.trace,
            })
            .collect();
        let json = serde_json::to_string_pretty(&entries)?;
        fs::write(path, json).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }

    let reports: Vec<Report> = results
        .iter()
        .map(|r| build_report(r, &digest, oracle, args.format == Format::Json))
        .collect();

    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&Output { runs: reports })?),
        Format::Text => {
            for (i, report) in reports.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print!("{}", render_text(report));
            }
        }
    }

    if lockstep_violation {
        return Ok(EXIT_LOCKSTEP_VIOLATION);
    }
    if results.iter().any(|r| !r.converged) {
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(EXIT_OK)
}

/// Entry point used by the binary: maps errors to a one-line diagnostic and
/// exit code 1.
pub fn run(args: &Args) -> i32 {
    match execute(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
