//! The `mwsn` command line: `run`, `sweep`, and `describe-config`.
//!
//! Exit codes: 0 on success, 2 on a configuration or usage error, 1 on any
//! other failure.

pub mod output;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mwsn_core::config_text::{self, KEYS};
use mwsn_core::{
    run_sweep, run_trial_traced, ProtocolKind, SimConfig, SweepError, SweepSpec, TraceEvent,
    TraceSink,
};

use crate::output::FIGURES;

#[derive(Debug, Parser)]
#[command(
    name = "mwsn",
    version,
    about = "Round-based mobile WSN clustering simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one trial and write trial.csv and events.log.
    Run(RunArgs),
    /// Run a protocol x nodes x speed x seed grid.
    Sweep(SweepArgs),
    /// Print every config key with its default and provenance.
    DescribeConfig,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Config file; defaults apply to missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides sim.seed.
    #[arg(long, env = "MWSN_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated protocol names, or `all`.
    #[arg(long, default_value = "all")]
    pub protocols: String,
    #[arg(long, default_value = "50,100,150,200")]
    pub nodes: String,
    #[arg(long, default_value = "0,5,10,15,20")]
    pub speeds: String,
    #[arg(long, default_value_t = 10)]
    pub seeds: u32,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Base seed; trial seeds are base, base+1, ...
    #[arg(long, env = "MWSN_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Runtime(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

pub fn main_with(cli: Cli) -> ExitCode {
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::DescribeConfig => {
            let mut out = std::io::stdout().lock();
            out.write_all(describe_config().as_bytes())
                .context("writing to stdout")?;
            Ok(())
        }
    }
}

/// Reads and validates a config file; `None` means all defaults.
pub fn load_config(path: Option<&Path>) -> Result<SimConfig, CliError> {
    let Some(path) = path else {
        return Ok(SimConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    config_text::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn invalid(cfg: &SimConfig) -> Result<(), CliError> {
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))
}

struct EventLog<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> TraceSink for EventLog<W> {
    fn record(&mut self, round: u64, tick: u64, event: TraceEvent) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "round={round} tick={tick} {event}") {
                self.error = Some(e);
            }
        }
    }
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    invalid(&cfg)?;
    let staging = Staging::new(&args.out)?;
    let result = (|| -> anyhow::Result<()> {
        let log = staging.create("events.log")?;
        let mut sink = EventLog {
            out: BufWriter::new(log),
            error: None,
        };
        let r = run_trial_traced(&cfg, &mut sink).context("trial rejected its config")?;
        if let Some(e) = sink.error {
            return Err(e).context("writing events.log");
        }
        sink.out.flush().context("writing events.log")?;
        let lifetime = r.lifetime_rounds;
        output::write_trials(staging.create("trial.csv")?, &[r]).context("writing trial.csv")?;
        eprintln!(
            "{} nodes={} speed={} seed={}: lifetime {lifetime} rounds",
            cfg.protocol, cfg.nodes, cfg.mean_speed_mps, cfg.seed
        );
        Ok(())
    })();
    staging.finish(result)
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(CliError::Config(format!("--{flag}: list is empty")));
    }
    items
        .into_iter()
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| CliError::Config(format!("--{flag}: `{s}`: {e}")))
        })
        .collect()
}

pub fn parse_protocols(text: &str) -> Result<Vec<ProtocolKind>, CliError> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(ProtocolKind::ALL.to_vec());
    }
    parse_list("protocols", text)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let mut base = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        base.seed = seed;
    }
    let speeds: Vec<f64> = parse_list("speeds", &args.speeds)?;
    if let Some(s) = speeds.iter().find(|s| !s.is_finite() || **s < 0.0) {
        return Err(CliError::Config(format!(
            "--speeds: `{s}` must be finite and >= 0"
        )));
    }
    let spec = SweepSpec {
        protocols: parse_protocols(&args.protocols)?,
        nodes: parse_list("nodes", &args.nodes)?,
        speeds,
        seeds: args.seeds,
        jobs: args.jobs,
    };
    if spec.seeds == 0 {
        return Err(CliError::Config("--seeds: must be at least 1".into()));
    }
    for &p in &spec.protocols {
        for &n in &spec.nodes {
            for &s in &spec.speeds {
                invalid(&SimConfig {
                    protocol: p,
                    nodes: n,
                    mean_speed_mps: s,
                    ..base.clone()
                })?;
            }
        }
    }
    let trials = spec.protocols.len() * spec.nodes.len() * spec.speeds.len() * spec.seeds as usize;
    eprintln!(
        "sweep: {trials} trials on {} worker(s)",
        if spec.jobs == 0 {
            "all".to_string()
        } else {
            spec.jobs.to_string()
        }
    );

    let result = run_sweep(&base, &spec).map_err(|e| match e {
        SweepError::EmptyAxis(_) | SweepError::Trial { .. } => CliError::Config(e.to_string()),
        SweepError::Pool(_) => CliError::Runtime(e.into()),
    })?;

    let staging = Staging::new(&args.out)?;
    let written = (|| -> anyhow::Result<()> {
        output::write_trials(staging.create("sweep_raw.csv")?, &result.trials)
            .context("writing sweep_raw.csv")?;
        output::write_aggregate(staging.create("sweep_agg.csv")?, &result.cells)
            .context("writing sweep_agg.csv")?;
        for fig in &FIGURES {
            output::write_figure(staging.create(fig.file)?, fig, &result)
                .with_context(|| format!("writing {}", fig.file))?;
        }
        Ok(())
    })();
    staging.finish(written)
}

/// Tracks files written into an output directory so a failed command can
/// remove them again.
struct Staging {
    dir: PathBuf,
    created_dir: bool,
    files: std::cell::RefCell<Vec<PathBuf>>,
}

impl Staging {
    fn new(dir: &Path) -> Result<Self, CliError> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            created_dir,
            files: Default::default(),
        })
    }

    fn create(&self, name: &str) -> anyhow::Result<BufWriter<fs::File>> {
        let path = self.dir.join(name);
        let f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.files.borrow_mut().push(path);
        Ok(BufWriter::new(f))
    }

    fn finish(self, result: anyhow::Result<()>) -> Result<(), CliError> {
        if let Err(e) = result {
            for f in self.files.borrow().iter() {
                let _ = fs::remove_file(f);
            }
            if self.created_dir {
                let _ = fs::remove_dir(&self.dir);
            }
            return Err(CliError::Runtime(e));
        }
        Ok(())
    }
}

/// The describe-config table: key, type, unit, default, provenance, note.
pub fn describe_config() -> String {
    let cfg = SimConfig::default();
    let rows: Vec<[String; 6]> = KEYS
        .iter()
        .map(|k| {
            let mut default = config_text::value_of(&cfg, k.key).unwrap_or_default();
            if default == "auto" {
                default = match k.key {
                    "radio.range_m" => format!("auto ({:.2})", cfg.range_m()),
                    "sink.x" => format!("auto ({})", cfg.sink_position().x),
                    "sink.y" => format!("auto ({})", cfg.sink_position().y),
                    _ => default,
                };
            }
            [
                k.key.to_string(),
                k.ty.to_string(),
                k.unit.to_string(),
                default,
                k.provenance.label().to_string(),
                k.note.to_string(),
            ]
        })
        .collect();
    let header = ["key", "type", "unit", "default", "provenance", "note"].map(String::from);
    let mut widths = [0usize; 5];
    for r in std::iter::once(&header).chain(rows.iter()) {
        for i in 0..5 {
            widths[i] = widths[i].max(r[i].len());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(&header).chain(rows.iter()) {
        for i in 0..5 {
            out.push_str(&format!("{:<w$}  ", r[i], w = widths[i]));
        }
        out.push_str(&r[5]);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describe_lists_every_key_once() {
        let d = describe_config();
        assert_eq!(d.lines().count(), KEYS.len() + 1);
        let energy = d
            .lines()
            .find(|l| l.starts_with("energy.initial_j"))
            .unwrap();
        assert!(energy.contains(" 3 ") && energy.contains("published-table"));
        let range = d.lines().find(|l| l.starts_with("radio.range_m")).unwrap();
        assert!(range.contains("derived") && range.contains("353.55"));
    }

    #[test]
    fn list_parsing() {
        assert_eq!(
            parse_list::<u32>("nodes", "50, 100").unwrap(),
            vec![50, 100]
        );
        assert_eq!(parse_list::<u32>("nodes", "").unwrap_err().exit_code(), 2);
        assert_eq!(parse_list::<u32>("nodes", "x").unwrap_err().exit_code(), 2);
        assert_eq!(parse_protocols("all").unwrap().len(), 6);
        assert_eq!(
            parse_protocols("grc,DEMC_RECOVERY").unwrap(),
            vec![ProtocolKind::Grc, ProtocolKind::DemcRecovery]
        );
        assert!(parse_protocols("LEACH").is_err());
    }
}
