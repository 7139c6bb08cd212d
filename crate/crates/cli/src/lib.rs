//! Command-line driver for the `catlab` reuse experiments.
//!
//! Settings come from three layers: a named preset, a `key = value` config
//! file, and flags. Later layers win.

pub mod bounds;
pub mod config;
pub mod error;
pub mod format;
pub mod grid;
pub mod preset;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::Settings;
use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "catlab", version, about = "Reuse experiments for embezzling catalysts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a parameter grid and write one CSV row per point.
    Sweep(Params),
    /// Print the reuse bound and per-round gains at one parameter point.
    Bounds(Params),
    /// Check closed forms against the brute-force simulators.
    Verify {
        /// csla, esa, teleport or all.
        #[arg(default_value = "all")]
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Haar messages per teleportation estimate.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// List or show the built-in presets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    List,
    Show { name: String },
}

/// Grid flags accept `a,b,c`, `a..b`, `a..b:step` and `a..b@count` (log spaced).
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long)]
    pub preset: Option<String>,
    /// File of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// csla or esa.
    #[arg(long)]
    pub protocol: Option<String>,
    /// distill or teleport.
    #[arg(long)]
    pub task: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub rounds: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long = "f-rho")]
    pub f_rho: Option<String>,
    #[arg(long = "f-tau")]
    pub f_tau: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads.
    #[arg(long, env = "CATLAB_JOBS")]
    pub jobs: Option<String>,
}

impl Params {
    /// Preset, then config file, then flags.
    pub fn settings(&self) -> Result<Settings, CliError> {
        let flags = self.flag_settings()?;
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::new(),
        };
        let preset = flags.get("preset").or(file.get("preset"));
        let mut out = match preset {
            Some(name) => preset::find(name)
                .ok_or_else(|| CliError::usage(format!("unknown preset {name:?}; try `catlab preset list`")))?
                .settings(),
            None => Settings::new(),
        };
        out.overlay(&file);
        out.overlay(&flags);
        Ok(out)
    }

    fn flag_settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::new();
        let pairs = [
            ("preset", &self.preset),
            ("protocol", &self.protocol),
            ("task", &self.task),
            ("d", &self.d),
            ("n", &self.n),
            ("m", &self.m),
            ("rounds", &self.rounds),
            ("epsilon", &self.epsilon),
            ("f_rho", &self.f_rho),
            ("f_tau", &self.f_tau),
            ("seed", &self.seed),
            ("out", &self.out),
            ("jobs", &self.jobs),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v.as_str())?;
            }
        }
        Ok(s)
    }
}

fn jobs(settings: &Settings) -> Result<usize, CliError> {
    match settings.get("jobs") {
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::usage(format!("jobs must be a positive integer, got {v:?}"))),
        },
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn io_error(path: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_string(),
        source,
    }
}

fn sweep(params: &Params, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let settings = params.settings()?;
    let spec = sweep::SweepSpec::from_settings(&settings)?;
    let results = sweep::run(&spec, jobs(&settings)?)?;
    let summary = sweep::summary(&spec, &results);
    match &spec.out {
        Some(path) => {
            let name = path.display().to_string();
            let file = File::create(path).map_err(io_error(&name))?;
            sweep::write_csv(&spec, &results, BufWriter::new(file))?;
            out.write_all(summary.as_bytes()).map_err(io_error("stdout"))?;
        }
        None => {
            sweep::write_csv(&spec, &results, &mut *out)?;
            err.write_all(summary.as_bytes()).map_err(io_error("stderr"))?;
        }
    }
    Ok(EXIT_OK)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Sweep(params) => sweep(&params, out, err),
        Command::Bounds(params) => {
            let report = bounds::compute(&params.settings()?)?;
            write!(out, "{report}").map_err(io_error("stdout"))?;
            Ok(EXIT_OK)
        }
        Command::Verify { target, seed, samples } => {
            if samples < 2 {
                return Err(CliError::usage("samples must be at least 2"));
            }
            let checks = verify::run(verify::Target::parse(&target)?, seed, samples)?;
            for c in &checks {
                writeln!(out, "{c}").map_err(io_error("stdout"))?;
            }
            Ok(if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Preset { action } => {
            match action {
                PresetAction::List => {
                    for p in preset::PRESETS {
                        writeln!(out, "{:<18} {}", p.name, p.about).map_err(io_error("stdout"))?;
                    }
                }
                PresetAction::Show { name } => {
                    let p = preset::find(&name).ok_or_else(|| CliError::usage(format!("unknown preset {name:?}")))?;
                    writeln!(out, "# {}", p.about).map_err(io_error("stdout"))?;
                    for (k, v) in p.values {
                        writeln!(out, "{k} = {v}").map_err(io_error("stdout"))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// code: 0 on success, 1 when a verification fails, 2 on usage or model errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
