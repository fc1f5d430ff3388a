//! Command-line front end.
//!
//! Failures are reported on stderr as one JSON object
//! `{"error": <kind>, "message": <text>}`. Usage and configuration problems
//! exit with status 2, anything else with 1.
//!
//! `BEAMSPACE_SEED` overrides the configured seed (a `--seed` flag wins over
//! both) and `BEAMSPACE_OUT_DIR` is prepended to relative output paths.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{self, PathSet, TapGrid};
use crate::error::{Error, Result};
use crate::runner::{self, Config};

pub const ENV_SEED: &str = "BEAMSPACE_SEED";
pub const ENV_OUT_DIR: &str = "BEAMSPACE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "beamspace", version, about = "Wideband beamspace MIMO precoding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the Monte Carlo sweep described by the config and write a CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Per-beam transmit power of one channel realisation at chosen subcarriers.
    BeamProfile {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated 1-based subcarrier indices.
        #[arg(long, value_delimiter = ',', required = true)]
        subcarriers: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Use a single unit-gain path at this departure angle (degrees)
        /// instead of a random realisation.
        #[arg(long, allow_negative_numbers = true)]
        aod: Option<f64>,
    },
    /// Print beam budgets, power and complexity for the config.
    Plan {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parameter(_) | Error::Index { .. } => 2,
        _ => 1,
    }
}

fn report(kind: &str, message: &str) {
    let obj = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{obj}");
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(ENV_SEED) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{ENV_SEED}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(ENV_OUT_DIR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Sweep { config, out, seed, trials, threads } => {
            let cfg = Config::load(&config)?;
            let mut spec = cfg.sweep_spec()?;
            if let Some(s) = seed.or(env_seed()?) {
                spec.seed = s;
            }
            if let Some(t) = trials {
                spec.trials = t;
            }
            let result = match threads {
                Some(n) => runner::run_sweep_with_threads(&spec, n)?,
                None => runner::run_sweep(&spec)?,
            };
            runner::emit_csv(&result, &resolve_out(&out))
        }
        Command::BeamProfile { config, subcarriers, out, seed, aod } => {
            let cfg = Config::load(&config)?;
            let seed = seed.or(env_seed()?).or(cfg.sweep.as_ref().map(|s| s.seed)).unwrap_or(0);
            let paths = match aod {
                Some(deg) => PathSet::single(num_complex::Complex64::new(1.0, 0.0), 0.0, deg.to_radians(), 0.0),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(runner::trial_seed(seed, 0));
                    channel::sample_paths(&cfg.channel, &mut rng)?
                }
            };
            let grid = TapGrid::new(&cfg.system, &cfg.channel, cfg.pulse)?;
            let ch = channel::beamspace_direct(&paths, &cfg.system, &grid);
            let mut text = String::from("subcarrier,beam,power\n");
            for &k in &subcarriers {
                for (j, p) in channel::beam_power_profile(&ch, k)?.iter().enumerate() {
                    text.push_str(&format!("{k},{},{p:.8e}\n", j + 1));
                }
            }
            std::fs::write(resolve_out(&out), text)?;
            Ok(())
        }
        Command::Plan { config } => {
            let cfg = Config::load(&config)?;
            let rep = runner::plan_report(&cfg)?;
            let mut stdout = std::io::stdout().lock();
            write!(stdout, "{rep}")?;
            Ok(())
        }
    }
}

/// Parse `argv` (program name first) and run; returns the exit status.
pub fn cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            report("usage", e.to_string().trim());
            return 2;
        }
    };
    match run(parsed.command) {
        Ok(()) => 0,
        Err(e) => {
            report(e.kind(), &e.to_string());
            exit_code(&e)
        }
    }
}
