//! The `minscat` command-line front end.
//!
//! Four subcommands (`dispersion`, `dcs`, `phases`, `sigma`) read an optional
//! `key = value` config file, apply flag overrides and write one table as
//! CSV or JSON. Exit codes: 0 success, 1 I/O failure, 2 config error,
//! 3 domain or validity error, 4 internal-consistency failure.

pub mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::error::ScatterError;

pub use commands::{cmd_dcs, cmd_dispersion, cmd_phases, cmd_sigma};
pub use config::RunConfig;

pub const TOOL: &str = concat!("minscat ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },
    #[error(transparent)]
    Domain(#[from] ScatterError),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config { .. } => 2,
            CliError::Domain(_) => 3,
            CliError::Consistency(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "minscat",
    version,
    about = "Elastic scattering with a minimal length"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersion table: k, E, P, minimal length, Green's-function prefactor.
    #[command(allow_negative_numbers = true)]
    Dispersion(RunArgs),
    /// Differential cross-section over an angle grid.
    #[command(allow_negative_numbers = true)]
    Dcs(RunArgs),
    /// Born and self-consistent phase shifts per partial wave.
    #[command(allow_negative_numbers = true)]
    Phases(RunArgs),
    /// Total cross-section by phase sum and by angular integration.
    #[command(allow_negative_numbers = true)]
    Sigma(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dispersion(_) => "dispersion",
            Command::Dcs(_) => "dcs",
            Command::Phases(_) => "phases",
            Command::Sigma(_) => "sigma",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Dispersion(a) | Command::Dcs(a) | Command::Phases(a) | Command::Sigma(a) => a,
        }
    }
}

/// Flags mirror config keys; a flag overrides the file.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// reduced | explicit
    #[arg(long)]
    pub units: Option<String>,
    #[arg(long)]
    pub hbar: Option<String>,
    #[arg(long)]
    pub mass: Option<String>,
    /// Potential strength e².
    #[arg(long)]
    pub e2: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub beta_prime: Option<String>,
    /// coulomb | yukawa
    #[arg(long)]
    pub potential: Option<String>,
    /// Yukawa screening parameter.
    #[arg(long)]
    pub lambda: Option<String>,
    /// attractive | repulsive
    #[arg(long)]
    pub sign: Option<String>,
    /// Wave number(s), comma separated.
    #[arg(long)]
    pub k: Option<String>,
    /// Energy value(s), comma separated; alternative to --k.
    #[arg(long)]
    pub energy: Option<String>,
    /// Smallest angle; accepts `pi`, `pi/N`, `N*pi`.
    #[arg(long)]
    pub theta_min: Option<String>,
    #[arg(long)]
    pub theta_max: Option<String>,
    #[arg(long)]
    pub n_angles: Option<String>,
    #[arg(long)]
    pub lmax: Option<String>,
    #[arg(long)]
    pub tail_tol: Option<String>,
    /// Decreasing screening sequence for the Coulomb limit.
    #[arg(long)]
    pub lambdas: Option<String>,
    /// closed-form | limit
    #[arg(long)]
    pub coulomb_mode: Option<String>,
    /// riccati | asymptotic-sine
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long)]
    pub max_iter: Option<String>,
    #[arg(long)]
    pub sc_tol: Option<String>,
    /// Use these phase shifts (δ_0,δ_1,…) instead of computing them.
    #[arg(long, hide = true)]
    pub inject_phases: Option<String>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut pairs = Vec::new();
        let mut add = |key: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                pairs.push((key, v.clone()));
            }
        };
        add("units", &self.units);
        add("hbar", &self.hbar);
        add("mass", &self.mass);
        add("e2", &self.e2);
        add("beta", &self.beta);
        add("beta_prime", &self.beta_prime);
        add("potential", &self.potential);
        add("lambda", &self.lambda);
        add("sign", &self.sign);
        add("k", &self.k);
        add("energy", &self.energy);
        add("theta_min", &self.theta_min);
        add("theta_max", &self.theta_max);
        add("n_angles", &self.n_angles);
        add("lmax", &self.lmax);
        add("tail_tol", &self.tail_tol);
        add("lambdas", &self.lambdas);
        add("coulomb_mode", &self.coulomb_mode);
        add("kernel", &self.kernel);
        add("max_iter", &self.max_iter);
        add("sc_tol", &self.sc_tol);
        add("inject_phases", &self.inject_phases);
        add("format", &self.format);
        if let Some(p) = &self.out {
            pairs.push(("out", p.display().to_string()));
        }
        pairs
    }

    /// Merges the config file (if any) with flag overrides.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut map = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                    key: "config".into(),
                    message: format!("{}: {e}", path.display()),
                })?;
                config::parse_key_values(&text)?
            }
            None => BTreeMap::new(),
        };
        for (key, value) in self.overrides() {
            // a flag for one of k/energy replaces the other from the file
            match key {
                "k" => {
                    map.remove("energy");
                }
                "energy" => {
                    map.remove("k");
                }
                _ => {}
            }
            map.insert(key.to_string(), value);
        }
        RunConfig::from_map(&map)
    }
}

/// Runs one command and returns the rendered table together with the
/// resolved configuration.
pub fn run(command: &Command) -> Result<(RunConfig, String), CliError> {
    let config = command.args().resolve()?;
    let table = match command {
        Command::Dispersion(_) => cmd_dispersion(&config)?,
        Command::Dcs(_) => cmd_dcs(&config)?,
        Command::Phases(_) => cmd_phases(&config)?,
        Command::Sigma(_) => cmd_sigma(&config)?,
    };
    let mut table = table;
    let mut meta = vec![
        ("tool".to_string(), TOOL.to_string()),
        ("command".to_string(), command.name().to_string()),
    ];
    meta.extend(config.echo());
    meta.append(&mut table.meta);
    table.meta = meta;
    Ok((config.clone(), table.render(config.format)))
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli.command).and_then(|(config, text)| {
        match &config.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("minscat: {e}");
            e.exit_code()
        }
    }
}
