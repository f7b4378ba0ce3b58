//! Command-line front end: configuration, orchestration and reports.

mod config;
mod pipeline;

pub use config::{Command, RunConfig};
pub use pipeline::{run, Normalization, Report, RunOutcome, Source, StructuralSummary, REPORT_SCHEMA_VERSION};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::generators::Preset;

#[derive(Debug, Parser)]
#[command(name = "hypersym", version, about = "Certify circle-invariant hypersymplectic triples on T⁴")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Build a triple from a preset and serialize it.
    Generate(RunArgs),
    /// Check closedness and definiteness.
    Verify(RunArgs),
    /// Extract structural data and the quotient lattice.
    Extract(RunArgs),
    /// Run the linear isotopy to the hyperkähler endpoint.
    Isotopy(RunArgs),
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "INT")]
    pub grid_n: Option<usize>,
    /// One of flat, fhy, random, adversarial, indefinite.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Seed of the random preset.
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "INT")]
    pub s_samples: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Serialized triple to read instead of a preset.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Swap ω₁ and ω₂ when the structural data is negatively oriented.
    #[arg(long)]
    pub auto_orient: bool,
    /// Rescale so that ∫ω_i∧ω_j = 2δ_ij first.
    #[arg(long)]
    pub normalize: bool,
    /// Use 3/2-padded products.
    #[arg(long)]
    pub dealias: bool,
    #[arg(long)]
    pub no_timestamp: bool,
    /// Write pointwise structural fields (extract only).
    #[arg(long)]
    pub dump_fields: bool,
}

impl RunArgs {
    /// Loads `--config` if given and applies the flags on top.
    pub fn into_config(self, command: Command) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.command = command;
        if let Some(n) = self.grid_n {
            cfg.grid_n = n;
        }
        if let Some(name) = &self.preset {
            if name != cfg.generator.name() {
                cfg.generator = Preset::named(name)?;
            }
        }
        if let Some(s) = self.seed {
            match &mut cfg.generator {
                Preset::Random { seed, .. } => *seed = s,
                other => {
                    return Err(Error::InvalidParameter {
                        name: "seed",
                        reason: format!("only the random preset takes a seed, not {}", other.name()),
                    })
                }
            }
        }
        if let Some(k) = self.s_samples {
            cfg.s_samples = k;
        }
        if let Some(out) = self.out {
            cfg.out = out;
        }
        if self.input.is_some() {
            cfg.input = self.input;
        }
        cfg.auto_orient |= self.auto_orient;
        cfg.normalize |= self.normalize;
        cfg.dealias |= self.dealias;
        cfg.dump_fields |= self.dump_fields;
        if self.no_timestamp {
            cfg.timestamp = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (command, args) = match self.command {
            CliCommand::Generate(a) => (Command::Generate, a),
            CliCommand::Verify(a) => (Command::Verify, a),
            CliCommand::Extract(a) => (Command::Extract, a),
            CliCommand::Isotopy(a) => (Command::Isotopy, a),
        };
        args.into_config(command)
    }
}

/// Parses arguments, runs, and returns the process exit status:
/// 0 when every certification passed, 1 when one failed, 2 on usage,
/// configuration or I/O errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = cli.into_config().and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) => {
            let verdict = if o.report.passed { "PASS" } else { "FAIL" };
            println!("{}: {verdict} ({})", o.report.command.name(), o.report_path.display());
            if let Some(e) = &o.report.error {
                eprintln!("error: {e}");
            }
            o.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
