//! Batch front end: a JSON job goes in, a JSON report comes out.
//!
//! Exit codes: 0 on success, 1 on a usage or schema error, 2 when a numerical
//! cross-check fails.

pub mod config;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use config::{Command, Job, JobConfig, UsageError};
pub use run::{run, to_text, Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "coadjoint", version, about = "Root data, transport and quantization checks on SU(n)")]
pub struct Cli {
    /// Command to run; overrides nothing, but must agree with the config if both are given.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Job configuration file (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks and presets.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tolerance", value_name = "KEY=VAL")]
    pub tolerances: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

impl Cli {
    /// Merges the config file with command-line overrides.
    pub fn job_config(&self) -> Result<JobConfig, UsageError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let origin = path.display().to_string();
                let text = std::fs::read_to_string(path).map_err(|e| UsageError::new(&origin, e.to_string()))?;
                JobConfig::parse(&text, &origin)?
            }
            None => JobConfig::default(),
        };
        if let Some(c) = self.command {
            match cfg.command {
                Some(existing) if existing != c => {
                    return Err(UsageError::new(
                        "command",
                        format!("argument {} conflicts with config command {}", c.name(), existing.name()),
                    ));
                }
                _ => cfg.command = Some(c),
            }
        }
        if let Some(s) = self.seed {
            cfg.seed = Some(s);
        }
        for (i, t) in self.tolerances.iter().enumerate() {
            let loc = format!("--tolerance[{i}]");
            let (k, v) = t.split_once('=').ok_or_else(|| UsageError::new(&loc, "expected KEY=VAL"))?;
            let v: f64 = v.trim().parse().map_err(|_| UsageError::new(&loc, format!("{v:?} is not a number")))?;
            cfg.tolerances.get_or_insert_with(Default::default).insert(k.trim().to_string(), v);
        }
        Ok(cfg)
    }

    /// Runs the job and renders stdout text and the exit code.
    pub fn execute(&self) -> Result<(String, i32), UsageError> {
        let job = self.job_config()?.resolve()?;
        let report = run(&job)?;
        let text = match self.format {
            Format::Json => serde_json::to_string_pretty(&report.body).expect("report serializes") + "\n",
            Format::Text => to_text(&report.body),
        };
        Ok((text, report.status.exit_code()))
    }
}
