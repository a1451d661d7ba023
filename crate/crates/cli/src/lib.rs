//! Command-line front end: reproduces the bilinear and summary tables, runs
//! the verification pipeline and emits machine-readable reports.

pub mod commands;
pub mod config;
pub mod tables;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_cohomology, cmd_deform, cmd_geometry, cmd_tables, cmd_verify, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_PASS};
pub use config::{ConfigError, Overrides, RunConfig};
pub use tables::{all_tables, SummaryTable};

#[derive(Debug, Parser)]
#[command(name = "ksa", version, about = "Killing superalgebras of two-dimensional spin manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Print the bilinear tables and the summary table.
    Tables,
    /// Run every check for the configured model; exit 1 if any fails.
    Verify,
    /// Emit the deformed structure constants.
    Deform,
    /// Solve for the normalised (2,2) cocycles.
    Cohomology,
    /// Run the geometric suite on the configured background.
    Geometry,
}

#[derive(Debug, Args, Default)]
pub struct GlobalOptions {
    /// (1,1) or (0,2).
    #[arg(long, global = true)]
    pub signature: Option<String>,
    /// `+`, `-`, or an explicit matrix `a,b;c,d`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bilinear: Option<String>,
    /// full or chiral.
    #[arg(long, global = true)]
    pub module: Option<String>,
    /// Deformation parameter, e.g. `1/2`.
    #[arg(short = 'b', global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// flat, H2, dS2, AdS2 or none.
    #[arg(long, global = true)]
    pub geometry: Option<String>,
    /// json, csv or markdown.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `name=value`; repeatable.
    #[arg(long = "tolerance", global = true)]
    pub tolerances: Vec<String>,
    /// corrupted-bracket or perturbed-metric.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
}

impl GlobalOptions {
    pub fn overrides(&self) -> Result<Overrides, ConfigError> {
        let tolerances = self.tolerances.iter().map(|t| config::parse_tolerance_flag(t)).collect::<Result<_, _>>()?;
        Ok(Overrides {
            signature: self.signature.clone(),
            bilinear: self.bilinear.clone(),
            module: self.module.clone(),
            b: self.b.clone(),
            geometry: self.geometry.clone(),
            format: self.format.clone(),
            fixture: self.fixture.clone(),
            tolerances,
        })
    }
}

/// Exit code, standard output, standard error.
pub fn run(cli: &Cli) -> (i32, String, String) {
    let cfg = cli
        .options
        .overrides()
        .and_then(|o| RunConfig::load(cli.options.config.as_deref(), o));
    let result = cfg.and_then(|cfg| match cli.command {
        Command::Tables => Ok(cmd_tables(&cfg)),
        Command::Verify => cmd_verify(&cfg),
        Command::Deform => cmd_deform(&cfg),
        Command::Cohomology => cmd_cohomology(&cfg),
        Command::Geometry => cmd_geometry(&cfg),
    });
    match result {
        Ok((code, out)) => (code, out, String::new()),
        Err(e) => (EXIT_CONFIG, String::new(), format!("error: {e}\n")),
    }
}

pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.to_string();
            if e.use_stderr() { (code, String::new(), text) } else { (code, text, String::new()) }
        }
    }
}
