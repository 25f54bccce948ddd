use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kaczmarz_accel::kaczmarz::spectral_diagnostics;
use kaczmarz_accel::{build_gallery, Error, TransformTag};
use kaczmarz_bench::{compare_suite, exit_code, run_experiment, ExperimentConfig, OutputFormat};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("run aborted on a breakdown at n = {0}")]
    Aborted(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(e) => exit_code(e) as u8,
            CliError::Io(_) => 1,
            CliError::Aborted(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kaczmarz-bench",
    version,
    about = "Accelerated Kaczmarz experiments on gallery matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run; records go to --out or stdout.
    Run(Common),
    /// Several transforms on one matrix, one wide CSV.
    Suite {
        #[command(flatten)]
        common: Common,
        /// Comma separated transform names.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "mpe,rre,mmpe,topological,vector-epsilon"
        )]
        transforms: Vec<String>,
    },
    /// Writes the (row-scaled) gallery matrix as text.
    DumpMatrix(Common),
    /// Eigenvalues of the sweep matrix and related constants.
    Spectrum(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    size: Option<usize>,
    /// ak, rk or plain.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    transform: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// random, ones or canonical.
    #[arg(long)]
    aux: Option<String>,
    /// default, previous-z, last-iterate or abort.
    #[arg(long)]
    fallback: Option<String>,
    #[arg(long)]
    lanczos: bool,
    #[arg(long)]
    stop_on_signal: bool,
    #[arg(long)]
    spectral: bool,
    #[arg(long)]
    no_precondition: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_kv_str(&fs::read_to_string(p)?)?,
            None => ExperimentConfig::default(),
        };
        let text = [
            ("matrix", self.matrix.clone()),
            ("size", self.size.map(|v| v.to_string())),
            ("mode", self.mode.clone()),
            ("transform", self.transform.clone()),
            ("k", self.k.map(|v| v.to_string())),
            ("max_iter", self.max_iter.map(|v| v.to_string())),
            ("noise", self.noise.map(|v| format!("{v:?}"))),
            ("seed", self.seed.map(|v| v.to_string())),
            ("aux", self.aux.clone()),
            ("fallback", self.fallback.clone()),
            ("format", self.format.clone()),
        ];
        for (key, value) in text {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        cfg.lanczos |= self.lanczos;
        cfg.stop_on_signal |= self.stop_on_signal;
        cfg.spectral |= self.spectral;
        if self.no_precondition {
            cfg.precondition = false;
        }
        if let Some(p) = &self.out {
            cfg.out = Some(p.clone());
        }
        Ok(cfg)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn system_for(cfg: &ExperimentConfig) -> Result<kaczmarz_accel::LinearSystemF64, CliError> {
    let mut system = build_gallery::<f64>(cfg.matrix, cfg.size)?;
    if cfg.precondition {
        system = system.precondition_rows()?;
    }
    Ok(system)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(common) => {
            let cfg = common.resolve()?;
            let result = run_experiment(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Csv => result.to_csv(),
                OutputFormat::Json => result.to_json() + "\n",
            };
            emit(&cfg.out, &text)?;
            eprint!("{}", result.summary_text());
            if result.aborted {
                return Err(CliError::Aborted(result.summary.stop.clone()));
            }
        }
        Command::Suite { common, transforms } => {
            let base = common.resolve()?;
            let configs = transforms
                .iter()
                .map(|t| {
                    let mut c = base.clone();
                    c.transform = t.parse::<TransformTag>()?;
                    Ok(c)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            emit(&base.out, &compare_suite(&configs)?)?;
        }
        Command::DumpMatrix(common) => {
            let cfg = common.resolve()?;
            let system = system_for(&cfg)?;
            let mut buf = Vec::new();
            system.matrix().write_text(&mut buf)?;
            emit(&cfg.out, &String::from_utf8_lossy(&buf))?;
        }
        Command::Spectrum(common) => {
            let cfg = common.resolve()?;
            let system = system_for(&cfg)?;
            let d = spectral_diagnostics(&system)?;
            let mut text = String::from("i,re,im,modulus\n");
            for (i, ev) in d.eigenvalues.iter().enumerate() {
                text.push_str(&format!(
                    "{i},{:.16e},{:.16e},{:.16e}\n",
                    ev.re,
                    ev.im,
                    ev.norm()
                ));
            }
            emit(&cfg.out, &text)?;
            eprintln!(
                "spectral radius: {:.16e}\nmeany constant: {:.16e}\ncondition number: {:.16e}",
                d.spectral_radius, d.meany_constant, d.condition_number
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
