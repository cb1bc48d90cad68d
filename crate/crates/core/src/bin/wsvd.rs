use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wsvd::bench::{self, config::parse_pairs, ExperimentConfig};
use wsvd::WsvdError;

/// Weighted-SVD kernel bases: experiments, spectra and shape-parameter search.
#[derive(Parser)]
#[command(name = "wsvd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build bases and approximants, write one CSV row per (eps, N, M).
    Run(Options),
    /// Write the weighted eigenvalues (j, sigma2) for the first eps and N.
    Spectrum(Options),
    /// Leave-one-out error of the standard interpolant over an eps grid.
    Loo(Options),
}

/// Flags mirror the config-file keys; a flag overrides the file.
#[derive(Args)]
struct Options {
    /// Flat `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kernel: Option<String>,
    /// Single value, comma list or `start:step:stop`.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long = "eps-grid")]
    eps_grid: Option<String>,
    #[arg(long)]
    domain: Option<String>,
    /// `wsvd` or `standard`.
    #[arg(long)]
    basis: Option<String>,
    /// `gl` or `polar`.
    #[arg(long)]
    rule: Option<String>,
    /// Standard-basis centers: `grid` or `halton`.
    #[arg(long)]
    points: Option<String>,
    /// Node budget(s).
    #[arg(long)]
    n: Option<String>,
    /// Truncation order(s).
    #[arg(long)]
    m: Option<String>,
    /// Keep terms with sigma >= tol.
    #[arg(long = "truncate-tol")]
    truncate_tol: Option<String>,
    #[arg(long)]
    testfn: Option<String>,
    /// Evaluation grid resolution per axis.
    #[arg(long)]
    grid: Option<String>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock runtimes (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

impl Options {
    fn config(&self) -> Result<ExperimentConfig, WsvdError> {
        let mut pairs = match &self.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| WsvdError::Io(format!("{}: {e}", path.display())))?;
                parse_pairs(&text)?
            }
            None => Vec::new(),
        };
        let flags = [
            ("kernel", &self.kernel),
            ("eps", &self.eps),
            ("eps-grid", &self.eps_grid),
            ("domain", &self.domain),
            ("basis", &self.basis),
            ("rule", &self.rule),
            ("points", &self.points),
            ("n", &self.n),
            ("m", &self.m),
            ("truncate-tol", &self.truncate_tol),
            ("testfn", &self.testfn),
            ("grid", &self.grid),
        ];
        // a truncation flag replaces whichever policy the file chose
        if self.m.is_some() || self.truncate_tol.is_some() {
            pairs.retain(|(k, _)| k != "m" && k != "truncate-tol");
        }
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.push((key.to_string(), v.clone()));
            }
        }
        if let Some(out) = &self.out {
            pairs.push(("out".into(), out.display().to_string()));
        }
        if self.timing {
            pairs.push(("timing".into(), "true".into()));
        }
        ExperimentConfig::from_pairs(&pairs)
    }
}

fn output(cfg: &ExperimentConfig) -> Result<Box<dyn Write>, WsvdError> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| WsvdError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(command: Command) -> Result<bool, WsvdError> {
    match command {
        Command::Run(opts) => {
            let cfg = opts.config()?;
            let rows = bench::run_experiment(&cfg)?;
            bench::write_rows(&rows, output(&cfg)?)?;
            let failed: Vec<_> = rows.iter().filter(|r| r.is_error()).collect();
            for row in &failed {
                eprintln!("wsvd: eps={:?} n={}: {}", row.eps, row.n, row.error);
            }
            Ok(failed.is_empty())
        }
        Command::Spectrum(opts) => {
            let cfg = opts.config()?;
            let rows = bench::spectrum(&cfg)?;
            bench::write_spectrum(&rows, output(&cfg)?)?;
            Ok(true)
        }
        Command::Loo(opts) => {
            let cfg = opts.config()?;
            let result = bench::loo(&cfg)?;
            bench::write_loo(&result, output(&cfg)?)?;
            eprintln!("wsvd: best eps {}", result.best_epsilon);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("wsvd: {err}");
            ExitCode::from(2)
        }
    }
}
