//! `dirac-wkb`: spectra, phase checks and eigenfunction tables for the
//! semiclassical Dirac operator with a mass kink.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_wkb::diagnostics::{
    bs_records, compare_spectra, eigenfunction_comparison, fd_records, SpectrumRecord,
};
use dirac_wkb::operator::{default_grid, Grid, DEFAULT_DOMAIN};
use dirac_wkb::pt_exact::pt_spectrum;
use dirac_wkb::wkb::{weyl_count, zero_mode};
use dirac_wkb::{MassProfile, Sector, DEFAULT_THRESHOLD};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{columns_csv, emit, fmt_g, json, spectrum_csv};

#[derive(Parser)]
#[command(name = "dirac-wkb", version, about = "Bound states of the semiclassical Dirac operator with a mass kink")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form Pöschl–Teller eigenvalues of both sectors (tanh only)
    Exact(RunConfig),
    /// Bohr–Sommerfeld energies of one sector
    Bs(RunConfig),
    /// Finite-difference bound states of one sector
    Fd(RunConfig),
    /// Bohr–Sommerfeld and finite-difference spectra side by side
    Compare(RunConfig),
    /// Phase residuals of the finite-difference energies
    PhaseCheck(RunConfig),
    /// Finite-difference eigenvector next to its WKB approximation
    Eigenfunction {
        #[command(flatten)]
        config: RunConfig,
        /// State index within the sector
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Normalized zero mode exp(-M(x)/ε) on the grid
    ZeroMode(RunConfig),
    /// Weyl estimate Φ(ℰ)/π of the number of states below ℰ
    Weyl {
        #[command(flatten)]
        config: RunConfig,
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
    },
    /// `compare` over a comma-separated list of ε
    Sweep {
        #[command(flatten)]
        config: RunConfig,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_epsilon)]
        epsilons: Vec<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// tanh, erf or sigmoid
    #[arg(long, default_value = "tanh", value_parser = parse_profile)]
    profile: MassProfile,
    #[arg(long, default_value_t = 0.15, value_parser = parse_epsilon)]
    epsilon: f64,
    /// Pseudo-spin index σ_D (-1 or 1)
    #[arg(long, default_value_t = -1, allow_hyphen_values = true, value_parser = parse_sigma)]
    sigma: i32,
    /// Box as `a,b`
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    domain: Option<Vec<f64>>,
    /// Grid points (default max(1200, ⌊120/ε⌋ + 1))
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD, value_parser = parse_threshold)]
    threshold: f64,
    /// Output file (stdout when absent)
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn parse_profile(s: &str) -> Result<MassProfile, String> {
    s.parse().map_err(|e: dirac_wkb::Error| e.to_string())
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("epsilon must lie in (0, 1), got {v}"))
    }
}

fn parse_sigma(s: &str) -> Result<i32, String> {
    match s.trim() {
        "-1" => Ok(-1),
        "1" | "+1" => Ok(1),
        other => Err(format!("sigma must be -1 or 1, got {other}")),
    }
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("threshold must lie in (0, 1], got {v}"))
    }
}

impl RunConfig {
    fn sector(&self) -> Sector {
        Sector::from_sign(self.sigma).expect("validated by the parser")
    }

    fn grid(&self, epsilon: f64) -> Result<Grid> {
        let (a, b) = match self.domain.as_deref() {
            Some([a, b]) => (*a, *b),
            _ => DEFAULT_DOMAIN,
        };
        let n = match self.points {
            Some(n) => n,
            None => default_grid(epsilon)?.n,
        };
        Ok(Grid::new(a, b, n)?)
    }

    fn write_records(&self, records: &[SpectrumRecord]) -> Result<()> {
        let text = match self.format {
            Format::Csv => spectrum_csv(records),
            Format::Json => json(records)?,
        };
        self.write(&text)
    }

    fn write(&self, text: &str) -> Result<()> {
        emit(text, self.output.as_deref())
            .with_context(|| format!("writing {}", self.output.as_ref().map_or("stdout".into(), |p| p.display().to_string())))
    }
}

fn exact(config: &RunConfig) -> Result<()> {
    if config.profile != MassProfile::Tanh {
        anyhow::bail!("closed-form spectra exist only for the tanh profile");
    }
    let s = pt_spectrum(config.epsilon)?;
    let record = |sigma_d: i32, n: usize, e: f64| SpectrumRecord {
        profile: "tanh".into(),
        epsilon: config.epsilon,
        sigma_d,
        n,
        e_exact: Some(e),
        e_bs: None,
        e_fd: None,
        abs_diff: None,
        phase_residual: None,
    };
    let mut records: Vec<SpectrumRecord> = s.upper.iter().enumerate().map(|(n, &e)| record(-1, n, e)).collect();
    records.extend(s.lower.iter().enumerate().map(|(n, &e)| record(1, n, e)));
    config.write_records(&records)
}

fn compare(config: &RunConfig, epsilon: f64) -> Result<Vec<SpectrumRecord>> {
    let grid = config.grid(epsilon)?;
    let c = compare_spectra(config.profile, epsilon, config.sector(), &grid, config.threshold)?;
    if let Some((bs, fd)) = c.count_mismatch {
        eprintln!(
            "warning: {} ε = {epsilon} σ_D = {}: {bs} Bohr–Sommerfeld vs {fd} finite-difference states; rows aligned on the shorter list",
            config.profile, config.sigma
        );
    }
    Ok(c.records)
}

fn phase_check(config: &RunConfig) -> Result<()> {
    let grid = config.grid(config.epsilon)?;
    let sector = config.sector();
    let mut records = fd_records(config.profile, config.epsilon, sector, &grid, config.threshold)?;
    // the zero mode has no phase to check
    if sector == Sector::Upper {
        records.retain(|r| r.n > 0);
    }
    config.write_records(&records)
}

#[derive(Serialize)]
struct EigenfunctionTable {
    profile: String,
    epsilon: f64,
    sigma_d: i32,
    n: usize,
    energy_fd: f64,
    energy_bs: f64,
    overlap_error: f64,
    x: Vec<f64>,
    psi_fd: Vec<f64>,
    psi_wkb: Vec<Option<f64>>,
}

fn eigenfunction(config: &RunConfig, n: usize) -> Result<()> {
    let grid = config.grid(config.epsilon)?;
    let c = eigenfunction_comparison(config.profile, config.epsilon, config.sector(), n, &grid)?;
    eprintln!("overlap error {}", fmt_g(c.error));
    let text = match config.format {
        Format::Csv => columns_csv(
            &["x", "psi_fd", "psi_wkb"],
            &[
                c.x.iter().copied().map(Some).collect(),
                c.psi_fd.iter().copied().map(Some).collect(),
                c.psi_wkb.clone(),
            ],
        ),
        Format::Json => json(&EigenfunctionTable {
            profile: config.profile.name().into(),
            epsilon: config.epsilon,
            sigma_d: config.sigma,
            n,
            energy_fd: c.energy_fd,
            energy_bs: c.energy_bs,
            overlap_error: c.error,
            x: c.x,
            psi_fd: c.psi_fd,
            psi_wkb: c.psi_wkb,
        })?,
    };
    config.write(&text)
}

#[derive(Serialize)]
struct ZeroModeTable {
    profile: String,
    epsilon: f64,
    x: Vec<f64>,
    psi: Vec<f64>,
}

fn zero_mode_cmd(config: &RunConfig) -> Result<()> {
    let grid = config.grid(config.epsilon)?;
    let psi = zero_mode(config.profile, config.epsilon, &grid)?;
    let x = grid.points();
    let text = match config.format {
        Format::Csv => columns_csv(
            &["x", "psi"],
            &[x.into_iter().map(Some).collect(), psi.into_iter().map(Some).collect()],
        ),
        Format::Json => json(&ZeroModeTable {
            profile: config.profile.name().into(),
            epsilon: config.epsilon,
            x,
            psi,
        })?,
    };
    config.write(&text)
}

#[derive(Serialize)]
struct WeylRow {
    profile: String,
    epsilon: f64,
    energy: f64,
    weyl_count: f64,
}

fn weyl(config: &RunConfig, energy: f64) -> Result<()> {
    let row = WeylRow {
        profile: config.profile.name().into(),
        epsilon: config.epsilon,
        energy,
        weyl_count: weyl_count(config.profile, config.epsilon, energy)?,
    };
    let text = match config.format {
        Format::Csv => format!(
            "profile,epsilon,energy,weyl_count\n{},{},{},{}\n",
            row.profile,
            fmt_g(row.epsilon),
            fmt_g(row.energy),
            fmt_g(row.weyl_count)
        ),
        Format::Json => json(&row)?,
    };
    config.write(&text)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("DIRAC_WKB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("DIRAC_WKB_THREADS must be a positive integer, got {v:?}"))?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn sweep(config: &RunConfig, epsilons: &[f64]) -> Result<()> {
    let pool = thread_pool()?;
    let tables: Vec<Result<Vec<SpectrumRecord>>> =
        pool.install(|| epsilons.par_iter().map(|&eps| compare(config, eps)).collect());
    let mut records = Vec::new();
    for t in tables {
        records.extend(t?);
    }
    config.write_records(&records)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Exact(c) => exact(&c),
        Command::Bs(c) => {
            let records = bs_records(c.profile, c.epsilon, c.sector(), c.threshold)?;
            c.write_records(&records)
        }
        Command::Fd(c) => {
            let grid = c.grid(c.epsilon)?;
            let records = fd_records(c.profile, c.epsilon, c.sector(), &grid, c.threshold)?;
            c.write_records(&records)
        }
        Command::Compare(c) => {
            let records = compare(&c, c.epsilon)?;
            c.write_records(&records)
        }
        Command::PhaseCheck(c) => phase_check(&c),
        Command::Eigenfunction { config, n } => eigenfunction(&config, n),
        Command::ZeroMode(c) => zero_mode_cmd(&c),
        Command::Weyl { config, energy } => weyl(&config, energy),
        Command::Sweep { config, epsilons } => sweep(&config, &epsilons),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
