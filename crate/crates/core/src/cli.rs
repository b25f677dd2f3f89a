//! Command-line front end: `sweep`, `optimize` and `spectrum`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, MethodKind, RunConfig};
use crate::error::Error;
use crate::gate_spectrum::GateSpectrum;
use crate::reservoir::ReservoirSpectrum;
use crate::tradeoff::{self, OptimumMethod};

pub const SWEEP_HEADER: &str = "tau_g_ps,temperature_K,delta_nM,delta_M,delta_total";
pub const SPECTRUM_HEADER: &str = "omega_radps,R_of_omega,S_of_omega";

#[derive(Debug, Parser)]
#[command(
    name = "decotrade",
    version,
    about = "Gate error trade-off between Markovian damping and phonon dressing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the error budget over the sweep block's gate durations.
    Sweep(CommandArgs),
    /// Find the gate duration minimizing the total error.
    Optimize(CommandArgs),
    /// Tabulate R(ω) and S(ω) on a symmetric frequency grid.
    Spectrum(CommandArgs),
}

#[derive(Debug, Args)]
pub struct CommandArgs {
    /// JSON configuration file.
    pub config: PathBuf,
    /// Output file; overrides the config's `output`.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Suppress the human-readable report.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros dropped,
/// scientific notation outside [1e-5, 1e9).
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(RunConfig::from_json(&text)?)
}

/// Sweep CSV for a configuration.
pub fn sweep_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let model = cfg.model()?;
    let taus = cfg.sweep_taus()?;
    let rows = tradeoff::sweep(
        model.dressing,
        &model.family,
        &model.spectrum,
        &model.temperatures,
        &model.channel,
        &taus,
    )?;
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_sig9(r.tau_g),
            format_sig9(r.temperature),
            format_sig9(r.delta_nm),
            format_sig9(r.delta_m),
            format_sig9(r.delta_total)
        )
        .expect("writing to a String");
    }
    Ok(out)
}

/// One optimum per bath temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub temperature_k: f64,
    pub method: OptimumMethod,
    pub tau_opt_ps: f64,
    pub delta_min: f64,
    pub delta_nm: f64,
    pub delta_m: f64,
    /// δ_M/δ_nM at the optimum.
    pub split: f64,
}

pub fn optimize_records(cfg: &RunConfig) -> Result<Vec<OptimumRecord>, CliError> {
    let model = cfg.model()?;
    let bracket = cfg.bracket()?;
    let power_law_r0 = match model.spectrum {
        ReservoirSpectrum::PowerLaw { r0 } => Some(r0),
        ReservoirSpectrum::QuantumDot(_) => None,
    };
    model
        .temperatures
        .iter()
        .map(|&t| {
            let closed_form_ok = power_law_r0.is_some() && t == 0.0;
            let use_analytic = match cfg.method() {
                MethodKind::Auto => closed_form_ok,
                MethodKind::Analytic if closed_form_ok => true,
                MethodKind::Analytic => {
                    return Err(ConfigError::Invalid {
                        key: "optimize.method".into(),
                        message: format!(
                            "the analytic optimum needs reservoir \"powerlaw\" at T = 0 \
                             (got T = {t} K)"
                        ),
                    }
                    .into())
                }
                MethodKind::Numeric => false,
            };
            let r = if use_analytic {
                tradeoff::analytic_optimum(
                    model.family.alpha,
                    power_law_r0.expect("power law"),
                    model.channel.tau_r(),
                )?
            } else {
                tradeoff::numeric_optimum(
                    &model.family,
                    &model.spectrum,
                    t,
                    &model.channel,
                    bracket,
                )?
            };
            Ok(OptimumRecord {
                temperature_k: t,
                method: r.method,
                tau_opt_ps: r.tau_opt,
                delta_min: r.delta_min,
                delta_nm: r.budget.delta_nm,
                delta_m: r.budget.delta_m,
                split: r.budget.delta_m / r.budget.delta_nm,
            })
        })
        .collect()
}

pub fn optimize_report(records: &[OptimumRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let method = match r.method {
            OptimumMethod::AnalyticPowerLaw => "analytic (power law, T = 0)",
            OptimumMethod::NumericScan => "numeric scan + golden section",
        };
        writeln!(out, "T = {} K  [{method}]", format_sig9(r.temperature_k)).unwrap();
        writeln!(out, "  tau_opt   = {} ps", format_sig9(r.tau_opt_ps)).unwrap();
        writeln!(out, "  delta_min = {}", format_sig9(r.delta_min)).unwrap();
        writeln!(
            out,
            "  delta_nM  = {}   delta_M = {}   delta_M/delta_nM = {}",
            format_sig9(r.delta_nm),
            format_sig9(r.delta_m),
            format_sig9(r.split)
        )
        .unwrap();
    }
    out
}

/// Spectrum CSV: R(ω, T) and S(ω) on the symmetric grid of the spectrum block.
pub fn spectrum_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let model = cfg.model()?;
    let block = cfg.spectrum_block();
    let temperature = block.temperature.unwrap_or(model.temperatures[0]);
    let pulse = model.family.at(block.tau_g)?;
    let gate = GateSpectrum::new(pulse)?;
    let n = block.points;
    let span = (n - 1) as f64;
    let mut out = String::with_capacity(48 * (n + 1));
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for i in 0..n {
        // integer numerator keeps the grid exactly symmetric about 0
        let omega = block.omega_max * (2 * i as i64 - (n as i64 - 1)) as f64 / span;
        let r = model.spectrum.thermal(omega, temperature)?;
        let s = gate.spectral_function(omega);
        writeln!(
            out,
            "{},{},{}",
            format_sig9(omega),
            format_sig9(r),
            format_sig9(s)
        )
        .unwrap();
    }
    Ok(out)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let cfg = load_config(&args.config)?;
            let csv = sweep_csv(&cfg)?;
            write_output(args.output.as_deref().or(cfg.output.as_deref()), &csv)
        }
        Command::Spectrum(args) => {
            let cfg = load_config(&args.config)?;
            let csv = spectrum_csv(&cfg)?;
            write_output(args.output.as_deref().or(cfg.output.as_deref()), &csv)
        }
        Command::Optimize(args) => {
            let cfg = load_config(&args.config)?;
            let records = optimize_records(&cfg)?;
            let mut json = serde_json::to_string_pretty(&records).expect("records serialize");
            json.push('\n');
            match args.output.as_deref().or(cfg.output.as_deref()) {
                Some(path) => {
                    if !args.quiet {
                        print!("{}", optimize_report(&records));
                    }
                    write_output(Some(path), &json)
                }
                None => {
                    if !args.quiet {
                        eprint!("{}", optimize_report(&records));
                    }
                    write_output(None, &json)
                }
            }
        }
    }
}
