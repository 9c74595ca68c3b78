use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exwkb::oracle::EigenMethod;
use serde_json::json;

mod commands;
mod config;
mod error;
mod output;
mod svg;
mod verify;

use commands::{BorelArgs, ConnectArgs, EigenArgs, SeriesArgs};
use config::{resolve, Common};
use error::{CliError, Result};
use output::Output;

#[derive(Parser)]
#[command(name = "exwkb", version, about = "Exact WKB analysis for polynomial potentials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Wronskian,
    Shooting,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stokes graph: turning points, lines, sectors.
    Stokes {
        #[command(flatten)]
        common: Common,
    },
    /// Coefficients of a fundamental χ-series and its Borel transform.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1)]
        sector: usize,
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Borel–Padé analysis: poles, forecast singularities and ray sums.
    Borel {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1)]
        sector: usize,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Padé orders "L/M".
        #[arg(long, default_value = "10/10")]
        pade: String,
        /// Ray angle in radians, repeatable; default is the fastest-decay ray.
        #[arg(long = "ray", allow_hyphen_values = true)]
        rays: Vec<f64>,
    },
    /// Connection coefficients of ψ_from in the basis (ψ_a, ψ_b).
    Connect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: usize,
        /// Basis sectors "a,b".
        #[arg(long, default_value = "1,2")]
        basis: String,
    },
    /// Bound states of −ψ″/(2λ²) + Vψ = Eψ.
    Eigen {
        #[command(flatten)]
        common: Common,
        /// Energy bracket "lo,hi".
        #[arg(long, default_value = "0,10", allow_hyphen_values = true)]
        bracket: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value = "wronskian")]
        method: Method,
    },
    /// Runs a verification suite (eq21, appendix2, lemma3, connection, eigen-ho).
    Verify {
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

fn pair_of<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)> {
    let bad = || CliError::Config(format!("{what} '{s}' is not a pair \"a,b\""));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(cli: Cli) -> Result<()> {
    let (name, common, default_lambda): (&str, &Common, &[f64]) = match &cli.cmd {
        Cmd::Stokes { common } => ("stokes", common, &[1.0]),
        Cmd::Coeffs { common, .. } => ("coeffs", common, &[1.0]),
        Cmd::Borel { common, .. } => ("borel", common, &[10.0]),
        Cmd::Connect { common, .. } => ("connect", common, &[10.0]),
        Cmd::Eigen { common, .. } => ("eigen", common, &[1.0]),
        Cmd::Verify { common, .. } => ("verify", common, &[1.0]),
    };
    let cfg = resolve(common, default_lambda)?;
    let mut out = Output::create(cfg.output.clone())?;
    let arguments = match &cli.cmd {
        Cmd::Stokes { .. } => commands::stokes(&cfg, &mut out)?,
        Cmd::Coeffs { x, sector, order, .. } => {
            commands::coeffs(&cfg, &SeriesArgs { sector: *sector, x: x.clone(), order: *order }, &mut out)?
        }
        Cmd::Borel { x, sector, order, pade, rays, .. } => commands::borel_cmd(
            &cfg,
            &BorelArgs { series: SeriesArgs { sector: *sector, x: x.clone(), order: *order }, pade: pade.clone(), rays: rays.clone() },
            &mut out,
        )?,
        Cmd::Connect { from, basis, .. } => {
            commands::connect(&cfg, &ConnectArgs { from: *from, basis: pair_of(basis, "basis")? }, &mut out)?
        }
        Cmd::Eigen { bracket, count, method, .. } => {
            let method = match method {
                Method::Wronskian => EigenMethod::Wronskian,
                Method::Shooting => EigenMethod::Shooting,
            };
            commands::eigen(&cfg, &EigenArgs { bracket: pair_of(bracket, "bracket")?, count: *count, method }, &mut out)?
        }
        Cmd::Verify { suite, .. } => {
            let report = verify::run(suite)?;
            out.json("verify.json", &report)?;
            let pass = report.pass;
            println!(
                "{} {}: max residual {:.2e} (threshold {:.0e})",
                suite,
                if pass { "PASS" } else { "FAIL" },
                report.max_residual,
                report.threshold
            );
            out.finish(name, json!({ "suite": suite }), &cfg)?;
            if !pass {
                return Err(CliError::Failed(suite.clone()));
            }
            return Ok(());
        }
    };
    out.finish(name, arguments, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("exwkb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
