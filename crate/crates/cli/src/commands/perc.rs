use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use stodom::ising_lattice::Boundary;
use stodom::percolation::{percolation_experiment, PercolationSource};
use stodom::{Error, Result};

use super::outcome;
use crate::Outcome;

#[derive(Subcommand, Debug)]
pub enum Perc {
    /// Crossing and cluster statistics over replicas.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SourceKind {
    Product,
    Contact,
    Ising,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BoundaryArg {
    Plus,
    Minus,
}

#[derive(Args, Debug, Serialize)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    source: SourceKind,
    /// Density for the product source.
    #[arg(long)]
    rho: Option<f64>,
    /// Infection rate per directed edge for the contact source.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 40.0)]
    horizon: f64,
    #[arg(long = "J")]
    #[serde(rename = "J")]
    j: Option<f64>,
    #[arg(long, value_enum, default_value = "plus")]
    boundary: BoundaryArg,
    #[arg(long, default_value_t = 500)]
    sweeps: usize,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
}

fn need(value: Option<f64>, flag: &str, source: &str) -> Result<f64> {
    value.ok_or_else(|| Error::Parameter(format!("the {source} source needs --{flag}")))
}

pub fn run(cmd: Perc) -> Result<Outcome> {
    let Perc::Run(a) = cmd;
    let source = match a.source {
        SourceKind::Product => PercolationSource::Product { rho: need(a.rho, "rho", "product")? },
        SourceKind::Contact => PercolationSource::Contact { lambda: need(a.lambda, "lambda", "contact")?, horizon: a.horizon },
        SourceKind::Ising => PercolationSource::Ising {
            j: need(a.j, "J", "ising")?,
            boundary: match a.boundary {
                BoundaryArg::Plus => Boundary::Plus,
                BoundaryArg::Minus => Boundary::Minus,
            },
            sweeps: a.sweeps,
        },
    };
    let report = percolation_experiment(&source, a.l, a.reps, a.seed)?;
    outcome("perc run", &a, Some(a.seed), &report)
}
