use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use stodom::lattice::{
    dominates, dominates_by_flow, dominates_by_upsets, downward_fkg_check, enumerate_up_sets, fkg_lattice_check,
    product_measure, FiniteMeasure,
};
use stodom::{Error, Result};

use super::outcome;
use crate::Outcome;

#[derive(Subcommand, Debug)]
pub enum Dom {
    /// Does mu dominate nu?
    Check(CheckArgs),
    /// Count the up-sets of {0,1}^n.
    Upsets(UpsetArgs),
    /// Lattice and downward FKG checks.
    Fkg(FkgArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    /// JSON measure file or `product:<rho>`.
    #[arg(long)]
    mu: String,
    /// JSON measure file or `product:<rho>`.
    #[arg(long)]
    nu: String,
    /// Site count, needed only when both sides are product measures.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Auto,
    Upsets,
    Flow,
}

#[derive(Args, Debug, Serialize)]
pub struct UpsetArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FkgArgs {
    /// JSON measure file or `product:<rho>` (with --n).
    #[arg(long)]
    mu: String,
    #[arg(long)]
    n: Option<usize>,
}

enum MeasureArg {
    Loaded(FiniteMeasure),
    Product(f64),
}

fn parse_measure(text: &str) -> Result<MeasureArg> {
    if let Some(rho) = text.strip_prefix("product:") {
        let rho = rho.parse().map_err(|_| Error::Parameter(format!("bad product density '{rho}'")))?;
        return Ok(MeasureArg::Product(rho));
    }
    let path = PathBuf::from(text);
    let raw = std::fs::read_to_string(&path).map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))?;
    let mu = serde_json::from_str(&raw).map_err(|e| Error::Parameter(format!("bad measure in {}: {e}", path.display())))?;
    Ok(MeasureArg::Loaded(mu))
}

fn resolve(arg: MeasureArg, n: Option<usize>) -> Result<FiniteMeasure> {
    match arg {
        MeasureArg::Loaded(mu) => Ok(mu),
        MeasureArg::Product(rho) => {
            let n = n.ok_or_else(|| Error::Parameter("product measure needs a site count (--n)".into()))?;
            product_measure(n, rho)
        }
    }
}

pub fn run(cmd: Dom) -> Result<Outcome> {
    match cmd {
        Dom::Check(a) => {
            let (mu, nu) = (parse_measure(&a.mu)?, parse_measure(&a.nu)?);
            let inferred = match (&mu, &nu) {
                (MeasureArg::Loaded(m), _) | (_, MeasureArg::Loaded(m)) => Some(m.n()),
                _ => a.n,
            };
            let n = a.n.or(inferred);
            let (mu, nu) = (resolve(mu, n)?, resolve(nu, n)?);
            let dominated = match a.method {
                Method::Auto => dominates(&mu, &nu)?,
                Method::Upsets => dominates_by_upsets(&mu, &nu)?,
                Method::Flow => dominates_by_flow(&mu, &nu)?,
            };
            outcome("dom check", &a, None, &json!({"n": mu.n(), "dominates": dominated}))
        }
        Dom::Upsets(a) => {
            let family = enumerate_up_sets(a.n)?;
            outcome("dom upsets", &a, None, &json!({"n": a.n, "count": family.len()}))
        }
        Dom::Fkg(a) => {
            let mu = resolve(parse_measure(&a.mu)?, a.n)?;
            let lattice = fkg_lattice_check(&mu)?;
            let downward = downward_fkg_check(&mu)?;
            outcome("dom fkg", &a, None, &json!({"n": mu.n(), "fkg_lattice": lattice, "downward_fkg": downward}))
        }
    }
}
