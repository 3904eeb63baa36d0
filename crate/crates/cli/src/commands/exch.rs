use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;
use stodom::exchangeable::{
    conditional_analogue, count_tail_dominance, definetti_uvector, exch_dominates, exch_fkg_check, extendible_check,
    max_density, MixingLaw, UVector, DEFAULT_GRID,
};
use stodom::{Error, Result};

use super::{outcome, parse_list};
use crate::Outcome;

#[derive(Subcommand, Debug)]
pub enum Exch {
    /// FKG check of an exchangeable measure.
    Fkg(Source),
    /// Domination of the product measure with density rho.
    Dominates(RhoArgs),
    /// Tail criterion on the count distribution.
    Tail(RhoArgs),
    /// Largest dominated product density.
    Maxrho(Source),
    /// Conditional probability of a one given all other sites zero.
    Conditional(Source),
    /// Is the vector a finite section of an infinite exchangeable sequence?
    Extendible(ExtendArgs),
    /// u-vector of a mixing law.
    Uvector(MixArgs),
}

/// Either `--u` or `--atoms` with `--n`.
#[derive(Args, Debug, Serialize)]
pub struct Source {
    /// Per-configuration probabilities u_0,...,u_n.
    #[arg(long, conflicts_with = "atoms")]
    u: Option<String>,
    /// Mixing law as `w:prob,w:prob,...`.
    #[arg(long, requires = "n")]
    atoms: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct RhoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[arg(long)]
    rho: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ExtendArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    /// Number of atoms in the grid on [0, 1].
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct MixArgs {
    #[arg(long)]
    atoms: String,
    #[arg(long)]
    n: usize,
}

fn parse_atoms(text: &str) -> Result<MixingLaw> {
    let atoms = text
        .split(',')
        .map(|pair| {
            let (w, p) = pair.split_once(':').ok_or_else(|| Error::Parameter(format!("atom '{pair}' is not w:prob")))?;
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("bad atom '{pair}'")));
            Ok((parse(w)?, parse(p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    MixingLaw::new(atoms)
}

impl Source {
    fn uvector(&self) -> Result<UVector> {
        match (&self.u, &self.atoms) {
            (Some(u), _) => {
                let u: Vec<f64> = parse_list(u, "u")?;
                if u.is_empty() {
                    return Err(Error::Parameter("u-vector is empty".into()));
                }
                let n = self.n.unwrap_or(u.len() - 1);
                UVector::new(n, u)
            }
            (None, Some(atoms)) => {
                let n = self.n.ok_or_else(|| Error::Parameter("--atoms needs --n".into()))?;
                definetti_uvector(&parse_atoms(atoms)?, n)
            }
            (None, None) => Err(Error::Parameter("give --u or --atoms with --n".into())),
        }
    }
}

pub fn run(cmd: Exch) -> Result<Outcome> {
    match cmd {
        Exch::Fkg(s) => {
            let u = s.uvector()?;
            outcome("exch fkg", &s, None, &json!({"n": u.n(), "fkg": exch_fkg_check(&u)}))
        }
        Exch::Dominates(a) => {
            let u = a.source.uvector()?;
            let d = exch_dominates(&u, a.rho)?;
            outcome("exch dominates", &a, None, &json!({"n": u.n(), "rho": a.rho, "dominates": d}))
        }
        Exch::Tail(a) => {
            let u = a.source.uvector()?;
            let d = count_tail_dominance(&u, a.rho)?;
            outcome("exch tail", &a, None, &json!({"n": u.n(), "rho": a.rho, "tail_dominates": d}))
        }
        Exch::Maxrho(s) => {
            let u = s.uvector()?;
            outcome("exch maxrho", &s, None, &json!({"n": u.n(), "rho_max": max_density(&u)?}))
        }
        Exch::Conditional(s) => {
            let u = s.uvector()?;
            outcome("exch conditional", &s, None, &json!({"n": u.n(), "conditional": conditional_analogue(&u)?}))
        }
        Exch::Extendible(a) => {
            let u = a.source.uvector()?;
            let e = extendible_check(&u, a.grid)?;
            outcome("exch extendible", &a, None, &json!({"n": u.n(), "grid": a.grid, "extendible": e}))
        }
        Exch::Uvector(a) => {
            let u = definetti_uvector(&parse_atoms(&a.atoms)?, a.n)?;
            outcome("exch uvector", &a, None, &json!({"n": u.n(), "u": u.u()}))
        }
    }
}
