use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use stodom::ising_lattice::{block_zero_rate, onsager_rho_with, plus_minus_probe, sigma_detailed, Boundary, LatticeGibbsParams, QuadratureSpec};
use stodom::ising_tree::{alpha, chain_matrices, max_product_density, solve_t, TreeState};
use stodom::Result;

use super::outcome;
use crate::Outcome;

#[derive(Subcommand, Debug)]
pub enum Ising {
    /// The 3-regular tree.
    #[command(subcommand)]
    Tree(Tree),
    /// The square lattice.
    #[command(subcommand)]
    Z2(Z2),
}

#[derive(Subcommand, Debug)]
pub enum Tree {
    /// Positive fixed point t_J.
    Tpoint(JArg),
    /// Plus, minus and free transition matrices.
    Matrices(JArg),
    /// Largest J1 dominated by the minus state at J2.
    Alpha(AlphaArgs),
    /// Largest product density dominated by one state.
    Rho(TreeRhoArgs),
}

#[derive(Subcommand, Debug)]
pub enum Z2 {
    /// Largest dominated product density from the free energy.
    Rho(Z2RhoArgs),
    /// Rate of the all-zero window under one boundary.
    Blockrate(BlockArgs),
    /// Plus and minus window probabilities from coupled chains.
    ProbePm(ProbeArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct JArg {
    #[arg(long = "J")]
    #[serde(rename = "J")]
    j: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct AlphaArgs {
    #[arg(long = "J2")]
    #[serde(rename = "J2")]
    j2: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StateArg {
    Plus,
    Minus,
    Free,
}

#[derive(Args, Debug, Serialize)]
pub struct TreeRhoArgs {
    #[arg(long = "J")]
    #[serde(rename = "J")]
    j: f64,
    #[arg(long, value_enum)]
    state: StateArg,
}

#[derive(Args, Debug, Serialize)]
pub struct Z2RhoArgs {
    #[arg(long = "J")]
    #[serde(rename = "J")]
    j: f64,
    /// Gauss-Legendre order per panel before doubling.
    #[arg(long, default_value_t = 16)]
    quad_nodes: usize,
    #[arg(long, default_value_t = 1e-10)]
    target: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BoundaryArg {
    Plus,
    Minus,
}

#[derive(Args, Debug, Serialize)]
pub struct BlockArgs {
    #[arg(long = "J")]
    #[serde(rename = "J")]
    j: f64,
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: usize,
    #[arg(long, value_enum, default_value = "plus")]
    boundary: BoundaryArg,
    #[arg(long)]
    sweeps: usize,
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ProbeArgs {
    #[arg(long = "J")]
    #[serde(rename = "J")]
    j: f64,
    #[arg(long)]
    n: usize,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: usize,
    #[arg(long)]
    sweeps: usize,
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    #[arg(long)]
    seed: u64,
}

pub fn run(cmd: Ising) -> Result<Outcome> {
    match cmd {
        Ising::Tree(Tree::Tpoint(a)) => outcome("ising tree tpoint", &a, None, &solve_t(a.j)?),
        Ising::Tree(Tree::Matrices(a)) => outcome("ising tree matrices", &a, None, &chain_matrices(a.j)?),
        Ising::Tree(Tree::Alpha(a)) => outcome("ising tree alpha", &a, None, &json!({"J2": a.j2, "alpha": alpha(a.j2)?})),
        Ising::Tree(Tree::Rho(a)) => {
            let state = match a.state {
                StateArg::Plus => TreeState::Plus,
                StateArg::Minus => TreeState::Minus,
                StateArg::Free => TreeState::Free,
            };
            let p = chain_matrices(a.j)?.get(state);
            let payload = json!({
                "J": a.j,
                "state": state,
                "p01": p.p01,
                "p11": p.p11,
                "rho_max": max_product_density(&p)?,
            });
            outcome("ising tree rho", &a, None, &payload)
        }
        Ising::Z2(Z2::Rho(a)) => {
            let quad = QuadratureSpec { nodes: a.quad_nodes, target: a.target };
            let s = sigma_detailed(a.j, &quad)?;
            let payload = json!({
                "J": a.j,
                "rho": onsager_rho_with(a.j, &quad)?,
                "sigma": s.value,
                "error_estimate": s.error_estimate,
                "nodes": s.nodes,
                "panels": s.panels,
            });
            outcome("ising z2 rho", &a, None, &payload)
        }
        Ising::Z2(Z2::Blockrate(a)) => {
            let boundary = match a.boundary {
                BoundaryArg::Plus => Boundary::Plus,
                BoundaryArg::Minus => Boundary::Minus,
            };
            let params = LatticeGibbsParams { j: a.j, l: a.l, boundary, sweeps: a.sweeps, burn_in: a.burn_in, seed: a.seed };
            outcome("ising z2 blockrate", &a, Some(a.seed), &block_zero_rate(a.n, &params)?)
        }
        Ising::Z2(Z2::ProbePm(a)) => {
            let params = LatticeGibbsParams { j: a.j, l: a.l, boundary: Boundary::Plus, sweeps: a.sweeps, burn_in: a.burn_in, seed: a.seed };
            outcome("ising z2 probe-pm", &a, Some(a.seed), &plus_minus_probe(a.n, &params)?)
        }
    }
}
