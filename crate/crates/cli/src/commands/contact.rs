use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;
use stodom::contact::{
    a_n_estimate, one_sided_conditionals, rectangle_crossover, renewal_block_prob, renewal_mean_gap, rho_interval,
    spacetime_rectangle, star_graph_experiment, two_sided_ratio, AnParams, RectangleParams, SheetParams, StarParams,
    DEFAULT_CAP, DEFAULT_HORIZON,
};
use stodom::Result;

use super::{outcome, parse_list};
use crate::Outcome;

#[derive(Subcommand, Debug)]
pub enum Contact {
    /// Probability that the upper invariant measure is 0 on [0, n].
    An(AnArgs),
    /// Bracket on the largest dominated product density.
    RhoInterval(RhoArgs),
    /// Half-line with attached star vertices.
    Star(StarArgs),
    /// Space-time rectangle probability for the symmetric process.
    Rectangle(RectangleArgs),
    /// Flip-process rectangle value against the contact factor on a grid of N = T.
    Crossover(CrossoverArgs),
    /// Renewal bound on block-zero probabilities.
    Renewal(RenewalArgs),
    /// One-sided conditionals g(l), l = 0..max_l.
    Conditionals(ConditionalArgs),
    /// Two-sided conditional f(k, l).
    TwoSided(TwoSidedArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct AnArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    horizon: f64,
    /// Infected count at which a dual run counts as surviving.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct RhoArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Blocks [0, n] for n < max-block are simulated.
    #[arg(long, default_value_t = 6)]
    max_block: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    horizon: f64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct StarArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    n_star: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 20.0)]
    horizon: f64,
    #[arg(long)]
    probe_rho: Option<f64>,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct RectangleArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 20.0)]
    warmup: f64,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct CrossoverArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Comma-separated N = T values.
    #[arg(long, default_value = "4,6,8")]
    grid: String,
}

#[derive(Args, Debug, Serialize)]
pub struct RenewalArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SheetArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 20.0)]
    horizon: f64,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
}

impl SheetArgs {
    fn params(&self) -> SheetParams {
        SheetParams { beta: self.beta, p: self.p, horizon: self.horizon, replicas: self.reps, seed: self.seed }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ConditionalArgs {
    #[arg(long)]
    max_l: usize,
    #[command(flatten)]
    #[serde(flatten)]
    sheet: SheetArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct TwoSidedArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    #[command(flatten)]
    #[serde(flatten)]
    sheet: SheetArgs,
}

pub fn run(cmd: Contact) -> Result<Outcome> {
    match cmd {
        Contact::An(a) => {
            let params = AnParams { n: a.n, beta: a.beta, p: a.p, horizon: a.horizon, replicas: a.reps, seed: a.seed, cap: a.cap };
            let r = a_n_estimate(&params)?;
            let payload = json!({
                "point": r.estimate.point,
                "stderr": r.estimate.stderr,
                "replicas": r.estimate.replicas,
                "bias": r.bias_note,
                "params": r.params,
                "alive_fraction": r.alive_fraction,
                "capped_fraction": r.capped_fraction,
                "half_width": r.half_width,
            });
            outcome("contact an", &a, Some(a.seed), &payload)
        }
        Contact::RhoInterval(a) => {
            let template = AnParams { n: 0, beta: a.beta, p: a.p, horizon: a.horizon, replicas: a.reps, seed: a.seed, cap: a.cap };
            let r = rho_interval(a.beta, a.p, a.max_block, &template)?;
            outcome("contact rho-interval", &a, Some(a.seed), &r)
        }
        Contact::Star(a) => {
            let params = StarParams {
                lambda: a.lambda,
                n_star: a.n_star,
                horizon: a.horizon,
                replicas: a.reps,
                seed: a.seed,
                probe_rho: a.probe_rho,
            };
            outcome("contact star", &a, Some(a.seed), &star_graph_experiment(&params)?)
        }
        Contact::Rectangle(a) => {
            let params = RectangleParams {
                lambda: a.lambda,
                rho: a.rho,
                r: a.r,
                n: a.n,
                t: a.t,
                warmup: a.warmup,
                replicas: a.reps,
                seed: a.seed,
            };
            outcome("contact rectangle", &a, Some(a.seed), &spacetime_rectangle(&params)?)
        }
        Contact::Crossover(a) => {
            let grid: Vec<usize> = parse_list(&a.grid, "grid")?;
            outcome("contact crossover", &a, None, &rectangle_crossover(a.lambda, a.rho, a.r, &grid)?)
        }
        Contact::Renewal(a) => {
            let payload = json!({
                "beta": a.beta,
                "n": a.n,
                "block_prob": renewal_block_prob(a.beta, a.n)?,
                "mean_gap": renewal_mean_gap(a.beta)?,
            });
            outcome("contact renewal", &a, None, &payload)
        }
        Contact::Conditionals(a) => {
            let g = one_sided_conditionals(a.max_l, &a.sheet.params())?;
            let rows: Vec<_> = g.iter().enumerate().map(|(l, e)| json!({"l": l, "point": e.point, "stderr": e.stderr, "replicas": e.replicas})).collect();
            outcome("contact conditionals", &a, Some(a.sheet.seed), &json!({"g": rows}))
        }
        Contact::TwoSided(a) => {
            let r = two_sided_ratio(a.k, a.l, &a.sheet.params())?;
            outcome("contact two-sided", &a, Some(a.sheet.seed), &r)
        }
    }
}
