use serde::{Deserialize, Serialize};

use super::engine::{ContactEngine, EventKind};
use super::estimators::{light_cone_half_width, MIN_REPLICAS};
use super::graph::GraphSpec;
use crate::error::{ensure_param, Result};
use crate::estimate::EstimateCI;
use crate::exec::replicate;

/// `(1 - rho)^N e^{-r rho T N}`: probability that the stationary flip
/// process with rates `r rho` up and `r (1 - rho)` down keeps `[1, N]` at 0
/// throughout `[0, T]`.
pub fn flip_rectangle_value(rho: f64, r: f64, n: usize, t: f64) -> f64 {
    (1.0 - rho).powi(n as i32) * (-r * rho * t * n as f64).exp()
}

/// `e^{-2 lambda T}`, the probability of no arrows into `[1, N]` from
/// outside over `[0, T]`.
pub fn contact_rectangle_factor(lambda: f64, t: f64) -> f64 {
    (-2.0 * lambda * t).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleParams {
    pub lambda: f64,
    pub rho: f64,
    pub r: f64,
    pub n: usize,
    pub t: f64,
    /// Time the all-ones start runs before the rectangle opens.
    pub warmup: f64,
    pub replicas: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectangleReport {
    pub params: RectangleParams,
    pub flip_value: f64,
    pub contact_factor: f64,
    /// Frequency of `[1, N]` all 0 at the end of the warmup.
    pub block_zero: EstimateCI,
    /// `contact_factor * block_zero`.
    pub contact_lower_bound: f64,
    /// Frequency of `[1, N]` staying 0 over the whole rectangle.
    pub contact_estimate: EstimateCI,
    pub half_width: usize,
}

/// Space-time rectangle `[1, N] x [0, T]` for the symmetric process with
/// rate `lambda` per neighbor against the flip process.
pub fn spacetime_rectangle(params: &RectangleParams) -> Result<RectangleReport> {
    ensure_param!(params.lambda > 0.0 && params.lambda.is_finite(), "lambda must be positive");
    ensure_param!((0.0..1.0).contains(&params.rho), "rho must lie in [0, 1), got {}", params.rho);
    ensure_param!(params.r > 0.0 && params.t >= 0.0 && params.warmup > 0.0, "rates and times must be positive");
    ensure_param!(params.n >= 1, "rectangle needs at least one site");
    ensure_param!(params.replicas >= MIN_REPLICAS, "need at least {MIN_REPLICAS} replicas, got {}", params.replicas);
    let total = params.warmup + params.t;
    let half_width = light_cone_half_width(params.n, 2.0 * params.lambda, total);
    let graph = GraphSpec::symmetric_segment(half_width, params.lambda)?;
    let block: Vec<usize> = (1..=params.n as i64).map(|x| graph.segment_index(x).expect("block inside")).collect();
    let inside = {
        let mut v = vec![false; graph.len()];
        for &i in &block {
            v[i] = true;
        }
        v
    };
    let init = vec![1u8; graph.len()];
    let rows = replicate(params.replicas, params.seed, |_, rng| -> Result<(bool, bool)> {
        let mut engine = ContactEngine::new(&graph, &init)?;
        engine.run_quiet(params.warmup, rng);
        let zero = block.iter().all(|&i| engine.state()[i] == 0);
        let mut kept = zero;
        if zero && params.t > 0.0 {
            engine.run(total, rng, |e, _| {
                if e.kind == EventKind::Infect && inside[e.site] {
                    kept = false;
                }
                kept
            });
        }
        Ok((zero, kept))
    });
    let rows: Vec<(bool, bool)> = rows.into_iter().collect::<Result<_>>()?;
    let block_zero = EstimateCI::from_counts(rows.iter().filter(|r| r.0).count(), params.replicas, params.seed);
    let contact_estimate = EstimateCI::from_counts(rows.iter().filter(|r| r.1).count(), params.replicas, params.seed);
    let contact_factor = contact_rectangle_factor(params.lambda, params.t);
    Ok(RectangleReport {
        params: *params,
        flip_value: flip_rectangle_value(params.rho, params.r, params.n, params.t),
        contact_factor,
        block_zero,
        contact_lower_bound: contact_factor * block_zero.point,
        contact_estimate,
        half_width,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRow {
    pub n: usize,
    pub flip_value: f64,
    pub contact_factor: f64,
    /// True when the flip value lies below the contact factor.
    pub flip_below: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverReport {
    pub lambda: f64,
    pub rho: f64,
    pub r: f64,
    pub rows: Vec<CrossoverRow>,
    /// True when `flip_below` changes value along the grid.
    pub crosses: bool,
    /// Real `N` with equality on the diagonal `N = T`:
    /// `(2 lambda + ln(1 - rho)) / (r rho)`.
    pub crossover_n: f64,
}

/// Compares the flip-process value with the contact factor on the diagonal
/// `N = T` over `grid`. Deterministic.
pub fn rectangle_crossover(lambda: f64, rho: f64, r: f64, grid: &[usize]) -> Result<CrossoverReport> {
    ensure_param!(lambda > 0.0 && r > 0.0, "rates must be positive");
    ensure_param!(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1), got {rho}");
    ensure_param!(!grid.is_empty(), "empty grid");
    let rows: Vec<CrossoverRow> = grid
        .iter()
        .map(|&n| {
            let flip_value = flip_rectangle_value(rho, r, n, n as f64);
            let contact_factor = contact_rectangle_factor(lambda, n as f64);
            CrossoverRow { n, flip_value, contact_factor, flip_below: flip_value < contact_factor }
        })
        .collect();
    let crosses = rows.windows(2).any(|w| w[0].flip_below != w[1].flip_below);
    let crossover_n = (2.0 * lambda + (1.0 - rho).ln()) / (r * rho);
    Ok(CrossoverReport { lambda, rho, r, rows, crosses, crossover_n })
}
