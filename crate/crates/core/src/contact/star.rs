use serde::{Deserialize, Serialize};

use super::engine::{ContactEngine, EventKind};
use super::estimators::MIN_REPLICAS;
use super::graph::GraphSpec;
use crate::error::{ensure_param, Result};
use crate::estimate::EstimateCI;
use crate::exec::replicate;

/// Largest `rho` certified for the star graph: `(lambda - 4) / lambda` from
/// the half-line, further limited by `4n <= lambda (1 - rho)^n`; 0 when
/// `4n > lambda`.
pub fn star_certified_rho(lambda: f64, n_star: usize) -> f64 {
    if lambda <= 4.0 {
        return 0.0;
    }
    let base = (lambda - 4.0) / lambda;
    if n_star == 0 {
        return base;
    }
    let n = n_star as f64;
    if 4.0 * n > lambda {
        return 0.0;
    }
    base.min(1.0 - (4.0 * n / lambda).powf(1.0 / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams {
    pub lambda: f64,
    pub n_star: usize,
    /// Time at which the all-ones start is sampled.
    pub horizon: f64,
    pub replicas: usize,
    pub seed: u64,
    /// Density tested by the lower-bound argument; defaults to `(lambda - 4)/lambda`,
    /// or 1/2 when that is not positive.
    pub probe_rho: Option<f64>,
}

impl StarParams {
    pub fn new(lambda: f64, n_star: usize, replicas: usize, seed: u64) -> Self {
        StarParams { lambda, n_star, horizon: 20.0, replicas, seed, probe_rho: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarReport {
    pub params: StarParams,
    /// Frequency of all star vertices being 0 at the horizon.
    pub all_star_zero: EstimateCI,
    /// Frequency of the first star vertex being 0; absent when there are none.
    pub first_star_zero: Option<EstimateCI>,
    pub certified_rho: f64,
    /// `(1 - certified_rho)^n_star`, an upper bound on the all-zero probability.
    pub domination_bound: f64,
    pub probe_rho: f64,
    /// Window `M` with `e^{-M} = probe_rho / 2`.
    pub window: f64,
    /// Frequency of vertex 0 staying 0 over `[horizon, horizon + window]`.
    pub origin_quiet: EstimateCI,
    /// `P(A) (1 - probe_rho/2)^n_star` with `P(A)` estimated.
    pub analytic_lower_bound: f64,
    /// True when the lower bound exceeds `(1 - probe_rho)^n_star`, which
    /// rules out domination of the probe density.
    pub probe_excluded: bool,
    pub half_line_length: usize,
    pub bias_note: &'static str,
}

const STAR_BIAS_NOTE: &str = "all-ones start at a finite horizon dominates the upper invariant measure, \
so zero frequencies are biased low";

/// Monte Carlo for the half-line with `n_star` leaves attached to 0,
/// infection flowing toward 0 at rate `lambda`.
pub fn star_graph_experiment(params: &StarParams) -> Result<StarReport> {
    let lambda = params.lambda;
    ensure_param!(lambda > 0.0 && lambda.is_finite(), "lambda must be positive, got {lambda}");
    ensure_param!(params.horizon > 0.0, "horizon must be positive");
    ensure_param!(params.replicas >= MIN_REPLICAS, "need at least {MIN_REPLICAS} replicas, got {}", params.replicas);
    let probe_rho = params.probe_rho.unwrap_or(if lambda > 4.0 { (lambda - 4.0) / lambda } else { 0.5 });
    ensure_param!(probe_rho > 0.0 && probe_rho < 1.0, "probe density must lie in (0, 1), got {probe_rho}");
    let window = (2.0 / probe_rho).ln();
    let total = params.horizon + window;
    let lt = lambda * total;
    let length = (lt + 10.0 * lt.sqrt()).ceil() as usize + 40;
    let graph = GraphSpec::star_half_line(lambda, params.n_star, length)?;
    let init = vec![1u8; graph.len()];
    let stars: Vec<usize> = (length + 1..graph.len()).collect();

    let rows = replicate(params.replicas, params.seed, |_, rng| -> Result<(bool, bool, bool)> {
        let mut engine = ContactEngine::new(&graph, &init)?;
        engine.run_quiet(params.horizon, rng);
        let all_zero = stars.iter().all(|&v| engine.state()[v] == 0);
        let first_zero = stars.first().is_none_or(|&v| engine.state()[v] == 0);
        let mut quiet = engine.state()[0] == 0;
        if quiet {
            engine.run(total, rng, |e, _| {
                if e.site == 0 && e.kind == EventKind::Infect {
                    quiet = false;
                }
                quiet
            });
        }
        Ok((all_zero, first_zero, quiet))
    });
    let rows: Vec<(bool, bool, bool)> = rows.into_iter().collect::<Result<_>>()?;
    let count = |f: fn(&(bool, bool, bool)) -> bool| rows.iter().filter(|r| f(r)).count();
    let all_star_zero = EstimateCI::from_counts(count(|r| r.0), params.replicas, params.seed);
    let first_star_zero = (params.n_star > 0).then(|| EstimateCI::from_counts(count(|r| r.1), params.replicas, params.seed));
    let origin_quiet = EstimateCI::from_counts(count(|r| r.2), params.replicas, params.seed);
    let certified_rho = star_certified_rho(lambda, params.n_star);
    let n = params.n_star as i32;
    let analytic_lower_bound = origin_quiet.point * (1.0 - probe_rho / 2.0).powi(n);
    Ok(StarReport {
        params: *params,
        all_star_zero,
        first_star_zero,
        certified_rho,
        domination_bound: (1.0 - certified_rho).powi(n),
        probe_rho,
        window,
        origin_quiet,
        analytic_lower_bound,
        probe_excluded: analytic_lower_bound > (1.0 - probe_rho).powi(n),
        half_line_length: length,
        bias_note: STAR_BIAS_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Largest rho with `4n <= lambda (1 - rho)^n`, by bisection.
    fn bisection_rho(lambda: f64, n: usize) -> f64 {
        let ok = |rho: f64| 4.0 * n as f64 <= lambda * (1.0 - rho).powi(n as i32);
        if !ok(0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid
            } else {
                hi = mid
            }
        }
        lo
    }

    #[test]
    fn certified_rho_matches_bisection() {
        for &lambda in &[8.0, 20.0, 100.0] {
            for n in 1..30 {
                let b = bisection_rho(lambda, n).min((lambda - 4.0) / lambda);
                assert!((star_certified_rho(lambda, n) - b).abs() < 1e-12, "lambda {lambda} n {n}");
            }
        }
    }

    #[test]
    fn certified_rho_non_increasing_in_star_size() {
        let v: Vec<f64> = [1, 5, 20].iter().map(|&n| star_certified_rho(8.0, n)).collect();
        assert_eq!(v[0], 0.5);
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn no_star_vertices_is_vacuous() {
        let r = star_graph_experiment(&StarParams::new(8.0, 0, 200, 1)).unwrap();
        assert_eq!(r.all_star_zero.point, 1.0);
        assert!(r.first_star_zero.is_none());
    }

    #[test]
    fn single_star_vertex_respects_domination() {
        let r = star_graph_experiment(&StarParams::new(8.0, 1, 2000, 2)).unwrap();
        let p = r.first_star_zero.unwrap();
        assert!(p.point <= 1.0 - r.certified_rho + 3.0 * p.stderr, "{r:?}");
    }
}
