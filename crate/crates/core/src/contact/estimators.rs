use serde::{Deserialize, Serialize};

use super::engine::{ContactEngine, RunEnd};
use super::graph::GraphSpec;
use super::sheet::GraphicalSheet;
use crate::error::{ensure_param, Result};
use crate::estimate::EstimateCI;
use crate::exec::{replicate, Rng};

pub const DEFAULT_HORIZON: f64 = 60.0;
/// Infected-population size at which a dual run is stopped and counted as
/// surviving.
pub const DEFAULT_CAP: usize = 100;
pub const MIN_REPLICAS: usize = 100;

/// Half-width `L >= reach + ceil(bT + 6 sqrt(bT)) + 40` of a segment wide
/// enough that a process started within `[-reach, reach]` cannot feel the
/// boundary before time `horizon` except with negligible probability; `b`
/// bounds the front speed.
pub fn light_cone_half_width(reach: usize, speed: f64, horizon: f64) -> usize {
    let bt = speed * horizon;
    reach + (bt + 6.0 * bt.sqrt()).ceil() as usize + 40
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnParams {
    pub n: usize,
    pub beta: f64,
    pub p: f64,
    pub horizon: f64,
    pub replicas: usize,
    pub seed: u64,
    /// Population at which a run is declared surviving; `usize::MAX` disables.
    pub cap: usize,
}

impl AnParams {
    pub fn new(n: usize, beta: f64, p: f64, replicas: usize, seed: u64) -> Self {
        AnParams { n, beta, p, horizon: DEFAULT_HORIZON, replicas, seed, cap: DEFAULT_CAP }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_param!(self.beta >= 0.0 && self.beta.is_finite(), "beta must be finite and >= 0, got {}", self.beta);
        ensure_param!((0.0..=1.0).contains(&self.p), "p must lie in [0, 1], got {}", self.p);
        ensure_param!(self.horizon > 0.0 && self.horizon.is_finite(), "horizon must be positive, got {}", self.horizon);
        ensure_param!(self.replicas >= MIN_REPLICAS, "need at least {MIN_REPLICAS} replicas, got {}", self.replicas);
        ensure_param!(self.cap > self.n + 1, "cap {} must exceed the block size {}", self.cap, self.n + 1);
        Ok(())
    }

    pub fn half_width(&self) -> usize {
        light_cone_half_width(self.n, self.beta, self.horizon)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnReport {
    pub params: AnParams,
    /// Frequency of dual runs from `[0, n]` dead by the horizon.
    pub estimate: EstimateCI,
    /// Fraction of runs alive at the horizon or stopped at the cap.
    pub alive_fraction: f64,
    pub capped_fraction: f64,
    pub half_width: usize,
    pub bias_note: &'static str,
}

const AN_BIAS_NOTE: &str = "runs alive at the horizon or stopped at the cap count as surviving; \
late extinctions are missed, so the estimate is biased low by at most alive_fraction";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DualOutcome {
    Died,
    Alive,
    Capped,
}

fn run_dual(graph: &GraphSpec, init: &[u8], horizon: f64, cap: usize, rng: &mut Rng) -> Result<DualOutcome> {
    let mut engine = ContactEngine::new(graph, init)?;
    Ok(match engine.run(horizon, rng, |_, e| e.infected_count() < cap) {
        RunEnd::Extinct => DualOutcome::Died,
        RunEnd::Horizon => DualOutcome::Alive,
        RunEnd::Stopped => DualOutcome::Capped,
    })
}

/// Estimate of `a(n) = nu{eta = 0 on [0, n]}` for the process with
/// parameters `(beta, p)`, as the probability that the dual process
/// (`p -> 1 - p`) started from `[0, n]` dies by the horizon.
pub fn a_n_estimate(params: &AnParams) -> Result<AnReport> {
    params.validate()?;
    let half_width = params.half_width();
    let dual = GraphSpec::segment(half_width, params.beta, 1.0 - params.p)?;
    let mut init = vec![0u8; dual.len()];
    for x in 0..=params.n as i64 {
        init[dual.segment_index(x).expect("block inside segment")] = 1;
    }
    let outcomes = replicate(params.replicas, params.seed, |_, rng| run_dual(&dual, &init, params.horizon, params.cap, rng));
    let outcomes: Vec<DualOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    let died = outcomes.iter().filter(|&&o| o == DualOutcome::Died).count();
    let capped = outcomes.iter().filter(|&&o| o == DualOutcome::Capped).count();
    let reps = params.replicas as f64;
    Ok(AnReport {
        params: *params,
        estimate: EstimateCI::from_counts(died, params.replicas, params.seed),
        alive_fraction: (params.replicas - died) as f64 / reps,
        capped_fraction: capped as f64 / reps,
        half_width,
        bias_note: AN_BIAS_NOTE,
    })
}

/// Frequency of `eta_T = 0 on [0, n]` for the forward process started from
/// all ones on `[-half_width, half_width]`.
pub fn block_zero_direct(n: usize, beta: f64, p: f64, horizon: f64, half_width: usize, replicas: usize, seed: u64) -> Result<EstimateCI> {
    ensure_param!(replicas >= MIN_REPLICAS, "need at least {MIN_REPLICAS} replicas, got {replicas}");
    ensure_param!(half_width >= n, "segment too narrow for the block");
    let graph = GraphSpec::segment(half_width, beta, p)?;
    let block: Vec<usize> = (0..=n as i64).map(|x| graph.segment_index(x).expect("block inside segment")).collect();
    let init = vec![1u8; graph.len()];
    let hits = replicate(replicas, seed, |_, rng| -> Result<bool> {
        let mut engine = ContactEngine::new(&graph, &init)?;
        engine.run_quiet(horizon, rng);
        Ok(block.iter().all(|&i| engine.state()[i] == 0))
    });
    let hits = hits.into_iter().collect::<Result<Vec<bool>>>()?.into_iter().filter(|&h| h).count();
    Ok(EstimateCI::from_counts(hits, replicas, seed))
}

/// Ratio of means `sum N_i / sum D_i` from paired samples, with a
/// delta-method standard error.
fn ratio_estimate(num: &[f64], den: &[f64], seed: u64) -> EstimateCI {
    let m = num.len() as f64;
    let (sn, sd): (f64, f64) = (num.iter().sum(), den.iter().sum());
    if sd == 0.0 {
        return EstimateCI { point: f64::NAN, stderr: f64::INFINITY, replicas: num.len(), seed };
    }
    let r = sn / sd;
    let dbar = sd / m;
    let resid: Vec<f64> = num.iter().zip(den).map(|(n, d)| n - r * d).collect();
    let mean_res = resid.iter().sum::<f64>() / m;
    let var = resid.iter().map(|x| (x - mean_res).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
    EstimateCI { point: r, stderr: (var / m).sqrt() / dbar, replicas: num.len(), seed }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetParams {
    pub beta: f64,
    pub p: f64,
    pub horizon: f64,
    pub replicas: usize,
    pub seed: u64,
}

impl SheetParams {
    fn validate(&self) -> Result<()> {
        ensure_param!(self.beta >= 0.0 && self.beta.is_finite(), "beta must be finite and >= 0, got {}", self.beta);
        ensure_param!((0.0..=1.0).contains(&self.p), "p must lie in [0, 1], got {}", self.p);
        ensure_param!(self.horizon > 0.0 && self.horizon.is_finite(), "horizon must be positive, got {}", self.horizon);
        ensure_param!(self.replicas >= MIN_REPLICAS, "need at least {MIN_REPLICAS} replicas, got {}", self.replicas);
        Ok(())
    }
}

/// For each replica, one graphical sheet for the dual process on a segment
/// reaching `reach`, and the extinction indicator of the dual from every
/// set in `sets` (given as segment coordinates) on that sheet.
fn paired_dual_extinctions(sets: &[Vec<i64>], reach: usize, params: &SheetParams) -> Result<Vec<Vec<f64>>> {
    let half_width = light_cone_half_width(reach, params.beta, params.horizon);
    let dual = GraphSpec::segment(half_width, params.beta, 1.0 - params.p)?;
    let inits: Vec<Vec<u8>> = sets
        .iter()
        .map(|set| {
            let mut v = vec![0u8; dual.len()];
            for &x in set {
                v[dual.segment_index(x).expect("set inside segment")] = 1;
            }
            v
        })
        .collect();
    let rows = replicate(params.replicas, params.seed, |_, rng| -> Result<Vec<f64>> {
        let sheet = GraphicalSheet::generate(&dual, params.horizon, rng)?;
        inits.iter().map(|init| Ok(if sheet.dies_out(init, 1.0)? { 1.0 } else { 0.0 })).collect()
    });
    rows.into_iter().collect()
}

/// Estimates of `g(l) = nu{eta(0) = 1 | eta = 0 on [1, l]}` for
/// `l = 0..=max_l`, each a paired ratio of dual extinction frequencies from
/// `[1, l]` and `[0, l]` on a shared graphical sheet.
pub fn one_sided_conditionals(max_l: usize, params: &SheetParams) -> Result<Vec<EstimateCI>> {
    params.validate()?;
    let mut sets = Vec::new();
    for l in 0..=max_l as i64 {
        sets.push((1..=l).collect::<Vec<_>>());
        sets.push((0..=l).collect::<Vec<_>>());
    }
    let rows = paired_dual_extinctions(&sets, max_l, params)?;
    Ok((0..=max_l)
        .map(|l| {
            let den: Vec<f64> = rows.iter().map(|r| r[2 * l]).collect();
            let num: Vec<f64> = rows.iter().map(|r| r[2 * l] - r[2 * l + 1]).collect();
            ratio_estimate(&num, &den, params.seed)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSidedReport {
    pub k: usize,
    pub l: usize,
    /// `nu{eta(0) = 1 | eta = 0 on [-k, l] \ {0}}`.
    pub estimate: EstimateCI,
    /// Frequency of the conditioning event.
    pub conditioning_frequency: f64,
    /// Set when the relative standard error exceeds 0.25.
    pub high_variance: bool,
}

/// The two-sided conditional `f(k, l)`, exposed only for `k, l <= 3`.
pub fn two_sided_ratio(k: usize, l: usize, params: &SheetParams) -> Result<TwoSidedReport> {
    params.validate()?;
    ensure_param!(k <= 3 && l <= 3, "two-sided ratio is exposed only for k, l <= 3");
    let full: Vec<i64> = (-(k as i64)..=l as i64).collect();
    let punctured: Vec<i64> = full.iter().copied().filter(|&x| x != 0).collect();
    let rows = paired_dual_extinctions(&[punctured, full], k.max(l), params)?;
    let den: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let num: Vec<f64> = rows.iter().map(|r| r[0] - r[1]).collect();
    let estimate = ratio_estimate(&num, &den, params.seed);
    let conditioning_frequency = den.iter().sum::<f64>() / den.len() as f64;
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let high_variance = !(estimate.stderr <= 0.25 * estimate.point.abs());
    Ok(TwoSidedReport { k, l, estimate, conditioning_frequency, high_variance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_infection_rate_gives_one() {
        let r = a_n_estimate(&AnParams::new(3, 0.0, 0.5, 200, 1)).unwrap();
        assert_eq!(r.estimate.point, 1.0);
        assert_eq!(r.alive_fraction, 0.0);
    }

    #[test]
    fn validation() {
        assert!(a_n_estimate(&AnParams::new(3, 5.0, 0.5, 50, 1)).is_err());
        assert!(a_n_estimate(&AnParams { cap: 3, ..AnParams::new(3, 5.0, 0.5, 200, 1) }).is_err());
        assert!(a_n_estimate(&AnParams::new(3, 5.0, 1.5, 200, 1)).is_err());
    }

    #[test]
    fn single_site_below_four_over_beta() {
        let r = a_n_estimate(&AnParams::new(0, 8.0, 0.5, 4000, 2)).unwrap();
        assert!(r.estimate.point <= 0.5 + 3.0 * r.estimate.stderr + r.alive_fraction);
        assert!(r.estimate.point <= 0.5 + 3.0 * r.estimate.stderr);
    }

    #[test]
    fn dual_and_direct_estimators_agree() {
        let (beta, p, horizon, n) = (6.0, 0.3, 8.0, 2);
        let params = AnParams { horizon, cap: usize::MAX, ..AnParams::new(n, beta, p, 3000, 5) };
        let dual = a_n_estimate(&params).unwrap();
        let direct = block_zero_direct(n, beta, p, horizon, dual.half_width, 3000, 6).unwrap();
        let se = (dual.estimate.stderr.powi(2) + direct.stderr.powi(2)).sqrt();
        assert!((dual.estimate.point - direct.point).abs() <= 3.0 * se, "{dual:?} {direct:?}");
    }

    #[test]
    fn block_ratios_non_decreasing() {
        let a: Vec<EstimateCI> = (0..5)
            .map(|n| a_n_estimate(&AnParams::new(n, 5.0, 0.5, 6000, 10 + n as u64)).unwrap().estimate)
            .collect();
        let f: Vec<(f64, f64)> = a
            .windows(2)
            .map(|w| {
                let r = w[1].point / w[0].point;
                let rel = ((w[1].stderr / w[1].point).powi(2) + (w[0].stderr / w[0].point).powi(2)).sqrt();
                (r, r * rel)
            })
            .collect();
        for w in f.windows(2) {
            let se = (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
            assert!(w[1].0 >= w[0].0 - 3.0 * se, "{f:?}");
        }
    }

    #[test]
    fn one_sided_conditionals_respect_bound() {
        let params = SheetParams { beta: 8.0, p: 0.5, horizon: 15.0, replicas: 600, seed: 21 };
        let g = one_sided_conditionals(4, &params).unwrap();
        for est in &g {
            assert!(est.point >= 0.5 - 3.0 * est.stderr, "{g:?}");
        }
    }

    #[test]
    fn two_sided_ratio_runs() {
        let params = SheetParams { beta: 8.0, p: 0.5, horizon: 10.0, replicas: 300, seed: 3 };
        let r = two_sided_ratio(1, 1, &params).unwrap();
        assert!((0.0..=1.0).contains(&r.estimate.point));
        assert!(two_sided_ratio(4, 1, &params).is_err());
    }
}
