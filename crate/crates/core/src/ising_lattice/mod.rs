//! Plus and minus Ising states on boxes of `Z^2`: heat-bath sampling,
//! block-zero rates and the maximal dominated density.
//!
//! Spins are `±1` internally; every reported event uses `-1 -> 0`.

mod onsager;

pub use onsager::{onsager_rho, onsager_rho_with, sigma, sigma_detailed, QuadratureResult, QuadratureSpec};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_param, Result};
use crate::estimate::EstimateCI;
use crate::exec::{replica_rng, Rng};
use crate::lattice::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Plus,
    Minus,
}

impl Boundary {
    fn spin(self) -> i8 {
        match self {
            Boundary::Plus => 1,
            Boundary::Minus => -1,
        }
    }
}

/// Smallest box side accepted by [`LatticeGibbsParams`].
pub const MIN_SIDE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeGibbsParams {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub boundary: Boundary,
    /// Total sweeps, burn-in included.
    pub sweeps: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl LatticeGibbsParams {
    pub fn validate(&self) -> Result<()> {
        ensure_param!(self.j >= 0.0 && self.j.is_finite(), "coupling J must be finite and >= 0, got {}", self.j);
        ensure_param!(self.l >= MIN_SIDE, "box side L must be >= {MIN_SIDE}, got {}", self.l);
        ensure_param!(
            self.sweeps >= self.burn_in && self.burn_in >= 1,
            "need sweeps >= burn-in >= 1, got sweeps = {}, burn-in = {}",
            self.sweeps,
            self.burn_in
        );
        Ok(())
    }

    pub fn samples(&self) -> usize {
        self.sweeps - self.burn_in
    }
}

/// Spins on `[1, L]^2` with a frozen one-site frame carrying the boundary
/// condition. Starts from the boundary value everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingBox {
    l: usize,
    spins: Vec<i8>,
}

impl IsingBox {
    pub fn new(l: usize, boundary: Boundary) -> Self {
        IsingBox { l, spins: vec![boundary.spin(); (l + 2) * (l + 2)] }
    }

    pub fn side(&self) -> usize {
        self.l
    }

    fn at(&self, r: usize, c: usize) -> usize {
        r * (self.l + 2) + c
    }

    /// Spin at 1-based position `(r, c)`; the frame is at 0 and `L + 1`.
    pub fn spin(&self, r: usize, c: usize) -> i8 {
        self.spins[self.at(r, c)]
    }

    pub fn set_spin(&mut self, r: usize, c: usize, s: i8) {
        debug_assert!((1..=self.l).contains(&r) && (1..=self.l).contains(&c));
        let i = self.at(r, c);
        self.spins[i] = s;
    }

    fn field(&self, i: usize) -> i32 {
        let w = self.l + 2;
        (self.spins[i - 1] + self.spins[i + 1]) as i32 + (self.spins[i - w] + self.spins[i + w]) as i32
    }

    /// Heat-bath probability of `+1` at site index `i`.
    fn plus_prob(&self, i: usize, j: f64) -> f64 {
        1.0 / (1.0 + (-2.0 * j * self.field(i) as f64).exp())
    }

    fn for_each_site(l: usize, mut f: impl FnMut(usize)) {
        for parity in 0..2 {
            for r in 1..=l {
                let start = 1 + (r + 1 + parity) % 2;
                for c in (start..=l).step_by(2) {
                    f(r * (l + 2) + c);
                }
            }
        }
    }

    /// One checkerboard heat-bath sweep.
    pub fn sweep<R: rand::Rng + ?Sized>(&mut self, j: f64, rng: &mut R) {
        let l = self.l;
        Self::for_each_site(l, |i| {
            let p = self.plus_prob(i, j);
            self.spins[i] = if rng.random::<f64>() < p { 1 } else { -1 };
        });
    }

    /// One sweep of two boxes driven by the same uniforms, so `upper >= lower`
    /// is preserved.
    pub fn coupled_sweep<R: rand::Rng + ?Sized>(upper: &mut IsingBox, lower: &mut IsingBox, j: f64, rng: &mut R) {
        debug_assert_eq!(upper.l, lower.l);
        Self::for_each_site(upper.l, |i| {
            let u: f64 = rng.random();
            upper.spins[i] = if u < upper.plus_prob(i, j) { 1 } else { -1 };
            lower.spins[i] = if u < lower.plus_prob(i, j) { 1 } else { -1 };
        });
    }

    /// Interior as a 0/1 grid, `-1 -> 0`.
    pub fn to_grid(&self) -> Grid {
        Grid::from_fn(self.l, self.l, |r, c| self.spin(r + 1, c + 1) > 0).expect("side >= 1")
    }

    /// Interior spins packed as a binary index, row-major with `(1, 1)` as
    /// the least significant bit and `+1 -> 1`.
    pub fn state_index(&self) -> usize {
        let mut idx = 0;
        let mut bit = 0;
        for r in 1..=self.l {
            for c in 1..=self.l {
                if self.spin(r, c) > 0 {
                    idx |= 1 << bit;
                }
                bit += 1;
            }
        }
        idx
    }

    pub fn magnetization(&self) -> f64 {
        let mut m = 0i64;
        for r in 1..=self.l {
            for c in 1..=self.l {
                m += self.spin(r, c) as i64;
            }
        }
        m as f64 / (self.l * self.l) as f64
    }
}

/// Heat-bath chain; returns one configuration per sweep after burn-in.
pub fn gibbs_sample(params: &LatticeGibbsParams) -> Result<Vec<Grid>> {
    params.validate()?;
    let mut rng = replica_rng(params.seed, 0);
    let mut sbox = IsingBox::new(params.l, params.boundary);
    for _ in 0..params.burn_in {
        sbox.sweep(params.j, &mut rng);
    }
    Ok((0..params.samples())
        .map(|_| {
            sbox.sweep(params.j, &mut rng);
            sbox.to_grid()
        })
        .collect())
}

/// Positions of the `n x n` windows lying at distance `>= L/4` from the
/// boundary, 0-based top-left corners.
fn central_windows(l: usize, n: usize) -> Vec<(usize, usize)> {
    let margin = l / 4;
    let last = l - margin - n;
    let mut out = Vec::new();
    for r in margin..=last {
        for c in margin..=last {
            out.push((r, c));
        }
    }
    out
}

fn zero_window_fraction(grid: &Grid, windows: &[(usize, usize)], n: usize) -> f64 {
    windows.iter().filter(|&&(r, c)| grid.window_is_zero(r, c, n)).count() as f64 / windows.len() as f64
}

/// Batch-means estimate from a correlated sample path.
fn batch_means(series: &[f64], seed: u64) -> EstimateCI {
    let batches = if series.len() >= 40 { 20 } else { series.len().max(1) };
    let size = series.len() / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| series[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let point = series[..batches * size].iter().sum::<f64>() / (batches * size) as f64;
    let mut est = EstimateCI::from_samples(&means, seed);
    est.point = point;
    est.replicas = series.len();
    est
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRateReport {
    pub params: LatticeGibbsParams,
    pub n: usize,
    /// Probability that a central `n x n` window is all zero.
    pub probability: EstimateCI,
    /// `probability^(1/n^2)` with a delta-method standard error.
    pub rate: EstimateCI,
    pub windows: usize,
    pub zero_observed: bool,
    /// Upper 95% bound on the rate, set only when no zero window was seen.
    pub rate_upper_bound: Option<f64>,
    pub assumption: &'static str,
}

const RATE_ASSUMPTION: &str =
    "finite-n rate read as an estimate of the limiting rate; the n-th-root limit is assumed to exist";

fn rate_from_series(series: &[f64], n: usize, params: &LatticeGibbsParams, windows: usize) -> BlockRateReport {
    let probability = batch_means(series, params.seed);
    let k = (n * n) as f64;
    let zero_observed = series.iter().all(|&v| v == 0.0);
    let point = probability.point.powf(1.0 / k);
    let stderr = if zero_observed {
        0.0
    } else {
        probability.stderr * probability.point.powf(1.0 / k - 1.0) / k
    };
    let rate = EstimateCI { point, stderr, replicas: probability.replicas, seed: params.seed };
    let rate_upper_bound = zero_observed.then(|| (3.0 / series.len() as f64).min(1.0).powf(1.0 / k));
    BlockRateReport {
        params: *params,
        n,
        probability,
        rate,
        windows,
        zero_observed,
        rate_upper_bound,
        assumption: RATE_ASSUMPTION,
    }
}

fn check_block(n: usize, params: &LatticeGibbsParams) -> Result<()> {
    params.validate()?;
    ensure_param!((1..=4).contains(&n), "block side n must be in 1..=4, got {n}");
    ensure_param!(params.l >= 8 * n, "box side L = {} must be >= 8n = {}", params.l, 8 * n);
    ensure_param!(params.samples() >= 1, "no sweeps after burn-in");
    Ok(())
}

/// Frequency of an all-zero central `n x n` window, averaged over window
/// positions and sweeps, and its `n^2`-th root.
pub fn block_zero_rate(n: usize, params: &LatticeGibbsParams) -> Result<BlockRateReport> {
    check_block(n, params)?;
    let windows = central_windows(params.l, n);
    let mut rng = replica_rng(params.seed, 0);
    let mut sbox = IsingBox::new(params.l, params.boundary);
    for _ in 0..params.burn_in {
        sbox.sweep(params.j, &mut rng);
    }
    let series: Vec<f64> = (0..params.samples())
        .map(|_| {
            sbox.sweep(params.j, &mut rng);
            zero_window_fraction(&sbox.to_grid(), &windows, n)
        })
        .collect();
    Ok(rate_from_series(&series, n, params, windows.len()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlusMinusReport {
    pub plus: BlockRateReport,
    pub minus: BlockRateReport,
    /// `P_minus / P_plus` of the all-zero window.
    pub ratio: f64,
    pub ratio_root: f64,
    /// Sweeps at which the coupled chains were not ordered; always 0.
    pub order_violations: usize,
}

/// Block-zero frequencies under plus and minus boundaries from chains
/// sharing every uniform. Diagnostic only.
pub fn plus_minus_probe(n: usize, params: &LatticeGibbsParams) -> Result<PlusMinusReport> {
    check_block(n, params)?;
    ensure_param!(n <= 3, "probe block side must be <= 3, got {n}");
    let windows = central_windows(params.l, n);
    let mut rng = replica_rng(params.seed, 0);
    let mut upper = IsingBox::new(params.l, Boundary::Plus);
    let mut lower = IsingBox::new(params.l, Boundary::Minus);
    let mut violations = 0;
    let mut plus_series = Vec::with_capacity(params.samples());
    let mut minus_series = Vec::with_capacity(params.samples());
    for sweep in 0..params.sweeps {
        IsingBox::coupled_sweep(&mut upper, &mut lower, params.j, &mut rng);
        let (gu, gl) = (upper.to_grid(), lower.to_grid());
        if !gl.le(&gu) {
            violations += 1;
        }
        if sweep >= params.burn_in {
            plus_series.push(zero_window_fraction(&gu, &windows, n));
            minus_series.push(zero_window_fraction(&gl, &windows, n));
        }
    }
    let plus_params = LatticeGibbsParams { boundary: Boundary::Plus, ..*params };
    let minus_params = LatticeGibbsParams { boundary: Boundary::Minus, ..*params };
    let plus = rate_from_series(&plus_series, n, &plus_params, windows.len());
    let minus = rate_from_series(&minus_series, n, &minus_params, windows.len());
    let ratio = minus.probability.point / plus.probability.point;
    let ratio_root = ratio.powf(1.0 / (n * n) as f64);
    Ok(PlusMinusReport { plus, minus, ratio, ratio_root, order_violations: violations })
}

/// Exact Boltzmann law of the interior of an `l x l` box under a fixed
/// boundary, indexed as in [`IsingBox::state_index`]. Needs `l * l <= 20`.
pub fn exact_box_law(l: usize, j: f64, boundary: Boundary) -> Result<Vec<f64>> {
    ensure_param!(l >= 1 && l * l <= 20, "exact enumeration needs 1 <= l*l <= 20, got l = {l}");
    let sites = l * l;
    let mut sbox = IsingBox::new(l, boundary);
    let mut weights = Vec::with_capacity(1 << sites);
    for idx in 0..1usize << sites {
        for k in 0..sites {
            sbox.set_spin(k / l + 1, k % l + 1, if (idx >> k) & 1 == 1 { 1 } else { -1 });
        }
        let mut energy = 0i32;
        for r in 1..=l {
            for c in 1..=l {
                let s = sbox.spin(r, c) as i32;
                energy += s * sbox.spin(r, c + 1) as i32 + s * sbox.spin(r + 1, c) as i32;
                if r == 1 {
                    energy += s * sbox.spin(0, c) as i32;
                }
                if c == 1 {
                    energy += s * sbox.spin(r, 0) as i32;
                }
            }
        }
        weights.push((j * energy as f64).exp());
    }
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// Empirical law of the heat-bath chain on an `l x l` box over `sweeps`
/// sweeps after `burn_in`, indexed as in [`exact_box_law`].
pub fn empirical_box_law(l: usize, j: f64, boundary: Boundary, burn_in: usize, sweeps: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    ensure_param!(l >= 1 && l * l <= 20, "empirical box law needs 1 <= l*l <= 20, got l = {l}");
    ensure_param!(sweeps >= 1, "need at least one sweep");
    let mut sbox = IsingBox::new(l, boundary);
    for _ in 0..burn_in {
        sbox.sweep(j, rng);
    }
    let mut counts = vec![0usize; 1 << (l * l)];
    for _ in 0..sweeps {
        sbox.sweep(j, rng);
        counts[sbox.state_index()] += 1;
    }
    Ok(counts.into_iter().map(|c| c as f64 / sweeps as f64).collect())
}
