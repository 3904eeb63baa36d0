//! Exact machinery on the Boolean lattice `{0,1}^n`.
//!
//! Configurations are indexed as binary numbers with site 0 as the least
//! significant bit, so `x <= y` coordinatewise is `x & !y == 0` and the
//! lattice operations are `|` and `&`.

mod coupling;
mod domination;
mod fkg;
mod flow;
mod grid;
mod upsets;

pub use coupling::{
    in_lexicographic_past, raster_order, sequential_coupling_sample, sequential_coupling_with_rng,
};
pub use domination::{dominates, dominates_by_flow, dominates_by_upsets, DOMINATION_TOL};
pub use fkg::{downward_fkg_check, fkg_lattice_check, FKG_TOL};
pub use flow::FlowNetwork;
pub use grid::Grid;
pub use upsets::{brute_force_up_sets, enumerate_up_sets, UpSetFamily};

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_param, Error, Result};

/// Largest site count a [`FiniteMeasure`] may have.
pub const MAX_SITES: usize = 20;

/// Tolerance on the total mass of a [`FiniteMeasure`].
pub const MASS_TOL: f64 = 1e-12;

/// A 0/1 configuration in scan order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitConfig(Vec<u8>);

impl BitConfig {
    pub fn new(sites: Vec<u8>) -> Result<Self> {
        ensure_param!(!sites.is_empty(), "configuration must have at least one site");
        ensure_param!(
            sites.iter().all(|&s| s <= 1),
            "configuration entries must be 0 or 1"
        );
        Ok(BitConfig(sites))
    }

    pub fn zeros(n: usize) -> Self {
        BitConfig(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        BitConfig(vec![1; n])
    }

    /// Configuration encoded by `index` (site 0 = least significant bit).
    pub fn from_index(index: usize, n: usize) -> Self {
        BitConfig((0..n).map(|i| ((index >> i) & 1) as u8).collect())
    }

    pub fn index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &s)| acc | ((s as usize) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sites(&self) -> &[u8] {
        &self.0
    }

    pub fn ones_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == 1).count()
    }

    /// Coordinatewise `self <= other`. Configurations of different lengths are
    /// incomparable.
    pub fn le(&self, other: &BitConfig) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl PartialOrd for BitConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

#[derive(Deserialize)]
struct RawMeasure {
    n: usize,
    weights: Vec<f64>,
}

/// A probability measure on `{0,1}^n`.
///
/// Serialized as `{"n": n, "weights": [...]}` with `2^n` weights indexed by
/// configuration index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct FiniteMeasure {
    n: usize,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasure> for FiniteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        FiniteMeasure::new(raw.n, raw.weights)
    }
}

impl FiniteMeasure {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        ensure_param!(n >= 1, "site count must be at least 1");
        if n > MAX_SITES {
            return Err(Error::size(format!(
                "site count {n} exceeds the limit of {MAX_SITES}"
            )));
        }
        ensure_param!(
            weights.len() == 1 << n,
            "expected {} weights for n = {n}, got {}",
            1usize << n,
            weights.len()
        );
        ensure_param!(
            weights.iter().all(|w| w.is_finite() && *w >= 0.0),
            "weights must be finite and nonnegative"
        );
        let total: f64 = weights.iter().sum();
        ensure_param!(
            (total - 1.0).abs() <= MASS_TOL,
            "weights sum to {total}, not 1"
        );
        Ok(FiniteMeasure { n, weights })
    }

    /// Builds a measure from unnormalized nonnegative weights.
    pub fn from_unnormalized(n: usize, mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        ensure_param!(total > 0.0 && total.is_finite(), "total weight must be positive");
        for w in &mut weights {
            *w /= total;
        }
        FiniteMeasure::new(n, weights)
    }

    /// Point mass on the configuration with the given index.
    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        ensure_param!(n <= MAX_SITES && index < (1 << n), "index out of range");
        let mut weights = vec![0.0; 1 << n];
        weights[index] = 1.0;
        FiniteMeasure::new(n, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    /// Mass of the configurations whose indices are set in `mask`
    /// (`n <= 6` so that `2^n` fits the mask).
    pub(crate) fn mass_of_mask(&self, mask: u64) -> f64 {
        let mut m = mask;
        let mut total = 0.0;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            total += self.weights[i];
            m &= m - 1;
        }
        total
    }

    pub fn mass_where(&self, mut pred: impl FnMut(usize) -> bool) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, w)| w)
            .sum()
    }

    /// Largest absolute weight difference.
    pub fn max_abs_diff(&self, other: &FiniteMeasure) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Product measure `nu_rho` on `{0,1}^n`.
pub fn product_measure(n: usize, rho: f64) -> Result<FiniteMeasure> {
    ensure_param!((0.0..=1.0).contains(&rho), "density {rho} outside [0, 1]");
    ensure_param!(n >= 1, "site count must be at least 1");
    if n > MAX_SITES {
        return Err(Error::size(format!(
            "site count {n} exceeds the limit of {MAX_SITES}"
        )));
    }
    let by_count: Vec<f64> = (0..=n)
        .map(|k| rho.powi(k as i32) * (1.0 - rho).powi((n - k) as i32))
        .collect();
    let weights = (0..1usize << n)
        .map(|x| by_count[x.count_ones() as usize])
        .collect();
    FiniteMeasure::new(n, weights)
}
