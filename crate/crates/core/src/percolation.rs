//! Site percolation on sampled `Z^2` configurations, 4-neighborhood.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::contact::torus_sample;
use crate::error::{ensure_param, Result};
use crate::estimate::EstimateCI;
use crate::exec::replicate;
use crate::ising_lattice::{Boundary, IsingBox};
use crate::lattice::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    /// Open clusters.
    pub clusters: usize,
    /// Size of the largest open cluster over the number of sites.
    pub largest_fraction: f64,
    pub open_fraction: f64,
    /// An open cluster meets both the left and the right column.
    pub horizontal_crossing: bool,
    /// An open cluster meets both the top and the bottom row.
    pub vertical_crossing: bool,
}

/// Labels open clusters of `grid` with union-find.
pub fn label_clusters(grid: &Grid) -> Result<ClusterStats> {
    let (w, h) = (grid.width(), grid.height());
    ensure_param!(w > 0 && h > 0, "grid is empty");
    let mut uf = UnionFind::<usize>::new(w * h);
    for r in 0..h {
        for c in 0..w {
            if grid.get(r, c) == 0 {
                continue;
            }
            if c + 1 < w && grid.get(r, c + 1) == 1 {
                uf.union(r * w + c, r * w + c + 1);
            }
            if r + 1 < h && grid.get(r + 1, c) == 1 {
                uf.union(r * w + c, (r + 1) * w + c);
            }
        }
    }
    let mut size = vec![0usize; w * h];
    let mut open = 0;
    for (i, &v) in grid.cells().iter().enumerate() {
        if v == 1 {
            size[uf.find_mut(i)] += 1;
            open += 1;
        }
    }
    let touches = |cells: &mut dyn Iterator<Item = usize>, uf: &mut UnionFind<usize>| -> Vec<bool> {
        let mut hit = vec![false; w * h];
        for i in cells {
            if grid.cells()[i] == 1 {
                hit[uf.find_mut(i)] = true;
            }
        }
        hit
    };
    let left = touches(&mut (0..h).map(|r| r * w), &mut uf);
    let right = touches(&mut (0..h).map(|r| r * w + w - 1), &mut uf);
    let top = touches(&mut (0..w), &mut uf);
    let bottom = touches(&mut (0..w).map(|c| (h - 1) * w + c), &mut uf);
    let n = (w * h) as f64;
    Ok(ClusterStats {
        clusters: size.iter().filter(|&&s| s > 0).count(),
        largest_fraction: *size.iter().max().unwrap_or(&0) as f64 / n,
        open_fraction: open as f64 / n,
        horizontal_crossing: (0..w * h).any(|i| left[i] && right[i]),
        vertical_crossing: (0..w * h).any(|i| top[i] && bottom[i]),
    })
}

/// Configuration sampled for a percolation experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum PercolationSource {
    /// Independent sites open with probability `rho`.
    Product { rho: f64 },
    /// Torus contact process from all ones, state at time `horizon`.
    Contact { lambda: f64, horizon: f64 },
    /// Heat-bath Ising state on the box after `sweeps` sweeps.
    Ising {
        #[serde(rename = "J")]
        j: f64,
        boundary: Boundary,
        sweeps: usize,
    },
}

impl PercolationSource {
    fn validate(&self) -> Result<()> {
        match *self {
            PercolationSource::Product { rho } => ensure_param!((0.0..=1.0).contains(&rho), "rho must lie in [0, 1], got {rho}"),
            PercolationSource::Contact { lambda, horizon } => ensure_param!(
                lambda >= 0.0 && lambda.is_finite() && horizon > 0.0 && horizon.is_finite(),
                "contact source needs lambda >= 0 and a positive horizon"
            ),
            PercolationSource::Ising { j, sweeps, .. } => ensure_param!(
                j >= 0.0 && j.is_finite() && sweeps >= 1,
                "ising source needs J >= 0 and at least one sweep"
            ),
        }
        Ok(())
    }
}

/// Draws one `side x side` grid from `source`; torus samples are cut open.
pub fn sample_grid<R: rand::Rng + ?Sized>(source: &PercolationSource, side: usize, rng: &mut R) -> Result<Grid> {
    match *source {
        PercolationSource::Product { rho } => Grid::from_fn(side, side, |_, _| rng.random::<f64>() < rho),
        PercolationSource::Contact { lambda, horizon } => torus_sample(side, lambda, horizon, rng),
        PercolationSource::Ising { j, boundary, sweeps } => {
            let mut sbox = IsingBox::new(side, boundary);
            for _ in 0..sweeps {
                sbox.sweep(j, rng);
            }
            Ok(sbox.to_grid())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercolationReport {
    pub source: PercolationSource,
    #[serde(rename = "L")]
    pub side: usize,
    /// Frequency of a left-right crossing.
    pub crossing: EstimateCI,
    pub vertical_crossing: EstimateCI,
    pub open_fraction: EstimateCI,
    pub largest_fraction: EstimateCI,
}

pub fn percolation_experiment(source: &PercolationSource, side: usize, replicas: usize, seed: u64) -> Result<PercolationReport> {
    source.validate()?;
    ensure_param!(side >= 3, "grid side must be >= 3, got {side}");
    ensure_param!(replicas >= 100, "need at least 100 replicas, got {replicas}");
    let stats = replicate(replicas, seed, |_, rng| label_clusters(&sample_grid(source, side, rng)?));
    let stats: Vec<ClusterStats> = stats.into_iter().collect::<Result<_>>()?;
    let count = |f: fn(&ClusterStats) -> bool| stats.iter().filter(|s| f(s)).count();
    let series = |f: fn(&ClusterStats) -> f64| -> Vec<f64> { stats.iter().map(f).collect() };
    Ok(PercolationReport {
        source: *source,
        side,
        crossing: EstimateCI::from_counts(count(|s| s.horizontal_crossing), replicas, seed),
        vertical_crossing: EstimateCI::from_counts(count(|s| s.vertical_crossing), replicas, seed),
        open_fraction: EstimateCI::from_samples(&series(|s| s.open_fraction), seed),
        largest_fraction: EstimateCI::from_samples(&series(|s| s.largest_fraction), seed),
    })
}
