use serde::Serialize;

use crate::error::{ensure_param, Result};

/// Which family a [`GraphSpec`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    /// `[-L, L]` with site `x` at index `x + L`.
    Segment { half_width: usize, beta: f64, p: f64 },
    /// Half-line `0..=length` (index `k`) with infection flowing from `k + 1`
    /// to `k`, plus `n_star` leaves at indices `length + 1..` infected from 0.
    StarHalfLine { lambda: f64, n_star: usize, length: usize },
    /// `side x side` torus, index `row * side + col`.
    Torus { side: usize, lambda: f64 },
    Custom,
}

/// Directed infection graph with unit recovery rates, stored as
/// compressed out-edge lists.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    kind: GraphKind,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    rates: Vec<f64>,
    out_rate: Vec<f64>,
}

impl GraphSpec {
    /// Graph on `n` vertices from `(from, to, rate)` triples.
    pub fn custom(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::build(GraphKind::Custom, n, edges.iter().copied())
    }

    fn build(kind: GraphKind, n: usize, edges: impl Iterator<Item = (usize, usize, f64)>) -> Result<Self> {
        ensure_param!(n > 0, "graph must have at least one vertex");
        ensure_param!(n < u32::MAX as usize, "graph too large");
        let mut lists: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for (from, to, rate) in edges {
            ensure_param!(from < n && to < n, "edge ({from}, {to}) out of range for {n} vertices");
            ensure_param!(from != to, "self-loop at {from}");
            ensure_param!(rate >= 0.0 && rate.is_finite(), "edge rate must be finite and >= 0, got {rate}");
            if rate > 0.0 {
                lists[from].push((to as u32, rate));
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut rates = Vec::new();
        let mut out_rate = Vec::with_capacity(n);
        offsets.push(0);
        for list in lists {
            out_rate.push(list.iter().map(|e| e.1).sum());
            for (t, r) in list {
                targets.push(t);
                rates.push(r);
            }
            offsets.push(targets.len());
        }
        Ok(GraphSpec { kind, offsets, targets, rates, out_rate })
    }

    /// Asymmetric process on `[-L, L]`: `x` is infected at rate
    /// `beta [p eta(x-1) + (1-p) eta(x+1)]`.
    pub fn segment(half_width: usize, beta: f64, p: f64) -> Result<Self> {
        ensure_param!(beta >= 0.0 && beta.is_finite(), "beta must be finite and >= 0, got {beta}");
        ensure_param!((0.0..=1.0).contains(&p), "p must lie in [0, 1], got {p}");
        let n = 2 * half_width + 1;
        let edges = (0..n.saturating_sub(1)).flat_map(|i| [(i, i + 1, beta * p), (i + 1, i, beta * (1.0 - p))]);
        Self::build(GraphKind::Segment { half_width, beta, p }, n, edges)
    }

    /// Symmetric process with rate `lambda` per neighbor, i.e. `beta = 2 lambda`, `p = 1/2`.
    pub fn symmetric_segment(half_width: usize, lambda: f64) -> Result<Self> {
        Self::segment(half_width, 2.0 * lambda, 0.5)
    }

    pub fn star_half_line(lambda: f64, n_star: usize, length: usize) -> Result<Self> {
        ensure_param!(lambda >= 0.0 && lambda.is_finite(), "lambda must be finite and >= 0, got {lambda}");
        let n = length + 1 + n_star;
        let line = (0..length).map(|k| (k + 1, k, lambda));
        let star = (0..n_star).map(|i| (0, length + 1 + i, lambda));
        Self::build(GraphKind::StarHalfLine { lambda, n_star, length }, n, line.chain(star))
    }

    pub fn torus(side: usize, lambda: f64) -> Result<Self> {
        ensure_param!(side >= 3, "torus side must be >= 3, got {side}");
        ensure_param!(lambda >= 0.0 && lambda.is_finite(), "lambda must be finite and >= 0, got {lambda}");
        let idx = |r: usize, c: usize| (r % side) * side + c % side;
        let edges = (0..side * side).flat_map(|v| {
            let (r, c) = (v / side, v % side);
            [
                (v, idx(r + 1, c), lambda),
                (v, idx(r + side - 1, c), lambda),
                (v, idx(r, c + 1), lambda),
                (v, idx(r, c + side - 1), lambda),
            ]
        });
        Self::build(GraphKind::Torus { side, lambda }, side * side, edges)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.out_rate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out_rate.is_empty()
    }

    /// Out-edges of `v` as `(target, rate)`.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()].iter().map(|&t| t as usize).zip(self.rates[range].iter().copied())
    }

    /// Total infection rate emitted by an infected `v`.
    pub fn out_rate(&self, v: usize) -> f64 {
        self.out_rate[v]
    }

    /// True if some in-neighbor of `v` is infected in `state`.
    pub fn has_infected_in_neighbor(&self, v: usize, state: &[u8]) -> bool {
        (0..self.len()).any(|u| state[u] == 1 && self.out_edges(u).any(|(t, _)| t == v))
    }

    /// Index of segment site `x`, if the graph is a segment containing it.
    pub fn segment_index(&self, x: i64) -> Option<usize> {
        match self.kind {
            GraphKind::Segment { half_width, .. } => {
                let i = x + half_width as i64;
                (0..=2 * half_width as i64).contains(&i).then_some(i as usize)
            }
            _ => None,
        }
    }

    /// Same vertices with every edge reversed.
    pub fn reversed(&self) -> GraphSpec {
        let edges: Vec<(usize, usize, f64)> =
            (0..self.len()).flat_map(|u| self.out_edges(u).map(move |(v, r)| (v, u, r))).collect();
        let kind = match self.kind {
            GraphKind::Segment { half_width, beta, p } => GraphKind::Segment { half_width, beta, p: 1.0 - p },
            GraphKind::Torus { .. } => self.kind,
            _ => GraphKind::Custom,
        };
        Self::build(kind, self.len(), edges.into_iter()).expect("reversal of a valid graph")
    }
}
