//! Ising Gibbs states on the 3-regular tree as tree-indexed Markov chains.
//!
//! The plus, minus and free states are tree-indexed chains whose transition
//! matrices depend on `J` through the positive fixed point `t_J` of
//! `f_J(t) = log[cosh(J + t) / cosh(t - J)]`. A monotone chain dominates
//! `nu_rho` iff `P(0,1) >= rho`, and one chain dominates another iff both
//! `P(0,1)` and `P(1,1)` are ordered.

use serde::Serialize;

use crate::error::{ensure_param, Error, Result};
use crate::lattice::{sequential_coupling_with_rng, BitConfig, FiniteMeasure, MAX_SITES};

/// Critical coupling of the 3-regular tree, `tanh(J_c) = 1/2`.
pub fn critical_coupling() -> f64 {
    0.5 * 3f64.ln()
}

/// Largest depth accepted by the tree samplers.
pub const MAX_DEPTH: usize = 12;

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `f_J(t) = log[cosh(J + t) / cosh(t - J)]`.
pub fn f_eval(j: f64, t: f64) -> f64 {
    ln_cosh(j + t) - ln_cosh(t - j)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointResult {
    #[serde(rename = "J")]
    pub j: f64,
    /// Nonnegative fixed point of `f_J`; exactly 0 for `J <= J_c`.
    pub t: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
}

/// Positive fixed point `t_J` of `f_J`, or 0 when the Gibbs state is unique.
pub fn solve_t(j: f64) -> Result<FixedPointResult> {
    ensure_param!(j >= 0.0 && j.is_finite(), "coupling J must be finite and >= 0, got {j}");
    if j <= critical_coupling() {
        return Ok(FixedPointResult { j, t: 0.0, residual: 0.0, bracket: (0.0, 0.0) });
    }
    // f_J <= 2J, so every fixed point lies below 2J.
    let bracket = (1e-9, 2.0 * j + 10.0);
    let g = |t: f64| f_eval(j, t) - t;
    let (mut lo, mut hi) = bracket;
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(Error::Numerical(format!(
            "fixed-point bracket [{lo}, {hi}] does not straddle a root at J = {j}: g = ({}, {})",
            g(lo),
            g(hi)
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let residual = g(t).abs();
    if residual > 1e-12 {
        return Err(Error::Numerical(format!(
            "bisection stalled at J = {j}: t = {t}, residual = {residual}"
        )));
    }
    Ok(FixedPointResult { j, t, residual, bracket })
}

/// Transition matrix of a two-state tree-indexed chain, stored by its
/// second column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeChainMatrix {
    pub p01: f64,
    pub p11: f64,
}

impl TreeChainMatrix {
    pub fn new(p01: f64, p11: f64) -> Result<Self> {
        ensure_param!(
            (0.0..=1.0).contains(&p01) && (0.0..=1.0).contains(&p11),
            "transition probabilities must lie in [0, 1]"
        );
        ensure_param!(p01 > 0.0 || p11 < 1.0, "chain must be irreducible");
        Ok(TreeChainMatrix { p01, p11 })
    }

    pub fn p00(&self) -> f64 {
        1.0 - self.p01
    }

    pub fn p10(&self) -> f64 {
        1.0 - self.p11
    }

    /// `P(from, to)`.
    pub fn get(&self, from: u8, to: u8) -> f64 {
        let one = if from == 1 { self.p11 } else { self.p01 };
        if to == 1 {
            one
        } else {
            1.0 - one
        }
    }

    /// Stationary law `(pi(0), pi(1))`.
    pub fn stationary(&self) -> (f64, f64) {
        let total = self.p01 + self.p10();
        (self.p10() / total, self.p01 / total)
    }

    /// `P(0,1) <= P(1,1)`.
    pub fn is_monotone(&self) -> bool {
        self.p01 <= self.p11
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainMatrices {
    pub plus: TreeChainMatrix,
    pub minus: TreeChainMatrix,
    pub free: TreeChainMatrix,
    pub t: f64,
}

/// Boundary condition selecting one of the three tree Gibbs states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeState {
    Plus,
    Minus,
    Free,
}

impl ChainMatrices {
    pub fn get(&self, state: TreeState) -> TreeChainMatrix {
        match state {
            TreeState::Plus => self.plus,
            TreeState::Minus => self.minus,
            TreeState::Free => self.free,
        }
    }
}

/// Transition matrices of the plus, minus and free states at coupling `J`.
///
/// Entries of the form `e^x / (2 cosh x)` are evaluated as `1 / (1 + e^{-2x})`.
pub fn chain_matrices(j: f64) -> Result<ChainMatrices> {
    let t = solve_t(j)?.t;
    let plus = TreeChainMatrix { p01: logistic(2.0 * (t - j)), p11: logistic(2.0 * (j + t)) };
    let minus = TreeChainMatrix { p01: logistic(-2.0 * (j + t)), p11: logistic(2.0 * (j - t)) };
    let free = TreeChainMatrix { p01: logistic(-2.0 * j), p11: logistic(2.0 * j) };
    Ok(ChainMatrices { plus, minus, free, t })
}

/// Supremum of the densities `rho` with `mu_P >= nu_rho`, namely `P(0,1)`.
pub fn max_product_density(p: &TreeChainMatrix) -> Result<f64> {
    if !p.is_monotone() {
        return Err(Error::Hypothesis(format!(
            "chain is not monotone: P(0,1) = {} > P(1,1) = {}",
            p.p01, p.p11
        )));
    }
    Ok(p.p01)
}

/// `mu_P >= mu_Q` iff `P(0,1) >= Q(0,1)` and `P(1,1) >= Q(1,1)`.
pub fn chain_dominates(p: &TreeChainMatrix, q: &TreeChainMatrix) -> bool {
    p.p01 >= q.p01 && p.p11 >= q.p11
}

/// `alpha(J2) = J2 - t_{J2}` clamped to `[0, J_c]`: the plus state at `J2`
/// dominates the plus state at `J <= J_c` iff `J >= alpha(J2)`.
pub fn alpha(j2: f64) -> Result<f64> {
    let jc = critical_coupling();
    ensure_param!(j2 >= jc, "alpha needs J2 >= J_c = {jc}, got {j2}");
    let t = solve_t(j2)?.t;
    Ok((j2 - t).clamp(0.0, jc))
}

/// The ball `T_n` of radius `depth` in the 3-regular tree, in breadth-first
/// order. The root has three children and every other internal vertex two;
/// siblings are ordered by child index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularTree {
    depth: usize,
    parent: Vec<Option<usize>>,
}

impl RegularTree {
    pub fn new(depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::size(format!("tree depth {depth} exceeds {MAX_DEPTH}")));
        }
        let mut parent = vec![None];
        let mut frontier = vec![0usize];
        for level in 0..depth {
            let children = if level == 0 { 3 } else { 2 };
            let mut next = Vec::with_capacity(frontier.len() * children);
            for &v in &frontier {
                for _ in 0..children {
                    next.push(parent.len());
                    parent.push(Some(v));
                }
            }
            frontier = next;
        }
        Ok(RegularTree { depth, parent })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `|V(T_n)| = 3 * 2^n - 2`.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// `P(eta_v = 1 | eta on the earlier vertices)` under the chain `P`.
    pub fn next_site_prob(&self, p: &TreeChainMatrix, prefix: &[u8]) -> f64 {
        match self.parent[prefix.len()] {
            None => p.stationary().1,
            Some(u) => p.get(prefix[u], 1),
        }
    }
}

/// Samples the chain `P` on `T_depth`: root from `pi`, then outward by `P`.
pub fn sample_tree_chain<R: rand::Rng + ?Sized>(
    p: &TreeChainMatrix,
    depth: usize,
    rng: &mut R,
) -> Result<BitConfig> {
    let tree = RegularTree::new(depth)?;
    let mut eta = Vec::with_capacity(tree.len());
    for _ in 0..tree.len() {
        let prob = tree.next_site_prob(p, &eta);
        eta.push(u8::from(rng.random::<f64>() < prob));
    }
    BitConfig::new(eta)
}

/// `mu{eta = 0 on V(T_n)} = pi(0) P(0,0)^(|V(T_n)| - 1)`.
pub fn all_zero_prob_closed_form(p: &TreeChainMatrix, depth: usize) -> Result<f64> {
    let tree = RegularTree::new(depth)?;
    Ok(p.stationary().0 * p.p00().powi(tree.len() as i32 - 1))
}

/// Law of the chain on `T_depth` as a measure on `{0,1}^{|V|}`, vertices in
/// breadth-first order.
pub fn expanded_measure(p: &TreeChainMatrix, depth: usize) -> Result<FiniteMeasure> {
    let tree = RegularTree::new(depth)?;
    let n = tree.len();
    if n > MAX_SITES {
        return Err(Error::size(format!("T_{depth} has {n} vertices, more than {MAX_SITES}")));
    }
    let (pi0, pi1) = p.stationary();
    let weights = (0..1usize << n)
        .map(|x| {
            let bit = |v: usize| ((x >> v) & 1) as u8;
            let root = if bit(0) == 1 { pi1 } else { pi0 };
            (1..n).fold(root, |acc, v| {
                acc * p.get(bit(tree.parent[v].unwrap_or(0)), bit(v))
            })
        })
        .collect();
    FiniteMeasure::from_unnormalized(n, weights)
}

/// Shared-uniform coupling of the chains `P` and `Q` on `T_depth`, returning
/// `(eta_P, eta_Q)`. Pointwise ordered whenever `P` is monotone and
/// dominates `Q`.
pub fn coupled_tree_chains<R: rand::Rng + ?Sized>(
    p: &TreeChainMatrix,
    q: &TreeChainMatrix,
    depth: usize,
    rng: &mut R,
) -> Result<(BitConfig, BitConfig)> {
    let tree = RegularTree::new(depth)?;
    let mut a = Vec::with_capacity(tree.len());
    let mut b = Vec::with_capacity(tree.len());
    for _ in 0..tree.len() {
        let u: f64 = rng.random();
        let pa = tree.next_site_prob(p, &a);
        let pb = tree.next_site_prob(q, &b);
        a.push(u8::from(u < pa));
        b.push(u8::from(u < pb));
    }
    Ok((BitConfig::new(a)?, BitConfig::new(b)?))
}

/// Couples the chain `P` on `T_depth` with `nu_rho` through the lattice
/// sequential coupler, in breadth-first order.
pub fn couple_with_product<R: rand::Rng + ?Sized>(
    p: &TreeChainMatrix,
    rho: f64,
    depth: usize,
    rng: &mut R,
) -> Result<(BitConfig, BitConfig)> {
    let tree = RegularTree::new(depth)?;
    sequential_coupling_with_rng(|prefix| tree.next_site_prob(p, prefix), rho, tree.len(), rng)
}
