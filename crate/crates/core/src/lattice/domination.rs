use super::flow::FlowNetwork;
use super::upsets::{enumerate_up_sets, MAX_UPSET_SITES};
use super::FiniteMeasure;
use crate::error::{ensure_param, Error, Result};

/// Absolute tolerance on `mu(U) >= nu(U)` in the up-set criterion.
pub const DOMINATION_TOL: f64 = 1e-12;
/// Probabilities are multiplied by this before entering the flow network.
pub const FLOW_SCALE: f64 = 1e9;
/// A coupling is declared feasible when the max flow reaches `1 - FLOW_TOL`.
pub const FLOW_TOL: f64 = 1e-9;
/// Largest site count accepted by the max-flow oracle.
pub const MAX_FLOW_SITES: usize = 12;

fn check_pair(mu: &FiniteMeasure, nu: &FiniteMeasure) -> Result<()> {
    ensure_param!(
        mu.n() == nu.n(),
        "measures live on different site counts ({} vs {})",
        mu.n(),
        nu.n()
    );
    if mu.n() > MAX_FLOW_SITES {
        return Err(Error::size(format!(
            "domination oracle supports n <= {MAX_FLOW_SITES}, got {}",
            mu.n()
        )));
    }
    Ok(())
}

/// `mu >= nu` stochastically, decided exactly on `{0,1}^n` for `n <= 12`.
///
/// Uses the up-set criterion for `n <= 5` and the coupling max-flow above.
pub fn dominates(mu: &FiniteMeasure, nu: &FiniteMeasure) -> Result<bool> {
    check_pair(mu, nu)?;
    if mu.n() <= MAX_UPSET_SITES {
        dominates_by_upsets(mu, nu)
    } else {
        dominates_by_flow(mu, nu)
    }
}

/// `mu(U) >= nu(U)` for every up-set `U` (n <= 5).
pub fn dominates_by_upsets(mu: &FiniteMeasure, nu: &FiniteMeasure) -> Result<bool> {
    check_pair(mu, nu)?;
    let family = enumerate_up_sets(mu.n())?;
    Ok(family
        .masks()
        .iter()
        .all(|&u| mu.mass_of_mask(u) >= nu.mass_of_mask(u) - DOMINATION_TOL))
}

/// Decides whether a coupling `(eta, zeta)` with `eta >= zeta`, `eta ~ mu` and
/// `zeta ~ nu` exists, as a max-flow feasibility problem.
///
/// Mass enters configuration `x` from the source with capacity `mu(x)`, may
/// move down the hypercube along uncapacitated edges `x -> x - e_i`, and
/// leaves from `y` to the sink with capacity `nu(y)`. Any path therefore
/// pairs `x` with some `y <= x`, and every such pair is reachable, so this
/// network has the same max flow as the bipartite `x -> {y <= x}` graph with
/// `n 2^(n-1)` instead of `3^n` interior edges.
pub fn dominates_by_flow(mu: &FiniteMeasure, nu: &FiniteMeasure) -> Result<bool> {
    check_pair(mu, nu)?;
    let n = mu.n();
    let configs = 1usize << n;
    let source = configs;
    let sink = configs + 1;
    let mut net = FlowNetwork::new(configs + 2, FLOW_SCALE * 1e-15);
    let unbounded = 2.0 * FLOW_SCALE;
    for x in 0..configs {
        let up = mu.weight(x) * FLOW_SCALE;
        if up > 0.0 {
            net.add_edge(source, x, up);
        }
        let down = nu.weight(x) * FLOW_SCALE;
        if down > 0.0 {
            net.add_edge(x, sink, down);
        }
        for i in 0..n {
            if x & (1 << i) != 0 {
                net.add_edge(x, x ^ (1 << i), unbounded);
            }
        }
    }
    let flow = net.max_flow(source, sink) / FLOW_SCALE;
    Ok(flow >= 1.0 - FLOW_TOL)
}
