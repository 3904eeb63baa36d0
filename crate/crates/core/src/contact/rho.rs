use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::estimators::{a_n_estimate, AnParams, AnReport};
use crate::error::{ensure_param, Result};

/// `max(0, (beta - 4) / beta)`: a density the upper invariant measure
/// dominates for every `p`.
pub fn certified_rho(beta: f64) -> f64 {
    if beta > 4.0 {
        (beta - 4.0) / beta
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoBlockBound {
    /// Block `[0, n]` of `n + 1` sites.
    pub n: usize,
    pub report: AnReport,
    /// `1 - (a_hat - z se)_+^{1/(n+1)}`.
    pub rho_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoInterval {
    pub beta: f64,
    pub p: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    /// One-sided Bonferroni quantile over the simulated blocks.
    pub z: f64,
    pub confidence: f64,
    pub blocks: Vec<RhoBlockBound>,
    pub consistent: bool,
}

/// `[rho_lo, rho_hi]` bracketing the largest dominated density: `rho_lo`
/// from [`certified_rho`], `rho_hi` from simulated block-zero probabilities
/// `a(n)`, `n < max_block`, which must satisfy `a(n) <= (1 - rho)^{n+1}`.
pub fn rho_interval(beta: f64, p: f64, max_block: usize, template: &AnParams) -> Result<RhoInterval> {
    ensure_param!(max_block >= 1, "need at least one block size");
    let confidence = 0.95;
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / max_block as f64);
    let mut blocks = Vec::with_capacity(max_block);
    for n in 0..max_block {
        let params = AnParams { n, beta, p, seed: template.seed.wrapping_add(n as u64), ..*template };
        let report = a_n_estimate(&params)?;
        let lower = (report.estimate.point - z * report.estimate.stderr).max(0.0);
        let rho_upper = 1.0 - lower.powf(1.0 / (n + 1) as f64);
        blocks.push(RhoBlockBound { n, report, rho_upper });
    }
    let rho_lo = certified_rho(beta);
    let rho_hi = blocks.iter().map(|b| b.rho_upper).fold(1.0, f64::min);
    Ok(RhoInterval { beta, p, rho_lo, rho_hi, z, confidence, blocks, consistent: rho_hi >= rho_lo })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certified_values() {
        assert_eq!(certified_rho(8.0), 0.5);
        assert_eq!(certified_rho(3.0), 0.0);
        // symmetric lambda = 4 is beta = 8; (lambda - 2) / lambda = 1/2
        let lambda = 4.0;
        assert_eq!(certified_rho(2.0 * lambda), (lambda - 2.0) / lambda);
    }

    #[test]
    fn interval_is_consistent() {
        let template = AnParams::new(0, 8.0, 0.5, 1000, 40);
        let r = rho_interval(8.0, 0.3, 3, &template).unwrap();
        assert_eq!(r.rho_lo, 0.5);
        assert!(r.consistent && r.rho_hi >= r.rho_lo, "{r:?}");
        assert!(r.rho_hi < 1.0);
    }
}
