use crate::error::{ensure_param, Result};

/// `C(x) = sum_k Cat_k x^k = (1 - sqrt(1 - 4x)) / (2x)` for `0 < x <= 1/4`.
fn catalan_gf(x: f64) -> f64 {
    (1.0 - (1.0 - 4.0 * x).sqrt()) / (2.0 * x)
}

/// `sum_{k >= m} Cat_k beta^{-k}`.
fn catalan_tail(beta: f64, m: usize) -> f64 {
    let x = 1.0 / beta;
    let mut term = 1.0;
    let mut partial = 0.0;
    for k in 0..m {
        partial += term;
        term *= (4 * k + 2) as f64 / (k + 2) as f64 * x;
    }
    // Geometric convergence at ratio 4/beta; near beta = 4 the terms decay
    // only like k^{-3/2}, so subtract the partial sum from the closed form.
    if 4.0 * x > 0.9 {
        return (catalan_gf(x) - partial).max(0.0);
    }
    let mut tail = 0.0;
    let mut k = m;
    loop {
        tail += term;
        term *= (4 * k + 2) as f64 / (k + 2) as f64 * x;
        k += 1;
        let ratio = 4.0 * x;
        if term * ratio / (1.0 - ratio) < 1e-16 * tail {
            break;
        }
    }
    tail
}

/// Mean gap `E xi = sum_{k >= 1} P(xi >= k)` of the renewal law with
/// `P(xi >= k) = Cat_k beta^{-k}`.
pub fn renewal_mean_gap(beta: f64) -> Result<f64> {
    ensure_param!(beta >= 4.0 && beta.is_finite(), "renewal bound needs finite beta >= 4, got {beta}");
    Ok(catalan_gf(1.0 / beta) - 1.0)
}

/// `mu{eta = 0 on [0, n]} = d sum_{k >= n+1} Cat_k beta^{-k}` with
/// `d = 1 / (1 + E xi)`, for the stationary renewal measure whose zero
/// runs have tails `Cat_k beta^{-k}`.
pub fn renewal_block_prob(beta: f64, n: usize) -> Result<f64> {
    let d = 1.0 / (1.0 + renewal_mean_gap(beta)?);
    Ok(d * catalan_tail(beta, n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tail_by_factorials(beta: f64, m: usize) -> f64 {
        // direct summation of (2k)!/(k!(k+1)!) beta^-k in log space
        let lf = |k: usize| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
        (m..4000)
            .map(|k| (lf(2 * k) - lf(k) - lf(k + 1) - k as f64 * beta.ln()).exp())
            .sum()
    }

    #[test]
    fn critical_value_is_one_half() {
        assert!((renewal_mean_gap(4.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((renewal_block_prob(4.0, 0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_factorial_sum() {
        for &beta in &[4.5, 5.0, 6.0, 8.0, 20.0] {
            for n in 0..7 {
                let a = renewal_block_prob(beta, n).unwrap();
                let d = 1.0 / (1.0 + tail_by_factorials(beta, 1));
                let b = d * tail_by_factorials(beta, n + 1);
                assert!((a - b).abs() < 1e-12 * b.max(1e-300) + 1e-15, "beta {beta} n {n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn both_summation_routes_agree() {
        // 4.3 and 4.4 take the closed-form route, 5 and 7 the direct one
        for &beta in &[4.3, 4.4, 5.0, 7.0] {
            for m in 1..8 {
                let t = tail_by_factorials(beta, m);
                assert!((catalan_tail(beta, m) - t).abs() < 1e-12 * t, "beta {beta} m {m}");
            }
        }
    }

    #[test]
    fn strictly_decreasing_in_n_and_beta() {
        for &beta in &[4.0, 5.0, 6.0, 8.0] {
            let v: Vec<f64> = (0..10).map(|n| renewal_block_prob(beta, n).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] < w[0]));
        }
        for n in 0..6 {
            let v: Vec<f64> = [4.0, 4.5, 5.0, 6.0, 8.0, 12.0].iter().map(|&b| renewal_block_prob(b, n).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn vanishes_for_large_beta() {
        assert!(renewal_block_prob(1e6, 2).unwrap() < 1e-15);
        assert!(renewal_block_prob(3.9, 0).is_err());
    }
}
