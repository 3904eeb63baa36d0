use serde::{Deserialize, Serialize};

/// Monte Carlo point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateCI {
    pub point: f64,
    /// Sample standard deviation divided by `sqrt(replicas)`.
    pub stderr: f64,
    pub replicas: usize,
    pub seed: u64,
}

impl EstimateCI {
    /// Mean and standard error of `samples`, summed in index order.
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        EstimateCI {
            point: mean,
            stderr: (var / n as f64).sqrt(),
            replicas: n,
            seed,
        }
    }

    /// Estimate of a probability from `hits` successes out of `replicas`.
    pub fn from_counts(hits: usize, replicas: usize, seed: u64) -> Self {
        let n = replicas as f64;
        let p = hits as f64 / n;
        let var = if replicas > 1 {
            p * (1.0 - p) * n / (n - 1.0)
        } else {
            0.0
        };
        EstimateCI {
            point: p,
            stderr: (var / n).sqrt(),
            replicas,
            seed,
        }
    }

    pub fn upper(&self, z: f64) -> f64 {
        self.point + z * self.stderr
    }

    pub fn lower(&self, z: f64) -> f64 {
        self.point - z * self.stderr
    }

    /// `true` when the `z`-sigma intervals of the two estimates do not overlap
    /// and `self` lies above `other`.
    pub fn separated_above(&self, other: &EstimateCI, z: f64) -> bool {
        self.lower(z) > other.upper(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_samples_agree() {
        let samples: Vec<f64> = (0..200).map(|i| if i % 4 == 0 { 1.0 } else { 0.0 }).collect();
        let a = EstimateCI::from_samples(&samples, 0);
        let b = EstimateCI::from_counts(50, 200, 0);
        assert!((a.point - 0.25).abs() < 1e-15);
        assert!((a.stderr - b.stderr).abs() < 1e-15);
    }
}
