use super::upsets::enumerate_up_sets;
use super::FiniteMeasure;
use crate::error::{Error, Result};
use crate::exec;

/// Absolute tolerance on lattice-condition and covariance inequalities.
pub const FKG_TOL: f64 = 1e-12;

const MAX_FKG_SITES: usize = 12;
const MAX_DOWNWARD_SITES: usize = 4;

/// FKG lattice condition `mu(x | y) mu(x & y) >= mu(x) mu(y)` for all pairs.
pub fn fkg_lattice_check(mu: &FiniteMeasure) -> Result<bool> {
    let n = mu.n();
    if n > MAX_FKG_SITES {
        return Err(Error::size(format!(
            "lattice condition check supports n <= {MAX_FKG_SITES}, got {n}"
        )));
    }
    let w = mu.weights();
    Ok(exec::all_indices(w.len(), |x| {
        // Comparable pairs hold with equality; only y > x with x, y
        // incomparable can fail, and the condition is symmetric.
        (x + 1..w.len()).all(|y| {
            x & y == x || w[x | y] * w[x & y] >= w[x] * w[y] - FKG_TOL
        })
    }))
}

/// Downward FKG: for every site set `A` with `mu(eta = 0 on A) > 0`, the
/// conditional measure given `eta = 0 on A` is associated, witnessed by
/// `Cov(1_U, 1_V) >= 0` over all pairs of up-sets. Limited to `n <= 4`.
pub fn downward_fkg_check(mu: &FiniteMeasure) -> Result<bool> {
    let n = mu.n();
    if n > MAX_DOWNWARD_SITES {
        return Err(Error::size(format!(
            "downward FKG check supports n <= {MAX_DOWNWARD_SITES}, got {n}"
        )));
    }
    let family = enumerate_up_sets(n)?;
    let ups = family.masks();
    let configs = 1usize << n;
    for a in 0..configs {
        let event: u64 = (0..configs)
            .filter(|x| x & a == 0)
            .fold(0, |m, x| m | (1 << x));
        let pa = mu.mass_of_mask(event);
        if pa <= 0.0 {
            continue;
        }
        let cond: Vec<f64> = ups.iter().map(|&u| mu.mass_of_mask(u & event) / pa).collect();
        for (i, &u) in ups.iter().enumerate() {
            for (j, &v) in ups.iter().enumerate().skip(i) {
                let joint = mu.mass_of_mask(u & v & event) / pa;
                if joint - cond[i] * cond[j] < -FKG_TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::product_measure;

    fn anti_diagonal() -> FiniteMeasure {
        // uniform on {(1,0), (0,1)}
        FiniteMeasure::new(2, vec![0.0, 0.5, 0.5, 0.0]).unwrap()
    }

    #[test]
    fn product_measures_satisfy_lattice_condition() {
        for &rho in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            assert!(fkg_lattice_check(&product_measure(6, rho).unwrap()).unwrap());
        }
    }

    #[test]
    fn anti_diagonal_fails_both() {
        assert!(!fkg_lattice_check(&anti_diagonal()).unwrap());
        assert!(!downward_fkg_check(&anti_diagonal()).unwrap());
    }

    #[test]
    fn product_is_downward_fkg() {
        assert!(downward_fkg_check(&product_measure(3, 0.3).unwrap()).unwrap());
    }

    #[test]
    fn size_guards() {
        let m = product_measure(5, 0.5).unwrap();
        assert!(matches!(downward_fkg_check(&m), Err(Error::Size(_))));
        let m = product_measure(13, 0.5).unwrap();
        assert!(matches!(fkg_lattice_check(&m), Err(Error::Size(_))));
    }
}
