//! Finite exchangeable 0/1 sequences summarized by their u-vector.
//!
//! For an exchangeable law on `{0,1}^n`, every configuration with `i` ones
//! has the same probability `u_i`. The law is FKG iff `u` is log-convex, and
//! an FKG exchangeable law dominates `nu_rho` iff `u_0 <= (1 - rho)^n`.

mod extendible;

pub use extendible::{extendible_check, nnls, DEFAULT_GRID, MOMENT_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_param, Error, Result};
use crate::lattice::{FiniteMeasure, MAX_SITES};

/// Tolerance on the total mass of a [`UVector`] and on `MixingLaw` weights.
pub const MASS_TOL: f64 = 1e-12;
/// Tolerance on the log-convexity and threshold comparisons.
pub const CHECK_TOL: f64 = 1e-12;

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Deserialize)]
struct RawUVector {
    n: usize,
    u: Vec<f64>,
}

/// Probabilities `u_0..u_n` of a fixed configuration with `i` ones.
///
/// JSON form: `{"n": n, "u": [u_0, ..., u_n]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawUVector")]
pub struct UVector {
    n: usize,
    u: Vec<f64>,
}

impl TryFrom<RawUVector> for UVector {
    type Error = Error;

    fn try_from(raw: RawUVector) -> Result<Self> {
        UVector::new(raw.n, raw.u)
    }
}

impl UVector {
    pub fn new(n: usize, u: Vec<f64>) -> Result<Self> {
        ensure_param!(n >= 1, "u-vector length must be at least 1");
        ensure_param!(u.len() == n + 1, "expected {} entries, got {}", n + 1, u.len());
        ensure_param!(
            u.iter().all(|x| x.is_finite() && *x >= 0.0),
            "u entries must be finite and nonnegative"
        );
        let total: f64 = u.iter().enumerate().map(|(i, x)| binomial(n, i) * x).sum();
        ensure_param!(
            (total - 1.0).abs() <= MASS_TOL,
            "sum of C(n,i) u_i is {total}, not 1"
        );
        Ok(UVector { n, u })
    }

    /// Rescales so that `sum C(n,i) u_i = 1`.
    pub fn from_unnormalized(n: usize, mut u: Vec<f64>) -> Result<Self> {
        ensure_param!(u.len() == n + 1, "expected {} entries, got {}", n + 1, u.len());
        let total: f64 = u.iter().enumerate().map(|(i, x)| binomial(n, i) * x).sum();
        ensure_param!(total > 0.0 && total.is_finite(), "total mass must be positive");
        for x in &mut u {
            *x /= total;
        }
        UVector::new(n, u)
    }

    /// u-vector of the product measure `nu_rho`.
    pub fn binomial(n: usize, rho: f64) -> Result<Self> {
        ensure_param!((0.0..=1.0).contains(&rho), "density {rho} outside [0, 1]");
        let u = (0..=n)
            .map(|i| rho.powi(i as i32) * (1.0 - rho).powi((n - i) as i32))
            .collect();
        UVector::new(n, u)
    }

    /// Four-site family `u = c (lambda^2, lambda, 1, lambda, lambda^2)` with
    /// `c = 1 / (2 lambda^2 + 8 lambda + 6)`. FKG iff `lambda >= 1`; the law
    /// is a de Finetti mixture only at `lambda = 1`.
    pub fn four_site_family(lambda: f64) -> Result<Self> {
        ensure_param!(lambda > 0.0 && lambda.is_finite(), "lambda must be positive");
        let c = 1.0 / (2.0 * lambda * lambda + 8.0 * lambda + 6.0);
        let u = vec![c * lambda * lambda, c * lambda, c, c * lambda, c * lambda * lambda];
        UVector::new(4, u)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `P(sum of the sequence = k) = C(n,k) u_k`.
    pub fn count_distribution(&self) -> Vec<f64> {
        self.u
            .iter()
            .enumerate()
            .map(|(k, x)| binomial(self.n, k) * x)
            .collect()
    }

    /// Expands to a measure on `{0,1}^n` with weight `u_i` on each
    /// configuration with `i` ones.
    pub fn to_measure(&self) -> Result<FiniteMeasure> {
        if self.n > MAX_SITES {
            return Err(Error::size(format!("cannot expand n = {} > {MAX_SITES}", self.n)));
        }
        let w = (0..1usize << self.n)
            .map(|x| self.u[x.count_ones() as usize])
            .collect();
        FiniteMeasure::new(self.n, w)
    }
}

#[derive(Deserialize)]
struct RawMixingLaw {
    atoms: Vec<(f64, f64)>,
}

/// Finitely supported law of the de Finetti mixing variable `W`.
///
/// JSON form: `{"atoms": [[w, p], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixingLaw")]
pub struct MixingLaw {
    atoms: Vec<(f64, f64)>,
}

impl TryFrom<RawMixingLaw> for MixingLaw {
    type Error = Error;

    fn try_from(raw: RawMixingLaw) -> Result<Self> {
        MixingLaw::new(raw.atoms)
    }
}

impl MixingLaw {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        ensure_param!(!atoms.is_empty(), "mixing law needs at least one atom");
        ensure_param!(
            atoms
                .iter()
                .all(|&(w, p)| (0.0..=1.0).contains(&w) && (0.0..=1.0).contains(&p)),
            "atoms must have location and probability in [0, 1]"
        );
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        ensure_param!(
            (total - 1.0).abs() <= MASS_TOL,
            "atom probabilities sum to {total}, not 1"
        );
        for (i, a) in atoms.iter().enumerate() {
            ensure_param!(
                atoms[..i].iter().all(|b| b.0 != a.0),
                "duplicate atom at w = {}",
                a.0
            );
        }
        Ok(MixingLaw { atoms })
    }

    pub fn point(w: f64) -> Result<Self> {
        MixingLaw::new(vec![(w, 1.0)])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// `E[g(W)]`.
    pub fn expect(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(w, p)| p * g(w)).sum()
    }
}

/// Log-convexity `u_i^2 <= u_{i-1} u_{i+1}` for `0 < i < n`, the FKG lattice
/// condition for exchangeable laws.
pub fn exch_fkg_check(u: &UVector) -> bool {
    let v = u.u();
    (1..u.n()).all(|i| {
        if v[i] == 0.0 && v[i - 1] > 0.0 && v[i + 1] > 0.0 {
            log::warn!("u-vector has an interior zero at i = {i}");
        }
        v[i] * v[i] <= v[i - 1] * v[i + 1] + CHECK_TOL
    })
}

fn check_density(rho: f64) -> Result<()> {
    ensure_param!((0.0..=1.0).contains(&rho), "density {rho} outside [0, 1]");
    Ok(())
}

fn require_fkg(u: &UVector) -> Result<()> {
    if exch_fkg_check(u) {
        Ok(())
    } else {
        Err(Error::Hypothesis(
            "u-vector is not log-convex (not FKG); use count_tail_dominance".into(),
        ))
    }
}

/// Domination of `nu_rho` by an FKG exchangeable law: `u_0 <= (1 - rho)^n`.
pub fn exch_dominates(u: &UVector, rho: f64) -> Result<bool> {
    check_density(rho)?;
    require_fkg(u)?;
    Ok(u.u()[0] <= (1.0 - rho).powi(u.n() as i32) + CHECK_TOL)
}

/// Domination of `nu_rho` by any exchangeable law, via the count tails:
/// `P(|eta| >= k) >= P(Bin(n, rho) >= k)` for every `k`.
pub fn count_tail_dominance(u: &UVector, rho: f64) -> Result<bool> {
    check_density(rho)?;
    let n = u.n();
    let ours = u.count_distribution();
    let theirs = UVector::binomial(n, rho)?.count_distribution();
    let mut tail_ours = 0.0;
    let mut tail_theirs = 0.0;
    for k in (0..=n).rev() {
        tail_ours += ours[k];
        tail_theirs += theirs[k];
        if tail_ours < tail_theirs - CHECK_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `u_i = E[W^i (1 - W)^(n - i)]`.
pub fn definetti_uvector(w: &MixingLaw, n: usize) -> Result<UVector> {
    ensure_param!(n >= 1, "length must be at least 1");
    let u = (0..=n)
        .map(|i| w.expect(|x| x.powi(i as i32) * (1.0 - x).powi((n - i) as i32)))
        .collect();
    UVector::new(n, u)
}

/// Largest dominated product density of an FKG exchangeable law,
/// `1 - u_0^(1/n)`.
pub fn max_density(u: &UVector) -> Result<f64> {
    require_fkg(u)?;
    Ok(1.0 - u.u()[0].powf(1.0 / u.n() as f64))
}

/// `1 - ||1 - W||_n` for a de Finetti mixture.
pub fn max_density_mixture(w: &MixingLaw, n: usize) -> Result<f64> {
    ensure_param!(n >= 1, "length must be at least 1");
    let moment = w.expect(|x| (1.0 - x).powi(n as i32));
    Ok(1.0 - moment.powf(1.0 / n as f64))
}

/// Infimum over positive-probability histories (`a` ones and `b` zeros,
/// `a + b < n`) of `P(next = 1 | history)`.
pub fn conditional_analogue(u: &UVector) -> Result<f64> {
    let n = u.n();
    ensure_param!(n >= 2, "conditional analogue needs n >= 2");
    let v = u.u();
    // Probability of one fixed history with a ones and b zeros.
    let history = |a: usize, b: usize| -> f64 {
        let free = n - a - b;
        (0..=free).map(|j| binomial(free, j) * v[a + j]).sum()
    };
    let mut inf = f64::INFINITY;
    for len in 0..n {
        for a in 0..=len {
            let q = history(a, len - a);
            if q > 0.0 {
                inf = inf.min(history(a + 1, len - a) / q);
            }
        }
    }
    Ok(inf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> MixingLaw {
        MixingLaw::new(vec![(0.25, 0.5), (0.75, 0.5)]).unwrap()
    }

    #[test]
    fn definetti_examples() {
        let u = definetti_uvector(&two_point(), 2).unwrap();
        for (got, want) in u.u().iter().zip([5.0 / 16.0, 3.0 / 16.0, 5.0 / 16.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        let u = definetti_uvector(&MixingLaw::new(vec![(0.0, 0.5), (1.0, 0.5)]).unwrap(), 3).unwrap();
        assert_eq!(u.u(), &[0.5, 0.0, 0.0, 0.5]);
        let u = definetti_uvector(&MixingLaw::point(0.3).unwrap(), 4).unwrap();
        let b = UVector::binomial(4, 0.3).unwrap();
        for (x, y) in u.u().iter().zip(b.u()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn fkg_examples() {
        assert!(exch_fkg_check(&UVector::binomial(5, 0.37).unwrap()));
        let u = UVector::four_site_family(2.0).unwrap();
        let c = 1.0 / 30.0;
        for (x, y) in u.u().iter().zip([4.0 * c, 2.0 * c, c, 2.0 * c, 4.0 * c]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(exch_fkg_check(&u));
        assert!(!exch_fkg_check(&UVector::four_site_family(0.5).unwrap()));
    }

    #[test]
    fn exch_dominates_examples() {
        let rho = 0.35;
        let b = UVector::binomial(4, rho).unwrap();
        assert!(exch_dominates(&b, rho).unwrap());
        assert!(!exch_dominates(&b, rho + 1e-6).unwrap());

        let u = definetti_uvector(&two_point(), 2).unwrap();
        let star = 1.0 - (5.0f64 / 16.0).sqrt();
        assert!(exch_dominates(&u, star).unwrap());
        assert!(!exch_dominates(&u, star + 0.01).unwrap());

        let bad = UVector::four_site_family(0.5).unwrap();
        assert!(matches!(exch_dominates(&bad, 0.1), Err(Error::Hypothesis(_))));
        assert!(matches!(exch_dominates(&b, 1.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn count_tail_examples() {
        // uniform on counts, n = 2: u_i = 1 / (3 C(2, i))
        let u = UVector::new(2, vec![1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0]).unwrap();
        assert!(!count_tail_dominance(&u, 0.5).unwrap());
        assert!(count_tail_dominance(&u, 0.0).unwrap());
        let anti = UVector::new(2, vec![0.0, 0.5, 0.0]).unwrap();
        assert!(count_tail_dominance(&anti, 0.0).unwrap());
    }

    #[test]
    fn max_density_examples() {
        let star = 1.0 - (5.0f64 / 16.0).sqrt();
        let u = definetti_uvector(&two_point(), 2).unwrap();
        assert!((max_density(&u).unwrap() - star).abs() < 1e-12);
        assert!((max_density_mixture(&two_point(), 2).unwrap() - star).abs() < 1e-12);
        assert!((max_density_mixture(&MixingLaw::point(0.3).unwrap(), 7).unwrap() - 0.3).abs() < 1e-12);
        assert!((star - 0.44098).abs() < 1e-5);
    }

    #[test]
    fn max_density_decreases_to_essential_infimum() {
        let w = two_point();
        let mut prev = f64::INFINITY;
        for n in 1..=60 {
            let r = max_density_mixture(&w, n).unwrap();
            assert!(r <= prev + 1e-15 && r > 0.25);
            prev = r;
        }
        // ||1 - W||_60 = (1/2)^(1/60) * 3/4 (1 + 3^-60)^(1/60)
        assert!(prev - 0.25 < 0.01);
    }

    #[test]
    fn conditional_analogue_examples() {
        let u = definetti_uvector(&two_point(), 2).unwrap();
        let c = conditional_analogue(&u).unwrap();
        assert!((c - 3.0 / 8.0).abs() < 1e-12);
        assert!(c < max_density(&u).unwrap());
        let b = UVector::binomial(5, 0.42).unwrap();
        assert!((conditional_analogue(&b).unwrap() - 0.42).abs() < 1e-12);
        assert!(conditional_analogue(&UVector::binomial(1, 0.4).unwrap()).is_err());
    }

    #[test]
    fn json_forms() {
        let w: MixingLaw = serde_json::from_str(r#"{"atoms": [[0.25, 0.5], [0.75, 0.5]]}"#).unwrap();
        assert_eq!(w, two_point());
        let u: UVector = serde_json::from_str(r#"{"n": 1, "u": [0.4, 0.6]}"#).unwrap();
        assert_eq!(u.u(), &[0.4, 0.6]);
        assert!(serde_json::from_str::<UVector>(r#"{"n": 1, "u": [0.4, 0.7]}"#).is_err());
        assert!(serde_json::from_str::<MixingLaw>(r#"{"atoms": [[0.2, 0.5], [0.2, 0.5]]}"#).is_err());
    }
}
