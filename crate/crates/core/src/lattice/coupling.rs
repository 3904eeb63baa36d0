use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BitConfig;
use crate::error::{ensure_param, Error, Result};

/// Draws a monotone pair `(eta, zeta)` with `eta >= zeta` sitewise.
///
/// `next_site_prob` receives the already-sampled prefix of `eta` and returns
/// `P(eta_i = 1 | prefix)`, which must lie in `[rho, 1]`. One uniform `u_i`
/// drives both coordinates: `eta_i = 1` iff `u_i < p_i` and `zeta_i = 1` iff
/// `u_i < rho`, so `eta` follows the callback's law and `zeta ~ nu_rho`.
pub fn sequential_coupling_sample<F>(
    next_site_prob: F,
    rho: f64,
    n: usize,
    seed: u64,
) -> Result<(BitConfig, BitConfig)>
where
    F: FnMut(&[u8]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sequential_coupling_with_rng(next_site_prob, rho, n, &mut rng)
}

/// [`sequential_coupling_sample`] drawing from a caller-owned RNG.
pub fn sequential_coupling_with_rng<F, R>(
    mut next_site_prob: F,
    rho: f64,
    n: usize,
    rng: &mut R,
) -> Result<(BitConfig, BitConfig)>
where
    F: FnMut(&[u8]) -> f64,
    R: rand::Rng + ?Sized,
{
    ensure_param!((0.0..=1.0).contains(&rho), "density {rho} outside [0, 1]");
    ensure_param!(n >= 1, "coupling needs at least one site");
    let mut eta = Vec::with_capacity(n);
    let mut zeta = Vec::with_capacity(n);
    for i in 0..n {
        let p = next_site_prob(&eta);
        if !(p >= rho && p <= 1.0) {
            return Err(Error::Contract(format!(
                "conditional probability {p} at site {i} is outside [{rho}, 1]"
            )));
        }
        let u: f64 = rng.random();
        eta.push(u8::from(u < p));
        zeta.push(u8::from(u < rho));
    }
    Ok((BitConfig(eta), BitConfig(zeta)))
}

/// Sites of a `width x height` window in raster order: left to right along
/// the bottom row, then upwards. Entries are `(column, row)`.
pub fn raster_order(width: usize, height: usize) -> Vec<(usize, usize)> {
    (0..height)
        .flat_map(|row| (0..width).map(move |col| (col, row)))
        .collect()
}

/// `true` iff `site` lies in the lexicographic past of `origin`: a strictly
/// lower row, or the same row strictly to the left.
pub fn in_lexicographic_past(site: (i64, i64), origin: (i64, i64)) -> bool {
    let (di, dj) = (site.0 - origin.0, site.1 - origin.1);
    dj < 0 || (dj == 0 && di < 0)
}
