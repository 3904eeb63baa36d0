use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` for which the up-sets of `{0,1}^n` are enumerated.
pub const MAX_UPSET_SITES: usize = 5;

/// All up-sets of `{0,1}^n`, each stored as a bitmask over the `2^n`
/// configuration indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpSetFamily {
    n: usize,
    sets: Vec<u64>,
}

impl UpSetFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn contains(&self, set: usize, config: usize) -> bool {
        (self.sets[set] >> config) & 1 == 1
    }

    /// Indicator vector of up-set `set` over configuration indices.
    pub fn indicator(&self, set: usize) -> Vec<bool> {
        (0..1usize << self.n).map(|x| self.contains(set, x)).collect()
    }
}

/// `true` iff the configuration set `mask` is upward closed in `{0,1}^n`.
pub fn is_up_set(mask: u64, n: usize) -> bool {
    (0..1usize << n).all(|x| {
        (mask >> x) & 1 == 0 || (0..n).all(|i| (mask >> (x | (1 << i))) & 1 == 1)
    })
}

/// Enumerates every up-set of `{0,1}^n` for `n <= 5`.
///
/// Configurations are visited from the top of the lattice down (decreasing
/// number of ones). A configuration may join the set only if all of its
/// upper covers already belong to it, which by induction makes every
/// partial assignment upward closed.
pub fn enumerate_up_sets(n: usize) -> Result<UpSetFamily> {
    if n > MAX_UPSET_SITES {
        return Err(Error::size(format!(
            "up-set enumeration supports n <= {MAX_UPSET_SITES}, got {n}"
        )));
    }
    let full = (1usize << n) - 1;
    let mut order: Vec<usize> = (0..=full).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(x.count_ones()));
    let covers: Vec<u64> = (0..=full)
        .map(|x| {
            (0..n)
                .filter(|i| x & (1 << i) == 0)
                .fold(0u64, |m, i| m | (1 << (x | (1 << i))))
        })
        .collect();

    let mut sets = Vec::new();
    extend(&order, &covers, 0, 0, &mut sets);
    sets.sort_unstable();
    Ok(UpSetFamily { n, sets })
}

fn extend(order: &[usize], covers: &[u64], pos: usize, current: u64, out: &mut Vec<u64>) {
    if pos == order.len() {
        out.push(current);
        return;
    }
    let x = order[pos];
    extend(order, covers, pos + 1, current, out);
    if covers[x] & !current == 0 {
        extend(order, covers, pos + 1, current | (1 << x), out);
    }
}

/// Filters all `2^(2^n)` subsets for upward closure. Test oracle, `n <= 4`.
pub fn brute_force_up_sets(n: usize) -> Result<Vec<u64>> {
    if n > 4 {
        return Err(Error::size("brute-force up-set filter supports n <= 4"));
    }
    let configs = 1u32 << n;
    Ok((0..1u64 << configs).filter(|&m| is_up_set(m, n)).collect())
}
