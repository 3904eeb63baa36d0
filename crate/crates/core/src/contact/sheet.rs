use rand_distr::Exp1;

use super::graph::GraphSpec;
use crate::error::{ensure_param, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum MarkKind {
    Recover,
    /// Infection arrow to `to`, kept by a run with thinning `theta` iff `mark < theta`.
    Arrow { to: u32, mark: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Mark {
    time: f64,
    site: u32,
    kind: MarkKind,
}

/// Pre-generated Poisson marks on `graph x [0, horizon]`: recovery marks at
/// rate 1 per site and infection arrows at each edge's rate, every arrow
/// carrying a uniform thinning mark.
///
/// Running any initial configuration through the same sheet gives the
/// standard monotone coupling: ordered starts stay ordered, and a smaller
/// thinning `theta` (infection rates scaled by `theta`) gives a smaller
/// process.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphicalSheet {
    sites: usize,
    horizon: f64,
    marks: Vec<Mark>,
}

impl GraphicalSheet {
    pub fn generate<R: rand::Rng + ?Sized>(graph: &GraphSpec, horizon: f64, rng: &mut R) -> Result<Self> {
        ensure_param!(horizon > 0.0 && horizon.is_finite(), "horizon must be positive and finite, got {horizon}");
        let mut marks = Vec::new();
        for v in 0..graph.len() {
            let rate = 1.0 + graph.out_rate(v);
            let mut t = 0.0;
            loop {
                t += rng.sample::<f64, _>(Exp1) / rate;
                if t > horizon {
                    break;
                }
                let mut u = rng.random::<f64>() * rate;
                let kind = if u < 1.0 {
                    MarkKind::Recover
                } else {
                    u -= 1.0;
                    let mut to = None;
                    for (y, r) in graph.out_edges(v) {
                        if u < r {
                            to = Some(y);
                            break;
                        }
                        u -= r;
                    }
                    match to {
                        Some(y) => MarkKind::Arrow { to: y as u32, mark: rng.random() },
                        None => continue,
                    }
                };
                marks.push(Mark { time: t, site: v as u32, kind });
            }
        }
        marks.sort_by(|a, b| a.time.total_cmp(&b.time));
        Ok(GraphicalSheet { sites: graph.len(), horizon, marks })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn mark_count(&self) -> usize {
        self.marks.len()
    }

    /// Final state after running `init` through the sheet with thinning
    /// `theta`; `observe(time, state)` sees the state after every mark and
    /// may stop the run by returning `false`.
    pub fn run_observed(&self, init: &[u8], theta: f64, mut observe: impl FnMut(f64, &[u8]) -> bool) -> Result<Vec<u8>> {
        ensure_param!(init.len() == self.sites, "initial configuration has {} sites, sheet has {}", init.len(), self.sites);
        ensure_param!((0.0..=1.0).contains(&theta), "thinning must lie in [0, 1], got {theta}");
        let mut state = init.to_vec();
        for m in &self.marks {
            let x = m.site as usize;
            match m.kind {
                MarkKind::Recover => state[x] = 0,
                MarkKind::Arrow { to, mark } => {
                    if state[x] == 1 && mark < theta {
                        state[to as usize] = 1;
                    }
                }
            }
            if !observe(m.time, &state) {
                break;
            }
        }
        Ok(state)
    }

    /// True if `init` dies out within the sheet's horizon.
    pub fn dies_out(&self, init: &[u8], theta: f64) -> Result<bool> {
        ensure_param!(init.len() == self.sites, "initial configuration has {} sites, sheet has {}", init.len(), self.sites);
        ensure_param!((0.0..=1.0).contains(&theta), "thinning must lie in [0, 1], got {theta}");
        let mut alive = init.iter().filter(|&&v| v == 1).count();
        if alive == 0 {
            return Ok(true);
        }
        let mut state = init.to_vec();
        for m in &self.marks {
            let x = m.site as usize;
            match m.kind {
                MarkKind::Recover => {
                    if state[x] == 1 {
                        state[x] = 0;
                        alive -= 1;
                        if alive == 0 {
                            return Ok(true);
                        }
                    }
                }
                MarkKind::Arrow { to, mark } => {
                    if state[x] == 1 && mark < theta && state[to as usize] == 0 {
                        state[to as usize] = 1;
                        alive += 1;
                    }
                }
            }
        }
        Ok(false)
    }

    pub fn run(&self, init: &[u8], theta: f64) -> Result<Vec<u8>> {
        self.run_observed(init, theta, |_, _| true)
    }

    /// Runs two starts through the sheet side by side and counts marks after
    /// which `lower <= upper` fails.
    pub fn coupled_violations(&self, upper: &[u8], theta_upper: f64, lower: &[u8], theta_lower: f64) -> Result<usize> {
        ensure_param!(upper.len() == self.sites && lower.len() == self.sites, "configuration size mismatch");
        ensure_param!(
            (0.0..=1.0).contains(&theta_upper) && (0.0..=1.0).contains(&theta_lower),
            "thinning must lie in [0, 1]"
        );
        let mut a = upper.to_vec();
        let mut b = lower.to_vec();
        let mut violations = a.iter().zip(&b).filter(|(x, y)| y > x).count();
        for m in &self.marks {
            let x = m.site as usize;
            match m.kind {
                MarkKind::Recover => {
                    a[x] = 0;
                    b[x] = 0;
                }
                MarkKind::Arrow { to, mark } => {
                    if a[x] == 1 && mark < theta_upper {
                        a[to as usize] = 1;
                    }
                    if b[x] == 1 && mark < theta_lower {
                        b[to as usize] = 1;
                    }
                    if b[to as usize] > a[to as usize] {
                        violations += 1;
                    }
                }
            }
        }
        Ok(violations)
    }
}
