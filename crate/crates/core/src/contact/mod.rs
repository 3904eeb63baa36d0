//! Continuous-time contact process: exact simulation, a shared graphical
//! sheet for couplings, block-zero estimates of the upper invariant measure
//! through duality, and the bounds they are compared with.
//!
//! On `Z` the process is asymmetric: `x` becomes infected at rate
//! `beta [p eta(x-1) + (1-p) eta(x+1)]` and recovers at rate 1.

mod engine;
mod estimators;
mod graph;
mod rectangle;
mod renewal;
mod rho;
mod sheet;
mod star;

pub use engine::{simulate, ContactEngine, Event, EventKind, RunEnd, Snapshot, Trajectory};
pub use estimators::{
    a_n_estimate, block_zero_direct, light_cone_half_width, one_sided_conditionals, two_sided_ratio, AnParams,
    AnReport, SheetParams, TwoSidedReport, DEFAULT_CAP, DEFAULT_HORIZON, MIN_REPLICAS,
};
pub use graph::{GraphKind, GraphSpec};
pub use rectangle::{
    contact_rectangle_factor, flip_rectangle_value, rectangle_crossover, spacetime_rectangle, CrossoverReport,
    CrossoverRow, RectangleParams, RectangleReport,
};
pub use renewal::{renewal_block_prob, renewal_mean_gap};
pub use rho::{certified_rho, rho_interval, RhoBlockBound, RhoInterval};
pub use sheet::GraphicalSheet;
pub use star::{star_certified_rho, star_graph_experiment, StarParams, StarReport};

use crate::error::Result;
use crate::lattice::Grid;

/// State at time `horizon` of the process on the `side x side` torus with
/// rate `lambda` per directed edge, started from all ones.
pub fn torus_sample<R: rand::Rng + ?Sized>(side: usize, lambda: f64, horizon: f64, rng: &mut R) -> Result<Grid> {
    let graph = GraphSpec::torus(side, lambda)?;
    let mut engine = ContactEngine::new(&graph, &vec![1u8; graph.len()])?;
    engine.run_quiet(horizon, rng);
    Grid::new(side, side, engine.state().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::replica_rng;
    use crate::lattice::BitConfig;

    #[test]
    fn survival_monotone_in_lambda() {
        let g = GraphSpec::symmetric_segment(50, 3.0).unwrap();
        let mut init = vec![0u8; g.len()];
        init[50] = 1;
        let reps = 3000;
        let mut survived = [0usize; 3];
        let thetas = [1.5 / 3.0, 2.0 / 3.0, 1.0];
        for seed in 0..reps {
            let sheet = GraphicalSheet::generate(&g, 10.0, &mut replica_rng(seed, 0)).unwrap();
            let alive: Vec<bool> = thetas.iter().map(|&th| !sheet.dies_out(&init, th).unwrap()).collect();
            assert!(alive.windows(2).all(|w| w[0] <= w[1]));
            for (k, a) in alive.iter().enumerate() {
                survived[k] += *a as usize;
            }
        }
        assert!(survived[0] > 0 && survived[2] < reps as usize);
        assert!(survived[0] <= survived[1] && survived[1] <= survived[2]);
        // the engine agrees with the sheet at lambda = 2
        let g2 = GraphSpec::symmetric_segment(50, 2.0).unwrap();
        let start = BitConfig::new(init.clone()).unwrap();
        let engine_alive = (0..reps).filter(|&s| simulate(&g2, &start, 10.0, &[], 10_000 + s).unwrap().final_state.ones_count() > 0).count();
        let (a, b) = (survived[1] as f64 / reps as f64, engine_alive as f64 / reps as f64);
        let se = ((a * (1.0 - a) + b * (1.0 - b)) / reps as f64).sqrt();
        assert!((a - b).abs() <= 3.5 * se, "sheet {a} engine {b}");
    }

    #[test]
    fn torus_sample_shape() {
        let g = torus_sample(8, 2.0, 1.0, &mut replica_rng(1, 0)).unwrap();
        assert_eq!((g.width(), g.height()), (8, 8));
    }
}
