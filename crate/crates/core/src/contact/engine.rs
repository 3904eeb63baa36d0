use rand_distr::Exp1;
use serde::Serialize;

use super::graph::GraphSpec;
use crate::error::{ensure_param, Result};
use crate::exec::replica_rng;
use crate::lattice::BitConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Infect,
    Recover,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub time: f64,
    pub site: usize,
    pub kind: EventKind,
}

/// Why [`ContactEngine::run`] returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunEnd {
    Horizon,
    Extinct,
    Stopped,
}

const NONE: u32 = u32::MAX;

struct RateClass {
    rate: f64,
    members: Vec<u32>,
}

/// Continuous-time contact process on a [`GraphSpec`].
///
/// Infected sites are grouped by their total event rate `1 + out_rate`, so
/// the next event is drawn exactly: an exponential waiting time with the
/// total rate, a class in proportion to its rate mass, a uniform member,
/// then recovery or one of its out-edges. Arrows onto infected sites are
/// no-ops.
pub struct ContactEngine<'g> {
    graph: &'g GraphSpec,
    state: Vec<u8>,
    class_of: Vec<u16>,
    slot: Vec<u32>,
    classes: Vec<RateClass>,
    infected: usize,
    time: f64,
}

impl<'g> ContactEngine<'g> {
    pub fn new(graph: &'g GraphSpec, init: &[u8]) -> Result<Self> {
        ensure_param!(
            init.len() == graph.len(),
            "initial configuration has {} sites, graph has {}",
            init.len(),
            graph.len()
        );
        ensure_param!(init.iter().all(|&v| v <= 1), "initial configuration must be 0/1");
        let mut classes: Vec<RateClass> = Vec::new();
        let mut class_of = Vec::with_capacity(graph.len());
        for v in 0..graph.len() {
            let rate = 1.0 + graph.out_rate(v);
            let c = match classes.iter().position(|c| c.rate == rate) {
                Some(c) => c,
                None => {
                    classes.push(RateClass { rate, members: Vec::new() });
                    classes.len() - 1
                }
            };
            ensure_param!(c < u16::MAX as usize, "too many distinct site rates");
            class_of.push(c as u16);
        }
        let mut engine = ContactEngine {
            graph,
            state: vec![0; graph.len()],
            class_of,
            slot: vec![NONE; graph.len()],
            classes,
            infected: 0,
            time: 0.0,
        };
        for (v, &s) in init.iter().enumerate() {
            if s == 1 {
                engine.infect(v);
            }
        }
        Ok(engine)
    }

    fn infect(&mut self, v: usize) {
        let c = &mut self.classes[self.class_of[v] as usize];
        self.slot[v] = c.members.len() as u32;
        c.members.push(v as u32);
        self.state[v] = 1;
        self.infected += 1;
    }

    fn recover(&mut self, v: usize) {
        let c = &mut self.classes[self.class_of[v] as usize];
        let i = self.slot[v] as usize;
        let last = *c.members.last().expect("infected site is listed");
        c.members.swap_remove(i);
        if last as usize != v {
            self.slot[last as usize] = i as u32;
        }
        self.slot[v] = NONE;
        self.state[v] = 0;
        self.infected -= 1;
    }

    pub fn state(&self) -> &[u8] {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn infected_count(&self) -> usize {
        self.infected
    }

    /// Advances to time `until`, calling `on_event` after every infection or
    /// recovery; returning `false` from it stops the run at that event.
    pub fn run<R, F>(&mut self, until: f64, rng: &mut R, mut on_event: F) -> RunEnd
    where
        R: rand::Rng + ?Sized,
        F: FnMut(&Event, &Self) -> bool,
    {
        loop {
            if self.infected == 0 {
                return RunEnd::Extinct;
            }
            let total: f64 = self.classes.iter().map(|c| c.rate * c.members.len() as f64).sum();
            let wait: f64 = rng.sample::<f64, _>(Exp1) / total;
            if self.time + wait > until {
                self.time = until;
                return RunEnd::Horizon;
            }
            self.time += wait;
            let mut pick = rng.random::<f64>() * total;
            let mut class = self.classes.len() - 1;
            for (k, c) in self.classes.iter().enumerate() {
                let mass = c.rate * c.members.len() as f64;
                if pick < mass && !c.members.is_empty() {
                    class = k;
                    break;
                }
                pick -= mass;
            }
            if self.classes[class].members.is_empty() {
                class = self.classes.iter().rposition(|c| !c.members.is_empty()).expect("infected > 0");
            }
            let members = &self.classes[class].members;
            let x = members[rng.random_range(0..members.len())] as usize;
            let mut u = rng.random::<f64>() * self.classes[class].rate;
            let event = if u < 1.0 {
                self.recover(x);
                Event { time: self.time, site: x, kind: EventKind::Recover }
            } else {
                u -= 1.0;
                let mut target = None;
                for (y, r) in self.graph.out_edges(x) {
                    if u < r {
                        target = Some(y);
                        break;
                    }
                    u -= r;
                }
                match target {
                    Some(y) if self.state[y] == 0 => {
                        self.infect(y);
                        Event { time: self.time, site: y, kind: EventKind::Infect }
                    }
                    _ => continue,
                }
            };
            if !on_event(&event, self) {
                return RunEnd::Stopped;
            }
        }
    }

    /// Runs to `until` without observing events.
    pub fn run_quiet<R: rand::Rng + ?Sized>(&mut self, until: f64, rng: &mut R) -> RunEnd {
        self.run(until, rng, |_, _| true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    pub state: BitConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub horizon: f64,
    pub events: Vec<Event>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: BitConfig,
    /// Time of the last recovery if the process died out before the horizon.
    pub extinction_time: Option<f64>,
}

/// Simulates the process on `graph` from `init` up to `horizon`, logging
/// every event and the state at each time in `snapshot_times` (clamped to
/// `[0, horizon]`).
pub fn simulate(graph: &GraphSpec, init: &BitConfig, horizon: f64, snapshot_times: &[f64], seed: u64) -> Result<Trajectory> {
    ensure_param!(!graph.is_empty(), "graph is empty");
    ensure_param!(horizon > 0.0 && horizon.is_finite(), "horizon must be positive and finite, got {horizon}");
    let mut rng = replica_rng(seed, 0);
    let mut engine = ContactEngine::new(graph, init.sites())?;
    let mut times: Vec<f64> = snapshot_times.iter().map(|t| t.clamp(0.0, horizon)).collect();
    times.sort_by(f64::total_cmp);
    let mut events = Vec::new();
    let mut snapshots = Vec::with_capacity(times.len());
    let mut log = |e: &Event, _: &ContactEngine| {
        events.push(*e);
        true
    };
    for t in times {
        engine.run(t, &mut rng, &mut log);
        snapshots.push(Snapshot { time: t, state: BitConfig::new(engine.state().to_vec())? });
    }
    engine.run(horizon, &mut rng, &mut log);
    let extinction_time = (engine.infected_count() == 0).then(|| {
        events.iter().rev().find(|e| e.kind == EventKind::Recover).map_or(0.0, |e| e.time)
    });
    Ok(Trajectory { horizon, events, snapshots, final_state: BitConfig::new(engine.state().to_vec())?, extinction_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::EstimateCI;

    fn single_seed(graph: &GraphSpec) -> BitConfig {
        let mut v = vec![0; graph.len()];
        v[graph.len() / 2] = 1;
        BitConfig::new(v).unwrap()
    }

    #[test]
    fn pure_death_mean_extinction_time() {
        let g = GraphSpec::segment(3, 0.0, 0.5).unwrap();
        let init = single_seed(&g);
        let times: Vec<f64> = (0..4000)
            .map(|s| simulate(&g, &init, 100.0, &[], s).unwrap().extinction_time.unwrap())
            .collect();
        let est = EstimateCI::from_samples(&times, 0);
        assert!((est.point - 1.0).abs() <= 3.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn all_zero_is_absorbing() {
        let g = GraphSpec::symmetric_segment(5, 3.0).unwrap();
        let init = BitConfig::zeros(g.len());
        let tr = simulate(&g, &init, 10.0, &[1.0, 5.0], 1).unwrap();
        assert!(tr.events.is_empty());
        assert!(tr.snapshots.iter().all(|s| s.state.ones_count() == 0));
    }

    #[test]
    fn trajectory_is_consistent() {
        let g = GraphSpec::segment(10, 5.0, 0.3).unwrap();
        let init = single_seed(&g);
        let tr = simulate(&g, &init, 5.0, &[2.5], 7).unwrap();
        let mut state = init.sites().to_vec();
        let mut last = 0.0;
        for e in &tr.events {
            assert!(e.time > last);
            last = e.time;
            match e.kind {
                EventKind::Infect => {
                    assert_eq!(state[e.site], 0);
                    assert!(g.has_infected_in_neighbor(e.site, &state));
                    state[e.site] = 1;
                }
                EventKind::Recover => {
                    assert_eq!(state[e.site], 1);
                    state[e.site] = 0;
                }
            }
        }
        assert_eq!(state, tr.final_state.sites());
        assert_eq!(tr.snapshots.len(), 1);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let g = GraphSpec::symmetric_segment(20, 2.0).unwrap();
        let init = single_seed(&g);
        assert_eq!(simulate(&g, &init, 5.0, &[], 3).unwrap(), simulate(&g, &init, 5.0, &[], 3).unwrap());
    }
}
