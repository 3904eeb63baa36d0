//! Dinic max-flow on real-valued capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    rev: usize,
    cap: f64,
}

/// Flow network with floating-point capacities.
///
/// Residual capacities at or below `eps` count as saturated, which keeps the
/// level graph finite in the presence of rounding.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    graph: Vec<Vec<Edge>>,
    eps: f64,
}

impl FlowNetwork {
    pub fn new(nodes: usize, eps: f64) -> Self {
        FlowNetwork {
            graph: vec![Vec::new(); nodes],
            eps,
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64) {
        let rev_from = self.graph[to].len() + usize::from(from == to);
        let rev_to = self.graph[from].len();
        self.graph[from].push(Edge { to, rev: rev_from, cap });
        self.graph[to].push(Edge { to: from, rev: rev_to, cap: 0.0 });
    }

    fn levels(&self, s: usize) -> Vec<i32> {
        let mut level = vec![-1; self.graph.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > self.eps && level[e.to] < 0 {
                    level[e.to] = level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        level
    }

    fn augment(&mut self, v: usize, t: usize, pushed: f64, level: &[i32], iter: &mut [usize]) -> f64 {
        if v == t {
            return pushed;
        }
        while iter[v] < self.graph[v].len() {
            let (to, cap, rev) = {
                let e = &self.graph[v][iter[v]];
                (e.to, e.cap, e.rev)
            };
            if cap > self.eps && level[v] < level[to] {
                let d = self.augment(to, t, pushed.min(cap), level, iter);
                if d > self.eps {
                    self.graph[v][iter[v]].cap -= d;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            iter[v] += 1;
        }
        0.0
    }

    /// Maximum flow from `s` to `t`. Consumes residual capacity.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return total;
            }
            let mut iter = vec![0; self.graph.len()];
            loop {
                let f = self.augment(s, t, f64::INFINITY, &level, &mut iter);
                if f <= self.eps {
                    break;
                }
                total += f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_network() {
        let mut g = FlowNetwork::new(4, 1e-12);
        g.add_edge(0, 1, 3.0);
        g.add_edge(0, 2, 2.0);
        g.add_edge(1, 2, 1.0);
        g.add_edge(1, 3, 2.0);
        g.add_edge(2, 3, 3.0);
        assert!((g.max_flow(0, 3) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn fractional_capacities() {
        let mut g = FlowNetwork::new(3, 1e-15);
        g.add_edge(0, 1, 0.3);
        g.add_edge(1, 2, 0.25);
        g.add_edge(0, 2, 0.125);
        assert!((g.max_flow(0, 2) - 0.375).abs() < 1e-15);
    }
}
