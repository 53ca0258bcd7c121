//! Successive-shortest-path min-cost flow on small integer networks.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct MinCostFlow {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    /// Adds `u -> v` and its residual twin; returns the forward arc id.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap, cost });
        self.arcs.push(Arc { to: u, cap: 0, cost: -cost });
        self.out[u].push(id);
        self.out[v].push(id + 1);
        id
    }

    /// Flow currently on the forward arc `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.arcs[id + 1].cap
    }

    /// Pushes a maximum flow of minimum cost; returns `(flow, cost)`.
    /// Costs may be negative as long as the initial network has no negative cycle.
    pub fn run(&mut self, source: usize, sink: usize) -> (i64, i64) {
        let n = self.out.len();
        let (mut flow, mut cost) = (0, 0);
        loop {
            // Bellman-Ford queue variant; the residual network never has negative cycles.
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            dist[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &id in &self.out[u] {
                    let arc = &self.arcs[id];
                    if arc.cap > 0 && dist[u] + arc.cost < dist[arc.to] {
                        dist[arc.to] = dist[u] + arc.cost;
                        via[arc.to] = id;
                        if !queued[arc.to] {
                            queued[arc.to] = true;
                            queue.push_back(arc.to);
                        }
                    }
                }
            }
            if dist[sink] == i64::MAX {
                return (flow, cost);
            }
            let mut push = i64::MAX;
            let mut v = sink;
            while v != source {
                let id = via[v];
                push = push.min(self.arcs[id].cap);
                v = self.arcs[id ^ 1].to;
            }
            let mut v = sink;
            while v != source {
                let id = via[v];
                self.arcs[id].cap -= push;
                self.arcs[id ^ 1].cap += push;
                v = self.arcs[id ^ 1].to;
            }
            flow += push;
            cost += push * dist[sink];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_flow_small_network() {
        let mut f = MinCostFlow::new(4);
        f.add_arc(0, 1, 3, 0);
        f.add_arc(0, 2, 2, 0);
        f.add_arc(1, 2, 1, 0);
        f.add_arc(1, 3, 2, 0);
        f.add_arc(2, 3, 3, 0);
        assert_eq!(f.run(0, 3).0, 5);
    }

    #[test]
    fn prefers_cheap_paths() {
        let mut f = MinCostFlow::new(4);
        let expensive = f.add_arc(0, 1, 1, 0);
        let cheap = f.add_arc(0, 2, 1, -1);
        f.add_arc(1, 3, 1, 0);
        f.add_arc(2, 3, 1, 0);
        let mut g = f.clone();
        assert_eq!(f.run(0, 3), (2, -1));
        assert_eq!(f.flow(expensive) + f.flow(cheap), 2);
        // With a unit sink the cheap arc wins.
        let sink = g.out.len();
        g.out.push(Vec::new());
        g.add_arc(3, sink, 1, 0);
        assert_eq!(g.run(0, sink), (1, -1));
        assert_eq!(g.flow(cheap), 1);
    }
}
