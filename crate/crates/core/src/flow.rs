//! Augmenting-path maximum flow, generic over the capacity scalar.

use std::collections::VecDeque;

use crate::Scalar;

#[derive(Debug, Clone)]
struct Arc<T> {
    to: usize,
    residual: T,
}

/// Residual graph for shortest-augmenting-path (Edmonds-Karp) max-flow.
///
/// Exact scalars give exact flow values; with rationals the number of
/// augmentations is bounded by `O(V E)` regardless of the capacities.
#[derive(Debug, Clone)]
pub struct FlowGraph<T> {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc<T>>,
}

impl<T: Scalar> FlowGraph<T> {
    pub fn new(nodes: usize) -> Self {
        FlowGraph { adj: vec![Vec::new(); nodes], arcs: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: T) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, residual: capacity });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, residual: T::zero() });
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> T {
        let mut total = T::zero();
        if source == sink {
            return total;
        }
        loop {
            let mut via: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[source] = true;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for &a in &self.adj[u] {
                    let arc = &self.arcs[a];
                    if !seen[arc.to] && arc.residual > T::zero() {
                        seen[arc.to] = true;
                        via[arc.to] = Some(a);
                        queue.push_back(arc.to);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut bottleneck: Option<T> = None;
            let mut v = sink;
            while let Some(a) = via[v] {
                let r = self.arcs[a].residual;
                bottleneck = Some(bottleneck.map_or(r, |b| b.min_of(r)));
                v = self.arcs[a ^ 1].to;
            }
            let push = bottleneck.expect("augmenting path has at least one arc");
            let mut v = sink;
            while let Some(a) = via[v] {
                self.arcs[a].residual = self.arcs[a].residual - push;
                self.arcs[a ^ 1].residual = self.arcs[a ^ 1].residual + push;
                v = self.arcs[a ^ 1].to;
            }
            total = total + push;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn classic_integer_instance() {
        let mut g = FlowGraph::<i64>::new(6);
        for (u, v, c) in [(0, 1, 10), (0, 2, 10), (1, 3, 4), (1, 4, 8), (2, 4, 9), (3, 5, 10), (4, 3, 6), (4, 5, 10)] {
            g.add_arc(u, v, c);
        }
        assert_eq!(g.max_flow(0, 5), 19);
    }

    #[test]
    fn rational_capacities_are_exact() {
        let mut g = FlowGraph::new(3);
        g.add_arc(0, 1, Rational::new(1, 3));
        g.add_arc(0, 1, Rational::new(1, 6));
        g.add_arc(1, 2, Rational::new(2, 3));
        assert_eq!(g.max_flow(0, 2), Rational::new(1, 2));
    }

    #[test]
    fn float_capacities() {
        let mut g = FlowGraph::<f32>::new(2);
        g.add_arc(0, 1, 0.5);
        g.add_arc(0, 1, 0.25);
        assert_eq!(g.max_flow(0, 1), 0.75);
    }

    #[test]
    fn disconnected_is_zero() {
        let mut g = FlowGraph::<i64>::new(4);
        g.add_arc(0, 1, 10);
        g.add_arc(2, 3, 5);
        assert_eq!(g.max_flow(0, 3), 0);
    }
}
