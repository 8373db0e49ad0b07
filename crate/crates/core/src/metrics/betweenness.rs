use std::collections::VecDeque;

use super::MetricsError;
use crate::graph::Graph;

/// Shortest-path betweenness of every node.
#[derive(Debug, Clone, PartialEq)]
pub struct Betweenness {
    /// Sum over unordered pairs `{s, d}` (neither equal to the node) of the
    /// fraction of `s`–`d` shortest paths through the node.
    pub raw: Vec<f64>,
    /// `raw * 2 / ((N - 1)(N - 2))`, in `[0, 1]`.
    pub norm: Vec<f64>,
}

impl Betweenness {
    /// Node with the largest raw value; the lowest label wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (v, &b) in self.raw.iter().enumerate() {
            if b > self.raw[best] {
                best = v;
            }
        }
        best
    }

    pub fn max_norm(&self) -> f64 {
        self.norm.iter().copied().fold(0.0, f64::max)
    }
}

/// Raw betweenness by dependency accumulation over one BFS per source.
/// Pairs in different components contribute nothing.
pub fn betweenness_raw(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut bc = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        delta.iter_mut().for_each(|x| *x = 0.0);
        order.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        // predecessors of w are exactly its neighbors one level closer
        for &w in order.iter().rev() {
            for &v in g.neighbors(w) {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    // every unordered pair was counted from both ends
    bc.iter_mut().for_each(|b| *b *= 0.5);
    bc
}

pub fn betweenness(g: &Graph) -> Result<Betweenness, MetricsError> {
    let n = g.node_count();
    if n < 3 {
        return Err(MetricsError::TooSmall(n));
    }
    let raw = betweenness_raw(g);
    let scale = 2.0 / ((n - 1) as f64 * (n - 2) as f64);
    let norm = raw.iter().map(|b| b * scale).collect();
    Ok(Betweenness { raw, norm })
}
