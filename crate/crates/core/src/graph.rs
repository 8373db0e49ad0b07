//! Undirected simple graph snapshots and the snapshot sequence of a
//! time-varying network.
//!
//! Node labels are dense integers handed out in arrival order, so the label
//! of a node doubles as the instant at which it joined the network. Temporal
//! links (a node linked to itself across instants) are implicit: a node that
//! exists in snapshot `t` exists in every later snapshot.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} already exists")]
    DuplicateNode(NodeId),
    #[error("node labels are dense: expected next label {expected}, got {got}")]
    NonContiguousLabel { expected: NodeId, got: NodeId },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) already exists")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) does not exist")]
    UnknownEdge(NodeId, NodeId),
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// Undirected simple graph. Neighbor lists are kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with nodes `0..n` and no edges.
    pub fn with_nodes(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Cycle on `n` nodes. For `n == 2` this is a single edge, for `n < 2`
    /// there are no edges.
    pub fn ring(n: usize) -> Self {
        let mut g = Graph::with_nodes(n);
        if n == 2 {
            g.add_edge(0, 1).expect("fresh graph");
        } else if n > 2 {
            for v in 0..n {
                g.add_edge(v, (v + 1) % n).expect("fresh graph");
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::with_nodes(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b).expect("fresh graph");
            }
        }
        g
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::with_nodes(n);
        for leaf in 1..n {
            g.add_edge(0, leaf).expect("fresh graph");
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::with_nodes(n);
        for v in 1..n {
            g.add_edge(v - 1, v).expect("fresh graph");
        }
        g
    }

    /// Builds a graph on `0..n` from an edge list.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut g = Graph::with_nodes(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.adj.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adj.len()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn degree_sum(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adj.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.adj.len() as f64
        }
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.contains(a) && self.contains(b) && self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (a, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    /// Adds node `id`, which must be the next unused label.
    pub fn add_node(&mut self, id: NodeId) -> Result<(), GraphError> {
        if id < self.adj.len() {
            return Err(GraphError::DuplicateNode(id));
        }
        if id > self.adj.len() {
            return Err(GraphError::NonContiguousLabel {
                expected: self.adj.len(),
                got: id,
            });
        }
        self.adj.push(Vec::new());
        Ok(())
    }

    /// Appends a fresh node and returns its label.
    pub fn push_node(&mut self) -> NodeId {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for v in [a, b] {
            if !self.contains(v) {
                return Err(GraphError::UnknownNode(v));
            }
        }
        let pos_a = match self.adj[a].binary_search(&b) {
            Ok(_) => return Err(GraphError::DuplicateEdge(a, b)),
            Err(p) => p,
        };
        let pos_b = self.adj[b].binary_search(&a).expect_err("adjacency symmetry");
        self.adj[a].insert(pos_a, b);
        self.adj[b].insert(pos_b, a);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        for v in [a, b] {
            if !self.contains(v) {
                return Err(GraphError::UnknownNode(v));
            }
        }
        let pos_a = self.adj[a]
            .binary_search(&b)
            .map_err(|_| GraphError::UnknownEdge(a, b))?;
        let pos_b = self.adj[b].binary_search(&a).expect("adjacency symmetry");
        self.adj[a].remove(pos_a);
        self.adj[b].remove(pos_b);
        self.edge_count -= 1;
        Ok(())
    }

    /// Moves the far end of edge `(a, old_b)` to `new_b`. Either both the
    /// removal and the addition happen or neither does.
    pub fn rewire_edge(&mut self, a: NodeId, old_b: NodeId, new_b: NodeId) -> Result<(), GraphError> {
        for v in [a, old_b, new_b] {
            if !self.contains(v) {
                return Err(GraphError::UnknownNode(v));
            }
        }
        if !self.has_edge(a, old_b) {
            return Err(GraphError::UnknownEdge(a, old_b));
        }
        if new_b == a {
            return Err(GraphError::SelfLoop(a));
        }
        if self.has_edge(a, new_b) {
            return Err(GraphError::DuplicateEdge(a, new_b));
        }
        self.remove_edge(a, old_b)?;
        self.add_edge(a, new_b)?;
        Ok(())
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// True if `b` can be reached from `a`.
    pub fn reachable(&self, a: NodeId, b: NodeId) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if w == b {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Component label per node, labels assigned in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || self.components().iter().all(|&c| c == 0)
    }

    /// Subgraph induced by `nodes`, relabelled densely in the order given.
    /// Returns the subgraph and the original label of each new node.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> (Graph, Vec<NodeId>) {
        let mut index = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i;
        }
        let mut sub = Graph::with_nodes(nodes.len());
        for (i, &v) in nodes.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    sub.add_edge(i, j).expect("induced edges are unique");
                }
            }
        }
        (sub, nodes.to_vec())
    }

    /// Checks the structural invariants: no self-loops, no parallel edges,
    /// symmetric adjacency and the handshake identity.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (v, nb) in self.adj.iter().enumerate() {
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("neighbor list of {v} not strictly sorted"));
            }
            for &w in nb {
                if w == v {
                    return Err(format!("self-loop at {v}"));
                }
                if w >= self.adj.len() || self.adj[w].binary_search(&v).is_err() {
                    return Err(format!("asymmetric adjacency {v}-{w}"));
                }
            }
        }
        if self.degree_sum() != 2 * self.edge_count {
            return Err(format!(
                "degree sum {} != 2 * edge count {}",
                self.degree_sum(),
                self.edge_count
            ));
        }
        Ok(())
    }

    /// Canonical edge-list text: `#nodes <N>` followed by one sorted
    /// `a b` line per edge with `a < b`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        writeln!(s, "#nodes {}", self.node_count()).unwrap();
        for (a, b) in self.edges() {
            writeln!(s, "{a} {b}").unwrap();
        }
        s
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut g: Option<Graph> = None;
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let parse_err = |msg: &str| GraphError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            match &mut g {
                None => {
                    let n = trimmed
                        .strip_prefix("#nodes")
                        .ok_or_else(|| parse_err("expected `#nodes <N>` header"))?
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(&e.to_string()))?;
                    g = Some(Graph::with_nodes(n));
                }
                Some(g) => {
                    if trimmed.starts_with('#') {
                        continue;
                    }
                    let mut it = trimmed.split_whitespace();
                    let mut next = || -> Result<NodeId, GraphError> {
                        it.next()
                            .ok_or_else(|| parse_err("expected two node labels"))?
                            .parse::<NodeId>()
                            .map_err(|e| parse_err(&e.to_string()))
                    };
                    let (a, b) = (next()?, next()?);
                    g.add_edge(a, b).map_err(|e| parse_err(&e.to_string()))?;
                }
            }
        }
        g.ok_or(GraphError::Parse {
            line: 0,
            msg: "empty edge list".into(),
        })
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        Self::read_edge_list(text.as_bytes())
    }
}

/// The network observed at consecutive time instants.
#[derive(Debug, Clone, Default)]
pub struct SnapshotSequence {
    snapshots: Vec<Graph>,
}

impl SnapshotSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the snapshot for the next instant. The node set may only grow.
    pub fn push(&mut self, g: Graph) {
        if let Some(last) = self.snapshots.last() {
            assert!(g.node_count() >= last.node_count(), "node set shrank between snapshots");
        }
        self.snapshots.push(g);
    }

    /// Number of instants.
    pub fn tau(&self) -> usize {
        self.snapshots.len()
    }

    pub fn get(&self, t: usize) -> Option<&Graph> {
        self.snapshots.get(t)
    }

    pub fn last(&self) -> Option<&Graph> {
        self.snapshots.last()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Graph> {
        self.snapshots.iter()
    }

    pub fn into_last(self) -> Option<Graph> {
        self.snapshots.into_iter().last()
    }
}

impl<'a> IntoIterator for &'a SnapshotSequence {
    type Item = &'a Graph;
    type IntoIter = std::slice::Iter<'a, Graph>;
    fn into_iter(self) -> Self::IntoIter {
        self.snapshots.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_node_to_empty() {
        let mut g = Graph::new();
        g.add_node(0).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.degree(0), 0);
    }

    #[test]
    fn add_node_keeps_edges() {
        let mut g = Graph::complete(3);
        g.add_node(3).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.add_node(2), Err(GraphError::DuplicateNode(2)));
        assert!(matches!(
            g.add_node(9),
            Err(GraphError::NonContiguousLabel { expected: 4, got: 9 })
        ));
    }

    #[test]
    fn add_edge_cases() {
        let mut g = Graph::path(2);
        g.add_node(2).unwrap();
        g.add_edge(1, 2).unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 1]);

        let mut k3 = Graph::complete(3);
        assert_eq!(k3.add_edge(0, 1), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(k3.add_edge(0, 0), Err(GraphError::SelfLoop(0)));
        assert_eq!(k3.add_edge(0, 7), Err(GraphError::UnknownNode(7)));
    }

    #[test]
    fn remove_and_rewire() {
        let mut k3 = Graph::complete(3);
        k3.remove_edge(0, 1).unwrap();
        assert_eq!(k3.edge_count(), 2);
        assert_eq!(k3.degrees(), vec![1, 1, 2]);
        assert_eq!(k3.remove_edge(0, 1), Err(GraphError::UnknownEdge(0, 1)));

        let mut g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        g.rewire_edge(0, 1, 2).unwrap();
        assert_eq!(g.edges(), vec![(0, 2)]);
        assert_eq!(g.edge_count(), 1);

        let mut k3 = Graph::complete(3);
        assert_eq!(k3.rewire_edge(0, 1, 2), Err(GraphError::DuplicateEdge(0, 2)));
        assert_eq!(k3, Graph::complete(3), "failed rewire leaves graph intact");
        assert_eq!(k3.rewire_edge(0, 1, 0), Err(GraphError::SelfLoop(0)));
    }

    #[test]
    fn edge_list_round_trip_is_bit_exact() {
        let g = Graph::from_edges(6, &[(4, 1), (0, 5), (2, 3), (1, 0)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "#nodes 6\n0 1\n0 5\n1 4\n2 3\n");
        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn edge_list_errors_carry_line() {
        let err = Graph::parse_edge_list("#nodes 3\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = Graph::parse_edge_list("0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn connectivity_helpers() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 0, 1, 1]);
        assert!(!g.is_connected());
        assert!(g.reachable(0, 2));
        assert!(!g.reachable(0, 4));
        assert_eq!(g.bfs_distances(0), vec![Some(0), Some(1), Some(2), None, None]);
    }

    #[test]
    #[should_panic(expected = "node set shrank")]
    fn snapshot_nodes_monotone() {
        let mut seq = SnapshotSequence::new();
        seq.push(Graph::ring(4));
        seq.push(Graph::ring(3));
    }
}
