//! Shortest-path enumeration and betweenness-weighted route selection.
//!
//! Every shortest path between a user's endpoints is a candidate. Its weight
//! is the sum of normalized betweenness over all of its nodes, endpoints
//! included; a strategy then takes the lightest path, the heaviest path, or
//! a uniformly random one. Ties go to the lexicographically smallest node
//! sequence.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

pub const DEFAULT_PATH_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("node {1} is unreachable from node {0}")]
    Unreachable(NodeId, NodeId),
    #[error("{count} shortest paths between {s} and {d} exceed the cap of {cap}")]
    PathExplosion {
        s: NodeId,
        d: NodeId,
        count: u128,
        cap: usize,
    },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("source and destination are both {0}")]
    SameEndpoints(NodeId),
    #[error("requested {requested} users but only {available} connected pairs exist")]
    TooManyUsers { requested: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "WG_MIN")]
    WgMin,
    #[serde(rename = "WG_MAX")]
    WgMax,
    #[serde(rename = "RANDOM_SP")]
    RandomSp,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::WgMin, Strategy::RandomSp, Strategy::WgMax];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::WgMin => "WG_MIN",
            Strategy::WgMax => "WG_MAX",
            Strategy::RandomSp => "RANDOM_SP",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "WG_MIN" => Ok(Strategy::WgMin),
            "WG_MAX" => Ok(Strategy::WgMax),
            "RANDOM_SP" => Ok(Strategy::RandomSp),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct User {
    pub id: usize,
    pub s: NodeId,
    pub d: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub user: User,
    pub path: Vec<NodeId>,
    /// Sum of normalized betweenness over the path.
    pub weight: f64,
    /// Number of shortest paths the route was chosen from.
    pub k_count: usize,
}

impl Route {
    pub fn hops(&self) -> usize {
        self.path.len() - 1
    }
}

/// Every shortest `s`–`d` path, sorted lexicographically. Paths are read off
/// the BFS predecessor DAG after checking that their number fits under `cap`.
pub fn all_shortest_paths(g: &Graph, s: NodeId, d: NodeId, cap: usize) -> Result<Vec<Vec<NodeId>>, RoutingError> {
    for v in [s, d] {
        if !g.contains(v) {
            return Err(RoutingError::UnknownNode(v));
        }
    }
    if s == d {
        return Err(RoutingError::SameEndpoints(s));
    }
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut sigma = vec![0u128; n];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    sigma[s] = 1;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        if dist[v] >= dist[d] {
            break;
        }
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] = sigma[w].saturating_add(sigma[v]);
            }
        }
    }
    if dist[d] == usize::MAX {
        return Err(RoutingError::Unreachable(s, d));
    }
    if sigma[d] > cap as u128 {
        return Err(RoutingError::PathExplosion {
            s,
            d,
            count: sigma[d],
            cap,
        });
    }

    let mut paths = Vec::with_capacity(sigma[d] as usize);
    let mut stack = vec![d];
    walk_back(g, &dist, &mut stack, &mut paths);
    paths.sort();
    Ok(paths)
}

fn walk_back(g: &Graph, dist: &[usize], stack: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
    let v = *stack.last().unwrap();
    if dist[v] == 0 {
        out.push(stack.iter().rev().copied().collect());
        return;
    }
    for &u in g.neighbors(v) {
        if dist[u] != usize::MAX && dist[u] + 1 == dist[v] {
            stack.push(u);
            walk_back(g, dist, stack, out);
            stack.pop();
        }
    }
}

/// Sum of `bc_norm` over every node of `path`.
pub fn path_weight(path: &[NodeId], bc_norm: &[f64]) -> f64 {
    path.iter().map(|&n| bc_norm[n]).sum()
}

/// Index into `paths` (assumed sorted) chosen by `strategy`.
pub fn choose_index<R: Rng + ?Sized>(paths: &[Vec<NodeId>], strategy: Strategy, bc_norm: &[f64], rng: &mut R) -> usize {
    assert!(!paths.is_empty());
    let weights = paths.iter().map(|p| path_weight(p, bc_norm));
    match strategy {
        Strategy::RandomSp => rng.random_range(0..paths.len()),
        Strategy::WgMin => {
            let mut best = (0, f64::INFINITY);
            for (i, w) in weights.enumerate() {
                if w < best.1 {
                    best = (i, w);
                }
            }
            best.0
        }
        Strategy::WgMax => {
            let mut best = (0, f64::NEG_INFINITY);
            for (i, w) in weights.enumerate() {
                if w > best.1 {
                    best = (i, w);
                }
            }
            best.0
        }
    }
}

pub fn select_route<R: Rng + ?Sized>(
    g: &Graph,
    user: User,
    strategy: Strategy,
    bc_norm: &[f64],
    rng: &mut R,
) -> Result<Route, RoutingError> {
    select_route_capped(g, user, strategy, bc_norm, rng, DEFAULT_PATH_CAP)
}

pub fn select_route_capped<R: Rng + ?Sized>(
    g: &Graph,
    user: User,
    strategy: Strategy,
    bc_norm: &[f64],
    rng: &mut R,
    cap: usize,
) -> Result<Route, RoutingError> {
    let paths = all_shortest_paths(g, user.s, user.d, cap)?;
    let i = choose_index(&paths, strategy, bc_norm, rng);
    let k_count = paths.len();
    let path = paths.into_iter().nth(i).unwrap();
    Ok(Route {
        user,
        weight: path_weight(&path, bc_norm),
        path,
        k_count,
    })
}

/// `count` users whose endpoints are distinct connected pairs, drawn
/// uniformly without replacement.
pub fn draw_users<R: Rng + ?Sized>(g: &Graph, count: usize, rng: &mut R) -> Result<Vec<User>, RoutingError> {
    let comp = g.components();
    let mut sizes = vec![0usize; g.node_count()];
    for &c in &comp {
        sizes[c] += 1;
    }
    let available: usize = sizes.iter().map(|&k| k * k.saturating_sub(1) / 2).sum();
    if count > available {
        return Err(RoutingError::TooManyUsers {
            requested: count,
            available,
        });
    }
    let n = g.node_count();
    let mut used = HashSet::new();
    let mut users = Vec::with_capacity(count);
    while users.len() < count {
        let s = rng.random_range(0..n);
        let d = rng.random_range(0..n);
        if s == d || comp[s] != comp[d] || !used.insert((s.min(d), s.max(d))) {
            continue;
        }
        users.push(User { id: users.len(), s, d });
    }
    Ok(users)
}

pub const ROUTES_CSV_HEADER: &str = "user,s,d,strategy,path_len,k_count,w_g,path";

pub fn route_csv_row(route: &Route, strategy: Strategy) -> String {
    let path: Vec<String> = route.path.iter().map(|n| n.to_string()).collect();
    format!(
        "{},{},{},{},{},{},{},{}",
        route.user.id,
        route.user.s,
        route.user.d,
        strategy,
        route.hops(),
        route.k_count,
        route.weight,
        path.join("-")
    )
}
