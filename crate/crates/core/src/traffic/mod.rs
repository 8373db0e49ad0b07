//! Traffic model: node capacities from eigenvector centrality, generation
//! rates from betweenness, the critical generation rate and a packet-level
//! queue simulation.

mod sim;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use sim::{simulate, SimMode, TrafficResult, TRAFFIC_CSV_HEADER};

use crate::graph::{Graph, NodeId};
use crate::metrics::{self, betweenness, eigenvector_centrality, EigenConfig, MetricsError};
use crate::routing::{all_shortest_paths, path_weight, Route, RoutingError, Strategy};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrafficError {
    #[error("invalid traffic parameters: {0}")]
    InvalidParams(String),
    #[error("route of user {0} is not a walk along graph edges")]
    InvalidRoute(usize),
    #[error("generation rate of node {0} is negative or not finite")]
    NonPositiveRate(NodeId),
    #[error("node {0} has zero capacity")]
    ZeroCapacity(NodeId),
    #[error("no routes given")]
    EmptyRoutes,
    #[error("route union is empty or has no node carrying transit traffic")]
    EmptySubnetwork,
    #[error("every node has zero betweenness")]
    ZeroBetweenness,
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficParams {
    /// Generation-rate control.
    pub alpha: f64,
    /// Capacity control.
    pub beta: f64,
    pub steps: usize,
    /// Leading steps ignored by the travel-time average.
    pub warmup: usize,
    /// Trailing steps over which the packet-count drift is fitted.
    pub window: usize,
}

impl Default for TrafficParams {
    fn default() -> Self {
        TrafficParams {
            alpha: 0.1,
            beta: 0.5,
            steps: 5_000,
            warmup: 1_000,
            window: 1_000,
        }
    }
}

impl TrafficParams {
    pub fn validate(&self) -> Result<(), TrafficError> {
        let bad = |m: String| Err(TrafficError::InvalidParams(m));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be non-negative, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.window < 2 {
            return bad("window must span at least two steps".into());
        }
        if self.warmup + self.window > self.steps {
            return bad(format!(
                "warmup + window ({} + {}) exceeds steps ({})",
                self.warmup, self.window, self.steps
            ));
        }
        Ok(())
    }
}

/// `C_i = beta * x_i * N` for sum-normalized eigenvector centrality `x`.
pub fn node_capacity(evc: &[f64], beta: f64) -> Vec<f64> {
    let n = evc.len() as f64;
    evc.iter().map(|x| beta * x * n).collect()
}

/// `lambda_i = alpha * D * N * g_i / sum_j g_j`. When every `g` is zero the
/// load is spread uniformly, `lambda_i = alpha * D`.
pub fn generation_rate(bc: &[f64], alpha: f64, diameter: usize, n: usize) -> Vec<f64> {
    let total: f64 = bc.iter().sum();
    let load = alpha * diameter as f64 * n as f64;
    if total <= 0.0 {
        return vec![alpha * diameter as f64; bc.len()];
    }
    bc.iter().map(|g| load * g / total).collect()
}

/// `lambda_c = C_max (N - 1) / g_max` with raw betweenness.
pub fn lambda_c_from(c_max: f64, n: usize, g_max_raw: f64) -> f64 {
    c_max * (n as f64 - 1.0) / g_max_raw
}

/// Critical generation rate of a connected graph: the capacity of the node
/// with the largest raw betweenness times `(N - 1)`, over that betweenness.
pub fn lambda_c_theoretical(g: &Graph, beta: f64) -> Result<f64, TrafficError> {
    let bc = betweenness(g)?;
    let evc = eigenvector_centrality(g, EigenConfig::default())?.centrality;
    lambda_c_with(g.node_count(), &bc.raw, &evc, beta)
}

/// [`lambda_c_theoretical`] from precomputed centralities.
pub fn lambda_c_with(n: usize, bc_raw: &[f64], evc: &[f64], beta: f64) -> Result<f64, TrafficError> {
    let hub = argmax(bc_raw);
    let g_max = bc_raw[hub];
    if g_max <= 0.0 {
        return Err(TrafficError::ZeroBetweenness);
    }
    let c_max = beta * evc[hub] * n as f64;
    Ok(lambda_c_from(c_max, n, g_max))
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Sum over users of `sum_{n in route} lambda_n / min_{n in route} C_n`.
pub fn analytic_travel_time(routes: &[Route], lambda: &[f64], cap: &[f64]) -> Result<f64, TrafficError> {
    if routes.is_empty() {
        return Err(TrafficError::EmptyRoutes);
    }
    let mut total = 0.0;
    for r in routes {
        let load: f64 = r.path.iter().map(|&n| lambda[n]).sum();
        let (argmin, c_min) = r
            .path
            .iter()
            .map(|&n| (n, cap[n]))
            .fold((r.path[0], f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        if c_min <= 0.0 {
            return Err(TrafficError::ZeroCapacity(argmin));
        }
        total += load / c_min;
    }
    Ok(total)
}

/// Critical rate of the subnetwork induced by the nodes on the users'
/// routes, with betweenness and eigenvector centrality recomputed on it.
/// A disconnected union reports the smallest per-component value.
pub fn subnetwork_lambda_c(g: &Graph, routes: &[Route], beta: f64) -> Result<f64, TrafficError> {
    let mut nodes: Vec<NodeId> = routes.iter().flat_map(|r| r.path.iter().copied()).collect();
    nodes.sort_unstable();
    nodes.dedup();
    if nodes.is_empty() {
        return Err(TrafficError::EmptySubnetwork);
    }
    let (sub, _) = g.induced_subgraph(&nodes);
    let comp = sub.components();
    let n_comp = comp.iter().max().map_or(0, |m| m + 1);
    let mut best: Option<f64> = None;
    for c in 0..n_comp {
        let members: Vec<NodeId> = sub.nodes().filter(|&v| comp[v] == c).collect();
        if members.len() < 3 {
            continue;
        }
        let (part, _) = sub.induced_subgraph(&members);
        match lambda_c_theoretical(&part, beta) {
            Ok(l) => best = Some(best.map_or(l, |b: f64| b.min(l))),
            Err(TrafficError::ZeroBetweenness) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or(TrafficError::EmptySubnetwork)
}

/// Expected per-step service demand on every node when each node `s`
/// injects `rate[s]` packets per step toward uniformly random destinations
/// in its component, routed by `strategy`. A packet is served once by
/// every node of its path except the destination. Random routing is
/// averaged over the shortest-path set.
pub fn expected_demand(g: &Graph, rate: &[f64], strategy: Strategy, bc_norm: &[f64]) -> Result<Vec<f64>, TrafficError> {
    let n = g.node_count();
    let comp = g.components();
    let mut demand = vec![0.0; n];
    for s in 0..n {
        if rate[s] <= 0.0 {
            continue;
        }
        let peers = comp.iter().filter(|&&c| c == comp[s]).count() - 1;
        if peers == 0 {
            continue;
        }
        let per_dest = rate[s] / peers as f64;
        for d in 0..n {
            if d == s || comp[d] != comp[s] {
                continue;
            }
            let paths = all_shortest_paths(g, s, d, crate::routing::DEFAULT_PATH_CAP)?;
            match strategy {
                Strategy::RandomSp => {
                    let share = per_dest / paths.len() as f64;
                    for p in &paths {
                        for &v in &p[..p.len() - 1] {
                            demand[v] += share;
                        }
                    }
                }
                _ => {
                    let pick = pick_deterministic(&paths, strategy, bc_norm);
                    for &v in &paths[pick][..paths[pick].len() - 1] {
                        demand[v] += per_dest;
                    }
                }
            }
        }
    }
    Ok(demand)
}

fn pick_deterministic(paths: &[Vec<NodeId>], strategy: Strategy, bc_norm: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..paths.len() {
        let w = path_weight(&paths[i], bc_norm);
        let b = path_weight(&paths[best], bc_norm);
        let better = match strategy {
            Strategy::WgMax => w > b,
            _ => w < b,
        };
        if better {
            best = i;
        }
    }
    best
}

/// Capacities, generation rates and the centralities they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficSetup {
    pub lambda: Vec<f64>,
    pub cap: Vec<f64>,
    pub bc_raw: Vec<f64>,
    pub bc_norm: Vec<f64>,
    pub evc: Vec<f64>,
    pub diameter: usize,
}

impl TrafficSetup {
    pub fn new(g: &Graph, alpha: f64, beta: f64) -> Result<Self, TrafficError> {
        let bc = betweenness(g)?;
        let evc = eigenvector_centrality(g, EigenConfig::default())?.centrality;
        let diameter = metrics::apl_diameter(g).diameter;
        Ok(TrafficSetup {
            lambda: generation_rate(&bc.norm, alpha, diameter, g.node_count()),
            cap: node_capacity(&evc, beta),
            bc_raw: bc.raw,
            bc_norm: bc.norm,
            evc,
            diameter,
        })
    }

    /// Same capacities with rates rescaled to a new `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        TrafficSetup {
            lambda: generation_rate(&self.bc_norm, alpha, self.diameter, self.lambda.len()),
            ..self.clone()
        }
    }

    pub fn lambda_c(&self, beta: f64) -> Result<f64, TrafficError> {
        lambda_c_with(self.lambda.len(), &self.bc_raw, &self.evc, beta)
    }

    /// Node with the largest raw betweenness.
    pub fn hub(&self) -> NodeId {
        argmax(&self.bc_raw)
    }

    /// Nodes whose generation rate exceeds their capacity.
    pub fn congested_nodes(&self) -> Vec<NodeId> {
        (0..self.lambda.len())
            .filter(|&i| self.lambda[i] > self.cap[i])
            .collect()
    }
}
