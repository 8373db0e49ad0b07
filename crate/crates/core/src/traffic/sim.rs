//! Discrete-time packet simulation.
//!
//! Each step: sources inject Poisson-distributed packets, every queue
//! forwards head-of-line packets one hop within its service budget, and
//! packets reaching their destination leave the network. Service budgets are
//! fractional; a queue banks `share` credit per step and forwards one packet
//! per whole unit. An emptied queue keeps only the fractional part of its
//! credit.

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{TrafficError, TrafficParams, TrafficSetup};
use crate::graph::{Graph, NodeId};
use crate::routing::{all_shortest_paths, choose_index, Route, Strategy, DEFAULT_PATH_CAP};

pub const TRAFFIC_CSV_HEADER: &str =
    "model,strategy,N,seed,alpha,beta,lambda_total,cap_total,theta,mean_T,analytic_T,lambda_c_theory,lambda_c_sub";

/// Where packets come from and which paths they follow.
#[derive(Debug, Clone, Copy)]
pub enum SimMode<'a> {
    /// Every node generates at its own rate toward uniformly random
    /// destinations; each `(s, d)` pair is routed once by `strategy` and the
    /// choice is cached.
    Global { strategy: Strategy },
    /// Only user sources generate, each along its fixed route. A node
    /// splits its capacity equally among the users it forwards for.
    Users(&'a [Route]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficResult {
    /// Order parameter `(C / lambda) * max(0, dP/dt)` over the final window.
    pub theta: f64,
    /// Fitted packet-count drift over the final window, unclamped.
    pub drift: f64,
    /// Mean travel time of packets born after warm-up; `None` if none arrived.
    pub mean_t: Option<f64>,
    /// Mean hop count of the same packets.
    pub mean_hops: Option<f64>,
    /// Injected load: all node rates in global mode, user source rates otherwise.
    pub lambda_total: f64,
    /// Sum of node capacities.
    pub cap_total: f64,
    pub congested_nodes: Vec<NodeId>,
    pub generated: u64,
    pub delivered: u64,
    /// Packets in the network after each step.
    pub in_network: Vec<u64>,
}

#[derive(Debug, Clone, Copy)]
struct Packet {
    route: u32,
    hop: u32,
    born: u32,
}

struct Lane {
    queue: VecDeque<Packet>,
    share: f64,
    credit: f64,
}

/// Least-squares slope of `ys` against `0, 1, 2, ..`.
fn slope(ys: &[u64]) -> f64 {
    let n = ys.len() as f64;
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = ys.iter().map(|&y| y as f64).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y as f64 - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

fn poisson_table(rates: &[f64]) -> Result<Vec<Option<Poisson<f64>>>, TrafficError> {
    rates
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            if !(l >= 0.0 && l.is_finite()) {
                Err(TrafficError::NonPositiveRate(i))
            } else if l == 0.0 {
                Ok(None)
            } else {
                Ok(Some(Poisson::new(l).map_err(|_| TrafficError::NonPositiveRate(i))?))
            }
        })
        .collect()
}

fn check_route(g: &Graph, r: &Route) -> Result<(), TrafficError> {
    let ok = r.path.len() >= 2
        && r.path[0] == r.user.s
        && *r.path.last().unwrap() == r.user.d
        && r.path.iter().all(|&v| g.contains(v))
        && r.path.windows(2).all(|w| g.has_edge(w[0], w[1]));
    if ok {
        Ok(())
    } else {
        Err(TrafficError::InvalidRoute(r.user.id))
    }
}

/// Runs the packet simulation. `rng` drives packet generation, destination
/// draws and random route choice.
pub fn simulate<R: Rng + ?Sized>(
    g: &Graph,
    setup: &TrafficSetup,
    mode: SimMode<'_>,
    params: &TrafficParams,
    rng: &mut R,
) -> Result<TrafficResult, TrafficError> {
    params.validate()?;
    let n = g.node_count();
    let cap_total: f64 = setup.cap.iter().sum();

    // route table; lanes_of[r][h] is the queue serving hop h of route r
    let mut routes: Vec<Vec<NodeId>> = Vec::new();
    let mut lanes_of: Vec<Vec<usize>> = Vec::new();
    let mut lanes: Vec<Lane> = Vec::new();
    let sources: Vec<(usize, Option<Poisson<f64>>)>;
    let lambda_total: f64;
    let mut comp_members: Vec<Vec<NodeId>> = Vec::new();
    let mut pos_in_comp = vec![0usize; n];
    let comp = g.components();

    match mode {
        SimMode::Global { .. } => {
            let table = poisson_table(&setup.lambda)?;
            for v in 0..n {
                if setup.lambda[v] > 0.0 && setup.cap[v] <= 0.0 {
                    return Err(TrafficError::ZeroCapacity(v));
                }
                lanes.push(Lane {
                    queue: VecDeque::new(),
                    share: setup.cap[v],
                    credit: 0.0,
                });
            }
            let n_comp = comp.iter().max().map_or(0, |m| m + 1);
            comp_members = vec![Vec::new(); n_comp];
            for v in 0..n {
                pos_in_comp[v] = comp_members[comp[v]].len();
                comp_members[comp[v]].push(v);
            }
            sources = table.into_iter().enumerate().collect();
            lambda_total = setup.lambda.iter().sum();
        }
        SimMode::Users(user_routes) => {
            let mut users_at = vec![0usize; n];
            for r in user_routes {
                check_route(g, r)?;
                for &v in &r.path[..r.path.len() - 1] {
                    users_at[v] += 1;
                }
            }
            let mut src = Vec::with_capacity(user_routes.len());
            for (ri, r) in user_routes.iter().enumerate() {
                let mut ids = Vec::with_capacity(r.path.len() - 1);
                for &v in &r.path[..r.path.len() - 1] {
                    if setup.cap[v] <= 0.0 {
                        return Err(TrafficError::ZeroCapacity(v));
                    }
                    ids.push(lanes.len());
                    lanes.push(Lane {
                        queue: VecDeque::new(),
                        share: setup.cap[v] / users_at[v] as f64,
                        credit: 0.0,
                    });
                }
                routes.push(r.path.clone());
                lanes_of.push(ids);
                let rate = setup.lambda[r.user.s];
                src.push((
                    ri,
                    poisson_table(&[rate])
                        .map_err(|_| TrafficError::NonPositiveRate(r.user.s))?
                        .remove(0),
                ));
            }
            lambda_total = user_routes.iter().map(|r| setup.lambda[r.user.s]).sum();
            sources = src;
        }
    }

    let mut cache: HashMap<(NodeId, NodeId), u32> = HashMap::new();
    let mut staged: Vec<(usize, Packet)> = Vec::new();
    let mut in_network = Vec::with_capacity(params.steps);
    let (mut generated, mut delivered, mut live) = (0u64, 0u64, 0u64);
    let (mut t_sum, mut hop_sum, mut t_count) = (0u64, 0u64, 0u64);

    for step in 0..params.steps {
        // injection
        for (src, dist) in &sources {
            let Some(dist) = dist else { continue };
            let count = dist.sample(rng) as u64;
            for _ in 0..count {
                let route = match mode {
                    SimMode::Users(_) => *src as u32,
                    SimMode::Global { strategy } => {
                        let s = *src;
                        let peers = &comp_members[comp[s]];
                        if peers.len() < 2 {
                            break;
                        }
                        // uniform over the component minus `s`
                        let mut i = rng.random_range(0..peers.len() - 1);
                        if i >= pos_in_comp[s] {
                            i += 1;
                        }
                        let d = peers[i];
                        match cache.get(&(s, d)) {
                            Some(&id) => id,
                            None => {
                                let paths = all_shortest_paths(g, s, d, DEFAULT_PATH_CAP)?;
                                let pick = choose_index(&paths, strategy, &setup.bc_norm, rng);
                                let path = paths.into_iter().nth(pick).unwrap();
                                let id = routes.len() as u32;
                                lanes_of.push(path[..path.len() - 1].to_vec());
                                routes.push(path);
                                cache.insert((s, d), id);
                                id
                            }
                        }
                    }
                };
                let first = lanes_of[route as usize][0];
                lanes[first].queue.push_back(Packet {
                    route,
                    hop: 0,
                    born: step as u32,
                });
                generated += 1;
                live += 1;
            }
        }

        // service
        for (li, lane) in lanes.iter_mut().enumerate() {
            lane.credit += lane.share;
            let budget = lane.credit.floor() as usize;
            let served = budget.min(lane.queue.len());
            for _ in 0..served {
                let mut p = lane.queue.pop_front().unwrap();
                p.hop += 1;
                staged.push((li, p));
            }
            lane.credit -= served as f64;
            if lane.queue.is_empty() {
                lane.credit = lane.credit.fract();
            }
        }

        // arrival
        for (_, p) in staged.drain(..) {
            let path_len = routes[p.route as usize].len();
            if p.hop as usize == path_len - 1 {
                delivered += 1;
                live -= 1;
                if p.born as usize >= params.warmup {
                    t_sum += (step - p.born as usize + 1) as u64;
                    hop_sum += p.hop as u64;
                    t_count += 1;
                }
            } else {
                let next = lanes_of[p.route as usize][p.hop as usize];
                lanes[next].queue.push_back(p);
            }
        }
        debug_assert_eq!(generated, delivered + live);
        in_network.push(live);
    }

    let drift = slope(&in_network[params.steps - params.window..]);
    let theta = if lambda_total > 0.0 {
        cap_total / lambda_total * drift.max(0.0)
    } else {
        0.0
    };
    let (mean_t, mean_hops) = if t_count == 0 {
        (None, None)
    } else {
        (
            Some(t_sum as f64 / t_count as f64),
            Some(hop_sum as f64 / t_count as f64),
        )
    };
    Ok(TrafficResult {
        theta,
        drift,
        mean_t,
        mean_hops,
        lambda_total,
        cap_total,
        congested_nodes: setup.congested_nodes(),
        generated,
        delivered,
        in_network,
    })
}
