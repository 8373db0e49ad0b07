use rand::seq::IndexedRandom;
use rand::Rng;

use super::attachment::{
    anti_preferential, dtvcn_attach_with, dtvcn_remove_select_with, preferential, AttachmentDistribution, DegreeRatio,
    PairCorrelation,
};
use super::{GrowthConfig, GrowthError, Model};
use crate::graph::{Graph, NodeId, SnapshotSequence};
use crate::rng::{seeded_rng, Stream};

/// Redraws allowed when an alteration would split the network.
const MAX_RESAMPLES: usize = 10;

/// What one growth step actually did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepReport {
    pub new_node: NodeId,
    pub links_added: usize,
    pub rewired: usize,
    pub rewires_skipped: usize,
    pub removed: usize,
    pub removals_skipped: usize,
}

/// Advances `g` by one instant using the default degree-ratio correlation.
pub fn grow_step<R: Rng + ?Sized>(g: &mut Graph, cfg: &GrowthConfig, rng: &mut R) -> Result<StepReport, GrowthError> {
    grow_step_with(g, cfg, rng, &DegreeRatio)
}

/// One instant of growth: a node arrives and links to distinct existing
/// nodes, then part of the alteration budget rewires links and the rest
/// removes links. Alterations that would disconnect the network are redrawn
/// and eventually skipped.
pub fn grow_step_with<R: Rng + ?Sized>(
    g: &mut Graph,
    cfg: &GrowthConfig,
    rng: &mut R,
    corr: &dyn PairCorrelation,
) -> Result<StepReport, GrowthError> {
    let needed = cfg.new_links();
    if needed >= g.node_count() {
        return Err(GrowthError::BudgetInfeasible {
            needed,
            available: g.node_count(),
        });
    }
    let attach = match cfg.model {
        Model::Ba | Model::Tvcn => preferential(g)?,
        Model::Dtvcn => match dtvcn_attach_with(g, corr, cfg.invert_zeta) {
            Ok(d) => d,
            // every zeta factor vanished; fall back to plain degree preference
            Err(GrowthError::DegenerateDistribution) => preferential(g)?,
            Err(e) => return Err(e),
        },
    };
    let mut targets = attach.sample_distinct(rng, needed, |_| false);
    if targets.len() < needed {
        // mass ran out on the eligible support; fill uniformly from the rest
        let rest: Vec<NodeId> = g.nodes().filter(|v| !targets.contains(v)).collect();
        let extra = rest.choose_multiple(rng, needed - targets.len());
        targets.extend(extra.copied());
    }
    let new_node = g.push_node();
    for &t in &targets {
        g.add_edge(new_node, t)?;
    }
    let mut report = StepReport {
        new_node,
        links_added: targets.len(),
        ..StepReport::default()
    };

    for _ in 0..cfg.rewires() {
        if rewire_once(g, cfg, rng, corr)? {
            report.rewired += 1;
        } else {
            report.rewires_skipped += 1;
        }
    }
    for _ in 0..cfg.removals() {
        if remove_once(g, cfg, rng, corr)? {
            report.removed += 1;
        } else {
            report.removals_skipped += 1;
        }
    }
    debug_assert_eq!(g.check_invariants(), Ok(()));
    Ok(report)
}

fn uniform_neighbor<R: Rng + ?Sized>(g: &Graph, v: NodeId, rng: &mut R) -> Option<NodeId> {
    g.neighbors(v).choose(rng).copied()
}

/// Moves edge `(keep, drop)` to `(keep, to)` unless that splits `drop` off.
fn try_rewire(g: &mut Graph, keep: NodeId, drop: NodeId, to: NodeId) -> Result<bool, GrowthError> {
    g.rewire_edge(keep, drop, to)?;
    if g.reachable(keep, drop) {
        Ok(true)
    } else {
        g.rewire_edge(keep, to, drop)?;
        Ok(false)
    }
}

fn try_remove(g: &mut Graph, a: NodeId, b: NodeId) -> Result<bool, GrowthError> {
    g.remove_edge(a, b)?;
    if g.reachable(a, b) {
        Ok(true)
    } else {
        g.add_edge(a, b)?;
        Ok(false)
    }
}

fn rewire_once<R: Rng + ?Sized>(
    g: &mut Graph,
    cfg: &GrowthConfig,
    rng: &mut R,
    corr: &dyn PairCorrelation,
) -> Result<bool, GrowthError> {
    for _ in 0..=MAX_RESAMPLES {
        let done = match cfg.model {
            Model::Ba => return Ok(false),
            Model::Tvcn => {
                // an anti-preferentially chosen end gives up the link, whose
                // other end re-attaches preferentially
                let Some(j) = anti_preferential(g)?.sample(rng) else {
                    return Ok(false);
                };
                let Some(k) = uniform_neighbor(g, j, rng) else {
                    continue;
                };
                let pref = preferential(g)?;
                let Some(u) = pref.sample_excluding(rng, |u| u == k || g.has_edge(k, u)) else {
                    continue;
                };
                try_rewire(g, k, j, u)?
            }
            Model::Dtvcn => {
                // a loaded node drops an assortative neighbor and relinks by
                // the correlation-modulated preference
                let assortative = |g: &Graph, j: NodeId| -> Vec<NodeId> {
                    let kj = g.degree(j);
                    g.neighbors(j)
                        .iter()
                        .copied()
                        .filter(|&k| corr.scaled(kj, g.degree(k)) > 1.0)
                        .collect()
                };
                let pref = preferential(g)?;
                let eligible: Vec<bool> = g.nodes().map(|j| !assortative(g, j).is_empty()).collect();
                let Some(j) = pref.sample_excluding(rng, |j| !eligible[j]) else {
                    return Ok(false);
                };
                let Some(&k) = assortative(g, j).choose(rng) else {
                    continue;
                };
                let attach = match dtvcn_attach_with(g, corr, cfg.invert_zeta) {
                    Ok(d) => d,
                    Err(GrowthError::DegenerateDistribution) => return Ok(false),
                    Err(e) => return Err(e),
                };
                let Some(u) = attach.sample_excluding(rng, |u| u == j || g.has_edge(j, u)) else {
                    continue;
                };
                try_rewire(g, j, k, u)?
            }
        };
        if done {
            return Ok(true);
        }
    }
    Ok(false)
}

fn remove_once<R: Rng + ?Sized>(
    g: &mut Graph,
    cfg: &GrowthConfig,
    rng: &mut R,
    corr: &dyn PairCorrelation,
) -> Result<bool, GrowthError> {
    let select: AttachmentDistribution = match cfg.model {
        Model::Ba => return Ok(false),
        Model::Tvcn => anti_preferential(g)?,
        Model::Dtvcn => match dtvcn_remove_select_with(g, corr, cfg.invert_zeta) {
            Ok(d) => d,
            Err(GrowthError::DegenerateDistribution) => return Ok(false),
            Err(e) => return Err(e),
        },
    };
    for _ in 0..=MAX_RESAMPLES {
        let Some(j) = select.sample(rng) else {
            return Ok(false);
        };
        let Some(k) = uniform_neighbor(g, j, rng) else {
            continue;
        };
        if try_remove(g, j, k)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Runs the whole growth process, calling `visit(t, snapshot)` for the seed
/// ring (`t = 0`) and after every step. Returns the final snapshot.
pub fn generate_with<F>(cfg: &GrowthConfig, mut visit: F) -> Result<Graph, GrowthError>
where
    F: FnMut(usize, &Graph),
{
    cfg.validate()?;
    let mut rng = seeded_rng(cfg.rng_seed, Stream::Growth);
    let mut g = Graph::ring(cfg.n0);
    visit(0, &g);
    for t in 1..=cfg.steps {
        grow_step(&mut g, cfg, &mut rng)?;
        visit(t, &g);
    }
    Ok(g)
}

/// Every snapshot from the seed ring to the final network.
pub fn generate(cfg: &GrowthConfig) -> Result<SnapshotSequence, GrowthError> {
    let mut seq = SnapshotSequence::new();
    generate_with(cfg, |_, g| seq.push(g.clone()))?;
    Ok(seq)
}

/// Only the final snapshot.
pub fn generate_final(cfg: &GrowthConfig) -> Result<Graph, GrowthError> {
    generate_with(cfg, |_, _| {})
}
