//! Node selection distributions used by the growth models.

use rand::Rng;

use super::GrowthError;
use crate::graph::{Graph, NodeId};

/// A probability per node of the current snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct AttachmentDistribution {
    probs: Vec<f64>,
}

impl AttachmentDistribution {
    /// Normalizes non-negative weights. Fails when they sum to zero.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self, GrowthError> {
        debug_assert!(weights.iter().all(|&w| w >= 0.0 && w.is_finite()));
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(GrowthError::DegenerateDistribution);
        }
        Ok(AttachmentDistribution {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Draws a node, ignoring any node for which `excluded` returns true and
    /// renormalizing over the rest. `None` if no eligible node has mass.
    pub fn sample_excluding<R, F>(&self, rng: &mut R, excluded: F) -> Option<NodeId>
    where
        R: Rng + ?Sized,
        F: Fn(NodeId) -> bool,
    {
        let total: f64 = self
            .probs
            .iter()
            .enumerate()
            .filter(|&(v, _)| !excluded(v))
            .map(|(_, p)| p)
            .sum();
        if total <= 0.0 {
            return None;
        }
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = None;
        for (v, &p) in self.probs.iter().enumerate() {
            if p <= 0.0 || excluded(v) {
                continue;
            }
            acc += p;
            last = Some(v);
            if target < acc {
                return Some(v);
            }
        }
        // rounding can leave `target` just past the final cumulative value
        last
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<NodeId> {
        self.sample_excluding(rng, |_| false)
    }

    /// `count` distinct nodes drawn one after another, each draw
    /// renormalized over the nodes not yet taken.
    pub fn sample_distinct<R, F>(&self, rng: &mut R, count: usize, excluded: F) -> Vec<NodeId>
    where
        R: Rng + ?Sized,
        F: Fn(NodeId) -> bool,
    {
        let mut taken: Vec<NodeId> = Vec::with_capacity(count);
        for _ in 0..count {
            match self.sample_excluding(rng, |v| excluded(v) || taken.contains(&v)) {
                Some(v) => taken.push(v),
                None => break,
            }
        }
        taken
    }
}

/// Raw pairwise degree correlation in `[-1, 1]`.
pub trait PairCorrelation: Sync {
    fn raw(&self, k_v: usize, k_n: usize) -> f64;

    /// The raw value shifted onto `[0, 2]`.
    fn scaled(&self, k_v: usize, k_n: usize) -> f64 {
        self.raw(k_v, k_n) + 1.0
    }
}

/// `2 min(k_v, k_n) / max(k_v, k_n) - 1`: +1 for equal degrees, tending to
/// -1 as the degrees drift apart.
#[derive(Debug, Clone, Copy, Default)]
pub struct DegreeRatio;

impl PairCorrelation for DegreeRatio {
    fn raw(&self, k_v: usize, k_n: usize) -> f64 {
        let (lo, hi) = if k_v <= k_n { (k_v, k_n) } else { (k_n, k_v) };
        2.0 * lo as f64 / hi as f64 - 1.0
    }
}

/// Preferential attachment: `k_i / sum_j k_j`.
pub fn preferential(g: &Graph) -> Result<AttachmentDistribution, GrowthError> {
    let total = g.degree_sum();
    if total == 0 {
        return Err(GrowthError::EmptyGraph);
    }
    let total = total as f64;
    Ok(AttachmentDistribution {
        probs: g.nodes().map(|v| g.degree(v) as f64 / total).collect(),
    })
}

/// Anti-preferential attachment: `(1 - k_i / sum_j k_j) / (|N| - 1)`.
/// The entries sum to one without renormalization.
pub fn anti_preferential(g: &Graph) -> Result<AttachmentDistribution, GrowthError> {
    let n = g.node_count();
    let total = g.degree_sum();
    if n < 2 || total == 0 {
        return Err(GrowthError::EmptyGraph);
    }
    let total = total as f64;
    let scale = 1.0 / (n - 1) as f64;
    Ok(AttachmentDistribution {
        probs: g.nodes().map(|v| scale * (1.0 - g.degree(v) as f64 / total)).collect(),
    })
}

/// Scaled degree correlation of the pair `(v, n)`, in `[0, 2]`.
pub fn pair_degree_correlation(g: &Graph, v: NodeId, n: NodeId) -> Result<f64, GrowthError> {
    pair_degree_correlation_with(g, v, n, &DegreeRatio)
}

pub fn pair_degree_correlation_with(
    g: &Graph,
    v: NodeId,
    n: NodeId,
    corr: &dyn PairCorrelation,
) -> Result<f64, GrowthError> {
    for x in [v, n] {
        if !g.contains(x) {
            return Err(GrowthError::Graph(crate::graph::GraphError::UnknownNode(x)));
        }
        if g.degree(x) == 0 {
            return Err(GrowthError::IsolatedNode(x));
        }
    }
    if v == n {
        return Err(GrowthError::Graph(crate::graph::GraphError::SelfLoop(v)));
    }
    Ok(corr.scaled(g.degree(v), g.degree(n)))
}

/// Normalized disassortativeness of `v`: the smallest scaled correlation
/// with a neighbor divided by the sum over all neighbors.
pub fn zeta(g: &Graph, v: NodeId) -> Result<f64, GrowthError> {
    zeta_with(g, v, &DegreeRatio)
}

pub fn zeta_with(g: &Graph, v: NodeId, corr: &dyn PairCorrelation) -> Result<f64, GrowthError> {
    let k_v = g.degree(v);
    if k_v == 0 {
        return Err(GrowthError::IsolatedNode(v));
    }
    let (min, sum) = g
        .neighbors(v)
        .iter()
        .map(|&n| corr.scaled(k_v, g.degree(n)))
        .fold((f64::INFINITY, 0.0), |(m, s), x| (m.min(x), s + x));
    if sum <= 0.0 {
        return Err(GrowthError::ZeroDenominator(v));
    }
    Ok(min / sum)
}

/// `zeta` for every node, `None` where it is undefined (isolated node or a
/// vanishing denominator).
pub fn zeta_all(g: &Graph, corr: &dyn PairCorrelation) -> Vec<Option<f64>> {
    g.nodes().map(|v| zeta_with(g, v, corr).ok()).collect()
}

fn zeta_factor(z: Option<f64>, invert: bool) -> Option<f64> {
    z.map(|z| if invert { 1.0 - z } else { z })
}

/// Correlation-modulated preferential attachment `k_v zeta_v / sum_u k_u`,
/// renormalized to a distribution. With `invert` the factor `zeta_v` is
/// replaced by `1 - zeta_v`.
pub fn dtvcn_attach(g: &Graph) -> Result<AttachmentDistribution, GrowthError> {
    dtvcn_attach_with(g, &DegreeRatio, false)
}

pub fn dtvcn_attach_with(
    g: &Graph,
    corr: &dyn PairCorrelation,
    invert: bool,
) -> Result<AttachmentDistribution, GrowthError> {
    let total = g.degree_sum();
    if total == 0 {
        return Err(GrowthError::EmptyGraph);
    }
    let total = total as f64;
    let weights = g
        .nodes()
        .zip(zeta_all(g, corr))
        .map(|(v, z)| {
            zeta_factor(z, invert)
                .map(|z| g.degree(v) as f64 / total * z)
                .unwrap_or(0.0)
        })
        .collect();
    AttachmentDistribution::from_weights(weights)
}

/// Removal selection `(1 - k_v / sum_j k_j)(1 - zeta_v)`, renormalized.
pub fn dtvcn_remove_select(g: &Graph) -> Result<AttachmentDistribution, GrowthError> {
    dtvcn_remove_select_with(g, &DegreeRatio, false)
}

pub fn dtvcn_remove_select_with(
    g: &Graph,
    corr: &dyn PairCorrelation,
    invert: bool,
) -> Result<AttachmentDistribution, GrowthError> {
    let total = g.degree_sum();
    if total == 0 {
        return Err(GrowthError::EmptyGraph);
    }
    let total = total as f64;
    let weights = g
        .nodes()
        .zip(zeta_all(g, corr))
        .map(|(v, z)| {
            zeta_factor(z, invert)
                .map(|z| ((1.0 - g.degree(v) as f64 / total) * (1.0 - z)).max(0.0))
                .unwrap_or(0.0)
        })
        .collect();
    AttachmentDistribution::from_weights(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_probs(d: &AttachmentDistribution, expected: &[f64]) {
        assert_eq!(d.len(), expected.len());
        for (p, e) in d.probs().iter().zip(expected) {
            assert_abs_diff_eq!(*p, *e, epsilon = 1e-12);
        }
    }

    #[test]
    fn preferential_examples() {
        let s4 = Graph::star(4);
        let leaf = 1.0 / 6.0;
        assert_probs(&preferential(&s4).unwrap(), &[0.5, leaf, leaf, leaf]);
        let third = 1.0 / 3.0;
        assert_probs(&preferential(&Graph::complete(3)).unwrap(), &[third; 3]);
        assert_probs(&preferential(&Graph::path(3)).unwrap(), &[0.25, 0.5, 0.25]);
        assert_eq!(preferential(&Graph::with_nodes(3)), Err(GrowthError::EmptyGraph));
    }

    #[test]
    fn anti_preferential_examples() {
        let third = 1.0 / 3.0;
        assert_probs(&anti_preferential(&Graph::complete(3)).unwrap(), &[third; 3]);
        let leaf = 5.0 / 18.0;
        assert_probs(
            &anti_preferential(&Graph::star(4)).unwrap(),
            &[1.0 / 6.0, leaf, leaf, leaf],
        );
        assert_eq!(anti_preferential(&Graph::with_nodes(1)), Err(GrowthError::EmptyGraph));
    }

    #[test]
    fn pair_correlation_examples() {
        // degrees 1 and 3: raw 2/3 - 1 = -1/3, scaled 2/3
        let s4 = Graph::star(4);
        assert_abs_diff_eq!(pair_degree_correlation(&s4, 1, 0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pair_degree_correlation(&s4, 1, 2).unwrap(), 2.0, epsilon = 1e-15);
        assert!(DegreeRatio.scaled(1, 1_000_000) < 1e-5);

        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(pair_degree_correlation(&g, 0, 2), Err(GrowthError::IsolatedNode(2)));
    }

    #[test]
    fn zeta_examples() {
        // one neighbor
        let p = Graph::path(2);
        assert_abs_diff_eq!(zeta(&p, 0).unwrap(), 1.0);
        // middle of P3: both neighbors have degree 1 vs own 2 -> scaled 1, 1
        let p3 = Graph::path(3);
        assert_abs_diff_eq!(zeta(&p3, 1).unwrap(), 0.5);
        // middle of C4-like pair with equal degrees: scaled {2, 2} -> 0.5
        let c4 = Graph::ring(4);
        assert_abs_diff_eq!(zeta(&c4, 0).unwrap(), 0.5);
        // scaled values {2/3, 2}: node 0 of degree 1... build v with degree 3? use
        // v of degree 2 with neighbors of degree 6 and 2 -> scaled 2/3 and 2
        let mut g = Graph::with_nodes(10);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        for leaf in 3..8 {
            g.add_edge(1, leaf).unwrap();
        }
        g.add_edge(2, 8).unwrap();
        assert_eq!(g.degree(1), 6);
        assert_eq!(g.degree(2), 2);
        assert_abs_diff_eq!(zeta(&g, 0).unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(zeta(&g, 9), Err(GrowthError::IsolatedNode(9)));
    }

    #[test]
    fn dtvcn_attach_on_star() {
        // center: k=3, three neighbors at scaled 2/3 -> zeta 1/3, weight 3/6 * 1/3
        // leaves: k=1, zeta 1, weight 1/6
        let d = dtvcn_attach(&Graph::star(4)).unwrap();
        let w = [0.5 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        let t: f64 = w.iter().sum();
        assert_probs(&d, &w.map(|x| x / t));
        assert_probs(&dtvcn_attach(&Graph::complete(3)).unwrap(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn dtvcn_remove_select_cases() {
        // K3: every zeta is 1/2, all weights equal
        assert_probs(&dtvcn_remove_select(&Graph::complete(3)).unwrap(), &[1.0 / 3.0; 3]);
        // leaves of a star have zeta 1 and are never selected
        let d = dtvcn_remove_select(&Graph::star(4)).unwrap();
        assert_probs(&d, &[1.0, 0.0, 0.0, 0.0]);
        // single edge: both ends zeta 1 -> degenerate
        assert_eq!(
            dtvcn_remove_select(&Graph::path(2)),
            Err(GrowthError::DegenerateDistribution)
        );
    }

    #[test]
    fn invert_zeta_flips_the_factor() {
        let d = dtvcn_attach_with(&Graph::star(4), &DegreeRatio, true).unwrap();
        assert_probs(&d, &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn sampling_respects_exclusions() {
        let d = preferential(&Graph::star(5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let v = d.sample_excluding(&mut rng, |v| v == 0).unwrap();
            assert_ne!(v, 0);
        }
        let picks = d.sample_distinct(&mut rng, 5, |_| false);
        let mut sorted = picks.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        assert_eq!(d.sample_excluding(&mut rng, |_| true), None);
    }
}
