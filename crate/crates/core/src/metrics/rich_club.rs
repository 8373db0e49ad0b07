//! Rich-club coefficient and its degree-preserving null model.

use rand::Rng;

use super::MetricsError;
use crate::graph::Graph;

/// Randomized copies averaged for the null-model coefficient.
pub const NULL_MODEL_COPIES: usize = 10;
/// Swap attempts per edge when randomizing.
pub const SWAPS_PER_EDGE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct RichClub {
    /// `phi(k)` for `k = 0, 1, ..`; `None` where fewer than two nodes have degree > k.
    pub profile: Vec<Option<f64>>,
    pub k_star: usize,
    /// `phi(k*)`, the scalar reported as RC.
    pub phi: f64,
    pub phi_null: f64,
    /// `phi(k*) / phi_null(k*)`; `None` when no randomized copy has rich links.
    pub normalized: Option<f64>,
}

/// `phi(k) = 2 E_{>k} / (N_{>k} (N_{>k} - 1))` over nodes of degree > k.
pub fn rich_club_coefficient(g: &Graph, k: usize) -> Result<f64, MetricsError> {
    let rich: Vec<bool> = g.nodes().map(|v| g.degree(v) > k).collect();
    let n_rich = rich.iter().filter(|&&r| r).count();
    if n_rich < 2 {
        return Err(MetricsError::UndefinedThreshold(k));
    }
    let e_rich = g.edges().into_iter().filter(|&(a, b)| rich[a] && rich[b]).count();
    Ok(2.0 * e_rich as f64 / (n_rich * (n_rich - 1)) as f64)
}

pub fn rich_club_profile(g: &Graph) -> Vec<Option<f64>> {
    let kmax = g.nodes().map(|v| g.degree(v)).max().unwrap_or(0);
    (0..kmax).map(|k| rich_club_coefficient(g, k).ok()).collect()
}

/// Degree-preserving randomization by double edge swaps:
/// `(a, b), (c, d) -> (a, d), (c, b)` whenever that keeps the graph simple.
pub fn degree_preserving_shuffle<R: Rng + ?Sized>(g: &Graph, swaps_per_edge: usize, rng: &mut R) -> Graph {
    let mut out = g.clone();
    let mut edges = g.edges();
    let m = edges.len();
    if m < 2 {
        return out;
    }
    for _ in 0..swaps_per_edge * m {
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.random::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b || out.has_edge(a, d) || out.has_edge(c, b) {
            continue;
        }
        out.remove_edge(a, b).expect("tracked edge");
        out.remove_edge(c, d).expect("tracked edge");
        out.add_edge(a, d).expect("checked above");
        out.add_edge(c, b).expect("checked above");
        edges[i] = (a.min(d), a.max(d));
        edges[j] = (c.min(b), c.max(b));
    }
    out
}

/// Rich-club coefficient at `k`, together with its ratio to the mean over
/// [`NULL_MODEL_COPIES`] degree-preserving randomizations.
pub fn rich_club<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<RichClub, MetricsError> {
    let phi = rich_club_coefficient(g, k)?;
    let mut null = 0.0;
    for _ in 0..NULL_MODEL_COPIES {
        let shuffled = degree_preserving_shuffle(g, SWAPS_PER_EDGE, rng);
        null += rich_club_coefficient(&shuffled, k)?;
    }
    let phi_null = null / NULL_MODEL_COPIES as f64;
    Ok(RichClub {
        profile: rich_club_profile(g),
        k_star: k,
        phi,
        phi_null,
        normalized: (phi_null > 0.0).then(|| phi / phi_null),
    })
}

/// [`rich_club`] at `k* = ceil(<k>)`.
pub fn rich_club_at_mean_degree<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<RichClub, MetricsError> {
    let k_star = (g.mean_degree() - 1e-9).ceil().max(0.0) as usize;
    rich_club(g, k_star, rng)
}
