//! Exact structural metrics of a snapshot.

mod betweenness;
mod eigen;
mod rich_club;
mod structure;

use rand::Rng;
use thiserror::Error;

pub use betweenness::{betweenness, betweenness_raw, Betweenness};
pub use eigen::{eigenvector_centrality, residual, EigenConfig, EigenResult};
pub use rich_club::{
    degree_preserving_shuffle, rich_club, rich_club_at_mean_degree, rich_club_coefficient, rich_club_profile, RichClub,
    NULL_MODEL_COPIES, SWAPS_PER_EDGE,
};
pub use structure::{apl_diameter, assortativity, clustering, local_clustering, PathStats};

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("graph with {0} nodes is too small (need at least 3)")]
    TooSmall(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("power iteration did not converge")]
    NoConvergence { iterate: Vec<f64> },
    #[error("fewer than two nodes with degree above {0}")]
    UndefinedThreshold(usize),
    #[error("degree variance over edge ends is zero")]
    DegenerateVariance,
}

/// Metrics of one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub bc: Betweenness,
    pub evc: Vec<f64>,
    pub clc: f64,
    pub apl: f64,
    pub diameter: usize,
    /// `None` when fewer than two nodes exceed the mean degree.
    pub rich_club: Option<RichClub>,
    /// `None` for degree-regular graphs.
    pub assortativity: Option<f64>,
}

pub const CSV_HEADER: &str = "t,N,E,g_max_norm,apl,diameter,rc,clc,assortativity";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

impl MetricsReport {
    pub fn g_max_norm(&self) -> f64 {
        self.bc.max_norm()
    }

    pub fn rc(&self) -> Option<f64> {
        self.rich_club.as_ref().map(|r| r.phi)
    }

    pub fn csv_row(&self, t: usize) -> String {
        format!(
            "{t},{},{},{},{},{},{},{},{}",
            self.nodes,
            self.edges,
            self.g_max_norm(),
            self.apl,
            self.diameter,
            opt(self.rc()),
            self.clc,
            opt(self.assortativity)
        )
    }
}

/// All metrics of `g`. `rng` drives the rich-club null model only.
pub fn analyze<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<MetricsReport, MetricsError> {
    let bc = betweenness(g)?;
    let evc = eigenvector_centrality(g, EigenConfig::default())?.centrality;
    let paths = apl_diameter(g);
    Ok(MetricsReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        bc,
        evc,
        clc: clustering(g),
        apl: paths.apl,
        diameter: paths.diameter,
        rich_club: rich_club_at_mean_degree(g, rng).ok(),
        assortativity: assortativity(g).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn report_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = analyze(&Graph::star(4), &mut rng).unwrap();
        assert_eq!(r.csv_row(3), "3,4,3,1,1.5,2,NA,0,-1");
    }
}
