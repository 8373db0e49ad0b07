//! Network growth models: Barabási–Albert preferential attachment, the
//! time-varying communication network (TVCN) with link rewiring and removal,
//! and its disassortative variant (DTVCN) whose selection probabilities are
//! modulated by each node's degree correlation with its neighbors.

mod attachment;
mod growth;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use attachment::{
    anti_preferential, dtvcn_attach, dtvcn_attach_with, dtvcn_remove_select, dtvcn_remove_select_with,
    pair_degree_correlation, pair_degree_correlation_with, preferential, zeta, zeta_all, zeta_with,
    AttachmentDistribution, DegreeRatio, PairCorrelation,
};
pub use growth::{generate, generate_final, generate_with, grow_step, grow_step_with, StepReport};

use crate::graph::{GraphError, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrowthError {
    #[error("invalid growth config: {0}")]
    InvalidConfig(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("node {0} has no neighbors")]
    IsolatedNode(NodeId),
    #[error("correlation sum of node {0} is zero")]
    ZeroDenominator(NodeId),
    #[error("all selection weights are zero")]
    DegenerateDistribution,
    #[error("{needed} distinct targets requested but only {available} nodes exist")]
    BudgetInfeasible { needed: usize, available: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Model {
    Ba,
    Tvcn,
    Dtvcn,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Ba, Model::Tvcn, Model::Dtvcn];

    pub fn name(self) -> &'static str {
        match self {
            Model::Ba => "BA",
            Model::Tvcn => "TVCN",
            Model::Dtvcn => "DTVCN",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "BA" => Ok(Model::Ba),
            "TVCN" => Ok(Model::Tvcn),
            "DTVCN" => Ok(Model::Dtvcn),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// Parameters of one growth run. The final network has `n0 + steps` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub model: Model,
    /// Nodes in the seed ring.
    pub n0: usize,
    /// Growth steps; one node arrives per step.
    #[serde(rename = "T")]
    pub steps: usize,
    /// Link budget per step, `M <= n0`.
    #[serde(rename = "M")]
    pub links_per_step: usize,
    /// Fraction of the budget spent on links from the new node.
    pub vartheta: f64,
    /// Fraction of the alteration budget spent on rewiring; the rest removes links.
    pub gamma: f64,
    /// Links per new node in the BA model.
    pub m_ba: usize,
    pub rng_seed: u64,
    /// Use `1 - zeta` in place of `zeta` in the DTVCN probabilities.
    #[serde(default)]
    pub invert_zeta: bool,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            model: Model::Dtvcn,
            n0: 5,
            steps: 195,
            links_per_step: 5,
            vartheta: 0.6,
            gamma: 1.0,
            m_ba: 3,
            rng_seed: 0,
            invert_zeta: false,
        }
    }
}

fn floor_eps(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}

impl GrowthConfig {
    /// Config for `model` growing to `n` nodes with the default parameters.
    pub fn for_size(model: Model, n: usize, seed: u64) -> Self {
        let base = GrowthConfig::default();
        GrowthConfig {
            model,
            steps: n.saturating_sub(base.n0),
            rng_seed: seed,
            ..base
        }
    }

    pub fn final_size(&self) -> usize {
        self.n0 + self.steps
    }

    /// Links from the arriving node: `m_ba` for BA, `floor(vartheta M)` otherwise.
    pub fn new_links(&self) -> usize {
        match self.model {
            Model::Ba => self.m_ba,
            _ => floor_eps(self.vartheta * self.links_per_step as f64),
        }
    }

    /// Alteration budget `floor((1 - vartheta) M)`; zero for BA.
    pub fn alterations(&self) -> usize {
        match self.model {
            Model::Ba => 0,
            _ => floor_eps((1.0 - self.vartheta) * self.links_per_step as f64),
        }
    }

    /// Rewires per step, `floor(gamma (1 - vartheta) M)`.
    pub fn rewires(&self) -> usize {
        match self.model {
            Model::Ba => 0,
            _ => floor_eps(self.gamma * (1.0 - self.vartheta) * self.links_per_step as f64).min(self.alterations()),
        }
    }

    pub fn removals(&self) -> usize {
        self.alterations() - self.rewires()
    }

    pub fn validate(&self) -> Result<(), GrowthError> {
        let bad = |m: String| Err(GrowthError::InvalidConfig(m));
        if self.n0 < 2 {
            return bad(format!("n0 must be >= 2, got {}", self.n0));
        }
        if !(self.vartheta > 0.0 && self.vartheta < 1.0) {
            return bad(format!("vartheta must lie in (0, 1), got {}", self.vartheta));
        }
        if !(self.gamma > 0.5 && self.gamma <= 1.0) {
            return bad(format!("gamma must lie in (0.5, 1], got {}", self.gamma));
        }
        if self.links_per_step < 1 {
            return bad("M must be >= 1".into());
        }
        if self.links_per_step > self.n0 {
            return bad(format!("M must not exceed n0 ({} > {})", self.links_per_step, self.n0));
        }
        if self.model != Model::Ba && self.new_links() < 1 {
            return bad("floor(vartheta * M) must be >= 1".into());
        }
        if self.model == Model::Ba && (self.m_ba < 1 || self.m_ba >= self.n0) {
            return bad(format!("m_ba must lie in [1, n0), got {}", self.m_ba));
        }
        Ok(())
    }
}
