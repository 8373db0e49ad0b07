//! Growth, analysis and traffic simulation of time-varying communication
//! networks.
//!
//! * [`graph`]: undirected snapshots and the edge-list format.
//! * [`netgen`]: BA, TVCN and DTVCN growth.
//! * [`metrics`]: betweenness, eigenvector centrality, clustering, path
//!   lengths, rich-club coefficient and assortativity.
//! * [`routing`]: shortest-path enumeration and betweenness-weighted route
//!   selection.
//! * [`traffic`]: node capacities, generation rates, critical load and the
//!   packet-level queue simulation.
//! * [`experiment`]: the seeded multi-realization sweeps behind the CLI.

pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod netgen;
pub mod rng;
pub mod routing;
pub mod traffic;

pub use graph::{Graph, GraphError, NodeId, SnapshotSequence};
pub use netgen::{GrowthConfig, GrowthError, Model};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/growth.md")]
    mod growth {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/routing.md")]
    mod routing {}
    #[doc = include_str!("../../../book/src/traffic.md")]
    mod traffic {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
