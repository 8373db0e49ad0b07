//! Eigenvector centrality by power iteration.
//!
//! The iterate starts uniform and is kept sum-normalized, so the result is
//! the Perron vector of the adjacency matrix scaled to total one. The
//! eigen-equation constant drops out of the normalization.
//!
//! Bipartite graphs (trees, even cycles, stars) have `-kappa` in the
//! spectrum and the plain iteration flips between two vectors forever. When
//! the step size stops shrinking the iteration switches to the averaged map
//! `x <- (A x / |A x| + x) / 2`, which shares the fixed point but maps the
//! `-kappa` component to zero.

use super::MetricsError;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    /// Bound on both the max-abs step and the residual `|A x - kappa x|_inf`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Non-negative, sums to one.
    pub centrality: Vec<f64>,
    /// Dominant eigenvalue estimate `sum(A x)` for the returned `x`.
    pub eigenvalue: f64,
    pub iterations: usize,
    pub damped: bool,
}

fn multiply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(v).iter().map(|&w| x[w]).sum();
    }
}

/// `max_v |(A x)_v - kappa x_v|` with `kappa = sum(A x) / sum(x)`.
pub fn residual(g: &Graph, x: &[f64]) -> f64 {
    let mut ax = vec![0.0; x.len()];
    multiply(g, x, &mut ax);
    let kappa = ax.iter().sum::<f64>() / x.iter().sum::<f64>();
    ax.iter().zip(x).map(|(a, b)| (a - kappa * b).abs()).fold(0.0, f64::max)
}

pub fn eigenvector_centrality(g: &Graph, cfg: EigenConfig) -> Result<EigenResult, MetricsError> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut ax = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut damped = false;
    let mut prev_step = f64::INFINITY;

    for iter in 1..=cfg.max_iter {
        multiply(g, &x, &mut ax);
        let kappa: f64 = ax.iter().sum();
        for ((nx, &a), &old) in next.iter_mut().zip(&ax).zip(&x) {
            *nx = if damped { 0.5 * (a / kappa + old) } else { a / kappa };
        }
        let step = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);

        // residual of the previous iterate, from quantities already at hand
        let res = ax
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - kappa * b).abs())
            .fold(0.0, f64::max);
        if step < cfg.tol && res < cfg.tol {
            return Ok(EigenResult {
                eigenvalue: kappa,
                centrality: next,
                iterations: iter,
                damped,
            });
        }
        if !damped && iter > 2 && step >= 0.999 * prev_step {
            damped = true;
        }
        prev_step = step;
    }
    Err(MetricsError::NoConvergence { iterate: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn triangle_uniform() {
        let r = eigenvector_centrality(&Graph::complete(3), EigenConfig::default()).unwrap();
        for x in &r.centrality {
            assert_abs_diff_eq!(*x, 1.0 / 3.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.eigenvalue, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn star_center_is_sqrt3_times_leaf() {
        // A x = kappa x on S4: kappa = sqrt(3), center = sqrt(3) * leaf,
        // sum one -> leaf = 1 / (3 + sqrt(3))
        let r = eigenvector_centrality(&Graph::star(4), EigenConfig::default()).unwrap();
        let leaf = 1.0 / (3.0 + 3f64.sqrt());
        assert_abs_diff_eq!(r.centrality[0], 3f64.sqrt() * leaf, epsilon = 1e-9);
        assert_abs_diff_eq!(r.centrality[0], 0.3660, epsilon = 1e-4);
        for x in &r.centrality[1..] {
            assert_abs_diff_eq!(*x, 0.2113, epsilon = 1e-4);
        }
        assert!(r.damped);
    }

    #[test]
    fn even_cycle_uniform() {
        let r = eigenvector_centrality(&Graph::ring(6), EigenConfig::default()).unwrap();
        for x in &r.centrality {
            assert_abs_diff_eq!(*x, 1.0 / 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn no_convergence_reports_iterate() {
        let cfg = EigenConfig {
            tol: 1e-10,
            max_iter: 3,
        };
        match eigenvector_centrality(&Graph::path(7), cfg) {
            Err(MetricsError::NoConvergence { iterate }) => assert_eq!(iterate.len(), 7),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn edgeless() {
        assert_eq!(
            eigenvector_centrality(&Graph::with_nodes(3), EigenConfig::default()),
            Err(MetricsError::NoEdges)
        );
    }
}
