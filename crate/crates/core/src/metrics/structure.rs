use super::MetricsError;
use crate::graph::Graph;

/// Average local clustering coefficient; nodes of degree < 2 count as 0.
pub fn clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = g.nodes().map(|v| local_clustering(g, v)).sum();
    total / n as f64
}

pub fn local_clustering(g: &Graph, v: usize) -> f64 {
    let nb = g.neighbors(v);
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathStats {
    /// Mean hop distance over unordered connected pairs.
    pub apl: f64,
    /// Largest finite distance.
    pub diameter: usize,
    pub connected_pairs: usize,
}

/// APL and diameter from one BFS per node. Unreachable pairs are skipped.
pub fn apl_diameter(g: &Graph) -> PathStats {
    let mut sum = 0usize;
    let mut pairs = 0usize;
    let mut diameter = 0usize;
    for s in g.nodes() {
        for (d, dist) in g.bfs_distances(s).into_iter().enumerate() {
            if d <= s {
                continue;
            }
            if let Some(h) = dist {
                sum += h;
                pairs += 1;
                diameter = diameter.max(h);
            }
        }
    }
    PathStats {
        apl: if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 },
        diameter,
        connected_pairs: pairs,
    }
}

/// Newman's degree assortativity: the Pearson correlation of the degrees
/// at either end of an edge.
pub fn assortativity(g: &Graph) -> Result<f64, MetricsError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(MetricsError::NoEdges);
    }
    let (mut prod, mut half_sum, mut half_sq) = (0.0, 0.0, 0.0);
    for (a, b) in g.edges() {
        let (j, k) = (g.degree(a) as f64, g.degree(b) as f64);
        prod += j * k;
        half_sum += 0.5 * (j + k);
        half_sq += 0.5 * (j * j + k * k);
    }
    let m = m as f64;
    let mean = half_sum / m;
    let num = prod / m - mean * mean;
    let den = half_sq / m - mean * mean;
    if den.abs() < 1e-12 {
        return Err(MetricsError::DegenerateVariance);
    }
    Ok((num / den).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn triangle() {
        let g = Graph::complete(3);
        assert_abs_diff_eq!(clustering(&g), 1.0);
        let p = apl_diameter(&g);
        assert_abs_diff_eq!(p.apl, 1.0);
        assert_eq!(p.diameter, 1);
    }

    #[test]
    fn star() {
        let g = Graph::star(4);
        assert_eq!(clustering(&g), 0.0);
        let p = apl_diameter(&g);
        assert_abs_diff_eq!(p.apl, 1.5);
        assert_eq!(p.diameter, 2);
        assert_abs_diff_eq!(assortativity(&g).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn path4() {
        let p = apl_diameter(&Graph::path(4));
        assert_abs_diff_eq!(p.apl, 5.0 / 3.0, epsilon = 1e-15);
        assert_eq!(p.diameter, 3);
    }

    #[test]
    fn regular_graph_has_no_degree_variance() {
        assert_eq!(
            assortativity(&Graph::complete(4)),
            Err(MetricsError::DegenerateVariance)
        );
    }

    #[test]
    fn disconnected_pairs_skipped() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3), (3, 4)]).unwrap();
        let p = apl_diameter(&g);
        assert_eq!(p.connected_pairs, 4);
        assert_abs_diff_eq!(p.apl, (1.0 + 1.0 + 1.0 + 2.0) / 4.0);
        assert_eq!(p.diameter, 2);
    }
}
