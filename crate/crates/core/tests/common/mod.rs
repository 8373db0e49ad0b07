//! Brute-force oracles and graph generators shared by the integration tests.
//! Everything here works from an adjacency matrix and exhaustive search, so
//! it shares no code path with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use proptest::prelude::*;
use rand::Rng;
use tvcnlab::Graph;

pub fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::with_nodes(n);
    for v in 1..n {
        let parent = rng.random_range(0..v);
        g.add_edge(parent, v).unwrap();
    }
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) && rng.random::<f64>() < p {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// Proptest strategy for connected graphs on `3..=max_n` nodes.
pub fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
            proptest::collection::vec(prop::bool::weighted(0.3), pairs),
        )
            .prop_map(move |(parents, extra)| {
                let mut g = Graph::with_nodes(n);
                for v in 1..n {
                    g.add_edge(parents[v - 1].index(v), v).unwrap();
                }
                let mut i = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if extra[i] && !g.has_edge(a, b) {
                            g.add_edge(a, b).unwrap();
                        }
                        i += 1;
                    }
                }
                g
            })
    })
}

/// All-pairs distances by Floyd-Warshall.
pub fn floyd(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let a = matrix(g);
    let n = a.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if a[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| x + y < c) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Every simple `s`-`d` path with exactly `dist(s, d)` hops, by DFS.
pub fn brute_paths(g: &Graph, s: usize, d: usize) -> Vec<Vec<usize>> {
    let a = matrix(g);
    let Some(len) = floyd(g)[s][d] else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut path = vec![s];
    fn dfs(a: &[Vec<bool>], d: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *path.last().unwrap();
        if cur == d {
            if path.len() - 1 == len {
                out.push(path.clone());
            }
            return;
        }
        if path.len() > len {
            return;
        }
        for next in 0..a.len() {
            if a[cur][next] && !path.contains(&next) {
                path.push(next);
                dfs(a, d, len, path, out);
                path.pop();
            }
        }
    }
    dfs(&a, d, len, &mut path, &mut out);
    out.sort();
    out
}

/// Raw betweenness over unordered pairs from explicit path enumeration.
pub fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for d in s + 1..n {
            let paths = brute_paths(g, s, d);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for v in 0..n {
                if v == s || v == d {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                bc[v] += through / total;
            }
        }
    }
    bc
}

/// Mean distance over connected unordered pairs and the largest distance.
pub fn brute_apl_diameter(g: &Graph) -> (f64, usize) {
    let d = floyd(g);
    let n = d.len();
    let (mut sum, mut pairs, mut diam) = (0usize, 0usize, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            if let Some(x) = d[i][j] {
                sum += x;
                pairs += 1;
                diam = diam.max(x);
            }
        }
    }
    (if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 }, diam)
}

/// Mean over nodes of closed triangles per neighbor pair (0 below degree 2).
pub fn brute_clustering(g: &Graph) -> f64 {
    let a = matrix(g);
    let n = a.len();
    let mut total = 0.0;
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| a[v][u]).collect();
        let k = nb.len();
        if k < 2 {
            continue;
        }
        let mut closed = 0;
        for x in 0..k {
            for y in 0..k {
                if x != y && a[nb[x]][nb[y]] {
                    closed += 1;
                }
            }
        }
        total += closed as f64 / (k * (k - 1)) as f64;
    }
    total / n as f64
}

/// Pearson correlation of the degrees at the two ends of every edge, each
/// edge counted in both directions. `None` for zero variance.
pub fn pearson_assortativity(g: &Graph) -> Option<f64> {
    let deg = g.degrees();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (u, v) in g.edges() {
        xs.extend([deg[u] as f64, deg[v] as f64]);
        ys.extend([deg[v] as f64, deg[u] as f64]);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if vx <= 1e-12 || vy <= 1e-12 {
        None
    } else {
        Some(cov / (vx * vy).sqrt())
    }
}

/// Density of links among nodes of degree > k.
pub fn brute_phi(g: &Graph, k: usize) -> Option<f64> {
    let a = matrix(g);
    let rich: Vec<usize> = (0..a.len()).filter(|&v| g.degree(v) > k).collect();
    let r = rich.len();
    if r < 2 {
        return None;
    }
    let mut links = 0;
    for i in 0..r {
        for j in i + 1..r {
            if a[rich[i]][rich[j]] {
                links += 1;
            }
        }
    }
    Some(links as f64 / (r * (r - 1) / 2) as f64)
}
