use serde::{Deserialize, Serialize};

use super::graph::{EpsDistanceGraph, Graph};
use crate::error::{invalid, Result};

/// Default node-expansion budget for clique searches.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 1_000_000;

/// A set of pairwise adjacent vertices, checked against its host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCertificate {
    vertices: Vec<usize>,
}

impl CliqueCertificate {
    pub fn new(graph: &Graph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        for (a, &u) in vertices.iter().enumerate() {
            if u >= graph.n_vertices() {
                return Err(invalid(format!("vertex {u} out of range")));
            }
            for &v in &vertices[a + 1..] {
                if !graph.has_edge(u, v) {
                    return Err(invalid(format!("{u} and {v} are not adjacent")));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

struct Search<'g> {
    graph: &'g Graph,
    k: usize,
    budget: u64,
    used: u64,
}

impl Search<'_> {
    /// Extends `clique` from `cand` (all adjacent to every clique member).
    /// `Some(true)` = found, `Some(false)` = subtree exhausted, `None` = out
    /// of budget.
    fn extend(&mut self, clique: &mut Vec<usize>, cand: &[usize]) -> Option<bool> {
        if clique.len() == self.k {
            return Some(true);
        }
        for (i, &c) in cand.iter().enumerate() {
            if clique.len() + (cand.len() - i) < self.k {
                return Some(false);
            }
            self.used += 1;
            if self.used > self.budget {
                return None;
            }
            let next: Vec<usize> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.graph.has_edge(c, w))
                .collect();
            clique.push(c);
            match self.extend(clique, &next)? {
                true => return Some(true),
                false => {
                    clique.pop();
                }
            }
        }
        Some(false)
    }
}

/// Backtracking search for a `k`-clique. Start vertices are tried in
/// `order`; each branch considers only later vertices, so every clique is
/// reachable exactly once. Returns `None` when no clique is found within
/// `budget` node expansions (not a proof of absence unless the search ran
/// to completion, see [`clique_search_exhaustive`]).
pub fn find_clique_ordered(
    graph: &Graph,
    k: usize,
    budget: u64,
    order: &[usize],
) -> (Option<CliqueCertificate>, bool) {
    if k == 0 {
        return (Some(CliqueCertificate { vertices: vec![] }), true);
    }
    let mut rank = vec![usize::MAX; graph.n_vertices()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut search = Search {
        graph,
        k,
        budget,
        used: 0,
    };
    for &v in order {
        if graph.degree(v) + 1 < k {
            continue;
        }
        let mut cand: Vec<usize> = graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| rank[w] > rank[v] && rank[w] != usize::MAX)
            .collect();
        cand.sort_by_key(|&w| rank[w]);
        let mut clique = vec![v];
        match search.extend(&mut clique, &cand) {
            Some(true) => {
                let cert = CliqueCertificate::new(graph, clique).expect("search keeps cliques");
                return (Some(cert), false);
            }
            Some(false) => {}
            None => return (None, false),
        }
    }
    (None, true)
}

/// Whether a `k`-clique exists, by exhaustive search. `None` if the budget
/// ran out first.
pub fn clique_search_exhaustive(graph: &Graph, k: usize, budget: u64) -> Option<bool> {
    let order: Vec<usize> = (0..graph.n_vertices()).collect();
    match find_clique_ordered(graph, k, budget, &order) {
        (Some(_), _) => Some(true),
        (None, true) => Some(false),
        (None, false) => None,
    }
}

/// Looks for a `k`-clique in an ε-distance graph.
///
/// Candidates are ordered by how close their distances sit to α, so the
/// search first tries configurations that look like a rotated regular
/// simplex and only then falls back to the rest.
pub fn find_clique(g: &EpsDistanceGraph, k: usize, budget: u64) -> Option<CliqueCertificate> {
    let graph = g.graph();
    if k < 2 {
        return None;
    }
    // Mean deviation of each vertex's edges from α: vertices whose
    // neighbors sit near the band center first.
    let mut score: Vec<(f64, usize)> = (0..graph.n_vertices())
        .map(|v| {
            let nb = graph.neighbors(v);
            let dev = if nb.is_empty() {
                f64::INFINITY
            } else {
                nb.iter().map(|&w| (g.distance(v, w) - g.alpha()).abs()).sum::<f64>()
                    / nb.len() as f64
            };
            (dev, v)
        })
        .collect();
    score.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let order: Vec<usize> = score.into_iter().map(|(_, v)| v).collect();
    find_clique_ordered(graph, k, budget, &order).0
}

/// Greedy clique: repeatedly add the candidate with most candidate
/// neighbors. Cheap lower bound for colorings.
pub fn greedy_clique(graph: &Graph) -> Vec<usize> {
    let n = graph.n_vertices();
    let mut best = Vec::new();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
    for &s in starts.iter().take(32) {
        let mut clique = vec![s];
        let mut cand: Vec<usize> = graph.neighbors(s).to_vec();
        while !cand.is_empty() {
            let &pick = cand
                .iter()
                .max_by_key(|&&c| {
                    (
                        cand.iter().filter(|&&w| graph.has_edge(c, w)).count(),
                        std::cmp::Reverse(c),
                    )
                })
                .expect("nonempty");
            clique.push(pick);
            cand.retain(|&w| w != pick && graph.has_edge(pick, w));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_graph::build_graph;
    use crate::sphere_geom::{
        regular_simplex_vertices, sample_uniform, simplex_arclength, SampleSet, UnitPoint,
    };

    #[test]
    fn certificate_checks_adjacency() {
        let g = Graph::cycle(5);
        assert!(CliqueCertificate::new(&g, vec![0, 1]).is_ok());
        assert!(CliqueCertificate::new(&g, vec![0, 2]).is_err());
    }

    #[test]
    fn pair_found_when_an_edge_exists() {
        let x = SampleSet::from_angles(&[0.0, 1.0, 3.0]);
        let g = build_graph(&x, 1.0, 0.01).unwrap();
        let c = find_clique(&g, 2, 100).unwrap();
        assert_eq!(c.vertices(), &[0, 1]);
    }

    #[test]
    fn perturbed_simplex_gives_full_clique() {
        let d = 2;
        let alpha = simplex_arclength(d).unwrap();
        let eps = 0.04;
        // Rotate-and-perturb the tetrahedron inside a random cloud.
        let mut pts = sample_uniform(d, 200, 3).unwrap().points().to_vec();
        let jitter = sample_uniform(d, 4, 99).unwrap();
        for (v, j) in regular_simplex_vertices(d).unwrap().iter().zip(jitter.points()) {
            let c: Vec<f64> = v
                .coords()
                .iter()
                .zip(j.coords())
                .map(|(a, b)| a + 0.008 * b)
                .collect();
            pts.push(UnitPoint::new(c).unwrap());
        }
        let x = SampleSet::from_points(d, pts, 0).unwrap();
        let g = build_graph(&x, alpha, eps).unwrap();
        let c = find_clique(&g, d + 2, DEFAULT_CLIQUE_BUDGET).unwrap();
        assert_eq!(c.size(), 4);
    }

    #[test]
    fn no_triangle_for_unit_arcs_on_circle() {
        // Three arcs summing to 2π cannot all lie in [0.95, 1.05].
        let x = sample_uniform(1, 60, 12).unwrap();
        let g = build_graph(&x, 1.0, 0.05).unwrap();
        assert!(g.edge_count() > 0);
        assert!(find_clique(&g, 3, u64::MAX).is_none());
        assert_eq!(clique_search_exhaustive(g.graph(), 3, u64::MAX), Some(false));
    }

    #[test]
    fn greedy_clique_in_complete_graph() {
        assert_eq!(greedy_clique(&Graph::complete(5)).len(), 5);
        assert_eq!(greedy_clique(&Graph::cycle(7)).len(), 2);
    }
}
