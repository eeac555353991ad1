use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sphere_geom::{arc_from_dot, CapIndex, DotBand, SampleSet};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected and
    /// duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(invalid(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        Self { adj }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// Connected components as vertex lists, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.components().len() == 1
    }
}

/// The ε-distance graph: `i ~ j` iff `α−ε ≤ dist(X_i, X_j) ≤ α+ε`, `i ≠ j`.
#[derive(Debug, Clone)]
pub struct EpsDistanceGraph {
    sample: SampleSet,
    alpha: f64,
    eps: f64,
    graph: Graph,
}

impl EpsDistanceGraph {
    pub fn sample(&self) -> &SampleSet {
        &self.sample
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        arc_from_dot(self.sample.point(u).dot(self.sample.point(v)))
    }

    /// Writes `i j dist` lines (i < j, 17 significant digits), after the
    /// given `#` audit lines.
    pub fn write_edge_list<W: Write>(&self, mut w: W, audit: &[String]) -> Result<()> {
        for line in audit {
            writeln!(w, "# {line}")?;
        }
        for (u, v) in self.graph.edges() {
            writeln!(w, "{u} {v} {:.16e}", self.distance(u, v))?;
        }
        Ok(())
    }
}

impl std::ops::Deref for EpsDistanceGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

fn check_params(alpha: f64, eps: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::PI + 1e-12) {
        return Err(invalid(format!("alpha must lie in (0, π], got {alpha}")));
    }
    if !(eps >= 0.0) || eps >= alpha {
        return Err(invalid(format!("need 0 ≤ eps < alpha, got eps {eps}, alpha {alpha}")));
    }
    Ok(())
}

/// Builds the ε-distance graph of `x` using one band query per vertex.
pub fn build_graph(x: &SampleSet, alpha: f64, eps: f64) -> Result<EpsDistanceGraph> {
    check_params(alpha, eps)?;
    let lo = (alpha - eps).max(0.0);
    let hi = (alpha + eps).min(std::f64::consts::PI);
    let index = CapIndex::new(x, hi - lo);
    let mut adj = Vec::with_capacity(x.len());
    let mut buf = Vec::new();
    for (i, p) in x.points().iter().enumerate() {
        index.band_query_into(p.coords(), lo, hi, &mut buf);
        adj.push(buf.iter().copied().filter(|&j| j != i).collect::<Vec<_>>());
    }
    // Symmetrize in case a pair sits exactly on the tolerance boundary and
    // the two dot products round differently.
    let mut sym = adj.clone();
    for (i, list) in adj.iter().enumerate() {
        for &j in list {
            sym[j].push(i);
        }
    }
    Ok(EpsDistanceGraph {
        sample: x.clone(),
        alpha,
        eps,
        graph: Graph::from_adjacency(sym),
    })
}

/// O(n²) reference construction.
pub fn build_graph_scan(x: &SampleSet, alpha: f64, eps: f64) -> Result<EpsDistanceGraph> {
    check_params(alpha, eps)?;
    let band = DotBand::new((alpha - eps).max(0.0), (alpha + eps).min(std::f64::consts::PI));
    let n = x.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if band.contains(x.point(i).dot(x.point(j))) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    Ok(EpsDistanceGraph {
        sample: x.clone(),
        alpha,
        eps,
        graph: Graph::from_adjacency(adj),
    })
}

/// Whether the proximity graph `dist ≤ r` on `x` is connected.
pub fn is_connected_under_radius(x: &SampleSet, r: f64) -> Result<bool> {
    if x.is_empty() {
        return Err(invalid("cannot test connectivity of an empty set"));
    }
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let r = r.min(std::f64::consts::PI);
    let index = CapIndex::new(x, r);
    let n = x.len();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut reached = 1;
    let mut queue = VecDeque::from([0usize]);
    let mut buf = Vec::new();
    while let Some(u) = queue.pop_front() {
        index.band_query_into(x.point(u).coords(), 0.0, r, &mut buf);
        for &v in &buf {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    Ok(reached == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::{is_eps_net, sample_uniform, UnitPoint};
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn equilateral_triangle_on_circle() {
        let x = SampleSet::from_angles(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let g = build_graph(&x, 2.0 * PI / 3.0, 0.01).unwrap();
        assert_eq!(g.graph(), &Graph::complete(3));
    }

    #[test]
    fn no_edges_at_quarter_turn() {
        let x = SampleSet::from_angles(&[0.0, PI / 2.0]);
        let g = build_graph(&x, 2.0 * PI / 3.0, 0.01).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn matches_scan_on_random_sphere() {
        let x = sample_uniform(2, 500, 21).unwrap();
        for (alpha, eps) in [(1.0, 0.05), (2.5, 0.2), (PI, 0.1), (0.3, 0.29)] {
            let a = build_graph(&x, alpha, eps).unwrap();
            let b = build_graph_scan(&x, alpha, eps).unwrap();
            assert_eq!(a.graph(), b.graph());
        }
    }

    #[test]
    fn rejects_eps_at_least_alpha() {
        let x = sample_uniform(1, 5, 1).unwrap();
        assert!(build_graph(&x, 0.5, 0.5).is_err());
        assert!(build_graph(&x, 0.0, 0.0).is_err());
        assert!(build_graph(&x, 4.0, 0.1).is_err());
    }

    #[test]
    fn antipodal_pair_is_disconnected() {
        let p = UnitPoint::new(vec![0.0, 0.0, 1.0]).unwrap();
        let x = SampleSet::from_points(2, vec![p.clone(), p.antipode()], 0).unwrap();
        assert!(!is_connected_under_radius(&x, FRAC_PI_4).unwrap());
    }

    #[test]
    fn half_net_is_connected() {
        let x = sample_uniform(2, 1500, 8).unwrap();
        let r = 0.4;
        let rep = is_eps_net(&x, r / 2.0, 4000).unwrap();
        assert!(rep.is_net);
        assert!(is_connected_under_radius(&x, r).unwrap());
    }

    #[test]
    fn edge_list_format() {
        let x = SampleSet::from_angles(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let g = build_graph(&x, 2.0 * PI / 3.0, 0.01).unwrap();
        let mut out = Vec::new();
        g.write_edge_list(&mut out, &[]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("0 1 2.0943951023931"));
    }
}
