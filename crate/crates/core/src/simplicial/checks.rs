use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::complex::FacetComplex;
use crate::error::{invalid, Result};
use crate::sphere_geom::{DotBand, SampleSet, UnitPoint};

/// Outcome of [`verify_sphere_triangulation`]; `failures` lists every
/// violated condition in human-readable form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereCheck {
    pub pass: bool,
    pub euler: i64,
    pub failures: Vec<String>,
}

/// Combinatorial check that `c` triangulates S^d for d ∈ {1, 2}.
pub fn verify_sphere_triangulation(c: &FacetComplex, d: usize) -> Result<SphereCheck> {
    let mut failures = Vec::new();
    let verts = c.vertex_support();
    let euler = match d {
        1 => {
            if let Some(f) = c.facets().iter().find(|f| f.len() != 2) {
                failures.push(format!("facet {f:?} is not an edge"));
            }
            let mut deg: HashMap<usize, Vec<usize>> = HashMap::new();
            for f in c.facets().iter().filter(|f| f.len() == 2) {
                deg.entry(f[0]).or_default().push(f[1]);
                deg.entry(f[1]).or_default().push(f[0]);
            }
            if let Some((v, _)) = deg.iter().filter(|(_, nb)| nb.len() != 2).min() {
                failures.push(format!("vertex {v} is not in exactly 2 edges"));
            }
            if !verts.is_empty() && !single_cycle(&deg) {
                failures.push("edges do not form a single cycle".into());
            }
            verts.len() as i64 - c.facets().len() as i64
        }
        2 => {
            if let Some(f) = c.facets().iter().find(|f| f.len() != 3) {
                failures.push(format!("facet {f:?} is not a triangle"));
            }
            let tris: Vec<&Vec<usize>> = c.facets().iter().filter(|f| f.len() == 3).collect();
            let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
            let mut links: HashMap<usize, HashMap<usize, Vec<usize>>> = HashMap::new();
            for t in &tris {
                for (a, b, opp) in [(t[0], t[1], t[2]), (t[0], t[2], t[1]), (t[1], t[2], t[0])] {
                    *edges.entry((a, b)).or_default() += 1;
                    let link = links.entry(opp).or_default();
                    link.entry(a).or_default().push(b);
                    link.entry(b).or_default().push(a);
                }
            }
            if let Some((e, k)) = edges.iter().filter(|(_, &k)| k != 2).min() {
                failures.push(format!("edge {e:?} lies in {k} triangles"));
            }
            let mut bad_links: Vec<usize> = links
                .iter()
                .filter(|(_, l)| l.values().any(|nb| nb.len() != 2) || !single_cycle(l))
                .map(|(&v, _)| v)
                .collect();
            bad_links.sort_unstable();
            if let Some(v) = bad_links.first() {
                failures.push(format!("link of vertex {v} is not a single cycle"));
            }
            verts.len() as i64 - edges.len() as i64 + tris.len() as i64
        }
        _ => return Err(invalid("sphere check supports d = 1 or 2")),
    };
    if euler != 1 + (-1i64).pow(d as u32) {
        failures.push(format!("Euler characteristic {euler}"));
    }
    Ok(SphereCheck {
        pass: failures.is_empty(),
        euler,
        failures,
    })
}

fn single_cycle(adj: &HashMap<usize, Vec<usize>>) -> bool {
    let Some(&start) = adj.keys().min() else {
        return false;
    };
    let mut seen = std::collections::HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in &adj[&v] {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == adj.len()
}

/// Whether every facet of `c` has geodesic diameter at most `eps / 2`.
pub fn diam_check_delaunay(c: &FacetComplex, x: &SampleSet, eps: f64) -> bool {
    max_facet_diameter(c, x) <= eps / 2.0 + 1e-12
}

/// Largest geodesic diameter over the facets of `c`.
pub fn max_facet_diameter(c: &FacetComplex, x: &SampleSet) -> f64 {
    c.facets()
        .iter()
        .flat_map(|f| {
            f.iter().enumerate().flat_map(move |(i, &a)| {
                f[i + 1..].iter().map(move |&b| crate::sphere_geom::arc_from_dot(x.point(a).dot(x.point(b))))
            })
        })
        .fold(0.0, f64::max)
}

/// `K(w)`: the subcomplex of `del` spanned by the sample points whose
/// distance to `w` lies in `[α−ε, α+ε]`.
pub fn band_subcomplex(
    del: &FacetComplex,
    x: &SampleSet,
    w: &UnitPoint,
    alpha: f64,
    eps: f64,
) -> Result<FacetComplex> {
    if w.dim() != x.dim() {
        return Err(invalid("w lives on a different sphere"));
    }
    let (lo, hi) = (alpha - eps, alpha + eps);
    if lo > std::f64::consts::PI || hi < 0.0 {
        return Ok(FacetComplex::empty(del.n_vertices()));
    }
    let band = DotBand::new(lo.max(0.0), hi.min(std::f64::consts::PI));
    let inside: Vec<bool> = x.points().iter().map(|p| band.contains(p.dot(w))).collect();
    Ok(del.induced(|v| inside[v]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{delaunay_s2, skeleton};
    use crate::sphere_geom::{regular_simplex_vertices, sample_uniform, tetra_face_diameter};
    use std::f64::consts::PI;

    #[test]
    fn tetrahedron_boundary_is_a_sphere() {
        let r = verify_sphere_triangulation(&FacetComplex::simplex_boundary(4), 2).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.euler, 2);
    }

    #[test]
    fn disk_is_not_a_sphere() {
        let disk = FacetComplex::new(4, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let r = verify_sphere_triangulation(&disk, 2).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().any(|f| f.contains("lies in 1 triangles")));
    }

    #[test]
    fn circle_checks() {
        assert!(verify_sphere_triangulation(&FacetComplex::simplex_boundary(3), 1).unwrap().pass);
        let two = FacetComplex::new(
            6,
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
        )
        .unwrap();
        assert!(!verify_sphere_triangulation(&two, 1).unwrap().pass);
        assert!(verify_sphere_triangulation(&two, 3).is_err());
    }

    #[test]
    fn random_delaunay_passes() {
        let x = sample_uniform(2, 500, 13).unwrap();
        let r = verify_sphere_triangulation(&delaunay_s2(&x).unwrap(), 2).unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn diameter_examples() {
        let x = SampleSet::from_points(2, regular_simplex_vertices(2).unwrap(), 0).unwrap();
        let c = delaunay_s2(&x).unwrap();
        let l2 = (-1.0f64 / 3.0).acos();
        assert!((max_facet_diameter(&c, &x) - l2).abs() < 1e-12);
        assert!(diam_check_delaunay(&c, &x, 2.0 * l2 + 0.1));
        assert!(!diam_check_delaunay(&c, &x, 0.1));
        assert!(tetra_face_diameter() > l2);
    }

    #[test]
    fn band_around_antipode() {
        let x = sample_uniform(2, 400, 21).unwrap();
        let del = delaunay_s2(&x).unwrap();
        let north = UnitPoint::new(vec![0.0, 0.0, 1.0]).unwrap();
        let eps = 0.3;
        let k = band_subcomplex(&del, &x, &north, PI, eps).unwrap();
        assert!(!k.is_empty());
        for v in k.vertex_support() {
            assert!(x.point(v).coords()[2] <= -(eps.cos()) + 1e-12);
        }
        let empty = band_subcomplex(&del, &x, &north, PI + 0.5, 0.2).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn band_subcomplexes_are_connected() {
        let x = sample_uniform(2, 2000, 3).unwrap();
        let del = delaunay_s2(&x).unwrap();
        let ws = sample_uniform(2, 50, 99).unwrap();
        for w in ws.points() {
            let k = band_subcomplex(&del, &x, w, 2.0, 0.1).unwrap();
            let support = k.vertex_support();
            let edges = skeleton::simplices_of_dim(&k, 1);
            let g = crate::dist_graph::Graph::from_edges(
                x.len(),
                &edges.iter().map(|e| (e[0], e[1])).collect::<Vec<_>>(),
            )
            .unwrap();
            let comp = g
                .components()
                .into_iter()
                .find(|c| c.contains(&support[0]))
                .unwrap();
            assert!(support.iter().all(|v| comp.contains(v)));
        }
    }
}
