use super::complex::{maximalize, FacetComplex};
use crate::dist_graph::Graph;

/// Neighborhood complex of `g`: a vertex set is a simplex iff its members
/// share a common neighbor. The facets are the inclusion-maximal
/// neighborhoods `N(w)`; vertices with no neighbors lie outside the
/// support.
pub fn neighborhood_complex(g: &Graph) -> FacetComplex {
    let n = g.n_vertices();
    let sets = (0..n).map(|w| g.neighbors(w).to_vec()).collect();
    FacetComplex::new(n, maximalize(n, sets)).expect("neighbor indices are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// All subsets with a common neighbor, reduced to maximal ones.
    fn brute_force(g: &Graph) -> FacetComplex {
        let n = g.n_vertices();
        let mut simplices = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let common = (0..n).any(|w| set.iter().all(|&v| g.has_edge(v, w)));
            if common {
                simplices.push(set);
            }
        }
        FacetComplex::new(n, simplices).unwrap()
    }

    #[test]
    fn triangle_gives_hollow_triangle() {
        let c = neighborhood_complex(&Graph::complete(3));
        assert_eq!(c.facets(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(c, brute_force(&Graph::complete(3)));
    }

    #[test]
    fn pentagon_gives_pentagon() {
        let c = neighborhood_complex(&Graph::cycle(5));
        assert_eq!(c.facets().len(), 5);
        assert!(c.facets().iter().all(|f| f.len() == 2));
        assert_eq!(c, brute_force(&Graph::cycle(5)));
    }

    #[test]
    fn k4_gives_tetrahedron_boundary() {
        assert_eq!(neighborhood_complex(&Graph::complete(4)), FacetComplex::simplex_boundary(4));
    }

    #[test]
    fn isolated_vertices_are_outside_support() {
        let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let c = neighborhood_complex(&g);
        assert_eq!(c.vertex_support(), vec![0, 1]);
    }

    #[test]
    fn matches_subset_definition_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for n in 1..=7 {
            for _ in 0..500 {
                let p = rng.gen_range(0.1..0.9);
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|_| rng.gen_bool(p))
                    .collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                assert_eq!(neighborhood_complex(&g), brute_force(&g));
            }
        }
    }
}
