//! Homotopy-preserving shrinking beyond strong collapse.
//!
//! Two moves are applied until neither fires:
//! - delete a vertex whose link strong-collapses to a point (the link is
//!   then contractible, so `K ≃ K ∖ v`);
//! - drop a facet `F` whose overlap with the other facets strong-collapses
//!   to a point (gluing a simplex along a contractible subcomplex does not
//!   change the homotopy type).
//!
//! Both certificates are conservative: a move is skipped unless the
//! contractibility witness is found.

use super::collapse::strong_collapse;
use super::complex::FacetComplex;

fn is_point(c: &FacetComplex) -> bool {
    c.facets().len() == 1 && c.facets()[0].len() == 1
}

fn link(c: &FacetComplex, v: usize) -> Option<FacetComplex> {
    let faces: Vec<Vec<usize>> = c
        .facets()
        .iter()
        .filter(|f| f.binary_search(&v).is_ok())
        .map(|f| f.iter().copied().filter(|&u| u != v).collect())
        .collect();
    if faces.iter().any(Vec::is_empty) {
        // `v` is an isolated vertex: its link is empty, not contractible.
        return None;
    }
    FacetComplex::new(c.n_vertices(), faces).ok()
}

fn overlap(c: &FacetComplex, i: usize) -> FacetComplex {
    let f = &c.facets()[i];
    let faces: Vec<Vec<usize>> = c
        .facets()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, g)| f.iter().copied().filter(|v| g.binary_search(v).is_ok()).collect())
        .collect();
    FacetComplex::new(c.n_vertices(), faces).expect("subsets of a facet")
}

/// Strong collapse followed by link and overlap removals (see module docs).
/// The result is homotopy equivalent to `c`; vertex indices are preserved.
pub fn reduce_homotopy(c: &FacetComplex) -> FacetComplex {
    let mut c = strong_collapse(c);
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < c.facets().len() && c.facets().len() > 1 {
            if is_point(&strong_collapse(&overlap(&c, i))) {
                let rest = c
                    .facets()
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                c = FacetComplex::new(c.n_vertices(), rest).expect("same universe");
                changed = true;
            } else {
                i += 1;
            }
        }
        for v in c.vertex_support() {
            if c.vertex_support().len() <= 1 {
                break;
            }
            let Some(lk) = link(&c, v) else {
                continue;
            };
            if is_point(&strong_collapse(&lk)) {
                c = strong_collapse(&c.induced(|u| u != v));
                changed = true;
            }
        }
        if !changed {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{betti_numbers, Coefficients};
    use rand::{Rng, SeedableRng};

    #[test]
    fn simplex_reduces_to_a_point() {
        assert!(is_point(&reduce_homotopy(&FacetComplex::simplex(5))));
    }

    #[test]
    fn triangulated_disk_reduces_to_a_point() {
        // 3×3 grid of vertices, each square split along a diagonal.
        let mut tris = Vec::new();
        for r in 0..2 {
            for c in 0..2 {
                let v = 3 * r + c;
                tris.push(vec![v, v + 1, v + 4]);
                tris.push(vec![v, v + 3, v + 4]);
            }
        }
        let disk = FacetComplex::new(9, tris).unwrap();
        assert!(is_point(&reduce_homotopy(&disk)));
    }

    #[test]
    fn spheres_survive() {
        let s2 = FacetComplex::simplex_boundary(4);
        assert_eq!(reduce_homotopy(&s2), s2);
    }

    #[test]
    fn preserves_betti_numbers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=9))
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.35)).take(6).collect())
                .collect();
            let c = FacetComplex::new(n, facets).unwrap();
            let top = c.dim().max(0) as usize;
            let before = betti_numbers(&c, top, Coefficients::Integer).unwrap();
            let after = betti_numbers(&reduce_homotopy(&c), top, Coefficients::Integer).unwrap();
            assert_eq!(before, after, "{:?}", c.facets());
        }
    }
}
