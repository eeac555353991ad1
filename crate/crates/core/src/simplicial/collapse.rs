use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::complex::FacetComplex;

/// Removes dominated vertices until none remain.
///
/// A vertex `v` is dominated when some other vertex lies in every facet
/// containing `v`; deleting it preserves the homotopy type. The result keeps
/// the vertex universe of `c`.
pub fn strong_collapse(c: &FacetComplex) -> FacetComplex {
    let n = c.n_vertices();
    let mut facets: Vec<FixedBitSet> = c
        .facets()
        .iter()
        .map(|f| {
            let mut b = FixedBitSet::with_capacity(n);
            f.iter().for_each(|&v| b.insert(v));
            b
        })
        .collect();
    let mut alive = vec![true; facets.len()];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in c.facets().iter().enumerate() {
        for &v in f {
            incident[v].push(i);
        }
    }
    let mut queued = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut common = FixedBitSet::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        incident[v].retain(|&f| alive[f] && facets[f].contains(v));
        let Some((&first, rest)) = incident[v].split_first() else {
            continue;
        };
        common.clone_from(&facets[first]);
        for &f in rest {
            common.intersect_with(&facets[f]);
        }
        if common.count_ones(..) < 2 {
            continue;
        }
        let touched = std::mem::take(&mut incident[v]);
        for &f in &touched {
            facets[f].set(v, false);
        }
        for &f in &touched {
            let rarest = facets[f]
                .ones()
                .min_by_key(|&u| incident[u].len())
                .expect("dominated vertex shares its facets");
            let swallowed = incident[rarest]
                .iter()
                .any(|&g| g != f && alive[g] && facets[f].is_subset(&facets[g]));
            if swallowed {
                alive[f] = false;
            }
            for u in facets[f].ones() {
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let out = facets
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(f, _)| f.ones().collect())
        .collect();
    FacetComplex::new(n, out).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_collapses_to_a_point() {
        let c = strong_collapse(&FacetComplex::simplex(4));
        assert_eq!(c.facets().len(), 1);
        assert_eq!(c.facets()[0].len(), 1);
    }

    #[test]
    fn sphere_is_a_core() {
        let b = FacetComplex::simplex_boundary(4);
        assert_eq!(strong_collapse(&b), b);
    }

    #[test]
    fn result_has_no_dominated_vertex() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=8))
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            let c = strong_collapse(&FacetComplex::new(n, facets).unwrap());
            for v in c.vertex_support() {
                let containing: Vec<&Vec<usize>> =
                    c.facets().iter().filter(|f| f.contains(&v)).collect();
                let dominated = (0..n)
                    .filter(|&u| u != v)
                    .any(|u| containing.iter().all(|f| f.contains(&u)));
                assert!(!dominated, "{v} still dominated in {:?}", c.facets());
            }
        }
    }
}
