//! Enumeration of the low-dimensional simplices of a facet complex.
//!
//! Simplices with at most six vertices are packed into a `u128`, 21 bits per
//! vertex with the smallest vertex in the most significant slot, so sorting
//! keys sorts simplices lexicographically.

use rayon::prelude::*;

use super::complex::FacetComplex;
use crate::error::{invalid, Error, Result};

/// Default cap on the number of enumerated simplices.
pub const DEFAULT_SIMPLEX_CAP: u64 = 50_000_000;

const BITS: u32 = 21;
const MAX_VERTEX: usize = (1 << BITS) - 1;
pub(crate) const MAX_ENCODED_LEN: usize = 6;

pub(crate) fn encode(s: &[usize]) -> u128 {
    s.iter().fold(0u128, |acc, &v| (acc << BITS) | v as u128)
}

pub(crate) fn decode(key: u128, len: usize) -> Vec<usize> {
    (0..len)
        .rev()
        .map(|i| ((key >> (BITS as usize * i)) & MAX_VERTEX as u128) as usize)
        .collect()
}

/// Sorted simplices of dimensions `0..=k`, as packed keys.
#[derive(Debug, Clone)]
pub(crate) struct Skeleton {
    pub(crate) levels: Vec<Vec<u128>>,
}

impl Skeleton {
    pub(crate) fn index_of(&self, dim: usize, key: u128) -> Option<usize> {
        self.levels[dim].binary_search(&key).ok()
    }
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// Upper bound on the simplex count up to dimension `k`, ignoring overlaps.
pub fn projected_simplex_count(c: &FacetComplex, k: usize) -> u64 {
    c.facets()
        .iter()
        .map(|f| (1..=k + 1).map(|j| binom(f.len(), j)).fold(0u64, u64::saturating_add))
        .fold(0u64, u64::saturating_add)
}

pub(crate) fn enumerate(c: &FacetComplex, k: usize, cap: u64) -> Result<Skeleton> {
    if k + 1 > MAX_ENCODED_LEN {
        return Err(Error::Unsupported(format!(
            "simplex enumeration is limited to dimension {}",
            MAX_ENCODED_LEN - 1
        )));
    }
    if c.n_vertices() > MAX_VERTEX {
        return Err(Error::Unsupported(format!(
            "at most {MAX_VERTEX} vertices are supported"
        )));
    }
    let projected = projected_simplex_count(c, k);
    if projected > cap {
        return Err(Error::ResourceLimit(format!(
            "up to {projected} simplices through dimension {k} exceed the cap of {cap}; \
             apply strong_collapse first"
        )));
    }
    let levels = (0..=k)
        .map(|j| {
            let mut keys: Vec<u128> = c
                .facets()
                .par_iter()
                .flat_map_iter(|f| subsets(f, j + 1))
                .collect();
            keys.par_sort_unstable();
            keys.dedup();
            keys
        })
        .collect();
    Ok(Skeleton { levels })
}

/// Packed `size`-subsets of the sorted set `f`.
fn subsets(f: &[usize], size: usize) -> Vec<u128> {
    let mut out = Vec::new();
    if size > f.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().fold(0u128, |acc, &i| (acc << BITS) | f[i] as u128));
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < f.len() - size + p) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Number of distinct simplices of each dimension `0..=k`.
pub fn k_skeleton_counts(c: &FacetComplex, k: usize) -> Result<Vec<u64>> {
    k_skeleton_counts_with_cap(c, k, DEFAULT_SIMPLEX_CAP)
}

pub fn k_skeleton_counts_with_cap(c: &FacetComplex, k: usize, cap: u64) -> Result<Vec<u64>> {
    if cap == 0 {
        return Err(invalid("cap must be positive"));
    }
    Ok(enumerate(c, k, cap)?
        .levels
        .iter()
        .map(|l| l.len() as u64)
        .collect())
}

/// All simplices of dimension `j`, lexicographically sorted. Uncapped; meant
/// for small complexes.
pub fn simplices_of_dim(c: &FacetComplex, j: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = Vec::new();
    for f in c.facets() {
        for key in subsets(f, j + 1) {
            all.push(decode(key, j + 1));
        }
    }
    all.sort();
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_graph::Graph;
    use crate::simplicial::neighborhood_complex;

    #[test]
    fn spec_counts() {
        assert_eq!(k_skeleton_counts(&FacetComplex::simplex_boundary(4), 2).unwrap(), [4, 6, 4]);
        let edge = FacetComplex::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(k_skeleton_counts(&edge, 1).unwrap(), [2, 1]);
        let c5 = neighborhood_complex(&Graph::cycle(5));
        assert_eq!(k_skeleton_counts(&c5, 1).unwrap(), [5, 5]);
        assert_eq!(k_skeleton_counts(&c5, 3).unwrap(), [5, 5, 0, 0]);
    }

    #[test]
    fn encoding_round_trips_and_orders() {
        let a = [0, 5, 2_000_000];
        assert_eq!(decode(encode(&a), 3), a);
        assert!(encode(&[0, 9, 10]) < encode(&[1, 2, 3]));
        assert!(encode(&[1, 2, 3]) < encode(&[1, 2, 4]));
    }

    #[test]
    fn counts_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(1..=6);
            let facets: Vec<Vec<usize>> = (0..m)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
                .collect();
            let c = FacetComplex::new(n, facets).unwrap();
            let mut expected = vec![0u64; 4];
            for mask in 1u32..(1 << n) {
                let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                if s.len() <= 4 && c.contains_simplex(&s) {
                    expected[s.len() - 1] += 1;
                }
            }
            assert_eq!(k_skeleton_counts(&c, 3).unwrap(), expected);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let big = FacetComplex::simplex(40);
        let err = k_skeleton_counts_with_cap(&big, 3, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
        assert!(matches!(k_skeleton_counts(&big, 6), Err(Error::Unsupported(_))));
    }
}
