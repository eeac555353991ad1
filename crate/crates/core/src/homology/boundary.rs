use serde::Serialize;

use crate::error::{invalid, Result};
use crate::simplicial::skeleton::{self, decode, Skeleton, DEFAULT_SIMPLEX_CAP};
use crate::simplicial::FacetComplex;

/// Sparse simplicial boundary map `∂_k : C_k → C_{k−1}`, stored by columns.
///
/// Rows and columns follow the lexicographic order of the sorted vertex
/// lists; the face dropping the i-th vertex gets sign `(−1)^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryMatrix {
    dim: usize,
    n_rows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl BoundaryMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Nonzero entries of column `j` as `(row, value)`, rows ascending.
    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub(crate) fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.cols
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols.len()]; self.n_rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m[i][j] = v;
            }
        }
        m
    }

    /// Whether `self ∘ next` vanishes, where `next` is the map one
    /// dimension up.
    pub fn composes_to_zero(&self, next: &BoundaryMatrix) -> bool {
        next.cols.iter().all(|col| {
            let mut acc = vec![0i64; self.n_rows];
            for &(mid, a) in col {
                for &(row, b) in &self.cols[mid] {
                    acc[row] += a * b;
                }
            }
            acc.iter().all(|&v| v == 0)
        })
    }
}

pub(crate) fn from_skeleton(sk: &Skeleton, k: usize) -> BoundaryMatrix {
    let cols = sk.levels[k]
        .iter()
        .map(|&key| {
            let s = decode(key, k + 1);
            let mut col: Vec<(usize, i64)> = (0..=k)
                .map(|drop| {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter_map(|(i, &v)| (i != drop).then_some(v))
                        .collect();
                    let row = sk
                        .index_of(k - 1, skeleton::encode(&face))
                        .expect("faces of a simplex are in the complex");
                    (row, if drop % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    BoundaryMatrix {
        dim: k,
        n_rows: sk.levels[k - 1].len(),
        cols,
    }
}

/// Boundary matrices `∂_1, …, ∂_up_to` of `c`.
pub fn boundary_matrices(c: &FacetComplex, up_to: usize) -> Result<Vec<BoundaryMatrix>> {
    if up_to == 0 {
        return Err(invalid("up_to must be at least 1"));
    }
    let sk = skeleton::enumerate(c, up_to, DEFAULT_SIMPLEX_CAP)?;
    Ok((1..=up_to).map(|k| from_skeleton(&sk, k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn triangle_boundary_signs() {
        let m = boundary_matrices(&FacetComplex::simplex(3), 2).unwrap();
        assert_eq!(m[1].to_dense(), vec![vec![1], vec![-1], vec![1]]);
        assert_eq!(m[0].n_rows(), 3);
        assert_eq!(m[0].n_cols(), 3);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.gen_range(2..=12);
            let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=6))
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
                .collect();
            let c = FacetComplex::new(n, facets).unwrap();
            let ms = boundary_matrices(&c, 4).unwrap();
            for w in ms.windows(2) {
                assert!(w[0].composes_to_zero(&w[1]));
            }
        }
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(boundary_matrices(&FacetComplex::simplex(3), 0).is_err());
    }
}
