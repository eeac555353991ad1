/// Incremental column reduction over GF(2): each column is reduced by the
/// column owning its lowest (largest) row until its pivot is fresh or it
/// vanishes.
pub(crate) struct Reducer {
    owner: Vec<Option<Vec<usize>>>,
    rank: usize,
}

impl Reducer {
    pub(crate) fn new(n_rows: usize) -> Self {
        Self {
            owner: vec![None; n_rows],
            rank: 0,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a column of row indices (repeats cancel); returns whether the
    /// rank grew.
    pub(crate) fn push(&mut self, mut col: Vec<usize>) -> bool {
        col.sort_unstable();
        dedup_pairs(&mut col);
        while let Some(&low) = col.last() {
            match &self.owner[low] {
                Some(other) => col = sym_diff(&col, other),
                None => {
                    self.owner[low] = Some(col);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

/// Rank over GF(2) of a sparse matrix given by columns of row indices.
pub(crate) fn rank_mod2(n_rows: usize, cols: impl Iterator<Item = Vec<usize>>) -> usize {
    let mut r = Reducer::new(n_rows);
    for col in cols {
        r.push(col);
    }
    r.rank()
}

/// Removes entries appearing an even number of times.
fn dedup_pairs(v: &mut Vec<usize>) {
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Dense Gaussian elimination on bit rows.
    fn dense_rank(n_rows: usize, cols: &[Vec<usize>]) -> usize {
        let mut rows: Vec<u64> = vec![0; n_rows];
        for (j, c) in cols.iter().enumerate() {
            for &i in c {
                rows[i] ^= 1 << j;
            }
        }
        let mut rank = 0;
        for bit in 0..cols.len() {
            if let Some(p) = (rank..n_rows).find(|&i| rows[i] >> bit & 1 == 1) {
                rows.swap(rank, p);
                for i in 0..n_rows {
                    if i != rank && rows[i] >> bit & 1 == 1 {
                        rows[i] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn matches_dense_elimination() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let r = rng.gen_range(1..20);
            let c = rng.gen_range(1..20);
            let cols: Vec<Vec<usize>> = (0..c)
                .map(|_| (0..r).filter(|_| rng.gen_bool(0.3)).collect())
                .collect();
            assert_eq!(rank_mod2(r, cols.iter().cloned()), dense_rank(r, &cols));
        }
    }
}
