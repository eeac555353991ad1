//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Nonzero invariant factors `d₁ | d₂ | …` (all positive) and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Smith normal form of a dense integer matrix given by rows.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SmithForm {
    let dense = m
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    snf_dense(dense)
}

/// Dense reduction, pivoting on the entry of smallest absolute value.
pub(crate) fn snf_dense(mut a: Vec<Vec<BigInt>>) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                    dirty |= !a[t][j].is_zero();
                }
            }
            if !dirty {
                // Enforce divisibility: fold in a row holding a
                // non-multiple of the pivot and reduce again.
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero())
                });
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            let (pr, pc) = smallest_entry_rowcol(&a, t);
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
        }
        factors.push(a[t][t].abs());
        t += 1;
    }
    SmithForm {
        rank: factors.len(),
        factors,
    }
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t` at or beyond the pivot.
fn smallest_entry_rowcol(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |i: usize, j: usize, best: &mut (usize, usize)| {
        let v = &a[i][j];
        let cur = &a[best.0][best.1];
        if !v.is_zero() && (cur.is_zero() || v.abs() < cur.abs()) {
            *best = (i, j);
        }
    };
    for i in t..a.len() {
        better(i, t, &mut best);
    }
    for j in t..a[t].len() {
        better(t, j, &mut best);
    }
    best
}

/// Sparse integer matrix by columns; supports elimination on unit pivots.
pub(crate) struct SparseIntReduction {
    pub(crate) rank: usize,
    /// Invariant factors other than 1.
    pub(crate) torsion: Vec<BigInt>,
}

/// Rank over Q and non-unit invariant factors of a sparse integer matrix.
///
/// Unit pivots are eliminated sparsely (each contributes a factor 1); the
/// remaining core goes through dense Smith reduction.
pub(crate) fn sparse_smith(n_rows: usize, cols: &[Vec<(usize, i64)>]) -> Result<SparseIntReduction> {
    let mut cols: Vec<Vec<(usize, i64)>> = cols.to_vec();
    let mut row_cols: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n_rows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, _) in col {
            row_cols[i].insert(j);
        }
    }
    let mut alive: Vec<bool> = cols.iter().map(|c| !c.is_empty()).collect();
    let mut rank = 0;
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| cols[j].len());
    let mut progress = true;
    while progress {
        progress = false;
        for &j in &order {
            if !alive[j] {
                continue;
            }
            if cols[j].is_empty() {
                alive[j] = false;
                continue;
            }
            let Some(&(r, p)) = cols[j]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(i, _)| row_cols[*i].len())
            else {
                continue;
            };
            let others: Vec<usize> = row_cols[r].iter().copied().filter(|&c| c != j).collect();
            let pivot_col = std::mem::take(&mut cols[j]);
            for c in others {
                let a = cols[c]
                    .iter()
                    .find(|(i, _)| *i == r)
                    .map(|&(_, v)| v)
                    .expect("row index is consistent");
                let factor = a * p;
                let updated = axpy(&cols[c], &pivot_col, factor)?;
                for &(i, _) in &cols[c] {
                    row_cols[i].remove(&c);
                }
                for &(i, _) in &updated {
                    row_cols[i].insert(c);
                }
                cols[c] = updated;
            }
            for &(i, _) in &pivot_col {
                row_cols[i].remove(&j);
            }
            // Row r is now zero outside column j; dropping both is a unit
            // elimination step.
            debug_assert!(row_cols[r].is_empty());
            alive[j] = false;
            rank += 1;
            progress = true;
        }
    }
    let core_cols: Vec<usize> = (0..cols.len()).filter(|&j| alive[j] && !cols[j].is_empty()).collect();
    if core_cols.is_empty() {
        return Ok(SparseIntReduction {
            rank,
            torsion: Vec::new(),
        });
    }
    let mut core_rows: Vec<usize> = core_cols.iter().flat_map(|&j| cols[j].iter().map(|&(i, _)| i)).collect();
    core_rows.sort_unstable();
    core_rows.dedup();
    if core_rows.len().saturating_mul(core_cols.len()) > 50_000_000 {
        return Err(Error::ResourceLimit(format!(
            "dense Smith core of size {}x{} is too large",
            core_rows.len(),
            core_cols.len()
        )));
    }
    let mut dense = vec![vec![BigInt::zero(); core_cols.len()]; core_rows.len()];
    for (jj, &j) in core_cols.iter().enumerate() {
        for &(i, v) in &cols[j] {
            let ii = core_rows.binary_search(&i).expect("row collected");
            dense[ii][jj] = BigInt::from(v);
        }
    }
    let core = snf_dense(dense);
    Ok(SparseIntReduction {
        rank: rank + core.rank,
        torsion: core.factors.into_iter().filter(|f| !f.is_one()).collect(),
    })
}

/// `x − factor·y` on sorted sparse vectors, with overflow detection.
fn axpy(x: &[(usize, i64)], y: &[(usize, i64)], factor: i64) -> Result<Vec<(usize, i64)>> {
    let overflow = || Error::ResourceLimit("integer coefficient overflow in elimination".into());
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut a, mut b) = (0, 0);
    while a < x.len() || b < y.len() {
        let take_x = b == y.len() || (a < x.len() && x[a].0 < y[b].0);
        let take_y = a == x.len() || (b < y.len() && y[b].0 < x[a].0);
        let (i, v) = if take_x {
            a += 1;
            x[a - 1]
        } else if take_y {
            b += 1;
            let v = y[b - 1].1.checked_mul(factor).ok_or_else(overflow)?;
            (y[b - 1].0, v.checked_neg().ok_or_else(overflow)?)
        } else {
            let v = y[b].1.checked_mul(factor).ok_or_else(overflow)?;
            let s = x[a].1.checked_sub(v).ok_or_else(overflow)?;
            a += 1;
            b += 1;
            (x[a - 1].0, s)
        };
        if v != 0 {
            out.push((i, v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]).factors, big(&[1, 6]));
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(smith_normal_form(&id).factors, big(&[1, 1, 1]));
        let z = smith_normal_form(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(z.rank, 0);
        assert!(z.factors.is_empty());
        assert_eq!(smith_normal_form(&[]).rank, 0);
    }

    #[test]
    fn known_forms() {
        assert_eq!(smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).factors, big(&[2, 6, 12]));
        assert_eq!(smith_normal_form(&[vec![6, 4], vec![4, 6]]).factors, big(&[2, 10]));
    }

    /// gcd of all k×k minors equals d₁⋯d_k; checked for k = 1 and the
    /// determinant on random 3×3 matrices.
    #[test]
    fn factors_match_minor_gcds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let m: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            let s = smith_normal_form(&m);
            let g1 = m.iter().flatten().fold(0i64, |g, &v| g.gcd(&v));
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            if g1 == 0 {
                assert_eq!(s.rank, 0);
                continue;
            }
            assert_eq!(s.factors[0], BigInt::from(g1));
            if det != 0 {
                assert_eq!(s.rank, 3);
                let prod: BigInt = s.factors.iter().product();
                assert_eq!(prod, BigInt::from(det.abs()));
            } else {
                assert!(s.rank < 3);
            }
            for w in s.factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let (r, c) = (rng.gen_range(1..8), rng.gen_range(1..8));
            let m: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| if rng.gen_bool(0.4) { rng.gen_range(-3..=3) } else { 0 }).collect())
                .collect();
            let cols: Vec<Vec<(usize, i64)>> = (0..c)
                .map(|j| (0..r).filter(|&i| m[i][j] != 0).map(|i| (i, m[i][j])).collect())
                .collect();
            let sp = sparse_smith(r, &cols).unwrap();
            let de = smith_normal_form(&m);
            assert_eq!(sp.rank, de.rank);
            let mut t = sp.torsion.clone();
            t.sort();
            let expected: Vec<BigInt> = de.factors.into_iter().filter(|f| !f.is_one()).collect();
            assert_eq!(t, expected);
        }
    }
}
