use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::{from_skeleton, BoundaryMatrix};
use super::gf2::rank_mod2;
use super::snf::sparse_smith;
use crate::error::{invalid, Error, Result};
use crate::simplicial::skeleton::{self, DEFAULT_SIMPLEX_CAP};
use crate::simplicial::{strong_collapse, FacetComplex};

/// Coefficient ring for homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Mod2,
    Integer,
}

impl std::str::FromStr for Coefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mod2" => Ok(Self::Mod2),
            "integer" | "int" | "z" => Ok(Self::Integer),
            other => Err(invalid(format!("unknown coefficients `{other}`"))),
        }
    }
}

/// Betti numbers β₀..β_K; `torsion[k]` lists the invariant factors above 1
/// of H_k (integer coefficients only).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    pub coefficients: Coefficients,
    pub betti: Vec<u64>,
    pub torsion: Vec<Vec<u64>>,
}

impl BettiProfile {
    pub fn get(&self, k: usize) -> u64 {
        self.betti.get(k).copied().unwrap_or(0)
    }
}

struct RankData {
    counts: Vec<u64>,
    /// `ranks[k]` is the rank of ∂_k; `ranks[0] = 0`.
    ranks: Vec<usize>,
    torsion: Vec<Vec<u64>>,
}

fn rank_data(c: &FacetComplex, top: usize, coeff: Coefficients, cap: u64) -> Result<RankData> {
    let sk = skeleton::enumerate(c, top, cap)?;
    let counts: Vec<u64> = sk.levels.iter().map(|l| l.len() as u64).collect();
    let mats: Vec<BoundaryMatrix> = (1..=top).map(|k| from_skeleton(&sk, k)).collect();
    let per_dim: Vec<Result<(usize, Vec<u64>)>> = mats
        .par_iter()
        .map(|m| match coeff {
            Coefficients::Mod2 => Ok((
                rank_mod2(
                    m.n_rows(),
                    m.columns().iter().map(|c| c.iter().map(|&(i, _)| i).collect()),
                ),
                Vec::new(),
            )),
            Coefficients::Integer => {
                let red = sparse_smith(m.n_rows(), m.columns())?;
                let mut t = red
                    .torsion
                    .iter()
                    .map(|f| {
                        f.to_u64().ok_or_else(|| {
                            Error::ResourceLimit(format!("torsion coefficient {f} exceeds u64"))
                        })
                    })
                    .collect::<Result<Vec<u64>>>()?;
                t.sort_unstable();
                Ok((red.rank, t))
            }
        })
        .collect();
    let mut ranks = vec![0];
    let mut torsion = Vec::new();
    for r in per_dim {
        let (rank, t) = r?;
        ranks.push(rank);
        torsion.push(t);
    }
    Ok(RankData {
        counts,
        ranks,
        torsion,
    })
}

/// Betti numbers β₀..β_up_to of `c` (torsion of H_k comes from ∂_{k+1}).
pub fn betti_numbers(c: &FacetComplex, up_to: usize, coeff: Coefficients) -> Result<BettiProfile> {
    betti_numbers_with_cap(c, up_to, coeff, DEFAULT_SIMPLEX_CAP)
}

pub fn betti_numbers_with_cap(
    c: &FacetComplex,
    up_to: usize,
    coeff: Coefficients,
    cap: u64,
) -> Result<BettiProfile> {
    let mut betti = vec![0u64; up_to + 1];
    let mut torsion = vec![Vec::new(); up_to + 1];
    if c.is_empty() {
        return Ok(BettiProfile {
            coefficients: coeff,
            betti,
            torsion,
        });
    }
    let top = (up_to + 1).min(c.dim() as usize);
    let data = rank_data(c, top, coeff, cap)?;
    let rank = |k: usize| data.ranks.get(k).copied().unwrap_or(0) as u64;
    for k in 0..=up_to {
        let n_k = data.counts.get(k).copied().unwrap_or(0);
        betti[k] = n_k - rank(k) - rank(k + 1);
        if coeff == Coefficients::Integer {
            if let Some(t) = data.torsion.get(k) {
                torsion[k] = t.clone();
            }
        }
    }
    Ok(BettiProfile {
        coefficients: coeff,
        betti,
        torsion,
    })
}

/// The homological shadow of connectivity claims for a complex expected
/// to look like (a space mapping onto) S^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub betti_mod2: Vec<u64>,
    /// β₀ = 1.
    pub connected: bool,
    /// Largest k ≤ d with β₁ = … = β_k = 0 (0 when β₁ ≠ 0 or d = 0).
    pub homology_vanishing_up_to: usize,
    /// Rank of the free part of H_d with integer coefficients.
    pub free_rank_dim_d: u64,
    /// Lovász-style bound the homology is consistent with; not a
    /// certified chromatic bound.
    pub consistent_with: String,
}

pub fn connectivity_report(c: &FacetComplex, d: usize) -> Result<ConnectivityReport> {
    if d == 0 {
        return Err(invalid("d must be at least 1"));
    }
    let mod2 = betti_numbers(c, d, Coefficients::Mod2)?;
    let free_rank_dim_d = rational_betti(c, d)?;
    let connected = mod2.get(0) == 1;
    let homology_vanishing_up_to = (1..=d).take_while(|&k| mod2.get(k) == 0).count();
    let consistent_with = if connected {
        format!(
            "homology consistent with chi >= {} (homological shadow only, not certified)",
            (homology_vanishing_up_to + 1).min(d - 1) + 3
        )
    } else {
        "complex is disconnected; no topological bound suggested".to_string()
    };
    Ok(ConnectivityReport {
        betti_mod2: mod2.betti,
        connected,
        homology_vanishing_up_to,
        free_rank_dim_d,
        consistent_with,
    })
}

/// β_k over Q, from integer (fraction-free) ranks of ∂_k and ∂_{k+1}.
pub fn rational_betti(c: &FacetComplex, k: usize) -> Result<u64> {
    if c.is_empty() {
        return Ok(0);
    }
    let top = (k + 1).min(c.dim() as usize);
    if top < k {
        return Ok(0);
    }
    let sk = skeleton::enumerate(c, top, DEFAULT_SIMPLEX_CAP)?;
    let rank = |j: usize| -> Result<u64> {
        if j == 0 || j > top {
            return Ok(0);
        }
        let m = from_skeleton(&sk, j);
        Ok(sparse_smith(m.n_rows(), m.columns())?.rank as u64)
    };
    Ok(sk.levels[k].len() as u64 - rank(k)? - rank(k + 1)?)
}

/// Serializable homology summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: Vec<u64>,
    pub torsion: Vec<Vec<u64>>,
    pub coeff: Coefficients,
    pub collapsed: bool,
    pub simplex_counts: Vec<u64>,
}

/// Betti numbers of `c` (optionally strong-collapsed first) plus the
/// simplex counts of the complex actually reduced.
pub fn homology_report(
    c: &FacetComplex,
    up_to: usize,
    coeff: Coefficients,
    collapse: bool,
) -> Result<HomologyReport> {
    let reduced;
    let target = if collapse {
        reduced = strong_collapse(c);
        &reduced
    } else {
        c
    };
    let profile = betti_numbers(target, up_to, coeff)?;
    let top = (up_to + 1).min(target.dim().max(0) as usize);
    let simplex_counts = if target.is_empty() {
        Vec::new()
    } else {
        skeleton::k_skeleton_counts(target, top)?
    };
    Ok(HomologyReport {
        betti: profile.betti,
        torsion: profile.torsion,
        coeff,
        collapsed: collapse,
        simplex_counts,
    })
}

/// Euler characteristic from the simplex counts of all dimensions.
pub fn euler_characteristic(c: &FacetComplex) -> Result<i64> {
    if c.is_empty() {
        return Ok(0);
    }
    let counts = skeleton::k_skeleton_counts(c, c.dim() as usize)?;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_graph::Graph;
    use crate::simplicial::neighborhood_complex;
    use rand::{Rng, SeedableRng};

    /// Minimal 6-vertex triangulation of the real projective plane.
    fn rp2() -> FacetComplex {
        let f = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        FacetComplex::new(6, f.iter().map(|t| t.to_vec()).collect()).unwrap()
    }

    #[test]
    fn sphere_betti() {
        let s2 = FacetComplex::simplex_boundary(4);
        let b = betti_numbers(&s2, 2, Coefficients::Integer).unwrap();
        assert_eq!(b.betti, [1, 0, 1]);
        assert!(b.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn projective_plane_torsion() {
        let c = rp2();
        let z = betti_numbers(&c, 2, Coefficients::Integer).unwrap();
        assert_eq!(z.betti, [1, 0, 0]);
        assert_eq!(z.torsion, vec![vec![], vec![2], vec![]]);
        let m2 = betti_numbers(&c, 2, Coefficients::Mod2).unwrap();
        assert_eq!(m2.betti, [1, 1, 1]);
        assert_eq!(euler_characteristic(&c).unwrap(), 1);
    }

    #[test]
    fn lovasz_examples() {
        for n in 3..=5 {
            let b = betti_numbers(&neighborhood_complex(&Graph::complete(n)), n - 1, Coefficients::Integer).unwrap();
            let mut expected = vec![0; n];
            expected[0] = 1;
            expected[n - 2] += 1;
            assert_eq!(b.betti, expected, "K_{n}");
        }
        let c5 = betti_numbers(&neighborhood_complex(&Graph::cycle(5)), 1, Coefficients::Mod2).unwrap();
        assert_eq!(c5.betti, [1, 1]);
    }

    #[test]
    fn connectivity_examples() {
        let r = connectivity_report(&FacetComplex::simplex_boundary(4), 2).unwrap();
        assert!(r.connected);
        assert_eq!(r.homology_vanishing_up_to, 1);
        assert_eq!(r.free_rank_dim_d, 1);
        let k3 = connectivity_report(&neighborhood_complex(&Graph::complete(3)), 1).unwrap();
        assert!(k3.connected);
        assert_eq!(k3.free_rank_dim_d, 1);
    }

    fn random_complex(rng: &mut impl Rng, max_n: usize) -> FacetComplex {
        let n = rng.gen_range(1..=max_n);
        let p = rng.gen_range(0.2..0.6);
        let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=10))
            .map(|_| (0..n).filter(|_| rng.gen_bool(p)).take(6).collect())
            .collect();
        FacetComplex::new(n, facets).unwrap()
    }

    #[test]
    fn euler_matches_alternating_betti() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40);
        for _ in 0..200 {
            let c = random_complex(&mut rng, 12);
            let top = c.dim().max(0) as usize;
            let b = betti_numbers(&c, top, Coefficients::Integer).unwrap();
            let alt: i64 = b.betti.iter().enumerate().map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
            assert_eq!(alt, euler_characteristic(&c).unwrap());
        }
    }

    #[test]
    fn collapse_preserves_betti() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let c = random_complex(&mut rng, 15);
            let top = c.dim().max(0) as usize;
            let before = betti_numbers(&c, top, Coefficients::Integer).unwrap();
            let after = betti_numbers(&strong_collapse(&c), top, Coefficients::Integer).unwrap();
            assert_eq!(before, after, "{:?}", c.facets());
        }
    }

    #[test]
    fn mod2_matches_integer_on_torsion_free_examples() {
        for c in [
            FacetComplex::simplex_boundary(4),
            FacetComplex::simplex_boundary(5),
            neighborhood_complex(&Graph::cycle(7)),
            neighborhood_complex(&Graph::complete(5)),
        ] {
            let top = c.dim() as usize;
            assert_eq!(
                betti_numbers(&c, top, Coefficients::Mod2).unwrap().betti,
                betti_numbers(&c, top, Coefficients::Integer).unwrap().betti
            );
        }
    }

    #[test]
    fn report_json_fields() {
        let r = homology_report(&FacetComplex::simplex(4), 2, Coefficients::Mod2, true).unwrap();
        assert_eq!(r.betti, [1, 0, 0]);
        assert_eq!(r.simplex_counts, [1]);
        let v = serde_json::to_value(&r).unwrap();
        for key in ["betti", "torsion", "coeff", "collapsed", "simplex_counts"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["coeff"], "mod2");
    }
}
