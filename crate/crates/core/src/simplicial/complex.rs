use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A simplex given by its strictly increasing vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplexId(Vec<usize>);

impl SimplexId {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("simplex has a repeated vertex"));
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Geometric dimension (vertex count minus one).
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }
}

/// Abstract simplicial complex stored by its facets (maximal simplices).
///
/// Facets are sorted, nonempty, pairwise non-nested and listed in
/// lexicographic order; every vertex index is below `n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetComplex {
    n_vertices: usize,
    facets: Vec<Vec<usize>>,
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Drops empty, duplicate and non-maximal simplices.
pub(crate) fn maximalize(n_vertices: usize, mut simplices: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for s in &mut simplices {
        s.sort_unstable();
        s.dedup();
    }
    simplices.retain(|s| !s.is_empty());
    simplices.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in simplices {
        let rarest = s
            .iter()
            .min_by_key(|&&v| incident[v].len())
            .copied()
            .expect("nonempty");
        let covered = incident[rarest].iter().any(|&f| is_subset(&s, &kept[f]));
        if !covered {
            let id = kept.len();
            for &v in &s {
                incident[v].push(id);
            }
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

impl FacetComplex {
    /// Builds a complex generated by `simplices`; nested or repeated
    /// simplices are reduced to the maximal ones.
    pub fn new(n_vertices: usize, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(v) = simplices.iter().flatten().find(|&&v| v >= n_vertices) {
            return Err(invalid(format!("vertex {v} out of range for {n_vertices} vertices")));
        }
        Ok(Self {
            n_vertices,
            facets: maximalize(n_vertices, simplices),
        })
    }

    pub fn empty(n_vertices: usize) -> Self {
        Self {
            n_vertices,
            facets: Vec::new(),
        }
    }

    /// The full simplex on `0..n`.
    pub fn simplex(n: usize) -> Self {
        Self::new(n, vec![(0..n).collect()]).expect("indices in range")
    }

    /// Boundary of the simplex on `0..n` (a sphere S^(n−2)).
    pub fn simplex_boundary(n: usize) -> Self {
        let facets = (0..n)
            .map(|skip| (0..n).filter(|&v| v != skip).collect())
            .collect();
        Self::new(n, facets).expect("indices in range")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension of the largest facet, `-1` when empty.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    /// Vertices that belong to some facet, sorted.
    pub fn vertex_support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_vertices];
        self.facets.iter().flatten().for_each(|&v| seen[v] = true);
        (0..self.n_vertices).filter(|&v| seen[v]).collect()
    }

    pub fn contains_simplex(&self, s: &[usize]) -> bool {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        self.facets.iter().any(|f| is_subset(&sorted, f))
    }

    /// The subcomplex of simplices whose vertices all satisfy `keep`.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> FacetComplex {
        let faces = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|&v| keep(v)).collect())
            .collect();
        Self {
            n_vertices: self.n_vertices,
            facets: maximalize(self.n_vertices, faces),
        }
    }

    /// Writes the facet-list format: `n_vertices m_facets`, then one facet
    /// per line.
    pub fn write_facets<W: Write>(&self, mut w: W, audit: &[String]) -> Result<()> {
        for line in audit {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "{} {}", self.n_vertices, self.facets.len())?;
        for f in &self.facets {
            let row: Vec<String> = f.iter().map(usize::to_string).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn read_facets<R: BufRead>(r: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut facets = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let nums = line
                .split_whitespace()
                .map(str::parse::<usize>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| perr(e.to_string()))?;
            if header.is_none() {
                if nums.len() != 2 {
                    return Err(perr("expected `n_vertices m_facets`".into()));
                }
                header = Some((nums[0], nums[1]));
            } else {
                facets.push(nums);
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if facets.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {m} facets, found {}", facets.len()),
            });
        }
        Self::new(n, facets)
    }
}

/// Whether every facet of `a` lies in some facet of `b`.
pub fn is_subcomplex(a: &FacetComplex, b: &FacetComplex) -> Result<bool> {
    if a.n_vertices != b.n_vertices {
        return Err(invalid(format!(
            "vertex universes differ: {} vs {}",
            a.n_vertices, b.n_vertices
        )));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); b.n_vertices];
    for (i, f) in b.facets.iter().enumerate() {
        for &v in f {
            incident[v].push(i);
        }
    }
    Ok(a.facets.iter().all(|f| {
        let rarest = f.iter().min_by_key(|&&v| incident[v].len()).expect("nonempty");
        incident[*rarest].iter().any(|&i| is_subset(f, &b.facets[i]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximalization() {
        let c = FacetComplex::new(4, vec![vec![0, 1], vec![1, 0, 2], vec![2], vec![3], vec![]])
            .unwrap();
        assert_eq!(c.facets(), &[vec![0, 1, 2], vec![3]]);
        assert_eq!(c.dim(), 2);
        assert!(FacetComplex::new(2, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn subcomplex_examples() {
        let edge = FacetComplex::new(3, vec![vec![0, 1]]).unwrap();
        let tri = FacetComplex::simplex(3);
        let hollow = FacetComplex::simplex_boundary(3);
        assert!(is_subcomplex(&edge, &tri).unwrap());
        assert!(!is_subcomplex(&tri, &hollow).unwrap());
        assert!(is_subcomplex(&hollow, &tri).unwrap());
        assert!(is_subcomplex(&edge, &FacetComplex::simplex(4)).is_err());
    }

    #[test]
    fn facet_file_round_trip() {
        let c = FacetComplex::simplex_boundary(4);
        let mut buf = Vec::new();
        c.write_facets(&mut buf, &["x".into()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\n4 4\n0 1 2\n"));
        assert_eq!(FacetComplex::read_facets(&buf[..]).unwrap(), c);
    }

    #[test]
    fn induced_subcomplex_keeps_partial_faces() {
        let c = FacetComplex::simplex_boundary(4);
        let k = c.induced(|v| v != 3);
        assert_eq!(k.facets(), &[vec![0, 1, 2]]);
        let k = c.induced(|v| v < 2);
        assert_eq!(k.facets(), &[vec![0, 1]]);
    }

    #[test]
    fn maximalize_matches_quadratic_reference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..10);
            let sets: Vec<Vec<usize>> = (0..rng.gen_range(0..12))
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            let got = maximalize(n, sets.clone());
            let mut want: Vec<Vec<usize>> = sets
                .iter()
                .filter(|s| !s.is_empty())
                .filter(|s| !sets.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
                .cloned()
                .collect();
            want.sort();
            want.dedup();
            assert_eq!(got, want);
        }
    }
}
