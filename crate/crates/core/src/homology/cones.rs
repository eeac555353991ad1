//! β₀ and β₁ of a complex given by large facets, without enumerating its
//! triangles.
//!
//! Every triangle lies in some facet `F`, and the boundaries of triangles
//! inside the full simplex on `F` are spanned by the cone triangles
//! `{a_F, u, v}` with apex `a_F = min F`. So `B₁(K)` is spanned by cone
//! columns alone, and `β₁ = dim Z₁ − rank B₁` with
//! `dim Z₁ = #edges − #vertices + β₀`.

use serde::{Deserialize, Serialize};

use super::gf2::Reducer;
use crate::error::{Error, Result};
use crate::simplicial::FacetComplex;

/// β₀ and β₁ over GF(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowBetti {
    pub b0: u64,
    pub b1: u64,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Number of connected components of the support of `c`.
pub fn component_count(c: &FacetComplex) -> u64 {
    let mut parent: Vec<usize> = (0..c.n_vertices()).collect();
    for f in c.facets() {
        for &v in &f[1..] {
            let (a, b) = (find(&mut parent, f[0]), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
    }
    c.vertex_support()
        .into_iter()
        .filter(|&v| find(&mut parent, v) == v)
        .count() as u64
}

/// Exact mod-2 β₀ and β₁ from cone spans; `cap` bounds the number of cone
/// columns.
pub fn low_betti_mod2(c: &FacetComplex, cap: u64) -> Result<LowBetti> {
    let b0 = component_count(c);
    let n = c.n_vertices() as u64;
    let key = |u: usize, v: usize| u as u64 * n + v as u64;
    let mut edges: Vec<u64> = c
        .facets()
        .iter()
        .flat_map(|f| {
            f.iter()
                .enumerate()
                .flat_map(move |(i, &u)| f[i + 1..].iter().map(move |&v| key(u, v)))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let n_edges = edges.len() as u64;
    let n_verts = c.vertex_support().len() as u64;
    let cycle_dim = n_edges + b0 - n_verts;
    if cycle_dim == 0 {
        return Ok(LowBetti { b0, b1: 0 });
    }
    let columns: u64 = c
        .facets()
        .iter()
        .map(|f| {
            let m = f.len().saturating_sub(1) as u64;
            m * m.saturating_sub(1) / 2
        })
        .sum();
    if columns > cap {
        return Err(Error::ResourceLimit(format!(
            "{columns} cone triangles exceed the cap of {cap}"
        )));
    }
    let idx = |u: usize, v: usize| edges.binary_search(&key(u, v)).expect("edge of a facet");
    let cols = c.facets().iter().flat_map(|f| {
        let a = f[0];
        let rest = &f[1..];
        (0..rest.len()).flat_map(move |i| {
            (i + 1..rest.len()).map(move |j| (a, rest[i], rest[j]))
        })
    });
    let rank = rank_mod2_until(
        edges.len(),
        cols.map(|(a, u, v)| vec![idx(a, u), idx(a, v), idx(u, v)]),
        cycle_dim as usize,
    );
    Ok(LowBetti {
        b0,
        b1: cycle_dim - rank as u64,
    })
}

/// Column rank over GF(2), stopping once `target` is reached.
fn rank_mod2_until(n_rows: usize, cols: impl Iterator<Item = Vec<usize>>, target: usize) -> usize {
    let mut reducer = Reducer::new(n_rows);
    for col in cols {
        if reducer.push(col) && reducer.rank() >= target {
            break;
        }
    }
    reducer.rank()
}
