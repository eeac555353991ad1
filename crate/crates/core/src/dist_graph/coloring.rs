use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};
use std::io::Write;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::clique::greedy_clique;
use super::graph::Graph;
use crate::error::{invalid, Result};
use crate::sphere_geom::simplex_arclength;

/// A vertex coloring with colors in `0..palette_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
    palette_size: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, palette_size: usize) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c >= palette_size) {
            return Err(invalid(format!("color {c} outside palette of {palette_size}")));
        }
        Ok(Self {
            colors,
            palette_size,
        })
    }

    /// Palette size taken as one more than the largest color.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let palette_size = colors.iter().max().map_or(0, |m| m + 1);
        Self {
            colors,
            palette_size,
        }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of colors actually used.
    pub fn distinct_colors(&self) -> usize {
        let mut seen = vec![false; self.palette_size];
        self.colors.iter().for_each(|&c| seen[c] = true);
        seen.into_iter().filter(|&s| s).count()
    }

    /// CSV `vertex,color` with a header row.
    pub fn write_csv<W: Write>(&self, mut w: W, audit: &[String]) -> Result<()> {
        for line in audit {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "vertex,color")?;
        for (v, c) in self.colors.iter().enumerate() {
            writeln!(w, "{v},{c}")?;
        }
        Ok(())
    }
}

/// Result of [`verify_proper`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperReport {
    pub proper: bool,
    /// First monochromatic edge `(u, v)`, `u < v`, in lexicographic order.
    pub violating_edge: Option<(usize, usize)>,
}

pub fn verify_proper(g: &Graph, c: &Coloring) -> Result<ProperReport> {
    if c.len() != g.n_vertices() {
        return Err(invalid(format!(
            "coloring covers {} vertices, graph has {}",
            c.len(),
            g.n_vertices()
        )));
    }
    let violating_edge = g.edges().find(|&(u, v)| c.color(u) == c.color(v));
    Ok(ProperReport {
        proper: violating_edge.is_none(),
        violating_edge,
    })
}

/// BFS 2-coloring. `Ok(sides)` if bipartite, else an odd cycle as a vertex
/// sequence (consecutive entries adjacent, last adjacent to first).
pub fn two_color(g: &Graph) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = g.n_vertices();
    let mut side = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for s in 0..n {
        if side[s] != usize::MAX {
            continue;
        }
        side[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if side[v] == usize::MAX {
                    side[v] = 1 - side[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return Err(odd_cycle_from(u, v, &parent, &depth));
                }
            }
        }
    }
    Ok(side)
}

fn odd_cycle_from(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

pub fn is_bipartite(g: &Graph) -> bool {
    two_color(g).is_ok()
}

pub fn odd_cycle(g: &Graph) -> Option<Vec<usize>> {
    two_color(g).err()
}

/// Greedy DSATUR coloring: repeatedly color the vertex seeing the most
/// distinct colors (ties: larger degree, then smaller index) with the
/// smallest available color.
pub fn dsatur_upper(g: &Graph) -> Coloring {
    let n = g.n_vertices();
    let mut color = vec![usize::MAX; n];
    let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut sat = vec![0usize; n];
    let mut queue: BTreeSet<(Reverse<usize>, Reverse<usize>, usize)> =
        (0..n).map(|v| (Reverse(0), Reverse(g.degree(v)), v)).collect();
    let mut palette = 0;
    while let Some((_, _, v)) = queue.pop_first() {
        let c = (0..).find(|&c| !seen[v].get(c).copied().unwrap_or(false)).unwrap();
        color[v] = c;
        palette = palette.max(c + 1);
        for &w in g.neighbors(v) {
            if color[w] != usize::MAX {
                continue;
            }
            if seen[w].len() <= c {
                seen[w].resize(c + 1, false);
            }
            if !seen[w][c] {
                queue.remove(&(Reverse(sat[w]), Reverse(g.degree(w)), w));
                seen[w][c] = true;
                sat[w] += 1;
                queue.insert((Reverse(sat[w]), Reverse(g.degree(w)), w));
            }
        }
    }
    Coloring {
        colors: color,
        palette_size: palette,
    }
}

/// Outcome of a bounded k-colorability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Colorable(Vec<usize>),
    NotColorable,
    BudgetExhausted,
}

const UNCOLORED: u8 = u8::MAX;

struct Dsatur<'g> {
    g: &'g Graph,
    k: usize,
    color: Vec<u8>,
    // count[v * k + c] = neighbors of v holding color c
    count: Vec<u32>,
    sat: Vec<usize>,
    queue: BTreeSet<(Reverse<usize>, Reverse<usize>, usize)>,
    deadline: Instant,
    nodes: u64,
    node_limit: u64,
    out_of_time: bool,
}

impl<'g> Dsatur<'g> {
    fn new(g: &'g Graph, k: usize, deadline: Instant, node_limit: u64) -> Self {
        let n = g.n_vertices();
        Self {
            g,
            k,
            color: vec![UNCOLORED; n],
            count: vec![0; n * k],
            sat: vec![0; n],
            queue: BTreeSet::new(),
            deadline,
            nodes: 0,
            node_limit,
            out_of_time: false,
        }
    }

    fn key(&self, v: usize) -> (Reverse<usize>, Reverse<usize>, usize) {
        (Reverse(self.sat[v]), Reverse(self.g.degree(v)), v)
    }

    /// Colors `v` with `c`. Returns false (after undoing nothing) when some
    /// uncolored neighbor is left with an empty domain; the caller must
    /// still call `uncolor`.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        self.color[v] = c as u8;
        let mut ok = true;
        for &w in self.g.neighbors(v) {
            let slot = w * self.k + c;
            self.count[slot] += 1;
            if self.count[slot] == 1 && self.color[w] == UNCOLORED {
                let old = self.key(w);
                self.queue.remove(&old);
                self.sat[w] += 1;
                self.queue.insert(self.key(w));
                if self.sat[w] == self.k {
                    ok = false;
                }
            }
        }
        ok
    }

    fn uncolor(&mut self, v: usize) {
        let c = self.color[v] as usize;
        for &w in self.g.neighbors(v) {
            let slot = w * self.k + c;
            self.count[slot] -= 1;
            if self.count[slot] == 0 && self.color[w] == UNCOLORED {
                let old = self.key(w);
                self.queue.remove(&old);
                self.sat[w] -= 1;
                self.queue.insert(self.key(w));
            }
        }
        self.color[v] = UNCOLORED;
    }

    /// Depth-first search with symmetry breaking on fresh colors.
    fn search(&mut self, used: usize) -> Option<bool> {
        let Some(&(_, _, v)) = self.queue.first() else {
            return Some(true);
        };
        self.nodes += 1;
        if self.nodes >= self.node_limit
            || (self.nodes & 0x3ff == 0 && Instant::now() >= self.deadline)
        {
            self.out_of_time = true;
            return None;
        }
        self.queue.remove(&self.key(v));
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.count[v * self.k + c] != 0 {
                continue;
            }
            let ok = self.assign(v, c);
            if ok {
                match self.search(used.max(c + 1)) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => {
                        self.uncolor(v);
                        self.queue.insert(self.key(v));
                        return None;
                    }
                }
            }
            self.uncolor(v);
        }
        self.queue.insert(self.key(v));
        Some(false)
    }
}

/// Backtracking nodes spent per component before switching to the SAT
/// backend.
pub const DSATUR_NODE_LIMIT: u64 = 200_000;

/// Decides whether `g` admits a proper `k`-coloring.
///
/// Each component first gets DSATUR-ordered backtracking with forward
/// checking, capped at [`DSATUR_NODE_LIMIT`] nodes; undecided components go
/// to a CDCL SAT encoding. A greedy clique is precolored in both stages.
pub fn k_colorable(g: &Graph, k: usize, budget: Duration) -> Decision {
    let deadline = Instant::now() + budget;
    let n = g.n_vertices();
    if n == 0 {
        return Decision::Colorable(Vec::new());
    }
    if k == 0 {
        return Decision::NotColorable;
    }
    let mut colors = vec![0usize; n];
    for comp in g.components() {
        let (sub, map) = induced(g, &comp);
        match k_colorable_connected(&sub, k, deadline) {
            Decision::Colorable(c) => {
                for (local, &global) in map.iter().enumerate() {
                    colors[global] = c[local];
                }
            }
            other => return other,
        }
    }
    Decision::Colorable(colors)
}

fn induced(g: &Graph, verts: &[usize]) -> (Graph, Vec<usize>) {
    let mut local = vec![usize::MAX; g.n_vertices()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let adj = verts
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                .collect()
        })
        .collect();
    (Graph::from_adjacency(adj), verts.to_vec())
}

fn k_colorable_connected(g: &Graph, k: usize, deadline: Instant) -> Decision {
    let clique = greedy_clique(g);
    if clique.len() > k {
        return Decision::NotColorable;
    }
    let mut s = Dsatur::new(g, k, deadline, DSATUR_NODE_LIMIT);
    // Precolor a clique: any k-coloring can be permuted to agree with it.
    let mut feasible = true;
    for (c, &v) in clique.iter().enumerate() {
        if !s.assign(v, c) {
            feasible = false;
        }
    }
    if !feasible {
        return Decision::NotColorable;
    }
    s.queue.clear();
    for v in 0..g.n_vertices() {
        if s.color[v] == UNCOLORED {
            s.queue.insert(s.key(v));
        }
    }
    match s.search(clique.len()) {
        Some(true) => Decision::Colorable(s.color.iter().map(|&c| c as usize).collect()),
        Some(false) => Decision::NotColorable,
        None if Instant::now() >= deadline => Decision::BudgetExhausted,
        None => super::sat::sat_k_colorable(g, k, &clique, deadline),
    }
}

/// Outcome of [`chromatic_number_exact`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticOutcome {
    /// Exact χ when every needed decision finished within budget.
    pub chi: Option<usize>,
    /// Certified lower bound (clique, odd cycle or refuted k-colorings).
    pub lower: usize,
    /// Palette of the best verified coloring.
    pub upper: usize,
    /// Coloring achieving `upper` (χ-coloring when `chi` is known).
    pub coloring: Coloring,
}

/// Exact chromatic number for χ ≤ `max_k`, within `time_budget`.
///
/// Lower bounds come from a greedy clique and odd cycles; the DSATUR
/// heuristic gives the initial upper bound. Then `k = lower, lower+1, …`
/// are decided in turn by backtracking until one is colorable.
pub fn chromatic_number_exact(g: &Graph, max_k: usize, time_budget: Duration) -> ChromaticOutcome {
    chromatic_number_with(g, max_k, time_budget, None)
}

/// As [`chromatic_number_exact`], seeded with a known proper coloring.
pub fn chromatic_number_with(
    g: &Graph,
    max_k: usize,
    time_budget: Duration,
    hint: Option<&Coloring>,
) -> ChromaticOutcome {
    let start = Instant::now();
    let n = g.n_vertices();
    let mut best = dsatur_upper(g);
    if let Some(h) = hint {
        if h.len() == n
            && h.distinct_colors() < best.distinct_colors()
            && verify_proper(g, h).map(|r| r.proper).unwrap_or(false)
        {
            best = compact(h);
        }
    }
    best = compact(&best);
    let mut upper = best.palette_size();
    let mut lower = if n == 0 {
        0
    } else if g.edge_count() == 0 {
        1
    } else if is_bipartite(g) {
        2
    } else {
        3
    };
    lower = lower.max(greedy_clique(g).len()).min(upper);
    let mut k = lower;
    while k < upper && k <= max_k {
        let remaining = time_budget.saturating_sub(start.elapsed());
        match k_colorable(g, k, remaining) {
            Decision::Colorable(c) => {
                best = Coloring {
                    colors: c,
                    palette_size: k,
                };
                upper = k;
            }
            Decision::NotColorable => {
                lower = k + 1;
                k += 1;
            }
            Decision::BudgetExhausted => break,
        }
    }
    ChromaticOutcome {
        chi: (lower == upper).then_some(upper),
        lower,
        upper,
        coloring: best,
    }
}

/// Relabels colors to `0..m` in order of first use.
fn compact(c: &Coloring) -> Coloring {
    let mut map = vec![usize::MAX; c.palette_size()];
    let mut next = 0;
    let colors = c
        .colors()
        .iter()
        .map(|&x| {
            if map[x] == usize::MAX {
                map[x] = next;
                next += 1;
            }
            map[x]
        })
        .collect();
    Coloring {
        colors,
        palette_size: next,
    }
}

/// Chromatic number of the exact distance graph on S^1: 3 when 2π/α is an
/// odd integer (relative tolerance 1e-9), else 2.
pub fn exact_s1_chromatic(alpha: f64) -> Result<usize> {
    use std::f64::consts::{PI, TAU};
    if !(alpha > 0.0 && alpha < PI) {
        return Err(invalid(format!("alpha must lie in (0, π), got {alpha}")));
    }
    let ratio = TAU / alpha;
    let k = ratio.round();
    let odd = (ratio - k).abs() <= 1e-9 * ratio && (k as u64) % 2 == 1;
    Ok(if odd { 3 } else { 2 })
}

/// Asymptotic clique-based lower bound on χ for random ε-distance graphs on
/// S^d: d+3 at α = ℓ_d, d+2 for α ≤ ℓ_{d−1} (ℓ_0 read as π), else 3.
pub fn predicted_lower_bound(d: usize, alpha: f64) -> Result<usize> {
    use std::f64::consts::PI;
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(alpha > 0.0 && alpha <= PI + 1e-12) {
        return Err(invalid(format!("alpha must lie in (0, π], got {alpha}")));
    }
    let ell_d = simplex_arclength(d)?;
    let ell_prev = if d == 1 { PI } else { simplex_arclength(d - 1)? };
    Ok(if (alpha - ell_d).abs() < 1e-12 {
        d + 3
    } else if alpha <= ell_prev {
        d + 2
    } else {
        3
    })
}
