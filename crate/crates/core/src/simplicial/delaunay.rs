//! Delaunay triangulations of points on S^1 and S².
//!
//! On S² the geodesic Delaunay complex of a dense generic sample is the
//! boundary of the Euclidean convex hull, computed here incrementally.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::FacetComplex;
use crate::error::{invalid, Error, Result};
use crate::sphere_geom::{SampleSet, UnitPoint};

const ORIENT_TOL: f64 = 1e-13;
const JITTER: f64 = 1e-9;

/// Delaunay complex on S^1: the cycle through angularly consecutive points.
pub fn delaunay_s1(x: &SampleSet) -> Result<FacetComplex> {
    if x.dim() != 1 {
        return Err(invalid("delaunay_s1 needs points on S^1"));
    }
    if x.len() < 3 {
        return Err(invalid("need at least 3 points"));
    }
    let mut order: Vec<(f64, usize)> =
        x.points().iter().enumerate().map(|(i, p)| (p.angle(), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = order.len();
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        let gap = (b.0 - a.0).rem_euclid(std::f64::consts::TAU);
        // Angles from atan2 resolve gaps far below what 1 - dot can.
        if gap <= 1e-15 {
            return Err(Error::DegenerateInput(format!(
                "points {} and {} coincide",
                a.1, b.1
            )));
        }
    }
    let edges = (0..n)
        .map(|i| vec![order[i].1, order[(i + 1) % n].1])
        .collect();
    FacetComplex::new(n, edges)
}

/// Result of [`delaunay_s2_report`].
#[derive(Debug, Clone)]
pub struct DelaunayS2 {
    pub complex: FacetComplex,
    /// Whether the symbolic-style jitter had to be applied.
    pub perturbed: bool,
}

/// Delaunay complex on S²: triangles of the 3D convex hull.
pub fn delaunay_s2(x: &SampleSet) -> Result<FacetComplex> {
    delaunay_s2_report(x).map(|r| r.complex)
}

pub fn delaunay_s2_report(x: &SampleSet) -> Result<DelaunayS2> {
    if x.dim() != 2 {
        return Err(invalid("delaunay_s2 needs points on S²"));
    }
    if x.len() < 4 {
        return Err(invalid("need at least 4 points"));
    }
    let (tris, perturbed) = hull_with_fallback(x)?;
    let complex = FacetComplex::new(x.len(), tris.iter().map(|t| t.to_vec()).collect())?;
    Ok(DelaunayS2 { complex, perturbed })
}

/// Outward-oriented triangles of the convex hull of a sample on S².
pub(crate) fn hull_triangles(x: &SampleSet) -> Result<Vec<[usize; 3]>> {
    hull_with_fallback(x).map(|(t, _)| t)
}

fn hull_with_fallback(x: &SampleSet) -> Result<(Vec<[usize; 3]>, bool)> {
    let pts: Vec<[f64; 3]> = x.points().iter().map(to3).collect();
    match convex_hull(&pts) {
        Ok(t) => Ok((t, false)),
        Err(_) => {
            let jittered = jitter(x);
            convex_hull(&jittered).map(|t| (t, true)).map_err(|e| {
                Error::DegenerateInput(format!("hull degenerate after perturbation: {e}"))
            })
        }
    }
}

fn to3(p: &UnitPoint) -> [f64; 3] {
    let c = p.coords();
    [c[0], c[1], c[2]]
}

/// Index-seeded jitter of size ~1e-9, renormalized onto the sphere.
fn jitter(x: &SampleSet) -> Vec<[f64; 3]> {
    x.points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9 ^ i as u64);
            let c = to3(p);
            let q: [f64; 3] = std::array::from_fn(|k| c[k] + JITTER * rng.gen_range(-1.0..1.0));
            let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            q.map(|v| v / n)
        })
        .collect()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Signed volume (×6) of (a, b, c, p); positive when p sees the face
/// (a, b, c) from the side its normal points to.
fn orient(a: [f64; 3], b: [f64; 3], c: [f64; 3], p: [f64; 3]) -> f64 {
    dot(cross(sub(b, a), sub(c, a)), sub(p, a))
}

#[derive(Debug)]
struct HullError(String);

impl std::fmt::Display for HullError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Incremental convex hull. Fails on near-coplanar configurations (any
/// orientation test within tolerance) and when a point ends up inside.
fn convex_hull(pts: &[[f64; 3]]) -> std::result::Result<Vec<[usize; 3]>, HullError> {
    let n = pts.len();
    let init = initial_tetrahedron(pts).ok_or_else(|| HullError("all points coplanar".into()))?;
    let [a, b, c, d] = init;
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();

    let add_face = |f: [usize; 3],
                        faces: &mut Vec<[usize; 3]>,
                        alive: &mut Vec<bool>,
                        edge_face: &mut HashMap<(usize, usize), usize>| {
        let id = faces.len();
        faces.push(f);
        alive.push(true);
        for k in 0..3 {
            edge_face.insert((f[k], f[(k + 1) % 3]), id);
        }
    };

    let orient_tet = orient(pts[a], pts[b], pts[c], pts[d]);
    let base = if orient_tet < 0.0 { [a, b, c] } else { [a, c, b] };
    for f in [
        base,
        [base[0], base[2], d],
        [base[2], base[1], d],
        [base[1], base[0], d],
    ] {
        add_face(f, &mut faces, &mut alive, &mut edge_face);
    }
    let mut on_hull = vec![false; n];
    for v in init {
        on_hull[v] = true;
    }

    for p in 0..n {
        if on_hull[p] {
            continue;
        }
        let mut visible = Vec::new();
        for (id, f) in faces.iter().enumerate() {
            if !alive[id] {
                continue;
            }
            let o = orient(pts[f[0]], pts[f[1]], pts[f[2]], pts[p]);
            if o.abs() <= ORIENT_TOL {
                return Err(HullError(format!("point {p} is coplanar with a hull face")));
            }
            if o > 0.0 {
                visible.push(id);
            }
        }
        if visible.is_empty() {
            return Err(HullError(format!("point {p} lies inside the hull")));
        }
        let mut horizon = Vec::new();
        for &id in &visible {
            alive[id] = false;
        }
        for &id in &visible {
            let f = faces[id];
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                let twin = edge_face[&(v, u)];
                if alive[twin] {
                    horizon.push((u, v));
                }
            }
        }
        for &id in &visible {
            let f = faces[id];
            for k in 0..3 {
                let key = (f[k], f[(k + 1) % 3]);
                if edge_face.get(&key) == Some(&id) {
                    edge_face.remove(&key);
                }
            }
        }
        for (u, v) in horizon {
            add_face([u, v, p], &mut faces, &mut alive, &mut edge_face);
        }
        on_hull[p] = true;
    }
    let out: Vec<[usize; 3]> = faces
        .into_iter()
        .zip(alive)
        .filter_map(|(f, a)| a.then_some(f))
        .collect();
    let mut used = vec![false; n];
    out.iter().flatten().for_each(|&v| used[v] = true);
    if let Some(v) = used.iter().position(|&u| !u) {
        return Err(HullError(format!("point {v} is not a hull vertex")));
    }
    Ok(out)
}

fn initial_tetrahedron(pts: &[[f64; 3]]) -> Option<[usize; 4]> {
    let n = pts.len();
    let a = 0;
    let b = (1..n).max_by(|&i, &j| {
        let di = dot(sub(pts[i], pts[a]), sub(pts[i], pts[a]));
        let dj = dot(sub(pts[j], pts[a]), sub(pts[j], pts[a]));
        di.total_cmp(&dj)
    })?;
    let ab = sub(pts[b], pts[a]);
    let c = (1..n).filter(|&i| i != b).max_by(|&i, &j| {
        let ci = cross(ab, sub(pts[i], pts[a]));
        let cj = cross(ab, sub(pts[j], pts[a]));
        dot(ci, ci).total_cmp(&dot(cj, cj))
    })?;
    let d = (1..n).filter(|&i| i != b && i != c).max_by(|&i, &j| {
        orient(pts[a], pts[b], pts[c], pts[i])
            .abs()
            .total_cmp(&orient(pts[a], pts[b], pts[c], pts[j]).abs())
    })?;
    (orient(pts[a], pts[b], pts[c], pts[d]).abs() > ORIENT_TOL).then_some([a, b, c, d])
}
