//! Covering-radius checks: is every point of S^d within `r` of the sample?

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::index::CapIndex;
use super::point::{sample_uniform, SampleSet, UnitPoint};
use crate::error::{invalid, Result};

const NET_TOLERANCE: f64 = 1e-12;
const PROBE_SEED: u64 = 0x5eed_9e37_79b9_7f4a;

/// Outcome of [`is_eps_net`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetReport {
    pub is_net: bool,
    /// Largest observed distance from a probe to the sample. Exact on S^1.
    pub worst_gap: f64,
    /// A probe attaining `worst_gap`.
    pub witness: UnitPoint,
    /// Requested grid resolution.
    pub probe_resolution: usize,
    /// Probes actually evaluated (grid plus Delaunay circumcenters).
    pub probes_used: usize,
}

/// Quasi-uniform Fibonacci lattice with `n` points on S².
pub fn fibonacci_sphere(n: usize) -> Vec<UnitPoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            UnitPoint::from_unit_unchecked(vec![r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

/// Checks whether `x` is an `r`-net of its sphere.
///
/// On S^1 the answer is exact: the covering radius is half the largest
/// angular gap. On S² the sample is probed at a Fibonacci grid of
/// `probe_resolution` points together with every Delaunay circumcenter
/// (the exact covering radius is attained at one of those). Higher
/// dimensions use seeded uniform probes.
pub fn is_eps_net(x: &SampleSet, r: f64, probe_resolution: usize) -> Result<NetReport> {
    if x.is_empty() {
        return Err(invalid("cannot check an empty point set"));
    }
    if !(r > 0.0) {
        return Err(invalid(format!("net radius must be positive, got {r}")));
    }
    if x.dim() == 1 {
        return Ok(circle_net(x, r, probe_resolution));
    }

    let mut probes = if x.dim() == 2 {
        fibonacci_sphere(probe_resolution.max(1))
    } else {
        sample_uniform(x.dim(), probe_resolution.max(1), PROBE_SEED)?
            .points()
            .to_vec()
    };
    if x.dim() == 2 && x.len() >= 4 {
        if let Ok(tris) = crate::simplicial::hull_triangles(x) {
            probes.extend(tris.iter().map(|t| circumcenter(x, t)));
        }
    }

    let index = CapIndex::new(x, r.min(0.5));
    let mut worst = -1.0;
    let mut witness = probes[0].clone();
    for p in &probes {
        let (_, d) = index.nearest(p.coords()).expect("sample is nonempty");
        if d > worst {
            worst = d;
            witness = p.clone();
        }
    }
    Ok(NetReport {
        is_net: worst <= r + NET_TOLERANCE,
        worst_gap: worst,
        witness,
        probe_resolution,
        probes_used: probes.len(),
    })
}

fn circle_net(x: &SampleSet, r: f64, probe_resolution: usize) -> NetReport {
    let mut angles: Vec<f64> = x.points().iter().map(UnitPoint::angle).collect();
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    let (mut gap, mut start) = (TAU - angles[n - 1] + angles[0], angles[n - 1]);
    for w in angles.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            start = w[0];
        }
    }
    let half = gap / 2.0;
    NetReport {
        is_net: half <= r + NET_TOLERANCE,
        worst_gap: half,
        witness: UnitPoint::from_angle(start + half),
        probe_resolution,
        probes_used: 1,
    }
}

/// Center on S² of the circumcircle of a hull triangle, on the side of the
/// triangle's vertices.
pub(crate) fn circumcenter(x: &SampleSet, t: &[usize; 3]) -> UnitPoint {
    let [a, b, c] = t.map(|i| x.point(i).coords());
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let mut nrm = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    if nrm[0] * a[0] + nrm[1] * a[1] + nrm[2] * a[2] < 0.0 {
        nrm = nrm.map(|c| -c);
    }
    UnitPoint::new(nrm.to_vec()).unwrap_or_else(|_| x.point(t[0]).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::{regular_simplex_vertices, simplex_arclength};
    use std::f64::consts::FRAC_PI_2;

    fn square() -> SampleSet {
        SampleSet::from_angles(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2])
    }

    #[test]
    fn square_on_circle() {
        let rep = is_eps_net(&square(), PI / 4.0, 0).unwrap();
        assert!(rep.is_net);
        assert!((rep.worst_gap - PI / 4.0).abs() < 1e-12);
        assert!(!is_eps_net(&square(), PI / 8.0, 0).unwrap().is_net);
    }

    #[test]
    fn tetrahedron_is_not_a_half_radian_net() {
        let x = SampleSet::from_points(2, regular_simplex_vertices(2).unwrap(), 0).unwrap();
        let rep = is_eps_net(&x, 0.5, 2000).unwrap();
        assert!(!rep.is_net);
        assert!(rep.worst_gap >= simplex_arclength(2).unwrap() / 2.0);
        // The exact covering radius of the tetrahedron is π − ℓ₂, at the
        // face centers, which are circumcenters.
        assert!((rep.worst_gap - (PI - simplex_arclength(2).unwrap())).abs() < 1e-9);
    }

    #[test]
    fn brute_force_probe_agrees_on_random_sample() {
        let x = sample_uniform(2, 400, 5).unwrap();
        let rep = is_eps_net(&x, 0.2, 5000).unwrap();
        // Independent dense probe: no probe may exceed the reported gap by
        // more than the grid spacing allows, and none of the random probes
        // beats the circumcenter maximum.
        let probes = sample_uniform(2, 20_000, 77).unwrap();
        let brute = probes
            .points()
            .iter()
            .map(|p| {
                x.points()
                    .iter()
                    .map(|q| p.dot(q).clamp(-1.0, 1.0).acos())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!(brute <= rep.worst_gap + 1e-9);
        assert!(brute >= rep.worst_gap * 0.8);
    }

    #[test]
    fn errors() {
        let empty = SampleSet::from_points(2, vec![], 0).unwrap();
        assert!(is_eps_net(&empty, 0.1, 10).is_err());
        assert!(is_eps_net(&square(), 0.0, 10).is_err());
    }
}
