//! Certificate that the sphere class survives in a complex built on a
//! sample of S^d (d ∈ {1, 2}).
//!
//! If every facet of `K` lies in an open hemisphere, the map sending a
//! vertex to its sample point, extended linearly and pushed radially onto
//! the sphere, is well defined on `|K|`. When the Delaunay complex `Del` is
//! a subcomplex of `K` and the origin lies strictly inside the hull of the
//! sample, that map restricted to `|Del|` is a homeomorphism onto S^d. Then
//! `H_d(Del) = Z → H_d(K) → H_d(S^d) = Z` is an isomorphism, so `H_d(K)` has
//! free rank at least one.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::simplicial::{delaunay_s1, delaunay_s2, is_subcomplex, verify_sphere_triangulation, FacetComplex};
use crate::sphere_geom::SampleSet;

/// The three checks behind the certificate and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereClassCertificate {
    pub facets_in_open_hemispheres: bool,
    pub delaunay_is_sphere: bool,
    pub delaunay_subcomplex: bool,
    /// All three hold: free rank of H_d is at least 1.
    pub certified: bool,
}

const MARGIN: f64 = 1e-12;

/// Finds `h` with `⟨h, x⟩ > 0` for every listed point, by starting at the
/// centroid and applying perceptron corrections.
pub(crate) fn open_hemisphere(x: &SampleSet, verts: &[usize]) -> bool {
    let dim = x.dim() + 1;
    let mut h = vec![0.0; dim];
    for &v in verts {
        for (hk, pk) in h.iter_mut().zip(x.point(v).coords()) {
            *hk += pk;
        }
    }
    for _ in 0..1000 {
        let norm = h.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return false;
        }
        let (worst, val) = verts
            .iter()
            .map(|&v| (v, dotv(&h, x.point(v).coords()) / norm))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty facet");
        if val > MARGIN {
            return true;
        }
        for (hk, pk) in h.iter_mut().zip(x.point(worst).coords()) {
            *hk += pk * norm;
        }
    }
    false
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Whether the origin is strictly inside the hull: on the same side of
/// every Delaunay facet as the sample centroid (for d=1: every arc between
/// consecutive points is shorter than π).
fn origin_inside(del: &FacetComplex, x: &SampleSet) -> bool {
    let mut centroid = [0.0; 3];
    for p in x.points() {
        for (ck, pk) in centroid.iter_mut().zip(p.coords()) {
            *ck += pk / x.len() as f64;
        }
    }
    del.facets().iter().all(|f| match f.len() {
        2 => x.point(f[0]).dot(x.point(f[1])) > -1.0 + MARGIN,
        3 => {
            let [a, b, c] = [f[0], f[1], f[2]].map(|i| x.point(i).coords());
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let nrm = [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ];
            let origin_side = -dotv(&nrm, a);
            let inner_side = dotv(&nrm, &centroid) - dotv(&nrm, a);
            origin_side.abs() > MARGIN && origin_side.signum() == inner_side.signum()
        }
        _ => false,
    })
}

pub fn certify_sphere_class(c: &FacetComplex, x: &SampleSet) -> Result<SphereClassCertificate> {
    if c.n_vertices() != x.len() {
        return Err(invalid("complex and sample have different sizes"));
    }
    let del = match x.dim() {
        1 => delaunay_s1(x)?,
        2 => delaunay_s2(x)?,
        _ => return Err(invalid("sphere-class certificate needs d = 1 or 2")),
    };
    let facets_in_open_hemispheres = c.facets().iter().all(|f| open_hemisphere(x, f));
    let delaunay_is_sphere =
        verify_sphere_triangulation(&del, x.dim())?.pass && origin_inside(&del, x);
    let delaunay_subcomplex = is_subcomplex(&del, c)?;
    Ok(SphereClassCertificate {
        facets_in_open_hemispheres,
        delaunay_is_sphere,
        delaunay_subcomplex,
        certified: facets_in_open_hemispheres && delaunay_is_sphere && delaunay_subcomplex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist_graph::build_graph;
    use crate::simplicial::neighborhood_complex;
    use crate::sphere_geom::sample_uniform;

    #[test]
    fn hemisphere_search() {
        let x = SampleSet::from_angles(&[0.0, 1.0, 2.0, 3.0]);
        assert!(open_hemisphere(&x, &[0, 1, 2]));
        assert!(open_hemisphere(&x, &[0, 3]));
        let square = SampleSet::from_angles(&[0.0, 1.6, 3.2, 4.8]);
        assert!(!open_hemisphere(&square, &[0, 1, 2, 3]));
    }

    #[test]
    fn delaunay_itself_is_certified() {
        let x = sample_uniform(2, 200, 4).unwrap();
        let del = delaunay_s2(&x).unwrap();
        assert!(certify_sphere_class(&del, &x).unwrap().certified);
    }

    #[test]
    fn one_sided_sample_is_not() {
        let pts = sample_uniform(2, 200, 5)
            .unwrap()
            .points()
            .iter()
            .map(|p| {
                let c = p.coords();
                crate::sphere_geom::UnitPoint::new(vec![c[0], c[1], c[2].abs() + 0.05]).unwrap()
            })
            .collect();
        let x = SampleSet::from_points(2, pts, 0).unwrap();
        let del = delaunay_s2(&x).unwrap();
        let cert = certify_sphere_class(&del, &x).unwrap();
        assert!(!cert.delaunay_is_sphere);
    }

    #[test]
    fn whole_simplex_is_not() {
        let x = sample_uniform(2, 30, 4).unwrap();
        let full = FacetComplex::simplex(30);
        let cert = certify_sphere_class(&full, &x).unwrap();
        assert!(cert.delaunay_subcomplex);
        assert!(!cert.facets_in_open_hemispheres);
        assert!(!cert.certified);
    }

    #[test]
    fn antipodal_neighborhood_complex_on_circle() {
        let x = sample_uniform(1, 2000, 9).unwrap();
        let g = build_graph(&x, std::f64::consts::PI, 0.05).unwrap();
        let cert = certify_sphere_class(&neighborhood_complex(g.graph()), &x).unwrap();
        assert!(cert.certified, "{cert:?}");
    }
}
