//! Arc lengths attached to regular polytopes inscribed in spheres.

use std::f64::consts::PI;

use super::point::UnitPoint;
use crate::error::{invalid, Result};

/// Geodesic edge length ℓ_d of the regular (d+1)-simplex inscribed in S^d,
/// `arccos(-1/(d+1))`.
pub fn simplex_arclength(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(invalid("simplex arclength needs d >= 1"));
    }
    Ok((-1.0 / (d as f64 + 1.0)).acos())
}

/// The d+2 vertices of a regular simplex inscribed in S^d.
///
/// Built from the centered standard basis of R^(d+2) written in the
/// Helmert basis of the hyperplane orthogonal to (1, …, 1).
pub fn regular_simplex_vertices(d: usize) -> Result<Vec<UnitPoint>> {
    if d == 0 {
        return Err(invalid("regular simplex needs d >= 1"));
    }
    let m = d + 2;
    // |e_i - centroid| = sqrt((m-1)/m)
    let scale = (m as f64 / (m as f64 - 1.0)).sqrt();
    let vertices = (0..m)
        .map(|i| {
            let coords = (1..m)
                .map(|k| {
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let entry = if i < k {
                        1.0
                    } else if i == k {
                        -(k as f64)
                    } else {
                        0.0
                    };
                    scale * entry / norm
                })
                .collect();
            UnitPoint::new(coords).expect("simplex vertex is nonzero")
        })
        .collect();
    Ok(vertices)
}

/// Diameter λ₂ of a face of the inscribed regular tetrahedron projected to
/// S², `arccos(-1/√3) ≈ 2.1863`. Attained between a face vertex and the
/// midpoint of the opposite edge.
pub fn tetra_face_diameter() -> f64 {
    (-1.0 / 3f64.sqrt()).acos()
}

/// Geodesic diagonal ℓ* of a face of the inscribed regular dodecahedron,
/// `arccos(1/3) ≈ 1.2310`.
pub fn dodeca_face_diagonal() -> f64 {
    (1.0f64 / 3.0).acos()
}

/// Geodesic diagonal of a face of the inscribed cube, `arccos(-1/3)`.
/// Numerically equal to ℓ₂.
pub fn cube_face_diagonal() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// Diameter of the polar cap used by the five-colour scheme.
pub const CAP_DIAMETER: f64 = 2.0 * PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::geodesic_distance;

    #[test]
    fn known_values() {
        assert!((simplex_arclength(1).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((simplex_arclength(2).unwrap() - 1.9106).abs() < 5e-5);
        assert!((simplex_arclength(3).unwrap() - 1.823_476_581_936_975).abs() < 1e-12);
        assert!(simplex_arclength(0).is_err());
        assert!(regular_simplex_vertices(0).is_err());
    }

    #[test]
    fn arclength_decreases_towards_right_angle() {
        for d in 1..=20 {
            let a = simplex_arclength(d).unwrap();
            let b = simplex_arclength(d + 1).unwrap();
            assert!(a > b && b > std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn simplex_vertices_pairwise() {
        for d in 1..=10 {
            let v = regular_simplex_vertices(d).unwrap();
            assert_eq!(v.len(), d + 2);
            let ell = simplex_arclength(d).unwrap();
            for i in 0..v.len() {
                assert_eq!(v[i].dim(), d);
                for j in i + 1..v.len() {
                    assert!((v[i].dot(&v[j]) + 1.0 / (d as f64 + 1.0)).abs() < 1e-12);
                    assert!((geodesic_distance(&v[i], &v[j]).unwrap() - ell).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_forms_agree_with_half_angle_expressions() {
        // λ₂ = 2 arcsin sqrt(1/2 + 1/√12), ℓ* = 2 arcsin(√3/3)
        let lambda = 2.0 * (0.5 + 1.0 / 12f64.sqrt()).sqrt().asin();
        assert!((tetra_face_diameter() - lambda).abs() < 1e-12);
        let lstar = 2.0 * (3f64.sqrt() / 3.0).asin();
        assert!((dodeca_face_diagonal() - lstar).abs() < 1e-12);
        assert!((cube_face_diagonal() - simplex_arclength(2).unwrap()).abs() < 1e-15);
    }
}
