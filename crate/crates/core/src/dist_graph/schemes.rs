//! Explicit colorings of S^1 and S² by arcs and projected polytope faces.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::coloring::Coloring;
use crate::error::{invalid, Error, Result};
use crate::sphere_geom::{
    cube_face_diagonal, dodeca_face_diagonal, regular_simplex_vertices, tetra_face_diameter,
    SampleSet, UnitPoint, CAP_DIAMETER,
};

const EXCEPTIONAL_TOL: f64 = 1e-12;

/// Partition of S^1 into `n_arcs` half-open arcs `[F_i, F_{i+1})` starting
/// at angle 0, arc `i` colored `i mod palette`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcScheme {
    pub n_arcs: usize,
    pub palette: usize,
}

impl ArcScheme {
    /// The three-color scheme for `(α, ε)`, `α ≠ 2π/3`:
    /// * `2π/3 < α ≤ π`: N = 3;
    /// * `2π/(3·2^m) < α < 2π/(3·2^(m−1))`: N = 3·2^m;
    /// * `α = 2π/(3·2^m)`: N = 3(2^m + 1).
    ///
    /// In every case the arcs must be shorter than α−ε and same-colored arcs
    /// must be farther than α+ε apart (i.e. `2π/N < α−ε`, `α+ε < 4π/N` when
    /// N > 3); otherwise the ε is infeasible.
    pub fn three_color(alpha: f64, eps: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= PI + 1e-12) {
            return Err(invalid(format!("alpha must lie in (0, π], got {alpha}")));
        }
        if !(eps >= 0.0) {
            return Err(invalid(format!("eps must be nonnegative, got {eps}")));
        }
        let third = TAU / 3.0;
        if (alpha - third).abs() <= EXCEPTIONAL_TOL {
            return Err(Error::Unsupported(
                "no three-color arc scheme exists at α = 2π/3; use the square scheme".into(),
            ));
        }
        let n_arcs = if alpha > third {
            3
        } else {
            // Largest m ≥ 1 with 2π/(3·2^m) ≤ α.
            let mut m = 1u32;
            while TAU / (3.0 * f64::from(1u32 << m)) > alpha + EXCEPTIONAL_TOL {
                m += 1;
                if m > 40 {
                    return Err(invalid("alpha too small for an arc scheme"));
                }
            }
            let base = TAU / (3.0 * f64::from(1u32 << m));
            if (alpha - base).abs() <= EXCEPTIONAL_TOL * alpha.max(1.0) {
                3 * ((1usize << m) + 1)
            } else {
                3 * (1usize << m)
            }
        };
        let scheme = Self { n_arcs, palette: 3 };
        scheme.check(alpha, eps)?;
        Ok(scheme)
    }

    /// Four arcs of length π/2 (an inscribed square), one color each.
    /// Proper whenever π/2 < α−ε.
    pub fn square(alpha: f64, eps: f64) -> Result<Self> {
        let scheme = Self {
            n_arcs: 4,
            palette: 4,
        };
        scheme.check(alpha, eps)?;
        Ok(scheme)
    }

    fn check(&self, alpha: f64, eps: f64) -> Result<()> {
        let arc = TAU / self.n_arcs as f64;
        let inner_ok = arc < alpha - eps;
        // Same color at distance ≥ (palette − 1) arcs in both directions.
        let outer_ok = self.n_arcs == self.palette
            || alpha + eps < (self.palette - 1) as f64 * arc;
        if inner_ok && outer_ok {
            Ok(())
        } else {
            Err(Error::InfeasibleEpsilon(format!(
                "eps {eps} too large for {} arcs at alpha {alpha}",
                self.n_arcs
            )))
        }
    }

    pub fn color_of_angle(&self, theta: f64) -> usize {
        let t = theta.rem_euclid(TAU);
        let arc = ((t / TAU * self.n_arcs as f64) as usize).min(self.n_arcs - 1);
        arc % self.palette
    }

    pub fn color(&self, p: &UnitPoint) -> usize {
        self.color_of_angle(p.angle())
    }
}

/// Color of `p` under the three-color arc scheme for `(α, ε)`.
pub fn arc_coloring_s1(alpha: f64, eps: f64, p: &UnitPoint) -> Result<usize> {
    if p.dim() != 1 {
        return Err(invalid("arc colorings live on S^1"));
    }
    Ok(ArcScheme::three_color(alpha, eps)?.color(p))
}

/// Colorings of S² by cells of a projected polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tessellation {
    /// Four faces of the regular tetrahedron, one color each.
    Tetra4,
    /// A polar cap of diameter 2π/3 plus four longitude quadrant stripes.
    Cap5,
    /// Twelve dodecahedron faces, opposite faces sharing a color.
    Dodeca6,
    /// Six cube faces, one color each.
    Cube6,
}

impl Tessellation {
    pub const ALL: [Tessellation; 4] = [Self::Tetra4, Self::Cap5, Self::Cube6, Self::Dodeca6];

    pub fn palette(self) -> usize {
        match self {
            Self::Tetra4 => 4,
            Self::Cap5 => 5,
            Self::Dodeca6 | Self::Cube6 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Tetra4 => "tetra4",
            Self::Cap5 => "cap5",
            Self::Dodeca6 => "dodeca6",
            Self::Cube6 => "cube6",
        }
    }

    /// Largest geodesic diameter of a single cell.
    pub fn cell_diameter(self) -> f64 {
        match self {
            Self::Tetra4 => tetra_face_diameter(),
            Self::Cap5 => CAP_DIAMETER,
            Self::Dodeca6 => dodeca_face_diagonal(),
            Self::Cube6 => cube_face_diagonal(),
        }
    }

    /// Distances `(lo, hi)` between two points of the same color can fall
    /// in `[0, cell_diameter] ∪ [lo, hi]`; `None` when each color is a
    /// single cell.
    pub fn far_same_color_range(self) -> Option<(f64, f64)> {
        match self {
            Self::Dodeca6 => Some((PI - dodeca_face_diagonal(), PI)),
            _ => None,
        }
    }

    /// Whether the scheme is a proper coloring of the ε-distance graph on
    /// all of S² (strict inequalities, so boundary-touching bands fail).
    pub fn valid_for(self, alpha: f64, eps: f64) -> bool {
        let lo = alpha - eps;
        let hi = alpha + eps;
        let inner = self.cell_diameter() < lo;
        match self.far_same_color_range() {
            None => inner,
            Some((far_lo, _)) => inner && hi < far_lo,
        }
    }

    /// Lower end of the α range in which the scheme is offered as an upper
    /// bound candidate.
    pub fn nominal_alpha_floor(self) -> f64 {
        self.cell_diameter()
    }

    pub fn color(self, p: &UnitPoint) -> usize {
        let x = p.coords();
        match self {
            Self::Tetra4 => {
                // Face opposite v_i is where ⟨p, v_i⟩ is smallest.
                let verts = tetra_vertices();
                argmin_with_ties(verts.iter().map(|v| dot3(x, v)))
            }
            Self::Cap5 => {
                if x[2] >= (CAP_DIAMETER / 2.0).cos() {
                    0
                } else {
                    let phi = x[1].atan2(x[0]).rem_euclid(TAU);
                    1 + ((phi / (PI / 2.0)) as usize).min(3)
                }
            }
            Self::Dodeca6 => {
                let centers = icosahedron_vertices();
                argmin_with_ties(centers.iter().map(|c| -dot3(x, c))) % 6
            }
            Self::Cube6 => {
                let axes = (0..6).map(|i| {
                    let sign = if i < 3 { 1.0 } else { -1.0 };
                    -sign * x[i % 3]
                });
                argmin_with_ties(axes)
            }
        }
    }

    /// Colors every point of a sample on S².
    pub fn color_sample(self, x: &SampleSet) -> Result<Coloring> {
        if x.dim() != 2 {
            return Err(invalid("tessellation colorings live on S²"));
        }
        Coloring::new(x.points().iter().map(|p| self.color(p)).collect(), self.palette())
    }
}

impl std::str::FromStr for Tessellation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| invalid(format!("unknown tessellation `{s}`")))
    }
}

pub fn tessellation_coloring_s2(scheme: Tessellation, p: &UnitPoint) -> Result<usize> {
    if p.dim() != 2 {
        return Err(invalid("tessellation colorings live on S²"));
    }
    Ok(scheme.color(p))
}

fn dot3(a: &[f64], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Index of the smallest value; values within 1e-12 of the minimum tie and
/// the lowest index wins.
fn argmin_with_ties(values: impl Iterator<Item = f64>) -> usize {
    let vals: Vec<f64> = values.collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    vals.iter().position(|&v| v <= min + 1e-12).expect("nonempty")
}

fn tetra_vertices() -> [[f64; 3]; 4] {
    let v = regular_simplex_vertices(2).expect("d = 2 is valid");
    std::array::from_fn(|i| {
        let c = v[i].coords();
        [c[0], c[1], c[2]]
    })
}

/// Icosahedron vertices (= dodecahedron face centers), ordered so that
/// entry `i + 6` is the antipode of entry `i`.
fn icosahedron_vertices() -> [[f64; 3]; 12] {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let norm = (1.0 + phi * phi).sqrt();
    let (a, b) = (1.0 / norm, phi / norm);
    let half = [
        [0.0, a, b],
        [0.0, -a, b],
        [a, b, 0.0],
        [-a, b, 0.0],
        [b, 0.0, a],
        [b, 0.0, -a],
    ];
    std::array::from_fn(|i| {
        if i < 6 {
            half[i]
        } else {
            half[i - 6].map(|c| -c)
        }
    })
}
