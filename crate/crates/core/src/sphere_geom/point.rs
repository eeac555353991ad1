use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute slack applied to dot products before comparing distances.
pub const DOT_TOLERANCE: f64 = 1e-12;

/// A point on the unit sphere S^d, stored as a unit vector in R^(d+1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitPoint {
    coords: Vec<f64>,
}

impl UnitPoint {
    /// Normalizes `coords` onto the sphere. Needs at least two coordinates
    /// and a nonzero, finite norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(invalid("a sphere point needs at least 2 coordinates"));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Point on S^1 at the given angle (radians, counter-clockwise from e1).
    pub fn from_angle(theta: f64) -> Self {
        Self {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    /// Point on S^2 from polar angle (measured from +z) and longitude.
    pub fn from_spherical(polar: f64, longitude: f64) -> Self {
        let s = polar.sin();
        Self::new(vec![s * longitude.cos(), s * longitude.sin(), polar.cos()])
            .expect("spherical coordinates give a unit vector")
    }

    pub(crate) fn from_unit_unchecked(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Sphere dimension d (the vector has d+1 entries).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn dot(&self, other: &UnitPoint) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn antipode(&self) -> UnitPoint {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Angle in `[0, 2π)` of the first two coordinates.
    pub fn angle(&self) -> f64 {
        let a = self.coords[1].atan2(self.coords[0]);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn arc_from_dot(dot: f64) -> f64 {
    dot.clamp(-1.0, 1.0).acos()
}

/// Geodesic (great-circle) distance in `[0, π]`.
pub fn geodesic_distance(p: &UnitPoint, q: &UnitPoint) -> Result<f64> {
    if p.coords.len() != q.coords.len() {
        return Err(invalid(format!(
            "dimension mismatch: S^{} vs S^{}",
            p.dim(),
            q.dim()
        )));
    }
    Ok(arc_from_dot(p.dot(q)))
}

/// Closed distance band test `lo ≤ dist ≤ hi`, evaluated on the dot product
/// with [`DOT_TOLERANCE`] slack on both ends.
#[inline]
pub fn dot_in_band(dot: f64, lo: f64, hi: f64) -> bool {
    dot <= lo.cos() + DOT_TOLERANCE && dot >= hi.cos() - DOT_TOLERANCE
}

/// Precomputed form of [`dot_in_band`] for tight loops.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DotBand {
    upper: f64,
    lower: f64,
}

impl DotBand {
    pub(crate) fn new(lo: f64, hi: f64) -> Self {
        Self {
            upper: lo.cos() + DOT_TOLERANCE,
            lower: hi.cos() - DOT_TOLERANCE,
        }
    }

    #[inline]
    pub(crate) fn contains(&self, dot: f64) -> bool {
        dot <= self.upper && dot >= self.lower
    }
}

/// An ordered point set on S^d together with the seed that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    dim: usize,
    points: Vec<UnitPoint>,
    seed: u64,
}

impl SampleSet {
    /// Wraps explicit points; every point must live on S^dim.
    pub fn from_points(dim: usize, points: Vec<UnitPoint>, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("sphere dimension must be at least 1"));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.dim() != dim) {
            return Err(invalid(format!(
                "point {i} lives on S^{} but the set is on S^{dim}",
                p.dim()
            )));
        }
        Ok(Self { dim, points, seed })
    }

    /// Points on S^1 at the given angles.
    pub fn from_angles(angles: &[f64]) -> Self {
        Self {
            dim: 1,
            points: angles.iter().map(|&t| UnitPoint::from_angle(t)).collect(),
            seed: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[UnitPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &UnitPoint {
        &self.points[i]
    }

    /// Writes the CSV form: `#` audit lines, a `dim,n,seed` line, then one
    /// row of d+1 coordinates (17 significant digits) per point.
    pub fn write_csv<W: Write>(&self, mut w: W, audit: &[String]) -> Result<()> {
        for line in audit {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "{},{},{}", self.dim, self.points.len(), self.seed)?;
        for p in &self.points {
            let row: Vec<String> = p.coords.iter().map(|c| format!("{c:.16e}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Parses the CSV form written by [`SampleSet::write_csv`]. Rows are
    /// taken as stored; they are not re-normalized, so a round trip is exact.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut header: Option<(usize, usize, u64)> = None;
        let mut points = Vec::new();
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
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            match header {
                None => {
                    if fields.len() != 3 {
                        return Err(perr("expected header `dim,n,seed`".into()));
                    }
                    let dim = fields[0].parse().map_err(|e| perr(format!("dim: {e}")))?;
                    let n = fields[1].parse().map_err(|e| perr(format!("n: {e}")))?;
                    let seed = fields[2].parse().map_err(|e| perr(format!("seed: {e}")))?;
                    header = Some((dim, n, seed));
                }
                Some((dim, _, _)) => {
                    if fields.len() != dim + 1 {
                        return Err(perr(format!(
                            "expected {} coordinates, found {}",
                            dim + 1,
                            fields.len()
                        )));
                    }
                    let coords = fields
                        .iter()
                        .map(|f| f.parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| perr(format!("coordinate: {e}")))?;
                    let norm = dot(&coords, &coords).sqrt();
                    if (norm - 1.0).abs() > 1e-9 {
                        return Err(perr(format!("row is not a unit vector (norm {norm})")));
                    }
                    points.push(UnitPoint::from_unit_unchecked(coords));
                }
            }
        }
        let (dim, n, seed) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if points.len() != n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {n} points, found {}", points.len()),
            });
        }
        Self::from_points(dim, points, seed)
    }
}

/// Draws `n` i.i.d. uniform points on S^d: standard normal coordinates,
/// then normalization. The same `(d, n, seed)` always gives the same set.
pub fn sample_uniform(d: usize, n: usize, seed: u64) -> Result<SampleSet> {
    if d == 0 {
        return Err(invalid("sphere dimension must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("sample size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let v: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(&mut rng)).collect();
        // A zero draw has probability zero; redraw rather than fail.
        if let Ok(p) = UnitPoint::new(v) {
            points.push(p);
        }
    }
    Ok(SampleSet {
        dim: d,
        points,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn sampled_points_are_unit() {
        let s = sample_uniform(1, 4, 7).unwrap();
        assert_eq!(s.len(), 4);
        for p in s.points() {
            assert!((p.dot(p).sqrt() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_uniform(3, 100, 42).unwrap();
        let b = sample_uniform(3, 100, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_uniform(3, 100, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn coordinate_means_within_clt_bound() {
        // Each coordinate has variance 1/3 on S^2; 3/sqrt(n) is a loose bound.
        let s = sample_uniform(2, 10_000, 1).unwrap();
        let n = s.len() as f64;
        for k in 0..3 {
            let mean = s.points().iter().map(|p| p.coords()[k]).sum::<f64>() / n;
            assert!(mean.abs() <= 0.05, "coordinate {k} mean {mean}");
            assert!(mean.abs() <= 3.0 / n.sqrt());
        }
        let upper = s.points().iter().filter(|p| p.coords()[2] > 0.0).count() as f64 / n;
        assert!((0.485..=0.515).contains(&upper), "upper fraction {upper}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(sample_uniform(0, 3, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(sample_uniform(2, 0, 1), Err(Error::InvalidArgument(_))));
        assert!(UnitPoint::new(vec![0.0, 0.0]).is_err());
        assert!(UnitPoint::new(vec![1.0]).is_err());
    }

    #[test]
    fn distance_examples() {
        let p = UnitPoint::new(vec![1.0, 0.0, 0.0]).unwrap();
        let q = UnitPoint::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(geodesic_distance(&p, &p).unwrap(), 0.0);
        assert!((geodesic_distance(&p, &p.antipode()).unwrap() - PI).abs() < 1e-15);
        assert!((geodesic_distance(&p, &q).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let r = UnitPoint::from_angle(0.3);
        assert!(geodesic_distance(&p, &r).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = sample_uniform(2, 50, 9).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf, &["test".into()]).unwrap();
        let back = SampleSet::read_csv(&buf[..]).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn csv_rejects_wrong_row_width() {
        let text = "2,1,0\n1.0,0.0\n";
        assert!(matches!(
            SampleSet::read_csv(text.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
