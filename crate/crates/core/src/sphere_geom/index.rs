//! Latitude/longitude bucketing for cap and annulus queries.

use std::f64::consts::{PI, TAU};

use super::point::{arc_from_dot, dot, DotBand, SampleSet, UnitPoint};
use crate::error::{invalid, Result};

const MIN_BAND_HEIGHT: f64 = 0.05;
// Covers the dot-product tolerance near 0 and π, where it is ~sqrt(2e-12) in angle.
const ANGLE_SLACK: f64 = 1e-5;

#[derive(Debug, Clone)]
struct Band {
    polar_lo: f64,
    polar_hi: f64,
    cells: Vec<Vec<u32>>,
}

impl Band {
    fn cell_of(&self, longitude: f64) -> usize {
        let k = self.cells.len();
        ((longitude / TAU * k as f64) as usize).min(k - 1)
    }
}

/// Spatial index over a [`SampleSet`]: points are bucketed by polar angle
/// (from the last coordinate) into bands, then by longitude (from the first
/// two coordinates) into cells. On S^1 there is a single band.
#[derive(Debug, Clone)]
pub struct CapIndex<'a> {
    sample: &'a SampleSet,
    band_height: f64,
    bands: Vec<Band>,
}

fn polar_of(p: &[f64]) -> f64 {
    p[p.len() - 1].clamp(-1.0, 1.0).acos()
}

fn longitude_of(p: &[f64]) -> f64 {
    let a = p[1].atan2(p[0]);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl<'a> CapIndex<'a> {
    /// Builds the index; bands are `max(band_height, 0.05)` radians tall.
    pub fn new(sample: &'a SampleSet, band_height: f64) -> Self {
        let h = if band_height.is_finite() {
            band_height.max(MIN_BAND_HEIGHT)
        } else {
            MIN_BAND_HEIGHT
        };
        let bands = if sample.dim() == 1 {
            let k = ((TAU / h).floor() as usize).max(1);
            vec![Band {
                polar_lo: 0.0,
                polar_hi: PI,
                cells: vec![Vec::new(); k],
            }]
        } else {
            let nb = ((PI / h).ceil() as usize).max(1);
            let bh = PI / nb as f64;
            (0..nb)
                .map(|b| {
                    let lo = b as f64 * bh;
                    let hi = lo + bh;
                    let widest = if lo <= PI / 2.0 && hi >= PI / 2.0 {
                        1.0
                    } else {
                        lo.sin().max(hi.sin())
                    };
                    let k = ((TAU * widest / h).floor() as usize).max(1);
                    Band {
                        polar_lo: lo,
                        polar_hi: hi,
                        cells: vec![Vec::new(); k],
                    }
                })
                .collect()
        };
        let mut index = Self {
            sample,
            band_height: h,
            bands,
        };
        let nb = index.bands.len();
        for (i, p) in sample.points().iter().enumerate() {
            let b = index.band_of(p.coords(), nb);
            let band = &mut index.bands[b];
            let c = band.cell_of(longitude_of(p.coords()));
            band.cells[c].push(i as u32);
        }
        index
    }

    fn band_of(&self, p: &[f64], nb: usize) -> usize {
        if self.sample.dim() == 1 {
            return 0;
        }
        ((polar_of(p) / PI * nb as f64) as usize).min(nb - 1)
    }

    pub fn sample(&self) -> &'a SampleSet {
        self.sample
    }

    pub fn band_height(&self) -> f64 {
        self.band_height
    }

    /// Superset of the points within geodesic distance `r` of `center`.
    fn cap_candidates(&self, center: &[f64], r: f64, out: &mut Vec<usize>) {
        out.clear();
        let r = r + ANGLE_SLACK;
        if r >= PI {
            out.extend(0..self.sample.len());
            return;
        }
        let phi = longitude_of(center);
        if self.sample.dim() == 1 {
            self.collect_longitudes(&self.bands[0], phi, r, out);
            return;
        }
        let theta = polar_of(center);
        let half_width = if self.sample.dim() == 2 && theta - r > 0.0 && theta + r < PI {
            (r.sin() / theta.sin()).min(1.0).asin()
        } else {
            PI
        };
        for band in &self.bands {
            if band.polar_hi < theta - r || band.polar_lo > theta + r {
                continue;
            }
            self.collect_longitudes(band, phi, half_width, out);
        }
    }

    fn collect_longitudes(&self, band: &Band, phi: f64, half_width: f64, out: &mut Vec<usize>) {
        let k = band.cells.len();
        if half_width >= PI || k <= 2 {
            for cell in &band.cells {
                out.extend(cell.iter().map(|&i| i as usize));
            }
            return;
        }
        let cell_width = TAU / k as f64;
        let start = ((phi - half_width) / cell_width).floor() as i64;
        let end = ((phi + half_width) / cell_width).floor() as i64;
        let span = ((end - start + 1) as usize).min(k);
        for s in 0..span {
            let c = (start + s as i64).rem_euclid(k as i64) as usize;
            out.extend(band.cells[c].iter().map(|&i| i as usize));
        }
    }

    /// Indices `i` with `lo ≤ dist(center, X_i) ≤ hi`, sorted ascending.
    pub fn band_query(&self, center: &UnitPoint, lo: f64, hi: f64) -> Result<Vec<usize>> {
        if lo > hi {
            return Err(invalid(format!("empty band: lo {lo} > hi {hi}")));
        }
        if lo < 0.0 || hi > PI + 1e-12 || lo.is_nan() || hi.is_nan() {
            return Err(invalid(format!("band [{lo}, {hi}] outside [0, π]")));
        }
        if center.dim() != self.sample.dim() {
            return Err(invalid("query point dimension does not match the index"));
        }
        let mut out = Vec::new();
        self.band_query_into(center.coords(), lo, hi, &mut out);
        Ok(out)
    }

    pub(crate) fn band_query_into(&self, center: &[f64], lo: f64, hi: f64, out: &mut Vec<usize>) {
        let mut cand = Vec::new();
        // Query whichever cap is smaller: around the center, or around its
        // antipode for the complement of the inner disk.
        if hi <= PI - lo {
            self.cap_candidates(center, hi, &mut cand);
        } else {
            let anti: Vec<f64> = center.iter().map(|c| -c).collect();
            self.cap_candidates(&anti, PI - lo, &mut cand);
        }
        let band = DotBand::new(lo, hi);
        let pts = self.sample.points();
        out.clear();
        out.extend(
            cand.into_iter()
                .filter(|&i| band.contains(dot(center, pts[i].coords()))),
        );
        out.sort_unstable();
    }

    /// Nearest sample point to `q` and its geodesic distance. `None` only for
    /// an empty sample.
    pub fn nearest(&self, q: &[f64]) -> Option<(usize, f64)> {
        if self.sample.is_empty() {
            return None;
        }
        let pts = self.sample.points();
        let mut r = self.band_height;
        let mut cand = Vec::new();
        loop {
            self.cap_candidates(q, r, &mut cand);
            let best = cand
                .iter()
                .map(|&i| (i, dot(q, pts[i].coords())))
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
            if let Some((i, d)) = best {
                let dist = arc_from_dot(d);
                if dist <= r || r >= PI {
                    return Some((i, dist));
                }
            }
            r = (2.0 * r).min(PI);
        }
    }
}

/// Reference O(n) scan used to cross-check [`CapIndex::band_query`].
pub fn band_scan(sample: &SampleSet, center: &UnitPoint, lo: f64, hi: f64) -> Vec<usize> {
    let band = DotBand::new(lo, hi);
    sample
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| band.contains(center.dot(p)))
        .map(|(i, _)| i)
        .collect()
}
