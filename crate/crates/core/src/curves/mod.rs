//! Sampled closed lambda-convex curves in a space form and the per-sample
//! quantities the bounds speak about.

mod generators;
mod io;
mod patch;
mod radial;

pub use generators::{
    make_circle, make_disc_intersection, make_frame_ode_curve, make_lune, make_support_curve, FourierProfile, Harmonic,
    SupportFunction,
};
pub use io::{CurveFile, SampleRecord, CURVE_FORMAT_VERSION};
pub use radial::{measure_radial, RadialMeasurement};

use serde::{Deserialize, Serialize};

use crate::error::{domain, GeomError, Result};
use crate::space_forms::{ModelPoint, ModelTangent, SpaceForm, SpaceKind};
use crate::vec3::{self, Vec3};
use patch::LocalPatch;

/// How a curve was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Circle,
    Lune,
    SupportFunction,
    FrameOde,
    DiscIntersection,
    /// Loaded from a file without generator information.
    External,
}

/// Sampling density control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sampling {
    pub samples: usize,
    /// Upper limit for adaptive doubling.
    pub max_samples: usize,
    /// Two resolutions whose measured `kmin` agree within this are accepted.
    pub consistency: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { samples: 4096, max_samples: 65536, consistency: 1e-7 }
    }
}

impl Sampling {
    /// Exactly `n` samples, no doubling.
    pub fn fixed(n: usize) -> Self {
        Sampling { samples: n, max_samples: n, consistency: 1e-7 }
    }

    pub(crate) fn adaptive<F>(&self, build: F) -> Result<ClosedCurve>
    where
        F: Fn(usize) -> Result<ClosedCurve>,
    {
        let mut n = self.samples.max(16);
        let mut current = build(n)?;
        while n * 2 <= self.max_samples {
            let next = build(n * 2)?;
            if (current.kmin - next.kmin).abs() <= self.consistency {
                return Ok(current);
            }
            current = next;
            n *= 2;
        }
        Ok(current)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub point: ModelPoint,
    /// Arclength from the first sample.
    pub s: f64,
    /// Unit tangent (direction of travel).
    pub tangent: Vec3,
    /// Unit outward normal.
    pub normal_out: Vec3,
    /// Geodesic curvature (measured, or the construction value at corners).
    pub kappa: f64,
    pub corner: bool,
}

impl CurveSample {
    pub fn tangent_vector(&self) -> ModelTangent {
        ModelTangent::new(self.point, self.tangent)
    }

    pub fn normal_vector(&self) -> ModelTangent {
        ModelTangent::new(self.point, self.normal_out)
    }
}

/// A closed, positively oriented, sampled curve. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    pub space: SpaceForm,
    pub samples: Vec<CurveSample>,
    pub total_length: f64,
    /// Minimum measured geodesic curvature over the non-corner samples.
    pub kmin: f64,
    pub provenance: Provenance,
    /// Curvature the generator was asked for, when there is one.
    pub declared_k0: Option<f64>,
}

/// Sample as produced by a generator, before curvature measurement.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RawSample {
    pub point: ModelPoint,
    pub s: f64,
    pub tangent: Vec3,
    pub normal_out: Vec3,
    pub corner: bool,
    /// Curvature known from construction; used where no corner-free window exists.
    pub kappa_hint: Option<f64>,
}

impl ClosedCurve {
    pub(crate) fn assemble(
        space: SpaceForm,
        raw: Vec<RawSample>,
        total_length: f64,
        provenance: Provenance,
        declared_k0: Option<f64>,
    ) -> Result<Self> {
        if raw.len() < 8 {
            return Err(domain("a closed curve needs at least 8 samples"));
        }
        let mut curve = ClosedCurve {
            space,
            samples: raw
                .iter()
                .map(|r| CurveSample {
                    point: r.point,
                    s: r.s,
                    tangent: r.tangent,
                    normal_out: r.normal_out,
                    kappa: f64::NAN,
                    corner: r.corner,
                })
                .collect(),
            total_length,
            kmin: f64::NAN,
            provenance,
            declared_k0,
        };
        let kappas: Vec<f64> = (0..curve.len())
            .map(|i| match curve.smooth_window(i) {
                Some(start) => LocalPatch::new(&curve, start, i).curvature(),
                None => raw[i].kappa_hint.unwrap_or(f64::NAN),
            })
            .collect();
        if let Some(i) = kappas.iter().position(|k| !k.is_finite()) {
            return Err(domain(format!("no curvature available at sample {i}")));
        }
        for (s, k) in curve.samples.iter_mut().zip(&kappas) {
            s.kappa = *k;
        }
        curve.kmin = curve.compute_kmin();
        Ok(curve)
    }

    pub(crate) fn compute_kmin(&self) -> f64 {
        let smooth = self.samples.iter().filter(|s| !s.corner).map(|s| s.kappa);
        let k = smooth.fold(f64::INFINITY, f64::min);
        if k.is_finite() {
            k
        } else {
            self.samples.iter().map(|s| s.kappa).fold(f64::INFINITY, f64::min)
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn corner_count(&self) -> usize {
        self.samples.iter().filter(|s| s.corner).count()
    }

    pub(crate) fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.len() as isize) as usize
    }

    /// Start index of a corner-free 5-sample window containing `i`, preferring the
    /// centred one.
    pub(crate) fn smooth_window(&self, i: usize) -> Option<usize> {
        let n = self.len() as isize;
        for off in [0isize, -1, 1, -2, 2] {
            let start = i as isize - 2 + off;
            if (start..start + 5).all(|j| !self.samples[j.rem_euclid(n) as usize].corner) {
                return Some(self.wrap(start));
            }
        }
        None
    }

    /// Geodesic curvature at sample `i` from a local fit in geodesic normal coordinates.
    pub fn measure_curvature(&self, i: usize) -> Result<f64> {
        if i >= self.len() {
            return Err(domain(format!("sample index {i} out of range")));
        }
        let start = self.wrap(i as isize - 2);
        if (0..5).any(|k| self.samples[(start + k) % self.len()].corner) {
            return Err(GeomError::Corner { index: i });
        }
        Ok(LocalPatch::new(self, start, i).curvature())
    }

    /// Distances from `p` to every sample.
    pub fn distances_from(&self, p: &ModelPoint) -> Vec<f64> {
        self.samples.iter().map(|s| self.space.distance_unchecked(p, &s.point)).collect()
    }

    /// Refines the distance from `p` near sample `i` by a golden-section search along
    /// the local fit. Corners are returned as sampled.
    pub(crate) fn refine_distance(&self, p: &ModelPoint, i: usize, maximize: bool) -> f64 {
        let sampled = self.space.distance_unchecked(p, &self.samples[i].point);
        if self.samples[i].corner {
            return sampled;
        }
        let Some(start) = self.smooth_window(i) else {
            return sampled;
        };
        let patch = LocalPatch::new(self, start, i);
        let (lo, hi) = patch.neighbour_range();
        if hi <= lo {
            return sampled;
        }
        let f = |x: f64| self.space.distance_unchecked(p, &patch.point(x));
        let tol = 1e-12 * (hi - lo).max(1e-300);
        let refined = if maximize {
            crate::optimize::golden_section_max(f, lo, hi, tol).1
        } else {
            crate::optimize::golden_section_min(f, lo, hi, tol).1
        };
        if maximize {
            refined.max(sampled)
        } else {
            refined.min(sampled)
        }
    }

    /// Refined minimum distance from `p` to the curve and the nearest sample index.
    pub fn min_distance(&self, p: &ModelPoint) -> (f64, usize) {
        let d = self.distances_from(p);
        let i = argmin(&d);
        (self.refine_distance(p, i, false), i)
    }

    /// Refined maximum distance from `p` to the curve and the farthest sample index.
    pub fn max_distance(&self, p: &ModelPoint) -> (f64, usize) {
        let d = self.distances_from(p);
        let i = argmax(&d);
        (self.refine_distance(p, i, true), i)
    }

    /// Sample coordinates in the geodesic normal chart at `base`, using `frame`.
    pub(crate) fn chart_polygon(&self, base: &ModelPoint, frame: (Vec3, Vec3)) -> Result<Vec<[f64; 2]>> {
        self.samples
            .iter()
            .map(|s| {
                let v = self.space.log_map(base, &s.point)?.vec;
                Ok([self.space.inner(v, frame.0), self.space.inner(v, frame.1)])
            })
            .collect()
    }

    /// Winding number of the curve around `p`, measured in the normal chart at `p`.
    pub fn winding_number(&self, p: &ModelPoint) -> Result<f64> {
        let frame = self.space.tangent_frame(p);
        let poly = self.chart_polygon(p, frame)?;
        Ok(winding(&poly, [0.0, 0.0]))
    }

    /// True when `p` lies strictly inside the curve.
    pub fn contains(&self, p: &ModelPoint) -> bool {
        if self.space.kind() == SpaceKind::Sphere {
            let far = self.distances_from(p).into_iter().fold(0.0, f64::max);
            if far >= std::f64::consts::PI / self.space.k1() * (1.0 - 1e-9) {
                return false;
            }
        }
        matches!(self.winding_number(p), Ok(w) if (w - 1.0).abs() < 0.5)
    }

    /// Normalized mean of the sample points; an interior point for convex curves.
    pub fn centroid(&self) -> ModelPoint {
        self.space.mean_point(self.samples.iter().map(|s| s.point))
    }

    /// Largest gap between consecutive samples, the closing gap included.
    pub fn max_gap(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let j = (i + 1) % self.len();
                self.space.distance_unchecked(&self.samples[i].point, &self.samples[j].point)
            })
            .fold(0.0, f64::max)
    }

    /// Checks the structural invariants: simple, convex, positively oriented, unit
    /// orthogonal frames, outward normals, `kmin` consistent with the samples.
    pub fn check_invariants(&self) -> Result<()> {
        let sp = self.space;
        for (i, s) in self.samples.iter().enumerate() {
            let t = sp.norm(s.tangent);
            let n = sp.norm(s.normal_out);
            if (t - 1.0).abs() > 1e-9 || (n - 1.0).abs() > 1e-9 {
                return Err(domain(format!("sample {i}: frame not unit")));
            }
            if sp.inner(s.tangent, s.normal_out).abs() > 1e-9 {
                return Err(domain(format!("sample {i}: tangent not orthogonal to normal")));
            }
            // outward normal: the interior (left of the tangent) is opposite to it
            let left = sp.rotate_quarter(&s.point, s.tangent);
            if sp.inner(left, s.normal_out) > -1.0 + 1e-9 {
                return Err(domain(format!("sample {i}: normal is not outward")));
            }
            if !s.corner && s.kappa < self.kmin - 1e-9 {
                return Err(domain(format!("sample {i}: kappa below kmin")));
            }
        }
        let c = self.centroid();
        let frame = sp.tangent_frame(&c);
        let poly = self.chart_polygon(&c, frame)?;
        let n = poly.len();
        let mut area = 0.0;
        for i in 0..n {
            let (a, b, d) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
            area += a[0] * b[1] - a[1] * b[0];
            let turn = (b[0] - a[0]) * (d[1] - b[1]) - (b[1] - a[1]) * (d[0] - b[0]);
            if turn < -1e-13 {
                return Err(domain(format!("sample {i}: polygon turns clockwise")));
            }
        }
        if area <= 0.0 {
            return Err(domain("curve is negatively oriented"));
        }
        let w = winding(&poly, poly_mean(&poly));
        if (w - 1.0).abs() > 1e-6 {
            return Err(domain(format!("curve winds {w} times: not simple")));
        }
        Ok(())
    }
}

pub(crate) fn argmin(v: &[f64]) -> usize {
    (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(0)
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(0)
}

fn poly_mean(poly: &[[f64; 2]]) -> [f64; 2] {
    let n = poly.len() as f64;
    let (x, y) = poly.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p[0], acc.1 + p[1]));
    [x / n, y / n]
}

/// Winding number of a closed polygon around `q`.
pub(crate) fn winding(poly: &[[f64; 2]], q: [f64; 2]) -> f64 {
    let n = poly.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = [poly[i][0] - q[0], poly[i][1] - q[1]];
        let b = [poly[(i + 1) % n][0] - q[0], poly[(i + 1) % n][1] - q[1]];
        total += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    total / (2.0 * std::f64::consts::PI)
}

/// Unit outward normal at `p` of a circle centred at `center`.
pub(crate) fn radial_out(space: &SpaceForm, p: &ModelPoint, center: &ModelPoint) -> Result<Vec3> {
    let v = space.log_map(p, center)?.vec;
    Ok(vec3::scale(v, -1.0 / space.norm(v)))
}

#[cfg(test)]
mod tests;
