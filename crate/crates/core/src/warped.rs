//! Rotationally symmetric metrics `dt^2 + f(t)^2 dtheta^2` about a pole, radial graphs
//! `t = rho(theta)` in them, and the comparison checks against the constant-curvature
//! models.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{cos_phi_lower_bound, AngleBound, AngleReport, AngleRow, SlackSummary, Verdict};
use crate::curves::Harmonic;
use crate::error::{domain, hypothesis, GeomError, Result};
use crate::layer::{K0_MEASUREMENT_TOLERANCE, LAYER_TOLERANCE};
use crate::optimize::{golden_section_max, golden_section_min};
use crate::space_forms::SpaceForm;
use crate::spindles::spindle_optimum;

/// Guard added to measured curvature bands before checking hypotheses.
pub const BAND_GUARD: f64 = 1e-9;
pub const WARPED_FORMAT_VERSION: u32 = 1;

const BAND_SAMPLES: usize = 10_000;
const COMPARISON_RADII: usize = 1000;

/// Built-in warping functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WarpFamily {
    /// `f = t`
    Flat,
    /// `f = sinh(k1 t) / k1`
    Hyperbolic { k1: f64 },
    /// `f = sin(k1 t) / k1`
    Spherical { k1: f64 },
    /// `f = t + epsilon t^3`
    Cubic { epsilon: f64 },
    /// `f = sin(c t) (1 + epsilon sin^2(c t)) / c` with `c = 1/sqrt(1 - 6 epsilon)`,
    /// so that the curvature starts at 1 on the pole.
    PerturbedSine { epsilon: f64 },
}

impl WarpFamily {
    fn sine_rate(eps: f64) -> f64 {
        1.0 / (1.0 - 6.0 * eps).sqrt()
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            WarpFamily::Flat => true,
            WarpFamily::Hyperbolic { k1 } | WarpFamily::Spherical { k1 } => k1 > 0.0 && k1.is_finite(),
            WarpFamily::Cubic { epsilon } => epsilon.is_finite(),
            WarpFamily::PerturbedSine { epsilon } => (0.0..1.0 / 6.0).contains(&epsilon),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid warp parameters {self:?}")))
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        match *self {
            WarpFamily::Flat => t,
            WarpFamily::Hyperbolic { k1 } => (k1 * t).sinh() / k1,
            WarpFamily::Spherical { k1 } => (k1 * t).sin() / k1,
            WarpFamily::Cubic { epsilon } => t + epsilon * t * t * t,
            WarpFamily::PerturbedSine { epsilon } => {
                let c = Self::sine_rate(epsilon);
                let s = (c * t).sin();
                s * (1.0 + epsilon * s * s) / c
            }
        }
    }

    pub fn df(&self, t: f64) -> f64 {
        match *self {
            WarpFamily::Flat => 1.0,
            WarpFamily::Hyperbolic { k1 } => (k1 * t).cosh(),
            WarpFamily::Spherical { k1 } => (k1 * t).cos(),
            WarpFamily::Cubic { epsilon } => 1.0 + 3.0 * epsilon * t * t,
            WarpFamily::PerturbedSine { epsilon } => {
                let c = Self::sine_rate(epsilon);
                let s = (c * t).sin();
                (c * t).cos() * (1.0 + 3.0 * epsilon * s * s)
            }
        }
    }

    pub fn d2f(&self, t: f64) -> f64 {
        match *self {
            WarpFamily::Flat => 0.0,
            WarpFamily::Hyperbolic { k1 } => k1 * (k1 * t).sinh(),
            WarpFamily::Spherical { k1 } => -k1 * (k1 * t).sin(),
            WarpFamily::Cubic { epsilon } => 6.0 * epsilon * t,
            WarpFamily::PerturbedSine { epsilon } => {
                let c = Self::sine_rate(epsilon);
                let (s, co) = (c * t).sin_cos();
                c * s * (-1.0 + epsilon * (6.0 * co * co - 3.0 * s * s))
            }
        }
    }

    /// Gaussian curvature `-f''/f`, in closed form (continuous at the pole).
    pub fn curvature(&self, t: f64) -> f64 {
        match *self {
            WarpFamily::Flat => 0.0,
            WarpFamily::Hyperbolic { k1 } => -k1 * k1,
            WarpFamily::Spherical { k1 } => k1 * k1,
            WarpFamily::Cubic { epsilon } => -6.0 * epsilon / (1.0 + epsilon * t * t),
            WarpFamily::PerturbedSine { epsilon } => {
                let c = Self::sine_rate(epsilon);
                let s2 = (c * t).sin().powi(2);
                c * c * (1.0 - 6.0 * epsilon + 9.0 * epsilon * s2) / (1.0 + epsilon * s2)
            }
        }
    }
}

/// A warp family on `(0, t_max]`, optionally with a band its curvature must respect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpSpec {
    #[serde(flatten)]
    pub family: WarpFamily,
    pub t_max: f64,
    #[serde(default)]
    pub declared_band: Option<[f64; 2]>,
}

/// Measured range of the Gaussian curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBand {
    pub k_lo: f64,
    pub k_hi: f64,
}

/// Constant-curvature model the metric is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Comparison {
    /// `K = 0` within the guard.
    Flat,
    /// `0 >= K >= -k1^2`.
    Hyperbolic { k1: f64 },
    /// `k2^2 >= K >= k1^2`, `k1 > 0`.
    Spherical { k1: f64, k2: f64 },
}

impl Comparison {
    pub fn space(&self) -> SpaceForm {
        match *self {
            Comparison::Flat => SpaceForm::flat(),
            Comparison::Hyperbolic { k1 } => SpaceForm::hyperbolic(k1).expect("k1 > 0"),
            Comparison::Spherical { k1, .. } => SpaceForm::sphere(k1).expect("k1 > 0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpedMetric {
    pub spec: WarpSpec,
    pub band: CurvatureBand,
    /// `None` when the band changes sign.
    pub comparison: Option<Comparison>,
}

/// Builds a metric and measures its curvature band on a dense radius grid.
pub fn make_warped(spec: WarpSpec) -> Result<WarpedMetric> {
    spec.family.validate()?;
    if !(spec.t_max > 0.0 && spec.t_max.is_finite()) {
        return Err(domain(format!("t_max = {} must be positive", spec.t_max)));
    }
    let grid: Vec<f64> = (0..=BAND_SAMPLES).map(|i| spec.t_max * i as f64 / BAND_SAMPLES as f64).collect();
    if let Some(&t) = grid[1..].iter().find(|&&t| !(spec.family.f(t) > 0.0)) {
        return Err(GeomError::Band { t, reason: "warping function is not positive".into() });
    }
    let ks: Vec<f64> = grid.iter().map(|&t| spec.family.curvature(t)).collect();
    if let Some([lo, hi]) = spec.declared_band {
        if let Some(i) = ks.iter().position(|&k| k < lo - BAND_GUARD || k > hi + BAND_GUARD) {
            return Err(GeomError::Band {
                t: grid[i],
                reason: format!("curvature {} outside the declared band [{lo}, {hi}]", ks[i]),
            });
        }
    }
    let band = CurvatureBand {
        k_lo: ks.iter().copied().fold(f64::INFINITY, f64::min),
        k_hi: ks.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    let comparison = if band.k_lo >= -BAND_GUARD && band.k_hi <= BAND_GUARD {
        Some(Comparison::Flat)
    } else if band.k_hi <= BAND_GUARD {
        Some(Comparison::Hyperbolic { k1: (-band.k_lo).sqrt() })
    } else if band.k_lo > BAND_GUARD {
        Some(Comparison::Spherical { k1: band.k_lo.sqrt(), k2: band.k_hi.sqrt() })
    } else {
        None
    };
    Ok(WarpedMetric { spec, band, comparison })
}

impl WarpedMetric {
    pub fn f(&self, t: f64) -> f64 {
        self.spec.family.f(t)
    }

    pub fn df(&self, t: f64) -> f64 {
        self.spec.family.df(t)
    }

    pub fn curvature(&self, t: f64) -> f64 {
        self.spec.family.curvature(t)
    }

    fn check_radius(&self, t: f64) -> Result<()> {
        if t > 0.0 && t <= self.spec.t_max {
            Ok(())
        } else {
            Err(domain(format!("radius {t} outside (0, {}]", self.spec.t_max)))
        }
    }

    pub fn require_comparison(&self) -> Result<Comparison> {
        self.comparison.ok_or_else(|| {
            hypothesis(format!(
                "curvature band [{}, {}] changes sign: no comparison model applies",
                self.band.k_lo, self.band.k_hi
            ))
        })
    }

    /// Largest deviation of the second-difference curvature `-f''/f` from the closed
    /// form over `[0.05 t_max, t_max]`.
    pub fn finite_difference_curvature_error(&self) -> f64 {
        let h = 2e-4 * self.spec.t_max.max(1.0);
        (0..=1000)
            .map(|i| {
                let t = self.spec.t_max * (0.05 + 0.95 * i as f64 / 1000.0);
                let (a, b) = (t - h, (t + h).min(self.spec.t_max + h));
                let fpp = (self.f(b) - 2.0 * self.f(t) + self.f(a)) / (h * h);
                (-fpp / self.f(t) - self.curvature(t)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Geodesic curvature `f'(t)/f(t)` of the circle of radius `t` about the pole.
pub fn circle_normal_curvature(metric: &WarpedMetric, t: f64) -> Result<f64> {
    metric.check_radius(t)?;
    Ok(metric.df(t) / metric.f(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuRow {
    pub t: f64,
    pub mu_n: f64,
    pub mu0: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuComparisonReport {
    pub comparison: Comparison,
    pub rows: Vec<MuRow>,
    pub min_slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Checks `mu_n(t) <= mu0(t)` on 1000 radii against the comparison model.
pub fn verify_mu_comparison(metric: &WarpedMetric, tolerance: f64) -> Result<MuComparisonReport> {
    let comparison = metric.require_comparison()?;
    let space = comparison.space();
    if let Comparison::Spherical { k1, .. } = comparison {
        if metric.spec.t_max >= PI / k1 {
            return Err(hypothesis("radii reach the conjugate radius pi/k1 of the comparison sphere"));
        }
    }
    let rows: Vec<MuRow> = (1..=COMPARISON_RADII)
        .into_par_iter()
        .map(|i| {
            let t = metric.spec.t_max * i as f64 / COMPARISON_RADII as f64;
            let mu_n = metric.df(t) / metric.f(t);
            let mu0 = space.mu0(t).unwrap_or(f64::NAN);
            MuRow { t, mu_n, mu0, slack: mu0 - mu_n }
        })
        .collect();
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok(MuComparisonReport {
        comparison,
        rows,
        min_slack,
        tolerance,
        verdict: Verdict::from_bool(min_slack >= -tolerance),
    })
}

/// `rho(theta) = mean + sum a_n cos(n theta) + b_n sin(n theta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub mean: f64,
    #[serde(default)]
    pub harmonics: Vec<Harmonic>,
}

impl RadialProfile {
    pub fn eval(&self, theta: f64) -> f64 {
        self.mean
            + self
                .harmonics
                .iter()
                .map(|c| c.a * (c.n as f64 * theta).cos() + c.b * (c.n as f64 * theta).sin())
                .sum::<f64>()
    }

    /// First and second derivatives in `theta`.
    pub fn derivatives(&self, theta: f64) -> (f64, f64) {
        self.harmonics.iter().fold((0.0, 0.0), |(d1, d2), c| {
            let n = c.n as f64;
            let (s, co) = (n * theta).sin_cos();
            (d1 + n * (c.b * co - c.a * s), d2 - n * n * (c.a * co + c.b * s))
        })
    }

    /// Newton polish of a critical point; the golden-section estimate is only good to
    /// about `sqrt(eps)` in position.
    fn polish_critical(&self, mut x: f64, lo: f64, hi: f64) -> f64 {
        for _ in 0..20 {
            let (d1, d2) = self.derivatives(x);
            if d2 == 0.0 {
                break;
            }
            let next = x - d1 / d2;
            if !(lo..=hi).contains(&next) {
                break;
            }
            let done = (next - x).abs() <= 1e-15 * x.abs().max(1.0);
            x = next;
            if done {
                break;
            }
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpedSample {
    pub theta: f64,
    pub t: f64,
    pub dt: f64,
    pub d2t: f64,
    /// Arclength from `theta = 0`.
    pub s: f64,
    pub kappa: f64,
    pub phi: f64,
}

/// Closed radial graph `t = rho(theta)` sampled uniformly in `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedCurve {
    pub metric: WarpedMetric,
    pub profile: Option<RadialProfile>,
    pub samples: Vec<WarpedSample>,
    pub total_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpedPoint {
    pub theta: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpedCurveFile {
    pub version: u32,
    pub metric: WarpSpec,
    #[serde(default)]
    pub profile: Option<RadialProfile>,
    pub samples: Vec<WarpedPoint>,
}

pub fn make_warped_curve(metric: &WarpedMetric, profile: &RadialProfile, n: usize) -> Result<WarpedCurve> {
    let radii = (0..n).map(|i| profile.eval(TAU * i as f64 / n as f64)).collect();
    WarpedCurve::from_radii(metric, radii, Some(profile.clone()))
}

impl WarpedCurve {
    /// Derives curvature and angle from radii at `theta_i = 2 pi i / n` with centred
    /// five-point differences.
    pub fn from_radii(metric: &WarpedMetric, radii: Vec<f64>, profile: Option<RadialProfile>) -> Result<Self> {
        let n = radii.len();
        if n < 16 {
            return Err(domain("a warped curve needs at least 16 samples"));
        }
        for &t in &radii {
            metric.check_radius(t)?;
        }
        let h = TAU / n as f64;
        let at = |i: isize| radii[i.rem_euclid(n as isize) as usize];
        let mut samples: Vec<WarpedSample> = (0..n)
            .map(|i| {
                let i = i as isize;
                let (m2, m1, c, p1, p2) = (at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2));
                let dt = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
                let d2t = (16.0 * ((m1 - c) + (p1 - c)) - ((m2 - c) + (p2 - c))) / (12.0 * h * h);
                let (f, fp) = (metric.f(c), metric.df(c));
                let q = f * f + dt * dt;
                let kappa = (f * f * fp + 2.0 * fp * dt * dt - f * d2t) / q.powf(1.5);
                let phi = dt.abs().atan2(f);
                WarpedSample { theta: h * i as f64, t: c, dt, d2t, s: 0.0, kappa, phi }
            })
            .collect();
        let speed: Vec<f64> = samples.iter().map(|s| metric.f(s.t).hypot(s.dt)).collect();
        let mut s = 0.0;
        for i in 0..n {
            samples[i].s = s;
            s += 0.5 * h * (speed[i] + speed[(i + 1) % n]);
        }
        Ok(WarpedCurve { metric: *metric, profile, samples, total_length: s })
    }

    pub fn kmin(&self) -> f64 {
        self.samples.iter().map(|s| s.kappa).fold(f64::INFINITY, f64::min)
    }

    /// Direction and value of the extremum of the radius near sample `i`.
    fn refine_at(&self, i: usize, maximize: bool) -> (f64, f64) {
        let n = self.samples.len();
        let h = TAU / n as f64;
        let (th, sampled) = (self.samples[i].theta, self.samples[i].t);
        match &self.profile {
            Some(p) => {
                let f = |x: f64| p.eval(x);
                let (x, v) = if maximize {
                    golden_section_max(f, th - h, th + h, 1e-13)
                } else {
                    golden_section_min(f, th - h, th + h, 1e-13)
                };
                let polished = p.polish_critical(x, th - h, th + h);
                let pv = p.eval(polished);
                let slop = 4.0 * f64::EPSILON * v.abs();
                let (x, v) =
                    if (maximize && pv >= v - slop) || (!maximize && pv <= v + slop) { (polished, pv) } else { (x, v) };
                if (maximize && v >= sampled) || (!maximize && v <= sampled) {
                    (x, v)
                } else {
                    (th, sampled)
                }
            }
            None => {
                // vertex of the parabola through three samples
                let (a, c) = (self.samples[(i + n - 1) % n].t, self.samples[(i + 1) % n].t);
                let den = a - 2.0 * sampled + c;
                if den.abs() > 0.0 {
                    let off = (0.5 * (a - c) / den).clamp(-1.0, 1.0);
                    (th + off * h, sampled - (c - a).powi(2) / (8.0 * den))
                } else {
                    (th, sampled)
                }
            }
        }
    }

    fn extreme(&self, maximize: bool) -> f64 {
        let sign = if maximize { -1.0 } else { 1.0 };
        let i = (0..self.samples.len())
            .min_by(|&a, &b| (sign * self.samples[a].t).total_cmp(&(sign * self.samples[b].t)))
            .unwrap_or(0);
        self.refine_at(i, maximize).1
    }

    /// Refined distance from the pole to the curve.
    pub fn min_radius(&self) -> f64 {
        self.extreme(false)
    }

    /// Refined largest distance from the pole.
    pub fn max_radius(&self) -> f64 {
        self.extreme(true)
    }

    /// Largest angular gap between the directions where the curve is closest to the
    /// pole. At most `pi` means the nearest points are not in an open half-plane, so
    /// the pole is the centre of the inscribed circle.
    pub fn contact_gap(&self, tol: f64) -> f64 {
        let r = self.min_radius();
        let n = self.samples.len();
        let mut dirs: Vec<f64> = (0..n)
            .filter(|&i| {
                let t = self.samples[i].t;
                t <= self.samples[(i + 1) % n].t && t <= self.samples[(i + n - 1) % n].t
            })
            .map(|i| self.refine_at(i, false))
            .filter(|&(_, v)| v <= r + tol)
            .map(|(th, _)| th.rem_euclid(TAU))
            .collect();
        if dirs.is_empty() {
            return TAU;
        }
        dirs.sort_by(f64::total_cmp);
        let mut gap: f64 = TAU - (dirs[dirs.len() - 1] - dirs[0]);
        for w in dirs.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        gap
    }

    pub fn to_file(&self) -> WarpedCurveFile {
        WarpedCurveFile {
            version: WARPED_FORMAT_VERSION,
            metric: self.metric.spec,
            profile: self.profile.clone(),
            samples: self.samples.iter().map(|s| WarpedPoint { theta: s.theta, t: s.t }).collect(),
        }
    }

    pub fn from_file(file: &WarpedCurveFile) -> Result<Self> {
        if file.version != WARPED_FORMAT_VERSION {
            return Err(GeomError::Parse(format!("unsupported warped curve version {}", file.version)));
        }
        let metric = make_warped(file.metric)?;
        let n = file.samples.len();
        for (i, p) in file.samples.iter().enumerate() {
            if (p.theta - TAU * i as f64 / n as f64).abs() > 1e-9 {
                return Err(GeomError::Parse(format!("sample {i}: theta must be 2 pi i / n")));
            }
        }
        Self::from_radii(&metric, file.samples.iter().map(|p| p.t).collect(), file.profile.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpedWidth {
    pub r: f64,
    pub rho1: f64,
    pub d: f64,
    pub k0_used: f64,
    pub d0: f64,
    pub margin: f64,
    pub contact_gap: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpedTheoremReport {
    pub comparison: Comparison,
    pub kmin: f64,
    pub angle: AngleReport,
    pub width: Option<WarpedWidth>,
    /// Why the width was not judged, when it was not.
    pub width_note: Option<String>,
    pub verdict: Verdict,
}

/// Angle bound of the comparison model (hyperbolic for a nonpositive band, spherical
/// for a positive one) and the spindle width bound, both about the pole.
pub fn verify_theorem2_on_warped(curve: &WarpedCurve, tolerance: f64) -> Result<WarpedTheoremReport> {
    let metric = &curve.metric;
    let comparison = metric.require_comparison()?;
    let kmin = curve.kmin();
    let (r, rho1) = (curve.min_radius(), curve.max_radius());
    match comparison {
        Comparison::Flat => {
            if !(kmin > 0.0) {
                return Err(hypothesis(format!("kmin = {kmin} must be positive")));
            }
        }
        Comparison::Hyperbolic { .. } => {
            let k1 = (-metric.band.k_lo + BAND_GUARD).sqrt();
            if !(kmin > k1) {
                return Err(hypothesis(format!("kmin = {kmin} must exceed k1 = {k1}")));
            }
        }
        Comparison::Spherical { .. } => {
            let k2 = (metric.band.k_hi + BAND_GUARD).sqrt();
            if !(kmin >= 0.0) {
                return Err(hypothesis(format!("kmin = {kmin} must be nonnegative")));
            }
            if !(rho1 <= PI / (2.0 * k2)) {
                return Err(hypothesis(format!("curve leaves the ball of radius pi/(2 k2) = {}", PI / (2.0 * k2))));
            }
        }
    }
    let space = comparison.space();

    let radius = space.circle_radius_of_curvature(kmin)?;
    let h = r.min(radius);
    let bound_cos = cos_phi_lower_bound(&AngleBound { space, k0: kmin, radius, h })?;
    let rows: Vec<AngleRow> = curve
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let cos_phi = s.phi.cos();
            AngleRow { index: i, s: s.s, t: s.t, phi: s.phi, cos_phi, bound_cos, slack: cos_phi - bound_cos }
        })
        .collect();
    let slacks: Vec<f64> = rows.iter().map(|r| r.slack).collect();
    let slack = SlackSummary::from_values(&slacks);
    let angle = AngleReport {
        k0_used: kmin,
        radius,
        h,
        bound_cos,
        rows,
        min_slack: slack.min,
        slack,
        tolerance,
        verdict: Verdict::from_bool(slack.min >= -tolerance),
        excluded_corner_count: 0,
    };

    let gap = curve.contact_gap(1e-9);
    let k0_used = kmin - K0_MEASUREMENT_TOLERANCE;
    let (width, width_note) = if gap > PI + 1e-9 {
        (None, Some(format!("nearest points leave an angular gap {gap} > pi: the pole is not the incenter")))
    } else if let Comparison::Spherical { .. } = comparison {
        let k2 = (metric.band.k_hi + BAND_GUARD).sqrt();
        if !(k0_used > 0.0) {
            return Err(hypothesis("width bound needs k0 > 0"));
        }
        if !(rho1 < PI / k2) {
            return Err(hypothesis("curve leaves the ball of radius pi/k2 about the incenter"));
        }
        (Some(width_check(&space, k0_used, r, rho1, gap)?), None)
    } else {
        (Some(width_check(&space, k0_used, r, rho1, gap)?), None)
    };
    let verdict = Verdict::from_bool(angle.verdict.passed() && width.is_none_or(|w| w.verdict.passed()));
    Ok(WarpedTheoremReport { comparison, kmin, angle, width, width_note, verdict })
}

fn width_check(space: &SpaceForm, k0_used: f64, r: f64, rho1: f64, gap: f64) -> Result<WarpedWidth> {
    let (_, d0) = spindle_optimum(space, k0_used)
        .map_err(|_| hypothesis(format!("k0 = {k0_used} is outside the range of the width bound")))?;
    let d = rho1 - r;
    let margin = d0 - d;
    Ok(WarpedWidth {
        r,
        rho1,
        d,
        k0_used,
        d0,
        margin,
        contact_gap: gap,
        verdict: Verdict::from_bool(margin >= -LAYER_TOLERANCE),
    })
}
