//! Sharp lower bounds for the cosine of the angle between the outward normal of a
//! lambda-convex curve and the radial direction from an interior point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{measure_radial, ClosedCurve};
use crate::error::{domain, hypothesis, Result};
use crate::space_forms::{ModelPoint, SpaceForm, SpaceKind};

/// Inputs of the angle bound: the space, the curvature floor `k0`, its circle radius
/// `R` and the distance `h` from the point to the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleBound {
    pub space: SpaceForm,
    pub k0: f64,
    pub radius: f64,
    pub h: f64,
}

impl AngleBound {
    /// Fails when `k0` admits no closed circle or `h` is outside `[0, R]`.
    pub fn new(space: SpaceForm, k0: f64, h: f64) -> Result<Self> {
        let radius = space.circle_radius_of_curvature(k0)?;
        check_h(h, radius)?;
        Ok(AngleBound { space, k0, radius, h: h.min(radius) })
    }
}

fn check_h(h: f64, radius: f64) -> Result<()> {
    if !(h >= 0.0 && h <= radius + 1e-12) {
        return Err(domain(format!("distance h = {h} outside [0, R = {radius}]")));
    }
    Ok(())
}

/// Sharp lower bound for `cos phi`, attained by circles of curvature `k0`.
///
/// Evaluated as `sqrt(2 cs(R - h/2) sc(h/2) (sc(R) + sc(R - h))) / sc(R)`, the
/// factorization of `1 - sc(R - h)^2 / sc(R)^2` that keeps precision for small `h`.
pub fn cos_phi_lower_bound(b: &AngleBound) -> Result<f64> {
    check_h(b.h, b.radius)?;
    let (sp, r) = (b.space, b.radius);
    let h = b.h.min(r);
    let scr = sp.sc(r);
    let q = 2.0 * sp.cs(r - h / 2.0) * sp.sc(h / 2.0) * (scr + sp.sc(r - h));
    Ok((q.max(0.0).sqrt() / scr).min(1.0))
}

/// The simpler bound `sc(h) / sc(R)`, never above the sharp one.
pub fn cos_phi_weak_bound(b: &AngleBound) -> Result<f64> {
    check_h(b.h, b.radius)?;
    let h = b.h.min(b.radius);
    Ok((b.space.sc(h) / b.space.sc(b.radius)).min(1.0))
}

fn check_radius(space: &SpaceForm, radius: f64) -> Result<()> {
    let ok = radius > 0.0
        && match space.kind() {
            SpaceKind::Sphere => radius <= std::f64::consts::FRAC_PI_2 / space.k1() * (1.0 + 1e-15),
            _ => radius.is_finite(),
        };
    if ok {
        Ok(())
    } else {
        Err(domain(format!("R = {radius} is not a circle radius of the space form")))
    }
}

/// Angle at a point of the circle of radius `R` whose centre is at distance `R - h`
/// from `O`, where the ray from `O` makes angle `alpha` with the ray to the centre.
pub fn circle_exact_angle(space: &SpaceForm, radius: f64, h: f64, alpha: f64) -> Result<f64> {
    check_radius(space, radius)?;
    check_h(h, radius)?;
    if !(0.0..=std::f64::consts::PI).contains(&alpha) {
        return Err(domain(format!("alpha = {alpha} outside [0, pi]")));
    }
    let ratio = space.sc(radius - h.min(radius)) / space.sc(radius);
    Ok((ratio * alpha.sin()).clamp(0.0, 1.0).asin())
}

/// Solution of `g' + mu0 g = 0` with `g(t1) = f_t1`, i.e. `f_t1 sc(t1) / sc(t)`.
pub fn comparison_g(space: &SpaceForm, f_t1: f64, t1: f64, t: f64) -> Result<f64> {
    let limit = match space.kind() {
        SpaceKind::Sphere => std::f64::consts::PI / space.k1(),
        _ => f64::INFINITY,
    };
    for (name, v) in [("t1", t1), ("t", t)] {
        if !(v > 0.0 && v < limit) {
            return Err(domain(format!("{name} = {v} outside the radial range (0, {limit})")));
        }
    }
    Ok(f_t1 * (space.sc(t1) / space.sc(t)))
}

/// Which curvature floor the verifier uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum K0Mode {
    /// The curvature requested from the generator.
    Declared,
    /// The minimum measured curvature.
    #[default]
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRow {
    pub index: usize,
    pub s: f64,
    pub t: f64,
    pub phi: f64,
    pub cos_phi: f64,
    pub bound_cos: f64,
    pub slack: f64,
}

/// Quantiles of the slack over the judged samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlackSummary {
    pub min: f64,
    pub p01: f64,
    pub median: f64,
    pub max: f64,
}

impl SlackSummary {
    pub fn from_values(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let pick = |q: f64| v[((v.len() - 1) as f64 * q).round() as usize];
        SlackSummary { min: v[0], p01: pick(0.01), median: pick(0.5), max: v[v.len() - 1] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub k0_used: f64,
    pub radius: f64,
    pub h: f64,
    pub bound_cos: f64,
    pub rows: Vec<AngleRow>,
    pub min_slack: f64,
    pub slack: SlackSummary,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub excluded_corner_count: usize,
}

/// Samples on each side of a corner left out of angle verification by default.
pub const CORNER_EXCLUSION: usize = 2;

/// Checks `cos phi >= bound(h)` at every sample seen from `o`, skipping
/// [`CORNER_EXCLUSION`] samples around each corner.
pub fn verify_angle_bound(curve: &ClosedCurve, o: &ModelPoint, mode: K0Mode, tolerance: f64) -> Result<AngleReport> {
    verify_angle_bound_with(curve, o, mode, tolerance, CORNER_EXCLUSION)
}

/// [`verify_angle_bound`] with an explicit exclusion band around corners.
pub fn verify_angle_bound_with(
    curve: &ClosedCurve,
    o: &ModelPoint,
    mode: K0Mode,
    tolerance: f64,
    exclusion: usize,
) -> Result<AngleReport> {
    let sp = curve.space;
    let k0 = match mode {
        K0Mode::Measured => curve.kmin,
        K0Mode::Declared => curve.declared_k0.ok_or_else(|| domain("curve has no declared k0"))?,
    };
    let valid = match sp.kind() {
        SpaceKind::Flat => k0 > 0.0,
        SpaceKind::Sphere => k0 >= 0.0,
        SpaceKind::Hyperbolic => k0 > sp.k1(),
    };
    if !valid {
        return Err(hypothesis(format!("k0 = {k0} outside the range of the bound for {:?}", sp.kind())));
    }
    let radius = sp.circle_radius_of_curvature(k0)?;
    let m = measure_radial(curve, o)?;
    if m.h > radius * (1.0 + 1e-6) {
        return Err(domain(format!("measured h = {} exceeds R = {radius}", m.h)));
    }
    let h = m.h.min(radius);
    let bound_cos = cos_phi_lower_bound(&AngleBound { space: sp, k0, radius, h })?;
    let excluded = near_corner(curve, exclusion);
    let rows: Vec<AngleRow> = curve
        .samples
        .par_iter()
        .enumerate()
        .filter(|(i, _)| !excluded[*i])
        .map(|(i, s)| {
            let cos_phi = m.phi[i].cos();
            AngleRow { index: i, s: s.s, t: m.t[i], phi: m.phi[i], cos_phi, bound_cos, slack: cos_phi - bound_cos }
        })
        .collect();
    if rows.is_empty() {
        return Err(domain("no smooth samples to judge"));
    }
    let slacks: Vec<f64> = rows.iter().map(|r| r.slack).collect();
    let slack = SlackSummary::from_values(&slacks);
    Ok(AngleReport {
        k0_used: k0,
        radius,
        h,
        bound_cos,
        excluded_corner_count: curve.len() - rows.len(),
        rows,
        min_slack: slack.min,
        slack,
        tolerance,
        verdict: Verdict::from_bool(slack.min >= -tolerance),
    })
}

fn near_corner(curve: &ClosedCurve, band: usize) -> Vec<bool> {
    let n = curve.len();
    let mut out = vec![false; n];
    for (i, s) in curve.samples.iter().enumerate() {
        if s.corner {
            for d in 0..=band.min(n / 2) {
                out[(i + d) % n] = true;
                out[(i + n - d) % n] = true;
            }
        }
    }
    out
}

/// Residual of the angle ODE `k = mu0(t) cos phi - sigma dphi/ds` at one sample, where
/// `sigma` is the sign of `dt/ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub index: usize,
    pub kappa: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// Evaluates the angle ODE on the arcs where `t` is strictly monotone over a five-sample
/// window free of corners; `dphi/ds` is a centred difference on the nonuniform `s` grid.
pub fn lemma1_residuals(curve: &ClosedCurve, o: &ModelPoint) -> Result<Vec<OdeResidual>> {
    let m = measure_radial(curve, o)?;
    let n = curve.len();
    let sp = curve.space;
    let big_l = curve.total_length;
    let at = |i: usize, d: isize| (i as isize + d).rem_euclid(n as isize) as usize;
    let arc = |a: usize, b: usize| (curve.samples[b].s - curve.samples[a].s).rem_euclid(big_l);
    let rows = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let win: Vec<usize> = (-2..=2).map(|d| at(i, d)).collect();
            if win.iter().any(|&j| curve.samples[j].corner) {
                return None;
            }
            let dts: Vec<f64> = win.windows(2).map(|w| m.t[w[1]] - m.t[w[0]]).collect();
            let up = dts.iter().all(|&d| d > 0.0);
            if !up && !dts.iter().all(|&d| d < 0.0) {
                return None;
            }
            let (a, b) = (win[1], win[3]);
            let (ha, hb) = (arc(a, i), arc(i, b));
            let dphi = (ha * ha * (m.phi[b] - m.phi[i]) + hb * hb * (m.phi[i] - m.phi[a])) / (ha * hb * (ha + hb));
            let sigma = if up { 1.0 } else { -1.0 };
            let predicted = sp.mu0(m.t[i]).ok()? * m.phi[i].cos() - sigma * dphi;
            let kappa = curve.samples[i].kappa;
            Some(OdeResidual { index: i, kappa, predicted, residual: (kappa - predicted).abs() })
        })
        .collect();
    Ok(rows)
}
