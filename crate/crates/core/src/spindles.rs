//! Spindles (lunes) of inradius `r`: circumradius, layer width, and the width-maximizing
//! parameter in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::optimize::golden_section_max;
use crate::space_forms::{SpaceForm, SpaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpindleParams {
    pub space: SpaceForm,
    pub k0: f64,
    pub radius: f64,
    pub r: f64,
    pub rho: f64,
    pub d: f64,
}

impl SpindleParams {
    pub fn new(space: SpaceForm, k0: f64, r: f64) -> Result<Self> {
        let radius = space.circle_radius_of_curvature(k0)?;
        let rho = rho_for(&space, radius, r)?;
        Ok(SpindleParams { space, k0, radius, r, rho, d: (rho - r).max(0.0) })
    }
}

fn rho_for(space: &SpaceForm, radius: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0 && r <= radius) {
        return Err(domain(format!("spindle parameter r = {r} outside [0, {radius}]")));
    }
    if r == radius {
        return Ok(radius);
    }
    space.right_triangle_leg(radius, radius - r)
}

/// Circumradius about the midpoint of the spindle with inradius `r`.
pub fn spindle_rho(space: &SpaceForm, k0: f64, r: f64) -> Result<f64> {
    let radius = space.circle_radius_of_curvature(k0)?;
    rho_for(space, radius, r)
}

/// Layer width `rho(r) - r`.
pub fn spindle_width(space: &SpaceForm, k0: f64, r: f64) -> Result<f64> {
    Ok((spindle_rho(space, k0, r)? - r).max(0.0))
}

/// Distance `a = R - r0` from the disc centre to the optimal spindle's midpoint,
/// solving `cs(a)^2 = cs(R)` in the half-angle form.
fn optimal_offset(space: &SpaceForm, radius: f64) -> f64 {
    let k = space.k1();
    match space.kind() {
        SpaceKind::Flat => radius / std::f64::consts::SQRT_2,
        SpaceKind::Sphere => (std::f64::consts::SQRT_2 * (k * radius / 2.0).sin()).min(1.0).asin() / k,
        SpaceKind::Hyperbolic => (std::f64::consts::SQRT_2 * (k * radius / 2.0).sinh()).asinh() / k,
    }
}

/// Maximizer `r0` and maximum `d0` of the spindle width over `r` in `[0, R]`.
pub fn spindle_optimum(space: &SpaceForm, k0: f64) -> Result<(f64, f64)> {
    let radius = space.circle_radius_of_curvature(k0)?;
    let a = optimal_offset(space, radius);
    Ok(((radius - a).max(0.0), 2.0 * a - radius))
}

/// `d0` through the curvature-only expressions:
/// `(2 arccos(sqrt(k0) / (k0^2 + k1^2)^(1/4)) - arccot(k0/k1)) / k1` on the sphere and
/// `(2 arccosh(sqrt(k0) / (k0^2 - k1^2)^(1/4)) - arccoth(k0/k1)) / k1` in the hyperbolic plane.
pub fn d0_rewritten(space: &SpaceForm, k0: f64) -> Result<f64> {
    let k1 = space.k1();
    match space.kind() {
        SpaceKind::Flat if k0 > 0.0 => Ok((std::f64::consts::SQRT_2 - 1.0) / k0),
        SpaceKind::Sphere if k0 > 0.0 => {
            let c = k0.sqrt() / (k0 * k0 + k1 * k1).powf(0.25);
            Ok((2.0 * c.min(1.0).acos() - k1.atan2(k0)) / k1)
        }
        SpaceKind::Hyperbolic if k0 > k1 => {
            let c = k0.sqrt() / ((k0 - k1) * (k0 + k1)).powf(0.25);
            Ok((2.0 * c.max(1.0).acosh() - (k1 / k0).atanh()) / k1)
        }
        _ => Err(domain(format!("k0 = {k0} outside the range of the rewritten bound"))),
    }
}

/// Golden-section maximization of [`spindle_width`]; an independent check on
/// [`spindle_optimum`].
pub fn spindle_optimum_numeric(space: &SpaceForm, k0: f64) -> Result<(f64, f64)> {
    let radius = space.circle_radius_of_curvature(k0)?;
    let f = |r: f64| spindle_width(space, k0, r.clamp(0.0, radius)).unwrap_or(f64::NEG_INFINITY);
    Ok(golden_section_max(f, 0.0, radius, 1e-12 * radius.max(1.0)))
}
