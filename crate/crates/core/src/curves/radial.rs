//! Distance and angle profile of a curve seen from an interior point.

use serde::{Deserialize, Serialize};

use super::{argmin, ClosedCurve};
use crate::error::{domain, hypothesis, Result};
use crate::space_forms::{ModelPoint, SpaceKind};
use crate::vec3;

/// Per-sample distance `t` to a base point and angle `phi` between the outward normal
/// and the radial direction, with the refined minimum distance `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialMeasurement {
    pub base: ModelPoint,
    pub h: f64,
    pub argmin: usize,
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
}

impl RadialMeasurement {
    pub fn max_t(&self) -> f64 {
        self.t.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_phi(&self) -> f64 {
        self.phi.iter().copied().fold(0.0, f64::max)
    }
}

/// Measures the curve from the interior point `o`.
///
/// Fails when `o` is not strictly inside, and, on the sphere, when the curve leaves the
/// open hemisphere about `o`.
pub fn measure_radial(curve: &ClosedCurve, o: &ModelPoint) -> Result<RadialMeasurement> {
    let space = curve.space;
    space.check_point(o)?;
    let t = curve.distances_from(o);
    if space.kind() == SpaceKind::Sphere {
        let quarter = std::f64::consts::FRAC_PI_2 / space.k1();
        if t.iter().any(|&x| x >= quarter) {
            return Err(hypothesis("curve leaves the open hemisphere about the base point"));
        }
    }
    let w = curve.winding_number(o)?;
    if (w - 1.0).abs() > 0.5 {
        return Err(domain("base point is not inside the curve"));
    }
    let i = argmin(&t);
    let h = curve.refine_distance(o, i, false);
    if !(h > 1e-12 * curve.total_length) {
        return Err(domain("base point lies on the curve"));
    }
    let phi = curve
        .samples
        .iter()
        .map(|s| {
            let back = space.log_map(&s.point, o)?.vec;
            Ok(space.angle_between_vecs(vec3::scale(back, -1.0), s.normal_out))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(RadialMeasurement { base: *o, h, argmin: i, t, phi })
}
