//! Exact geometry of the three two-dimensional space forms.
//!
//! Coordinate models:
//! * `Flat`: the plane, stored as `(x, y, 0)`.
//! * `Sphere`: the round sphere `|x|^2 = 1/k1^2` in Euclidean 3-space.
//! * `Hyperbolic`: the upper sheet `<x,x> = -1/k1^2`, `x0 > 0`, of the hyperboloid in
//!   Minkowski 3-space with `<x,y> = -x0 y0 + x1 y1 + x2 y2`.
//!
//! Every operation is a pure function of immutable values. Points produced by
//! [`SpaceForm::exp_map`] are projected back onto the model surface.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, GeomError, Result};
use crate::vec3::{self, Vec3};

/// Relative tolerance accepted on the model constraint of an input point.
pub const MODEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Flat,
    Sphere,
    Hyperbolic,
}

/// A two-dimensional space form: its model and the curvature magnitude `k1`.
///
/// The sectional curvature is `+k1^2`, `-k1^2` or `0`; it is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpaceForm", into = "RawSpaceForm")]
pub struct SpaceForm {
    kind: SpaceKind,
    k1: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSpaceForm {
    kind: SpaceKind,
    #[serde(default)]
    k1: f64,
}

impl TryFrom<RawSpaceForm> for SpaceForm {
    type Error = GeomError;
    fn try_from(raw: RawSpaceForm) -> Result<Self> {
        SpaceForm::new(raw.kind, raw.k1)
    }
}

impl From<SpaceForm> for RawSpaceForm {
    fn from(s: SpaceForm) -> Self {
        RawSpaceForm { kind: s.kind, k1: s.k1 }
    }
}

/// A point of the coordinate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub coords: Vec3,
}

impl ModelPoint {
    pub fn new(coords: Vec3) -> Self {
        ModelPoint { coords }
    }

    pub fn planar(x: f64, y: f64) -> Self {
        ModelPoint { coords: [x, y, 0.0] }
    }
}

/// A tangent vector attached to a base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelTangent {
    pub base: ModelPoint,
    pub vec: Vec3,
}

impl ModelTangent {
    pub fn new(base: ModelPoint, vec: Vec3) -> Self {
        ModelTangent { base, vec }
    }
}

/// A geodesic circle: centre and radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub center: ModelPoint,
    pub radius: f64,
}

impl SpaceForm {
    pub fn new(kind: SpaceKind, k1: f64) -> Result<Self> {
        match kind {
            SpaceKind::Flat if k1 != 0.0 => Err(domain(format!("flat space requires k1 = 0, got {k1}"))),
            SpaceKind::Sphere | SpaceKind::Hyperbolic if !(k1 > 0.0 && k1.is_finite()) => {
                Err(domain(format!("curved space form requires finite k1 > 0, got {k1}")))
            }
            _ => Ok(SpaceForm { kind, k1 }),
        }
    }

    pub fn flat() -> Self {
        SpaceForm { kind: SpaceKind::Flat, k1: 0.0 }
    }

    pub fn sphere(k1: f64) -> Result<Self> {
        Self::new(SpaceKind::Sphere, k1)
    }

    pub fn hyperbolic(k1: f64) -> Result<Self> {
        Self::new(SpaceKind::Hyperbolic, k1)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    /// Sectional curvature `c`.
    pub fn curvature(&self) -> f64 {
        match self.kind {
            SpaceKind::Flat => 0.0,
            SpaceKind::Sphere => self.k1 * self.k1,
            SpaceKind::Hyperbolic => -self.k1 * self.k1,
        }
    }

    /// Model radius `1/k1` (infinite for the plane).
    fn model_radius(&self) -> f64 {
        1.0 / self.k1
    }

    /// Generalized sine: `t`, `sin(k1 t)/k1`, `sinh(k1 t)/k1`.
    pub fn sc(&self, t: f64) -> f64 {
        match self.kind {
            SpaceKind::Flat => t,
            SpaceKind::Sphere => (self.k1 * t).sin() / self.k1,
            SpaceKind::Hyperbolic => (self.k1 * t).sinh() / self.k1,
        }
    }

    /// Generalized cosine, the derivative of [`sc`](Self::sc).
    pub fn cs(&self, t: f64) -> f64 {
        match self.kind {
            SpaceKind::Flat => 1.0,
            SpaceKind::Sphere => (self.k1 * t).cos(),
            SpaceKind::Hyperbolic => (self.k1 * t).cosh(),
        }
    }

    /// Ambient bilinear form: Euclidean, or Minkowski for the hyperboloid.
    pub fn inner(&self, a: Vec3, b: Vec3) -> f64 {
        match self.kind {
            SpaceKind::Hyperbolic => -a[0] * b[0] + a[1] * b[1] + a[2] * b[2],
            _ => vec3::dot(a, b),
        }
    }

    /// Length of a tangent vector in the Riemannian metric.
    pub fn norm(&self, v: Vec3) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    /// The distinguished origin: `(0,0)`, the north pole, or the hyperboloid vertex.
    pub fn origin(&self) -> ModelPoint {
        match self.kind {
            SpaceKind::Flat => ModelPoint::planar(0.0, 0.0),
            SpaceKind::Sphere => ModelPoint::new([0.0, 0.0, self.model_radius()]),
            SpaceKind::Hyperbolic => ModelPoint::new([self.model_radius(), 0.0, 0.0]),
        }
    }

    /// Checks the model constraint of `p` to [`MODEL_TOLERANCE`].
    pub fn check_point(&self, p: &ModelPoint) -> Result<()> {
        let c = p.coords;
        if !c.iter().all(|x| x.is_finite()) {
            return Err(GeomError::ConstraintViolation(format!("non-finite point {c:?}")));
        }
        let ok = match self.kind {
            SpaceKind::Flat => c[2] == 0.0,
            SpaceKind::Sphere => {
                let a2 = self.model_radius().powi(2);
                ((vec3::dot(c, c) - a2) / a2).abs() <= MODEL_TOLERANCE
            }
            SpaceKind::Hyperbolic => {
                let a2 = self.model_radius().powi(2);
                c[0] > 0.0 && ((self.inner(c, c) + a2) / a2).abs() <= MODEL_TOLERANCE
            }
        };
        if ok {
            Ok(())
        } else {
            Err(GeomError::ConstraintViolation(format!("point {c:?} is off the {:?} model", self.kind)))
        }
    }

    /// Rescales an ambient vector back onto the model surface.
    pub fn project(&self, c: Vec3) -> ModelPoint {
        match self.kind {
            SpaceKind::Flat => ModelPoint::planar(c[0], c[1]),
            SpaceKind::Sphere => ModelPoint::new(vec3::scale(c, self.model_radius() / vec3::norm(c))),
            SpaceKind::Hyperbolic => {
                let q = -self.inner(c, c);
                if q > 0.0 {
                    let s = self.model_radius() / q.sqrt();
                    ModelPoint::new(vec3::scale(c, if c[0] < 0.0 { -s } else { s }))
                } else {
                    // not timelike: lift the spatial part onto the sheet
                    let x0 = (self.model_radius().powi(2) + c[1] * c[1] + c[2] * c[2]).sqrt();
                    ModelPoint::new([x0, c[1], c[2]])
                }
            }
        }
    }

    /// Orthogonal projection of an ambient vector onto the tangent plane at `p`.
    pub fn project_tangent(&self, p: &ModelPoint, v: Vec3) -> Vec3 {
        match self.kind {
            SpaceKind::Flat => [v[0], v[1], 0.0],
            _ => {
                let x = p.coords;
                let coef = self.inner(v, x) / self.inner(x, x);
                vec3::axpy(v, -coef, x)
            }
        }
    }

    /// Rotation by +pi/2 in the oriented tangent plane at `p`.
    pub fn rotate_quarter(&self, p: &ModelPoint, v: Vec3) -> Vec3 {
        match self.kind {
            SpaceKind::Flat => [-v[1], v[0], 0.0],
            SpaceKind::Sphere => vec3::cross(vec3::scale(p.coords, self.k1), v),
            SpaceKind::Hyperbolic => {
                let w = vec3::cross(vec3::scale(p.coords, self.k1), v);
                [-w[0], w[1], w[2]]
            }
        }
    }

    /// A positively oriented orthonormal frame of the tangent plane at `p`.
    pub fn tangent_frame(&self, p: &ModelPoint) -> (Vec3, Vec3) {
        let seed = match self.kind {
            SpaceKind::Flat => [1.0, 0.0, 0.0],
            SpaceKind::Hyperbolic => [0.0, 1.0, 0.0],
            SpaceKind::Sphere => {
                let c = p.coords;
                let i = (0..3).min_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs())).unwrap_or(0);
                let mut e = [0.0; 3];
                e[i] = 1.0;
                e
            }
        };
        self.frame_from(p, seed)
    }

    /// Frame whose first vector is the tangential part of `seed`.
    pub fn frame_from(&self, p: &ModelPoint, seed: Vec3) -> (Vec3, Vec3) {
        let t = self.project_tangent(p, seed);
        let e1 = vec3::scale(t, 1.0 / self.norm(t));
        let e2 = self.rotate_quarter(p, e1);
        (e1, e2)
    }

    /// Geodesic distance.
    pub fn distance(&self, a: &ModelPoint, b: &ModelPoint) -> Result<f64> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    pub(crate) fn distance_unchecked(&self, a: &ModelPoint, b: &ModelPoint) -> f64 {
        let (x, y) = (a.coords, b.coords);
        match self.kind {
            SpaceKind::Flat => (x[0] - y[0]).hypot(x[1] - y[1]),
            SpaceKind::Sphere => {
                let r = self.model_radius();
                r * vec3::norm(vec3::cross(x, y)).atan2(vec3::dot(x, y))
            }
            SpaceKind::Hyperbolic => {
                let r = self.model_radius();
                let d = vec3::sub(y, x);
                let chord = self.inner(d, d).max(0.0).sqrt();
                2.0 * r * (chord / (2.0 * r)).asinh()
            }
        }
    }

    /// Endpoint of the geodesic with initial velocity `v`.
    pub fn exp_map(&self, v: &ModelTangent) -> ModelPoint {
        let p = v.base.coords;
        let len = self.norm(v.vec);
        if len == 0.0 {
            return v.base;
        }
        match self.kind {
            SpaceKind::Flat => ModelPoint::planar(p[0] + v.vec[0], p[1] + v.vec[1]),
            SpaceKind::Sphere => {
                let r = self.model_radius();
                let th = len / r;
                let q = vec3::axpy(vec3::scale(p, th.cos()), r * th.sin() / len, v.vec);
                self.project(q)
            }
            SpaceKind::Hyperbolic => {
                let r = self.model_radius();
                let th = len / r;
                let q = vec3::axpy(vec3::scale(p, th.cosh()), r * th.sinh() / len, v.vec);
                self.project(q)
            }
        }
    }

    /// Initial velocity of the minimizing geodesic from `base` to `target`.
    pub fn log_map(&self, base: &ModelPoint, target: &ModelPoint) -> Result<ModelTangent> {
        let (p, q) = (base.coords, target.coords);
        let d = vec3::sub(q, p);
        let u = match self.kind {
            SpaceKind::Flat => [d[0], d[1], 0.0],
            SpaceKind::Sphere => {
                // q - <p,q>/a^2 p, rewritten without cancellation
                let a2 = self.model_radius().powi(2);
                let chord2 = vec3::dot(d, d);
                vec3::axpy(d, chord2 / (2.0 * a2), p)
            }
            SpaceKind::Hyperbolic => {
                let a2 = self.model_radius().powi(2);
                let chord2 = self.inner(d, d);
                vec3::axpy(d, -chord2 / (2.0 * a2), p)
            }
        };
        let dist = self.distance_unchecked(base, target);
        let un = self.norm(u);
        if dist == 0.0 {
            return Ok(ModelTangent::new(*base, [0.0; 3]));
        }
        if self.kind == SpaceKind::Sphere && (un <= 1e-12 * self.model_radius() || dist >= PI / self.k1 * (1.0 - 1e-12))
        {
            return Err(domain("log map of an antipodal pair is undefined"));
        }
        Ok(ModelTangent::new(*base, vec3::scale(u, dist / un)))
    }

    /// Riemannian angle in `[0, pi]` between two tangent vectors at the same point.
    pub fn angle_between(&self, u: &ModelTangent, v: &ModelTangent) -> Result<f64> {
        let (nu, nv) = (self.norm(u.vec), self.norm(v.vec));
        if nu == 0.0 || nv == 0.0 {
            return Err(domain("angle with a zero vector"));
        }
        Ok(self.angle_between_vecs(u.vec, v.vec))
    }

    pub(crate) fn angle_between_vecs(&self, u: Vec3, v: Vec3) -> f64 {
        let a = vec3::scale(u, 1.0 / self.norm(u));
        let b = vec3::scale(v, 1.0 / self.norm(v));
        2.0 * self.norm(vec3::sub(a, b)).atan2(self.norm(vec3::add(a, b)))
    }

    /// Geodesic curvature `mu0(t)` of a circle of radius `t`.
    pub fn mu0(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain(format!("circle radius must be positive, got {t}")));
        }
        match self.kind {
            SpaceKind::Flat => Ok(1.0 / t),
            SpaceKind::Sphere => {
                let x = self.k1 * t;
                if x >= PI {
                    return Err(domain(format!("spherical circle radius {t} >= pi/k1")));
                }
                if x == FRAC_PI_2 {
                    return Ok(0.0);
                }
                Ok(self.k1 / x.tan())
            }
            SpaceKind::Hyperbolic => Ok(self.k1 / (self.k1 * t).tanh()),
        }
    }

    /// Radius `R` of the circle of geodesic curvature `k0`, the inverse of [`mu0`](Self::mu0).
    pub fn circle_radius_of_curvature(&self, k0: f64) -> Result<f64> {
        match self.kind {
            SpaceKind::Flat if k0 > 0.0 => Ok(1.0 / k0),
            SpaceKind::Flat => Err(domain(format!("flat circle needs k0 > 0, got {k0}"))),
            SpaceKind::Sphere if k0 >= 0.0 => Ok(self.k1.atan2(k0) / self.k1),
            SpaceKind::Sphere => Err(domain(format!("spherical case needs k0 >= 0, got {k0}"))),
            SpaceKind::Hyperbolic if k0 > self.k1 => Ok((self.k1 / k0).atanh() / self.k1),
            SpaceKind::Hyperbolic => {
                Err(domain(format!("no closed circle of curvature {k0} <= k1 = {} in the hyperbolic plane", self.k1)))
            }
        }
    }

    /// Other leg of a right triangle with hypotenuse `hyp` and leg `leg`.
    ///
    /// Uses the half-angle forms of `cos c = cos a cos b` (and its analogs) so the
    /// result keeps full relative precision for short legs.
    pub fn right_triangle_leg(&self, hyp: f64, leg: f64) -> Result<f64> {
        if !(leg >= 0.0 && leg <= hyp) {
            return Err(domain(format!("right triangle needs 0 <= leg <= hyp ({leg}, {hyp})")));
        }
        let k = self.k1;
        Ok(match self.kind {
            SpaceKind::Flat => ((hyp - leg) * (hyp + leg)).sqrt(),
            SpaceKind::Sphere => {
                let num = (k * (hyp + leg) / 2.0).sin() * (k * (hyp - leg) / 2.0).sin();
                let s = (num / (k * leg).cos()).max(0.0).sqrt();
                2.0 * s.min(1.0).asin() / k
            }
            SpaceKind::Hyperbolic => {
                let num = (k * (hyp + leg) / 2.0).sinh() * (k * (hyp - leg) / 2.0).sinh();
                let s = (num / (k * leg).cosh()).max(0.0).sqrt();
                2.0 * s.asinh() / k
            }
        })
    }

    /// Point at chart coordinates `(x, y)`: geodesic normal coordinates at the origin.
    pub fn chart_point(&self, x: f64, y: f64) -> ModelPoint {
        let o = self.origin();
        let (e1, e2) = self.tangent_frame(&o);
        let v = vec3::add(vec3::scale(e1, x), vec3::scale(e2, y));
        self.exp_map(&ModelTangent::new(o, v))
    }

    /// Circumference of a circle of radius `t`.
    pub fn circle_length(&self, t: f64) -> f64 {
        2.0 * PI * self.sc(t)
    }

    /// Normalized mean of points: the projection of their ambient average.
    pub(crate) fn mean_point(&self, pts: impl Iterator<Item = ModelPoint>) -> ModelPoint {
        let mut acc = [0.0; 3];
        let mut n = 0usize;
        for p in pts {
            acc = vec3::add(acc, p.coords);
            n += 1;
        }
        self.project(vec3::scale(acc, 1.0 / n.max(1) as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hyp_point(s: &SpaceForm, tau: f64) -> ModelPoint {
        let r = 1.0 / s.k1();
        ModelPoint::new([r * (tau / r).cosh(), r * (tau / r).sinh(), 0.0])
    }

    #[test]
    fn flat_distance_is_euclidean() {
        let s = SpaceForm::flat();
        let d = s.distance(&ModelPoint::planar(0.0, 0.0), &ModelPoint::planar(3.0, 4.0)).unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn sphere_pole_to_equator_is_quarter_circle() {
        let s = SpaceForm::sphere(1.0).unwrap();
        let d = s.distance(&s.origin(), &ModelPoint::new([1.0, 0.0, 0.0])).unwrap();
        assert_relative_eq!(d, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn hyperbolic_distance_matches_polyline_length() {
        // brute force: refine a polyline along x = (cosh u, sinh u, 0) in the Minkowski metric
        let s = SpaceForm::hyperbolic(1.0).unwrap();
        let tau = 1.7;
        let mut prev = f64::NAN;
        let mut n = 64;
        let len = loop {
            let mut acc = 0.0;
            for i in 0..n {
                let a = hyp_point(&s, tau * i as f64 / n as f64).coords;
                let b = hyp_point(&s, tau * (i + 1) as f64 / n as f64).coords;
                let d = vec3::sub(b, a);
                acc += s.inner(d, d).sqrt();
            }
            if (acc - prev).abs() < 1e-11 {
                break acc;
            }
            prev = acc;
            n *= 2;
        };
        let d = s.distance(&hyp_point(&s, 0.0), &hyp_point(&s, tau)).unwrap();
        assert!((d - tau).abs() < 1e-12);
        assert!((len - tau).abs() < 1e-10, "polyline {len}");
    }

    #[test]
    fn invalid_point_is_rejected() {
        let s = SpaceForm::sphere(1.0).unwrap();
        let err = s.distance(&ModelPoint::new([2.0, 0.0, 0.0]), &s.origin()).unwrap_err();
        assert!(matches!(err, GeomError::ConstraintViolation(_)));
        let h = SpaceForm::hyperbolic(1.0).unwrap();
        let err = h.distance(&ModelPoint::new([-1.0, 0.0, 0.0]), &h.origin()).unwrap_err();
        assert!(matches!(err, GeomError::ConstraintViolation(_)));
    }

    #[test]
    fn exp_examples() {
        let f = SpaceForm::flat();
        let p = ModelPoint::planar(1.0, 2.0);
        assert_eq!(f.exp_map(&ModelTangent::new(p, [0.5, -1.0, 0.0])), ModelPoint::planar(1.5, 1.0));
        assert_eq!(f.exp_map(&ModelTangent::new(p, [0.0; 3])), p);

        let s = SpaceForm::sphere(1.0).unwrap();
        let q = s.exp_map(&ModelTangent::new(s.origin(), [PI, 0.0, 0.0]));
        assert!(vec3::norm(vec3::sub(q.coords, [0.0, 0.0, -1.0])) < 1e-15);
    }

    #[test]
    fn log_examples() {
        let f = SpaceForm::flat();
        let v = f.log_map(&ModelPoint::planar(1.0, 1.0), &ModelPoint::planar(4.0, -1.0)).unwrap();
        assert_eq!(v.vec, [3.0, -2.0, 0.0]);
        let s = SpaceForm::sphere(2.0).unwrap();
        let v = s.log_map(&s.origin(), &s.origin()).unwrap();
        assert_eq!(v.vec, [0.0; 3]);
        let anti = ModelPoint::new([0.0, 0.0, -0.5]);
        assert!(matches!(s.log_map(&s.origin(), &anti), Err(GeomError::Domain(_))));
    }

    #[test]
    fn angle_examples() {
        let s = SpaceForm::hyperbolic(1.0).unwrap();
        let p = s.chart_point(0.3, -0.2);
        let (e1, e2) = s.tangent_frame(&p);
        let u = ModelTangent::new(p, e1);
        let v = ModelTangent::new(p, e2);
        assert_relative_eq!(s.angle_between(&u, &v).unwrap(), FRAC_PI_2, epsilon = 1e-14);
        assert_eq!(s.angle_between(&u, &u).unwrap(), 0.0);
        assert!(s.angle_between(&u, &ModelTangent::new(p, [0.0; 3])).is_err());
    }

    #[test]
    fn mu0_examples() {
        assert_eq!(SpaceForm::flat().mu0(2.0).unwrap(), 0.5);
        let s = SpaceForm::sphere(1.0).unwrap();
        assert_eq!(s.mu0(FRAC_PI_2).unwrap(), 0.0);
        assert!(s.mu0(2.0).unwrap() < 0.0);
        assert!(s.mu0(0.0).is_err());
        assert!(s.mu0(PI).is_err());
        let h = SpaceForm::hyperbolic(1.0).unwrap();
        // coth t = 1 + 2 e^{-2t} + O(e^{-4t})
        let mut last = f64::INFINITY;
        for t in [5.0, 10.0, 20.0] {
            let m = h.mu0(t).unwrap();
            assert!(m >= 1.0 && m <= last);
            let series = 1.0 + 2.0 * (-2.0 * t).exp() + 2.0 * (-4.0 * t).exp();
            assert!((m - series).abs() < 1e-8);
            last = m;
        }
    }

    #[test]
    fn circle_radius_examples() {
        assert_eq!(SpaceForm::flat().circle_radius_of_curvature(1.0).unwrap(), 1.0);
        let s = SpaceForm::sphere(1.0).unwrap();
        assert_relative_eq!(s.circle_radius_of_curvature(0.0).unwrap(), FRAC_PI_2);
        let h = SpaceForm::hyperbolic(1.0).unwrap();
        // bisection oracle on mu0(t) = 2
        let (mut lo, mut hi) = (1e-6, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h.mu0(mid).unwrap() > 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = h.circle_radius_of_curvature(2.0).unwrap();
        assert!((r - 0.5 * lo - 0.5 * hi).abs() < 1e-10);
        assert_relative_eq!(r, 3f64.ln() / 2.0, epsilon = 1e-15);
        assert!(h.circle_radius_of_curvature(1.0).is_err());
        assert!(h.circle_radius_of_curvature(0.5).is_err());
    }

    #[test]
    fn right_triangle_leg_matches_closed_forms() {
        let h = SpaceForm::hyperbolic(1.0).unwrap();
        let (c, b) = (0.9, 0.4);
        let a = h.right_triangle_leg(c, b).unwrap();
        assert_relative_eq!(a.cosh() * b.cosh(), c.cosh(), epsilon = 1e-14);
        let s = SpaceForm::sphere(1.0).unwrap();
        let a = s.right_triangle_leg(c, b).unwrap();
        assert_relative_eq!(a.cos() * b.cos(), c.cos(), epsilon = 1e-14);
        assert_relative_eq!(SpaceForm::flat().right_triangle_leg(5.0, 4.0).unwrap(), 3.0);
    }

    #[test]
    fn serde_rejects_bad_k1() {
        assert!(serde_json::from_str::<SpaceForm>(r#"{"kind":"sphere","k1":0}"#).is_err());
        let s: SpaceForm = serde_json::from_str(r#"{"kind":"flat"}"#).unwrap();
        assert_eq!(s, SpaceForm::flat());
    }
}
