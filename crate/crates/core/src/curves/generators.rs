//! Curve generators: circles, intersections of equal discs (lunes among them),
//! flat support functions and closed solutions of the frame ODE.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{radial_out, ClosedCurve, Provenance, RawSample, Sampling};
use crate::error::{domain, GeomError, Result};
use crate::space_forms::{ModelPoint, ModelTangent, SpaceForm, SpaceKind};
use crate::vec3::{self, Vec3};

/// One Fourier term `a cos(n x) + b sin(n x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

/// Flat support function `h(theta) = a0 + sum a_n cos(n theta) + b_n sin(n theta)`, `n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFunction {
    pub a0: f64,
    #[serde(default)]
    pub harmonics: Vec<Harmonic>,
}

impl SupportFunction {
    pub fn h(&self, t: f64) -> f64 {
        self.a0
            + self.harmonics.iter().map(|c| c.a * (c.n as f64 * t).cos() + c.b * (c.n as f64 * t).sin()).sum::<f64>()
    }

    pub fn dh(&self, t: f64) -> f64 {
        self.harmonics
            .iter()
            .map(|c| {
                let n = c.n as f64;
                n * (c.b * (n * t).cos() - c.a * (n * t).sin())
            })
            .sum()
    }

    /// Radius of curvature `h + h''`.
    pub fn rho(&self, t: f64) -> f64 {
        self.a0
            + self
                .harmonics
                .iter()
                .map(|c| {
                    let n = c.n as f64;
                    (1.0 - n * n) * (c.a * (n * t).cos() + c.b * (n * t).sin())
                })
                .sum::<f64>()
    }

    /// Arclength from `theta = 0`, the integral of `rho`.
    pub fn arclength(&self, t: f64) -> f64 {
        self.a0 * t
            + self
                .harmonics
                .iter()
                .map(|c| {
                    let n = c.n as f64;
                    (1.0 - n * n) / n * (c.a * (n * t).sin() - c.b * ((n * t).cos() - 1.0))
                })
                .sum::<f64>()
    }

    pub fn length(&self) -> f64 {
        TAU * self.a0
    }

    /// Checks `0 < rho <= 1/k0` on a dense grid.
    pub fn validate(&self, k0: f64) -> Result<()> {
        if !(self.a0 > 0.0) {
            return Err(domain("support function needs a0 > 0"));
        }
        if !(k0 > 0.0) {
            return Err(domain("flat support curves need k0 > 0"));
        }
        if let Some(c) = self.harmonics.iter().find(|c| c.n < 2) {
            return Err(domain(format!("harmonic n = {} not allowed, n must be >= 2", c.n)));
        }
        let cap = 1.0 / k0;
        let grid = 16384;
        for i in 0..grid {
            let t = TAU * i as f64 / grid as f64;
            let r = self.rho(t);
            if r <= 0.0 {
                return Err(GeomError::Rejected {
                    theta: t,
                    reason: format!("radius of curvature {r} is not positive"),
                });
            }
            if r > cap * (1.0 + 1e-12) {
                return Err(GeomError::Rejected {
                    theta: t,
                    reason: format!("radius of curvature {r} exceeds 1/k0 = {cap}"),
                });
            }
        }
        Ok(())
    }

    fn theta_at(&self, s: f64) -> f64 {
        let mut t = s / self.a0;
        for _ in 0..60 {
            let step = (self.arclength(t) - s) / self.rho(t);
            t -= step;
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }
}

/// Curvature profile `k(u) = mean + sum a_n cos(2 pi n u) + b_n sin(2 pi n u)` in the
/// normalized arclength `u = s/L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierProfile {
    pub mean: f64,
    #[serde(default)]
    pub harmonics: Vec<Harmonic>,
}

impl FourierProfile {
    pub fn constant(k: f64) -> Self {
        FourierProfile { mean: k, harmonics: Vec::new() }
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.mean
            + self
                .harmonics
                .iter()
                .map(|c| {
                    let x = TAU * c.n as f64 * u;
                    c.a * x.cos() + c.b * x.sin()
                })
                .sum::<f64>()
    }

    /// Gcd of the active harmonic orders; `None` for a constant profile.
    pub fn symmetry_order(&self) -> Option<u32> {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.harmonics.iter().filter(|c| c.a != 0.0 || c.b != 0.0).map(|c| c.n).reduce(gcd)
    }

    /// Minimum over a dense grid.
    pub fn min_value(&self) -> f64 {
        let grid = 8192;
        (0..grid).map(|i| self.eval(i as f64 / grid as f64)).fold(f64::INFINITY, f64::min)
    }
}

/// Circle of geodesic curvature `k0` about `center`.
pub fn make_circle(space: &SpaceForm, center: &ModelPoint, k0: f64, sampling: &Sampling) -> Result<ClosedCurve> {
    space.check_point(center)?;
    let radius = space.circle_radius_of_curvature(k0)?;
    sampling.adaptive(|n| circle_samples(space, center, radius, k0, n, Provenance::Circle))
}

fn circle_samples(
    space: &SpaceForm,
    center: &ModelPoint,
    radius: f64,
    k0: f64,
    n: usize,
    provenance: Provenance,
) -> Result<ClosedCurve> {
    let (f1, f2) = space.tangent_frame(center);
    let arc = Arc { center: *center, f1, f2, lo: 0.0, hi: TAU };
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        let psi = TAU * i as f64 / n as f64;
        let p = arc.point(space, radius, psi);
        let normal = radial_out(space, &p, center)?;
        raw.push(RawSample {
            point: p,
            s: space.sc(radius) * psi,
            tangent: space.rotate_quarter(&p, normal),
            normal_out: normal,
            corner: false,
            kappa_hint: Some(k0),
        });
    }
    ClosedCurve::assemble(*space, raw, space.circle_length(radius), provenance, Some(k0))
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    center: ModelPoint,
    f1: Vec3,
    f2: Vec3,
    lo: f64,
    hi: f64,
}

impl Arc {
    fn point(&self, space: &SpaceForm, radius: f64, psi: f64) -> ModelPoint {
        let dir = vec3::add(vec3::scale(self.f1, psi.cos()), vec3::scale(self.f2, psi.sin()));
        space.exp_map(&ModelTangent::new(self.center, vec3::scale(dir, radius)))
    }
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

/// Intersects a union of intervals inside `[base, base + 2pi)` with the circular arc
/// `[lo, hi]`, `hi - lo < 2pi`.
fn intersect_circular(set: &[(f64, f64)], base: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let start = base + (lo - base).rem_euclid(TAU);
    let len = hi - lo;
    let pieces = [(start - TAU, start - TAU + len), (start, start + len)];
    let mut out = Vec::new();
    for &(a, b) in set {
        for &(c, d) in &pieces {
            let (x, y) = (a.max(c), b.min(d));
            if y > x {
                out.push((x, y));
            }
        }
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

/// Boundary of the intersection of the discs of curvature `k0` about `centers`.
pub fn make_disc_intersection(
    space: &SpaceForm,
    centers: &[ModelPoint],
    k0: f64,
    sampling: &Sampling,
) -> Result<ClosedCurve> {
    disc_intersection(space, centers, k0, sampling, Provenance::DiscIntersection)
}

fn disc_intersection(
    space: &SpaceForm,
    centers: &[ModelPoint],
    k0: f64,
    sampling: &Sampling,
    provenance: Provenance,
) -> Result<ClosedCurve> {
    if centers.is_empty() {
        return Err(domain("disc intersection needs at least one center"));
    }
    for c in centers {
        space.check_point(c)?;
    }
    let radius = space.circle_radius_of_curvature(k0)?;
    let mut distinct: Vec<ModelPoint> = Vec::new();
    for c in centers {
        if distinct.iter().all(|d| space.distance_unchecked(c, d) > 1e-12 * radius) {
            distinct.push(*c);
        }
    }
    if distinct.len() == 1 {
        return sampling.adaptive(|n| circle_samples(space, &distinct[0], radius, k0, n, provenance));
    }
    let arcs = boundary_arcs(space, &distinct, radius)?;
    sampling.adaptive(|n| sample_arcs(space, &arcs, radius, k0, n, provenance))
}

fn boundary_arcs(space: &SpaceForm, centers: &[ModelPoint], radius: f64) -> Result<Vec<Arc>> {
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            if space.distance_unchecked(a, b) >= 2.0 * radius {
                return Err(domain("discs do not overlap: empty intersection"));
            }
        }
    }
    let z = space.mean_point(centers.iter().copied());
    if centers.iter().any(|c| space.distance_unchecked(&z, c) >= radius) {
        return Err(domain("the mean of the centers is not inside every disc"));
    }

    let mut arcs = Vec::new();
    for (i, ci) in centers.iter().enumerate() {
        let (f1, f2) = space.tangent_frame(ci);
        let angle_of = |q: &ModelPoint| -> Result<f64> {
            let v = space.log_map(ci, q)?.vec;
            Ok(space.inner(v, f2).atan2(space.inner(v, f1)))
        };
        let mut set = vec![(0.0, TAU)];
        let base = 0.0;
        for (j, cj) in centers.iter().enumerate() {
            if i == j {
                continue;
            }
            let delta = space.distance_unchecked(ci, cj) / 2.0;
            let u = space.log_map(ci, cj)?.vec;
            let m = space.exp_map(&ModelTangent::new(*ci, vec3::scale(u, 0.5)));
            let toward = space.log_map(&m, cj)?.vec;
            let perp = space.rotate_quarter(&m, vec3::scale(toward, 1.0 / space.norm(toward)));
            let w = space.right_triangle_leg(radius, delta)?;
            let x_plus = space.exp_map(&ModelTangent::new(m, vec3::scale(perp, w)));
            let x_minus = space.exp_map(&ModelTangent::new(m, vec3::scale(perp, -w)));
            let psi_j = angle_of(cj)?;
            let half = 0.5 * (wrap_pi(angle_of(&x_plus)? - psi_j).abs() + wrap_pi(angle_of(&x_minus)? - psi_j).abs());
            set = intersect_circular(&set, base, psi_j - half, psi_j + half);
        }
        // merge pieces that meet across the 0 / 2pi seam
        if set.len() >= 2 && set[0].0 <= base + 1e-15 && set[set.len() - 1].1 >= base + TAU - 1e-15 {
            let first = set.remove(0);
            let last = set.last_mut().expect("nonempty");
            last.1 = first.1 + TAU;
        }
        for (lo, hi) in set {
            if hi - lo > 1e-12 {
                arcs.push(Arc { center: *ci, f1, f2, lo, hi });
            }
        }
    }
    if arcs.is_empty() {
        return Err(domain("disc intersection has no boundary arcs"));
    }

    let (z1, z2) = space.tangent_frame(&z);
    let polar = |p: &ModelPoint| -> Result<f64> {
        let v = space.log_map(&z, p)?.vec;
        Ok(space.inner(v, z2).atan2(space.inner(v, z1)))
    };
    let mut keyed = Vec::with_capacity(arcs.len());
    for a in arcs {
        let mid = a.point(space, radius, 0.5 * (a.lo + a.hi));
        keyed.push((polar(&mid)?, a));
    }
    keyed.sort_by(|p, q| p.0.total_cmp(&q.0));
    let arcs: Vec<Arc> = keyed.into_iter().map(|(_, a)| a).collect();
    for k in 0..arcs.len() {
        let a = &arcs[k];
        let b = &arcs[(k + 1) % arcs.len()];
        let gap = space.distance_unchecked(&a.point(space, radius, a.hi), &b.point(space, radius, b.lo));
        if gap > 1e-9 * radius.max(1.0) {
            return Err(domain(format!("boundary arcs do not chain (gap {gap:e})")));
        }
    }
    Ok(arcs)
}

fn sample_arcs(
    space: &SpaceForm,
    arcs: &[Arc],
    radius: f64,
    k0: f64,
    n: usize,
    provenance: Provenance,
) -> Result<ClosedCurve> {
    let r_len = space.sc(radius);
    let total: f64 = arcs.iter().map(|a| r_len * (a.hi - a.lo)).sum();
    let mut raw = Vec::with_capacity(n + arcs.len());
    let mut s = 0.0;
    for (k, a) in arcs.iter().enumerate() {
        let prev = &arcs[(k + arcs.len() - 1) % arcs.len()];
        let m = ((n as f64 * r_len * (a.hi - a.lo) / total).round() as usize).max(1);
        for j in 0..m {
            let psi = a.lo + (a.hi - a.lo) * j as f64 / m as f64;
            let p = a.point(space, radius, psi);
            let own = radial_out(space, &p, &a.center)?;
            let (normal, corner) = if j == 0 && arcs.len() > 1 {
                let other = radial_out(space, &p, &prev.center)?;
                let sum = vec3::add(own, other);
                (vec3::scale(sum, 1.0 / space.norm(sum)), true)
            } else {
                (own, false)
            };
            raw.push(RawSample {
                point: p,
                s: s + r_len * (psi - a.lo),
                tangent: space.rotate_quarter(&p, normal),
                normal_out: normal,
                corner,
                kappa_hint: Some(k0),
            });
        }
        s += r_len * (a.hi - a.lo);
    }
    ClosedCurve::assemble(*space, raw, total, provenance, Some(k0))
}

/// Lune of width `2r` symmetric about the origin: the intersection of the two discs of
/// curvature `k0` whose centers sit at distance `R - r` on either side.
pub fn make_lune(space: &SpaceForm, k0: f64, r: f64, sampling: &Sampling) -> Result<ClosedCurve> {
    let radius = space.circle_radius_of_curvature(k0)?;
    if !(r > 0.0 && r < radius) {
        return Err(domain(format!("lune half-width {r} must lie in (0, {radius})")));
    }
    let o = space.origin();
    let (_, e2) = space.tangent_frame(&o);
    let off = radius - r;
    let c1 = space.exp_map(&ModelTangent::new(o, vec3::scale(e2, -off)));
    let c2 = space.exp_map(&ModelTangent::new(o, vec3::scale(e2, off)));
    disc_intersection(space, &[c1, c2], k0, sampling, Provenance::Lune)
}

/// Flat convex curve from its support function; `rho` must stay in `(0, 1/k0]`.
pub fn make_support_curve(support: &SupportFunction, k0: f64, sampling: &Sampling) -> Result<ClosedCurve> {
    support.validate(k0)?;
    sampling.adaptive(|n| {
        let total = support.length();
        let mut raw = Vec::with_capacity(n);
        for i in 0..n {
            let s = total * i as f64 / n as f64;
            let t = support.theta_at(s);
            let (h, dh) = (support.h(t), support.dh(t));
            let (c, sn) = (t.cos(), t.sin());
            raw.push(RawSample {
                point: ModelPoint::planar(h * c - dh * sn, h * sn + dh * c),
                s,
                tangent: [-sn, c, 0.0],
                normal_out: [c, sn, 0.0],
                corner: false,
                kappa_hint: Some(1.0 / support.rho(t)),
            });
        }
        ClosedCurve::assemble(SpaceForm::flat(), raw, total, Provenance::SupportFunction, Some(k0))
    })
}

const ODE_SUBSTEPS: usize = 4;

/// Integrates `x' = T, T' = k J T - c x` for total length `len`, returning the state at
/// every sample and the final state.
fn integrate_frame(
    space: &SpaceForm,
    profile: &FourierProfile,
    len: f64,
    n: usize,
) -> (Vec<(ModelPoint, Vec3)>, (ModelPoint, Vec3)) {
    let o = space.origin();
    let (t0, _) = space.tangent_frame(&o);
    let c = space.curvature();
    let h = len / (n * ODE_SUBSTEPS) as f64;
    let deriv = |x: Vec3, t: Vec3, u: f64| -> (Vec3, Vec3) {
        let jt = space.rotate_quarter(&ModelPoint::new(x), t);
        (t, vec3::axpy(vec3::scale(jt, profile.eval(u)), -c, x))
    };
    let mut x = o.coords;
    let mut t = t0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push((ModelPoint::new(x), t));
        for j in 0..ODE_SUBSTEPS {
            let u = ((i * ODE_SUBSTEPS + j) as f64 * h) / len;
            let du = h / len;
            let (a1, b1) = deriv(x, t, u);
            let (a2, b2) = deriv(vec3::axpy(x, h / 2.0, a1), vec3::axpy(t, h / 2.0, b1), u + du / 2.0);
            let (a3, b3) = deriv(vec3::axpy(x, h / 2.0, a2), vec3::axpy(t, h / 2.0, b2), u + du / 2.0);
            let (a4, b4) = deriv(vec3::axpy(x, h, a3), vec3::axpy(t, h, b3), u + du);
            let dx = vec3::add(vec3::add(a1, a4), vec3::scale(vec3::add(a2, a3), 2.0));
            let dt = vec3::add(vec3::add(b1, b4), vec3::scale(vec3::add(b2, b3), 2.0));
            let p = space.project(vec3::axpy(x, h / 6.0, dx));
            let tt = space.project_tangent(&p, vec3::axpy(t, h / 6.0, dt));
            x = p.coords;
            t = vec3::scale(tt, 1.0 / space.norm(tt));
        }
    }
    (out, (ModelPoint::new(x), t))
}

/// Signed angle from the start tangent to the end tangent carried back to the start.
fn closure_angle(space: &SpaceForm, end: &(ModelPoint, Vec3)) -> f64 {
    let o = space.origin();
    let (t0, n0) = space.tangent_frame(&o);
    let te = space.project_tangent(&o, end.1);
    space.inner(te, n0).atan2(space.inner(te, t0))
}

/// Closed curve whose geodesic curvature follows `profile` in normalized arclength.
///
/// The length is found by Newton iteration on the closure angle; the profile must have
/// a symmetry of order at least 2 (or be constant).
pub fn make_frame_ode_curve(space: &SpaceForm, profile: &FourierProfile, sampling: &Sampling) -> Result<ClosedCurve> {
    if let Some(m) = profile.symmetry_order() {
        if m < 2 {
            return Err(domain("profile needs a rotational symmetry of order >= 2 to close"));
        }
    }
    let kmin = profile.min_value();
    let ok = match space.kind() {
        SpaceKind::Flat => kmin > 0.0,
        SpaceKind::Sphere => kmin >= 0.0,
        SpaceKind::Hyperbolic => kmin > space.k1(),
    };
    if !ok {
        return Err(domain(format!("profile minimum {kmin} does not give a closed convex curve")));
    }
    sampling.adaptive(|n| {
        let radius = space.circle_radius_of_curvature(profile.mean)?;
        let mut len = space.circle_length(radius);
        let mut residual = f64::INFINITY;
        let mut converged = false;
        for _ in 0..50 {
            residual = closure_angle(space, &integrate_frame(space, profile, len, n).1);
            if residual.abs() < 1e-13 {
                converged = true;
                break;
            }
            let dl = 1e-7 * len;
            let r2 = closure_angle(space, &integrate_frame(space, profile, len + dl, n).1);
            let slope = (r2 - residual) / dl;
            if !slope.is_finite() || slope == 0.0 {
                break;
            }
            let step = (-residual / slope).clamp(-0.1 * len, 0.1 * len);
            len += step;
            if step.abs() < 1e-15 * len {
                residual = closure_angle(space, &integrate_frame(space, profile, len, n).1);
                converged = residual.abs() < 1e-10;
                break;
            }
        }
        if !converged {
            return Err(GeomError::NonClosure { iterations: 50, residual });
        }
        let (states, end) = integrate_frame(space, profile, len, n);
        let gap = space.distance_unchecked(&space.origin(), &end.0);
        if gap > 1e-8 * len.max(1.0) {
            return Err(GeomError::NonClosure { iterations: 50, residual: gap });
        }
        let raw = states
            .into_iter()
            .enumerate()
            .map(|(i, (p, t))| {
                let u = i as f64 / n as f64;
                let normal = vec3::scale(space.rotate_quarter(&p, t), -1.0);
                RawSample {
                    point: p,
                    s: u * len,
                    tangent: t,
                    normal_out: normal,
                    corner: false,
                    kappa_hint: Some(profile.eval(u)),
                }
            })
            .collect();
        ClosedCurve::assemble(*space, raw, len, Provenance::FrameOde, Some(kmin))
    })
}
