//! Inscribed circle, circumradius about its centre, and the width of the resulting
//! circular layer, checked against the spindle bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::Verdict;
use crate::curves::{winding, ClosedCurve};
use crate::error::{domain, hypothesis, Result};
use crate::optimize::{nelder_mead_2d, solve_dense, NelderMeadOptions};
use crate::space_forms::{ModelPoint, ModelTangent, SpaceForm, SpaceKind};
use crate::spindles::spindle_optimum;
use crate::vec3::{self, Vec3};

/// Measurement allowance subtracted from the measured minimum curvature.
pub const K0_MEASUREMENT_TOLERANCE: f64 = 1e-6;
/// Smallest admissible margin `d0 - d` for a pass.
pub const LAYER_TOLERANCE: f64 = 1e-7;

const GRID: usize = 48;

/// Evidence that the incenter is a maximizer of the distance to the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncenterCertificate {
    /// Spacing of the interior grid in the chart.
    pub grid_spacing: f64,
    pub grid_points: usize,
    /// Largest min-distance found on the grid.
    pub grid_max: f64,
    /// All 8 compass moves of size `compass_step` lower the min-distance.
    pub compass_ok: bool,
    pub compass_step: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Incenter {
    pub center: ModelPoint,
    pub r: f64,
    pub certificate: IncenterCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub incenter: ModelPoint,
    pub r: f64,
    pub rho1: f64,
    pub d: f64,
    pub kmin: f64,
    pub k0_used: f64,
    pub d0: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub certificate: IncenterCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinWidthLayer {
    pub center: ModelPoint,
    pub width: f64,
    pub inner: f64,
    pub outer: f64,
}

/// Distance fields of a curve in a geodesic normal chart.
pub(crate) struct DistanceField<'a> {
    curve: &'a ClosedCurve,
    space: SpaceForm,
    base: ModelPoint,
    frame: (Vec3, Vec3),
    /// Discretization allowance when selecting candidate extrema.
    slack: f64,
}

impl<'a> DistanceField<'a> {
    pub(crate) fn new(curve: &'a ClosedCurve, base: ModelPoint) -> Self {
        let space = curve.space;
        let frame = space.tangent_frame(&base);
        let gap = curve.max_gap();
        let kmax = curve.samples.iter().map(|s| s.kappa.abs()).fold(1.0, f64::max);
        DistanceField { curve, space, base, frame, slack: gap * gap * kmax }
    }

    pub(crate) fn point(&self, xi: [f64; 2]) -> ModelPoint {
        let v = vec3::add(vec3::scale(self.frame.0, xi[0]), vec3::scale(self.frame.1, xi[1]));
        self.space.exp_map(&ModelTangent::new(self.base, v))
    }

    /// Refined extreme distance from `p`, over the discrete local extrema close to the
    /// discrete extreme value.
    fn extreme(&self, p: &ModelPoint, maximize: bool) -> (f64, usize) {
        let d = self.curve.distances_from(p);
        let n = d.len();
        let sign = if maximize { -1.0 } else { 1.0 };
        let best = d.iter().map(|x| sign * x).fold(f64::INFINITY, f64::min);
        let mut cand: Vec<usize> = (0..n)
            .filter(|&i| {
                let v = sign * d[i];
                v <= best + self.slack && v <= sign * d[(i + 1) % n] && v <= sign * d[(i + n - 1) % n]
            })
            .collect();
        cand.sort_by(|&a, &b| (sign * d[a]).total_cmp(&(sign * d[b])));
        cand.truncate(16);
        let mut out = (sign * f64::INFINITY, cand.first().copied().unwrap_or(0));
        for i in cand {
            let v = self.curve.refine_distance(p, i, maximize);
            if sign * v < sign * out.0 {
                out = (v, i);
            }
        }
        out
    }

    pub(crate) fn min_at(&self, xi: [f64; 2]) -> f64 {
        self.extreme(&self.point(xi), false).0
    }

    pub(crate) fn max_at(&self, xi: [f64; 2]) -> f64 {
        self.extreme(&self.point(xi), true).0
    }

    /// Refined local minimum of the distance near sample `hint`; `None` when the
    /// discrete minimum of the window sits on its edge.
    fn contact(&self, p: &ModelPoint, hint: usize) -> Option<(f64, usize)> {
        const W: isize = 6;
        let idx: Vec<usize> = (-W..=W).map(|k| self.curve.wrap(hint as isize + k)).collect();
        let d: Vec<f64> = idx.iter().map(|&i| self.space.distance_unchecked(p, &self.curve.samples[i].point)).collect();
        let j = crate::curves::argmin(&d);
        if j == 0 || j == d.len() - 1 {
            return None;
        }
        Some((self.curve.refine_distance(p, idx[j], false), idx[j]))
    }
}

fn check_curvature_hypothesis(curve: &ClosedCurve) -> Result<()> {
    let sp = curve.space;
    let ok = match sp.kind() {
        SpaceKind::Flat => curve.kmin > 0.0,
        SpaceKind::Sphere => curve.kmin >= 0.0,
        SpaceKind::Hyperbolic => curve.kmin > sp.k1(),
    };
    if ok {
        Ok(())
    } else {
        Err(hypothesis(format!(
            "measured kmin = {} does not give a lambda-convex curve in the {:?} case",
            curve.kmin,
            sp.kind()
        )))
    }
}

fn check_hemisphere(curve: &ClosedCurve) -> Result<ModelPoint> {
    let c = curve.centroid();
    if curve.space.kind() == SpaceKind::Sphere {
        let quarter = std::f64::consts::FRAC_PI_2 / curve.space.k1();
        if curve.distances_from(&c).iter().any(|&t| t >= quarter) {
            return Err(hypothesis("curve does not fit in an open hemisphere"));
        }
    }
    Ok(c)
}

/// Centre and radius of a largest inscribed circle.
pub fn incenter(curve: &ClosedCurve) -> Result<Incenter> {
    let base = check_hemisphere(curve)?;
    let field = DistanceField::new(curve, base);
    let poly = curve.chart_polygon(&base, field.frame)?;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &poly {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    if !(extent > 0.0) {
        return Err(domain("curve has no extent"));
    }
    let stride = (poly.len() / 512).max(1);
    let coarse: Vec<[f64; 2]> = poly.iter().step_by(stride).copied().collect();
    let coarse_pts: Vec<ModelPoint> = curve.samples.iter().step_by(stride).map(|s| s.point).collect();
    let step = [(hi[0] - lo[0]) / GRID as f64, (hi[1] - lo[1]) / GRID as f64];
    let grid: Vec<([f64; 2], f64)> = (0..GRID * GRID)
        .into_par_iter()
        .filter_map(|g| {
            let xi = [
                lo[0] + (g % GRID) as f64 * step[0] + step[0] / 2.0,
                lo[1] + (g / GRID) as f64 * step[1] + step[1] / 2.0,
            ];
            if (winding(&coarse, xi) - 1.0).abs() > 0.5 {
                return None;
            }
            let p = field.point(xi);
            let m = coarse_pts.iter().map(|q| field.space.distance_unchecked(&p, q)).fold(f64::INFINITY, f64::min);
            Some((xi, m))
        })
        .collect();
    // ties go to the first grid point found
    let Some(&(start, _)) = grid.iter().reduce(|a, b| if b.1 > a.1 { b } else { a }) else {
        return Err(domain("curve encloses no grid point: degenerate interior"));
    };

    // direct search on the refined min-distance field, restarted until it stalls
    let f = |xi: [f64; 2]| -field.min_at(xi);
    let mut best = (start, f(start));
    let mut size = step[0].max(step[1]);
    for _ in 0..6 {
        let opts = NelderMeadOptions { initial_step: size, f_tol: 0.0, x_tol: 1e-14 * extent, max_iter: 2000 };
        let (x, v) = nelder_mead_2d(f, best.0, opts);
        let improved = best.1 - v;
        if v <= best.1 {
            best = (x, v);
        }
        if improved <= 1e-16 * extent && size < 1e-6 * extent {
            break;
        }
        size *= 0.01;
    }
    if let Some((x, v)) = polish(&field, best.0, extent) {
        if v < best.1 {
            best = (x, v);
        }
    }
    let (xi, r) = (best.0, -best.1);
    if !(r > 1e-12 * extent) {
        return Err(domain("curve has zero inradius"));
    }

    // certificate
    let spacing = step[0].max(step[1]);
    let grid_max = grid
        .par_iter()
        .map(|&(g, m)| if m > r + 1e-7 { field.min_at(g) } else { m })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let compass_step = 1e-5;
    let compass_ok = (0..8).all(|k| {
        let a = std::f64::consts::FRAC_PI_4 * k as f64;
        field.min_at([xi[0] + compass_step * a.cos(), xi[1] + compass_step * a.sin()]) <= r + 1e-15 * extent
    });
    let certificate = IncenterCertificate {
        grid_spacing: spacing,
        grid_points: grid.len(),
        grid_max,
        compass_ok,
        compass_step,
        certified: compass_ok && grid_max <= r + 1e-7,
    };
    Ok(Incenter { center: field.point(xi), r, certificate })
}

/// Newton iteration on the optimality system of the max-min problem for pairs and
/// triples of contacts. Returns the best improvement found, as `(xi, -min distance)`.
fn polish(field: &DistanceField, xi0: [f64; 2], extent: f64) -> Option<([f64; 2], f64)> {
    let p0 = field.point(xi0);
    let d = field.curve.distances_from(&p0);
    let n = d.len();
    let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut minima: Vec<usize> = (0..n)
        .filter(|&i| d[i] <= d[(i + 1) % n] && d[i] < d[(i + n - 1) % n] && d[i] <= dmin + 1e-3 * extent)
        .collect();
    minima.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let mut contacts: Vec<usize> = Vec::new();
    for i in minima {
        let sep = |j: usize| {
            let k = i.abs_diff(j);
            k.min(n - k)
        };
        if contacts.iter().all(|&j| sep(j) > 8) {
            contacts.push(i);
        }
        if contacts.len() == 6 {
            break;
        }
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for a in 0..contacts.len() {
        for b in a + 1..contacts.len() {
            sets.push(vec![contacts[a], contacts[b]]);
            for c in b + 1..contacts.len() {
                sets.push(vec![contacts[a], contacts[b], contacts[c]]);
            }
        }
    }
    let mut best: Option<([f64; 2], f64)> = None;
    for set in sets {
        if let Some(xi) = solve_active_set(field, xi0, &set, extent) {
            let v = -field.min_at(xi);
            if best.is_none_or(|b| v < b.1) {
                best = Some((xi, v));
            }
        }
    }
    best
}

fn solve_active_set(field: &DistanceField, xi0: [f64; 2], hints: &[usize], extent: f64) -> Option<[f64; 2]> {
    let h1 = 1e-6 * extent;
    let h2 = 1e-4 * extent;
    let mut hints = hints.to_vec();
    let values = |xi: [f64; 2], hints: &mut Vec<usize>| -> Option<Vec<f64>> {
        let p = field.point(xi);
        let mut out = Vec::with_capacity(hints.len());
        for h in hints.iter_mut() {
            let (v, i) = field.contact(&p, *h)?;
            *h = i;
            out.push(v);
        }
        Some(out)
    };
    let grads = |xi: [f64; 2], hints: &[usize]| -> Option<Vec<[f64; 2]>> {
        let mut hs = hints.to_vec();
        let fx = [
            values([xi[0] + h1, xi[1]], &mut hs.clone())?,
            values([xi[0] - h1, xi[1]], &mut hs.clone())?,
            values([xi[0], xi[1] + h1], &mut hs.clone())?,
            values([xi[0], xi[1] - h1], &mut hs)?,
        ];
        Some(
            (0..hints.len())
                .map(|j| [(fx[0][j] - fx[1][j]) / (2.0 * h1), (fx[2][j] - fx[3][j]) / (2.0 * h1)])
                .collect(),
        )
    };
    let pair = hints.len() == 2;
    let residual = |v: [f64; 3], hints: &mut Vec<usize>| -> Option<Vec<f64>> {
        let f = values([v[0], v[1]], hints)?;
        let mut g: Vec<f64> = f.iter().map(|x| x - v[2]).collect();
        if pair {
            let gr = grads([v[0], v[1]], hints)?;
            g.push(gr[0][0] * gr[1][1] - gr[0][1] * gr[1][0]);
        }
        Some(g)
    };
    let z0 = values(xi0, &mut hints)?.iter().copied().fold(f64::INFINITY, f64::min);
    let mut v = [xi0[0], xi0[1], z0];
    let mut res = residual(v, &mut hints)?;
    for _ in 0..30 {
        let norm = res.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm < 1e-14 * extent {
            break;
        }
        let mut jac = vec![vec![0.0; 3]; 3];
        for k in 0..3 {
            let mut vp = v;
            let mut vm = v;
            vp[k] += h2;
            vm[k] -= h2;
            let rp = residual(vp, &mut hints.clone())?;
            let rm = residual(vm, &mut hints.clone())?;
            for row in 0..3 {
                jac[row][k] = (rp[row] - rm[row]) / (2.0 * h2);
            }
        }
        let step = solve_dense(jac, res.iter().map(|x| -x).collect())?;
        let len = step[0].hypot(step[1]);
        let scale = if len > 0.05 * extent { 0.05 * extent / len } else { 1.0 };
        for k in 0..3 {
            v[k] += scale * step[k];
        }
        res = residual(v, &mut hints)?;
        if len < 1e-15 * extent {
            break;
        }
    }
    let norm = res.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if norm > 1e-9 * extent {
        return None;
    }
    // multipliers must be nonnegative: zero lies in the hull of the gradients
    let gr = grads([v[0], v[1]], &hints)?;
    let ok = if pair {
        gr[0][0] * gr[1][0] + gr[0][1] * gr[1][1] < 0.0
    } else {
        let a = vec![vec![gr[0][0], gr[1][0], gr[2][0]], vec![gr[0][1], gr[1][1], gr[2][1]], vec![1.0, 1.0, 1.0]];
        solve_dense(a, vec![0.0, 0.0, 1.0]).is_some_and(|l| l.iter().all(|&x| x >= -1e-9))
    };
    ok.then_some([v[0], v[1]])
}

/// Layer about the incenter and its check against the spindle bound with
/// `k0 = kmin - 1e-6`.
pub fn layer_width(curve: &ClosedCurve) -> Result<LayerReport> {
    check_curvature_hypothesis(curve)?;
    let sp = curve.space;
    let k0_used = match sp.kind() {
        SpaceKind::Sphere => (curve.kmin - K0_MEASUREMENT_TOLERANCE).max(0.0),
        _ => curve.kmin - K0_MEASUREMENT_TOLERANCE,
    };
    let (_, d0) = spindle_optimum(&sp, k0_used).map_err(|_| {
        hypothesis(format!("kmin = {} is within measurement tolerance of the admissible limit", curve.kmin))
    })?;
    let inc = incenter(curve)?;
    let (rho1, _) = curve.max_distance(&inc.center);
    let field = DistanceField::new(curve, inc.center);
    let rho1 = rho1.max(field.max_at([0.0, 0.0]));
    let d = rho1 - inc.r;
    let margin = d0 - d;
    Ok(LayerReport {
        incenter: inc.center,
        r: inc.r,
        rho1,
        d,
        kmin: curve.kmin,
        k0_used,
        d0,
        margin,
        verdict: Verdict::from_bool(margin >= -LAYER_TOLERANCE),
        certificate: inc.certificate,
    })
}

/// Locally narrowest layer found by direct search started at the incenter.
pub fn min_width_layer(curve: &ClosedCurve) -> Result<MinWidthLayer> {
    let inc = incenter(curve)?;
    min_width_from(curve, &inc.center)
}

/// Direct search for the narrowest layer starting at `start`.
pub fn min_width_from(curve: &ClosedCurve, start: &ModelPoint) -> Result<MinWidthLayer> {
    curve.space.check_point(start)?;
    let field = DistanceField::new(curve, *start);
    let extent = field.max_at([0.0, 0.0]);
    let w = |xi: [f64; 2]| field.max_at(xi) - field.min_at(xi);
    let mut best = ([0.0, 0.0], w([0.0, 0.0]));
    let mut size = 0.05 * extent;
    for _ in 0..6 {
        let opts = NelderMeadOptions { initial_step: size, f_tol: 0.0, x_tol: 1e-13 * extent, max_iter: 1500 };
        let (x, v) = nelder_mead_2d(w, best.0, opts);
        let improved = best.1 - v;
        if v <= best.1 {
            best = (x, v);
        }
        if improved <= 1e-15 * extent && size < 1e-5 * extent {
            break;
        }
        size *= 0.05;
    }
    let inner = field.min_at(best.0);
    let outer = field.max_at(best.0);
    Ok(MinWidthLayer { center: field.point(best.0), width: outer - inner, inner, outer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{
        make_circle, make_disc_intersection, make_lune, make_support_curve, Harmonic, Sampling, SupportFunction,
    };
    use crate::spindles::spindle_rho;
    use std::f64::consts::SQRT_2;

    fn spaces() -> [(SpaceForm, f64); 3] {
        [(SpaceForm::flat(), 1.0), (SpaceForm::sphere(1.0).unwrap(), 1.0), (SpaceForm::hyperbolic(1.0).unwrap(), 2.0)]
    }

    #[test]
    fn circle_incenter_is_centre() {
        for (sp, k0) in spaces() {
            let c = sp.chart_point(0.1, -0.05);
            let curve = make_circle(&sp, &c, k0, &Sampling::fixed(2048)).unwrap();
            let inc = incenter(&curve).unwrap();
            let radius = sp.circle_radius_of_curvature(k0).unwrap();
            assert!((inc.r - radius).abs() < 1e-8, "{:?} {}", sp.kind(), inc.r - radius);
            assert!(sp.distance(&inc.center, &c).unwrap() < 1e-7);
            assert!(inc.certificate.certified, "{:?}", inc.certificate);
            let rep = layer_width(&curve).unwrap();
            assert!(rep.d.abs() < 1e-7);
            assert!(rep.verdict.passed());
            let mw = min_width_layer(&curve).unwrap();
            assert!(mw.width < 1e-7);
        }
    }

    #[test]
    fn lune_incenter_is_midpoint() {
        for (sp, k0) in spaces() {
            let radius = sp.circle_radius_of_curvature(k0).unwrap();
            let r = 0.35 * radius;
            let curve = make_lune(&sp, k0, r, &Sampling::fixed(4096)).unwrap();
            let inc = incenter(&curve).unwrap();
            assert!((inc.r - r).abs() < 1e-7, "{:?} {}", sp.kind(), inc.r - r);
            assert!(sp.distance(&inc.center, &sp.origin()).unwrap() < 1e-6);
            assert!(inc.certificate.certified, "{:?}", inc.certificate);
            let rep = layer_width(&curve).unwrap();
            assert!((rep.rho1 - spindle_rho(&sp, k0, r).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn optimal_lune_is_sharp() {
        for (sp, k0) in spaces() {
            let (r0, d0) = spindle_optimum(&sp, k0).unwrap();
            let curve = make_lune(&sp, k0, r0, &Sampling::fixed(4096)).unwrap();
            let rep = layer_width(&curve).unwrap();
            assert!(rep.margin >= -1e-7 && rep.margin <= 1e-5, "{:?} margin {}", sp.kind(), rep.margin);
            assert!((rep.d - d0).abs() < 1e-6);
            if sp.kind() == SpaceKind::Flat {
                assert!((rep.d - (SQRT_2 - 1.0)).abs() < 1e-6);
            }
            let mw = min_width_layer(&curve).unwrap();
            assert!(mw.width <= rep.d + 1e-9);
        }
    }

    #[test]
    fn min_width_is_stable_under_restarts() {
        let f = SupportFunction {
            a0: 1.0,
            harmonics: vec![Harmonic { n: 3, a: 0.04, b: 0.0 }, Harmonic { n: 2, a: 0.0, b: 0.02 }],
        };
        let curve = make_support_curve(&f, 0.5, &Sampling::fixed(2048)).unwrap();
        let base = min_width_layer(&curve).unwrap();
        for k in 0..10 {
            let a = 0.7 * k as f64;
            let start = ModelPoint::new(vec3::add(base.center.coords, [0.01 * a.cos(), 0.01 * a.sin(), 0.0]));
            let other = min_width_from(&curve, &start).unwrap();
            assert!((other.width - base.width).abs() < 1e-6, "{} {}", other.width, base.width);
        }
    }

    #[test]
    fn hyperbolic_hypothesis_violation() {
        let sp = SpaceForm::hyperbolic(1.0).unwrap();
        let mut curve = make_circle(&sp, &sp.origin(), 2.0, &Sampling::fixed(256)).unwrap();
        curve.kmin = 0.9;
        assert!(matches!(layer_width(&curve), Err(crate::GeomError::Hypothesis(_))));
    }

    #[test]
    fn sphere_outside_hemisphere() {
        let sp = SpaceForm::sphere(1.0).unwrap();
        let curve = make_circle(&sp, &sp.origin(), 0.0, &Sampling::fixed(256)).unwrap();
        assert!(matches!(layer_width(&curve), Err(crate::GeomError::Hypothesis(_))));
    }

    /// Smaller arc of radius `R` from `p` to `q`.
    fn short_arc(sp: &SpaceForm, radius: f64, p: &ModelPoint, q: &ModelPoint, m: usize) -> Vec<ModelPoint> {
        let half = sp.distance(p, q).unwrap() / 2.0;
        let u = sp.log_map(p, q).unwrap().vec;
        let mid = sp.exp_map(&ModelTangent::new(*p, vec3::scale(u, 0.5)));
        let toward = sp.log_map(&mid, q).unwrap().vec;
        let perp = sp.rotate_quarter(&mid, vec3::scale(toward, 1.0 / sp.norm(toward)));
        let w = sp.right_triangle_leg(radius, half).unwrap();
        let c = sp.exp_map(&ModelTangent::new(mid, vec3::scale(perp, w)));
        let a = sp.log_map(&c, p).unwrap().vec;
        let b = sp.log_map(&c, q).unwrap().vec;
        let jb = sp.rotate_quarter(&c, a);
        let ang = sp.inner(b, jb).atan2(sp.inner(b, a));
        (0..=m)
            .map(|i| {
                let t = ang * i as f64 / m as f64;
                let dir = vec3::add(vec3::scale(a, t.cos()), vec3::scale(jb, t.sin()));
                sp.exp_map(&ModelTangent::new(c, dir))
            })
            .collect()
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(12))]

            #[test]
            fn support_curves_pass(a2 in -0.05f64..0.05, b3 in -0.03f64..0.03, a5 in -0.004f64..0.004) {
                let f = SupportFunction { a0: 1.0, harmonics: vec![
                    Harmonic { n: 2, a: a2, b: 0.0 },
                    Harmonic { n: 3, a: 0.0, b: b3 },
                    Harmonic { n: 5, a: a5, b: 0.0 },
                ] };
                let curve = make_support_curve(&f, 0.5, &Sampling::fixed(2048)).unwrap();
                let rep = layer_width(&curve).unwrap();
                prop_assert!(rep.verdict.passed(), "margin {}", rep.margin);
                prop_assert!(rep.rho1 >= rep.r);
                prop_assert!((curve.min_distance(&rep.incenter).0 - rep.r).abs() < 1e-8);
            }

            #[test]
            fn disc_intersections_pass(kind in 0usize..3, pts in proptest::collection::vec((-0.2f64..0.2, -0.2f64..0.2), 2..5)) {
                let (sp, k0) = spaces()[kind];
                let radius = sp.circle_radius_of_curvature(k0).unwrap();
                let centers: Vec<ModelPoint> = pts.iter().map(|(x, y)| sp.chart_point(x * radius, y * radius)).collect();
                let curve = make_disc_intersection(&sp, &centers, k0, &Sampling::fixed(2048)).unwrap();
                let rep = layer_width(&curve).unwrap();
                prop_assert!(rep.verdict.passed(), "margin {}", rep.margin);
            }

            #[test]
            fn arcs_between_interior_points_stay_inside(
                kind in 0usize..3,
                pts in proptest::collection::vec((-0.2f64..0.2, -0.2f64..0.2), 2..4),
                s in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
            ) {
                let (sp, k0) = spaces()[kind];
                let radius = sp.circle_radius_of_curvature(k0).unwrap();
                let centers: Vec<ModelPoint> = pts.iter().map(|(x, y)| sp.chart_point(x * radius, y * radius)).collect();
                let curve = make_disc_intersection(&sp, &centers, k0, &Sampling::fixed(1024)).unwrap();
                let inc = incenter(&curve).unwrap();
                let pick = |a: f64, b: f64| {
                    let i = ((a * curve.len() as f64) as usize).min(curve.len() - 1);
                    let q = curve.samples[i].point;
                    let v = sp.log_map(&inc.center, &q).unwrap().vec;
                    sp.exp_map(&ModelTangent::new(inc.center, vec3::scale(v, 0.95 * b)))
                };
                let (p, q) = (pick(s.0, s.1), pick(s.2, s.3));
                if sp.distance(&p, &q).unwrap() > 1e-6 {
                    for x in short_arc(&sp, radius, &p, &q, 256) {
                        prop_assert!(curve.contains(&x));
                    }
                }
            }
        }
    }
}
