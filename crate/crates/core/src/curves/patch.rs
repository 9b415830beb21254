//! Quartic fit of five consecutive samples in geodesic normal coordinates.

use super::ClosedCurve;
use crate::optimize::solve_dense;
use crate::space_forms::{ModelPoint, ModelTangent, SpaceForm};
use crate::vec3::{self, Vec3};

pub(crate) struct LocalPatch {
    space: SpaceForm,
    base: ModelPoint,
    e1: Vec3,
    e2: Vec3,
    xs: [f64; 5],
    pos: usize,
    scale: f64,
    /// `y(x) = sum coef[k] (x/scale)^k`
    coef: [f64; 5],
}

impl LocalPatch {
    /// Fits the window starting at `start` in the normal chart at sample `center`,
    /// which must lie in the window.
    pub(crate) fn new(curve: &ClosedCurve, start: usize, center: usize) -> Self {
        let n = curve.len();
        let space = curve.space;
        let base = curve.samples[center].point;
        let vs: Vec<Vec3> = (0..5)
            .map(|k| {
                let q = &curve.samples[(start + k) % n].point;
                space.log_map(&base, q).map(|t| t.vec).unwrap_or([0.0; 3])
            })
            .collect();
        let chord = vec3::sub(vs[4], vs[0]);
        let e1 = vec3::scale(chord, 1.0 / space.norm(chord));
        let e2 = space.rotate_quarter(&base, e1);
        let mut xs = [0.0; 5];
        let mut ys = [0.0; 5];
        for k in 0..5 {
            xs[k] = space.inner(vs[k], e1);
            ys[k] = space.inner(vs[k], e2);
        }
        let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let a: Vec<Vec<f64>> = xs.iter().map(|x| (0..5).map(|p| (x / scale).powi(p)).collect()).collect();
        let sol = solve_dense(a, ys.to_vec()).unwrap_or_else(|| vec![0.0; 5]);
        let mut coef = [0.0; 5];
        coef.copy_from_slice(&sol);
        let pos = (center + n - start) % n;
        LocalPatch { space, base, e1, e2, xs, pos, scale, coef }
    }

    fn derivs(&self, x: f64) -> (f64, f64, f64) {
        let u = x / self.scale;
        let c = &self.coef;
        let y = c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * c[4])));
        let dy = (c[1] + u * (2.0 * c[2] + u * (3.0 * c[3] + u * 4.0 * c[4]))) / self.scale;
        let d2y = (2.0 * c[2] + u * (6.0 * c[3] + u * 12.0 * c[4])) / (self.scale * self.scale);
        (y, dy, d2y)
    }

    /// Geodesic curvature at the chart base, where the chart is isometric to first order.
    pub(crate) fn curvature(&self) -> f64 {
        let (_, dy, d2y) = self.derivs(0.0);
        d2y / (1.0 + dy * dy).powf(1.5)
    }

    /// Point of the fitted curve at chart abscissa `x`.
    pub(crate) fn point(&self, x: f64) -> ModelPoint {
        let (y, _, _) = self.derivs(x);
        let v = vec3::add(vec3::scale(self.e1, x), vec3::scale(self.e2, y));
        self.space.exp_map(&ModelTangent::new(self.base, v))
    }

    /// Abscissa interval between the neighbours of the base sample inside the window.
    pub(crate) fn neighbour_range(&self) -> (f64, f64) {
        let lo = if self.pos >= 1 { self.xs[self.pos - 1] } else { 0.0 };
        let hi = if self.pos <= 3 { self.xs[self.pos + 1] } else { 0.0 };
        (lo.min(hi), lo.max(hi))
    }
}
