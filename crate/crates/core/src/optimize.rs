//! One- and two-dimensional search routines and a small dense solver.

/// 1/phi, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a) > tol && iter < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, fx) = golden_section_min(|x| -f(x), a, b, tol);
    (x, -fx)
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop when the spread of simplex values drops below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter drops below this.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions { initial_step: 1e-2, f_tol: 1e-15, x_tol: 1e-13, max_iter: 4000 }
    }
}

/// Nelder–Mead minimization in two variables. Returns the best vertex and its value.
///
/// The returned value is never worse than `f(x0)`.
pub fn nelder_mead_2d<F: FnMut([f64; 2]) -> f64>(mut f: F, x0: [f64; 2], opts: NelderMeadOptions) -> ([f64; 2], f64) {
    let h = opts.initial_step;
    let mut simplex = [x0, [x0[0] + h, x0[1]], [x0[0], x0[1] + h]];
    let mut vals = [f(simplex[0]), f(simplex[1]), f(simplex[2])];
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    for _ in 0..opts.max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];

        let diam = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (simplex[i][0] - simplex[j][0]).hypot(simplex[i][1] - simplex[j][1]))
            .fold(0.0, f64::max);
        if diam <= opts.x_tol || (vals[2] - vals[0]).abs() <= opts.f_tol {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let xr = lerp(centroid, simplex[2], -1.0);
        let fr = f(xr);
        if fr < vals[0] {
            let xe = lerp(centroid, simplex[2], -2.0);
            let fe = f(xe);
            if fe < fr {
                simplex[2] = xe;
                vals[2] = fe;
            } else {
                simplex[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let xc = lerp(centroid, xr, 0.5);
                (xc, f(xc))
            } else {
                let xc = lerp(centroid, simplex[2], 0.5);
                (xc, f(xc))
            };
            if fc < vals[2].min(fr) {
                simplex[2] = xc;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    vals[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    (simplex[best], vals[best])
}

/// Solves the dense system `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` for a numerically singular matrix.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            if m != 0.0 {
                let (top, bottom) = a.split_at_mut(row);
                for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= m * p;
                }
                b[row] -= m * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
