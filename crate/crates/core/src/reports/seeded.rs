//! Seeded random test objects. Every object `i` of a run draws from its own ChaCha8
//! stream, so results do not depend on evaluation order or thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::{FourierProfile, Harmonic, SupportFunction};
use crate::space_forms::{SpaceForm, SpaceKind};
use crate::warped::RadialProfile;

/// Purpose tags that keep streams of different object kinds apart.
pub const STREAM_CURVES: u64 = 1;
pub const STREAM_BASE_POINTS: u64 = 2;
pub const STREAM_WARPED: u64 = 3;

/// Generator for object `index` of kind `purpose` under `seed`.
pub fn object_rng(seed: u64, purpose: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((purpose << 32) | index as u64);
    rng
}

/// Support function with `rho` confined to `[0.05, 0.95] / k0`.
pub fn random_support_function<R: Rng>(rng: &mut R, k0: f64, max_order: u32) -> SupportFunction {
    let a0 = 0.5 / k0;
    let orders: Vec<u32> = (2..=max_order.max(2)).collect();
    let share = 0.9 * a0 / orders.len() as f64;
    let harmonics = orders
        .iter()
        .map(|&n| {
            let budget = share / (n * n - 1) as f64;
            let amp = budget * rng.gen_range(0.0..1.0);
            let psi = rng.gen_range(0.0..TAU);
            Harmonic { n, a: amp * psi.cos(), b: amp * psi.sin() }
        })
        .collect();
    SupportFunction { a0, harmonics }
}

/// Lowest curvature a closed convex curve of `space` may have.
pub fn curvature_floor(space: &SpaceForm) -> f64 {
    match space.kind() {
        SpaceKind::Hyperbolic => space.k1(),
        _ => 0.0,
    }
}

/// Curvature profile with symmetry order 2, 3 or 4 whose minimum stays above the floor
/// by at least `(1 - amplitude)` of the mean's margin.
pub fn random_frame_profile<R: Rng>(rng: &mut R, space: &SpaceForm, mean: [f64; 2], amplitude: f64) -> FourierProfile {
    let m = rng.gen_range(2..=4u32);
    let k = rng.gen_range(mean[0]..=mean[1]);
    let margin = amplitude * (k - curvature_floor(space));
    let c1 = 0.7 * margin * rng.gen_range(0.3..1.0);
    let c2 = 0.3 * margin * rng.gen_range(0.0..1.0);
    let (p1, p2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
    FourierProfile {
        mean: k,
        harmonics: vec![
            Harmonic { n: m, a: c1 * p1.cos(), b: c1 * p1.sin() },
            Harmonic { n: 2 * m, a: c2 * p2.cos(), b: c2 * p2.sin() },
        ],
    }
}

/// Chart coordinates of `discs` centres, uniform in the disc of radius `spread * radius`.
pub fn random_disc_centers<R: Rng>(rng: &mut R, radius: f64, discs: usize, spread: f64) -> Vec<[f64; 2]> {
    (0..discs)
        .map(|_| {
            let rr = spread * radius * rng.gen_range(0.0f64..1.0).sqrt();
            let a = rng.gen_range(0.0..TAU);
            [rr * a.cos(), rr * a.sin()]
        })
        .collect()
}

/// Offset `(x, y)` uniform in the disc of radius `scale`.
pub fn random_offset<R: Rng>(rng: &mut R, scale: f64) -> [f64; 2] {
    let rr = scale * rng.gen_range(0.0f64..1.0).sqrt();
    let a = rng.gen_range(0.0..TAU);
    [rr * a.cos(), rr * a.sin()]
}

/// Centrally symmetric radial profile (orders 2 and 4 only).
pub fn random_radial_profile<R: Rng>(rng: &mut R, mean: [f64; 2], amplitude: f64) -> RadialProfile {
    let m = rng.gen_range(mean[0]..=mean[1]);
    let mut term =
        |n: u32, scale: f64| Harmonic { n, a: scale * rng.gen_range(-1.0..1.0), b: scale * rng.gen_range(-1.0..1.0) };
    let h2 = term(2, amplitude);
    let h4 = term(4, amplitude / 4.0);
    RadialProfile { mean: m, harmonics: vec![h2, h4] }
}
