//! Fixed inputs shared by the criterion benches.

use sphericity_core::curves::{
    make_frame_ode_curve, make_support_curve, ClosedCurve, FourierProfile, Harmonic, Sampling, SupportFunction,
};
use sphericity_core::warped::{
    make_warped, make_warped_curve, RadialProfile, WarpFamily, WarpSpec, WarpedCurve, WarpedMetric,
};
use sphericity_core::SpaceForm;

pub fn spaces() -> [(&'static str, SpaceForm); 3] {
    [
        ("flat", SpaceForm::flat()),
        ("sphere", SpaceForm::sphere(1.0).expect("valid curvature")),
        ("hyperbolic", SpaceForm::hyperbolic(1.0).expect("valid curvature")),
    ]
}

/// A smooth oval in `space` with `n` samples: a support-function curve in the plane and a
/// frame-ODE curve otherwise.
pub fn oval(space: &SpaceForm, n: usize) -> ClosedCurve {
    let sampling = Sampling::fixed(n);
    if space.curvature() == 0.0 {
        let support = SupportFunction {
            a0: 1.5,
            harmonics: vec![Harmonic { n: 2, a: 0.1, b: 0.02 }, Harmonic { n: 3, a: 0.0, b: 0.02 }],
        };
        make_support_curve(&support, 0.5, &sampling).expect("fixture curve")
    } else {
        let profile = FourierProfile { mean: 2.0, harmonics: vec![Harmonic { n: 2, a: 0.3, b: 0.1 }] };
        make_frame_ode_curve(space, &profile, &sampling).expect("fixture curve")
    }
}

pub fn cubic_metric() -> WarpedMetric {
    make_warped(WarpSpec { family: WarpFamily::Cubic { epsilon: 0.05 }, t_max: 2.0, declared_band: None })
        .expect("fixture metric")
}

pub fn warped_oval(metric: &WarpedMetric, n: usize) -> WarpedCurve {
    let profile = RadialProfile { mean: 0.8, harmonics: vec![Harmonic { n: 2, a: 0.03, b: 0.01 }] };
    make_warped_curve(metric, &profile, n).expect("fixture curve")
}
