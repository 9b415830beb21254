//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits non-zero if
//! any criterion fails.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use serde_json::Value;
use sphericity_core::curves::{make_circle, make_lune, measure_radial, Sampling};
use sphericity_core::layer::layer_width;
use sphericity_core::reports::{run, RunConfig, Status, SuiteResult};
use sphericity_core::spindles::{d0_rewritten, spindle_optimum, spindle_optimum_numeric};
use sphericity_core::warped::{make_warped, verify_mu_comparison, WarpFamily, WarpSpec};
use sphericity_core::SpaceForm;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_json(text: &str) -> Result<SuiteResult, String> {
    let cfg = RunConfig::from_json(text).map_err(|e| e.to_string())?;
    run(&cfg).map_err(|e| e.to_string())
}

fn sphere() -> SpaceForm {
    SpaceForm::sphere(1.0).unwrap()
}

fn hyperbolic() -> SpaceForm {
    SpaceForm::hyperbolic(1.0).unwrap()
}

/// 1. Flat circle `R = 1` seen from a point at distance `h = 0.3`.
fn euclidean_sharpness() -> Outcome {
    let sp = SpaceForm::flat();
    let center = sp.chart_point(0.7, 0.0);
    let curve = make_circle(&sp, &center, 1.0, &Sampling::fixed(4096)).map_err(|e| e.to_string())?;
    let o = sp.origin();
    let m = measure_radial(&curve, &o).map_err(|e| e.to_string())?;
    let (imin, cmin) =
        m.phi
            .iter()
            .map(|p| p.cos())
            .enumerate()
            .fold((0, f64::INFINITY), |a, (i, c)| if c < a.1 { (i, c) } else { a });
    let err = (cmin - 0.51f64.sqrt()).abs();
    // angle at O between the direction to the centre and the direction to each sample
    let alpha = |i: usize| {
        let p = curve.samples[i].point.coords;
        (p[1].atan2(p[0])).abs()
    };
    let n = curve.len();
    let j = (0..n).min_by(|&a, &b| (alpha(a) - FRAC_PI_2).abs().total_cmp(&(alpha(b) - FRAC_PI_2).abs())).unwrap();
    let mirror = (0..n)
        .filter(|&i| curve.samples[i].point.coords[1] * curve.samples[j].point.coords[1] < 0.0)
        .min_by(|&a, &b| (alpha(a) - FRAC_PI_2).abs().total_cmp(&(alpha(b) - FRAC_PI_2).abs()))
        .unwrap();
    let dist = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(n - d)
    };
    let off = dist(imin, j).min(dist(imin, mirror));
    ensure(
        err <= 1e-6 && off <= 2,
        format!("min cos phi {cmin:.12} vs sqrt(0.51), error {err:.2e}; attained {off} samples from alpha = pi/2"),
    )
}

fn angle_suites() -> Result<Vec<(String, SuiteResult)>, String> {
    let flat = r#"{"suite": "angle", "seed": 2024, "space": {"kind": "flat"},
        "generator": {"provenance": "random_support", "count": 100, "k0": 0.5},
        "base_point": {"kind": "random_interior", "fraction": 0.9},
        "output": {"rows": false}}"#;
    let curved = |kind: &str| {
        format!(
            r#"{{"suite": "angle", "seed": 2024, "space": {{"kind": "{kind}", "k1": 1.0}},
            "generator": {{"provenance": "random_frame_ode", "count": 30, "mean": [1.5, 3.0]}},
            "base_point": {{"kind": "random_interior", "fraction": 0.9}},
            "output": {{"rows": false}}}}"#
        )
    };
    Ok(vec![
        ("flat".to_string(), run_json(flat)?),
        ("sphere".to_string(), run_json(&curved("sphere"))?),
        ("hyperbolic".to_string(), run_json(&curved("hyperbolic"))?),
    ])
}

/// 2. Seeded support-function and frame-ODE curves against the angle bound.
fn angle_property_suite(suites: &[(String, SuiteResult)]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, res) in suites {
        let angle: Vec<_> = res.checks().filter(|c| c.name.starts_with("angle[")).collect();
        let passed = angle.iter().filter(|c| c.status == Status::Pass && c.slack >= -1e-9).count();
        let min = angle.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
        ok &= passed == angle.len();
        parts.push(format!("{name} {passed}/{} (min slack {min:.2e})", angle.len()));
    }
    let counts: Vec<usize> =
        suites.iter().map(|(_, r)| r.checks().filter(|c| c.name.starts_with("angle[")).count()).collect();
    ensure(ok && counts == [100, 30, 30], parts.join(", "))
}

/// 3. Angle ODE residuals on the monotone-t arcs of the same curves.
fn lemma1_residuals(suites: &[(String, SuiteResult)]) -> Outcome {
    let (mut evaluated, mut within, mut worst) = (0.0, 0.0, 0.0f64);
    for (_, res) in suites {
        for d in &res.suites[0].details {
            let ode = &d["ode_residuals"];
            if let (Some(n), Some(f), Some(m)) =
                (ode["evaluated"].as_f64(), ode["fraction_within"].as_f64(), ode["max_residual"].as_f64())
            {
                evaluated += n;
                within += f * n;
                worst = worst.max(m);
            }
        }
    }
    let frac = within / evaluated;
    ensure(
        evaluated > 0.0 && frac >= 0.99 && worst <= 1e-3,
        format!("{evaluated} samples, {:.4}% within 1e-4, max residual {worst:.2e}", 100.0 * frac),
    )
}

/// 4. Flat spindle optimum against the closed form and the golden-section oracle.
fn flat_spindle() -> Outcome {
    let sp = SpaceForm::flat();
    let (r0, d0) = spindle_optimum(&sp, 1.0).map_err(|e| e.to_string())?;
    let (rn, dn) = spindle_optimum_numeric(&sp, 1.0).map_err(|e| e.to_string())?;
    let (er, ed) = ((r0 - 1.0 / (2.0 + SQRT_2)).abs(), (d0 - (SQRT_2 - 1.0)).abs());
    ensure(
        er <= 4.0 * f64::EPSILON && ed <= 4.0 * f64::EPSILON && (r0 - rn).abs() <= 1e-7 && (d0 - dn).abs() <= 1e-9,
        format!(
            "closed form off by ({er:.1e}, {ed:.1e}); oracle off by ({:.1e}, {:.1e})",
            (r0 - rn).abs(),
            (d0 - dn).abs()
        ),
    )
}

/// 5. Curved spindle optima and the stationarity identities.
fn curved_spindle() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (sp, k0) in [(sphere(), 1.0), (hyperbolic(), 2.0)] {
        let radius = sp.circle_radius_of_curvature(k0).unwrap();
        let (r0, d0) = spindle_optimum(&sp, k0).map_err(|e| e.to_string())?;
        let (rn, dn) = spindle_optimum_numeric(&sp, k0).map_err(|e| e.to_string())?;
        let stat = (sp.cs(radius) - sp.cs(radius - r0).powi(2)).abs();
        ok &= (r0 - rn).abs() <= 1e-7 && (d0 - dn).abs() <= 1e-9 && stat <= 1e-10;
        parts.push(format!(
            "{:?}: d0 {d0:.10}, oracle gap ({:.1e}, {:.1e}), stationarity {stat:.1e}",
            sp.kind(),
            (r0 - rn).abs(),
            (d0 - dn).abs()
        ));
    }
    ensure(ok, parts.join("; "))
}

/// 6. Lunes at `r0` attain `d0`; random bodies stay within it.
fn width_sharpness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (sp, k0) in [(SpaceForm::flat(), 1.0), (sphere(), 1.0), (hyperbolic(), 2.0)] {
        let (r0, d0) = spindle_optimum(&sp, k0).unwrap();
        let lune = make_lune(&sp, k0, r0, &Sampling::default()).map_err(|e| e.to_string())?;
        let rep = layer_width(&lune).map_err(|e| e.to_string())?;
        let gap = (rep.d - d0).abs();
        ok &= gap <= 1e-5 && rep.margin >= -1e-7;
        parts.push(format!("{:?} lune |d - d0| {gap:.1e}", sp.kind()));
    }
    let configs = [
        r#"{"suite": "width", "seed": 6, "space": {"kind": "flat"}, "generator": {"provenance": "random_support", "count": 12, "k0": 0.5}}"#,
        r#"{"suite": "width", "seed": 6, "space": {"kind": "flat"}, "generator": {"provenance": "random_disc_intersection", "count": 12, "k0": 1.0}}"#,
        r#"{"suite": "width", "seed": 6, "space": {"kind": "sphere", "k1": 1.0}, "generator": {"provenance": "random_disc_intersection", "count": 12, "k0": 1.0}}"#,
        r#"{"suite": "width", "seed": 6, "space": {"kind": "hyperbolic", "k1": 1.0}, "generator": {"provenance": "random_disc_intersection", "count": 12, "k0": 2.0, "discs": 4}}"#,
        r#"{"suite": "width", "seed": 6, "space": {"kind": "sphere", "k1": 1.0}, "generator": {"provenance": "random_frame_ode", "count": 8, "mean": [1.5, 3.0]}}"#,
        r#"{"suite": "width", "seed": 6, "space": {"kind": "hyperbolic", "k1": 1.0}, "generator": {"provenance": "random_frame_ode", "count": 8, "mean": [1.5, 3.0]}}"#,
    ];
    let (mut total, mut passed, mut worst) = (0, 0, f64::INFINITY);
    for c in configs {
        let res = run_json(c)?;
        for check in res.checks() {
            total += 1;
            worst = worst.min(check.slack);
            if check.status == Status::Pass && check.slack >= -1e-7 {
                passed += 1;
            }
        }
    }
    ok &= passed == total;
    parts.push(format!("random bodies {passed}/{total} (min margin {worst:.2e})"));
    ensure(ok, parts.join(", "))
}

/// 7. Curvature-only rewrite of `d0` over a 20-point grid per curved space.
fn rewritten_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for k1 in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for (kind, ratios) in [("sphere", [0.2, 0.7, 1.5, 4.0]), ("hyperbolic", [1.1, 1.5, 2.5, 5.0])] {
            let sp = if kind == "sphere" { SpaceForm::sphere(k1) } else { SpaceForm::hyperbolic(k1) }.unwrap();
            for q in ratios {
                let k0 = q * k1;
                let (_, d0) = spindle_optimum(&sp, k0).map_err(|e| e.to_string())?;
                let dr = d0_rewritten(&sp, k0).map_err(|e| e.to_string())?;
                worst = worst.max((d0 - dr).abs());
                count += 1;
            }
        }
    }
    ensure(count == 40 && worst <= 1e-10, format!("{count} grid points, max difference {worst:.1e}"))
}

/// 8. `k1 -> 0` limit of `d0` and of the angle bound.
fn euclidean_limit() -> Outcome {
    let res = run_json(r#"{"suite": "sweep", "sweep": {"k0": 1.0, "k1": [1.0, 0.1, 0.01, 0.001]}}"#)?;
    let checks: Vec<_> = res.checks().collect();
    let parts: Vec<String> = checks.iter().map(|c| format!("{} {:.1e}", c.name, c.measured)).collect();
    ensure(checks.len() == 4 && res.status == Status::Pass, parts.join(", "))
}

/// 9. Circle curvature comparison on warped metrics.
fn lemma3_comparison() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let families = [
        (WarpFamily::Cubic { epsilon: 0.01 }, 2.0, false),
        (WarpFamily::Cubic { epsilon: 0.05 }, 2.0, false),
        (WarpFamily::Cubic { epsilon: 0.1 }, 2.0, false),
        (WarpFamily::PerturbedSine { epsilon: 0.005 }, 1.5, false),
        (WarpFamily::PerturbedSine { epsilon: 0.01 }, 1.5, false),
        (WarpFamily::PerturbedSine { epsilon: 0.02 }, 1.5, false),
        (WarpFamily::Hyperbolic { k1: 1.0 }, 2.0, true),
        (WarpFamily::Spherical { k1: 1.0 }, 1.5, true),
        (WarpFamily::Flat, 2.0, true),
    ];
    for (family, t_max, constant) in families {
        let m = make_warped(WarpSpec { family, t_max, declared_band: None }).map_err(|e| e.to_string())?;
        let rep = verify_mu_comparison(&m, 1e-9).map_err(|e| e.to_string())?;
        let fd = m.finite_difference_curvature_error();
        let dev = rep.rows.iter().map(|r| r.slack.abs()).fold(0.0, f64::max);
        let good = rep.rows.len() == 1000 && rep.min_slack >= -1e-9 && fd <= 1e-7 && (!constant || dev <= 1e-10);
        ok &= good;
        if !good || constant {
            parts.push(format!("{family:?}: min slack {:.1e}, max |slack| {dev:.1e}", rep.min_slack));
        }
    }
    parts.insert(0, "9 metrics at 1000 radii".into());
    ensure(ok, parts.join(", "))
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphericity"))
}

/// 10. Seeded warped curves pass; a curve violating `kmin > k1` exits with code 3.
fn warped_theorems(tmp: &Path) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let metrics = [
        r#"{"family": "cubic", "epsilon": 0.05, "t_max": 2.0}"#,
        r#"{"family": "perturbed_sine", "epsilon": 0.01, "t_max": 1.5}"#,
    ];
    for m in metrics {
        let text = format!(
            r#"{{"suite": "warped", "seed": 10, "output": {{"rows": false}},
                "warped": {{"metric": {m}, "curves": {{"source": "random", "count": 20, "mean": [0.5, 1.0], "amplitude": 0.04}}}}}}"#
        );
        let res = run_json(&text)?;
        let angle = res.checks().filter(|c| c.name.starts_with("warped_angle") && c.status == Status::Pass).count();
        let width = res.checks().filter(|c| c.name.starts_with("warped_width") && c.status == Status::Pass).count();
        ok &= res.status == Status::Pass && angle == 20 && width == 20;
        parts.push(format!("{}: angle {angle}/20, width {width}/20", m.split('"').nth(3).unwrap_or("?")));
    }
    let bad = r#"{"suite": "warped",
        "warped": {"metric": {"family": "hyperbolic", "k1": 1.0, "t_max": 2.0},
                   "curves": {"source": "profiles", "profiles": [{"mean": 0.8, "harmonics": [{"n": 2, "a": 0.1, "b": 0.0}]}]}}}"#;
    let path = tmp.join("violating.json");
    std::fs::write(&path, bad).map_err(|e| e.to_string())?;
    let out = cli()
        .args(["verify-warped", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(tmp.join("violating"))
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    ok &= code == Some(3);
    parts.push(format!("violating curve exit code {code:?}"));
    ensure(ok, parts.join(", "))
}

/// 11. Two runs of one config and seed give byte-identical reports and plot data.
fn determinism(tmp: &Path) -> Outcome {
    let config = r#"{"suite": "all", "seed": 77, "space": {"kind": "sphere", "k1": 1.0},
        "generator": {"provenance": "random_frame_ode", "count": 3, "mean": [1.5, 2.5]},
        "base_point": {"kind": "random_interior", "fraction": 0.8},
        "spindle_table": {"k0": [0.5, 1.0]},
        "warped": {"metric": {"family": "perturbed_sine", "epsilon": 0.01, "t_max": 1.5},
                   "curves": {"source": "random", "count": 2, "mean": [0.5, 1.0], "amplitude": 0.04}}}"#;
    let path = tmp.join("det.json");
    std::fs::write(&path, config).map_err(|e| e.to_string())?;
    let mut dirs = Vec::new();
    for k in 0..2 {
        let dir = tmp.join(format!("det{k}"));
        let st = cli()
            .args(["verify-angle", "--config"])
            .arg(&path)
            .arg("--out")
            .arg(&dir)
            .output()
            .map_err(|e| e.to_string())?;
        if st.status.code() != Some(0) {
            return Err(format!("run {k} exited with {:?}", st.status.code()));
        }
        dirs.push(dir);
    }
    let mut files: Vec<String> = std::fs::read_dir(&dirs[0])
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n != "metadata.json")
        .collect();
    files.sort();
    let mut same = true;
    for f in &files {
        let a = std::fs::read(dirs[0].join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].join(f)).map_err(|e| e.to_string())?;
        same &= a == b;
    }
    let full = run_json(config)?;
    let again = run_json(config)?;
    let a = serde_json::to_string(&full).unwrap();
    let b = serde_json::to_string(&again).unwrap();
    let parsed: Value = serde_json::from_str(&a).unwrap();
    let suites = parsed["suites"].as_array().map(|s| s.len()).unwrap_or(0);
    ensure(
        same && a == b && files.len() >= 3 && suites == 5,
        format!(
            "{} files byte-identical across CLI runs; in-process report ({suites} suites) identical: {}",
            files.len(),
            a == b
        ),
    )
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let started = Instant::now();
    let suites = angle_suites();
    let criteria: Vec<Criterion> = vec![
        ("1 Euclidean sharpness", Box::new(euclidean_sharpness)),
        ("2 angle bound property suite", Box::new(|| angle_property_suite(suites.as_ref().map_err(Clone::clone)?))),
        ("3 angle ODE residual", Box::new(|| lemma1_residuals(suites.as_ref().map_err(Clone::clone)?))),
        ("4 spindle optimum, flat", Box::new(flat_spindle)),
        ("5 spindle optimum, curved", Box::new(curved_spindle)),
        ("6 width bound sharpness", Box::new(width_sharpness)),
        ("7 rewritten-form identity", Box::new(rewritten_identity)),
        ("8 Euclidean limit", Box::new(euclidean_limit)),
        ("9 curvature comparison on warped metrics", Box::new(lemma3_comparison)),
        ("10 angle and width bounds on warped metrics", Box::new(|| warped_theorems(tmp.path()))),
        ("11 determinism", Box::new(|| determinism(tmp.path()))),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass ({:.1}s)",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
