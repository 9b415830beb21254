use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{
    BasePointSpec, GeneratorSpec, RunConfig, SpindleTableSpec, Suite, SweepSpec, WarpedCurves, WarpedSuiteSpec,
};
use super::seeded::{self, object_rng, STREAM_BASE_POINTS, STREAM_CURVES, STREAM_WARPED};
use super::{
    Check, RunError, Series, Status, SuiteOutcome, SuiteResult, REPORT_SCHEMA_VERSION, TOOL_NAME, TOOL_VERSION,
};
use crate::bounds::{cos_phi_lower_bound, lemma1_residuals, verify_angle_bound, AngleBound, AngleReport};
use crate::curves::{
    make_circle, make_disc_intersection, make_frame_ode_curve, make_lune, make_support_curve, ClosedCurve,
};
use crate::error::GeomError;
use crate::layer::{incenter, layer_width};
use crate::space_forms::{ModelPoint, ModelTangent, SpaceForm, SpaceKind};
use crate::spindles::{d0_rewritten, spindle_optimum, spindle_optimum_numeric, spindle_rho};
use crate::vec3;
use crate::warped::{
    make_warped, make_warped_curve, verify_mu_comparison, verify_theorem2_on_warped, WarpedCurve, WarpedMetric,
    WarpedTheoremReport,
};

const MAX_DRAWS: usize = 100;

fn is_hypothesis(e: &GeomError) -> bool {
    matches!(e, GeomError::Hypothesis(_) | GeomError::Band { .. })
}

struct Built {
    label: String,
    index: usize,
    curve: ClosedCurve,
}

fn explicit_curve(space: &SpaceForm, spec: &GeneratorSpec, cfg: &RunConfig) -> Result<ClosedCurve, RunError> {
    let sampling = &cfg.sampling;
    let chart = |c: &[f64; 2]| space.chart_point(c[0], c[1]);
    Ok(match spec {
        GeneratorSpec::Circle { k0, center } => make_circle(space, &chart(center), *k0, sampling)?,
        GeneratorSpec::Lune { k0, r } => {
            let r = match r {
                Some(r) => *r,
                None => spindle_optimum(space, *k0)?.0,
            };
            make_lune(space, *k0, r, sampling)?
        }
        GeneratorSpec::DiscIntersection { k0, centers } => {
            let cs: Vec<ModelPoint> = centers.iter().map(chart).collect();
            make_disc_intersection(space, &cs, *k0, sampling)?
        }
        GeneratorSpec::SupportFunction { k0, support } => {
            if space.kind() != SpaceKind::Flat {
                return Err(RunError::Config("support-function curves are flat only".into()));
            }
            make_support_curve(support, *k0, sampling)?
        }
        GeneratorSpec::FrameOde { profile } => make_frame_ode_curve(space, profile, sampling)?,
        GeneratorSpec::External { path } => {
            let text = std::fs::read_to_string(path)?;
            let curve = ClosedCurve::from_json(&text)?;
            if curve.space != *space {
                return Err(RunError::Config(format!("curve file {} is not in the configured space", path.display())));
            }
            curve
        }
        _ => unreachable!("random generators are handled by the caller"),
    })
}

fn random_curve(space: &SpaceForm, spec: &GeneratorSpec, cfg: &RunConfig, i: usize) -> Result<ClosedCurve, RunError> {
    let mut rng = object_rng(cfg.seed, STREAM_CURVES, i);
    let mut last = None;
    for _ in 0..MAX_DRAWS {
        let built = match spec {
            GeneratorSpec::RandomSupport { k0, max_order, .. } => {
                if space.kind() != SpaceKind::Flat {
                    return Err(RunError::Config("support-function curves are flat only".into()));
                }
                let f = seeded::random_support_function(&mut rng, *k0, *max_order);
                make_support_curve(&f, *k0, &cfg.sampling)
            }
            GeneratorSpec::RandomFrameOde { mean, amplitude, .. } => {
                if !(mean[0] > seeded::curvature_floor(space) && mean[1] >= mean[0]) || !(0.0..1.0).contains(amplitude)
                {
                    return Err(RunError::Config(
                        "random_frame_ode needs floor < mean[0] <= mean[1] and amplitude in [0, 1)".into(),
                    ));
                }
                let p = seeded::random_frame_profile(&mut rng, space, *mean, *amplitude);
                make_frame_ode_curve(space, &p, &cfg.sampling)
            }
            GeneratorSpec::RandomDiscIntersection { k0, discs, spread, .. } => {
                let radius = space.circle_radius_of_curvature(*k0)?;
                let cs: Vec<ModelPoint> = seeded::random_disc_centers(&mut rng, radius, *discs, *spread)
                    .iter()
                    .map(|c| space.chart_point(c[0], c[1]))
                    .collect();
                make_disc_intersection(space, &cs, *k0, &cfg.sampling)
            }
            _ => unreachable!("explicit generators are handled by the caller"),
        };
        match built {
            Ok(c) => return Ok(c),
            Err(e @ (GeomError::NonClosure { .. } | GeomError::Rejected { .. })) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one draw").into())
}

fn build_curves(cfg: &RunConfig) -> Result<Vec<Built>, RunError> {
    let spec = cfg.generator.as_ref().ok_or_else(|| RunError::Config("missing generator".into()))?;
    let space = cfg.space;
    let count = match spec {
        GeneratorSpec::RandomSupport { count, .. }
        | GeneratorSpec::RandomFrameOde { count, .. }
        | GeneratorSpec::RandomDiscIntersection { count, .. } => Some(*count),
        _ => None,
    };
    match count {
        None => Ok(vec![Built { label: "0".into(), index: 0, curve: explicit_curve(&space, spec, cfg)? }]),
        Some(n) => (0..n)
            .into_par_iter()
            .map(|i| Ok(Built { label: i.to_string(), index: i, curve: random_curve(&space, spec, cfg, i)? }))
            .collect(),
    }
}

fn base_point(cfg: &RunConfig, b: &Built) -> Result<ModelPoint, GeomError> {
    let sp = b.curve.space;
    match cfg.base_point {
        BasePointSpec::Centroid => Ok(b.curve.centroid()),
        BasePointSpec::Incenter => Ok(incenter(&b.curve)?.center),
        BasePointSpec::Chart { x, y } => Ok(sp.chart_point(x, y)),
        BasePointSpec::RandomInterior { fraction } => {
            let inc = incenter(&b.curve)?;
            let off = seeded::random_offset(&mut object_rng(cfg.seed, STREAM_BASE_POINTS, b.index), fraction * inc.r);
            let (e1, e2) = sp.tangent_frame(&inc.center);
            let v = vec3::add(vec3::scale(e1, off[0]), vec3::scale(e2, off[1]));
            Ok(sp.exp_map(&ModelTangent::new(inc.center, v)))
        }
    }
}

fn strip_rows(mut report: AngleReport, keep: bool) -> AngleReport {
    if !keep {
        report.rows.clear();
    }
    report
}

fn angle_series(suite: Suite, name: String, report: &AngleReport) -> Series {
    let mut s = Series::new(suite, name, &["s", "t", "phi", "bound", "slack"]);
    s.rows = report
        .rows
        .iter()
        .map(|r| vec![r.s.into(), r.t.into(), r.phi.into(), r.bound_cos.into(), r.slack.into()])
        .collect();
    s
}

fn angle_check(name: String, report: &AngleReport) -> Check {
    let at = report.rows.iter().min_by(|a, b| a.slack.total_cmp(&b.slack)).map(|r| r.cos_phi).unwrap_or(f64::NAN);
    let measured = if at.is_nan() { report.bound_cos + report.min_slack } else { at };
    Check::new(name, measured, report.bound_cos, report.min_slack, Status::from_pass(report.verdict.passed()))
}

fn angle_one(cfg: &RunConfig, b: &Built) -> (Vec<Check>, Value, Option<Series>) {
    let name = |what: &str| format!("{what}[{}]", b.label);
    let o = match base_point(cfg, b) {
        Ok(o) => o,
        Err(e) if is_hypothesis(&e) => {
            return (
                vec![Check::hypothesis(name("angle"), &e)],
                json!({"curve": b.label, "error": e.to_string()}),
                None,
            )
        }
        Err(e) => {
            let c = Check::new(name("angle"), f64::NAN, f64::NAN, f64::NAN, Status::Fail).with_note(e.to_string());
            return (vec![c], json!({"curve": b.label, "error": e.to_string()}), None);
        }
    };
    let report = match verify_angle_bound(&b.curve, &o, cfg.k0_mode, cfg.tolerances.angle) {
        Ok(r) => r,
        Err(e) => {
            let c = if is_hypothesis(&e) {
                Check::hypothesis(name("angle"), &e)
            } else {
                Check::new(name("angle"), f64::NAN, f64::NAN, f64::NAN, Status::Fail).with_note(e.to_string())
            };
            return (vec![c], json!({"curve": b.label, "error": e.to_string()}), None);
        }
    };
    let mut checks = vec![angle_check(name("angle"), &report)];
    let mut ode = Value::Null;
    if cfg.ode_residuals {
        if let Ok(res) = lemma1_residuals(&b.curve, &o) {
            if !res.is_empty() {
                let tol = &cfg.tolerances;
                let within = res.iter().filter(|r| r.residual <= tol.ode).count() as f64 / res.len() as f64;
                let max = res.iter().map(|r| r.residual).fold(0.0, f64::max);
                checks.push(Check::new(
                    name("ode_fraction"),
                    within,
                    tol.ode_fraction,
                    within - tol.ode_fraction,
                    Status::from_pass(within >= tol.ode_fraction),
                ));
                checks.push(Check::new(
                    name("ode_max"),
                    max,
                    tol.ode_max,
                    tol.ode_max - max,
                    Status::from_pass(max <= tol.ode_max),
                ));
                ode = json!({"evaluated": res.len(), "fraction_within": within, "max_residual": max, "tolerance": tol.ode});
            }
        }
    }
    let series = cfg.output.rows.then(|| angle_series(Suite::Angle, format!("angle_{:03}", b.index), &report));
    let detail = json!({
        "curve": b.label,
        "provenance": b.curve.provenance,
        "samples": b.curve.len(),
        "kmin": b.curve.kmin,
        "base_point": o,
        "report": strip_rows(report, cfg.output.rows),
        "ode_residuals": ode,
    });
    (checks, detail, series)
}

fn angle_suite(cfg: &RunConfig, curves: &[Built]) -> (SuiteOutcome, Vec<Series>) {
    let parts: Vec<_> = curves.par_iter().map(|b| angle_one(cfg, b)).collect();
    let mut checks = Vec::new();
    let mut details = Vec::new();
    let mut series = Vec::new();
    for (c, d, s) in parts {
        checks.extend(c);
        details.push(d);
        series.extend(s);
    }
    (SuiteOutcome::new(Suite::Angle, checks, details), series)
}

fn width_suite(cfg: &RunConfig, curves: &[Built]) -> (SuiteOutcome, Vec<Series>) {
    let parts: Vec<_> = curves
        .par_iter()
        .map(|b| {
            let name = format!("width[{}]", b.label);
            match layer_width(&b.curve) {
                Ok(rep) => {
                    let ok = rep.margin >= -cfg.tolerances.width;
                    let mut c = Check::new(name, rep.d, rep.d0, rep.margin, Status::from_pass(ok));
                    if !rep.certificate.certified {
                        c = c.with_note("incenter certificate incomplete");
                    }
                    let row = vec![b.index as f64, rep.r, rep.rho1, rep.d, rep.d0, rep.margin];
                    (c, json!({"curve": b.label, "provenance": b.curve.provenance, "report": rep}), Some(row))
                }
                Err(e) if is_hypothesis(&e) => {
                    (Check::hypothesis(name, &e), json!({"curve": b.label, "error": e.to_string()}), None)
                }
                Err(e) => (
                    Check::new(name, f64::NAN, f64::NAN, f64::NAN, Status::Fail).with_note(e.to_string()),
                    json!({"curve": b.label, "error": e.to_string()}),
                    None,
                ),
            }
        })
        .collect();
    let mut series = Series::new(Suite::Width, "width", &["curve", "r", "rho1", "d", "d0", "margin"]);
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for (c, d, row) in parts {
        checks.push(c);
        details.push(d);
        if let Some(r) = row {
            series.rows.push(r.into_iter().map(Into::into).collect());
        }
    }
    (SuiteOutcome::new(Suite::Width, checks, details), vec![series])
}

fn kind_label(space: &SpaceForm) -> &'static str {
    match space.kind() {
        SpaceKind::Flat => "flat",
        SpaceKind::Sphere => "sphere",
        SpaceKind::Hyperbolic => "hyperbolic",
    }
}

fn spindle_suite(space: &SpaceForm, spec: &SpindleTableSpec) -> Result<(SuiteOutcome, Vec<Series>), RunError> {
    let mut table =
        Series::new(Suite::SpindleTable, "spindle_table", &["space", "k1", "k0", "r", "rho", "d", "r0", "d0"]);
    let mut series = Vec::new();
    let mut checks = Vec::new();
    let mut details = Vec::new();
    let steps = spec.steps.max(1);
    for (j, &k0) in spec.k0.iter().enumerate() {
        let radius = space.circle_radius_of_curvature(k0)?;
        let (r0, d0) = spindle_optimum(space, k0)?;
        let (rn, dn) = spindle_optimum_numeric(space, k0)?;
        let label = format!("k0={k0}");
        // slack: tolerance left over in r (1e-7) and d (1e-9), whichever is tighter
        let slack = (1e-7 - (r0 - rn).abs()).min(1e-9 - (d0 - dn).abs());
        checks.push(
            Check::new(format!("spindle_optimum[{label}]"), dn, d0, slack, Status::from_pass(slack >= 0.0))
                .with_note(format!("numeric r0 {rn}, closed form r0 {r0}")),
        );
        if space.kind() != SpaceKind::Flat {
            let dr = d0_rewritten(space, k0)?;
            let diff = (dr - d0).abs();
            checks.push(Check::new(
                format!("d0_rewritten[{label}]"),
                dr,
                d0,
                1e-10 - diff,
                Status::from_pass(diff <= 1e-10),
            ));
        }
        let mut s = Series::new(Suite::SpindleTable, format!("spindle_{j:03}"), &["r", "rho", "d"]);
        let mut dmax: f64 = 0.0;
        for i in 0..=steps {
            let r = radius * i as f64 / steps as f64;
            let rho = spindle_rho(space, k0, r)?;
            let d = (rho - r).max(0.0);
            dmax = dmax.max(d);
            table.rows.push(vec![
                kind_label(space).into(),
                space.k1().into(),
                k0.into(),
                r.into(),
                rho.into(),
                d.into(),
                r0.into(),
                d0.into(),
            ]);
            s.rows.push(vec![r.into(), rho.into(), d.into()]);
        }
        checks.push(Check::new(
            format!("spindle_rows[{label}]"),
            dmax,
            d0,
            d0 - dmax,
            Status::from_pass(dmax <= d0 + 1e-14),
        ));
        details.push(json!({"k0": k0, "radius": radius, "r0": r0, "d0": d0, "numeric_r0": rn, "numeric_d0": dn}));
        series.push(s);
    }
    series.insert(0, table);
    Ok((SuiteOutcome::new(Suite::SpindleTable, checks, details), series))
}

/// Largest gap between the curved and the flat angle bound over `h = 0.1 R, ..., 0.9 R`.
fn angle_limit_gap(space: &SpaceForm, k0: f64) -> Result<f64, GeomError> {
    let flat = SpaceForm::flat();
    let r = space.circle_radius_of_curvature(k0)?.min(flat.circle_radius_of_curvature(k0)?);
    let mut gap: f64 = 0.0;
    for j in 1..=9 {
        let h = r * j as f64 / 10.0;
        let a = cos_phi_lower_bound(&AngleBound::new(*space, k0, h)?)?;
        let b = cos_phi_lower_bound(&AngleBound::new(flat, k0, h)?)?;
        gap = gap.max((a - b).abs());
    }
    Ok(gap)
}

fn sweep_suite(spec: &SweepSpec) -> Result<(SuiteOutcome, Vec<Series>), RunError> {
    let k0 = spec.k0;
    let (_, flat_d0) = spindle_optimum(&SpaceForm::flat(), k0)?;
    let mut checks = Vec::new();
    let mut series = Vec::new();
    let mut details = Vec::new();
    for kind in [SpaceKind::Sphere, SpaceKind::Hyperbolic] {
        let label = if kind == SpaceKind::Sphere { "sphere" } else { "hyperbolic" };
        let mut width = Series::new(Suite::Sweep, format!("sweep_width_{label}"), &["k1", "d0"]);
        let mut angle = Series::new(Suite::Sweep, format!("sweep_angle_{label}"), &["k1", "max_bound_gap"]);
        for &k1 in &spec.k1 {
            if kind == SpaceKind::Hyperbolic && k1 >= k0 {
                continue;
            }
            let space = SpaceForm::new(kind, k1)?;
            let (_, d0) = spindle_optimum(&space, k0)?;
            let gap = angle_limit_gap(&space, k0)?;
            width.rows.push(vec![k1.into(), d0.into()]);
            angle.rows.push(vec![k1.into(), gap.into()]);
            details
                .push(json!({"space": label, "k1": k1, "k0": k0, "d0": d0, "flat_d0": flat_d0, "max_bound_gap": gap}));
            if k1 <= 1e-3 {
                let dd = (d0 - flat_d0).abs();
                checks.push(Check::new(
                    format!("d0_limit[{label},k1={k1}]"),
                    dd,
                    1e-5,
                    1e-5 - dd,
                    Status::from_pass(dd <= 1e-5),
                ));
                checks.push(Check::new(
                    format!("angle_limit[{label},k1={k1}]"),
                    gap,
                    1e-4,
                    1e-4 - gap,
                    Status::from_pass(gap <= 1e-4),
                ));
            }
        }
        series.push(width);
        series.push(angle);
    }
    Ok((SuiteOutcome::new(Suite::Sweep, checks, details), series))
}

fn warped_checks(i: &str, rep: &WarpedTheoremReport, width_tol: f64) -> Vec<Check> {
    let mut out = vec![angle_check(format!("warped_angle[{i}]"), &rep.angle)];
    if let Some(w) = &rep.width {
        out.push(Check::new(
            format!("warped_width[{i}]"),
            w.d,
            w.d0,
            w.margin,
            Status::from_pass(w.margin >= -width_tol),
        ));
    }
    out
}

fn warped_suite(cfg: &RunConfig, spec: &WarpedSuiteSpec) -> Result<(SuiteOutcome, Vec<Series>), RunError> {
    let tol = &cfg.tolerances;
    let metric: WarpedMetric = match make_warped(spec.metric) {
        Ok(m) => m,
        Err(e) if is_hypothesis(&e) => {
            return Ok((SuiteOutcome::new(Suite::Warped, vec![Check::hypothesis("metric", &e)], vec![]), vec![]));
        }
        Err(e) => return Err(e.into()),
    };
    let mut checks = Vec::new();
    let mut details = vec![json!({"metric": metric})];
    let mut series = Vec::new();
    let fd = metric.finite_difference_curvature_error();
    checks.push(Check::new(
        "curvature_fd",
        fd,
        tol.curvature_fd,
        tol.curvature_fd - fd,
        Status::from_pass(fd <= tol.curvature_fd),
    ));
    match verify_mu_comparison(&metric, tol.lemma3) {
        Ok(rep) => {
            checks.push(Check::new(
                "mu_comparison",
                rep.min_slack,
                0.0,
                rep.min_slack,
                Status::from_pass(rep.verdict.passed()),
            ));
            let mut s = Series::new(Suite::Warped, "warped_mu", &["t", "mu_n", "mu0", "slack"]);
            s.rows = rep.rows.iter().map(|r| vec![r.t.into(), r.mu_n.into(), r.mu0.into(), r.slack.into()]).collect();
            series.push(s);
            details.push(json!({"mu_comparison": {"comparison": rep.comparison, "min_slack": rep.min_slack, "radii": rep.rows.len()}}));
        }
        Err(e) if is_hypothesis(&e) => {
            checks.push(Check::hypothesis("mu_comparison", &e));
            return Ok((SuiteOutcome::new(Suite::Warped, checks, details), series));
        }
        Err(e) => return Err(e.into()),
    }

    type Judged = (String, Result<(WarpedCurve, WarpedTheoremReport), GeomError>, usize);
    let judged: Vec<Judged> = match &spec.curves {
        WarpedCurves::Profiles { profiles } => profiles
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let res = make_warped_curve(&metric, p, spec.samples)
                    .and_then(|c| verify_theorem2_on_warped(&c, tol.angle).map(|r| (c, r)));
                (i.to_string(), res, 0)
            })
            .collect(),
        WarpedCurves::Random { count, mean, amplitude, max_attempts } => (0..*count)
            .into_par_iter()
            .map(|i| {
                let mut rng = object_rng(cfg.seed, STREAM_WARPED, i);
                let mut rejected = 0;
                let mut last = GeomError::Hypothesis("no candidate drawn".into());
                for _ in 0..*max_attempts {
                    let p = seeded::random_radial_profile(&mut rng, *mean, *amplitude);
                    let res = make_warped_curve(&metric, &p, spec.samples)
                        .and_then(|c| verify_theorem2_on_warped(&c, tol.angle).map(|r| (c, r)));
                    match res {
                        Ok(ok) => return (i.to_string(), Ok(ok), rejected),
                        Err(e) => {
                            rejected += 1;
                            last = e;
                        }
                    }
                }
                (i.to_string(), Err(last), rejected)
            })
            .collect(),
    };
    for (label, res, rejected) in judged {
        match res {
            Ok((curve, rep)) => {
                checks.extend(warped_checks(&label, &rep, tol.width));
                if cfg.output.rows {
                    series.push(angle_series(Suite::Warped, format!("warped_angle_{label:0>3}"), &rep.angle));
                }
                let mut rep = rep;
                if !cfg.output.rows {
                    rep.angle.rows.clear();
                }
                details.push(
                    json!({"curve": label, "profile": curve.profile, "rejected_candidates": rejected, "report": rep}),
                );
            }
            Err(e) if is_hypothesis(&e) => {
                checks.push(Check::hypothesis(format!("warped_angle[{label}]"), &e));
                details.push(json!({"curve": label, "error": e.to_string(), "rejected_candidates": rejected}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((SuiteOutcome::new(Suite::Warped, checks, details), series))
}

/// Executes the suites selected by `config`. Outputs depend only on the config.
pub fn run(config: &RunConfig) -> Result<SuiteResult, RunError> {
    config.validate()?;
    let suites: Vec<Suite> = match config.suite {
        Suite::All => {
            let mut v = Vec::new();
            if config.generator.is_some() {
                v.extend([Suite::Angle, Suite::Width]);
            }
            v.push(Suite::SpindleTable);
            if config.warped.is_some() {
                v.push(Suite::Warped);
            }
            v.push(Suite::Sweep);
            v
        }
        s => vec![s],
    };
    let curves = if suites.iter().any(|s| matches!(s, Suite::Angle | Suite::Width)) {
        build_curves(config)?
    } else {
        Vec::new()
    };
    let mut outcomes = Vec::new();
    let mut series = Vec::new();
    for s in suites {
        let (o, sr) = match s {
            Suite::Angle => angle_suite(config, &curves),
            Suite::Width => width_suite(config, &curves),
            Suite::SpindleTable => {
                let spec = config.spindle_table.clone().unwrap_or_else(|| SpindleTableSpec::default_for(&config.space));
                spindle_suite(&config.space, &spec)?
            }
            Suite::Sweep => sweep_suite(&config.sweep.clone().unwrap_or_default())?,
            Suite::Warped => warped_suite(config, config.warped.as_ref().expect("validated"))?,
            Suite::All => unreachable!(),
        };
        outcomes.push(o);
        series.extend(sr);
    }
    let status = outcomes.iter().map(|o| o.status).max().unwrap_or(Status::Pass);
    Ok(SuiteResult {
        schema_version: REPORT_SCHEMA_VERSION,
        tool: TOOL_NAME.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        config_hash: config.hash(),
        seed: config.seed,
        status,
        suites: outcomes,
        series,
    })
}

/// Runs independent configs in parallel; results keep the input order.
pub fn run_many(configs: &[RunConfig]) -> Vec<Result<SuiteResult, RunError>> {
    configs.par_iter().map(run).collect()
}
