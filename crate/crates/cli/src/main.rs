use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sphericity_core::bounds::K0Mode;
use sphericity_core::curves::ClosedCurve;
use sphericity_core::reports::{
    report_json, run_many, write_report, BasePointSpec, GeneratorSpec, OutputFormat, RunConfig, SpindleTableSpec,
    Suite, SuiteResult, SweepSpec,
};
use sphericity_core::{SpaceForm, SpaceKind};

/// Numerical certification of sharp angle and layer-width bounds for lambda-convex curves.
#[derive(Parser)]
#[command(name = "sphericity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run config (JSON). Repeat to run several configs in parallel.
    #[arg(long = "config", value_name = "PATH")]
    configs: Vec<PathBuf>,
    /// Output directory; without it the JSON report goes to standard output.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Both => OutputFormat::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Flat,
    Sphere,
    Hyperbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Declared,
    Measured,
}

#[derive(Subcommand)]
enum Command {
    /// Angle bound for curves from a config or a curve file.
    VerifyAngle {
        #[command(flatten)]
        common: Common,
        /// Curve file instead of a config.
        #[arg(long, value_name = "PATH", conflicts_with = "configs")]
        curve: Option<PathBuf>,
        /// Base point `x,y` in normal coordinates at the model origin (default: incenter).
        #[arg(long, value_name = "X,Y", requires = "curve")]
        base: Option<String>,
        #[arg(long, value_enum, default_value = "measured", requires = "curve")]
        k0_mode: Mode,
    },
    /// Spherical-layer width bound for curves from a config or a curve file.
    VerifyWidth {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH", conflicts_with = "configs")]
        curve: Option<PathBuf>,
    },
    /// Spindle widths `d(r)` and the optimum `(r0, d0)`.
    SpindleTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "flat")]
        space: Kind,
        #[arg(long, default_value_t = 1.0)]
        k1: f64,
        /// Comma-separated curvatures (default 0.5,1,2; k1 * (1.5,2,4) when hyperbolic).
        #[arg(long, value_delimiter = ',')]
        k0: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Curvature comparison and angle/width bounds on warped metrics (config only).
    VerifyWarped {
        #[command(flatten)]
        common: Common,
    },
    /// `d0` and angle bounds as `k1 -> 0`.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        k0: f64,
        #[arg(long, value_delimiter = ',')]
        k1: Vec<f64>,
    },
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunConfig::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn parse_base(s: &str) -> Result<BasePointSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        bail!("--base expects X,Y");
    }
    Ok(BasePointSpec::Chart { x: parts[0].trim().parse()?, y: parts[1].trim().parse()? })
}

fn curve_config(suite: Suite, path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let curve = ClosedCurve::from_json(&text).with_context(|| format!("in {}", path.display()))?;
    let mut cfg = RunConfig::new(suite);
    cfg.space = curve.space;
    cfg.generator = Some(GeneratorSpec::External { path: path.to_path_buf() });
    Ok(cfg)
}

/// Builds the configs for a subcommand; the subcommand fixes the suite.
fn configs(command: &Command) -> Result<Vec<(String, RunConfig)>> {
    let (suite, common) = match command {
        Command::VerifyAngle { common, .. } => (Suite::Angle, common),
        Command::VerifyWidth { common, .. } => (Suite::Width, common),
        Command::SpindleTable { common, .. } => (Suite::SpindleTable, common),
        Command::VerifyWarped { common } => (Suite::Warped, common),
        Command::Sweep { common, .. } => (Suite::Sweep, common),
    };
    let mut out = Vec::new();
    for path in &common.configs {
        let mut cfg = read_config(path)?;
        cfg.suite = suite;
        cfg.validate()?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
        out.push((stem, cfg));
    }
    if out.is_empty() {
        let cfg = match command {
            Command::VerifyAngle { curve: Some(p), base, k0_mode, .. } => {
                let mut cfg = curve_config(Suite::Angle, p)?;
                if let Some(b) = base {
                    cfg.base_point = parse_base(b)?;
                }
                cfg.k0_mode = match k0_mode {
                    Mode::Declared => K0Mode::Declared,
                    Mode::Measured => K0Mode::Measured,
                };
                cfg
            }
            Command::VerifyWidth { curve: Some(p), .. } => curve_config(Suite::Width, p)?,
            Command::SpindleTable { space, k1, k0, steps, .. } => {
                let mut cfg = RunConfig::new(Suite::SpindleTable);
                let kind = match space {
                    Kind::Flat => SpaceKind::Flat,
                    Kind::Sphere => SpaceKind::Sphere,
                    Kind::Hyperbolic => SpaceKind::Hyperbolic,
                };
                cfg.space = SpaceForm::new(kind, if kind == SpaceKind::Flat { 0.0 } else { *k1 })?;
                let mut spec = SpindleTableSpec::default_for(&cfg.space);
                if !k0.is_empty() {
                    spec.k0 = k0.clone();
                }
                spec.steps = *steps;
                cfg.spindle_table = Some(spec);
                cfg
            }
            Command::Sweep { k0, k1, .. } => {
                let mut cfg = RunConfig::new(Suite::Sweep);
                let mut spec = SweepSpec { k0: *k0, ..SweepSpec::default() };
                if !k1.is_empty() {
                    spec.k1 = k1.clone();
                }
                cfg.sweep = Some(spec);
                cfg
            }
            _ => bail!("this subcommand needs --config (or --curve)"),
        };
        out.push(("run".to_string(), cfg));
    }
    for (_, cfg) in &mut out {
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        if let Some(f) = common.format {
            cfg.output.format = f.into();
        }
        if let Some(dir) = &common.out {
            cfg.output.dir = Some(dir.clone());
        }
    }
    Ok(out)
}

fn emit(name: &str, cfg: &RunConfig, result: &SuiteResult, several: bool) -> Result<()> {
    match &cfg.output.dir {
        Some(dir) => {
            let dir = if several { dir.join(name) } else { dir.clone() };
            write_report(result, &dir, cfg.output.format).with_context(|| format!("writing to {}", dir.display()))?;
        }
        None => {
            if cfg.output.format.json() {
                print!("{}", report_json(result));
            }
        }
    }
    if several {
        println!("{name}: {}", result.summary_line());
    } else {
        println!("{}", result.summary_line());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    let runs = configs(&cli.command)?;
    let cfgs: Vec<RunConfig> = runs.iter().map(|(_, c)| c.clone()).collect();
    let results = run_many(&cfgs);
    let several = runs.len() > 1;
    let mut code = 0;
    for ((name, cfg), res) in runs.iter().zip(results) {
        match res {
            Ok(r) => {
                emit(name, cfg, &r, several)?;
                code = merge(code, r.exit_code());
            }
            Err(e) => {
                eprintln!("error: {name}: {e}");
                code = merge(code, 1);
            }
        }
    }
    Ok(code)
}

/// Config errors (1) first, then bound failures (2), then hypothesis violations (3).
fn merge(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        1 => 3,
        2 => 2,
        3 => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
