use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::RunError;
use crate::bounds::K0Mode;
use crate::curves::{FourierProfile, Sampling, SupportFunction};
use crate::space_forms::{SpaceForm, SpaceKind};
use crate::warped::{RadialProfile, WarpSpec};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Angle,
    Width,
    SpindleTable,
    Warped,
    Sweep,
    All,
}

impl Suite {
    pub fn label(self) -> &'static str {
        match self {
            Suite::Angle => "angle",
            Suite::Width => "width",
            Suite::SpindleTable => "spindle_table",
            Suite::Warped => "warped",
            Suite::Sweep => "sweep",
            Suite::All => "all",
        }
    }
}

/// Curve source. Explicit variants build one curve; `random_*` variants draw `count`
/// curves from the run's seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Circle {
        k0: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// Lune of half-width `r`; the width-maximizing `r0` when omitted.
    Lune {
        k0: f64,
        #[serde(default)]
        r: Option<f64>,
    },
    DiscIntersection {
        k0: f64,
        centers: Vec<[f64; 2]>,
    },
    SupportFunction {
        k0: f64,
        support: SupportFunction,
    },
    FrameOde {
        profile: FourierProfile,
    },
    /// A curve file written by this tool.
    External {
        path: PathBuf,
    },
    RandomSupport {
        count: usize,
        #[serde(default = "half")]
        k0: f64,
        #[serde(default = "five")]
        max_order: u32,
    },
    RandomFrameOde {
        count: usize,
        /// Range of the mean curvature.
        mean: [f64; 2],
        /// Harmonic amplitude as a fraction of the gap between mean and curvature floor.
        #[serde(default = "point_six")]
        amplitude: f64,
    },
    RandomDiscIntersection {
        count: usize,
        k0: f64,
        #[serde(default = "three")]
        discs: usize,
        /// Centres are drawn within `spread * R` of the origin.
        #[serde(default = "half")]
        spread: f64,
    },
}

fn half() -> f64 {
    0.5
}
fn point_six() -> f64 {
    0.6
}
fn five() -> u32 {
    5
}
fn three() -> usize {
    3
}
fn yes() -> bool {
    true
}

/// Base point for the angle suite, in geodesic normal coordinates at the model origin
/// for `chart`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasePointSpec {
    Centroid,
    #[default]
    Incenter,
    Chart {
        x: f64,
        y: f64,
    },
    /// Uniform in the disc of radius `fraction * r` about the incenter.
    RandomInterior {
        fraction: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub angle: f64,
    pub width: f64,
    pub lemma3: f64,
    /// Residual of the angle ODE most samples must meet.
    pub ode: f64,
    pub ode_fraction: f64,
    /// Residual every sample must meet.
    pub ode_max: f64,
    pub curvature_fd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            angle: 1e-9,
            width: 1e-7,
            lemma3: 1e-9,
            ode: 1e-4,
            ode_fraction: 0.99,
            ode_max: 1e-3,
            curvature_fd: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpindleTableSpec {
    pub k0: Vec<f64>,
    #[serde(default = "twenty")]
    pub steps: usize,
}

fn twenty() -> usize {
    20
}

impl Default for SpindleTableSpec {
    fn default() -> Self {
        SpindleTableSpec { k0: vec![0.5, 1.0, 2.0], steps: 20 }
    }
}

impl SpindleTableSpec {
    /// The default table for `space`. Hyperbolic circles need `k0 > k1`, so there the
    /// curvatures are `k1 * (1.5, 2, 4)`.
    pub fn default_for(space: &SpaceForm) -> Self {
        match space.kind() {
            SpaceKind::Hyperbolic => {
                SpindleTableSpec { k0: [1.5, 2.0, 4.0].iter().map(|q| q * space.k1()).collect(), steps: 20 }
            }
            _ => Self::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum WarpedCurves {
    Profiles {
        profiles: Vec<RadialProfile>,
    },
    /// `rho = mean + a2 cos 2theta + b2 sin 2theta + a4 cos 4theta + b4 sin 4theta`, with
    /// candidates that fail the hypotheses redrawn.
    Random {
        count: usize,
        mean: [f64; 2],
        amplitude: f64,
        #[serde(default = "max_attempts")]
        max_attempts: usize,
    },
}

fn max_attempts() -> usize {
    1000
}

fn samples_4096() -> usize {
    4096
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpedSuiteSpec {
    pub metric: WarpSpec,
    pub curves: WarpedCurves,
    #[serde(default = "samples_4096")]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub k0: f64,
    pub k1: Vec<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec { k0: 1.0, k1: vec![1.0, 0.5, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3, 1e-4] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        self != OutputFormat::Csv
    }

    pub fn csv(self) -> bool {
        self != OutputFormat::Json
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub format: OutputFormat,
    /// Per-sample rows in the JSON report and per-curve plot series.
    pub rows: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: None, format: OutputFormat::Both, rows: true }
    }
}

/// One verification run. Everything the run does is determined by this document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "config_version")]
    pub version: u32,
    pub suite: Suite,
    #[serde(default = "flat")]
    pub space: SpaceForm,
    #[serde(default)]
    pub generator: Option<GeneratorSpec>,
    #[serde(default)]
    pub base_point: BasePointSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub k0_mode: K0Mode,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub spindle_table: Option<SpindleTableSpec>,
    #[serde(default)]
    pub warped: Option<WarpedSuiteSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Whether per-curve checks include the angle ODE residuals.
    #[serde(default = "yes")]
    pub ode_residuals: bool,
}

fn config_version() -> u32 {
    CONFIG_VERSION
}

fn flat() -> SpaceForm {
    SpaceForm::flat()
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            suite,
            space: SpaceForm::flat(),
            generator: None,
            base_point: BasePointSpec::default(),
            seed: 0,
            sampling: Sampling::default(),
            k0_mode: K0Mode::default(),
            tolerances: Tolerances::default(),
            spindle_table: None,
            warped: None,
            sweep: None,
            output: OutputSpec::default(),
            ode_residuals: true,
        }
    }

    /// Parses a JSON config; errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let err = |m: &str| Err(RunError::Config(m.to_string()));
        if self.version != CONFIG_VERSION {
            return err(&format!("unsupported config version {}", self.version));
        }
        if matches!(self.suite, Suite::Angle | Suite::Width) && self.generator.is_none() {
            return err("the angle and width suites need a generator");
        }
        if self.suite == Suite::Warped && self.warped.is_none() {
            return err("the warped suite needs a warped section");
        }
        if self.sampling.samples < 16 || self.sampling.max_samples < self.sampling.samples {
            return err("sampling needs 16 <= samples <= max_samples");
        }
        if let BasePointSpec::RandomInterior { fraction } = self.base_point {
            if !(0.0..1.0).contains(&fraction) {
                return err("random_interior fraction must lie in [0, 1)");
            }
        }
        Ok(())
    }

    /// SHA-256 of the compact JSON form with the output section reset, so the hash
    /// identifies what was computed, not where it was written.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputSpec::default();
        let text = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
