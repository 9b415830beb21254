//! JSON form of a sampled curve.

use serde::{Deserialize, Serialize};

use super::{ClosedCurve, CurveSample, Provenance};
use crate::error::{GeomError, Result};
use crate::space_forms::{ModelPoint, SpaceForm, SpaceKind};
use crate::vec3::Vec3;

pub const CURVE_FORMAT_VERSION: u32 = 1;

/// One sample. Coordinates have 2 entries in the plane and 3 on the curved models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub coords: Vec<f64>,
    pub s: f64,
    pub kappa: f64,
    pub corner: bool,
    pub tangent: Vec<f64>,
    pub normal_out: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub version: u32,
    pub space: SpaceForm,
    pub provenance: Provenance,
    pub total_length: f64,
    pub kmin: f64,
    #[serde(default)]
    pub declared_k0: Option<f64>,
    pub samples: Vec<SampleRecord>,
}

fn pack(kind: SpaceKind, v: Vec3) -> Vec<f64> {
    match kind {
        SpaceKind::Flat => vec![v[0], v[1]],
        _ => v.to_vec(),
    }
}

fn unpack(kind: SpaceKind, v: &[f64], what: &str, i: usize) -> Result<Vec3> {
    match (kind, v.len()) {
        (SpaceKind::Flat, 2) => Ok([v[0], v[1], 0.0]),
        (SpaceKind::Sphere | SpaceKind::Hyperbolic, 3) => Ok([v[0], v[1], v[2]]),
        (_, n) => Err(GeomError::Parse(format!("sample {i}: {what} has {n} coordinates"))),
    }
}

impl ClosedCurve {
    pub fn to_file(&self) -> CurveFile {
        let kind = self.space.kind();
        CurveFile {
            version: CURVE_FORMAT_VERSION,
            space: self.space,
            provenance: self.provenance,
            total_length: self.total_length,
            kmin: self.kmin,
            declared_k0: self.declared_k0,
            samples: self
                .samples
                .iter()
                .map(|s| SampleRecord {
                    coords: pack(kind, s.point.coords),
                    s: s.s,
                    kappa: s.kappa,
                    corner: s.corner,
                    tangent: pack(kind, s.tangent),
                    normal_out: pack(kind, s.normal_out),
                })
                .collect(),
        }
    }

    /// Rebuilds a curve, checking every point against its model.
    pub fn from_file(file: &CurveFile) -> Result<Self> {
        if file.version != CURVE_FORMAT_VERSION {
            return Err(GeomError::Parse(format!("unsupported curve format version {}", file.version)));
        }
        let kind = file.space.kind();
        let samples = file
            .samples
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let point = ModelPoint::new(unpack(kind, &r.coords, "coords", i)?);
                file.space.check_point(&point)?;
                Ok(CurveSample {
                    point,
                    s: r.s,
                    tangent: unpack(kind, &r.tangent, "tangent", i)?,
                    normal_out: unpack(kind, &r.normal_out, "normal_out", i)?,
                    kappa: r.kappa,
                    corner: r.corner,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if samples.len() < 8 {
            return Err(GeomError::Parse("a curve needs at least 8 samples".into()));
        }
        Ok(ClosedCurve {
            space: file.space,
            samples,
            total_length: file.total_length,
            kmin: file.kmin,
            provenance: file.provenance,
            declared_k0: file.declared_k0,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("curve serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CurveFile = serde_json::from_str(text).map_err(|e| GeomError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}
