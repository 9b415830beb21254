//! Numerical certification of sharp angle and spherical-layer width bounds for
//! lambda-convex curves in the two-dimensional space forms and in rotationally
//! symmetric metrics with pinched curvature.

// `!(x > 0.0)` is used on purpose so that NaN lands on the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod curves;
pub mod error;
pub mod layer;
pub mod optimize;
pub mod reports;
pub mod space_forms;
pub mod spindles;
pub(crate) mod vec3;
pub mod warped;

pub use error::{GeomError, Result};
pub use space_forms::{CircleSpec, ModelPoint, ModelTangent, SpaceForm, SpaceKind};
