//! Coverage planning for wiping rigid surfaces with a deformable tool.
//!
//! The crate takes the point cloud of a rigid object, predicts which points
//! a compliant tool touches when pressed at a given contact point and yaw,
//! samples sets of presses that jointly cover the whole surface, and orders
//! the smallest set into a short open path with 2-opt.
//!
//! * [`geometry`]: point clouds, kd-tree, normal estimation, synthetic dishes.
//! * [`contact`]: elastic-foundation press model, contact labeling, predictors.
//! * [`dataset`]: labeled interaction generation with train/val/test splits.
//! * [`planner`]: set-cover waypoint sampling and 2-opt sequencing.
//! * [`evaluator`]: noisy execution replay, coverage, F1 and benchmarks.
//!
//! Everything is generic over the scalar type ([`Real`], `f32` or `f64`);
//! the `*64` aliases below fix it to `f64`.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod contact;
pub mod dataset;
pub mod error;
pub mod evaluator;
pub mod geometry;
pub mod planner;
pub mod rng;
mod scalar;
mod vec3;

pub use error::{Error, Result};
pub use scalar::Real;
pub use vec3::Vec3;

/// Version of every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

pub type Vec3f64 = Vec3<f64>;
pub type PointCloud64 = geometry::PointCloud<f64>;
pub type IndexedCloud64 = geometry::IndexedCloud<f64>;
pub type ObjectSpec64 = geometry::ObjectSpec<f64>;
pub type SpongeModel64 = contact::SpongeModel<f64>;
pub type ToolPose64 = contact::ToolPose<f64>;
pub type PressResult64 = contact::PressResult<f64>;
pub type Trajectory64 = planner::Trajectory<f64>;
pub type PlanConfig64 = planner::PlanConfig<f64>;
pub type NoiseModel64 = evaluator::NoiseModel<f64>;
pub type CoverageReport64 = evaluator::CoverageReport<f64>;

pub type PointCloud32 = geometry::PointCloud<f32>;
pub type SpongeModel32 = contact::SpongeModel<f32>;
pub type Trajectory32 = planner::Trajectory<f32>;
