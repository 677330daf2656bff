//! Coverage, handover cost and average throughput for conventional and
//! handover-skipping association in Poisson cellular networks, with Monte
//! Carlo engines that check the analytical results.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for `f32`
//! and `f64`); the `*F64` / `*F32` aliases below fix it.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod simulation;

pub use analysis::{CoverageState, HoScheme, NetworkParams};
pub use error::{Error, Result};
pub use geometry::{Point2, PointPattern};
pub use quadrature::{QuadratureSettings, TailRule};
pub use scalar::{db_to_linear, linear_to_db, Real};
pub use simulation::{CoverageEstimate, TrajectoryTrace};

pub type NetworkParamsF64 = NetworkParams<f64>;
pub type NetworkParamsF32 = NetworkParams<f32>;
pub type QuadratureSettingsF64 = QuadratureSettings<f64>;
pub type QuadratureSettingsF32 = QuadratureSettings<f32>;
pub type PointPatternF64 = PointPattern<f64>;
pub type PointPatternF32 = PointPattern<f32>;
pub type CoverageEstimateF64 = CoverageEstimate<f64>;
pub type TrajectoryTraceF64 = TrajectoryTrace<f64>;
pub type TrajectoryTraceF32 = TrajectoryTrace<f32>;
