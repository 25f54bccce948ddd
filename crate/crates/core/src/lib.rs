//! Kaczmarz's row-projection method accelerated by Shanks-type sequence transformations.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`.

// `!(a <= b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accel;
pub mod error;
pub mod kaczmarz;
pub mod linalg;
pub mod scalar;
pub mod transforms;

pub use accel::{
    accel_run, ak_run, plain_run, rk_run, AccelConfig, AccelRun, Fallback, Mode, StopRule,
};
pub use error::{Breakdown, BreakdownSite, Error, Result};
pub use kaczmarz::{
    block_sweep, iterate, projector_oracle, single_step, spectral_diagnostics, sweep,
};
pub use linalg::{build_gallery, GalleryKind, LinearSystem, NoiseSpec, RowMatrix};
pub use scalar::Scalar;
pub use transforms::{
    AuxPolicy, EpsilonKind, EpsilonTable, TransformKind, TransformTag, TransformWindow,
};

pub type LinearSystemF64 = linalg::LinearSystem<f64>;
pub type LinearSystemF32 = linalg::LinearSystem<f32>;
pub type RowMatrixF64 = linalg::RowMatrix<f64>;
pub type TransformKindF64 = transforms::TransformKind<f64>;
pub type AccelConfigF64 = accel::AccelConfig<f64>;
pub type AccelRunF64 = accel::AccelRun<f64>;
pub type SweepTraceF64 = kaczmarz::SweepTrace<f64>;
pub type EpsilonTableF64 = transforms::EpsilonTable<f64>;
