//! Drivers combining Kaczmarz sweeps with a sequence transformation: accelerate alongside (AK)
//! or accelerate and restart (RK).

pub mod config;
pub mod driver;
pub mod run;
pub mod stop;

pub use config::{AccelConfig, Fallback, Mode, StopRule};
pub use driver::{accel_run, ak_run, plain_run, rk_run};
pub use run::{fmt_opt, AccelRun, RunRecord, StopReason, CSV_HEADER};
pub use stop::{fires_at, stopping_signal};
