//! Cyclic and block Kaczmarz sweeps, plus explicit projectors and spectra for verification.

pub mod block;
pub mod projector;
pub mod spectral;
pub mod sweep;

pub use block::{block_sweep, BlockKaczmarz, BlockPartition};
pub use projector::{projector_oracle, ProjectorSet, PROJECTOR_GUARD};
pub use spectral::{
    apply_q, iteration_matrix, krylov_degree, spectral_diagnostics,
    spectral_diagnostics_with_guard, SpectralDiagnostics, SPECTRAL_GUARD,
};
pub use sweep::{iterate, single_step, step_in_place, sweep, sweep_in_place, sweeps, SweepTrace};
