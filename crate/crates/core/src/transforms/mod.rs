//! Shanks-type sequence transformations: MPE, RRE, MMPE and the topological transformation
//! through their coefficient systems, and the vector, topological and scalar epsilon algorithms.

pub mod closed;
pub mod epsilon;
pub mod kind;
pub mod window;

pub use closed::k1_closed_form;
pub use epsilon::{epsilon_transform, scalar_epsilon, EpsilonKind, EpsilonTable, BREAKDOWN_TOL};
pub use kind::{AuxPolicy, TransformKind, TransformTag};
pub use window::{
    combine, moment_matrix, required_points, solve_coefficients, solve_coefficients_with,
    transform_apply, transform_apply_with, write_diagnostics_csv, Coefficients, SolvePath,
    TransformWindow, WindowDiagnostics, MAX_CONDITION,
};
