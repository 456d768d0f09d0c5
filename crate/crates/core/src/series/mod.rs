//! The symmetric Heun equation, its local solutions and an independent
//! numerical integrator used to cross-check them.

mod config;
mod integrate;
mod local;
mod recurrence;

pub use config::{DerivedParams, SymmetricHeunConfig};
pub use integrate::{integrate_path, integrate_segment, PathOptions};
pub(crate) use integrate::check_clearance;
pub use local::{
    frobenius_solution, taylor_solution, wronskian, Branch, BranchCuts, EvalOptions, Evaluation,
    LocalSolution, SolutionKind, DEFAULT_N_TERMS, MAX_N_TERMS,
};
pub use recurrence::recurrence_residual;

pub(crate) use local::branch_pow;

/// Integer-difference tolerance on `α_j - β_j` below which the Frobenius
/// pair at `z_j` is rejected.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Minimum distance from an expansion center to every singular point.
pub const SINGULAR_CENTER_TOL: f64 = 1e-12;
