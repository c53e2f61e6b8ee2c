//! Frank-Wolfe maximization of non-monotone DR-submodular functions over convex
//! subsets of the unit box.
//!
//! The solver ([`solver::fw_dis`]) follows a harmonic time grid
//! ([`schedule::Schedule`]) whose step coefficients keep every coordinate of the
//! iterate at least `1/sqrt(a_t)` away from 1. That headroom is what yields the
//! certificate `F(x_T) >= F*/4 - beta`, with `beta` from [`schedule::beta_bound`].
//!
//! The [`oracle`] module holds brute-force maximizers and property checkers that
//! verify the certificate and the intermediate inequalities on small instances.

pub mod error;
pub mod instances;
pub mod io;
pub mod objectives;
pub mod oracle;
pub mod point;
pub mod regions;
pub mod schedule;
pub mod solver;

pub use error::{Error, Result};
pub use objectives::{
    estimate_smoothness, finite_difference_gradient, MultilinearExtension, Objective, Quadratic, QuadraticSpec,
    SetFunctionTable,
};
pub use point::{join, meet};
pub use regions::{solve_lp, LpProblem, LpSolution, LpStatus, Region, RegionKind, Sense};
pub use schedule::{beta_bound, iterations_for_epsilon, EpsilonIterations, Schedule};
pub use solver::{
    classic_fw_baseline, fw_dis, lyapunov_series, FeasibilityChecks, IterationRecord, Method, SolveConfig, SolveTrace,
    StartMode, TraceSummary,
};
