//! Fibers `F⁻¹(a, b)` by exact elimination and numerical back-substitution,
//! and the geometric degree `d_F` (the generic fiber cardinality).

mod resultant;
mod roots;
mod solver;

pub use resultant::{generic_resultant, resultant_eliminate_y, resultant_in_y};
pub use roots::{all_roots, cluster, univariate_roots, RootCluster, UnivariatePolynomial, MAX_ABERTH_ITERATIONS};
pub use solver::{
    fiber_stats, geometric_degree, geometric_degree_report, solve_fiber, DegreeReport, FiberResult, FiberSolver,
    FiberStats,
    DEFAULT_TOL, DEFAULT_TRIALS, TRIAL_RADIUS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiberError {
    #[error("neither polynomial depends on Y")]
    BothConstantInY,
    #[error("root finder did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("resultant vanishes identically: fiber is positive-dimensional or the map is not dominant")]
    ResultantVanishes,
    #[error("observed {observed} fiber points, above the Bezout bound {bound}")]
    Unstable { observed: usize, bound: usize },
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}
