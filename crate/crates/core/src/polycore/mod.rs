//! Exact bivariate polynomial arithmetic over Q + iQ and planar polynomial maps.

mod bivariate;
mod float;
pub mod json;
mod map;
mod rational;
mod univariate;

pub use bivariate::{BivariatePolynomial, Degree, Monomial};
pub use float::{evaluate, CompiledMap, CompiledPoly, ComplexPoint, FloatPoly, FloatPolyMap};
pub use map::{
    compose_maps, equal_by_grid, is_keller, jacobian_determinant, uniform_bound_on_compact,
    uniform_bound_on_compact_float, PlanarPolyMap,
};
pub use rational::GaussianRational;
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("evaluation overflowed to a non-finite value")]
    EvaluationOverflow,
    #[error("polynomial {which} has degree {degree}, above the bound {bound}")]
    DegreeBoundViolated { which: &'static str, degree: u32, bound: u32 },
    #[error("schema error: {0}")]
    Schema(String),
}
