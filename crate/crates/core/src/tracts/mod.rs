//! Asymptotic tracts: canonical rational maps `R`, the Laurent expansion of
//! `F ∘ R`, dual maps `G_R`, their X = 0 components, implicit equations and
//! phantom-curve extraction.

mod canonical;
mod curves;
mod search;
mod sparse;
mod union;

pub use canonical::{
    compose_with_tract, dual_map, validate_canonical, CanonicalFlag, CanonicalRationalMap, CanonicalValidation,
    LaurentMap, LaurentPoly, TractJson,
};
pub use curves::{component_parametrization, implicitize, phantom_extract, PhantomExtraction};
pub use search::{tract_search, tract_search_report, FoundTract, SearchBounds, TractSearch};
pub use union::{
    asymptotic_union_check, sample_parameters, tract_components, Component, UnionCheckReport, UnionSample,
    CONTAINMENT_TOL, UNION_SAMPLES,
};

use crate::fibercount::FiberError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TractError {
    #[error("alpha must be positive")]
    InvalidAlpha,
    #[error("f∘R keeps negative powers of X (down to X^{min_x_exponent}): R is not an asymptotic tract")]
    NotPolynomial { min_x_exponent: i32 },
    #[error("parametrization is constant in both coordinates")]
    BothConstant,
    #[error("H(G_R) is not divisible by X")]
    NoPositiveValuation,
    #[error("H(G_R) vanishes identically")]
    IdenticallyZero,
    #[error("{0}")]
    Fiber(FiberError),
    #[error("schema error: {0}")]
    Schema(String),
}
