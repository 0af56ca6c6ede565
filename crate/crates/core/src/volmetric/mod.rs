//! Monte Carlo volumes, the symmetric-difference metric `ρ_D` and the
//! dilation experiments built on it.

mod domain;
mod estimate;
mod ratio;
mod rho;

pub use domain::{image_bounding_box, image_cover, Box4, DomainShape, SamplingDomain, IMAGE_SUBDIVISIONS};
pub use estimate::{combined_stderr, strata_per_axis, stratified_integral, stratified_integral_on, VolumeEstimate, MIN_SAMPLES};
pub use ratio::{contraction_ratio, contraction_ratio_with, RatioPoint, RatioSeries};
pub use rho::{
    exact_inverse, image_membership, multiplicity_volume, rho_d, rho_d_with, PreimageCounter, RhoOptions, Sampler,
    Weighting,
};

use crate::fibercount::FiberError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VolError {
    #[error("{0}")]
    Fiber(#[from] FiberError),
    #[error("sampling box is degenerate or overflowed: {0}")]
    BoxOverflow(String),
    #[error("denominator distance estimate is zero at scale {scale}")]
    DivisionByZeroDistance { scale: f64 },
    #[error("{samples} samples requested, at least {minimum} required")]
    TooFewSamples { samples: usize, minimum: usize },
    #[error("invalid scales: {0}")]
    InvalidScales(String),
}
