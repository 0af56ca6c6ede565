use serde::{Deserialize, Serialize};

use super::domain::SamplingDomain;
use super::estimate::VolumeEstimate;
use super::rho::{rho_d_with, RhoOptions};
use super::VolError;
use crate::polycore::PlanarPolyMap;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RatioPoint {
    pub scale: f64,
    pub numerator: VolumeEstimate,
    pub denominator: VolumeEstimate,
    pub ratio: f64,
    /// `r · sqrt((σ_n/n)² + (σ_d/d)²)`
    pub stderr: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct RatioSeries {
    pub scales: Vec<f64>,
    pub points: Vec<RatioPoint>,
}

impl RatioSeries {
    pub fn ratios(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ratio).collect()
    }

    /// One row per scale.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "scale,ratio,ratio_stderr,numerator,numerator_stderr,denominator,denominator_stderr,samples,seed\n",
        );
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                p.scale,
                p.ratio,
                p.stderr,
                p.numerator.value,
                p.numerator.stderr,
                p.denominator.value,
                p.denominator.stderr,
                p.numerator.samples,
                p.numerator.seed
            ));
        }
        out
    }
}

/// `ρ_{tD}(f∘g₁, f∘g₂) / ρ_{tD}(g₁, g₂)` for each scale `t`, with the same seed per scale.
pub fn contraction_ratio(
    f: &PlanarPolyMap,
    g1: &PlanarPolyMap,
    g2: &PlanarPolyMap,
    d: &SamplingDomain,
    scales: &[f64],
    samples: usize,
    seed: u64,
) -> Result<RatioSeries, VolError> {
    contraction_ratio_with(f, g1, g2, d, scales, samples, seed, RhoOptions::default())
}

#[allow(clippy::too_many_arguments)]
pub fn contraction_ratio_with(
    f: &PlanarPolyMap,
    g1: &PlanarPolyMap,
    g2: &PlanarPolyMap,
    d: &SamplingDomain,
    scales: &[f64],
    samples: usize,
    seed: u64,
    opts: RhoOptions,
) -> Result<RatioSeries, VolError> {
    if scales.is_empty() || scales.iter().any(|t| !(*t > 0.0)) || scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VolError::InvalidScales(format!("{scales:?} must be positive and strictly increasing")));
    }
    let (fg1, fg2) = (f.compose(g1), f.compose(g2));
    let mut points = Vec::with_capacity(scales.len());
    for &t in scales {
        let dt = d.dilated(t);
        let den = rho_d_with(g1, g2, &dt, samples, seed, opts)?;
        if den.value == 0.0 {
            return Err(VolError::DivisionByZeroDistance { scale: t });
        }
        let num = rho_d_with(&fg1, &fg2, &dt, samples, seed, opts)?;
        let ratio = num.value / den.value;
        let rel = |e: &VolumeEstimate| if e.value == 0.0 { 0.0 } else { e.stderr / e.value };
        let stderr = ratio.abs() * (rel(&num).powi(2) + rel(&den).powi(2)).sqrt();
        points.push(RatioPoint { scale: t, numerator: num, denominator: den, ratio, stderr });
    }
    Ok(RatioSeries { scales: scales.to_vec(), points })
}
