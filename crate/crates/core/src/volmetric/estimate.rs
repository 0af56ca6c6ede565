use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::domain::Box4;
use super::VolError;
use crate::rng::CounterRng;

pub const MIN_SAMPLES: usize = 10_000;
pub const MAX_STRATA_PER_AXIS: usize = 16;

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Pooled over strata: `V/S · sqrt(Σ_h s_h² / n_h)`.
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// The box that was sampled.
    pub sampling_box: Box4,
}

impl VolumeEstimate {
    /// A value that is exact without sampling (e.g. `ρ(F, F) = 0`).
    pub fn exact(value: f64, samples: usize, seed: u64, sampling_box: Box4) -> Self {
        VolumeEstimate { value, stderr: 0.0, samples, seed, sampling_box }
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.value - target).abs() <= sigmas * self.stderr
    }
}

/// `sqrt(Σ σ²)`
pub fn combined_stderr(parts: &[f64]) -> f64 {
    parts.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// Strata per axis: 16, or fewer so that each stratum gets two samples.
pub fn strata_per_axis(samples: usize) -> usize {
    let s = ((samples as f64 / 2.0).powf(0.25)).floor() as usize;
    s.clamp(1, MAX_STRATA_PER_AXIS)
}

#[derive(Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn variance_of_mean(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64 / self.n as f64
        }
    }
}

/// `∫_box h` by stratified sampling.
///
/// The box is cut into `s⁴` equal strata; sample `i` falls in stratum
/// `i mod s⁴` at a position drawn from the counter stream `i`. Strata are
/// evaluated in parallel and merged in stratum order, so the result does not
/// depend on the worker count.
pub fn stratified_integral<F>(
    bx: &Box4,
    samples: usize,
    rng: &CounterRng,
    integrand: F,
) -> Result<(f64, f64), VolError>
where
    F: Fn([f64; 4]) -> Result<f64, VolError> + Sync,
{
    stratified_integral_on(bx, None, samples, rng, integrand)
}

/// As [`stratified_integral`], with the integrand known to vanish outside
/// the union of `support`. Strata that miss every support box contribute an
/// exact zero and receive no samples; the sample budget goes to the rest.
pub fn stratified_integral_on<F>(
    bx: &Box4,
    support: Option<&[Box4]>,
    samples: usize,
    rng: &CounterRng,
    integrand: F,
) -> Result<(f64, f64), VolError>
where
    F: Fn([f64; 4]) -> Result<f64, VolError> + Sync,
{
    let s = strata_per_axis(samples);
    let strata = s.pow(4);
    let width: [f64; 4] = std::array::from_fn(|k| (bx.hi[k] - bx.lo[k]) / s as f64);
    let active: Vec<usize> = match support {
        None => (0..strata).collect(),
        Some(boxes) => active_strata(bx, s, boxes),
    };
    let n_active = active.len();
    if n_active == 0 {
        return Ok((0.0, 0.0));
    }
    let per_stratum: Vec<Welford> = (0..n_active)
        .into_par_iter()
        .with_min_len(64)
        .map(|slot| {
            let mut cell = [0usize; 4];
            let mut rest = active[slot];
            for c in cell.iter_mut() {
                *c = rest % s;
                rest /= s;
            }
            let mut acc = Welford::default();
            let mut i = slot;
            while i < samples {
                let u = rng.uniform4(i as u64);
                let x: [f64; 4] = std::array::from_fn(|k| bx.lo[k] + (cell[k] as f64 + u[k]) * width[k]);
                acc.push(integrand(x)?);
                i += n_active;
            }
            Ok(acc)
        })
        .collect::<Result<_, VolError>>()?;
    let cell_volume = bx.volume() / strata as f64;
    let sum: f64 = per_stratum.iter().map(|w| w.mean).sum();
    let var: f64 = per_stratum.iter().map(Welford::variance_of_mean).sum();
    Ok((cell_volume * sum, cell_volume * var.sqrt()))
}

/// Indices of the strata of the `s⁴` grid on `bx` that meet some support box.
fn active_strata(bx: &Box4, s: usize, support: &[Box4]) -> Vec<usize> {
    let mut mark = vec![false; s.pow(4)];
    let range = |k: usize, lo: f64, hi: f64| -> Option<(usize, usize)> {
        let w = (bx.hi[k] - bx.lo[k]) / s as f64;
        if hi < bx.lo[k] || lo > bx.hi[k] {
            return None;
        }
        let a = (((lo - bx.lo[k]) / w).floor().max(0.0) as usize).min(s - 1);
        let b = (((hi - bx.lo[k]) / w).floor().max(0.0) as usize).min(s - 1);
        Some((a, b))
    };
    for sb in support {
        let Some(r) = (0..4).map(|k| range(k, sb.lo[k], sb.hi[k])).collect::<Option<Vec<_>>>() else {
            continue;
        };
        for c3 in r[3].0..=r[3].1 {
            for c2 in r[2].0..=r[2].1 {
                for c1 in r[1].0..=r[1].1 {
                    for c0 in r[0].0..=r[0].1 {
                        mark[c0 + s * (c1 + s * (c2 + s * c3))] = true;
                    }
                }
            }
        }
    }
    (0..mark.len()).filter(|&h| mark[h]).collect()
}
