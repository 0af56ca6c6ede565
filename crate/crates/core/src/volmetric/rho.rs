use serde::{Deserialize, Serialize};

use super::domain::{image_cover, SamplingDomain};
use super::estimate::{stratified_integral_on, VolumeEstimate, MIN_SAMPLES};
use super::VolError;
use crate::autgroup::{decompose_automorphism, expand_word, invert_word};
use crate::fibercount::{FiberSolver, DEFAULT_TOL};
use crate::polycore::{CompiledMap, ComplexPoint, PlanarPolyMap};
use crate::rng::{purpose, CounterRng};

/// Counts `|f⁻¹(y) ∩ D|`.
///
/// Automorphisms use their exact inverse (one preimage, tested for
/// membership); everything else solves the fiber.
#[derive(Clone, Debug)]
pub enum PreimageCounter {
    Inverse(CompiledMap),
    Fiber(Box<FiberSolver>),
}

impl PreimageCounter {
    pub fn new(f: &PlanarPolyMap) -> Result<Self, VolError> {
        if let Some(inv) = exact_inverse(f) {
            return Ok(PreimageCounter::Inverse(CompiledMap::new(&inv)));
        }
        Ok(PreimageCounter::Fiber(Box::new(FiberSolver::new(f)?)))
    }

    /// Always the fiber solver, for cross-checking the fast path.
    pub fn by_fibers(f: &PlanarPolyMap) -> Result<Self, VolError> {
        Ok(PreimageCounter::Fiber(Box::new(FiberSolver::new(f)?)))
    }

    pub fn count(&self, y: ComplexPoint, d: &SamplingDomain, tol: f64) -> Result<usize, VolError> {
        match self {
            PreimageCounter::Inverse(inv) => {
                let x = inv.eval(y);
                Ok(usize::from(x.is_finite() && d.contains(x)))
            }
            PreimageCounter::Fiber(s) => {
                let r = s.solve(y, tol)?;
                Ok(r.points.iter().filter(|p| d.contains(**p)).count())
            }
        }
    }
}

/// Exact inverse of a Keller map that decomposes into tame factors.
pub fn exact_inverse(f: &PlanarPolyMap) -> Option<PlanarPolyMap> {
    decompose_automorphism(f).ok().map(|w| expand_word(&invert_word(&w)))
}

/// Number of fiber points of `f` over `y` inside `d`.
pub fn image_membership(f: &PlanarPolyMap, d: &SamplingDomain, y: ComplexPoint, tol: f64) -> Result<usize, VolError> {
    PreimageCounter::by_fibers(f)?.count(y, d, tol)
}

fn check_samples(samples: usize) -> Result<(), VolError> {
    if samples < MIN_SAMPLES {
        return Err(VolError::TooFewSamples { samples, minimum: MIN_SAMPLES });
    }
    Ok(())
}

/// `∫_D |det J_f|² dV`, the image volume counted with multiplicity.
pub fn multiplicity_volume(
    f: &PlanarPolyMap,
    d: &SamplingDomain,
    samples: usize,
    seed: u64,
) -> Result<VolumeEstimate, VolError> {
    check_samples(samples)?;
    let cf = CompiledMap::new(f);
    let bx = d.bounding_box();
    let cover = d.cover();
    let rng = CounterRng::new(seed, purpose::VOLUME);
    let (value, stderr) = stratified_integral_on(&bx, Some(&cover), samples, &rng, |x| {
        let p = ComplexPoint::from_r4(x);
        Ok(if d.contains(p) { cf.jacobian_det(p).norm_sqr() } else { 0.0 })
    })?;
    Ok(VolumeEstimate { value, stderr, samples, seed, sampling_box: bx })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// `m_f(y)` on `f(D) − g(D)` and symmetrically.
    #[default]
    Multiplicity,
    /// Plain indicator of `f(D) Δ g(D)`.
    Geometric,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Uniform over an interval-arithmetic box containing `f(D) ∪ g(D)`.
    #[default]
    ImageBox,
    /// Uniform over D, weighting by `|det J|²` (change of variables).
    PullBack,
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct RhoOptions {
    pub weighting: Weighting,
    pub sampler: Sampler,
    pub tol: f64,
}

impl Default for RhoOptions {
    fn default() -> Self {
        RhoOptions { weighting: Weighting::Multiplicity, sampler: Sampler::ImageBox, tol: DEFAULT_TOL }
    }
}

/// `ρ_D(f, g)` with default options.
pub fn rho_d(
    f: &PlanarPolyMap,
    g: &PlanarPolyMap,
    d: &SamplingDomain,
    samples: usize,
    seed: u64,
) -> Result<VolumeEstimate, VolError> {
    rho_d_with(f, g, d, samples, seed, RhoOptions::default())
}

pub fn rho_d_with(
    f: &PlanarPolyMap,
    g: &PlanarPolyMap,
    d: &SamplingDomain,
    samples: usize,
    seed: u64,
    opts: RhoOptions,
) -> Result<VolumeEstimate, VolError> {
    check_samples(samples)?;
    let rng = CounterRng::new(seed, purpose::VOLUME);
    let cf = PreimageCounter::new(f)?;
    let cg = PreimageCounter::new(g)?;
    let tol = opts.tol;
    let weigh = |m_self: usize, m_other: usize| -> f64 {
        if m_self == 0 || m_other > 0 {
            0.0
        } else {
            match opts.weighting {
                Weighting::Multiplicity => m_self as f64,
                Weighting::Geometric => 1.0,
            }
        }
    };
    let (bx, (value, stderr)) = match opts.sampler {
        Sampler::ImageBox => {
            let mut cover = image_cover(f, d);
            cover.extend(image_cover(g, d));
            let bx = cover.iter().skip(1).fold(cover[0], |a, b| a.hull(b));
            if !bx.is_valid() {
                return Err(VolError::BoxOverflow(format!("{bx:?}")));
            }
            // Identical maps give identical counts, so every sample is 0 exactly.
            let est = stratified_integral_on(&bx, Some(&cover), samples, &rng, |y| {
                let y = ComplexPoint::from_r4(y);
                let mf = cf.count(y, d, tol)?;
                let mg = cg.count(y, d, tol)?;
                Ok(weigh(mf, mg) + weigh(mg, mf))
            })?;
            (bx, est)
        }
        Sampler::PullBack => {
            let bx = d.bounding_box();
            let cover = d.cover();
            if f == g {
                return Ok(VolumeEstimate::exact(0.0, samples, seed, bx));
            }
            let (mf_map, mg_map) = (CompiledMap::new(f), CompiledMap::new(g));
            // ∫_{f(D)−g(D)} w(m_f) dy = ∫_D |J_f|² · w(m_f(f(x)))/m_f(f(x)) · [m_g(f(x)) = 0] dx
            let side = |x: ComplexPoint, this: &CompiledMap, own: &PreimageCounter, other: &PreimageCounter| {
                let y = this.eval(x);
                if other.count(y, d, tol)? > 0 {
                    return Ok::<f64, VolError>(0.0);
                }
                let jac = this.jacobian_det(x).norm_sqr();
                Ok(match opts.weighting {
                    Weighting::Multiplicity => jac,
                    Weighting::Geometric => jac / own.count(y, d, tol)?.max(1) as f64,
                })
            };
            let est = stratified_integral_on(&bx, Some(&cover), samples, &rng, |x| {
                let x = ComplexPoint::from_r4(x);
                if !d.contains(x) {
                    return Ok(0.0);
                }
                Ok(side(x, &mf_map, &cf, &cg)? + side(x, &mg_map, &cg, &cf)?)
            })?;
            (bx, est)
        }
    };
    Ok(VolumeEstimate { value, stderr, samples, seed, sampling_box: bx })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{BivariatePolynomial, GaussianRational};
    use std::f64::consts::PI;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    #[test]
    fn membership_examples() {
        let d = SamplingDomain::unit_ball();
        let id = PlanarPolyMap::identity();
        assert_eq!(image_membership(&id, &d, ComplexPoint::real(0.5, 0.0), DEFAULT_TOL).unwrap(), 1);
        assert_eq!(image_membership(&id, &d, ComplexPoint::real(2.0, 0.0), DEFAULT_TOL).unwrap(), 0);
        let sq = PlanarPolyMap::power(2, 1);
        assert_eq!(image_membership(&sq, &d, ComplexPoint::real(0.25, 0.0), DEFAULT_TOL).unwrap(), 2);
    }

    #[test]
    fn inverse_fast_path_agrees_with_fibers() {
        let f = PlanarPolyMap::new(poly(&[(0, 1, 1), (2, 0, 1)]), poly(&[(1, 0, -1)]));
        let d = SamplingDomain::unit_ball();
        let (fast, slow) = (PreimageCounter::new(&f).unwrap(), PreimageCounter::by_fibers(&f).unwrap());
        assert!(matches!(fast, PreimageCounter::Inverse(_)));
        let rng = CounterRng::new(5, purpose::VOLUME);
        for i in 0..400 {
            let u = rng.uniform4(i);
            let y = ComplexPoint::from_r4(u.map(|x| 3.0 * x - 1.5));
            assert_eq!(fast.count(y, &d, DEFAULT_TOL).unwrap(), slow.count(y, &d, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn identical_maps_are_at_distance_zero() {
        let f = PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, 1)]), poly(&[(0, 1, 1)]));
        let d = SamplingDomain::unit_ball();
        let e = rho_d(&f, &f, &d, 20_000, 0).unwrap();
        assert_eq!((e.value, e.stderr), (0.0, 0.0));
    }

    #[test]
    fn disjoint_images() {
        let t = PlanarPolyMap::translation(GaussianRational::from_int(3), GaussianRational::from_int(0));
        let d = SamplingDomain::unit_ball();
        let e = rho_d(&PlanarPolyMap::identity(), &t, &d, 200_000, 0).unwrap();
        assert!(e.within(PI * PI, 3.0), "{e:?}");
        let sym = rho_d(&t, &PlanarPolyMap::identity(), &d, 200_000, 0).unwrap();
        assert_eq!(sym.value, e.value);
        let pb = rho_d_with(
            &PlanarPolyMap::identity(),
            &t,
            &d,
            200_000,
            0,
            RhoOptions { sampler: Sampler::PullBack, ..Default::default() },
        )
        .unwrap();
        assert!(pb.within(PI * PI, 3.0), "{pb:?}");
    }

    #[test]
    fn volume_examples() {
        let d = SamplingDomain::unit_ball();
        let ball = PI * PI / 2.0;
        let e = multiplicity_volume(&PlanarPolyMap::identity(), &d, 100_000, 0).unwrap();
        assert!(e.within(ball, 3.0), "{e:?}");
        let shear = PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, 1)]), poly(&[(0, 1, 1)]));
        let e = multiplicity_volume(&shear, &d, 100_000, 0).unwrap();
        assert!(e.within(ball, 3.0), "{e:?}");
        let e = multiplicity_volume(&PlanarPolyMap::power(2, 1), &d, 100_000, 0).unwrap();
        assert!(e.within(2.0 * PI * PI / 3.0, 3.0), "{e:?}");
    }
}
