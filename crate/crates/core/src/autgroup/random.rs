use rand::Rng;

use super::word::{AffineFactor, Axis, ElementaryFactor, Factor, TameWord};
use crate::polycore::{GaussianRational, UniPoly};

/// Size limits for [`random_tame_word`].
#[derive(Clone, Copy, Debug)]
pub struct WordShape {
    pub max_factors: usize,
    pub max_elementary_degree: usize,
}

impl Default for WordShape {
    fn default() -> Self {
        WordShape { max_factors: 4, max_elementary_degree: 4 }
    }
}

fn small_gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    let re = rng.random_range(-2..=2);
    let im = if rng.random_bool(0.25) { rng.random_range(-1..=1) } else { 0 };
    let q = GaussianRational::from_ints(re, im);
    if rng.random_bool(0.2) {
        &q / &GaussianRational::from_int(2)
    } else {
        q
    }
}

fn random_affine<R: Rng + ?Sized>(rng: &mut R) -> AffineFactor {
    let units = [
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::from_ints(0, 1),
        GaussianRational::from_int(2),
        GaussianRational::from_fraction_parts(1, 2, 0, 1),
    ];
    let a = units[rng.random_range(0..units.len())].clone();
    let b = small_gaussian(rng);
    let d = small_gaussian(rng);
    let e = &(&GaussianRational::from_int(1) + &(&b * &d)) / &a;
    AffineFactor::new(a, b, small_gaussian(rng), d, e, small_gaussian(rng)).expect("unimodular by construction")
}

fn random_elementary<R: Rng + ?Sized>(rng: &mut R, max_degree: usize) -> ElementaryFactor {
    let axis = if rng.random_bool(0.5) { Axis::AddToX } else { Axis::AddToY };
    let degree = rng.random_range(2..=max_degree.max(2));
    let mut coeffs: Vec<GaussianRational> = (0..degree).map(|_| small_gaussian(rng)).collect();
    let mut lead = small_gaussian(rng);
    while num_traits::Zero::is_zero(&lead) {
        lead = small_gaussian(rng);
    }
    coeffs.push(lead);
    ElementaryFactor::new(axis, UniPoly::new(coeffs))
}

/// A random word with 0..=max_factors factors, mixing affine and elementary ones.
pub fn random_tame_word<R: Rng + ?Sized>(rng: &mut R, shape: WordShape) -> TameWord {
    let n = rng.random_range(0..=shape.max_factors);
    let factors = (0..n)
        .map(|_| {
            if rng.random_bool(0.35) {
                Factor::Affine(random_affine(rng))
            } else {
                Factor::Elementary(random_elementary(rng, shape.max_elementary_degree))
            }
        })
        .collect();
    TameWord::new(factors)
}
