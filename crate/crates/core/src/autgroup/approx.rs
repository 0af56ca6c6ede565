use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::word::{AffineFactor, Axis, ElementaryFactor, Factor, TameWord};
use super::AutError;
use crate::polycore::{FloatPoly, FloatPolyMap, GaussianRational, UniPoly};

/// A coefficient that is either already in Q + iQ or only known as a double.
#[derive(Clone, PartialEq, Debug)]
pub enum ApproxCoeff {
    Exact(GaussianRational),
    Float(Complex64),
}

impl ApproxCoeff {
    pub fn value(&self) -> Complex64 {
        match self {
            ApproxCoeff::Exact(q) => q.to_complex(),
            ApproxCoeff::Float(z) => *z,
        }
    }

    fn rounded(&self, denom: u64) -> GaussianRational {
        match self {
            ApproxCoeff::Exact(q) => q.clone(),
            ApproxCoeff::Float(z) => round_to_grid(*z, denom),
        }
    }
}

impl From<GaussianRational> for ApproxCoeff {
    fn from(q: GaussianRational) -> Self {
        ApproxCoeff::Exact(q)
    }
}

impl From<Complex64> for ApproxCoeff {
    fn from(z: Complex64) -> Self {
        ApproxCoeff::Float(z)
    }
}

impl From<f64> for ApproxCoeff {
    fn from(x: f64) -> Self {
        ApproxCoeff::Float(Complex64::new(x, 0.0))
    }
}

fn round_to_grid(z: Complex64, denom: u64) -> GaussianRational {
    let part = |x: f64| -> BigRational {
        let scaled = (x * denom as f64).round();
        let n = BigInt::from(scaled as i128);
        BigRational::new(n, BigInt::from(denom))
    };
    GaussianRational::new(part(z.re), part(z.im))
}

/// Affine factor whose coefficients may be floating.
#[derive(Clone, PartialEq, Debug)]
pub struct ApproxAffine {
    pub a: ApproxCoeff,
    pub b: ApproxCoeff,
    pub c: ApproxCoeff,
    pub d: ApproxCoeff,
    pub e: ApproxCoeff,
    pub f: ApproxCoeff,
}

#[derive(Clone, PartialEq, Debug)]
pub enum ApproxFactor {
    Affine(ApproxAffine),
    Elementary { axis: Axis, poly: Vec<ApproxCoeff> },
}

/// A tame word whose coefficients may lie outside Q + iQ.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ApproxTameWord {
    pub factors: Vec<ApproxFactor>,
}

impl ApproxTameWord {
    pub fn new(factors: Vec<ApproxFactor>) -> Self {
        ApproxTameWord { factors }
    }

    /// Floating expansion, composed right to left like [`super::expand_word`].
    pub fn expand_float(&self) -> FloatPolyMap {
        let one = Complex64::new(1.0, 0.0);
        self.factors.iter().rev().fold(FloatPolyMap::identity(), |acc, f| {
            let outer = match f {
                ApproxFactor::Affine(a) => FloatPolyMap::new(
                    FloatPoly::from_terms([(1, 0, a.a.value()), (0, 1, a.b.value()), (0, 0, a.c.value())]),
                    FloatPoly::from_terms([(1, 0, a.d.value()), (0, 1, a.e.value()), (0, 0, a.f.value())]),
                ),
                ApproxFactor::Elementary { axis, poly } => {
                    let along = |in_x: bool| {
                        FloatPoly::from_terms(poly.iter().enumerate().map(|(k, c)| {
                            let k = k as u32;
                            if in_x { (k, 0, c.value()) } else { (0, k, c.value()) }
                        }))
                    };
                    match axis {
                        Axis::AddToX => FloatPolyMap::new(
                            &FloatPoly::from_terms([(1, 0, one)]) + &along(false),
                            FloatPoly::from_terms([(0, 1, one)]),
                        ),
                        Axis::AddToY => FloatPolyMap::new(
                            FloatPoly::from_terms([(1, 0, one)]),
                            &FloatPoly::from_terms([(0, 1, one)]) + &along(true),
                        ),
                    }
                }
            };
            outer.compose(&acc)
        })
    }
}

impl From<&TameWord> for ApproxTameWord {
    fn from(w: &TameWord) -> Self {
        let ex = |q: &GaussianRational| ApproxCoeff::Exact(q.clone());
        ApproxTameWord::new(
            w.factors
                .iter()
                .map(|f| match f {
                    Factor::Affine(a) => {
                        let [aa, b, c, d, e, ff] = a.coefficients();
                        ApproxFactor::Affine(ApproxAffine {
                            a: ex(aa),
                            b: ex(b),
                            c: ex(c),
                            d: ex(d),
                            e: ex(e),
                            f: ex(ff),
                        })
                    }
                    Factor::Elementary(e) => ApproxFactor::Elementary {
                        axis: e.axis,
                        poly: e.poly.coeffs().iter().map(ex).collect(),
                    },
                })
                .collect(),
        )
    }
}

const MAX_REFINEMENTS: u32 = 40;

/// Replaces every floating coefficient by a Gaussian rational within `epsilon`.
///
/// Affine factors keep `ae − bd = 1` exactly: `a, b, d` are rounded and `e` is
/// recomputed as `(1 + bd)/a`; when `a` is too small, `a, d, e` are rounded and
/// `b = (ae − 1)/d` instead. The rounding grid is refined until the recomputed
/// coefficient is also within `epsilon`.
pub fn rational_approximate_word(w: &ApproxTameWord, epsilon: f64) -> Result<TameWord, AutError> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let base = (1.0 / epsilon).ceil().max(1.0) as u64;
    let factors = w
        .factors
        .iter()
        .map(|f| match f {
            ApproxFactor::Affine(a) => approximate_affine(a, epsilon, base).map(Factor::Affine),
            ApproxFactor::Elementary { axis, poly } => Ok(Factor::Elementary(ElementaryFactor::new(
                *axis,
                UniPoly::new(poly.iter().map(|c| c.rounded(base)).collect()),
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TameWord::new(factors))
}

fn approximate_affine(a: &ApproxAffine, epsilon: f64, base: u64) -> Result<AffineFactor, AutError> {
    let mut denom = base;
    let first_a = a.a.rounded(denom);
    let first_d = a.d.rounded(denom);
    if first_a.is_zero() && first_d.is_zero() {
        return Err(AutError::DegenerateAffine);
    }
    for _ in 0..MAX_REFINEMENTS {
        let ra = a.a.rounded(denom);
        let rd = a.d.rounded(denom);
        let use_a = !ra.is_zero() && a.a.value().norm() >= epsilon || rd.is_zero();
        let (na, nb, nd, ne) = if use_a {
            let rb = a.b.rounded(denom);
            let e = &(&GaussianRational::one() + &(&rb * &rd)) / &ra;
            (ra, rb, rd, e)
        } else {
            let re = a.e.rounded(denom);
            let b = &(&(&ra * &re) - &GaussianRational::one()) / &rd;
            (ra, b, rd, re)
        };
        let within = [(&na, &a.a), (&nb, &a.b), (&nd, &a.d), (&ne, &a.e)]
            .iter()
            .all(|(q, orig)| (q.to_complex() - orig.value()).norm() < epsilon);
        if within {
            return AffineFactor::new(na, nb, a.c.rounded(denom), nd, ne, a.f.rounded(denom));
        }
        denom = denom.saturating_mul(2);
    }
    Err(AutError::DegenerateAffine)
}
