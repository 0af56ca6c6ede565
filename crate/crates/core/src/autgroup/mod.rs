//! Tame automorphism words: expansion, inversion, Jung–van der Kulk
//! decomposition and Gaussian-rational approximation.

mod approx;
mod decompose;
pub mod json;
mod random;
mod word;

pub use approx::{rational_approximate_word, ApproxAffine, ApproxCoeff, ApproxFactor, ApproxTameWord};
pub use decompose::decompose_automorphism;
pub use random::{random_tame_word, WordShape};
pub use word::{apply_word, expand_word, invert_word, AffineFactor, Axis, ElementaryFactor, Factor, TameWord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("map is not Keller: the Jacobian determinant is not identically 1")]
    NotKeller,
    #[error("no elementary reduction exists at step {step}: leading forms are not proportional")]
    NotAnAutomorphism { step: usize },
    #[error("affine factor has determinant {0}, expected 1")]
    NotUnimodular(String),
    #[error("affine factor degenerates: both a and d round to zero")]
    DegenerateAffine,
    #[error("schema error: {0}")]
    Schema(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{
        uniform_bound_on_compact_float, BivariatePolynomial, FloatPolyMap, GaussianRational,
        PlanarPolyMap, UniPoly,
    };
    use num_complex::Complex64;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    fn elem(axis: Axis, coeffs: &[i64]) -> Factor {
        Factor::Elementary(ElementaryFactor::new(axis, UniPoly::from_ints(coeffs)))
    }

    fn rotation() -> Factor {
        // (Y, −X)
        Factor::Affine(AffineFactor::from_ints(0, 1, 0, -1, 0, 0).unwrap())
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand_word(&TameWord::identity()), PlanarPolyMap::identity());
        let e = elem(Axis::AddToX, &[0, 0, 1]);
        assert_eq!(
            expand_word(&TameWord::new(vec![e.clone()])),
            PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, 1)]), poly(&[(0, 1, 1)]))
        );
        // E∘A with E = (X+Y², Y), A = (Y, −X): (Y + X², −X) by hand
        let w = TameWord::new(vec![e, rotation()]);
        assert_eq!(
            expand_word(&w),
            PlanarPolyMap::new(poly(&[(0, 1, 1), (2, 0, 1)]), poly(&[(1, 0, -1)]))
        );
    }

    #[test]
    fn invert_examples() {
        let w = TameWord::new(vec![elem(Axis::AddToX, &[0, 0, 1])]);
        assert_eq!(
            expand_word(&invert_word(&w)),
            PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, -1)]), poly(&[(0, 1, 1)]))
        );
        let a = TameWord::new(vec![Factor::Affine(AffineFactor::from_ints(2, 3, 1, 1, 2, 0).unwrap())]);
        let inv = expand_word(&invert_word(&a));
        assert_eq!(inv, PlanarPolyMap::new(poly(&[(1, 0, 2), (0, 1, -3), (0, 0, -2)]), poly(&[(1, 0, -1), (0, 1, 2), (0, 0, 1)])));
        assert_eq!(expand_word(&a).compose(&inv), PlanarPolyMap::identity());
        let w2 = TameWord::new(vec![elem(Axis::AddToY, &[1, 0, 0, 2]), rotation()]);
        let inner = expand_word(&TameWord::new(vec![elem(Axis::AddToX, &[0, 1, 1])]));
        assert_eq!(apply_word(&w2, &inner), expand_word(&w2).compose(&inner));
        assert_eq!(expand_word(&invert_word(&invert_word(&w2))), expand_word(&w2));
    }

    #[test]
    fn affine_requires_unit_determinant() {
        assert!(matches!(AffineFactor::from_ints(2, 0, 0, 0, 1, 0), Err(AutError::NotUnimodular(_))));
    }

    #[test]
    fn decompose_examples() {
        let affine = PlanarPolyMap::new(poly(&[(1, 0, 2), (0, 1, 3), (0, 0, 1)]), poly(&[(1, 0, 1), (0, 1, 2)]));
        let w = decompose_automorphism(&affine).unwrap();
        assert_eq!(w.len(), 1);
        assert!(matches!(w.factors[0], Factor::Affine(_)));

        let cubic = PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 3, 1)]), poly(&[(0, 1, 1)]));
        let w = decompose_automorphism(&cubic).unwrap();
        assert_eq!(w, TameWord::new(vec![elem(Axis::AddToX, &[0, 0, 0, 1])]));

        let twisted = PlanarPolyMap::new(poly(&[(0, 1, 1), (2, 0, 1)]), poly(&[(1, 0, -1)]));
        let w = decompose_automorphism(&twisted).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(expand_word(&w), twisted);

        assert_eq!(decompose_automorphism(&PlanarPolyMap::power(2, 1)), Err(AutError::NotKeller));
    }

    #[test]
    fn reduction_fails_on_unproportional_leading_forms() {
        let m = PlanarPolyMap::new(poly(&[(2, 0, 1), (0, 2, 1)]), poly(&[(1, 1, 1)]));
        assert_eq!(decompose_automorphism(&m), Err(AutError::NotKeller));
        assert_eq!(
            decompose::reduce_to_word(&m),
            Err(AutError::NotAnAutomorphism { step: 0 })
        );
    }

    #[test]
    fn normalization_absorbs_low_degree_elementaries() {
        let w = TameWord::new(vec![
            elem(Axis::AddToX, &[1, 2]),
            rotation(),
            elem(Axis::AddToY, &[0, 0, 1]),
            elem(Axis::AddToY, &[0, 0, -1]),
        ]);
        let n = w.normalized();
        assert_eq!(expand_word(&n), expand_word(&w));
        assert_eq!(n.len(), 1);
    }

    #[test]
    fn approximation_examples() {
        // exact input is returned unchanged
        let exact = TameWord::new(vec![elem(Axis::AddToX, &[0, 0, 3]), rotation()]);
        let approx = rational_approximate_word(&ApproxTameWord::from(&exact), 1e-3).unwrap();
        assert_eq!(approx, exact);

        // a = √2, e = 1/√2: rounded a within epsilon and det exactly 1
        let s2 = std::f64::consts::SQRT_2;
        let aff = ApproxTameWord::new(vec![ApproxFactor::Affine(ApproxAffine {
            a: s2.into(),
            b: 0.0.into(),
            c: 0.0.into(),
            d: 0.0.into(),
            e: (1.0 / s2).into(),
            f: 0.0.into(),
        })]);
        let eps = 1e-4;
        let w = rational_approximate_word(&aff, eps).unwrap();
        let Factor::Affine(a) = &w.factors[0] else { panic!("affine expected") };
        let [ca, cb, _, cd, ce, _] = a.coefficients();
        assert!((ca.to_complex().re - s2).abs() < eps);
        assert_eq!(&(ca * ce) - &(cb * cd), GaussianRational::from_int(1));
        assert_eq!(ce, &ca.inv().unwrap());

        // P(Y) = πY²: bound chain through the uniform estimate
        let pi = ApproxTameWord::new(vec![ApproxFactor::Elementary {
            axis: Axis::AddToX,
            poly: vec![0.0.into(), 0.0.into(), std::f64::consts::PI.into()],
        }]);
        let w = rational_approximate_word(&pi, eps).unwrap();
        let bound = uniform_bound_on_compact_float(&pi.expand_float(), &FloatPolyMap::from(&expand_word(&w)), 1.0);
        assert!(bound <= eps * 3.0);
    }

    #[test]
    fn degenerate_affine_rejected() {
        let tiny = ApproxTameWord::new(vec![ApproxFactor::Affine(ApproxAffine {
            a: 1e-9.into(),
            b: 1e9.into(),
            c: 0.0.into(),
            d: (-1e-9).into(),
            e: 0.0.into(),
            f: 0.0.into(),
        })]);
        assert_eq!(rational_approximate_word(&tiny, 0.1), Err(AutError::DegenerateAffine));
    }

    #[test]
    fn small_a_uses_d_branch() {
        // a ≈ 0, d = −1, b = 1: (εX + Y, −X + eY)
        let w = ApproxTameWord::new(vec![ApproxFactor::Affine(ApproxAffine {
            a: Complex64::new(1e-6, 0.0).into(),
            b: 1.0.into(),
            c: 0.0.into(),
            d: (-1.0).into(),
            e: 0.0.into(),
            f: 0.0.into(),
        })]);
        let r = rational_approximate_word(&w, 1e-3).unwrap();
        assert!(expand_word(&r).is_keller());
    }
}
