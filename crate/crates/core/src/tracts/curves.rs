use num_traits::Zero;

use super::TractError;
use crate::fibercount::{generic_resultant, FiberError};
use crate::polycore::{BivariatePolynomial, GaussianRational, PlanarPolyMap, UniPoly};

/// `(G(0, Y)₁, G(0, Y)₂)`
pub fn component_parametrization(gr: &PlanarPolyMap) -> (UniPoly, UniPoly) {
    let zero = GaussianRational::zero();
    (gr.first().restrict_x(&zero), gr.second().restrict_x(&zero))
}

/// `H(U, V) = Res_Y(U − g₁(Y), V − g₂(Y))`, scaled so the highest
/// canonical term has coefficient 1. U is stored as X and V as Y.
pub fn implicitize(param: &(UniPoly, UniPoly)) -> Result<BivariatePolynomial, TractError> {
    let (g1, g2) = param;
    if g1.is_constant() && g2.is_constant() {
        return Err(TractError::BothConstant);
    }
    let p = BivariatePolynomial::from_univariate(g1, false);
    let q = BivariatePolynomial::from_univariate(g2, false);
    // With P, Q free of X the generic resultant is a single polynomial in (a, b).
    let gen = generic_resultant(&p, &q).map_err(|e| match e {
        FiberError::BothConstantInY => TractError::BothConstant,
        other => TractError::Fiber(other),
    })?;
    let h = gen.into_iter().next().unwrap_or_else(BivariatePolynomial::zero);
    Ok(normalize(&h))
}

fn normalize(h: &BivariatePolynomial) -> BivariatePolynomial {
    match h.terms().next_back() {
        Some((_, lead)) => h.scale(&lead.inv().expect("nonzero leading coefficient")),
        None => h.clone(),
    }
}

/// `H(G_R) = X^γ · S` with `S(0, Y) ≢ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhantomExtraction {
    pub gamma: u32,
    pub s: BivariatePolynomial,
}

impl PhantomExtraction {
    /// `e_R = S(0, Y)`
    pub fn e(&self) -> UniPoly {
        self.s.restrict_x(&GaussianRational::zero())
    }
}

pub fn phantom_extract(h: &BivariatePolynomial, gr: &PlanarPolyMap) -> Result<PhantomExtraction, TractError> {
    let composed = h.substitute(gr.first(), gr.second());
    if composed.is_zero() {
        return Err(TractError::IdenticallyZero);
    }
    let gamma = composed.x_valuation().expect("nonzero");
    if gamma == 0 {
        return Err(TractError::NoPositiveValuation);
    }
    let s = composed.shift_x_down(gamma).expect("valuation divides");
    let out = PhantomExtraction { gamma, s };
    // S(0, Y) must not vanish; checked on the exact coefficients
    assert!(!out.e().is_zero(), "valuation was not maximal");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    #[test]
    fn parametrization_examples() {
        let yxy = PlanarPolyMap::new(poly(&[(0, 1, 1)]), poly(&[(1, 1, 1)]));
        assert_eq!(component_parametrization(&yxy), (UniPoly::from_ints(&[0, 1]), UniPoly::zero()));
        let p = PlanarPolyMap::new(poly(&[(1, 2, 1)]), poly(&[(1, 1, 1)]));
        assert_eq!(component_parametrization(&p), (UniPoly::zero(), UniPoly::zero()));
        let t = PlanarPolyMap::new(poly(&[(0, 1, 1), (2, 0, 1)]), poly(&[(1, 0, -1)]));
        assert_eq!(component_parametrization(&t), (UniPoly::from_ints(&[0, 1]), UniPoly::zero()));
    }

    #[test]
    fn implicitize_examples() {
        let t = UniPoly::from_ints(&[0, 1]);
        assert_eq!(implicitize(&(t.clone(), UniPoly::zero())).unwrap(), poly(&[(0, 1, 1)]));
        let h = implicitize(&(t, UniPoly::from_ints(&[0, 0, 1]))).unwrap();
        assert_eq!(h, poly(&[(2, 0, 1), (0, 1, -1)]));
        let h = implicitize(&(UniPoly::from_ints(&[0, 0, 1]), UniPoly::from_ints(&[0, 0, 0, 1]))).unwrap();
        assert_eq!(h, poly(&[(3, 0, 1), (0, 2, -1)]));
        assert_eq!(implicitize(&(UniPoly::from_ints(&[2]), UniPoly::zero())), Err(TractError::BothConstant));
    }

    #[test]
    fn phantom_examples() {
        let gr = PlanarPolyMap::new(poly(&[(0, 1, 1)]), poly(&[(1, 1, 1)]));
        let e = phantom_extract(&poly(&[(0, 1, 1)]), &gr).unwrap();
        assert_eq!((e.gamma, e.s.clone()), (1, poly(&[(0, 1, 1)])));
        assert_eq!(e.e(), UniPoly::from_ints(&[0, 1]));
        let e = phantom_extract(&poly(&[(0, 2, 1)]), &gr).unwrap();
        assert_eq!((e.gamma, e.s), (2, poly(&[(0, 2, 1)])));
        let gr2 = PlanarPolyMap::new(poly(&[(0, 1, 1)]), poly(&[(1, 2, 1)]));
        assert_eq!(phantom_extract(&poly(&[(0, 1, 1), (2, 0, -1)]), &gr2), Err(TractError::NoPositiveValuation));
        let line = PlanarPolyMap::new(poly(&[(0, 1, 1)]), poly(&[]));
        assert_eq!(phantom_extract(&poly(&[(0, 1, 1)]), &line), Err(TractError::IdenticallyZero));
    }
}
