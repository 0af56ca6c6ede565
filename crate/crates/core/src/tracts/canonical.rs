use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::sparse::SparsePoly;
use super::TractError;
use crate::polycore::json::{coeff_from_json, coeff_to_json, CoeffJson};
use crate::polycore::{BivariatePolynomial, GaussianRational, PlanarPolyMap, UniPoly};

/// `R(X, Y) = (X^{−α}, X^β·Y + X^{−α}·Φ(X))`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalRationalMap {
    pub alpha: u32,
    pub beta: u32,
    pub phi: UniPoly,
}

impl CanonicalRationalMap {
    pub fn new(alpha: u32, beta: u32, phi: UniPoly) -> Result<Self, TractError> {
        if alpha == 0 {
            return Err(TractError::InvalidAlpha);
        }
        Ok(CanonicalRationalMap { alpha, beta, phi })
    }

    pub fn from_ints(alpha: u32, beta: u32, phi: &[i64]) -> Result<Self, TractError> {
        CanonicalRationalMap::new(alpha, beta, UniPoly::from_ints(phi))
    }
}

impl fmt::Display for CanonicalRationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(α={}, β={}, Φ={})", self.alpha, self.beta, self.phi)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub enum CanonicalFlag {
    DegPhiTooLarge,
    GcdNotOne,
    GammaRangeEmpty,
}

/// Advisory flags; the empty set means every canonical constraint holds.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct CanonicalValidation {
    pub flags: BTreeSet<CanonicalFlag>,
}

impl CanonicalValidation {
    pub fn is_canonical(&self) -> bool {
        self.flags.is_empty()
    }
}

pub fn validate_canonical(r: &CanonicalRationalMap) -> CanonicalValidation {
    let mut flags = BTreeSet::new();
    let top = r.alpha + r.beta;
    if r.phi.degree().is_some_and(|d| d as u32 >= top) {
        flags.insert(CanonicalFlag::DegPhiTooLarge);
    }
    // exponents of X in X^{α+β}·Y + Φ(X)
    let g = r
        .phi
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(top as u64, |g, (k, _)| g.gcd(&(k as u64)));
    if g != 1 {
        flags.insert(CanonicalFlag::GcdNotOne);
    }
    if (r.beta as i64) - (r.alpha as i64) < 2 {
        flags.insert(CanonicalFlag::GammaRangeEmpty);
    }
    CanonicalValidation { flags }
}

/// Polynomial in `X^{±1}` and `Y`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<(i32, u32), GaussianRational>,
}

impl LaurentPoly {
    pub fn from_terms<I: IntoIterator<Item = (i32, u32, GaussianRational)>>(terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (i, j, c) in terms {
            if !c.is_zero() {
                out.insert((i, j), c);
            }
        }
        LaurentPoly { terms: out }
    }

    pub fn from_int_terms(terms: &[(i32, u32, i64)]) -> Self {
        LaurentPoly::from_terms(terms.iter().map(|&(i, j, c)| (i, j, GaussianRational::from_int(c))))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, &GaussianRational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: i32, j: u32) -> GaussianRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn min_x_exponent(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn to_polynomial(&self) -> Option<BivariatePolynomial> {
        if self.min_x_exponent().is_some_and(|m| m < 0) {
            return None;
        }
        Some(BivariatePolynomial::from_terms(
            self.terms.iter().map(|(&(i, j), c)| (i as u32, j, c.clone())),
        ))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((i, j), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·X^{i}·Y^{j}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentMap {
    pub first: LaurentPoly,
    pub second: LaurentPoly,
}

impl LaurentMap {
    pub fn min_x_exponent(&self) -> Option<i32> {
        match (self.first.min_x_exponent(), self.second.min_x_exponent()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// `f ∘ R` with Φ given by polynomials in trailing variables of a
/// `[X, Y, …]` ring, so the same code serves concrete and symbolic Φ.
pub(crate) fn compose_symbolic(f: &PlanarPolyMap, alpha: u32, beta: u32, phi: &[SparsePoly]) -> [SparsePoly; 2] {
    let n = phi.first().map(SparsePoly::nvars).unwrap_or(2);
    let one = GaussianRational::from_int(1);
    let x_pow = |k: i32| {
        let mut e = vec![0; n];
        e[0] = k;
        SparsePoly::monomial(e, one.clone())
    };
    let a = alpha as i32;
    let mut v = x_pow(beta as i32).mul(&SparsePoly::var(n, 1));
    for (k, c) in phi.iter().enumerate() {
        v = v.add(&x_pow(k as i32 - a).mul(c));
    }
    let component = |p: &BivariatePolynomial| {
        let mut v_pows = vec![SparsePoly::constant(n, one.clone())];
        let mut out = SparsePoly::zero(n);
        for (m, c) in p.terms() {
            while v_pows.len() <= m.j as usize {
                let next = v_pows.last().expect("nonempty").mul(&v);
                v_pows.push(next);
            }
            let ui = x_pow(-a * m.i as i32);
            out = out.add(&ui.mul(&v_pows[m.j as usize]).scale(c));
        }
        out
    };
    [component(f.first()), component(f.second())]
}

fn to_laurent(p: &SparsePoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(e, c)| (e[0], e[1] as u32, c.clone())))
}

/// Exact Laurent expansion of `f ∘ R`.
pub fn compose_with_tract(f: &PlanarPolyMap, r: &CanonicalRationalMap) -> LaurentMap {
    let phi: Vec<SparsePoly> = r.phi.coeffs().iter().map(|c| SparsePoly::constant(2, c.clone())).collect();
    let phi = if phi.is_empty() { vec![SparsePoly::zero(2)] } else { phi };
    let [p, q] = compose_symbolic(f, r.alpha, r.beta, &phi);
    LaurentMap { first: to_laurent(&p), second: to_laurent(&q) }
}

/// `G_R = f ∘ R` when it is a polynomial map (R is an asymptotic tract of f).
pub fn dual_map(f: &PlanarPolyMap, r: &CanonicalRationalMap) -> Result<PlanarPolyMap, TractError> {
    let l = compose_with_tract(f, r);
    match (l.first.to_polynomial(), l.second.to_polynomial()) {
        (Some(p), Some(q)) => Ok(PlanarPolyMap::new(p, q)),
        _ => Err(TractError::NotPolynomial { min_x_exponent: l.min_x_exponent().unwrap_or(0) }),
    }
}

/// `{"alpha":1,"beta":1,"phi":[{"re":["0","1"],"im":["0","1"]}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TractJson {
    pub alpha: u32,
    pub beta: u32,
    pub phi: Vec<CoeffJson>,
}

impl From<&CanonicalRationalMap> for TractJson {
    fn from(r: &CanonicalRationalMap) -> Self {
        TractJson { alpha: r.alpha, beta: r.beta, phi: r.phi.coeffs().iter().map(coeff_to_json).collect() }
    }
}

impl TryFrom<&TractJson> for CanonicalRationalMap {
    type Error = TractError;

    fn try_from(t: &TractJson) -> Result<Self, TractError> {
        let phi = t
            .phi
            .iter()
            .enumerate()
            .map(|(k, c)| coeff_from_json(c, &format!("phi[{k}]")).map_err(|e| TractError::Schema(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        CanonicalRationalMap::new(t.alpha, t.beta, UniPoly::new(phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    #[test]
    fn validation_examples() {
        let v = validate_canonical(&CanonicalRationalMap::from_ints(1, 3, &[0, 1]).unwrap());
        assert!(v.is_canonical());
        let v = validate_canonical(&CanonicalRationalMap::from_ints(1, 1, &[]).unwrap());
        assert_eq!(v.flags, [CanonicalFlag::GcdNotOne, CanonicalFlag::GammaRangeEmpty].into());
        let v = validate_canonical(&CanonicalRationalMap::from_ints(1, 0, &[0, 1]).unwrap());
        assert!(v.flags.contains(&CanonicalFlag::DegPhiTooLarge));
        assert!(CanonicalRationalMap::from_ints(0, 1, &[]).is_err());
    }

    #[test]
    fn composition_examples() {
        let r = CanonicalRationalMap::from_ints(1, 1, &[]).unwrap();
        let l = compose_with_tract(&PlanarPolyMap::identity(), &r);
        assert_eq!(l.first, LaurentPoly::from_int_terms(&[(-1, 0, 1)]));
        assert_eq!(l.second, LaurentPoly::from_int_terms(&[(1, 1, 1)]));

        let xy = PlanarPolyMap::new(poly(&[(1, 1, 1)]), poly(&[(0, 1, 1)]));
        let l = compose_with_tract(&xy, &r);
        assert_eq!(l.first, LaurentPoly::from_int_terms(&[(0, 1, 1)]));

        let shear = PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, 1)]), poly(&[(0, 1, 1)]));
        let l = compose_with_tract(&shear, &r);
        assert_eq!(l.first, LaurentPoly::from_int_terms(&[(-1, 0, 1), (2, 2, 1)]));
        assert_eq!(l.min_x_exponent(), Some(-1));
    }

    #[test]
    fn dual_map_examples() {
        let r = CanonicalRationalMap::from_ints(1, 1, &[]).unwrap();
        let xy = PlanarPolyMap::new(poly(&[(1, 1, 1)]), poly(&[(0, 1, 1)]));
        assert_eq!(dual_map(&xy, &r).unwrap(), PlanarPolyMap::new(poly(&[(0, 1, 1)]), poly(&[(1, 1, 1)])));
        assert!(matches!(dual_map(&PlanarPolyMap::identity(), &r), Err(TractError::NotPolynomial { .. })));
        let xy2 = PlanarPolyMap::new(poly(&[(1, 2, 1)]), poly(&[(0, 1, 1)]));
        assert_eq!(dual_map(&xy2, &r).unwrap(), PlanarPolyMap::new(poly(&[(1, 2, 1)]), poly(&[(1, 1, 1)])));
    }

    #[test]
    fn json_roundtrip() {
        let r = CanonicalRationalMap::new(2, 3, UniPoly::new(vec![GaussianRational::from_fraction_parts(1, 2, -1, 3)]))
            .unwrap();
        let s = serde_json::to_string(&TractJson::from(&r)).unwrap();
        let back: TractJson = serde_json::from_str(&s).unwrap();
        assert_eq!(CanonicalRationalMap::try_from(&back).unwrap(), r);
    }
}
