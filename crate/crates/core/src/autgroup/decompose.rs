use num_traits::Zero;

use super::word::{AffineFactor, Axis, ElementaryFactor, Factor, TameWord};
use super::AutError;
use crate::polycore::{BivariatePolynomial, GaussianRational, PlanarPolyMap, UniPoly};

/// Which component a reduction step lowers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Target {
    First,
    Second,
}

/// Jung–van der Kulk decomposition by degree reduction.
///
/// While the map has degree ≥ 2, the component of higher degree must have a
/// leading form equal to `λ · (other leading form)^k`; subtracting
/// `λ · other^k` is undone by an elementary factor and strictly lowers the
/// degree. On equal degrees the first component is tried before the second.
/// What remains at degree 1 is a unimodular affine map.
pub fn decompose_automorphism(f: &PlanarPolyMap) -> Result<TameWord, AutError> {
    if !f.is_keller() {
        return Err(AutError::NotKeller);
    }
    reduce_to_word(f)
}

/// The reduction loop without the Jacobian precondition.
pub(crate) fn reduce_to_word(f: &PlanarPolyMap) -> Result<TameWord, AutError> {
    let mut factors = Vec::new();
    let mut cur = f.clone();
    for step in 0.. {
        let p = cur.first().degree_or_zero();
        let q = cur.second().degree_or_zero();
        if p <= 1 && q <= 1 {
            factors.push(Factor::Affine(affine_part(&cur)?));
            break;
        }
        let order: &[Target] = match p.cmp(&q) {
            std::cmp::Ordering::Greater => &[Target::First],
            std::cmp::Ordering::Less => &[Target::Second],
            std::cmp::Ordering::Equal => &[Target::First, Target::Second],
        };
        let reduction = order.iter().find_map(|t| reduce(&cur, *t));
        let Some((factor, next)) = reduction else {
            return Err(AutError::NotAnAutomorphism { step });
        };
        factors.push(Factor::Elementary(factor));
        cur = next;
    }
    Ok(TameWord::new(factors).normalized())
}

/// Tries `high = λ·low^k + lower-degree`; returns the elementary factor and the reduced map.
fn reduce(cur: &PlanarPolyMap, target: Target) -> Option<(ElementaryFactor, PlanarPolyMap)> {
    let (high, low) = match target {
        Target::First => (cur.first(), cur.second()),
        Target::Second => (cur.second(), cur.first()),
    };
    let dh = high.degree().finite()?;
    let dl = low.degree().finite()?;
    if dl == 0 || dh < dl || dh % dl != 0 {
        return None;
    }
    let k = dh / dl;
    let lambda = high.leading_form().proportionality_to(&low.leading_form().pow(k))?;
    let reduced = high - &low.pow(k).scale(&lambda);
    let poly = UniPoly::monomial(k as usize, lambda);
    Some(match target {
        Target::First => (
            ElementaryFactor::new(Axis::AddToX, poly),
            PlanarPolyMap::new(reduced, low.clone()),
        ),
        Target::Second => (
            ElementaryFactor::new(Axis::AddToY, poly),
            PlanarPolyMap::new(low.clone(), reduced),
        ),
    })
}

fn affine_part(m: &PlanarPolyMap) -> Result<AffineFactor, AutError> {
    let coeffs = |p: &BivariatePolynomial| -> [GaussianRational; 3] {
        [p.coeff(1, 0), p.coeff(0, 1), p.constant_term()]
    };
    let [a, b, c] = coeffs(m.first());
    let [d, e, f] = coeffs(m.second());
    if a.is_zero() && b.is_zero() {
        return Err(AutError::NotAnAutomorphism { step: 0 });
    }
    AffineFactor::new(a, b, c, d, e, f)
}
