use std::fmt;

use num_traits::{One, Zero};

use super::AutError;
use crate::polycore::{BivariatePolynomial, GaussianRational, PlanarPolyMap, UniPoly};

/// `(aX + bY + c, dX + eY + f)` with `ae − bd = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineFactor {
    pub(crate) a: GaussianRational,
    pub(crate) b: GaussianRational,
    pub(crate) c: GaussianRational,
    pub(crate) d: GaussianRational,
    pub(crate) e: GaussianRational,
    pub(crate) f: GaussianRational,
}

impl AffineFactor {
    pub fn new(
        a: GaussianRational,
        b: GaussianRational,
        c: GaussianRational,
        d: GaussianRational,
        e: GaussianRational,
        f: GaussianRational,
    ) -> Result<Self, AutError> {
        let det = &(&a * &e) - &(&b * &d);
        if !det.is_one() {
            return Err(AutError::NotUnimodular(det.to_string()));
        }
        Ok(AffineFactor { a, b, c, d, e, f })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Result<Self, AutError> {
        let g = GaussianRational::from_int;
        AffineFactor::new(g(a), g(b), g(c), g(d), g(e), g(f))
    }

    pub fn identity() -> Self {
        AffineFactor::from_ints(1, 0, 0, 0, 1, 0).expect("unimodular")
    }

    /// `[a, b, c, d, e, f]`
    pub fn coefficients(&self) -> [&GaussianRational; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineFactor::identity()
    }

    pub fn to_map(&self) -> PlanarPolyMap {
        let x = BivariatePolynomial::x();
        let y = BivariatePolynomial::y();
        self.apply_after(&PlanarPolyMap::new(x, y))
    }

    /// `self ∘ inner`
    pub fn apply_after(&self, inner: &PlanarPolyMap) -> PlanarPolyMap {
        let (u, v) = (inner.first(), inner.second());
        let first = &(&u.scale(&self.a) + &v.scale(&self.b)) + &BivariatePolynomial::constant(self.c.clone());
        let second = &(&u.scale(&self.d) + &v.scale(&self.e)) + &BivariatePolynomial::constant(self.f.clone());
        PlanarPolyMap::new(first, second)
    }

    pub fn inverse(&self) -> AffineFactor {
        // Linear part [[e, -b], [-d, a]]; translation solves the system for X, Y.
        let c2 = -(&(&self.e * &self.c) - &(&self.b * &self.f));
        let f2 = -(&(&self.a * &self.f) - &(&self.d * &self.c));
        AffineFactor {
            a: self.e.clone(),
            b: -&self.b,
            c: c2,
            d: -&self.d,
            e: self.a.clone(),
            f: f2,
        }
    }

    /// `self ∘ other`, again affine and unimodular.
    pub fn then_inner(&self, other: &AffineFactor) -> AffineFactor {
        let m = |x: &GaussianRational, y: &GaussianRational| x * y;
        AffineFactor {
            a: &m(&self.a, &other.a) + &m(&self.b, &other.d),
            b: &m(&self.a, &other.b) + &m(&self.b, &other.e),
            c: &(&m(&self.a, &other.c) + &m(&self.b, &other.f)) + &self.c,
            d: &m(&self.d, &other.a) + &m(&self.e, &other.d),
            e: &m(&self.d, &other.b) + &m(&self.e, &other.e),
            f: &(&m(&self.d, &other.c) + &m(&self.e, &other.f)) + &self.f,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Axis {
    /// `(X + P(Y), Y)`
    AddToX,
    /// `(X, Y + P(X))`
    AddToY,
}

/// Elementary (triangular) automorphism. Canonical words only contain degree ≥ 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryFactor {
    pub axis: Axis,
    pub poly: UniPoly,
}

impl ElementaryFactor {
    pub fn new(axis: Axis, poly: UniPoly) -> Self {
        ElementaryFactor { axis, poly }
    }

    /// Degree below 2 overlaps the affine factors.
    pub fn is_canonical(&self) -> bool {
        self.poly.degree().is_some_and(|d| d >= 2)
    }

    pub fn inverse(&self) -> ElementaryFactor {
        ElementaryFactor::new(self.axis, -&self.poly)
    }

    pub fn to_map(&self) -> PlanarPolyMap {
        self.apply_after(&PlanarPolyMap::identity())
    }

    /// `self ∘ inner`
    pub fn apply_after(&self, inner: &PlanarPolyMap) -> PlanarPolyMap {
        let (u, v) = (inner.first(), inner.second());
        match self.axis {
            Axis::AddToX => PlanarPolyMap::new(u + &eval_univariate(&self.poly, v), v.clone()),
            Axis::AddToY => PlanarPolyMap::new(u.clone(), v + &eval_univariate(&self.poly, u)),
        }
    }

    /// Degree ≤ 1 factors rewritten as affine.
    pub fn as_affine(&self) -> Option<AffineFactor> {
        if self.poly.degree().is_some_and(|d| d >= 2) {
            return None;
        }
        let (p0, p1) = (self.poly.coeff(0), self.poly.coeff(1));
        let (one, zero) = (GaussianRational::one(), GaussianRational::zero());
        Some(match self.axis {
            Axis::AddToX => AffineFactor { a: one.clone(), b: p1, c: p0, d: zero.clone(), e: one, f: zero },
            Axis::AddToY => AffineFactor { a: one.clone(), b: zero.clone(), c: zero, d: p1, e: one, f: p0 },
        })
    }
}

/// `p(inner)` by Horner's rule.
pub(crate) fn eval_univariate(p: &UniPoly, inner: &BivariatePolynomial) -> BivariatePolynomial {
    let mut acc = BivariatePolynomial::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * inner) + &BivariatePolynomial::constant(c.clone());
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Factor {
    Affine(AffineFactor),
    Elementary(ElementaryFactor),
}

impl Factor {
    pub fn inverse(&self) -> Factor {
        match self {
            Factor::Affine(a) => Factor::Affine(a.inverse()),
            Factor::Elementary(e) => Factor::Elementary(e.inverse()),
        }
    }

    pub fn apply_after(&self, inner: &PlanarPolyMap) -> PlanarPolyMap {
        match self {
            Factor::Affine(a) => a.apply_after(inner),
            Factor::Elementary(e) => e.apply_after(inner),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Factor::Affine(_) => 1,
            Factor::Elementary(e) => e.poly.degree().unwrap_or(0).max(1) as u32,
        }
    }
}

/// Composition `factors[0] ∘ factors[1] ∘ … ∘ factors[n-1]`; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TameWord {
    pub factors: Vec<Factor>,
}

impl TameWord {
    pub fn new(factors: Vec<Factor>) -> Self {
        TameWord { factors }
    }

    pub fn identity() -> Self {
        TameWord::default()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of factor degrees: an upper bound on the degree of the expansion.
    pub fn degree_bound(&self) -> u64 {
        self.factors.iter().map(|f| f.degree() as u64).product()
    }

    pub fn concat(&self, other: &TameWord) -> TameWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        TameWord::new(factors)
    }

    /// Canonical form: degree ≤ 1 elementaries become affine, neighbouring
    /// affine factors are multiplied out, same-axis elementaries are merged and
    /// identities dropped. The expansion is unchanged.
    pub fn normalized(&self) -> TameWord {
        let mut out: Vec<Factor> = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let f = match f {
                Factor::Elementary(e) => match e.as_affine() {
                    Some(a) => Factor::Affine(a),
                    None => f.clone(),
                },
                Factor::Affine(_) => f.clone(),
            };
            let merged = match (out.last(), &f) {
                (Some(Factor::Affine(prev)), Factor::Affine(cur)) => {
                    Some(Factor::Affine(prev.then_inner(cur)))
                }
                (Some(Factor::Elementary(prev)), Factor::Elementary(cur)) if prev.axis == cur.axis => {
                    let sum = ElementaryFactor::new(cur.axis, &prev.poly + &cur.poly);
                    Some(match sum.as_affine() {
                        Some(a) => Factor::Affine(a),
                        None => Factor::Elementary(sum),
                    })
                }
                _ => None,
            };
            match merged {
                Some(m) => {
                    out.pop();
                    // A merge can create a new affine neighbour; fold it back in.
                    push_folding(&mut out, m);
                }
                None => out.push(f),
            }
        }
        out.retain(|f| !matches!(f, Factor::Affine(a) if a.is_identity()));
        TameWord::new(out)
    }
}

fn push_folding(out: &mut Vec<Factor>, f: Factor) {
    if let (Some(Factor::Affine(prev)), Factor::Affine(cur)) = (out.last(), &f) {
        let m = prev.then_inner(cur);
        out.pop();
        out.push(Factor::Affine(m));
    } else {
        out.push(f);
    }
}

impl fmt::Display for TameWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "id");
        }
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ∘ ")?;
            }
            match factor {
                Factor::Affine(a) => write!(f, "{}", a.to_map())?,
                Factor::Elementary(e) => write!(f, "{}", e.to_map())?,
            }
        }
        Ok(())
    }
}

/// Exact expansion of the word into a polynomial map.
pub fn expand_word(w: &TameWord) -> PlanarPolyMap {
    apply_word(w, &PlanarPolyMap::identity())
}

/// `expand_word(w) ∘ inner`, one factor at a time from the innermost.
///
/// Equal to `expand_word(w).compose(inner)` but never substitutes into the
/// full expansion, so cancellation (e.g. against an inverse) happens early.
pub fn apply_word(w: &TameWord, inner: &PlanarPolyMap) -> PlanarPolyMap {
    w.factors.iter().rev().fold(inner.clone(), |acc, f| f.apply_after(&acc))
}

/// Reversed sequence of per-factor inverses.
pub fn invert_word(w: &TameWord) -> TameWord {
    TameWord::new(w.factors.iter().rev().map(Factor::inverse).collect())
}
