use std::fmt;

use num_traits::{One, Zero};

use super::{BivariatePolynomial, FloatPoly, FloatPolyMap, GaussianRational, PolyError};

/// A polynomial map `F = (P, Q)` of C².
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlanarPolyMap {
    first: BivariatePolynomial,
    second: BivariatePolynomial,
}

impl PlanarPolyMap {
    pub fn new(first: BivariatePolynomial, second: BivariatePolynomial) -> Self {
        PlanarPolyMap { first, second }
    }

    pub fn identity() -> Self {
        PlanarPolyMap::new(BivariatePolynomial::x(), BivariatePolynomial::y())
    }

    pub fn translation(a: GaussianRational, b: GaussianRational) -> Self {
        PlanarPolyMap::new(
            &BivariatePolynomial::x() + &BivariatePolynomial::constant(a),
            &BivariatePolynomial::y() + &BivariatePolynomial::constant(b),
        )
    }

    /// `(X^a, Y^b)`
    pub fn power(a: u32, b: u32) -> Self {
        PlanarPolyMap::new(
            BivariatePolynomial::monomial(a, 0, GaussianRational::one()),
            BivariatePolynomial::monomial(0, b, GaussianRational::one()),
        )
    }

    pub fn first(&self) -> &BivariatePolynomial {
        &self.first
    }

    pub fn second(&self) -> &BivariatePolynomial {
        &self.second
    }

    pub fn components(&self) -> [&BivariatePolynomial; 2] {
        [&self.first, &self.second]
    }

    /// Maximum of the component degrees (0 for the zero map).
    pub fn degree(&self) -> u32 {
        self.first.degree_or_zero().max(self.second.degree_or_zero())
    }

    /// `self ∘ inner`: X := inner.first, Y := inner.second.
    pub fn compose(&self, inner: &PlanarPolyMap) -> PlanarPolyMap {
        PlanarPolyMap::new(
            self.first.substitute(&inner.first, &inner.second),
            self.second.substitute(&inner.first, &inner.second),
        )
    }

    pub fn jacobian_determinant(&self) -> BivariatePolynomial {
        &(&self.first.derivative_x() * &self.second.derivative_y())
            - &(&self.first.derivative_y() * &self.second.derivative_x())
    }

    /// Jacobian determinant identically equal to the constant 1.
    pub fn is_keller(&self) -> bool {
        self.jacobian_determinant() == BivariatePolynomial::one()
    }

    /// Advisory Y-degree dominance: each component's total degree equals its Y-degree.
    /// Not enforced anywhere; power maps such as `(X², Y)` deliberately fail it.
    pub fn is_y_degree_dominant(&self) -> bool {
        self.components().iter().all(|p| match p.degree().finite() {
            Some(d) => p.degree_in_y() == Some(d),
            None => false,
        })
    }
}

impl fmt::Display for PlanarPolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// `composeMaps(f, g) = f ∘ g`.
pub fn compose_maps(f: &PlanarPolyMap, g: &PlanarPolyMap) -> PlanarPolyMap {
    f.compose(g)
}

pub fn jacobian_determinant(f: &PlanarPolyMap) -> BivariatePolynomial {
    f.jacobian_determinant()
}

pub fn is_keller(f: &PlanarPolyMap) -> bool {
    f.is_keller()
}

const UPWARD_SLACK: f64 = 1e-12;

/// Upper bound on `sup_K |P_f − P_g| + sup_K |Q_f − Q_g|` over the closed polydisk
/// `|X| ≤ radius, |Y| ≤ radius`, from `Σ |a_ij − b_ij| · radius^(i+j)`.
pub fn uniform_bound_on_compact(f: &PlanarPolyMap, g: &PlanarPolyMap, radius: f64) -> f64 {
    assert!(radius > 0.0, "radius must be positive");
    let mut total = 0.0;
    for (p, q) in f.components().into_iter().zip(g.components()) {
        let diff = p - q;
        for (m, c) in diff.terms() {
            total += c.modulus() * radius.powi(m.degree() as i32);
        }
    }
    total * (1.0 + UPWARD_SLACK)
}

/// Same bound for maps with floating coefficients.
pub fn uniform_bound_on_compact_float(f: &FloatPolyMap, g: &FloatPolyMap, radius: f64) -> f64 {
    assert!(radius > 0.0, "radius must be positive");
    let mut total = 0.0;
    for (p, q) in [(&f.first, &g.first), (&f.second, &g.second)] {
        let diff: FloatPoly = p - q;
        for (m, c) in diff.terms() {
            total += c.norm() * radius.powi(m.degree() as i32);
        }
    }
    total * (1.0 + UPWARD_SLACK)
}

/// Compares `p` and `q` by exact evaluation on the grid `{0..=bound}²`.
///
/// For polynomials of total degree at most `bound` this coincides with
/// coefficient equality: a nonzero polynomial of degree ≤ n cannot vanish on
/// an (n+1)×(n+1) grid.
pub fn equal_by_grid(
    p: &BivariatePolynomial,
    q: &BivariatePolynomial,
    degree_bound: u32,
) -> Result<bool, PolyError> {
    for (which, poly) in [("p", p), ("q", q)] {
        if let Some(d) = poly.degree().finite() {
            if d > degree_bound {
                return Err(PolyError::DegreeBoundViolated {
                    which,
                    degree: d,
                    bound: degree_bound,
                });
            }
        }
    }
    let diff = p - q;
    for a in 0..=degree_bound {
        let x = GaussianRational::from_int(a as i64);
        for b in 0..=degree_bound {
            let y = GaussianRational::from_int(b as i64);
            if !diff.eval_exact(&x, &y).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
