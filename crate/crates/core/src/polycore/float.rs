use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BivariatePolynomial, Monomial, PlanarPolyMap, PolyError};

/// A point `(z, w)` of C² in double precision.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl ComplexPoint {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        ComplexPoint { z, w }
    }

    pub fn real(x: f64, y: f64) -> Self {
        ComplexPoint::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    /// From the four real coordinates `(Re z, Im z, Re w, Im w)`.
    pub fn from_r4(p: [f64; 4]) -> Self {
        ComplexPoint::new(Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3]))
    }

    pub fn to_r4(self) -> [f64; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite() && self.w.is_finite()
    }

    pub fn norm(&self) -> f64 {
        (self.z.norm_sqr() + self.w.norm_sqr()).sqrt()
    }

    pub fn dist(&self, other: &ComplexPoint) -> f64 {
        ((self.z - other.z).norm_sqr() + (self.w - other.w).norm_sqr()).sqrt()
    }
}

/// Sparse polynomial with double-precision complex coefficients.
///
/// Used for maps whose coefficients are not exact (approximation inputs) and
/// as the compiled form of exact polynomials for fast evaluation.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct FloatPoly {
    terms: BTreeMap<Monomial, Complex64>,
}

impl FloatPoly {
    pub fn zero() -> Self {
        FloatPoly::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Complex64)>>(terms: I) -> Self {
        let mut p = FloatPoly::zero();
        for (i, j, c) in terms {
            *p.terms.entry(Monomial::new(i, j)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        p.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        p
    }

    pub fn constant(c: Complex64) -> Self {
        FloatPoly::from_terms([(0, 0, c)])
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Complex64 {
        self.terms.get(&Monomial::new(i, j)).copied().unwrap_or_default()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn pow(&self, e: u32) -> FloatPoly {
        let mut acc = FloatPoly::constant(Complex64::new(1.0, 0.0));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn substitute(&self, u: &FloatPoly, v: &FloatPoly) -> FloatPoly {
        let mut out = FloatPoly::zero();
        for (m, c) in &self.terms {
            let t = &u.pow(m.i) * &v.pow(m.j);
            out = &out + &t.scale(*c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> FloatPoly {
        FloatPoly::from_terms(self.terms.iter().map(|(m, a)| (m.i, m.j, a * c)))
    }

    /// Evaluation in canonical term order.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += c * z.powu(m.i) * w.powu(m.j);
        }
        acc
    }
}

impl From<&BivariatePolynomial> for FloatPoly {
    fn from(p: &BivariatePolynomial) -> Self {
        FloatPoly::from_terms(p.terms().map(|(m, c)| (m.i, m.j, c.to_complex())))
    }
}

impl<'a> Add<&'a FloatPoly> for &'a FloatPoly {
    type Output = FloatPoly;
    fn add(self, rhs: &FloatPoly) -> FloatPoly {
        FloatPoly::from_terms(
            self.terms().chain(rhs.terms()).map(|(m, c)| (m.i, m.j, c)),
        )
    }
}

impl<'a> Sub<&'a FloatPoly> for &'a FloatPoly {
    type Output = FloatPoly;
    fn sub(self, rhs: &FloatPoly) -> FloatPoly {
        FloatPoly::from_terms(
            self.terms()
                .map(|(m, c)| (m.i, m.j, c))
                .chain(rhs.terms().map(|(m, c)| (m.i, m.j, -c))),
        )
    }
}

impl<'a> Mul<&'a FloatPoly> for &'a FloatPoly {
    type Output = FloatPoly;
    fn mul(self, rhs: &FloatPoly) -> FloatPoly {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.push((ma.i + mb.i, ma.j + mb.j, ca * cb));
            }
        }
        FloatPoly::from_terms(out)
    }
}

/// A pair of float polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct FloatPolyMap {
    pub first: FloatPoly,
    pub second: FloatPoly,
}

impl FloatPolyMap {
    pub fn new(first: FloatPoly, second: FloatPoly) -> Self {
        FloatPolyMap { first, second }
    }

    pub fn identity() -> Self {
        FloatPolyMap::new(
            FloatPoly::from_terms([(1, 0, Complex64::new(1.0, 0.0))]),
            FloatPoly::from_terms([(0, 1, Complex64::new(1.0, 0.0))]),
        )
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &FloatPolyMap) -> FloatPolyMap {
        FloatPolyMap::new(
            self.first.substitute(&inner.first, &inner.second),
            self.second.substitute(&inner.first, &inner.second),
        )
    }
}

impl From<&PlanarPolyMap> for FloatPolyMap {
    fn from(f: &PlanarPolyMap) -> Self {
        FloatPolyMap::new(f.first().into(), f.second().into())
    }
}

const STACK_POWERS: usize = 48;

/// Flattened polynomial for hot-loop evaluation. Terms stay in canonical order.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(u32, u32, Complex64)>,
    max_i: u32,
    max_j: u32,
}

impl CompiledPoly {
    pub fn new(p: &FloatPoly) -> Self {
        let terms: Vec<_> = p.terms().map(|(m, c)| (m.i, m.j, c)).collect();
        let max_i = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let max_j = terms.iter().map(|t| t.1).max().unwrap_or(0);
        CompiledPoly { terms, max_i, max_j }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let (ni, nj) = (self.max_i as usize + 1, self.max_j as usize + 1);
        if ni <= STACK_POWERS && nj <= STACK_POWERS {
            let mut zp = [Complex64::new(0.0, 0.0); STACK_POWERS];
            let mut wp = [Complex64::new(0.0, 0.0); STACK_POWERS];
            fill_powers(&mut zp[..ni], z);
            fill_powers(&mut wp[..nj], w);
            self.sum(&zp, &wp)
        } else {
            let mut zp = vec![Complex64::new(0.0, 0.0); ni];
            let mut wp = vec![Complex64::new(0.0, 0.0); nj];
            fill_powers(&mut zp, z);
            fill_powers(&mut wp, w);
            self.sum(&zp, &wp)
        }
    }

    fn sum(&self, zp: &[Complex64], wp: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i, j, c) in &self.terms {
            acc += c * zp[i as usize] * wp[j as usize];
        }
        acc
    }
}

fn fill_powers(out: &mut [Complex64], x: Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    for slot in out.iter_mut() {
        *slot = p;
        p *= x;
    }
}

/// Compiled map with its Jacobian entries, for sampling.
#[derive(Clone, Debug)]
pub struct CompiledMap {
    pub first: CompiledPoly,
    pub second: CompiledPoly,
    jac: [CompiledPoly; 4],
}

impl CompiledMap {
    pub fn new(f: &PlanarPolyMap) -> Self {
        let c = |p: &BivariatePolynomial| CompiledPoly::new(&FloatPoly::from(p));
        CompiledMap {
            first: c(f.first()),
            second: c(f.second()),
            jac: [
                c(&f.first().derivative_x()),
                c(&f.first().derivative_y()),
                c(&f.second().derivative_x()),
                c(&f.second().derivative_y()),
            ],
        }
    }

    pub fn eval(&self, p: ComplexPoint) -> ComplexPoint {
        ComplexPoint::new(self.first.eval(p.z, p.w), self.second.eval(p.z, p.w))
    }

    /// `[[∂P/∂X, ∂P/∂Y], [∂Q/∂X, ∂Q/∂Y]]` at `p`.
    pub fn jacobian(&self, p: ComplexPoint) -> [[Complex64; 2]; 2] {
        let e = |k: usize| self.jac[k].eval(p.z, p.w);
        [[e(0), e(1)], [e(2), e(3)]]
    }

    pub fn jacobian_det(&self, p: ComplexPoint) -> Complex64 {
        let j = self.jacobian(p);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }
}

/// `Σ a_ij z^i w^j` with coefficients converted to doubles.
pub fn evaluate(p: &BivariatePolynomial, at: ComplexPoint) -> Result<Complex64, PolyError> {
    let v = FloatPoly::from(p).eval(at.z, at.w);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(PolyError::EvaluationOverflow)
    }
}
