use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{GaussianRational, UniPoly};

/// Exponent pair of `X^i Y^j`.
///
/// Ordered by total degree, then by the X exponent (X > Y), which is the
/// canonical order used for serialization and for floating evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub fn degree(self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.i).cmp(&(other.degree(), other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree with a distinguished value for the zero polynomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse polynomial in X, Y over Q + iQ. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        BivariatePolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        BivariatePolynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        BivariatePolynomial::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        BivariatePolynomial::monomial(1, 0, GaussianRational::one())
    }

    pub fn y() -> Self {
        BivariatePolynomial::monomial(0, 1, GaussianRational::one())
    }

    pub fn monomial(i: u32, j: u32, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(i, j), c);
        }
        BivariatePolynomial { terms }
    }

    /// Sums duplicate exponents and drops zeros.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, GaussianRational)>,
    {
        let mut p = BivariatePolynomial::zero();
        for (i, j, c) in terms {
            p.add_term(Monomial::new(i, j), &c);
        }
        p
    }

    /// Integer coefficients, convenient for fixtures: `[(i, j, c), ...]`.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        BivariatePolynomial::from_terms(
            terms.iter().map(|&(i, j, c)| (i, j, GaussianRational::from_int(c))),
        )
    }

    /// `Σ c_k t^k` placed in X (`in_x = true`) or in Y.
    pub fn from_univariate(p: &UniPoly, in_x: bool) -> Self {
        BivariatePolynomial::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as u32;
            if in_x {
                (k, 0, c.clone())
            } else {
                (0, k, c.clone())
            }
        }))
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &GaussianRational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> GaussianRational {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(0, 0)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(m) => Degree::Finite(m.degree()),
            None => Degree::NegInfinity,
        }
    }

    /// Total degree, treating the zero polynomial as degree 0. Only for bounds.
    pub fn degree_or_zero(&self) -> u32 {
        self.degree().finite().unwrap_or(0)
    }

    pub fn degree_in_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.i).max()
    }

    pub fn degree_in_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    /// Smallest X exponent over stored terms (the X-adic valuation).
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.i).min()
    }

    /// Homogeneous component of top total degree.
    pub fn leading_form(&self) -> BivariatePolynomial {
        let Some(d) = self.degree().finite() else {
            return BivariatePolynomial::zero();
        };
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> BivariatePolynomial {
        if c.is_zero() {
            return BivariatePolynomial::zero();
        }
        BivariatePolynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BivariatePolynomial {
        let mut acc = BivariatePolynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative_x(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(self.terms.iter().filter(|(m, _)| m.i > 0).map(
            |(m, c)| (m.i - 1, m.j, c * &GaussianRational::from_int(m.i as i64)),
        ))
    }

    pub fn derivative_y(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(self.terms.iter().filter(|(m, _)| m.j > 0).map(
            |(m, c)| (m.i, m.j - 1, c * &GaussianRational::from_int(m.j as i64)),
        ))
    }

    /// Exact value at a Gaussian-rational point.
    pub fn eval_exact(&self, x: &GaussianRational, y: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            acc += &(&(c * &x.pow(m.i)) * &y.pow(m.j));
        }
        acc
    }

    /// `self(u, v)`: X replaced by `u`, Y by `v`, expanded exactly.
    pub fn substitute(&self, u: &BivariatePolynomial, v: &BivariatePolynomial) -> BivariatePolynomial {
        if self.is_zero() {
            return BivariatePolynomial::zero();
        }
        let max_i = self.degree_in_x().unwrap_or(0) as usize;
        let max_j = self.degree_in_y().unwrap_or(0) as usize;
        let u_pows = powers(u, max_i);
        let v_pows = powers(v, max_j);
        // Group by X exponent: Σ_i u^i · (Σ_j a_ij v^j).
        let mut by_i: BTreeMap<u32, BivariatePolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let entry = by_i.entry(m.i).or_default();
            *entry = &*entry + &v_pows[m.j as usize].scale(c);
        }
        let mut out = BivariatePolynomial::zero();
        for (i, inner) in by_i {
            out = &out + &(&u_pows[i as usize] * &inner);
        }
        out
    }

    /// Coefficients as a polynomial in Y: entry `j` is the coefficient of `Y^j`, a polynomial in X.
    pub fn coefficients_in_y(&self) -> Vec<UniPoly> {
        let Some(dy) = self.degree_in_y() else {
            return Vec::new();
        };
        let mut cols: Vec<Vec<GaussianRational>> = vec![Vec::new(); dy as usize + 1];
        for (m, c) in &self.terms {
            let col = &mut cols[m.j as usize];
            if col.len() <= m.i as usize {
                col.resize(m.i as usize + 1, GaussianRational::zero());
            }
            col[m.i as usize] = c.clone();
        }
        cols.into_iter().map(UniPoly::new).collect()
    }

    /// Substitutes `X = x0` leaving a polynomial in Y.
    pub fn restrict_x(&self, x0: &GaussianRational) -> UniPoly {
        let cols = self.coefficients_in_y();
        UniPoly::new(cols.iter().map(|c| c.eval(x0)).collect())
    }

    /// Divides by `X^k`. Returns `None` if some term has X exponent below `k`.
    pub fn shift_x_down(&self, k: u32) -> Option<BivariatePolynomial> {
        if self.terms.keys().any(|m| m.i < k) {
            return None;
        }
        Some(BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.i - k, m.j), c.clone()))
                .collect(),
        })
    }

    /// Exact equality with `λ · other` for some λ; returns λ.
    pub fn proportionality_to(&self, other: &BivariatePolynomial) -> Option<GaussianRational> {
        let (m0, c0) = other.terms.iter().next()?;
        let lambda = &self.coeff(m0.i, m0.j) / c0;
        if lambda.is_zero() {
            return None;
        }
        (*self == other.scale(&lambda)).then_some(lambda)
    }
}

fn powers(p: &BivariatePolynomial, max: usize) -> Vec<BivariatePolynomial> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BivariatePolynomial::one());
    for k in 1..=max {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl<'a> Add<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a BivariatePolynomial> for &'a BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        if self.terms.len() * rhs.terms.len() <= SMALL_PRODUCT {
            return mul_naive(self, rhs);
        }
        mul_scaled(self, rhs)
    }
}

/// Below this many term pairs the rational schoolbook product is cheaper.
const SMALL_PRODUCT: usize = 64;

fn mul_naive(a: &BivariatePolynomial, b: &BivariatePolynomial) -> BivariatePolynomial {
    let mut acc: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m = Monomial::new(ma.i + mb.i, ma.j + mb.j);
            let prod = ca * cb;
            match acc.get_mut(&m) {
                Some(e) => *e += &prod,
                None => {
                    acc.insert(m, prod);
                }
            }
        }
    }
    acc.retain(|_, c| !c.is_zero());
    BivariatePolynomial { terms: acc }
}

/// Gaussian-integer rows: `rows[i]` holds `(j, re, im)` with the common
/// denominator factored out.
struct ScaledRows {
    rows: Vec<Vec<(usize, BigInt, BigInt)>>,
    denom: BigInt,
    max_j: usize,
}

fn scaled_rows(p: &BivariatePolynomial) -> ScaledRows {
    let denom = p.terms.values().fold(BigInt::one(), |l, c| l.lcm(&c.denominator_lcm()));
    let max_i = p.terms.keys().map(|m| m.i).max().unwrap_or(0) as usize;
    let max_j = p.terms.keys().map(|m| m.j).max().unwrap_or(0) as usize;
    let mut rows = vec![Vec::new(); max_i + 1];
    let scale = |r: &BigRational| r.numer() * (&denom / r.denom());
    for (m, c) in &p.terms {
        rows[m.i as usize].push((m.j as usize, scale(c.re()), scale(c.im())));
    }
    ScaledRows { rows, denom, max_j }
}

/// Product with integer accumulation: no gcd until the final division.
/// Output rows (fixed X exponent) are independent and computed in parallel.
fn mul_scaled(a: &BivariatePolynomial, b: &BivariatePolynomial) -> BivariatePolynomial {
    let (ra, rb) = (scaled_rows(a), scaled_rows(b));
    let denom = &ra.denom * &rb.denom;
    let width = ra.max_j + rb.max_j + 1;
    let out_rows = ra.rows.len() + rb.rows.len() - 1;
    let rows: Vec<Vec<(u32, u32, GaussianRational)>> = (0..out_rows)
        .into_par_iter()
        .map(|k| {
            let mut re = vec![BigInt::zero(); width];
            let mut im = vec![BigInt::zero(); width];
            let lo = k.saturating_sub(rb.rows.len() - 1);
            let hi = k.min(ra.rows.len() - 1);
            for ia in lo..=hi {
                for (ja, ar, ai) in &ra.rows[ia] {
                    for (jb, br, bi) in &rb.rows[k - ia] {
                        let j = ja + jb;
                        if !ar.is_zero() {
                            if !br.is_zero() {
                                re[j] += ar * br;
                            }
                            if !bi.is_zero() {
                                im[j] += ar * bi;
                            }
                        }
                        if !ai.is_zero() {
                            if !bi.is_zero() {
                                re[j] -= ai * bi;
                            }
                            if !br.is_zero() {
                                im[j] += ai * br;
                            }
                        }
                    }
                }
            }
            re.into_iter()
                .zip(im)
                .enumerate()
                .filter(|(_, (r, i))| !r.is_zero() || !i.is_zero())
                .map(|(j, (r, i))| {
                    let c = GaussianRational::new(
                        BigRational::new(r, denom.clone()),
                        BigRational::new(i, denom.clone()),
                    );
                    (k as u32, j as u32, c)
                })
                .collect()
        })
        .collect();
    BivariatePolynomial {
        terms: rows.into_iter().flatten().map(|(i, j, c)| (Monomial::new(i, j), c)).collect(),
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
        &self + &rhs
    }
}

impl Sub for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
        &self - &rhs
    }
}

impl Mul for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
        &self * &rhs
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest terms first reads more naturally.
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (m.i, m.j) {
                (0, 0) => String::new(),
                (i, 0) => pow_str("X", i),
                (0, j) => pow_str("Y", j),
                (i, j) => format!("{}*{}", pow_str("X", i), pow_str("Y", j)),
            };
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn pow_str(var: &str, e: u32) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let p = BivariatePolynomial::from_int_terms(&[(2, 0, 1), (1, 1, 1), (0, 2, 1), (1, 0, 1)]);
        let order: Vec<_> = p.terms().map(|(m, _)| (m.i, m.j)).collect();
        assert_eq!(order, vec![(1, 0), (0, 2), (1, 1), (2, 0)]);
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(BivariatePolynomial::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(BivariatePolynomial::one().degree(), Degree::Finite(0));
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = BivariatePolynomial::x();
        assert!((&p - &p).is_zero());
        assert_eq!((&p - &p).num_terms(), 0);
    }

    #[test]
    fn scaled_product_matches_schoolbook() {
        let g = |a, b, c, d| GaussianRational::from_fraction_parts(a, b, c, d);
        let p = BivariatePolynomial::from_terms((0..6).flat_map(|i| (0..5).map(move |j| (i, j, g(i as i64 - 2, j as i64 + 1, 1 - j as i64, 3)))));
        let q = BivariatePolynomial::from_terms((0..4).flat_map(|i| (0..7).map(move |j| (i, j, g(j as i64 + 1, 2, i as i64, i as i64 + 1)))));
        assert!(p.terms.len() * q.terms.len() > SMALL_PRODUCT);
        assert_eq!(mul_scaled(&p, &q), mul_naive(&p, &q));
        assert_eq!(mul_scaled(&p, &(&q - &q)), BivariatePolynomial::zero());
    }

    #[test]
    fn binomial_square() {
        let s = &BivariatePolynomial::x() + &BivariatePolynomial::y();
        let sq = s.pow(2);
        assert_eq!(sq, BivariatePolynomial::from_int_terms(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]));
        assert_eq!(sq.leading_form(), sq);
    }

    #[test]
    fn coefficients_in_y_layout() {
        let p = BivariatePolynomial::from_int_terms(&[(2, 1, 3), (0, 1, 1), (1, 0, 5)]);
        let cols = p.coefficients_in_y();
        assert_eq!(cols.len(), 2);
        assert_eq!(cols[0], UniPoly::from_ints(&[0, 5]));
        assert_eq!(cols[1], UniPoly::from_ints(&[1, 0, 3]));
    }
}
