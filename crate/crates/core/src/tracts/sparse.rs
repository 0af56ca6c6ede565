//! Sparse polynomials in a fixed number of variables, exponents in Z.
//! Used for Laurent expansions with symbolic coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::polycore::{GaussianRational, UniPoly};

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, GaussianRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        SparsePoly::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i32>, c: GaussianRational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        SparsePoly { nvars, terms }
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        SparsePoly::monomial(e, GaussianRational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &GaussianRational)> {
        self.terms.iter()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree_in(&self, k: usize) -> i32 {
        self.terms.keys().map(|e| e[k]).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&k| self.terms.keys().any(|e| e[k] != 0)).collect()
    }

    fn add_term(&mut self, e: Vec<i32>, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Splits `self = a·x_k + b` when the degree in `x_k` is exactly 1.
    pub fn linear_split(&self, k: usize) -> Option<(SparsePoly, SparsePoly)> {
        if self.degree_in(k) != 1 || self.terms.keys().any(|e| e[k] < 0) {
            return None;
        }
        let (mut a, mut b) = (SparsePoly::zero(self.nvars), SparsePoly::zero(self.nvars));
        for (e, c) in &self.terms {
            if e[k] == 1 {
                let mut e = e.clone();
                e[k] = 0;
                a.add_term(e, c.clone());
            } else {
                b.add_term(e.clone(), c.clone());
            }
        }
        Some((a, b))
    }

    /// Replaces `x_k` (non-negative exponents only) by `value`.
    pub fn substitute(&self, k: usize, value: &SparsePoly) -> SparsePoly {
        let mut powers: Vec<SparsePoly> = vec![SparsePoly::constant(self.nvars, GaussianRational::one())];
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            assert!(e[k] >= 0, "cannot substitute into a negative power");
            let p = e[k] as usize;
            while powers.len() <= p {
                let next = powers.last().expect("nonempty").mul(value);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[k] = 0;
            out = out.add(&SparsePoly::monomial(rest, c.clone()).mul(&powers[p]));
        }
        out
    }

    /// Univariate view in `x_k` when no other variable occurs.
    pub fn to_univariate(&self, k: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| (i != k && x != 0) || (i == k && x < 0)) {
                return None;
            }
            let d = e[k] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, GaussianRational::zero());
            }
            coeffs[d] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Groups by the exponents of the first `lead` variables; the values live in the remaining ones.
    pub fn split_leading(&self, lead: usize) -> BTreeMap<Vec<i32>, SparsePoly> {
        let mut out: BTreeMap<Vec<i32>, SparsePoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e[..lead].to_vec())
                .or_insert_with(|| SparsePoly::zero(self.nvars - lead))
                .add_term(e[lead..].to_vec(), c.clone());
        }
        out
    }

    pub fn eval(&self, at: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &p) in at.iter().zip(e) {
                let xp = if p >= 0 { x.pow(p as u32) } else { x.inv().expect("nonzero").pow((-p) as u32) };
                t *= &xp;
            }
            acc += &t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_substitution() {
        let x = SparsePoly::var(2, 0);
        let y = SparsePoly::var(2, 1);
        let p = x.mul(&x).add(&y.scale(&GaussianRational::from_int(3)));
        let q = p.substitute(0, &y.add(&SparsePoly::constant(2, GaussianRational::one())));
        // (y+1)² + 3y at y = 2 → 15
        let v = q.eval(&[GaussianRational::from_int(7), GaussianRational::from_int(2)]);
        assert_eq!(v, GaussianRational::from_int(15));
        let (a, b) = p.linear_split(1).unwrap();
        assert_eq!(a.as_constant(), Some(GaussianRational::from_int(3)));
        assert_eq!(b, x.mul(&x));
        assert!(p.linear_split(0).is_none());
        assert_eq!(q.to_univariate(1), Some(UniPoly::from_ints(&[1, 5, 1])));
    }
}
