use num_traits::Zero;

use super::roots::UnivariatePolynomial;
use super::FiberError;
use crate::polycore::{BivariatePolynomial, GaussianRational, UniPoly};

/// `Res_Y(p, q)` as an exact polynomial in X.
///
/// When one argument is constant in Y the Sylvester matrix degenerates to a
/// power: `Res(p, q) = p^n` for `deg_Y p = 0`, `q^m` for `deg_Y q = 0`.
pub fn resultant_in_y(p: &BivariatePolynomial, q: &BivariatePolynomial) -> Result<UniPoly, FiberError> {
    if p.is_zero() || q.is_zero() {
        return Ok(UniPoly::zero());
    }
    let pc = p.coefficients_in_y();
    let qc = q.coefficients_in_y();
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    match (m, n) {
        (0, 0) => Err(FiberError::BothConstantInY),
        (0, _) => Ok(pc[0].pow(n as u32)),
        (_, 0) => Ok(qc[0].pow(m as u32)),
        _ => Ok(sylvester_determinant(&pc, &qc)),
    }
}

/// Floating view of [`resultant_in_y`].
pub fn resultant_eliminate_y(
    p: &BivariatePolynomial,
    q: &BivariatePolynomial,
) -> Result<UnivariatePolynomial, FiberError> {
    resultant_in_y(p, q).map(|r| UnivariatePolynomial::new(r.to_complex()))
}

/// Sylvester determinant for coefficient lists in ascending Y order.
fn sylvester_determinant(pc: &[UniPoly], qc: &[UniPoly]) -> UniPoly {
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    let size = m + n;
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = pc[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = qc[n - k].clone();
        }
    }
    bareiss(mat)
}

/// Fraction-free elimination over Q(i)[X]; every division is exact.
fn bareiss(mut mat: Vec<Vec<UniPoly>>) -> UniPoly {
    let size = mat.len();
    let mut sign_flip = false;
    let mut prev = UniPoly::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return UniPoly::zero();
            };
            mat.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.div_exact(&prev);
            }
            mat[i][k] = UniPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// Interpolates values at the nodes `0, 1, …, len-1` (Newton divided differences).
pub(crate) fn interpolate_integer_nodes(values: &[GaussianRational]) -> UniPoly {
    let n = values.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let denom = GaussianRational::from_int(level as i64);
            dd[i] = &(&dd[i] - &dd[i - 1]) / &denom;
        }
    }
    let mut p = UniPoly::zero();
    for k in (0..n).rev() {
        let shift = UniPoly::new(vec![GaussianRational::from_int(-(k as i64)), GaussianRational::from_int(1)]);
        p = &(&p * &shift) + &UniPoly::constant(dd[k].clone());
    }
    p
}

/// The generic resultant `R(X; a, b) = Res_Y(P − a, Q − b)`.
///
/// The degree in `a` is at most `deg_Y Q` and in `b` at most `deg_Y P`, so the
/// exact determinants on an integer grid of that size determine it.
/// Returned as one polynomial in `(a, b)` per power of X, stored with
/// `a ↦ X`, `b ↦ Y`.
pub fn generic_resultant(
    p: &BivariatePolynomial,
    q: &BivariatePolynomial,
) -> Result<Vec<BivariatePolynomial>, FiberError> {
    let m = p.degree_in_y().unwrap_or(0) as usize;
    let n = q.degree_in_y().unwrap_or(0) as usize;
    if m == 0 && n == 0 {
        return Err(FiberError::BothConstantInY);
    }
    let node = |s: usize| GaussianRational::from_int(s as i64);
    // grid[t][s] = Res at a = s, b = t
    let mut grid: Vec<Vec<UniPoly>> = Vec::with_capacity(m + 1);
    for t in 0..=m {
        let q_t = q - &BivariatePolynomial::constant(node(t));
        let mut row = Vec::with_capacity(n + 1);
        for s in 0..=n {
            let p_s = p - &BivariatePolynomial::constant(node(s));
            row.push(resultant_in_y(&p_s, &q_t)?);
        }
        grid.push(row);
    }
    let deg_x = grid.iter().flatten().filter_map(UniPoly::degree).max();
    let Some(deg_x) = deg_x else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(deg_x + 1);
    for k in 0..=deg_x {
        // interpolate in a for every b node, then in b for every power of a
        let in_a: Vec<UniPoly> = grid
            .iter()
            .map(|row| interpolate_integer_nodes(&row.iter().map(|r| r.coeff(k)).collect::<Vec<_>>()))
            .collect();
        let mut terms = Vec::new();
        for e in 0..=n {
            let in_b = interpolate_integer_nodes(&in_a.iter().map(|u| u.coeff(e)).collect::<Vec<_>>());
            for (f, c) in in_b.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.push((e as u32, f as u32, c.clone()));
                }
            }
        }
        out.push(BivariatePolynomial::from_terms(terms));
    }
    while out.last().is_some_and(BivariatePolynomial::is_zero) {
        out.pop();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    #[test]
    fn small_sylvester_determinants() {
        // Y − 3 and Y − 5
        let r = resultant_in_y(&poly(&[(0, 1, 1), (0, 0, -3)]), &poly(&[(0, 1, 1), (0, 0, -5)])).unwrap();
        assert_eq!(r, UniPoly::from_ints(&[-2]));
        // Y² − 7 and Y − 2: 2² − 7 up to sign
        let r = resultant_in_y(&poly(&[(0, 2, 1), (0, 0, -7)]), &poly(&[(0, 1, 1), (0, 0, -2)])).unwrap();
        assert!(r == UniPoly::from_ints(&[-3]) || r == UniPoly::from_ints(&[3]));
        let p = poly(&[(0, 2, 1), (1, 0, 1)]);
        assert!(resultant_in_y(&p, &p).unwrap().is_zero());
        assert_eq!(resultant_in_y(&poly(&[(1, 0, 1)]), &poly(&[(2, 0, 1)])), Err(FiberError::BothConstantInY));
    }

    #[test]
    fn resultant_vanishes_at_common_roots() {
        // P = Y² − X, Q = Y − X: common root where X² = X
        let r = resultant_in_y(&poly(&[(0, 2, 1), (1, 0, -1)]), &poly(&[(0, 1, 1), (1, 0, -1)])).unwrap();
        assert!(r.eval(&GaussianRational::from_int(0)).is_zero());
        assert!(r.eval(&GaussianRational::from_int(1)).is_zero());
        assert_eq!(r.degree(), Some(2));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly::from_ints(&[3, -1, 0, 2]);
        let values: Vec<_> = (0..4).map(|s| p.eval(&GaussianRational::from_int(s))).collect();
        assert_eq!(interpolate_integer_nodes(&values), p);
    }

    #[test]
    fn generic_resultant_matches_direct_evaluation() {
        let p = poly(&[(1, 0, 1), (0, 2, 1), (1, 1, 2)]);
        let q = poly(&[(0, 1, 1), (2, 0, 3), (0, 0, 1)]);
        let gen = generic_resultant(&p, &q).unwrap();
        let (a, b) = (GaussianRational::from_fraction_parts(2, 3, 1, 1), GaussianRational::from_ints(-5, 2));
        let direct = resultant_in_y(
            &(&p - &BivariatePolynomial::constant(a.clone())),
            &(&q - &BivariatePolynomial::constant(b.clone())),
        )
        .unwrap();
        let via: Vec<_> = gen.iter().map(|c| c.eval_exact(&a, &b)).collect();
        assert_eq!(UniPoly::new(via), direct);
    }
}
