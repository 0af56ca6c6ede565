use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::canonical::{compose_symbolic, validate_canonical, CanonicalRationalMap, CanonicalValidation};
use super::sparse::SparsePoly;
use crate::fibercount::{all_roots, UnivariatePolynomial};
use crate::polycore::{GaussianRational, PlanarPolyMap, UniPoly};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBounds {
    pub alpha_max: u32,
    pub beta_max: u32,
    pub phi_deg_max: u32,
}

impl SearchBounds {
    pub fn new(alpha_max: u32, beta_max: u32, phi_deg_max: u32) -> Self {
        SearchBounds { alpha_max, beta_max, phi_deg_max }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FoundTract {
    pub tract: CanonicalRationalMap,
    pub validation: CanonicalValidation,
}

/// Search outcome; `unresolved` lists `(α, β)` cells whose polynomial
/// system the exact solver could not reduce.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TractSearch {
    pub tracts: Vec<FoundTract>,
    pub unresolved: Vec<(u32, u32)>,
}

/// Asymptotic tracts `R` of `f` with `1 ≤ α ≤ α_max`, `0 ≤ β ≤ β_max` and
/// `deg Φ ≤ min(phi_deg_max, α + β − 1)`.
pub fn tract_search(f: &PlanarPolyMap, alpha_max: u32, beta_max: u32, phi_deg_max: u32) -> Vec<FoundTract> {
    tract_search_report(f, SearchBounds::new(alpha_max, beta_max, phi_deg_max)).tracts
}

/// `f ∘ R` is polynomial iff every coefficient of a negative power of X
/// vanishes. Those coefficients are polynomials in the coefficients of Φ,
/// solved exactly cell by cell. A positive-dimensional solution set is
/// reported by representatives: free coordinates at 0 and at each unit vector.
pub fn tract_search_report(f: &PlanarPolyMap, b: SearchBounds) -> TractSearch {
    let cells: Vec<(u32, u32)> = (1..=b.alpha_max)
        .flat_map(|a| (0..=b.beta_max).map(move |bt| (a, bt)))
        .collect();
    let per_cell: Vec<_> = cells
        .par_iter()
        .map(|&(alpha, beta)| {
            let d = b.phi_deg_max.min(alpha + beta - 1) as usize;
            (alpha, beta, solve_cell(f, alpha, beta, d))
        })
        .collect();
    let mut out = TractSearch::default();
    for (alpha, beta, sols) in per_cell {
        match sols {
            Some(sols) => {
                for phi in sols {
                    let tract = CanonicalRationalMap { alpha, beta, phi: UniPoly::new(phi) };
                    if out.tracts.iter().all(|t| t.tract != tract) {
                        let validation = validate_canonical(&tract);
                        out.tracts.push(FoundTract { tract, validation });
                    }
                }
            }
            None => out.unresolved.push((alpha, beta)),
        }
    }
    out
}

fn solve_cell(f: &PlanarPolyMap, alpha: u32, beta: u32, d: usize) -> Option<Vec<Vec<GaussianRational>>> {
    let n = d + 1;
    // ring [X, Y, c_0, …, c_d]
    let phi: Vec<SparsePoly> = (0..n).map(|k| SparsePoly::var(n + 2, k + 2)).collect();
    let comps = compose_symbolic(f, alpha, beta, &phi);
    let mut eqs = Vec::new();
    for c in &comps {
        for (xy, coeff) in c.split_leading(2) {
            if xy[0] < 0 {
                eqs.push(coeff);
            }
        }
    }
    solve_system(eqs, vec![None; n]).ok()
}

struct Unresolved;

/// Exact solutions of a polynomial system over Q(i), for the shapes that
/// occur here: variables that appear linearly with a constant coefficient
/// are eliminated, univariate equations are split over their Gaussian-
/// rational roots. Anything else is `Unresolved`.
fn solve_system(
    eqs: Vec<SparsePoly>,
    bindings: Vec<Option<SparsePoly>>,
) -> Result<Vec<Vec<GaussianRational>>, Unresolved> {
    let mut live = Vec::with_capacity(eqs.len());
    for e in eqs {
        match e.as_constant() {
            Some(c) if c.is_zero() => {}
            Some(_) => return Ok(Vec::new()),
            None => live.push(e),
        }
    }
    if live.is_empty() {
        return Ok(representatives(&bindings));
    }
    for e in &live {
        for k in e.variables() {
            let Some((a, b)) = e.linear_split(k) else { continue };
            let Some(a) = a.as_constant() else { continue };
            let value = b.scale(&-a.inv().expect("linear coefficient is nonzero"));
            return solve_system(bind(&live, k, &value), with_binding(&bindings, k, value));
        }
    }
    for e in &live {
        let vars = e.variables();
        if vars.len() != 1 {
            continue;
        }
        let k = vars[0];
        let u = e.to_univariate(k).ok_or(Unresolved)?;
        let mut out = Vec::new();
        for r in gaussian_rational_roots(&u) {
            let value = SparsePoly::constant(e.nvars(), r);
            out.extend(solve_system(bind(&live, k, &value), with_binding(&bindings, k, value))?);
        }
        return Ok(out);
    }
    Err(Unresolved)
}

fn bind(eqs: &[SparsePoly], k: usize, value: &SparsePoly) -> Vec<SparsePoly> {
    eqs.iter().map(|e| e.substitute(k, value)).collect()
}

fn with_binding(bindings: &[Option<SparsePoly>], k: usize, value: SparsePoly) -> Vec<Option<SparsePoly>> {
    let mut out: Vec<Option<SparsePoly>> =
        bindings.iter().map(|b| b.as_ref().map(|b| b.substitute(k, &value))).collect();
    out[k] = Some(value);
    out
}

fn representatives(bindings: &[Option<SparsePoly>]) -> Vec<Vec<GaussianRational>> {
    let free: Vec<usize> = (0..bindings.len()).filter(|&k| bindings[k].is_none()).collect();
    let mut samples = vec![vec![GaussianRational::zero(); bindings.len()]];
    for &k in &free {
        let mut s = vec![GaussianRational::zero(); bindings.len()];
        s[k] = GaussianRational::one();
        samples.push(s);
    }
    samples
        .into_iter()
        .map(|free_values| {
            (0..bindings.len())
                .map(|k| match &bindings[k] {
                    Some(expr) => expr.eval(&free_values),
                    None => free_values[k].clone(),
                })
                .collect()
        })
        .collect()
}

const MAX_DENOMINATOR: i128 = 1_000_000;

/// Roots of `u` in Q(i): numerical roots of the square-free part, rounded
/// by continued fractions and kept only if they are exact roots.
pub(crate) fn gaussian_rational_roots(u: &UniPoly) -> Vec<GaussianRational> {
    let Some(deg) = u.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let sqfree = u.div_exact(&u.gcd(&u.derivative()));
    let Ok(roots) = all_roots(&UnivariatePolynomial::new(sqfree.to_complex())) else {
        return Vec::new();
    };
    let mut out: Vec<GaussianRational> = Vec::new();
    for z in roots {
        let (Some(re), Some(im)) = (best_rational(z.re), best_rational(z.im)) else { continue };
        let cand = GaussianRational::from_fraction_parts(re.0 as i64, re.1 as i64, im.0 as i64, im.1 as i64);
        if sqfree.eval(&cand).is_zero() && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

fn best_rational(x: f64) -> Option<(i128, i128)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let tol = 1e-9 * x.abs().max(1.0);
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 > 0 && (h1 as f64 / k1 as f64 - x).abs() <= tol).then_some((h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::BivariatePolynomial;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    fn keys(found: &[FoundTract]) -> Vec<(u32, u32, UniPoly)> {
        found.iter().map(|t| (t.tract.alpha, t.tract.beta, t.tract.phi.clone())).collect()
    }

    #[test]
    fn search_examples() {
        let xy = PlanarPolyMap::new(poly(&[(1, 1, 1)]), poly(&[(0, 1, 1)]));
        let found = keys(&tract_search(&xy, 2, 2, 1));
        assert_eq!(
            found,
            vec![(1, 1, UniPoly::zero()), (1, 2, UniPoly::zero()), (2, 2, UniPoly::zero())]
        );
        let shear = PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, 1)]), poly(&[(0, 1, 1)]));
        let rep = tract_search_report(&shear, SearchBounds::new(2, 3, 2));
        assert!(rep.tracts.is_empty() && rep.unresolved.is_empty());
        let xy2 = PlanarPolyMap::new(poly(&[(1, 2, 1)]), poly(&[(0, 1, 1)]));
        assert!(keys(&tract_search(&xy2, 2, 2, 1)).contains(&(1, 1, UniPoly::zero())));
    }

    #[test]
    fn nonlinear_cell_is_solved() {
        // (X·Y², Y − X·Y): several φ are forced through quadratic equations
        let f = PlanarPolyMap::new(poly(&[(1, 2, 1)]), poly(&[(0, 1, 1), (1, 1, -1)]));
        let rep = tract_search_report(&f, SearchBounds::new(2, 2, 2));
        assert!(rep.unresolved.is_empty());
        for t in &rep.tracts {
            assert!(super::super::dual_map(&f, &t.tract).is_ok(), "{}", t.tract);
        }
    }

    #[test]
    fn rational_roots() {
        // (2t − 1)(t² + 2)(t − i/3)
        let a = UniPoly::from_ints(&[-1, 2]);
        let b = UniPoly::from_ints(&[2, 0, 1]);
        let c = UniPoly::new(vec![GaussianRational::from_fraction_parts(0, 1, -1, 3), GaussianRational::one()]);
        let r = gaussian_rational_roots(&(&(&a * &b) * &c));
        assert_eq!(r.len(), 2);
        assert!(r.contains(&GaussianRational::from_fraction_parts(1, 2, 0, 1)));
        assert!(r.contains(&GaussianRational::from_fraction_parts(0, 1, 1, 3)));
    }
}
