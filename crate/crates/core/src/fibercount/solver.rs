use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::resultant::generic_resultant;
use super::roots::{all_roots, UnivariatePolynomial};
use super::FiberError;
use crate::polycore::{BivariatePolynomial, CompiledMap, CompiledPoly, ComplexPoint, FloatPoly, PlanarPolyMap};
use crate::rng::{purpose, CounterRng};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_TRIALS: usize = 16;
/// Targets are images of uniform points in the bidisk of this radius.
pub const TRIAL_RADIUS: f64 = 2.0;

const NEWTON_STEPS: usize = 60;

static SOLVES: AtomicU64 = AtomicU64::new(0);
static BEZOUT_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide tallies of fiber solves, for auditing the Bezout bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct FiberStats {
    pub solves: u64,
    pub bezout_violations: u64,
}

pub fn fiber_stats() -> FiberStats {
    FiberStats {
        solves: SOLVES.load(Ordering::Relaxed),
        bezout_violations: BEZOUT_VIOLATIONS.load(Ordering::Relaxed),
    }
}
/// Leading resultant coefficients below this fraction of the largest are dropped.
const TRIM: f64 = 1e-13;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FiberResult {
    pub target: ComplexPoint,
    pub points: Vec<ComplexPoint>,
    pub residuals: Vec<f64>,
    pub cardinality: usize,
}

/// Fiber solver for one map, with the generic resultant precomputed.
///
/// `Res_Y(P − a, Q − b)` is built once, exactly, as a polynomial in
/// `(X, a, b)`; each target only evaluates its coefficients.
#[derive(Clone, Debug)]
pub struct FiberSolver {
    map: CompiledMap,
    resultant: Vec<CompiledPoly>,
    p_in_y: Vec<CompiledPoly>,
    q_in_y: Vec<CompiledPoly>,
    bezout: usize,
}

impl FiberSolver {
    pub fn new(f: &PlanarPolyMap) -> Result<Self, FiberError> {
        let gen = generic_resultant(f.first(), f.second())?;
        // Free of X means no generic fiber point: the image is a curve or a point.
        if gen.len() <= 1 {
            return Err(FiberError::ResultantVanishes);
        }
        fn compile(p: &BivariatePolynomial) -> CompiledPoly {
            CompiledPoly::new(&FloatPoly::from(p))
        }
        let in_y = |p: &BivariatePolynomial| -> Vec<CompiledPoly> {
            p.coefficients_in_y()
                .iter()
                .map(|c| compile(&BivariatePolynomial::from_univariate(c, true)))
                .collect()
        };
        Ok(FiberSolver {
            map: CompiledMap::new(f),
            resultant: gen.iter().map(compile).collect(),
            p_in_y: in_y(f.first()),
            q_in_y: in_y(f.second()),
            bezout: (f.first().degree_or_zero() as usize) * (f.second().degree_or_zero() as usize),
        })
    }

    /// `deg P · deg Q`
    pub fn bezout_bound(&self) -> usize {
        self.bezout
    }

    /// Resultant in X for this target.
    pub fn resultant_at(&self, target: ComplexPoint) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.resultant.iter().map(|c| c.eval(target.z, target.w)).collect())
    }

    pub fn solve(&self, target: ComplexPoint, tol: f64) -> Result<FiberResult, FiberError> {
        let r = self.resultant_at(target).trimmed(TRIM);
        if r.is_zero() {
            return Err(FiberError::ResultantVanishes);
        }
        let xs = all_roots(&r)?;
        let mut candidates = Vec::new();
        for &x in &xs {
            for (cols, shift) in [(&self.p_in_y, target.z), (&self.q_in_y, target.w)] {
                let mut c: Vec<Complex64> = cols.iter().map(|p| p.eval(x, Complex64::new(0.0, 0.0))).collect();
                if let Some(c0) = c.first_mut() {
                    *c0 -= shift;
                }
                let u = UnivariatePolynomial::new(c).trimmed(TRIM);
                if u.degree().unwrap_or(0) == 0 {
                    continue;
                }
                for y in all_roots(&u)? {
                    candidates.push(ComplexPoint::new(x, y));
                }
            }
        }
        let mut points: Vec<(ComplexPoint, f64)> = Vec::new();
        for c in candidates {
            let p = self.polish(c, target);
            let res = self.map.eval(p).dist(&target);
            if !(res <= tol) {
                continue;
            }
            if points.iter().all(|(q, _)| q.dist(&p) > 10.0 * tol) {
                points.push((p, res));
            }
        }
        points.sort_by(|a, b| {
            let (a, b) = (a.0.to_r4(), b.0.to_r4());
            a.iter().zip(&b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        SOLVES.fetch_add(1, Ordering::Relaxed);
        if points.len() > self.bezout {
            BEZOUT_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
            return Err(FiberError::Unstable { observed: points.len(), bound: self.bezout });
        }
        Ok(FiberResult {
            target,
            cardinality: points.len(),
            residuals: points.iter().map(|p| p.1).collect(),
            points: points.into_iter().map(|p| p.0).collect(),
        })
    }

    /// Newton's method on `f(p) = target`.
    fn polish(&self, mut p: ComplexPoint, target: ComplexPoint) -> ComplexPoint {
        let mut best = (self.map.eval(p).dist(&target), p);
        for _ in 0..NEWTON_STEPS {
            let v = self.map.eval(p);
            let (r1, r2) = (v.z - target.z, v.w - target.w);
            let j = self.map.jacobian(p);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.norm() == 0.0 || !det.is_finite() {
                break;
            }
            let dz = (j[1][1] * r1 - j[0][1] * r2) / det;
            let dw = (j[0][0] * r2 - j[1][0] * r1) / det;
            let next = ComplexPoint::new(p.z - dz, p.w - dw);
            if !next.is_finite() {
                break;
            }
            p = next;
            let res = self.map.eval(p).dist(&target);
            if res < best.0 {
                best = (res, p);
            }
            let step = (dz.norm_sqr() + dw.norm_sqr()).sqrt();
            if step <= 4.0 * f64::EPSILON * (1.0 + p.norm()) {
                break;
            }
        }
        best.1
    }
}

/// Points of `f⁻¹(target)` with residual at most `tol`, deduplicated at `10·tol`.
pub fn solve_fiber(f: &PlanarPolyMap, target: ComplexPoint, tol: f64) -> Result<FiberResult, FiberError> {
    FiberSolver::new(f)?.solve(target, tol)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub cardinalities: Vec<usize>,
    pub bezout_bound: usize,
}

impl DegreeReport {
    /// Fraction of trials that reached the maximum.
    pub fn agreement(&self) -> f64 {
        let hits = self.cardinalities.iter().filter(|&&c| c == self.degree).count();
        hits as f64 / self.cardinalities.len().max(1) as f64
    }
}

/// Uniform point of the bidisk `|z|, |w| < radius`.
pub(crate) fn bidisk_point(rng: &mut impl Rng, radius: f64) -> ComplexPoint {
    let mut disk = || {
        let r = radius * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
    };
    let z = disk();
    ComplexPoint::new(z, disk())
}

/// Maximum fiber cardinality over `trials` random image targets.
pub fn geometric_degree(f: &PlanarPolyMap, trials: usize, seed: u64) -> Result<usize, FiberError> {
    geometric_degree_report(f, trials, seed, DEFAULT_TOL).map(|r| r.degree)
}

/// Trial `i` draws from stream `(seed, i)`, so the report does not depend on
/// the number of worker threads.
pub fn geometric_degree_report(
    f: &PlanarPolyMap,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<DegreeReport, FiberError> {
    assert!(trials > 0, "trials must be positive");
    let solver = FiberSolver::new(f)?;
    let rng = CounterRng::new(seed, purpose::FIBER_TRIALS);
    let cardinalities = (0..trials)
        .into_par_iter()
        .map(|i| {
            let x = bidisk_point(&mut rng.stream(i as u64), TRIAL_RADIUS);
            solver.solve(solver.map.eval(x), tol).map(|r| r.cardinality)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let degree = cardinalities.iter().copied().max().unwrap_or(0);
    Ok(DegreeReport { degree, cardinalities, bezout_bound: solver.bezout })
}

#[cfg(test)]
mod tests {
    use super::*;
    use BivariatePolynomial;

    fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    fn has(r: &FiberResult, z: f64, w: f64) -> bool {
        r.points.iter().any(|p| p.dist(&ComplexPoint::real(z, w)) < 1e-9)
    }

    #[test]
    fn fiber_examples() {
        let r = solve_fiber(&PlanarPolyMap::power(2, 1), ComplexPoint::real(4.0, 7.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.cardinality, 2);
        assert!(has(&r, 2.0, 7.0) && has(&r, -2.0, 7.0));

        let t = ComplexPoint::new(Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let r = solve_fiber(&PlanarPolyMap::identity(), t, DEFAULT_TOL).unwrap();
        assert_eq!(r.points, vec![t]);

        let f = PlanarPolyMap::new(poly(&[(2, 0, 1), (0, 3, -1)]), poly(&[(0, 1, 1)]));
        let r = solve_fiber(&f, ComplexPoint::real(1.0, 0.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.cardinality, 2);
        assert!(has(&r, 1.0, 0.0) && has(&r, -1.0, 0.0));
        assert!(r.residuals.iter().all(|&x| x <= DEFAULT_TOL));
    }

    #[test]
    fn non_dominant_map_vanishes() {
        // (X + Y, (X + Y)²) has one-dimensional image
        let s = poly(&[(1, 0, 1), (0, 1, 1)]);
        let f = PlanarPolyMap::new(s.clone(), s.pow(2));
        assert!(matches!(FiberSolver::new(&f), Err(FiberError::ResultantVanishes)));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(geometric_degree(&PlanarPolyMap::identity(), 8, 1).unwrap(), 1);
        assert_eq!(geometric_degree(&PlanarPolyMap::power(2, 1), 8, 1).unwrap(), 2);
        assert_eq!(geometric_degree(&PlanarPolyMap::power(2, 3), 8, 1).unwrap(), 6);
        let fg = PlanarPolyMap::power(2, 1).compose(&PlanarPolyMap::power(1, 3));
        assert_eq!(geometric_degree(&fg, 8, 1).unwrap(), 6);
    }

    #[test]
    fn automorphism_has_degree_one() {
        let f = PlanarPolyMap::new(poly(&[(0, 1, 1), (2, 0, 1)]), poly(&[(1, 0, -1)]));
        let rep = geometric_degree_report(&f, 16, 3, DEFAULT_TOL).unwrap();
        assert_eq!(rep.degree, 1);
        assert_eq!(rep.agreement(), 1.0);
    }
}
