use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FiberError;

pub const MAX_ABERTH_ITERATIONS: usize = 1000;

/// Dense polynomial with complex double coefficients, ascending degree.
#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct UnivariatePolynomial {
    coefficients: Vec<Complex64>,
}

impl UnivariatePolynomial {
    /// Trailing exact zeros are dropped.
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        UnivariatePolynomial { coefficients }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        UnivariatePolynomial::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Drops leading coefficients below `rel · max|c|`.
    pub fn trimmed(&self, rel: f64) -> UnivariatePolynomial {
        let scale = self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut c = self.coefficients.clone();
        while c.last().is_some_and(|x| x.norm() <= rel * scale) {
            c.pop();
        }
        UnivariatePolynomial { coefficients: c }
    }
}

/// A root reported once together with how many computed roots it absorbed.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct RootCluster {
    pub root: Complex64,
    pub multiplicity: usize,
}

/// All roots, clustered at radius `tol`; multiplicities sum to the degree.
pub fn univariate_roots(u: &UnivariatePolynomial, tol: f64) -> Result<Vec<RootCluster>, FiberError> {
    let roots = all_roots(u)?;
    Ok(cluster(&roots, tol))
}

/// Every root repeated by multiplicity (unclustered).
pub fn all_roots(u: &UnivariatePolynomial) -> Result<Vec<Complex64>, FiberError> {
    if u.is_zero() {
        return Err(FiberError::ZeroPolynomial);
    }
    let c = u.coefficients();
    let zeros = c.iter().take_while(|x| **x == Complex64::new(0.0, 0.0)).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let rest = &c[zeros..];
    roots.extend(match rest.len() - 1 {
        0 => Vec::new(),
        1 => vec![-rest[0] / rest[1]],
        2 => quadratic(rest[0], rest[1], rest[2]).to_vec(),
        _ => match aberth(rest) {
            Ok(r) => r,
            Err(e) if rest.len() <= 5 => companion_roots(rest).ok_or(e)?,
            Err(e) => return Err(e),
        },
    });
    Ok(roots)
}

fn quadratic(c: Complex64, b: Complex64, a: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let s = if (b.conj() * disc).re >= 0.0 { -b - disc } else { -b + disc };
    if s == Complex64::new(0.0, 0.0) {
        return [Complex64::new(0.0, 0.0); 2];
    }
    let r1 = s / (2.0 * a);
    [r1, 2.0 * c / s]
}

/// Aberth–Ehrlich simultaneous iteration (Gauss–Seidel sweep).
fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>, FiberError> {
    let n = c.len() - 1;
    let lead = c[n];
    let a: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let abs: Vec<f64> = a.iter().map(|x| x.norm()).collect();
    let radius = abs[0].powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let (mut p, mut dp) = (a[n], Complex64::new(0.0, 0.0));
            let mut bound = abs[n];
            let r = zk.norm();
            for j in (0..n).rev() {
                dp = dp * zk + p;
                p = p * zk + a[j];
                bound = bound * r + abs[j];
            }
            if p.norm() <= 8.0 * f64::EPSILON * bound {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (zk - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            if !w.is_finite() {
                continue;
            }
            z[k] = zk - w;
            if w.norm() <= 2.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|d| *d) {
            return Ok(z);
        }
    }
    Err(FiberError::NonConvergence { iterations: MAX_ABERTH_ITERATIONS })
}

fn companion_roots(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let schur = Schur::try_new(m, f64::EPSILON, MAX_ABERTH_ITERATIONS)?;
    schur.eigenvalues().map(|v| v.iter().copied().collect())
}

/// Single-linkage clusters at distance `tol`, reported by centroid and sorted
/// by real then imaginary part.
pub fn cluster(roots: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(roots[i]);
    }
    let mut out: Vec<RootCluster> = groups
        .into_values()
        .map(|g| RootCluster {
            root: g.iter().sum::<Complex64>() / g.len() as f64,
            multiplicity: g.len(),
        })
        .collect();
    out.sort_by(|a, b| a.root.re.total_cmp(&b.root.re).then(a.root.im.total_cmp(&b.root.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn roots_of_small_polynomials() {
        let r = univariate_roots(&UnivariatePolynomial::from_real(&[1.0, 0.0, 1.0]), 1e-9).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|c| close(c.root, Complex64::i(), 1e-12)));
        assert!(r.iter().any(|c| close(c.root, -Complex64::i(), 1e-12)));

        let r = univariate_roots(&UnivariatePolynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]), 1e-9).unwrap();
        assert_eq!(r.len(), 3);
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            assert!(r.iter().any(|c| close(c.root, w, 1e-12)));
        }
    }

    #[test]
    fn double_root_clusters() {
        // (z−1)²(z+2) = z³ − 3z + 2
        let r = univariate_roots(&UnivariatePolynomial::from_real(&[2.0, -3.0, 0.0, 1.0]), 1e-6).unwrap();
        assert_eq!(r.len(), 2);
        assert!(close(r[0].root, Complex64::new(-2.0, 0.0), 1e-10));
        assert_eq!(r[0].multiplicity, 1);
        assert!(close(r[1].root, Complex64::new(1.0, 0.0), 1e-7));
        assert_eq!(r[1].multiplicity, 2);
    }

    #[test]
    fn high_degree_and_zero_roots() {
        // z^3 (z^12 − 1)
        let mut c = vec![0.0; 16];
        c[3] = -1.0;
        c[15] = 1.0;
        let roots = all_roots(&UnivariatePolynomial::from_real(&c)).unwrap();
        assert_eq!(roots.len(), 15);
        assert_eq!(roots.iter().filter(|z| z.norm() == 0.0).count(), 3);
        assert!(roots.iter().filter(|z| z.norm() > 0.0).all(|z| (z.powu(12) - 1.0).norm() < 1e-12));
    }

    #[test]
    fn companion_fallback_agrees() {
        let c: Vec<Complex64> = [6.0, -5.0, -2.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut r = companion_roots(&c).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (got, want) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!(close(*got, Complex64::new(want, 0.0), 1e-10));
        }
    }
}
