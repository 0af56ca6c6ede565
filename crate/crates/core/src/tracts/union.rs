use num_complex::Complex64;
use serde::Serialize;

use super::canonical::{dual_map, TractJson};
use super::curves::{component_parametrization, implicitize};
use super::search::{tract_search_report, SearchBounds};
use crate::polycore::{BivariatePolynomial, CompiledMap, CompiledPoly, ComplexPoint, FloatPoly, PlanarPolyMap, UniPoly};

pub const UNION_SAMPLES: usize = 32;
pub const CONTAINMENT_TOL: f64 = 1e-6;

/// A component of the asymptotic variety reached through a found tract.
#[derive(Clone, Debug)]
pub enum Component {
    Point(ComplexPoint),
    Curve(BivariatePolynomial),
}

impl Component {
    /// Within `tol` of the point, or `|H(p)| ≤ tol · Σ|h_ij p^ij|`.
    pub fn contains(&self, p: ComplexPoint, tol: f64) -> bool {
        match self {
            Component::Point(q) => q.dist(&p) <= tol,
            Component::Curve(h) => {
                let f = FloatPoly::from(h);
                let mut scale = 0.0;
                for (m, c) in f.terms() {
                    scale += c.norm() * p.z.norm().powi(m.i as i32) * p.w.norm().powi(m.j as i32);
                }
                f.eval(p.z, p.w).norm() <= tol * scale.max(1.0)
            }
        }
    }
}

/// Components `{G_R(0, t)}` for the tracts of `f` found within `bounds`.
pub fn tract_components(f: &PlanarPolyMap, bounds: SearchBounds) -> Vec<Component> {
    let mut out = Vec::new();
    for t in tract_search_report(f, bounds).tracts {
        let Ok(gr) = dual_map(f, &t.tract) else { continue };
        let param = component_parametrization(&gr);
        out.push(match implicitize(&param) {
            Ok(h) => Component::Curve(h),
            Err(_) => Component::Point(ComplexPoint::new(param.0.coeff(0).to_complex(), param.1.coeff(0).to_complex())),
        });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct UnionSample {
    pub tract: TractJson,
    pub t: Complex64,
    pub point: ComplexPoint,
    pub contained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnionCheckReport {
    pub bounds: SearchBounds,
    pub f_tracts: usize,
    pub g_tracts: usize,
    pub fg_tracts: usize,
    /// Every tract of g is also a tract of f∘g.
    pub monotone: bool,
    pub samples: Vec<UnionSample>,
    /// `F(A(G)) ⊆ A(F∘G)` on every sample.
    pub verdict: bool,
}

/// Parameter values on a spiral, so curve samples are spread out and distinct.
pub fn sample_parameters(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let s = k as f64 / n as f64;
            Complex64::from_polar(0.25 + 1.5 * s, std::f64::consts::TAU * 2.0 * s + 0.3)
        })
        .collect()
}

/// Checks the inclusion `F(A(G)) ⊆ A(F∘G)` on samples of every component of g.
pub fn asymptotic_union_check(f: &PlanarPolyMap, g: &PlanarPolyMap, bounds: SearchBounds) -> UnionCheckReport {
    let fg = f.compose(g);
    let f_found = tract_search_report(f, bounds);
    let g_found = tract_search_report(g, bounds);
    let fg_found = tract_search_report(&fg, bounds);
    let components = tract_components(&fg, bounds);
    let fc = CompiledMap::new(f);
    let mut samples = Vec::new();
    let mut monotone = true;
    for t in &g_found.tracts {
        monotone &= dual_map(&fg, &t.tract).is_ok();
        let Ok(gr) = dual_map(g, &t.tract) else { continue };
        let (p1, p2) = component_parametrization(&gr);
        let (c1, c2) = (compile_uni(&p1), compile_uni(&p2));
        for s in sample_parameters(UNION_SAMPLES) {
            let base = ComplexPoint::new(c1.eval(s, s), c2.eval(s, s));
            let point = fc.eval(base);
            let contained = components.iter().any(|c| c.contains(point, CONTAINMENT_TOL));
            samples.push(UnionSample { tract: TractJson::from(&t.tract), t: s, point, contained });
        }
    }
    UnionCheckReport {
        bounds,
        f_tracts: f_found.tracts.len(),
        g_tracts: g_found.tracts.len(),
        fg_tracts: fg_found.tracts.len(),
        monotone,
        verdict: samples.iter().all(|s| s.contained),
        samples,
    }
}

fn compile_uni(p: &UniPoly) -> CompiledPoly {
    CompiledPoly::new(&FloatPoly::from(&BivariatePolynomial::from_univariate(p, false)))
}
