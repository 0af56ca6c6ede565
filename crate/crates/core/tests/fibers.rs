use keller_core::fibercount::{geometric_degree_report, solve_fiber, DEFAULT_TOL};
use keller_core::polycore::{BivariatePolynomial, ComplexPoint, PlanarPolyMap};

fn poly(terms: &[(u32, u32, i64)]) -> BivariatePolynomial {
    BivariatePolynomial::from_int_terms(terms)
}

fn shear_x() -> PlanarPolyMap {
    PlanarPolyMap::new(poly(&[(1, 0, 1), (0, 2, 1)]), poly(&[(0, 1, 1)]))
}

fn swap_square() -> PlanarPolyMap {
    PlanarPolyMap::new(poly(&[(0, 1, 1), (2, 0, 1)]), poly(&[(1, 0, -1)]))
}

fn shear_y_cubic() -> PlanarPolyMap {
    PlanarPolyMap::new(poly(&[(1, 0, 1)]), poly(&[(0, 1, 1), (3, 0, 1), (1, 0, 1)]))
}

#[test]
fn degree_is_multiplicative_across_automorphism_factors() {
    let powers = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3), (2, 3), (3, 2)];
    let autos = [shear_x(), swap_square(), shear_y_cubic()];
    let mut checked = 0;
    for (k, &(a, b)) in powers.iter().enumerate() {
        let f = PlanarPolyMap::power(a, b);
        let auto = &autos[k % autos.len()];
        for (g, expect) in [
            (auto.compose(&f), a * b),
            (f.compose(auto), a * b),
            (f.compose(&PlanarPolyMap::power(b, a)), a * a * b * b),
        ] {
            let rep = geometric_degree_report(&g, 16, 11, DEFAULT_TOL).unwrap();
            assert_eq!(rep.degree as u32, expect, "map {g}: {:?}", rep.cardinalities);
            assert!(rep.agreement() >= 0.9, "map {g}: {:?}", rep.cardinalities);
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn fiber_points_satisfy_residual_bound() {
    let f = shear_x().compose(&PlanarPolyMap::power(2, 3)).compose(&swap_square());
    let x = ComplexPoint::real(0.7, -0.4);
    let target = keller_core::polycore::CompiledMap::new(&f).eval(x);
    let r = solve_fiber(&f, target, DEFAULT_TOL).unwrap();
    assert_eq!(r.cardinality, 6);
    assert!(r.points.iter().any(|p| p.dist(&x) < 1e-9));
    for p in &r.points {
        let v = keller_core::polycore::CompiledMap::new(&f).eval(*p);
        assert!(v.dist(&target) <= DEFAULT_TOL);
    }
}
