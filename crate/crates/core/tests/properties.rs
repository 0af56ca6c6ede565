use keller_core::autgroup::{decompose_automorphism, expand_word, random_tame_word, WordShape};
use keller_core::polycore::{
    compose_maps, is_keller, jacobian_determinant, uniform_bound_on_compact, BivariatePolynomial, CompiledMap,
    ComplexPoint, PlanarPolyMap,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly(max_degree: u32) -> impl Strategy<Value = BivariatePolynomial> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, -3i64..=3), 0..5).prop_map(move |terms| {
        let terms: Vec<_> = terms.into_iter().filter(|&(i, j, _)| i + j <= max_degree).collect();
        BivariatePolynomial::from_int_terms(&terms)
    })
}

fn map(max_degree: u32) -> impl Strategy<Value = PlanarPolyMap> {
    (poly(max_degree), poly(max_degree)).prop_map(|(p, q)| PlanarPolyMap::new(p, q))
}

fn small_word(seed: u64) -> PlanarPolyMap {
    let shape = WordShape { max_factors: 3, max_elementary_degree: 3 };
    expand_word(&random_tame_word(&mut ChaCha8Rng::seed_from_u64(seed), shape))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(f in map(2), g in map(2), h in map(2)) {
        prop_assert_eq!(compose_maps(&f, &compose_maps(&g, &h)), compose_maps(&compose_maps(&f, &g), &h));
    }

    #[test]
    fn jacobian_chain_rule(f in map(3), g in map(2)) {
        let lhs = jacobian_determinant(&compose_maps(&f, &g));
        let rhs = &jacobian_determinant(&f).substitute(g.first(), g.second()) * &jacobian_determinant(&g);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn keller_maps_are_closed_under_composition(a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (small_word(a), small_word(b));
        prop_assert!(is_keller(&f) && is_keller(&g));
        prop_assert!(is_keller(&compose_maps(&f, &g)));
    }

    #[test]
    fn decomposition_roundtrip(seed in any::<u64>()) {
        let f = small_word(seed);
        let w = decompose_automorphism(&f).expect("tame words decompose");
        prop_assert_eq!(expand_word(&w), f);
    }

    #[test]
    fn uniform_bound_dominates_samples(
        f in map(4),
        g in map(4),
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..6.3, 0.0f64..1.0, 0.0f64..6.3), 16),
    ) {
        let bound = uniform_bound_on_compact(&f, &g, 1.0);
        let (cf, cg) = (CompiledMap::new(&f), CompiledMap::new(&g));
        for (r, a, s, b) in pts {
            let p = ComplexPoint::new(Complex64::from_polar(r, a), Complex64::from_polar(s, b));
            let (u, v) = (cf.eval(p), cg.eval(p));
            let gap = (u.z - v.z).norm() + (u.w - v.w).norm();
            prop_assert!(gap <= bound * (1.0 + 1e-12) + 1e-12, "{} > {}", gap, bound);
        }
    }
}
