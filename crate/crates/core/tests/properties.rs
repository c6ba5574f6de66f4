use proptest::prelude::*;

use superband::analysis::{
    band_component_system_check, components_of, equivalence_report, n_differential_defect, n_functional_residual,
    ComponentList,
};
use superband::annihilator::annihilator_odd;
use superband::evolution::{
    laplace, lift_laurent, orbit, p_defect_factor, resolvent_defect, velocity,
};
use superband::families::{generator_of, make_family, FamilyKind};
use superband::gamma::{band_pair_check, chain_product_verify, strong_gamma_check};
use superband::linalg::{element_vector, Echelon};
use superband::poly::Time;
use superband::random::Sampler;
use superband::{GrassmannElement, LaurentMatrix, Parity, Reduction};

fn sampler(n: u8, seed: u64) -> Sampler {
    Sampler::new(n, seed).unwrap()
}

fn nonzero_odd(s: &mut Sampler) -> GrassmannElement {
    loop {
        let x = s.odd();
        if !x.is_zero() {
            return x;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneous_products_have_summed_parity(seed in any::<u64>(), n in 1u8..=6) {
        let mut s = sampler(n, seed);
        let (a, b, e) = (s.odd(), s.odd(), s.even());
        for (x, y) in [(&a, &b), (&a, &e), (&e, &a), (&e, &e)] {
            let product = x * y;
            if !product.is_zero() {
                prop_assert_eq!(product.parity(), x.parity().combine(y.parity()));
            }
        }
        prop_assert!((&(&a * &b) + &(&b * &a)).is_zero());
    }

    #[test]
    fn annihilator_matches_brute_force_kernel(seed in any::<u64>(), n in 1u8..=5) {
        let mut s = sampler(n, seed);
        let targets = vec![s.odd(), s.odd()];
        let ann = annihilator_odd(s.context(), &targets).unwrap();
        for g in ann.basis() {
            prop_assert_eq!(g.parity(), Parity::Odd);
            for a in &targets {
                prop_assert!((g * a).is_zero());
            }
        }
        let odd = s.context().odd_basis();
        let images = odd.iter().map(|m| {
            let g = GrassmannElement::from_terms(n, [(*m, superband::grassmann::int(1))]).unwrap();
            let mut v = std::collections::BTreeMap::new();
            for (k, a) in targets.iter().enumerate() {
                for (mono, c) in element_vector(&(&g * a)) {
                    v.insert((k, mono), c);
                }
            }
            v
        });
        prop_assert_eq!(ann.dim() + Echelon::from_vectors(images).rank(), odd.len());
    }

    #[test]
    fn even_products_stay_graded(seed in any::<u64>()) {
        let mut s = sampler(4, seed);
        let (p, q) = s.shape(2);
        let (m, k) = (s.supermatrix(p, q), s.supermatrix(p, q));
        let product = m.mat_mul(&k).unwrap();
        prop_assert_eq!(product.supertrace(), k.mat_mul(&m).unwrap().supertrace());
        prop_assert!(superband::SuperMatrix::from_mat(p, q, product.mat().clone()).is_ok());
    }

    #[test]
    fn berezinian_is_multiplicative(seed in any::<u64>(), n in 2u8..=5) {
        let mut s = sampler(n, seed);
        let (p, q) = s.shape(2);
        let q = q.max(1);
        let (m, k) = (s.supermatrix_invertible_b(p, q), s.supermatrix_invertible_b(p, q));
        let lhs = m.mat_mul(&k).unwrap().berezinian().unwrap();
        prop_assert_eq!(lhs, &m.berezinian().unwrap() * &k.berezinian().unwrap());
    }

    #[test]
    fn one_one_berezinian_splits(seed in any::<u64>(), n in 2u8..=6) {
        let mut s = sampler(n, seed);
        let m = s.supermatrix_invertible_b(1, 1);
        let odd = m.odd_reduced_part();
        prop_assert_eq!(odd.classify_reduction(), Reduction::OddReduced);
        let ber_odd = odd.berezinian().unwrap();
        prop_assert!((&ber_odd * &ber_odd).is_zero());
        prop_assert_eq!(m.berezinian().unwrap(), &m.even_reduced_part().berezinian().unwrap() + &ber_odd);
        let (even_part, odd_part) = m.ber_parts().unwrap();
        prop_assert_eq!(&even_part + &odd_part, m.berezinian().unwrap());
    }

    #[test]
    fn strong_pairs_close_and_chains_match(seed in any::<u64>(), len in 2usize..=5) {
        let mut s = sampler(5, seed);
        for (p, q) in [(1, 1), (1, 2), (2, 2)] {
            let chain = s.strong_chain(p, q, len).unwrap();
            prop_assert!(strong_gamma_check(&chain).unwrap().is_strong());
            let pair = chain[0].mat_mul(&chain[1]).unwrap();
            prop_assert!(pair.is_antitriangle());
            let r = chain_product_verify(&chain).unwrap();
            prop_assert!(r.matches_closed_form);
            prop_assert_ne!(r.ber_matches(), Some(false));
            prop_assert!(band_pair_check(&chain[0], &chain[1]).unwrap().consistent);
        }
    }

    #[test]
    fn linear_equivalence_agrees(seed in any::<u64>(), n in 1u8..=5) {
        let mut s = sampler(n, seed);
        let comps = ComponentList::new(s.linear_components().unwrap()).unwrap();
        let family = comps.to_family().unwrap();
        let r = equivalence_report(&family, true).unwrap();
        prop_assert!(r.agree(), "{:?}", r.statements());
        prop_assert_eq!(generator_of(&family).unwrap(), comps.generator());
    }

    #[test]
    fn band_systems_match_band_equation(seed in any::<u64>(), degree in 1usize..=4) {
        let mut s = sampler(4, seed);
        let built = ComponentList::new(s.band_components(degree).unwrap()).unwrap();
        let r = band_component_system_check(&built).unwrap();
        prop_assert!(r.holds() && r.band_equation);
        prop_assert!(n_functional_residual(&built).unwrap().matches());
        prop_assert!(n_differential_defect(&built).unwrap().matches());
        let random = ComponentList::new((0..=degree).map(|_| s.supermatrix(1, 1)).collect()).unwrap();
        prop_assert!(band_component_system_check(&random).unwrap().consistent());
        let family = built.to_family().unwrap();
        prop_assert_eq!(components_of(&family).unwrap().to_family().unwrap(), family);
    }

    #[test]
    fn resolvent_identities(seed in any::<u64>(), n in 1u8..=6) {
        let mut s = sampler(n, seed);
        let alpha = nonzero_odd(&mut s);
        let p = make_family(FamilyKind::P, &alpha).unwrap();
        let t = make_family(FamilyKind::T, &alpha).unwrap();
        prop_assert!(resolvent_defect(&laplace(&t).unwrap()).unwrap().is_zero());
        let a = lift_laurent(&generator_of(&p).unwrap());
        prop_assert_eq!(resolvent_defect(&laplace(&p).unwrap()).unwrap(), a.scale_by(&p_defect_factor(n)).unwrap());
        let zero = LaurentMatrix::zero(n, 1, 1);
        prop_assert!(resolvent_defect(&zero).unwrap().is_zero());
    }

    #[test]
    fn laplace_is_linear(seed in any::<u64>()) {
        let mut s = sampler(4, seed);
        let (p, q) = s.shape(2);
        let (f, g) = (s.family(p, q), s.family(p, q));
        let sum = laplace(&f.mat_add(&g).unwrap()).unwrap();
        prop_assert_eq!(sum, laplace(&f).unwrap().mat_add(&laplace(&g).unwrap()).unwrap());
    }

    #[test]
    fn p_orbit_has_constant_odd_part_and_velocity(seed in any::<u64>()) {
        let mut s = sampler(5, seed);
        let alpha = nonzero_odd(&mut s);
        let start = s.vector(1, 1);
        let x = orbit(&make_family(FamilyKind::P, &alpha).unwrap(), &start).unwrap();
        prop_assert!(x.odd_part()[0].degree(Time::T) <= 0);
        let v = velocity(&x).unwrap();
        prop_assert!(v.coords().iter().all(|c| c.degree(Time::T) <= 0));
    }
}
