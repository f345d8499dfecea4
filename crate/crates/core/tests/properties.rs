use std::cmp::Ordering;

use hnstrata::family::{
    base_change_check, hn_function, level_set, recursive_stratify, relative_hn, restrict, stratify,
};
use hnstrata::fixtures::{
    random_family, random_hn_type, random_lattice, random_splitting, splitting_with_total,
};
use hnstrata::hntype::{hnt_leq, validate_hn_type, HnType};
use hnstrata::lattice::{
    forced_first_step, hn_closed_form, hn_filtration, hn_type, interval_quotient, is_semistable,
    lattice_from_splitting, oracle, validate_lattice,
};
use hnstrata::numpoly::{NumPoly, RatPoly, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn ratpoly() -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(rational(), 0..5).prop_map(RatPoly::from_coeffs)
}

/// Numerical polynomial from integer binomial-basis coefficients.
fn numpoly() -> impl Strategy<Value = NumPoly> {
    prop::collection::vec(-10i64..=10, 0..5).prop_map(|c| {
        let c: Vec<Rational> = c
            .into_iter()
            .map(|x| Rational::from_integer(x.into()))
            .collect();
        NumPoly::new(RatPoly::from_binomial(&c)).unwrap()
    })
}

/// Numerical polynomial with positive leading coefficient.
fn positive_numpoly() -> impl Strategy<Value = NumPoly> {
    (prop::collection::vec(-10i64..=10, 0..4), 1i64..=5).prop_map(|(mut c, lead)| {
        c.push(lead);
        let c: Vec<Rational> = c
            .into_iter()
            .map(|x| Rational::from_integer(x.into()))
            .collect();
        NumPoly::new(RatPoly::from_binomial(&c)).unwrap()
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eventual_order_is_total(f in ratpoly(), g in ratpoly(), h in ratpoly()) {
        prop_assert_eq!(f.eventual_cmp(&f), Ordering::Equal);
        prop_assert_eq!(f.eventual_cmp(&g), g.eventual_cmp(&f).reverse());
        prop_assert_eq!(f.eventual_cmp(&g) == Ordering::Equal, f == g);
        if f <= g && g <= h {
            prop_assert!(f <= h);
        }
    }

    #[test]
    fn eventual_order_matches_sampling(f in ratpoly(), g in ratpoly()) {
        prop_assume!(f != g);
        let m0 = f.stabilization_bound(&g).unwrap();
        for k in 0..3u32 {
            let m = &m0 + BigInt::from(k);
            prop_assert_eq!(f.evaluate(&m).cmp(&g.evaluate(&m)), f.eventual_cmp(&g));
        }
    }

    #[test]
    fn rank_is_additive(f in positive_numpoly(), g in positive_numpoly()) {
        let sum = &f + &g;
        let expected = match f.degree().cmp(&g.degree()) {
            Ordering::Equal => f.rank() + g.rank(),
            Ordering::Greater => f.rank(),
            Ordering::Less => g.rank(),
        };
        prop_assert_eq!(sum.rank(), expected);
    }

    #[test]
    fn numerical_polys_closed_under_sum_and_difference(f in numpoly(), g in numpoly()) {
        prop_assert!((f.as_poly() + g.as_poly()).is_numerical());
        prop_assert!((f.as_poly() - g.as_poly()).is_numerical());
        for m in -5i64..=5 {
            prop_assert!(f.evaluate_at(m).is_integer());
        }
    }

    #[test]
    fn binomial_round_trip(f in ratpoly()) {
        prop_assert_eq!(RatPoly::from_binomial(&f.to_binomial()), f);
    }

    #[test]
    fn polygons_are_strictly_concave(seed in any::<u64>()) {
        let t = random_hn_type(&mut rng(seed), 1, 6);
        let pieces = t.pieces();
        for w in pieces.windows(2) {
            // (f_i - f_{i-1}) / dr_i  >  (f_{i+1} - f_i) / dr_{i+1}
            prop_assert_eq!(
                w[0].0.scale_int(&w[1].1).eventual_cmp(&w[1].0.scale_int(&w[0].1)),
                Ordering::Greater
            );
        }
        let slopes = t.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn vertices_sit_above_chords(seed in any::<u64>()) {
        let t = random_hn_type(&mut rng(seed), 2, 6);
        for i in 0..t.len() - 1 {
            let mut dropped = t.polys().to_vec();
            let f = dropped.remove(i);
            let coarser = validate_hn_type(dropped).unwrap();
            let a = Rational::from_integer(f.rank());
            let chord = coarser.polygon().interpolate_at(&a).unwrap();
            prop_assert!(f.as_poly() > &chord);
        }
    }

    #[test]
    fn quotient_shift_stays_in_types(seed in any::<u64>()) {
        let t = random_hn_type(&mut rng(seed), 2, 6);
        let s = t.quotient_shift().unwrap();
        prop_assert_eq!(s.len(), t.len() - 1);
        prop_assert!(validate_hn_type(s.polys().to_vec()).is_ok());
    }

    #[test]
    fn interpolation_reproduces_vertices(seed in any::<u64>()) {
        let t = random_hn_type(&mut rng(seed), 1, 6);
        let poly = t.polygon();
        for v in poly.vertices() {
            prop_assert_eq!(&poly.interpolate_at(&v.a).unwrap(), &v.f);
        }
    }

    #[test]
    fn order_axioms_with_equal_endpoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(2..=4);
        let total = r.gen_range(-3..=3);
        let types: Vec<HnType> = (0..3)
            .map(|_| hn_type(&lattice_from_splitting(&splitting_with_total(&mut r, rank, total))).unwrap())
            .collect();
        let (a, b, c) = (&types[0], &types[1], &types[2]);
        prop_assert!(hnt_leq(a, a));
        if hnt_leq(a, b) && hnt_leq(b, a) {
            prop_assert_eq!(a, b);
        }
        if hnt_leq(a, b) && hnt_leq(b, c) {
            prop_assert!(hnt_leq(a, c));
        }
    }

    /// Mutual comparability forces equal endpoints, so antisymmetry holds on
    /// arbitrary pairs of types too.
    #[test]
    fn mutual_comparability_forces_equal_endpoints(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_hn_type(&mut rng(s1), 1, 4);
        let b = random_hn_type(&mut rng(s2), 1, 4);
        if hnt_leq(&a, &b) && hnt_leq(&b, &a) {
            prop_assert_eq!(a.endpoint(), b.endpoint());
            prop_assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_lattice(seed in any::<u64>()) {
        let s = random_splitting(&mut rng(seed), 8, -5, 5);
        let l = lattice_from_splitting(&s);
        prop_assert_eq!(hn_filtration(&l).unwrap(), hn_closed_form(&s));
    }

    #[test]
    fn filtration_is_the_unique_admissible_chain(seed in any::<u64>()) {
        let l = random_lattice(&mut rng(seed), 64);
        prop_assert_eq!(validate_lattice(&l), Ok(()));
        let f = hn_filtration(&l).unwrap();
        let chains = oracle::admissible_chains(&l);
        prop_assert_eq!(chains.len(), 1);
        let names: Vec<&str> = chains[0].iter().map(|&x| l.name(x)).collect();
        prop_assert_eq!(names, f.steps.iter().map(String::as_str).collect::<Vec<_>>());
    }

    #[test]
    fn hn_type_validates_and_length_one_iff_semistable(seed in any::<u64>()) {
        let l = random_lattice(&mut rng(seed), 64);
        let t = hn_type(&l).unwrap();
        prop_assert!(validate_hn_type(t.polys().to_vec()).is_ok());
        prop_assert_eq!(t.len() == 1, is_semistable(&l).unwrap());
        prop_assert_eq!(t.last(), l.total());
    }

    #[test]
    fn forced_step_quotient_is_bounded_by_shift(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(2..=5);
        let total = r.gen_range(-4..=4);
        let e = lattice_from_splitting(&splitting_with_total(&mut r, rank, total));
        let bound = lattice_from_splitting(&splitting_with_total(&mut r, rank, total));
        let own = hn_type(&e).unwrap();
        let other = hn_type(&bound).unwrap();
        for tau in [own.clone(), other] {
            if !hnt_leq(&own, &tau) || tau.len() < 2 {
                continue;
            }
            if let Some(step) = forced_first_step(&e, &tau).unwrap() {
                let quotient = interval_quotient(&e, step).unwrap();
                prop_assert_eq!(validate_lattice(&quotient), Ok(()));
                let q_type = hn_type(&quotient).unwrap();
                prop_assert!(hnt_leq(&q_type, &tau.quotient_shift().unwrap()));
            }
        }
    }

    #[test]
    fn recursive_strata_equal_level_sets(seed in any::<u64>()) {
        let f = random_family(&mut rng(seed), 5, 15);
        let strat = stratify(&f).unwrap();
        let covered: usize = strat.strata.iter().map(|s| s.points.len()).sum();
        prop_assert_eq!(covered, f.len());
        for s in &strat.strata {
            prop_assert_eq!(&recursive_stratify(&f, &s.ty).unwrap(), &s.points);
            prop_assert_eq!(&level_set(&f, &s.ty).unwrap(), &s.points);
            for t in &strat.strata {
                prop_assert_eq!(hnt_leq(&t.ty, &s.ty), t.points.is_subset(&s.below));
            }
        }
    }

    #[test]
    fn restriction_commutes_with_strata(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_family(&mut r, 5, 15);
        let types: Vec<HnType> = stratify(&f).unwrap().types().cloned().collect();
        let subset = f.space().points().filter(|_| r.gen_bool(0.5)).collect();
        for tau in &types {
            prop_assert!(base_change_check(&f, &subset, tau).unwrap().holds());
        }
    }

    #[test]
    fn relative_filtrations_are_unique_on_strata(seed in any::<u64>()) {
        let f = random_family(&mut rng(seed), 5, 15);
        for s in stratify(&f).unwrap().strata {
            let over = restrict(&f, &s.points);
            let filts = relative_hn(&over, &s.ty).unwrap().expect("constant type on a stratum");
            for (p, filt) in filts.iter().enumerate() {
                let fiber = over.fiber(p);
                let chains = oracle::admissible_chains(fiber);
                prop_assert_eq!(chains.len(), 1);
                prop_assert!(chains[0].iter().map(|&x| fiber.name(x)).eq(filt.steps.iter().map(String::as_str)));
                prop_assert_eq!(&filt.hn_type().unwrap(), &s.ty);
            }
        }
        let types = hn_function(&f).unwrap();
        if types.iter().any(|t| t != &types[0]) {
            prop_assert_eq!(relative_hn(&f, &types[0]).unwrap(), None);
        }
    }
}
