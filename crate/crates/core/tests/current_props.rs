mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residual_trace_core::algebra::{gcd_y, MPoly};
use residual_trace_core::current::Adjustment;
use residual_trace_core::residue::RationalForm1D;
use residual_trace_core::sample::{current_vars, random_current, random_poly, random_weighted_points};
use residual_trace_core::{Rational, ResidualCurrent};

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn validate_is_idempotent(seed in any::<u64>(), n in 1usize..3, d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, n, d, 2, 4, false);
        let (again, notes) = ResidualCurrent::validate(c.p().clone(), c.r().clone()).unwrap();
        prop_assert_eq!(again, c);
        prop_assert!(notes.is_empty());
    }

    #[test]
    fn validated_pairs_are_coprime(seed in any::<u64>(), d in 1usize..4) {
        // Force a shared factor and an oversized numerator; validate must
        // strip both.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 1, d, 2, 4, false);
        let vars = current_vars(1);
        let y = MPoly::var(&vars, 1);
        let shared = &y - &random_poly(&mut rng, &vars, 1, 3).substitute(1, &Rational::from_integer(0.into()));
        let p = c.p() * &shared;
        let r = &(c.r() * &shared) + &(&p * &MPoly::var(&vars, 0));
        let (v, notes) = ResidualCurrent::validate(p, r).unwrap();
        prop_assert!(gcd_y(v.p(), v.r()).unwrap().is_one());
        prop_assert!(v.r().degree_in(1) < v.p().degree_in(1));
        prop_assert!(notes.contains(&Adjustment::ReducedModP));
        prop_assert_eq!(v, c);
    }

    #[test]
    fn weighted_points_give_back_their_weights(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wp = random_weighted_points(&mut rng, 1, d, 1, 3);
        let c = ResidualCurrent::from_weighted_points(&wp, "y").unwrap();
        let form = RationalForm1D::new(c.r().clone(), c.p().clone()).unwrap();
        for _ in 0..10 {
            let x = [Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))];
            let roots: Vec<_> = wp.points().iter().map(|(y, f)| (y.eval_complex(&x), f.eval_complex(&x))).collect();
            let separated = roots.iter().enumerate().all(|(i, a)| roots[i + 1..].iter().all(|b| (a.0 - b.0).norm() > 0.05));
            if !separated {
                continue;
            }
            let numeric = form.pointwise_residues(&x).unwrap();
            for (yi, fi) in roots {
                let hit = numeric
                    .iter()
                    .min_by(|a, b| (a.pole - yi).norm().total_cmp(&(b.pole - yi).norm()))
                    .unwrap();
                prop_assert!((hit.residue - fi).norm() <= 1e-8 * fi.norm().max(1.0));
            }
        }
    }
}
