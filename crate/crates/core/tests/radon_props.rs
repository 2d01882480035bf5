mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residual_trace_core::algebra::{vars_from, MPoly};
use residual_trace_core::radon::{
    closedness_check, pencil_projection, pencil_traces, radon, radon_potential, restrict_to_pencil,
};
use residual_trace_core::sample::random_current;
use residual_trace_core::trace::traces;
use residual_trace_core::Rational;

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into())
}

proptest! {
    #![proptest_config(common::config(16))]

    #[test]
    fn transform_is_closed_in_one_variable(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 1, d, 2, 4, false);
        let u = radon(&c, 2 * d + 1).unwrap();
        prop_assert!(closedness_check(&u, 1, 2 * d).is_empty());
    }

    #[test]
    fn transform_is_closed_in_two_variables(seed in any::<u64>(), d in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 2, d, 1, 3, false);
        let u = radon(&c, 2 * d + 2).unwrap();
        prop_assert!(closedness_check(&u, 2, 2 * d).is_empty());
    }

    #[test]
    fn pencil_restriction_matches_direct_projection(seed in any::<u64>(), n in 1usize..3, d in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, n, d, 1, 3, false);
        let apex = loop {
            let apex: Vec<Rational> = (0..=n).map(|_| small_rational(&mut rng)).collect();
            if c.p().eval(&apex) != Rational::from_integer(0.into()) {
                break apex;
            }
        };
        let count = 2 * d + 1;
        let direct = pencil_traces(&c, &apex, count).unwrap();
        let restricted = restrict_to_pencil(&radon(&c, count - 1).unwrap(), n, &apex).unwrap();
        prop_assert_eq!(&direct, &restricted);
        let projected = pencil_projection(&c, &apex, count).unwrap();
        prop_assert_eq!(projected.entries(), &direct[..]);
    }

    #[test]
    fn slope_zero_recovers_the_traces(seed in any::<u64>(), d in 1usize..5) {
        // With deg a_i <= i the substituted P keeps its leading coefficient 1
        // at a = 0, so restricting to horizontal lines x = b is the fiber
        // projection itself.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 1, d, 3, 4, true);
        let u = radon(&c, 2 * d).unwrap();
        let x = vars_from(&["x"]);
        let images = [MPoly::zero(&x), MPoly::var(&x, 0)];
        let t = traces(&c, 2 * d + 1);
        for (k, uk) in u.iter().enumerate() {
            prop_assert_eq!(&uk.compose(&x, &images).unwrap(), &t.entries()[k]);
        }
    }

    #[test]
    fn polynomial_transforms_have_potentials(seed in any::<u64>(), d in 1usize..4) {
        // Graded P of total degree d gives a constant leading coefficient,
        // so u_0 and u_1 are polynomials in (a, b).
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 1, d, 1, 3, true);
        let u = radon(&c, 1).unwrap();
        if u[0].is_polynomial() && u[1].is_polynomial() {
            let f = radon_potential(&u[0], &u[1]).expect("closed polynomial form");
            prop_assert_eq!(&f.derivative(0), u[1].as_poly().unwrap());
            prop_assert_eq!(&f.derivative(1), u[0].as_poly().unwrap());
        }
    }
}
