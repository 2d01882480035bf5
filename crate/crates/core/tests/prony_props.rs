mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residual_trace_core::algebra::{vars_from, MPoly};
use residual_trace_core::prony::{
    continue_current, detect_rational, reconstruct, taylor_coefficients, RationalVerdict, Reconstruction, SeriesSample,
};
use residual_trace_core::sample::{current_vars, random_current, random_poly};
use residual_trace_core::trace::traces;
use residual_trace_core::{Current, RatFunc, Rational, ResidualCurrent, TraceSequence};

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num).into(), rng.gen_range(1..=den).into())
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn reconstruction_inverts_traces(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 1, d, 3, 5, false);
        let report = reconstruct(&traces(&c, 2 * d + 2), 8).unwrap();
        prop_assert_eq!(report.degree, d);
        prop_assert_eq!(report.residual_violations, 0);
        prop_assert_eq!(report.outcome, Reconstruction::Current(c));
    }

    #[test]
    fn reconstruction_inverts_traces_in_two_variables(seed in any::<u64>(), d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_current(&mut rng, 2, d, 2, 4, false);
        let report = reconstruct(&traces(&c, 2 * d + 2), 8).unwrap();
        prop_assert_eq!(report.outcome, Reconstruction::Current(c));
    }

    #[test]
    fn annihilator_of_a_square_keeps_full_degree(seed in any::<u64>(), e in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_current(&mut rng, 1, e, 2, 3, false).p().clone();
        let p = q.pow(2);
        let vars = current_vars(1);
        let r = loop {
            let coeffs: Vec<MPoly> = (0..2 * e)
                .map(|_| random_poly(&mut rng, &vars, 1, 3).substitute(1, &Rational::from_integer(0.into())))
                .collect();
            let r = MPoly::from_coeffs_in(&vars, 1, &coeffs);
            if r.is_zero() {
                continue;
            }
            if let Ok((c, notes)) = ResidualCurrent::validate(p.clone(), r) {
                if notes.is_empty() {
                    break c;
                }
            }
        };
        let report = reconstruct(&traces(&r, 4 * e + 2), 8).unwrap();
        prop_assert_eq!(report.degree, 2 * e);
        prop_assert_eq!(report.outcome, Reconstruction::Current(r));
    }

    #[test]
    fn pade_never_contradicts_its_input(seed in any::<u64>(), m in 0usize..4, n in 0usize..3, extra in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = m + n + 1 + extra;
        let coeffs: Vec<Rational> = (0..len).map(|_| random_rational(&mut rng, 5, 3)).collect();
        let x0 = random_rational(&mut rng, 3, 2);
        let s = SeriesSample::new(x0.clone(), coeffs.clone()).unwrap();
        if let Ok(RationalVerdict::Rational(f)) = detect_rational(&s, m, n) {
            prop_assert_eq!(taylor_coefficients(&f, &x0, len).unwrap(), Some(coeffs));
        }
    }

    #[test]
    fn pade_recovers_sampled_rational_functions(seed in any::<u64>(), m in 0usize..4, n in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = vars_from(&["x"]);
        let x0 = random_rational(&mut rng, 3, 2);
        let f = loop {
            let num = random_poly(&mut rng, &x, m as u32, 4);
            let mut den = random_poly(&mut rng, &x, n as u32, 4);
            if den.is_zero() {
                den = MPoly::one(&x);
            }
            let f = RatFunc::new(num, den).unwrap();
            if f.eval(std::slice::from_ref(&x0)).is_some() {
                break f;
            }
        };
        let coeffs = taylor_coefficients(&f, &x0, 2 * (m + n) + 2).unwrap().unwrap();
        let s = SeriesSample::new(x0, coeffs).unwrap();
        prop_assert_eq!(detect_rational(&s, m, n).unwrap(), RationalVerdict::Rational(f));
    }
}

/// Every pair of distinct currents from a fixed family differs somewhere in
/// the first `2 max(d) + 1` traces, and no current has all those traces zero.
#[test]
fn trace_map_is_injective_on_a_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut family: Vec<ResidualCurrent> = Vec::new();
    while family.len() < 40 {
        let d = rng.gen_range(1..=4);
        let c = random_current(&mut rng, 1, d, 1, 2, false);
        if !family.contains(&c) {
            family.push(c);
        }
    }
    // Same support, different numerators, is the hardest case to tell apart.
    let shared = family[0].p().clone();
    let vars = current_vars(1);
    for k in 1..=3 {
        let r = family[0].r().scale(&Rational::from_integer(k.into()));
        family.push(ResidualCurrent::validate(shared.clone(), &r + &MPoly::var(&vars, 0)).unwrap().0);
    }
    let seqs: Vec<TraceSequence> = family.iter().map(|c| traces(c, 9)).collect();
    for (i, a) in seqs.iter().enumerate() {
        assert!(!a.is_zero(), "current {i} has vanishing traces");
        for (j, b) in seqs.iter().enumerate().skip(i + 1) {
            let window = 2 * family[i].d().max(family[j].d()) + 1;
            if family[i] != family[j] {
                assert_ne!(a.entries()[..window], b.entries()[..window], "currents {i} and {j}");
            }
        }
    }
}

#[test]
fn zero_traces_give_the_zero_current() {
    let x = vars_from(&["x"]);
    let t = TraceSequence::new(vec![RatFunc::zero(&x); 6]).unwrap();
    let report = reconstruct(&t, 3).unwrap();
    assert!(matches!(report.outcome, Reconstruction::Zero { .. }));
    assert!(report.current().is_some_and(|c| matches!(c, Current::Zero { .. })));
}

#[test]
fn continuation_from_taylor_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let d = rng.gen_range(1..=3);
        let c = random_current(&mut rng, 1, d, 1, 3, false);
        let t = traces(&c, 2 * d + 2);
        let max_deg = t.entries().iter().map(|u| u.num().degree_in(0) as usize).max().unwrap();
        let x0 = random_rational(&mut rng, 3, 2);
        let series: Vec<SeriesSample> = t
            .entries()
            .iter()
            .map(|u| SeriesSample::new(x0.clone(), taylor_coefficients(u, &x0, 2 * max_deg + 2).unwrap().unwrap()).unwrap())
            .collect();
        let report = continue_current(&series, 4, max_deg, 0).unwrap();
        assert_eq!(report.outcome, Reconstruction::Current(c));
    }
}
