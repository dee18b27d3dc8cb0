mod common;

use common::{eval, eval_poly, random_point};
use derlie::elim::{solve_dependence, Dependence};
use derlie::parse::{parse_poly, parse_ratfunc};
use derlie::random::{random_poly, rng};
use derlie::RatFunc;
use num_traits::Zero;
use proptest::prelude::*;

fn all_vars(n: usize) -> Vec<usize> {
    (0..n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_pointwise(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let v = all_vars(n);
        let p = random_poly(&mut r, n, &v, 2, 0.4);
        let q = random_poly(&mut r, n, &v, 2, 0.4);
        let s = random_poly(&mut r, n, &v, 2, 0.4);
        prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
        for _ in 0..3 {
            let pt = random_point(&mut r, n);
            prop_assert_eq!(eval_poly(&(&p * &q), &pt), eval_poly(&p, &pt) * eval_poly(&q, &pt));
            prop_assert_eq!(eval_poly(&(&p + &q), &pt), eval_poly(&p, &pt) + eval_poly(&q, &pt));
        }
    }

    #[test]
    fn ratfunc_normal_form(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let v = all_vars(n);
        let a = RatFunc::from_poly(random_poly(&mut r, n, &v, 2, 0.5));
        let b = RatFunc::from_poly(random_poly(&mut r, n, &v, 2, 0.5));
        let c = RatFunc::from_poly(random_poly(&mut r, n, &v, 1, 0.6));
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = &(&a * &c) / &(&b * &c);
        prop_assert_eq!(&f, &(&a / &b));
        // Normal form is idempotent through the text syntax.
        let back = parse_ratfunc(&f.to_string(), Some(n)).unwrap();
        prop_assert_eq!(&back, &f);
        if !f.is_zero() {
            prop_assert!(f.denom().lc() == common::one());
        }
        let pt = random_point(&mut r, n);
        if let (Some(x), Some(y), Some(z)) = (eval(&f, &pt), eval(&a, &pt), eval(&b, &pt)) {
            if !z.is_zero() {
                prop_assert_eq!(x, y / z);
            }
        }
    }

    #[test]
    fn poly_text_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, n, &all_vars(n), 3, 0.3);
        prop_assert_eq!(parse_poly(&p.to_string(), Some(n)).unwrap(), p);
    }

    #[test]
    fn dependence_certificates(seed in any::<u64>(), rows in 1usize..=4, cols in 1usize..=3) {
        let mut r = rng(seed);
        let n = 3;
        let v = all_vars(n);
        let mut m: Vec<Vec<RatFunc>> = (0..rows)
            .map(|_| (0..cols).map(|_| RatFunc::from_poly(random_poly(&mut r, n, &v, 1, 0.5))).collect())
            .collect();
        if rows >= 2 {
            // Force a dependence over R some of the time.
            let f = RatFunc::from_poly(random_poly(&mut r, n, &v, 1, 0.7));
            m[rows - 1] = m[0].iter().map(|x| x * &f).collect();
        }
        match solve_dependence(&m) {
            Dependence::Dependent { coefficients } => {
                prop_assert!(coefficients.iter().any(|c| !c.is_zero()));
                for j in 0..cols {
                    let mut s = RatFunc::zero(n);
                    for (c, row) in coefficients.iter().zip(&m) {
                        s = &s + &(c * &row[j]);
                    }
                    prop_assert!(s.is_zero());
                }
            }
            Dependence::Independent { pivots } => {
                prop_assert_eq!(pivots.len(), rows);
                prop_assert!(rows <= cols);
            }
        }
    }
}
