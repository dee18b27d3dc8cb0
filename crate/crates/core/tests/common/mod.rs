#![allow(dead_code)]

use derlie::poly::MultiPoly;
use derlie::{Derivation, RatFunc, Scalar};
use num_traits::{One, Zero};
use rand::Rng;

/// Evaluates a polynomial at a rational point term by term.
pub fn eval_poly(p: &MultiPoly, pt: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (x, &k) in pt.iter().zip(e) {
            for _ in 0..k {
                t *= x;
            }
        }
        acc += t;
    }
    acc
}

/// `None` when the denominator vanishes at the point.
pub fn eval(f: &RatFunc, pt: &[Scalar]) -> Option<Scalar> {
    let d = eval_poly(f.denom(), pt);
    if d.is_zero() {
        None
    } else {
        Some(eval_poly(f.numer(), pt) / d)
    }
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| Scalar::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=7).into()))
        .collect()
}

/// `D(f)` computed from partial derivatives, without `Derivation::apply`.
pub fn apply_by_partials(d: &Derivation, f: &RatFunc) -> RatFunc {
    let n = f.num_vars();
    let mut acc = RatFunc::zero(n);
    for i in 0..n {
        acc = &acc + &(d.coeff(i) * &f.partial(i).unwrap());
    }
    acc
}

pub fn one() -> Scalar {
    Scalar::one()
}
