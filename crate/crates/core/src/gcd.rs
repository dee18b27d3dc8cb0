//! Multivariate gcd over the rationals by content / primitive-part recursion
//! on the highest-index variable, with a primitive pseudo-remainder sequence
//! in that variable.

use crate::poly::MultiPoly;

/// Monic gcd (leading coefficient 1 under lex). `gcd(0, 0) = 0`.
pub fn gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let n = p.num_vars();
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return MultiPoly::one(n);
    }
    if p.is_monomial() || q.is_monomial() {
        let a = p.min_exponents();
        let b = q.min_exponents();
        let e = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
        return MultiPoly::monomial(num_traits::One::one(), e);
    }
    if p == q {
        return p.monic();
    }
    let v = match (p.last_var(), q.last_var()) {
        (Some(a), Some(b)) => a.max(b),
        _ => return MultiPoly::one(n),
    };
    if !p.uses_var(v) {
        return gcd(p, &content(q, v));
    }
    if !q.uses_var(v) {
        return gcd(&content(p, v), q);
    }
    let cp = content(p, v);
    let cq = content(q, v);
    let pp = p.div_exact(&cp).expect("content divides");
    let qq = q.div_exact(&cq).expect("content divides");
    let c = gcd(&cp, &cq);
    let g = primitive_prs(pp, qq, v);
    (&c * &g).monic()
}

pub fn lcm(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero(p.num_vars());
    }
    let g = gcd(p, q);
    (p * &q.div_exact(&g).expect("gcd divides")).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
pub fn content(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.num_vars());
    for c in p.to_univariate(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let n = a.num_vars();
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.is_zero() {
            return primitive_part(&a, v);
        }
        if b.degree_in(v) == 0 {
            return MultiPoly::one(n);
        }
        let r = pseudo_remainder(&a, &b, v);
        a = b;
        b = primitive_part(&r, v);
    }
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` in the variable `x_v`.
pub fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let n = a.num_vars();
    let bu = b.to_univariate(v);
    let db = bu.len() - 1;
    let lcb = &bu[db];
    let mut r = a.to_univariate(v);
    if r.len() < bu.len() {
        return a.clone();
    }
    let mut steps = (r.len() - bu.len() + 1) as u32;
    while r.len() >= bu.len() {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (k, bc) in bu.iter().enumerate() {
            let t = &lcr * bc;
            r[k + shift] = &r[k + shift] - &t;
        }
        debug_assert!(r[dr].is_zero());
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        steps -= 1;
    }
    let out = MultiPoly::from_univariate(&r, v, n);
    if steps > 0 {
        &out * &lcb.pow(steps)
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i - 1)
    }

    #[test]
    fn common_factor_recovered() {
        let n = 3;
        let f = &(&x(n, 1) * &x(n, 3)) + &x(n, 2);
        let g1 = &x(n, 2) + &MultiPoly::constant(int(2), n);
        let g2 = &x(n, 1).pow(2) - &x(n, 3);
        let p = &f * &g1;
        let q = &f * &g2;
        assert_eq!(gcd(&p, &q), f.monic());
    }

    #[test]
    fn coprime_and_trivial_cases() {
        let n = 2;
        assert!(gcd(&x(n, 1), &x(n, 2)).is_one());
        assert_eq!(gcd(&x(n, 1).scale(&int(6)), &MultiPoly::zero(n)), x(n, 1));
        let p = &x(n, 1).pow(2) * &x(n, 2);
        let q = &(&x(n, 1) * &x(n, 2).pow(3)) + &(&x(n, 1).pow(3) * &x(n, 2));
        assert_eq!(gcd(&p, &q), &x(n, 1) * &x(n, 2));
    }

    #[test]
    fn univariate_content_in_other_variables() {
        let n = 2;
        // (x1 + 1)(x2^2 - 1) and (x1 + 1)(x2 + 1)^2
        let a = &x(n, 1) + &MultiPoly::one(n);
        let p = &a * &(&x(n, 2).pow(2) - &MultiPoly::one(n));
        let q = &a * &(&x(n, 2) + &MultiPoly::one(n)).pow(2);
        let expect = &a * &(&x(n, 2) + &MultiPoly::one(n));
        assert_eq!(gcd(&p, &q), expect.monic());
    }
}
