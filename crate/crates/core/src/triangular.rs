//! The triangular algebra u_n: derivations `sum f_i d_i` with
//! `f_i in K[x_{i+1}..x_n]` and `f_n in K`.

use crate::derivation::{bracket, Derivation};
use crate::error::{Error, Result};
use crate::lie::{Nilpotency, SpannedLieAlgebra};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::scalar;

pub fn is_member_un(d: &Derivation) -> Result<bool> {
    for c in d.coeffs() {
        if !c.is_polynomial() {
            return Err(Error::NotPolynomial(c.to_string()));
        }
    }
    Ok(d.is_triangular())
}

/// `(ad d_n)^k (x_n^len / len! * d_1)` for `k = 0..len`; one more bracket
/// gives `d_1`. Each element is checked to be nonzero.
pub fn non_nilpotency_witness(n: usize, len: usize) -> Result<Vec<Derivation>> {
    if n < 2 {
        return Err(Error::hypothesis("n_at_least_2", format!("n = {}", n)));
    }
    let dn = Derivation::coordinate(n, n - 1);
    let mut e = vec![0; n];
    e[n - 1] = len as u32;
    let top = MultiPoly::monomial(scalar::factorial(len as u32).recip(), e);
    let mut cur = Derivation::coordinate(n, 0).mul_fn(&RatFunc::from_poly(top));
    let mut chain = Vec::with_capacity(len);
    for _ in 0..len {
        if cur.is_zero() {
            return Err(Error::InvariantViolation("witness chain vanished early".into()));
        }
        let next = bracket(&dn, &cur)?;
        chain.push(cur);
        cur = next;
    }
    if len > 0 && cur != Derivation::coordinate(n, 0) {
        return Err(Error::InvariantViolation("witness chain does not end at d1".into()));
    }
    Ok(chain)
}

/// Nilpotency class of the algebra generated by `sample`, a finite subset of
/// u_n.
pub fn local_nilpotency_of_fg_subalgebras(sample: &[Derivation], max_dim: usize) -> Result<usize> {
    let Some(first) = sample.first() else {
        return Ok(0);
    };
    for d in sample {
        if !is_member_un(d)? {
            return Err(Error::hypothesis("member_of_u_n", d.to_string()));
        }
    }
    let alg = SpannedLieAlgebra::close_under_bracket(first.num_vars(), sample, max_dim)?;
    match alg.nilpotency() {
        Nilpotency::Nilpotent { class } => Ok(class),
        Nilpotency::NotNilpotent { .. } => Err(Error::InvariantViolation(
            "finitely generated subalgebra of u_n is not nilpotent".into(),
        )),
    }
}
