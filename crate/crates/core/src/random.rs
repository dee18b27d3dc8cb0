//! Seeded random inputs: polynomials, derivations and nilpotent algebras.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::lie::{SpannedLieAlgebra, DEFAULT_MAX_DIM};
use crate::poly::{Monomial, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::scalar;

pub const COEFF_BOUND: i64 = 9;
const MAX_ATTEMPTS: u64 = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponent vectors of total degree `<= max_deg` supported on `vars`.
fn monomials(n: usize, vars: &[usize], max_deg: u32) -> Vec<Monomial> {
    let mut out = vec![vec![0; n]];
    for &v in vars {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..=max_deg - used {
                let mut e2 = e.clone();
                e2[v] = k;
                next.push(e2);
            }
        }
        out = next;
    }
    out
}

/// Each monomial appears with probability `density`, with a nonzero integer
/// coefficient in `[-COEFF_BOUND, COEFF_BOUND]`.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, vars: &[usize], max_deg: u32, density: f64) -> MultiPoly {
    let terms = monomials(n, vars, max_deg)
        .into_iter()
        .filter_map(|e| {
            if !rng.gen_bool(density) {
                return None;
            }
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-COEFF_BOUND..=COEFF_BOUND);
            }
            Some((e, scalar::int(c)))
        })
        .collect::<Vec<_>>();
    MultiPoly::from_terms(n, terms)
}

/// A nonzero derivation with arbitrary polynomial coefficients.
pub fn random_derivation<R: Rng>(rng: &mut R, n: usize, max_deg: u32) -> Derivation {
    let vars: Vec<usize> = (0..n).collect();
    loop {
        let coeffs = (0..n)
            .map(|_| RatFunc::from_poly(random_poly(rng, n, &vars, max_deg, 0.3)))
            .collect();
        let d = Derivation::new(coeffs).expect("matching variables");
        if !d.is_zero() {
            return d;
        }
    }
}

/// A nonzero element of u_n: coefficient `i` only involves later variables
/// and has on average `terms` monomials.
pub fn random_triangular<R: Rng>(rng: &mut R, n: usize, max_deg: u32, terms: f64) -> Derivation {
    loop {
        let coeffs = (0..n)
            .map(|i| {
                let vars: Vec<usize> = (i + 1..n).collect();
                let density = (terms / monomials(n, &vars, max_deg).len() as f64).min(1.0);
                RatFunc::from_poly(random_poly(rng, n, &vars, max_deg, density))
            })
            .collect();
        let d = Derivation::new(coeffs).expect("matching variables");
        if !d.is_zero() {
            return d;
        }
    }
}

/// Average number of monomials per coefficient in [`random_nilpotent`].
/// Denser samples close to algebras whose exact elimination is slow.
pub const SPARSE_TERMS: f64 = 1.0;

/// The algebra generated by `size` random elements of u_n (degree <= 2).
/// If the closure exceeds the default dimension bound the seed is advanced
/// deterministically and sampling starts over.
pub fn random_nilpotent(n: usize, seed: u64, size: usize) -> Result<SpannedLieAlgebra> {
    if n == 0 || n > 5 || size > 12 {
        return Err(Error::hypothesis(
            "random_nilpotent_bounds",
            format!("need 1 <= n <= 5 and size <= 12, got n = {}, size = {}", n, size),
        ));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut r = rng(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let gens: Vec<Derivation> = (0..size).map(|_| random_triangular(&mut r, n, 2, SPARSE_TERMS)).collect();
        match SpannedLieAlgebra::close_under_bracket(n, &gens, DEFAULT_MAX_DIM) {
            Ok(alg) => return Ok(alg),
            Err(Error::NotFiniteDimensional { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFiniteDimensional {
        max_dim: DEFAULT_MAX_DIM,
    })
}
