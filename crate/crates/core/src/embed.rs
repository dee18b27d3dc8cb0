//! Embeddings of classified algebras into the triangular algebra u_n.
//!
//! An element with adapted coordinates `f_j(u, v)` is sent to
//! `sum f_j(x_{n-1}, x_n) * E_j`, where `E_j = d_j` except in the direct sum
//! case, whose three-dimensional part goes to `d3, d2 + x3*d1, d1`.

use crate::classify::{ClassificationVerdict, VerdictCase, SLICE_VARS, U, V};
use crate::derivation::{bracket, Derivation};
use crate::error::{Error, Result};
use crate::lie::{KSpan, SpannedLieAlgebra};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::triangular::is_member_un;

#[derive(Debug, Clone)]
pub struct EmbeddingMap {
    pub n: usize,
    pub source: Vec<Derivation>,
    pub images: Vec<Derivation>,
    pub linear_samples: usize,
    pub pairs_checked: usize,
}

fn target_basis(case: &VerdictCase, n: usize) -> Vec<Derivation> {
    let d = |i: usize| Derivation::coordinate(n, i);
    match case {
        VerdictCase::DirectSum3PlusAbelian => {
            let mut t = vec![d(2), &d(1) + &d(0).mul_fn(&RatFunc::var(n, 2)), d(0)];
            t.extend((3..n).map(d));
            t
        }
        _ => (0..n).map(d).collect(),
    }
}

fn image_of(coords: &[MultiPoly], targets: &[Derivation], n: usize) -> Derivation {
    let mut vals = vec![RatFunc::zero(n); SLICE_VARS];
    vals[U] = RatFunc::var(n, n - 2);
    vals[V] = RatFunc::var(n, n - 1);
    let mut acc = Derivation::zero(n);
    for (f, t) in coords.iter().zip(targets) {
        if !f.is_zero() {
            acc = &acc + &t.mul_fn(&RatFunc::eval_poly(f, &vals, n));
        }
    }
    acc
}

/// Builds the embedding table and verifies it: additivity on sample sums
/// computed independently, injectivity, membership in u_n, and bracket
/// preservation on every basis pair.
pub fn embed(verdict: &ClassificationVerdict, alg: &SpannedLieAlgebra) -> Result<EmbeddingMap> {
    if verdict.is_out_of_scope() {
        return Err(Error::hypothesis("in_scope", "cannot embed an out-of-scope verdict"));
    }
    let n = verdict.rank;
    if verdict.coordinates.len() != alg.dim() {
        return Err(Error::InvariantViolation("verdict does not match the algebra".into()));
    }
    let targets = target_basis(&verdict.case, n);
    let images: Vec<Derivation> = verdict
        .coordinates
        .iter()
        .map(|c| image_of(c, &targets, n))
        .collect();

    for (d, img) in alg.basis().iter().zip(&images) {
        if !is_member_un(img)? {
            return Err(Error::InvariantViolation(format!("image {} of {} is not in u_n", img, d)));
        }
    }

    let mut span = KSpan::new(n);
    for img in &images {
        if !span.insert(img) {
            return Err(Error::InvariantViolation(format!("image {} is dependent", img)));
        }
    }

    // Additivity: coordinates of b_i + 2 b_{i+1} recomputed from scratch.
    let coords = verdict.coordinates()?;
    let mut samples = 0;
    let two = crate::scalar::int(2);
    for i in 0..alg.dim().saturating_sub(1) {
        let src = &alg.basis()[i] + &alg.basis()[i + 1].scale(&two);
        let c = coords.of(&src)?.ok_or_else(|| {
            Error::InvariantViolation(format!("{} has no adapted coordinates", src))
        })?;
        let direct = image_of(&c, &targets, n);
        if direct != &images[i] + &images[i + 1].scale(&two) {
            return Err(Error::InvariantViolation(format!("map is not additive on {}", src)));
        }
        samples += 1;
    }

    let mut pairs = 0;
    for i in 0..alg.dim() {
        for j in i + 1..alg.dim() {
            let mut lhs = Derivation::zero(n);
            for (k, c) in alg.structure_constants()[i][j].iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    lhs = &lhs + &images[k].scale(c);
                }
            }
            let rhs = bracket(&images[i], &images[j])?;
            if lhs != rhs {
                return Err(Error::InvariantViolation(format!(
                    "bracket of {} and {} is not preserved",
                    alg.basis()[i],
                    alg.basis()[j]
                )));
            }
            pairs += 1;
        }
    }
    Ok(EmbeddingMap {
        n,
        source: alg.basis().to_vec(),
        images,
        linear_samples: samples,
        pairs_checked: pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{build_l1, build_l2, classify};
    use crate::parse::parse_derivation_list;

    fn table(m: &EmbeddingMap) -> Vec<(String, String)> {
        m.source
            .iter()
            .zip(&m.images)
            .map(|(s, t)| (s.to_string(), t.to_string()))
            .collect()
    }

    #[test]
    fn abelian_goes_to_coordinates() {
        let alg = SpannedLieAlgebra::new(3, &parse_derivation_list("d1; d2; d3", None).unwrap()).unwrap();
        let v = classify(&alg).unwrap();
        assert_eq!(v.case, VerdictCase::AbelianDimN);
        let m = embed(&v, &alg).unwrap();
        assert_eq!(table(&m), [("d1".into(), "d1".into()), ("d2".into(), "d2".into()), ("d3".into(), "d3".into())]);
    }

    #[test]
    fn l1_table() {
        let alg = build_l1(3, 2).unwrap();
        let m = embed(&classify(&alg).unwrap(), &alg).unwrap();
        assert_eq!(m.images.len(), 7);
        assert_eq!(m.pairs_checked, 21);
        for (s, t) in table(&m) {
            assert_eq!(s, t);
        }
    }

    #[test]
    fn l2_table() {
        let alg = build_l2(3, 2).unwrap();
        let m = embed(&classify(&alg).unwrap(), &alg).unwrap();
        assert!(table(&m).contains(&("x2*x3*d1".into(), "x2*x3*d1".into())));
    }

    #[test]
    fn heisenberg_plus_abelian() {
        let ds = parse_derivation_list("d1; d2 + x3*d1; d3; d4", None).unwrap();
        let alg = SpannedLieAlgebra::new(4, &ds).unwrap();
        let v = classify(&alg).unwrap();
        assert_eq!(v.case, VerdictCase::DirectSum3PlusAbelian);
        let m = embed(&v, &alg).unwrap();
        assert_eq!(m.pairs_checked, 6);
    }
}
