mod common;

use common::apply_by_partials;
use derlie::classify::{build_l1, build_l2, classify, VerdictCase};
use derlie::parse::parse_derivation_list;
use derlie::poly::MultiPoly;
use derlie::random::random_nilpotent;
use derlie::triangular::is_member_un;
use derlie::{bracket, embed, ClassificationVerdict, Derivation, RatFunc, SpannedLieAlgebra};
use num_traits::Zero;

/// `f(a, b)` by expanding monomials, without the library's substitution.
fn substitute(f: &MultiPoly, a: &RatFunc, b: &RatFunc) -> RatFunc {
    let n = a.num_vars();
    let mut acc = RatFunc::zero(n);
    for (e, c) in f.terms() {
        let mut t = RatFunc::constant(c.clone(), n);
        for _ in 0..e[0] {
            t = &t * a;
        }
        for _ in 0..e[1] {
            t = &t * b;
        }
        acc = &acc + &t;
    }
    acc
}

/// Slice equations, commuting adapted basis and coordinate reconstruction,
/// all recomputed here.
fn verify(alg: &SpannedLieAlgebra, v: &ClassificationVerdict) {
    let n = v.rank;
    let d = &v.adapted;
    assert_eq!(d.len(), n);
    for x in d {
        for y in d {
            assert!(bracket(x, y).unwrap().is_zero());
        }
    }
    let one = RatFunc::one(alg.num_vars());
    let b = v.b.as_ref().expect("b");
    for (i, di) in d.iter().enumerate() {
        let db = apply_by_partials(di, b);
        assert_eq!(db, if i == n - 1 { one.clone() } else { RatFunc::zero(alg.num_vars()) });
    }
    let zero_a = RatFunc::zero(alg.num_vars());
    let a = match v.case {
        VerdictCase::TypeL2 => {
            let a = v.a.as_ref().expect("a");
            for (i, di) in d.iter().enumerate() {
                let da = apply_by_partials(di, a);
                assert_eq!(da, if i == n - 2 { one.clone() } else { zero_a.clone() });
            }
            a.clone()
        }
        _ => {
            assert!(v.a.is_none());
            zero_a
        }
    };
    for (x, coords) in alg.basis().iter().zip(&v.coordinates) {
        let mut rebuilt = Derivation::zero(alg.num_vars());
        for (f, dj) in coords.iter().zip(d) {
            if v.case == VerdictCase::TypeL1 {
                assert_eq!(f.degree_in(0), 0, "L1 coordinates depend on b only");
            }
            rebuilt = &rebuilt + &dj.mul_fn(&substitute(f, &a, b));
        }
        assert_eq!(&rebuilt, x);
    }
    assert!(v.all_checks_pass(), "{:?}", v.checks);
}

fn verify_embedding(alg: &SpannedLieAlgebra, v: &ClassificationVerdict) -> usize {
    let m = embed(v, alg).unwrap();
    for img in &m.images {
        assert!(is_member_un(img).unwrap());
    }
    let dim = alg.dim();
    let mut pairs = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            let lhs = bracket(&m.images[i], &m.images[j]).unwrap();
            let mut rhs = Derivation::zero(v.rank);
            for (k, c) in alg.structure_constants()[i][j].iter().enumerate() {
                if !c.is_zero() {
                    rhs = &rhs + &m.images[k].scale(c);
                }
            }
            assert_eq!(lhs, rhs);
            pairs += 1;
        }
    }
    let images = SpannedLieAlgebra::close_under_bracket(v.rank, &m.images, dim + 1).unwrap();
    assert_eq!(images.dim(), dim, "images are independent and closed");
    pairs
}

#[test]
fn builders_round_trip() {
    for n in [3, 4] {
        for k in 1..=3 {
            let l1 = build_l1(n, k).unwrap();
            let v = classify(&l1).unwrap();
            assert_eq!(v.case, VerdictCase::TypeL1, "L1({}, {})", n, k);
            verify(&l1, &v);
            verify_embedding(&l1, &v);

            let l2 = build_l2(n, k).unwrap();
            let v = classify(&l2).unwrap();
            assert_eq!(v.case, VerdictCase::TypeL2, "L2({}, {})", n, k);
            verify(&l2, &v);
            let pairs = verify_embedding(&l2, &v);
            if (n, k) == (4, 3) {
                assert!(pairs >= 300, "{} pairs", pairs);
            }
        }
    }
}

#[test]
fn direct_sum_embeddings() {
    for (n, text) in [(3, "d1; d2 + x3*d1; d3"), (4, "d1; d2 + x3*d1; d3; d4")] {
        let alg = SpannedLieAlgebra::new(n, &parse_derivation_list(text, Some(n)).unwrap()).unwrap();
        let v = classify(&alg).unwrap();
        assert_eq!(v.case, VerdictCase::DirectSum3PlusAbelian);
        assert_eq!(verify_embedding(&alg, &v), n * (n - 1) / 2);
    }
}

/// Every in-scope verdict on random inputs satisfies its own equations; the
/// out-of-scope ones name a check.
#[test]
fn random_inputs_are_classified_or_rejected() {
    let mut in_scope = 0;
    for seed in 0..40u64 {
        let n = 3 + (seed % 2) as usize;
        let alg = random_nilpotent(n, seed, 3).unwrap();
        let v = classify(&alg).unwrap();
        match &v.case {
            VerdictCase::OutOfScope { check, .. } => assert!(!check.is_empty()),
            VerdictCase::TypeL1 | VerdictCase::TypeL2 => {
                verify(&alg, &v);
                verify_embedding(&alg, &v);
                in_scope += 1;
            }
            _ => {
                verify_embedding(&alg, &v);
                in_scope += 1;
            }
        }
    }
    eprintln!("{} of 40 random algebras in scope", in_scope);
}
