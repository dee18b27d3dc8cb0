mod common;

use derlie::elim;
use derlie::lie::{jordan_chain, DEFAULT_MAX_DIM};
use derlie::linalg::{self, QVec};
use derlie::random::{random_nilpotent, random_poly, random_triangular, rng};
use derlie::triangular::is_member_un;
use derlie::{bracket, Derivation, Error, RatFunc, Scalar, SpannedLieAlgebra};
use num_traits::Zero;
use rand::Rng;

fn combo(alg: &SpannedLieAlgebra, x: &[Scalar]) -> Derivation {
    let mut acc = Derivation::zero(alg.num_vars());
    for (c, b) in x.iter().zip(alg.basis()) {
        if !c.is_zero() {
            acc = &acc + &b.scale(c);
        }
    }
    acc
}

#[test]
fn central_rank_ideal_is_abelian_ideal() {
    for seed in 0..50u64 {
        let n = 2 + (seed % 3) as usize;
        let alg = random_nilpotent(n, seed, 3).unwrap();
        let ideal = alg.central_rank_ideal().unwrap();
        let center = alg.center();
        let elems: Vec<Derivation> = ideal.basis().iter().map(|v| combo(&alg, v)).collect();
        // [I, I] = 0 recomputed on derivations.
        for x in &elems {
            for y in &elems {
                assert!(bracket(x, y).unwrap().is_zero(), "seed {}", seed);
            }
        }
        // [L, I] inside I, via fresh brackets and membership in I.
        for b in alg.basis() {
            for x in &elems {
                let c = alg.coords(&bracket(b, x).unwrap()).expect("closed");
                assert!(ideal.contains(&c), "seed {}", seed);
            }
        }
        // Each element of I is an R-combination of the center.
        let zrows: Vec<Vec<RatFunc>> = center.center_basis.iter().map(|d| d.coeffs().to_vec()).collect();
        let zr = elim::rank(&zrows);
        for x in &elems {
            let mut rows = zrows.clone();
            rows.push(x.coeffs().to_vec());
            assert_eq!(elim::rank(&rows), zr, "seed {}", seed);
        }
        assert!(center.center.is_subspace_of(&ideal));
    }
}

#[test]
fn structure_table_identities() {
    for seed in 0..20u64 {
        let alg = random_nilpotent(3, seed, 3).unwrap();
        let c = alg.structure_constants();
        let d = alg.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    assert_eq!(c[i][j][k], -c[j][i][k].clone());
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        let mut s = Scalar::zero();
                        for l in 0..d {
                            s += &c[j][k][l] * &c[i][l][m];
                            s += &c[k][i][l] * &c[j][l][m];
                            s += &c[i][j][l] * &c[k][l][m];
                        }
                        assert!(s.is_zero());
                    }
                }
            }
        }
        // The table agrees with fresh brackets.
        for (i, j, k, v) in alg.structure_triples() {
            let br = bracket(&alg.basis()[i], &alg.basis()[j]).unwrap();
            assert_eq!(alg.coords(&br).unwrap()[k], v);
        }
    }
}

/// Rank-one inputs `g_k * D`. `D` only moves `x1..xm` and its coefficients
/// lie in `K[x_{m+1}..x_n]`, as do the `g_k` unless a moved variable is
/// mixed in, which usually destroys nilpotency.
#[test]
fn nilpotent_rank_one_is_abelian() {
    let mut r = rng(77);
    let (mut nilpotent, mut not_nilpotent) = (0, 0);
    for _ in 0..200 {
        let n = r.gen_range(2..=4);
        let m = r.gen_range(1..n);
        let tail: Vec<usize> = (m..n).collect();
        let coeffs: Vec<RatFunc> = (0..n)
            .map(|i| {
                if i < m {
                    RatFunc::from_poly(random_poly(&mut r, n, &tail, 1, 0.6))
                } else {
                    RatFunc::zero(n)
                }
            })
            .collect();
        let base = Derivation::new(coeffs).unwrap();
        if base.is_zero() {
            continue;
        }
        let gens: Vec<Derivation> = (0..3)
            .map(|_| {
                let mut g = RatFunc::from_poly(random_poly(&mut r, n, &tail, 2, 0.5));
                if r.gen_bool(0.3) {
                    g = &g + &RatFunc::var(n, r.gen_range(0..m));
                }
                base.mul_fn(&g)
            })
            .filter(|d| !d.is_zero())
            .collect();
        let alg = match SpannedLieAlgebra::close_under_bracket(n, &gens, 12) {
            Ok(a) => a,
            Err(Error::NotFiniteDimensional { .. }) => continue,
            Err(e) => panic!("{}", e),
        };
        if alg.dim() == 0 {
            continue;
        }
        assert_eq!(alg.rank_over_r(), 1);
        if alg.is_nilpotent() {
            nilpotent += 1;
            assert!(alg.is_abelian(), "{:?}", alg);
        } else {
            not_nilpotent += 1;
        }
    }
    assert!(nilpotent >= 50, "only {} nilpotent samples", nilpotent);
    assert!(not_nilpotent >= 10, "only {} non-nilpotent samples", not_nilpotent);
}

#[test]
fn triangular_algebra_is_closed() {
    let mut r = rng(5);
    for _ in 0..100 {
        let n = r.gen_range(1..=5);
        let x = random_triangular(&mut r, n, 2, 1.5);
        let y = random_triangular(&mut r, n, 2, 1.5);
        assert!(is_member_un(&bracket(&x, &y).unwrap()).unwrap());
    }
}

fn matmul(a: &[QVec], b: &[QVec], m: usize) -> Vec<QVec> {
    // Column lists: (AB) e_j = A (B e_j).
    b.iter().map(|col| linalg::apply_columns(a, col, m)).collect()
}

#[test]
fn jordan_chain_of_conjugated_block() {
    let mut r = rng(11);
    let mut done = 0;
    while done < 40 {
        let m = r.gen_range(1..=5);
        let p: Vec<QVec> = (0..m)
            .map(|_| (0..m).map(|_| Scalar::from_integer(r.gen_range(-3..=3).into())).collect())
            .collect();
        let mut rows = p.clone();
        if linalg::rref(&mut rows).len() != m {
            continue;
        }
        // Columns of P^{-1} by solving P x = e_j.
        let prow: Vec<QVec> = (0..m).map(|i| p.iter().map(|c| c[i].clone()).collect()).collect();
        let pinv: Vec<QVec> = (0..m).map(|j| linalg::solve(&prow, &linalg::unit(m, j), m).unwrap()).collect();
        let shift: Vec<QVec> = (0..m)
            .map(|j| if j == 0 { linalg::zeros(m) } else { linalg::unit(m, j - 1) })
            .collect();
        let a = matmul(&matmul(&p, &shift, m), &pinv, m);
        let chain = jordan_chain(&a).unwrap();
        assert_eq!(chain.len(), m);
        assert!(linalg::is_zero(&linalg::apply_columns(&a, &chain[0], m)));
        for k in 1..m {
            assert_eq!(linalg::apply_columns(&a, &chain[k], m), chain[k - 1]);
        }
        let mut rows = chain.clone();
        assert_eq!(linalg::rref(&mut rows).len(), m);
        done += 1;
    }
    let two_blocks = vec![linalg::zeros(2), linalg::zeros(2)];
    assert!(matches!(jordan_chain(&two_blocks), Err(Error::KernelNotSimple(2))));
}

#[test]
fn golden_random_algebra() {
    let alg = random_nilpotent(3, 0, 2).unwrap();
    let text: String = alg.basis().iter().map(|d| format!("{}\n", d)).collect();
    let golden = include_str!("golden/random_nilpotent_n3_seed0_size2.txt");
    assert_eq!(text, golden);
    assert!(alg.dim() <= DEFAULT_MAX_DIM);
}

/// With weights 1, 3, 7, 15 on x4..x1 every degree-2 element of u_4 has
/// negative weight and d1 has weight -15, so 15 bounds the class of any
/// subalgebra generated in degree 2. These generators attain it.
#[test]
fn degree_two_class_bound_is_attained() {
    let gens = derlie::parse::parse_derivation_list("d4; x4^2*d3; x3^2*d2; x2^2*d1", Some(4)).unwrap();
    let alg = SpannedLieAlgebra::close_under_bracket(4, &gens, 256).unwrap();
    assert_eq!(alg.nilpotency().class(), Some(15));
    // Longest nonzero left-normed bracket word, found breadth first.
    let mut level = gens.clone();
    let mut depth = 1;
    loop {
        let mut seen = derlie::lie::KSpan::new(4);
        let next: Vec<Derivation> = gens
            .iter()
            .flat_map(|g| level.iter().map(move |x| bracket(g, x).unwrap()))
            .filter(|b| seen.insert(b))
            .collect();
        if next.is_empty() {
            break;
        }
        level = next;
        depth += 1;
    }
    assert_eq!(depth, 15);
    assert!(level.iter().all(|d| (1..4).all(|i| d.coeff(i).is_zero())));
}
