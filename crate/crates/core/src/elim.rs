//! Linear algebra over the fraction field R = K(x1..xn).
//!
//! Rows are cleared of denominators and then reduced fraction-free: the
//! update `row := p * row - row[c] * pivot_row` keeps every entry a
//! polynomial, and each updated row is divided by the gcd of its entries to
//! keep degrees down. Every row carries the polynomial combination of the
//! original rows it currently equals, which is what produces dependence
//! certificates.

use crate::gcd::{gcd, lcm};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;
use num_traits::{One, Zero};

/// Outcome of [`solve_dependence`].
#[derive(Debug, Clone, PartialEq)]
pub enum Dependence {
    /// `(row, column)` pivots in elimination order.
    Independent { pivots: Vec<(usize, usize)> },
    /// Coefficients `c` with `sum c[i] * rows[i] = 0`, not all zero.
    Dependent { coefficients: Vec<RatFunc> },
}

#[derive(Debug, Clone)]
pub struct Elimination {
    pub pivots: Vec<(usize, usize)>,
    /// For every row that reduced to zero: its index and a normalized
    /// dependence (polynomial coefficients, first nonzero one monic).
    pub dependencies: Vec<(usize, Vec<RatFunc>)>,
}

impl Elimination {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

struct WorkRow {
    orig: usize,
    entries: Vec<MultiPoly>,
    combo: Vec<MultiPoly>,
}

impl WorkRow {
    fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    fn remove_content(&mut self) {
        let mut g = MultiPoly::zero(self.entries.first().map_or(0, |p| p.num_vars()));
        for p in self.entries.iter().chain(self.combo.iter()) {
            if p.is_zero() {
                continue;
            }
            g = gcd(&g, p);
            if g.is_one() {
                return;
            }
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for p in self.entries.iter_mut().chain(self.combo.iter_mut()) {
            *p = p.div_exact(&g).expect("content divides");
        }
    }
}

/// Fraction-free Gaussian elimination over R.
///
/// Columns are processed left to right; the pivot for a column is the active
/// row whose entry there has minimal total degree, ties going to the lowest
/// original row index.
pub fn eliminate(rows: &[Vec<RatFunc>]) -> Elimination {
    eliminate_with(rows, true)
}

/// With `track` unset no combinations are carried and no dependencies are
/// reported; only the pivots are meaningful.
fn eliminate_with(rows: &[Vec<RatFunc>], track: bool) -> Elimination {
    let m = rows.len();
    let Some(first) = rows.first() else {
        return Elimination {
            pivots: Vec::new(),
            dependencies: Vec::new(),
        };
    };
    let ncols = first.len();
    let nv = rows
        .iter()
        .flat_map(|r| r.iter())
        .map(RatFunc::num_vars)
        .next()
        .unwrap_or(0);

    let mut active: Vec<WorkRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), ncols, "rows must share a length");
            let mut l = MultiPoly::one(nv);
            for f in r {
                if !f.denom().is_one() {
                    l = lcm(&l, f.denom());
                }
            }
            let entries = r
                .iter()
                .map(|f| f.numer() * &l.div_exact(f.denom()).expect("lcm divides"))
                .collect();
            let mut combo = Vec::new();
            if track {
                combo = vec![MultiPoly::zero(nv); m];
                combo[i] = l;
            }
            WorkRow {
                orig: i,
                entries,
                combo,
            }
        })
        .collect();

    let mut pivots = Vec::new();
    for col in 0..ncols {
        let choice = active
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.entries[col].is_zero())
            .min_by_key(|(_, r)| (r.entries[col].total_degree(), r.orig))
            .map(|(k, _)| k);
        let Some(k) = choice else { continue };
        let pivot = active.remove(k);
        pivots.push((pivot.orig, col));
        let p = &pivot.entries[col];
        for row in active.iter_mut() {
            if row.entries[col].is_zero() {
                continue;
            }
            let g = gcd(p, &row.entries[col]);
            let mul_row = p.div_exact(&g).expect("gcd divides");
            let mul_piv = row.entries[col].div_exact(&g).expect("gcd divides");
            for (e, pe) in row.entries.iter_mut().zip(&pivot.entries) {
                *e = &(&*e * &mul_row) - &(pe * &mul_piv);
            }
            for (e, pe) in row.combo.iter_mut().zip(&pivot.combo) {
                *e = &(&*e * &mul_row) - &(pe * &mul_piv);
            }
            debug_assert!(row.entries[col].is_zero());
            row.remove_content();
        }
    }

    if !track {
        return Elimination {
            pivots,
            dependencies: Vec::new(),
        };
    }
    let mut dependencies: Vec<(usize, Vec<RatFunc>)> = active
        .into_iter()
        .map(|mut row| {
            debug_assert!(row.is_zero());
            row.remove_content();
            let lead = row
                .combo
                .iter()
                .find(|p| !p.is_zero())
                .map(MultiPoly::lc)
                .expect("dependence is nontrivial");
            let inv = <Scalar as One>::one() / lead;
            (
                row.orig,
                row.combo
                    .iter()
                    .map(|p| RatFunc::from_poly(p.scale(&inv)))
                    .collect(),
            )
        })
        .collect();
    dependencies.sort_by_key(|(i, _)| *i);
    Elimination {
        pivots,
        dependencies,
    }
}

/// Either a pivot certificate of R-linear independence or one nontrivial
/// dependence among `rows`.
pub fn solve_dependence(rows: &[Vec<RatFunc>]) -> Dependence {
    let e = eliminate(rows);
    match e.dependencies.into_iter().next() {
        Some((_, coefficients)) => Dependence::Dependent { coefficients },
        None => Dependence::Independent { pivots: e.pivots },
    }
}

/// Rank over R.
pub fn rank(rows: &[Vec<RatFunc>]) -> usize {
    independent_rows(rows).len()
}

/// Indices of a maximal R-independent subfamily, chosen greedily in order.
///
/// The chosen rows always have a nonzero maximal minor on a set of pivot
/// columns. A further row is dependent iff every minor bordering those
/// columns by one more column vanishes. Minors are first evaluated at a
/// sample point (a nonzero value settles it) and only computed symbolically
/// when that value is zero.
pub fn independent_rows(rows: &[Vec<RatFunc>]) -> Vec<usize> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let ncols = first.len();
    let nv = first.first().map_or(0, RatFunc::num_vars);
    let pt = sample_point(nv);
    let cleared: Vec<Vec<MultiPoly>> = rows.iter().map(|r| clear_denominators(r, nv)).collect();
    let values: Vec<Vec<Scalar>> = cleared
        .iter()
        .map(|r| r.iter().map(|p| p.eval(&pt)).collect())
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        if chosen.len() == ncols {
            break;
        }
        if cleared[i].iter().all(MultiPoly::is_zero) {
            continue;
        }
        let free: Vec<usize> = (0..ncols).filter(|c| !cols.contains(c)).collect();
        let mut idx = chosen.clone();
        idx.push(i);
        let numeric = free.iter().copied().find(|&c| {
            let m = minor(&values, &idx, &cols, c);
            !det_q(m).is_zero()
        });
        let hit = numeric.or_else(|| {
            free.iter().copied().find(|&c| {
                let m = minor(&cleared, &idx, &cols, c);
                !det_poly(m, nv).is_zero()
            })
        });
        if let Some(c) = hit {
            chosen.push(i);
            cols.push(c);
        }
    }
    chosen
}

fn clear_denominators(r: &[RatFunc], nv: usize) -> Vec<MultiPoly> {
    let mut l = MultiPoly::one(nv);
    for f in r {
        if !f.denom().is_one() {
            l = lcm(&l, f.denom());
        }
    }
    r.iter()
        .map(|f| f.numer() * &l.div_exact(f.denom()).expect("lcm divides"))
        .collect()
}

fn minor<T: Clone>(m: &[Vec<T>], rows: &[usize], cols: &[usize], extra: usize) -> Vec<Vec<T>> {
    rows.iter()
        .map(|&r| cols.iter().chain(std::iter::once(&extra)).map(|&c| m[r][c].clone()).collect())
        .collect()
}

fn sample_point(nv: usize) -> Vec<Scalar> {
    const PRIMES: [i64; 9] = [3, 5, 7, 11, 13, 17, 19, 23, 29];
    (0..nv)
        .map(|i| Scalar::new(PRIMES[i % PRIMES.len()].into(), (i as i64 + 2).into()))
        .collect()
}

fn det_q(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let k = m.len();
    let mut det = Scalar::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..k {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for j in c..k {
                let t = &f * &m[c][j];
                m[r][j] -= t;
            }
        }
    }
    det
}

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
fn det_poly(mut m: Vec<Vec<MultiPoly>>, nv: usize) -> MultiPoly {
    let k = m.len();
    let mut sign = false;
    let mut prev = MultiPoly::one(nv);
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return MultiPoly::zero(nv);
        };
        if p != c {
            m.swap(p, c);
            sign = !sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                let t = &(&m[c][c] * &m[r][j]) - &(&m[r][c] * &m[c][j]);
                m[r][j] = t.div_exact(&prev).expect("Bareiss quotient is exact");
            }
            m[r][c] = MultiPoly::zero(nv);
        }
        prev = m[c][c].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// An R-linearly independent family of vectors in R^N, with coordinate
/// solving.
#[derive(Debug, Clone)]
pub struct RBasis {
    vectors: Vec<Vec<RatFunc>>,
    pivot_cols: Vec<usize>,
}

impl RBasis {
    /// Returns `None` if the vectors are R-dependent.
    pub fn new(vectors: Vec<Vec<RatFunc>>) -> Option<Self> {
        let e = eliminate(&vectors);
        if !e.dependencies.is_empty() {
            return None;
        }
        let mut pivot_cols: Vec<usize> = e.pivots.iter().map(|&(_, c)| c).collect();
        pivot_cols.sort_unstable();
        Some(RBasis {
            vectors,
            pivot_cols,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<RatFunc>] {
        &self.vectors
    }

    /// Coefficients `c` with `v - sum c[i] * basis[i]` vanishing on the pivot
    /// columns; `v` lies in the span iff the residual is zero.
    fn project(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        let m = self.vectors.len();
        if m == 0 {
            return Vec::new();
        }
        // Square system: sum_i c_i * basis[i][col] = v[col] for col in pivot_cols.
        let mut a: Vec<Vec<RatFunc>> = self
            .pivot_cols
            .iter()
            .map(|&col| {
                let mut row: Vec<RatFunc> = self.vectors.iter().map(|b| b[col].clone()).collect();
                row.push(v[col].clone());
                row
            })
            .collect();
        for c in 0..m {
            let p = (c..m)
                .filter(|&r| !a[r][c].is_zero())
                .min_by_key(|&r| (a[r][c].numer().nterms() + a[r][c].denom().nterms(), r))
                .expect("pivot submatrix is nonsingular");
            a.swap(c, p);
            let inv = a[c][c].inv().expect("nonzero pivot");
            for k in c..=m {
                a[c][k] = &a[c][k] * &inv;
            }
            for r in 0..m {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in c..=m {
                    let t = &f * &a[c][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        a.into_iter().map(|row| row[m].clone()).collect()
    }

    pub fn residual(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        let c = self.project(v);
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(&self.vectors) {
            if ci.is_zero() {
                continue;
            }
            for (rk, bk) in r.iter_mut().zip(b) {
                *rk = &*rk - &(ci * bk);
            }
        }
        r
    }

    /// Coordinates of `v` in this basis, if `v` lies in the R-span.
    pub fn coords(&self, v: &[RatFunc]) -> Option<Vec<RatFunc>> {
        let c = self.project(v);
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(&self.vectors) {
            for (rk, bk) in r.iter_mut().zip(b) {
                *rk = &*rk - &(ci * bk);
            }
        }
        r.iter().all(RatFunc::is_zero).then_some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(n: usize, i: usize) -> RatFunc {
        RatFunc::var(n, i - 1)
    }
    fn k(n: usize, v: i64) -> RatFunc {
        RatFunc::constant(int(v), n)
    }

    #[test]
    fn identity_is_independent() {
        let n = 3;
        let rows = vec![vec![k(n, 1), k(n, 0)], vec![k(n, 0), k(n, 1)]];
        assert_eq!(
            solve_dependence(&rows),
            Dependence::Independent {
                pivots: vec![(0, 0), (1, 1)]
            }
        );
        assert_eq!(
            solve_dependence(&[]),
            Dependence::Independent { pivots: vec![] }
        );
    }

    #[test]
    fn scalar_multiple_over_r() {
        let n = 3;
        let rows = vec![vec![k(n, 1), k(n, 0)], vec![x(n, 2), k(n, 0)]];
        assert_eq!(
            solve_dependence(&rows),
            Dependence::Dependent {
                coefficients: vec![x(n, 2), k(n, -1)]
            }
        );
    }

    #[test]
    fn vanishing_determinant() {
        let n = 3;
        let rows = vec![
            vec![k(n, 1), x(n, 2)],
            vec![x(n, 3), &x(n, 2) * &x(n, 3)],
        ];
        assert_eq!(
            solve_dependence(&rows),
            Dependence::Dependent {
                coefficients: vec![x(n, 3), k(n, -1)]
            }
        );
    }

    #[test]
    fn fractional_rows_and_coords() {
        let n = 2;
        let half = &k(n, 1) / &x(n, 1);
        let basis = RBasis::new(vec![vec![half.clone(), k(n, 0)], vec![k(n, 1), x(n, 2)]]).unwrap();
        // v = x1 * b0 + x2 * b1 = (1 + x2, x2^2)
        let v = vec![&k(n, 1) + &x(n, 2), x(n, 2).pow(2)];
        assert_eq!(basis.coords(&v), Some(vec![x(n, 1), x(n, 2)]));
        let w = vec![k(n, 0), k(n, 0)];
        assert_eq!(basis.coords(&w), Some(vec![k(n, 0), k(n, 0)]));
    }
}
