//! Exact linear algebra over the rationals: dense reduced row echelon forms,
//! subspaces in canonical form, and a sparse incremental echelon basis used
//! to test K-linear independence of derivations.

use std::collections::BTreeMap;
use std::ops::Bound;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub type QVec = Vec<Scalar>;

pub fn zeros(n: usize) -> QVec {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += a * xi;
        }
    }
}

pub fn scaled(x: &[Scalar], a: &Scalar) -> QVec {
    x.iter().map(|v| v * a).collect()
}

/// Reduces `rows` to reduced row echelon form, dropping zero rows. Returns
/// the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<QVec>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Scalar::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` where `A` has `ncols` columns.
pub fn nullspace(a: &[QVec], ncols: usize) -> Vec<QVec> {
    let mut m: Vec<QVec> = a.to_vec();
    let pivots = rref(&mut m);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = zeros(ncols);
        x[f] = Scalar::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            x[pc] = -row[f].clone();
        }
        out.push(x);
    }
    out
}

/// A solution of `A x = b` with all free variables set to zero.
pub fn solve(a: &[QVec], b: &[Scalar], ncols: usize) -> Option<QVec> {
    let mut m: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if m.is_empty() {
        return Some(zeros(ncols));
    }
    let pivots = rref(&mut m);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Matrix-vector product; `cols[j]` is column `j`.
pub fn apply_columns(cols: &[QVec], x: &[Scalar], nrows: usize) -> QVec {
    let mut y = zeros(nrows);
    for (c, xj) in cols.iter().zip(x) {
        axpy(&mut y, xj, c);
    }
    y
}

/// A subspace of Q^ambient stored as the nonzero rows of its reduced row
/// echelon form, so equal subspaces have identical representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<QVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit(ambient, i)).collect())
    }

    pub fn span(ambient: usize, vectors: Vec<QVec>) -> Self {
        let mut rows = vectors;
        rows.retain(|v| !is_zero(v));
        let pivots = rref(&mut rows);
        Subspace {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Normal form of `v` modulo this subspace.
    pub fn reduce(&self, v: &[Scalar]) -> QVec {
        let mut r = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !r[pc].is_zero() {
                let f = -r[pc].clone();
                axpy(&mut r, &f, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Coordinates with respect to [`Subspace::basis`].
    pub fn coords(&self, v: &[Scalar]) -> Option<QVec> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Subspace::span(self.ambient, v)
    }

    pub fn with(&self, extra: &[Scalar]) -> Subspace {
        let mut v = self.rows.clone();
        v.push(extra.to_vec());
        Subspace::span(self.ambient, v)
    }

    /// Representatives of `larger / self`: the normal forms of `larger`'s
    /// basis modulo `self`, in reduced echelon form.
    pub fn quotient_basis(&self, larger: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient,
            larger.rows.iter().map(|r| self.reduce(r)).collect(),
        )
    }
}

/// Sparse vector keyed by an ordered index type.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// Incremental echelon basis of sparse vectors. Each stored row has pivot
/// coefficient 1 at its smallest key, and remembers which combination of the
/// inserted vectors it equals, so coordinates of dependent vectors come for
/// free.
#[derive(Debug, Clone)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, (SparseVec<K>, QVec)>,
    count: usize,
    track: bool,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon {
            rows: BTreeMap::new(),
            count: 0,
            track: true,
        }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// An echelon form that only answers membership; `coords` always
    /// returns `None`. Much cheaper when combinations are not needed.
    pub fn untracked() -> Self {
        SparseEchelon {
            track: false,
            ..Self::default()
        }
    }

    pub fn is_tracked(&self) -> bool {
        self.track
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|(r, _)| r)
    }

    /// Reduces `v`; returns the residual and `c` with
    /// `v = residual + sum c[i] * inserted[i]`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, QVec) {
        let mut v = v.clone();
        let mut combo = if self.track { zeros(self.count) } else { QVec::new() };
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next().cloned(),
                Some(c) => v
                    .range((Bound::Excluded(c.clone()), Bound::Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some((row, rc)) = self.rows.get(&k) {
                let f = v[&k].clone();
                for (rk, rv) in row {
                    let e = v.entry(rk.clone()).or_insert_with(Scalar::zero);
                    *e -= &f * rv;
                    if e.is_zero() {
                        v.remove(rk);
                    }
                }
                if self.track {
                    axpy(&mut combo, &f, rc);
                }
            }
            cursor = Some(k);
        }
        (v, combo)
    }

    /// Inserts `v` if it is independent of the stored vectors.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let (res, combo) = self.reduce(v);
        let Some((pk, pv)) = res.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Scalar::one() / pv;
        let row: SparseVec<K> = res.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        // row = (v - sum combo_i * b_i) * inv
        let mut rc: QVec = combo.iter().map(|c| -c * &inv).collect();
        if self.track {
            rc.push(inv);
        }
        self.count += 1;
        // Keep the basis fully reduced: no row has a nonzero entry at another
        // row's pivot.
        for (other, c) in self.rows.values_mut() {
            if self.track {
                c.resize(self.count, Scalar::zero());
            }
            if let Some(f) = other.get(&pk).cloned() {
                for (rk, rv) in &row {
                    let e = other.entry(rk.clone()).or_insert_with(Scalar::zero);
                    *e -= &f * rv;
                    if e.is_zero() {
                        other.remove(rk);
                    }
                }
                if self.track {
                    let neg = -f;
                    axpy(c, &neg, &rc);
                }
            }
        }
        self.rows.insert(pk, (row, rc));
        true
    }

    /// Coordinates in terms of the inserted vectors, if `v` is in the span.
    pub fn coords(&self, v: &SparseVec<K>) -> Option<QVec> {
        if !self.track {
            return None;
        }
        let (res, combo) = self.reduce(v);
        res.is_empty().then_some(combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn nullspace_and_solve() {
        // x + y + z = 0, y - z = 0
        let a = vec![
            vec![int(1), int(1), int(1)],
            vec![int(0), int(1), int(-1)],
        ];
        let ns = nullspace(&a, 3);
        assert_eq!(ns, vec![vec![int(-2), int(1), int(1)]]);
        let x = solve(&a, &[int(3), int(1)], 3).unwrap();
        assert_eq!(x, vec![int(2), int(1), int(0)]);
        assert!(solve(&[vec![int(0)]], &[int(1)], 1).is_none());
    }

    #[test]
    fn subspace_canonical() {
        let a = Subspace::span(3, vec![vec![int(2), int(2), int(0)], vec![int(0), int(0), int(5)]]);
        let b = Subspace::span(3, vec![vec![int(1), int(1), int(3)], vec![int(1), int(1), int(0)]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&[int(3), int(3), frac(1, 2)]));
        assert!(!a.contains(&[int(1), int(0), int(0)]));
        let q = a.quotient_basis(&Subspace::full(3));
        assert_eq!(q.dim(), 1);
    }

    #[test]
    fn sparse_echelon_coords() {
        let mut e: SparseEchelon<u32> = SparseEchelon::new();
        let v1: SparseVec<u32> = [(0, int(1)), (1, int(1))].into_iter().collect();
        let v2: SparseVec<u32> = [(1, int(1)), (2, int(2))].into_iter().collect();
        assert!(e.insert(&v1));
        assert!(e.insert(&v2));
        let w: SparseVec<u32> = [(0, int(2)), (1, int(5)), (2, int(6))].into_iter().collect();
        assert!(!e.insert(&w));
        assert_eq!(e.coords(&w), Some(vec![int(2), int(3)]));
        let u: SparseVec<u32> = [(2, int(1))].into_iter().collect();
        assert_eq!(e.coords(&u), None);
    }
}
