//! Finite-dimensional Lie algebras spanned over Q by derivations.
//!
//! The basis is found by closing the generators under the bracket; after
//! that every structural question (center, centralizers, lower central
//! series, Jordan chains) is answered on coordinate vectors using the
//! structure constants.

use std::fmt;

use num_traits::{One, Zero};

use crate::derivation::{bracket, Derivation};
use crate::elim::{self, RBasis};
use crate::error::{Error, Result};
use crate::gcd::lcm;
use crate::linalg::{self, QVec, SparseEchelon, SparseVec, Subspace};
use crate::poly::{Monomial, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

pub const DEFAULT_MAX_DIM: usize = 64;

type Key = (usize, Monomial);

/// `s` such that the numerator coefficients of `s * d` are coprime integers.
fn primitive_scale(d: &Derivation) -> Scalar {
    use num_integer::Integer;
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::zero();
    for c in d.coeffs() {
        for (_, v) in c.numer().terms() {
            den = den.lcm(v.denom());
        }
    }
    for c in d.coeffs() {
        for (_, v) in c.numer().terms() {
            num = num.gcd(&(v.numer() * &den / v.denom()));
        }
    }
    Scalar::new(den, num)
}

/// Q-span of derivations, flattened to coefficient vectors over a common
/// denominator. The denominator grows (and the echelon form is rebuilt) when
/// an element with a new denominator is inserted.
#[derive(Debug, Clone)]
pub struct KSpan {
    num_vars: usize,
    den: MultiPoly,
    ech: SparseEchelon<Key>,
    elems: Vec<Derivation>,
}

impl KSpan {
    pub fn new(num_vars: usize) -> Self {
        KSpan {
            num_vars,
            den: MultiPoly::one(num_vars),
            ech: SparseEchelon::new(),
            elems: Vec::new(),
        }
    }

    /// A span that answers membership only; [`KSpan::coords`] returns `None`.
    pub fn membership_only(num_vars: usize) -> Self {
        KSpan {
            ech: SparseEchelon::untracked(),
            ..Self::new(num_vars)
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Derivation] {
        &self.elems
    }

    fn flatten(&self, d: &Derivation) -> Option<SparseVec<Key>> {
        let mut out = SparseVec::new();
        for (k, c) in d.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = if c.is_polynomial() {
                c.numer() * &self.den
            } else {
                c.numer() * &self.den.div_exact(c.denom())?
            };
            for (e, v) in p.terms() {
                out.insert((k, e.clone()), v.clone());
            }
        }
        Some(out)
    }

    fn widen(&mut self, d: &Derivation) {
        let mut l = self.den.clone();
        for c in d.coeffs() {
            if !c.is_polynomial() {
                l = lcm(&l, c.denom());
            }
        }
        if l != self.den {
            self.den = l;
            let mut ech = if self.ech.is_tracked() {
                SparseEchelon::new()
            } else {
                SparseEchelon::untracked()
            };
            for e in &self.elems {
                let v = self.flatten(e).expect("denominator divides");
                let fresh = ech.insert(&v);
                debug_assert!(fresh);
            }
            self.ech = ech;
        }
    }

    pub fn contains(&self, d: &Derivation) -> bool {
        self.flatten(d).is_some_and(|v| self.ech.contains(&v))
    }

    /// The reduced echelon basis of the span, each element scaled to coprime
    /// integer numerator coefficients and sign-normalized. Elements are
    /// ordered by their smallest `(component, monomial)` key.
    pub fn canonical_basis(&self) -> Vec<Derivation> {
        let n = self.num_vars;
        self.ech
            .rows()
            .map(|row| {
                let mut parts: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); n];
                for ((k, e), c) in row {
                    parts[*k].push((e.clone(), c.clone()));
                }
                let coeffs = parts
                    .into_iter()
                    .map(|t| RatFunc::new(MultiPoly::from_terms(n, t), self.den.clone()).expect("nonzero"))
                    .collect();
                let d = Derivation::new(coeffs).expect("matching variables");
                d.scale(&primitive_scale(&d)).sign_normalized()
            })
            .collect()
    }

    /// Coordinates with respect to [`KSpan::elements`].
    pub fn coords(&self, d: &Derivation) -> Option<QVec> {
        let v = self.flatten(d)?;
        self.ech.coords(&v)
    }

    pub fn insert(&mut self, d: &Derivation) -> bool {
        assert_eq!(d.num_vars(), self.num_vars);
        if d.is_zero() {
            return false;
        }
        self.widen(d);
        let v = self.flatten(d).expect("denominator divides");
        if self.ech.insert(&v) {
            self.elems.push(d.clone());
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nilpotency {
    /// `L^(class+1) = 0` and `L^class != 0` (class 0 for the zero algebra).
    Nilpotent { class: usize },
    /// The lower central series stalls at a nonzero term of this dimension.
    NotNilpotent { stable_dim: usize },
}

impl Nilpotency {
    pub fn class(&self) -> Option<usize> {
        match self {
            Nilpotency::Nilpotent { class } => Some(*class),
            Nilpotency::NotNilpotent { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CenterData {
    pub center: Subspace,
    pub center_basis: Vec<Derivation>,
    pub rank_over_r: usize,
    pub corank: usize,
}

#[derive(Clone)]
pub struct SpannedLieAlgebra {
    num_vars: usize,
    generators: Vec<Derivation>,
    span: KSpan,
    /// `structure[i][j]` holds the coordinates of `[b_i, b_j]`.
    structure: Vec<Vec<QVec>>,
}

impl fmt::Debug for SpannedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpannedLieAlgebra")
            .field("num_vars", &self.num_vars)
            .field("basis", &self.basis())
            .finish()
    }
}

impl SpannedLieAlgebra {
    /// Closes `generators` under the bracket.
    ///
    /// The span is discovered with membership tests only: brackets
    /// `[e_j, e_i]`, `j < i`, of the elements found so far are added whenever
    /// they are new. The basis is then the independent generators, in order,
    /// completed by elements of the canonical basis of the span (see
    /// [`KSpan::canonical_basis`]) taken from the largest key down. Raw
    /// brackets make poor basis elements: their coordinates, and so the
    /// structure constants, grow very large.
    pub fn close_under_bracket(
        num_vars: usize,
        generators: &[Derivation],
        max_dim: usize,
    ) -> Result<Self> {
        for g in generators {
            if g.num_vars() != num_vars {
                return Err(Error::DimensionMismatch {
                    left: num_vars,
                    right: g.num_vars(),
                });
            }
        }
        let mut found = KSpan::membership_only(num_vars);
        for g in generators {
            found.insert(g);
            if found.len() > max_dim {
                return Err(Error::NotFiniteDimensional { max_dim });
            }
        }
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let br = bracket(&found.elems[j], &found.elems[i])?;
                if !br.is_zero() && !found.contains(&br) {
                    found.insert(&br);
                    if found.len() > max_dim {
                        return Err(Error::NotFiniteDimensional { max_dim });
                    }
                }
            }
            i += 1;
        }
        let mut span = KSpan::new(num_vars);
        for g in generators {
            span.insert(g);
        }
        for b in found.canonical_basis().iter().rev() {
            span.insert(b);
        }
        debug_assert_eq!(span.len(), found.len());
        let dim = span.len();
        let mut structure = vec![vec![linalg::zeros(dim); dim]; dim];
        for i in 0..dim {
            for j in i + 1..dim {
                let br = bracket(&span.elems[i], &span.elems[j])?;
                let c = span
                    .coords(&br)
                    .ok_or_else(|| Error::InvariantViolation(format!("bracket {} escaped the closure", br)))?;
                structure[j][i] = c.iter().map(|v| -v).collect();
                structure[i][j] = c;
            }
        }
        Ok(SpannedLieAlgebra {
            num_vars,
            generators: generators.to_vec(),
            span,
            structure,
        })
    }

    pub fn new(num_vars: usize, generators: &[Derivation]) -> Result<Self> {
        Self::close_under_bracket(num_vars, generators, DEFAULT_MAX_DIM)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Derivation] {
        &self.generators
    }

    pub fn span(&self) -> &KSpan {
        &self.span
    }

    pub fn basis(&self) -> &[Derivation] {
        self.span.elements()
    }

    pub fn dim(&self) -> usize {
        self.span.len()
    }

    pub fn structure_constants(&self) -> &[Vec<QVec>] {
        &self.structure
    }

    /// Nonzero structure constants `(i, j, k, c)` with `i < j`:
    /// `[b_i, b_j] = sum c * b_k`.
    pub fn structure_triples(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Coordinates of `d` in the basis, if `d` lies in the algebra.
    pub fn coords(&self, d: &Derivation) -> Option<QVec> {
        if d.num_vars() != self.num_vars {
            return None;
        }
        self.span.coords(d)
    }

    pub fn element(&self, x: &[Scalar]) -> Derivation {
        let mut acc = Derivation::zero(self.num_vars);
        for (c, b) in x.iter().zip(self.basis()) {
            if !c.is_zero() {
                acc = &acc + &b.scale(c);
            }
        }
        acc
    }

    pub fn elements(&self, sub: &Subspace) -> Vec<Derivation> {
        sub.basis().iter().map(|v| self.element(v)).collect()
    }

    /// `[x, y]` in coordinates.
    pub fn bracket_coords(&self, x: &[Scalar], y: &[Scalar]) -> QVec {
        let mut out = linalg::zeros(self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                linalg::axpy(&mut out, &(xi * yj), &self.structure[i][j]);
            }
        }
        out
    }

    /// Columns of `ad x` on the full basis.
    pub fn ad(&self, x: &[Scalar]) -> Vec<QVec> {
        (0..self.dim())
            .map(|j| self.bracket_coords(x, &linalg::unit(self.dim(), j)))
            .collect()
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.dim())
    }

    /// Q-span of `[a, b]` over basis vectors of `s` and `t`.
    pub fn bracket_spaces(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let mut v = Vec::new();
        for a in s.basis() {
            for b in t.basis() {
                let c = self.bracket_coords(a, b);
                if !linalg::is_zero(&c) {
                    v.push(c);
                }
            }
        }
        Subspace::span(self.dim(), v)
    }

    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = self.full();
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            if last.dim() == 0 {
                break;
            }
            let next = self.bracket_spaces(&full, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn nilpotency(&self) -> Nilpotency {
        let series = self.lower_central_series();
        let last = series.last().unwrap();
        if last.dim() == 0 {
            Nilpotency::Nilpotent {
                class: series.len() - 1,
            }
        } else {
            Nilpotency::NotNilpotent {
                stable_dim: last.dim(),
            }
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self.nilpotency(), Nilpotency::Nilpotent { .. })
    }

    pub fn is_abelian(&self) -> bool {
        self.structure
            .iter()
            .all(|row| row.iter().all(|c| linalg::is_zero(c)))
    }

    /// Elements commuting with every basis vector of `sub`.
    pub fn centralizer(&self, sub: &Subspace) -> Subspace {
        let dim = self.dim();
        let mut rows: Vec<QVec> = Vec::new();
        for s in sub.basis() {
            // Column i of the system is [b_i, s].
            let cols: Vec<QVec> = (0..dim)
                .map(|i| self.bracket_coords(&linalg::unit(dim, i), s))
                .collect();
            for k in 0..dim {
                let row: QVec = cols.iter().map(|c| c[k].clone()).collect();
                if !linalg::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
        Subspace::span(dim, linalg::nullspace(&rows, dim))
    }

    /// `{x : [x, L] ⊆ ideal}`; the preimage of the center of `L / ideal`.
    pub fn relative_center(&self, ideal: &Subspace) -> Subspace {
        let dim = self.dim();
        let mut rows: Vec<QVec> = Vec::new();
        for j in 0..dim {
            let cols: Vec<QVec> = (0..dim).map(|i| ideal.reduce(&self.structure[i][j])).collect();
            for k in 0..dim {
                let row: QVec = cols.iter().map(|c| c[k].clone()).collect();
                if !linalg::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
        Subspace::span(dim, linalg::nullspace(&rows, dim))
    }

    fn coeff_rows(ds: &[Derivation]) -> Vec<Vec<RatFunc>> {
        ds.iter().map(|d| d.coeffs().to_vec()).collect()
    }

    pub fn rank_of(ds: &[Derivation]) -> usize {
        elim::rank(&Self::coeff_rows(ds))
    }

    pub fn rank_over_r(&self) -> usize {
        Self::rank_of(self.basis())
    }

    pub fn center(&self) -> CenterData {
        let center = self.centralizer(&self.full());
        let center_basis = self.elements(&center);
        let rank_over_r = Self::rank_of(&center_basis);
        CenterData {
            corank: self.rank_over_r() - rank_over_r,
            center,
            center_basis,
            rank_over_r,
        }
    }

    /// An R-linearly independent subfamily of `ds` spanning the same R-space,
    /// picked greedily in order.
    pub fn r_independent_subset(ds: &[Derivation]) -> Vec<usize> {
        elim::independent_rows(&Self::coeff_rows(ds))
    }

    /// `{x in L : x in R * span(ds)}` as a subspace.
    pub fn r_span_intersection(&self, ds: &[Derivation]) -> Subspace {
        let dim = self.dim();
        let idx = Self::r_independent_subset(ds);
        if idx.is_empty() {
            return Subspace::zero(dim);
        }
        let basis = RBasis::new(idx.iter().map(|&i| ds[i].coeffs().to_vec()).collect())
            .expect("independent subset");
        let residuals: Vec<Vec<RatFunc>> = self
            .basis()
            .iter()
            .map(|b| basis.residual(b.coeffs()))
            .collect();
        // The residual map is Q-linear; x lies in the R-span iff
        // sum x_i residual_i = 0, a linear system after clearing denominators.
        let n = self.num_vars;
        let mut den = MultiPoly::one(n);
        for r in &residuals {
            for c in r {
                if !c.is_polynomial() {
                    den = lcm(&den, c.denom());
                }
            }
        }
        let mut keys: Vec<Key> = Vec::new();
        let mut cols: Vec<SparseVec<Key>> = Vec::new();
        for r in &residuals {
            let mut col = SparseVec::new();
            for (k, c) in r.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let p = c.numer() * &den.div_exact(c.denom()).expect("lcm divides");
                for (e, v) in p.terms() {
                    col.insert((k, e.clone()), v.clone());
                    keys.push((k, e.clone()));
                }
            }
            cols.push(col);
        }
        keys.sort();
        keys.dedup();
        let rows: Vec<QVec> = keys
            .iter()
            .map(|key| {
                cols.iter()
                    .map(|c| c.get(key).cloned().unwrap_or_else(Scalar::zero))
                    .collect()
            })
            .collect();
        Subspace::span(dim, linalg::nullspace(&rows, dim))
    }

    /// `I = RZ ∩ L`, verified to be an abelian ideal.
    pub fn central_rank_ideal(&self) -> Result<Subspace> {
        let z = self.center();
        let ideal = self.r_span_intersection(&z.center_basis);
        if self.bracket_spaces(&ideal, &ideal).dim() != 0 {
            return Err(Error::InvariantViolation(
                "RZ ∩ L is not abelian".into(),
            ));
        }
        if !self.bracket_spaces(&self.full(), &ideal).is_subspace_of(&ideal) {
            return Err(Error::InvariantViolation("RZ ∩ L is not an ideal".into()));
        }
        Ok(ideal)
    }

    /// True iff every generator kills `f`.
    pub fn is_constant(&self, f: &RatFunc) -> Result<bool> {
        for g in &self.generators {
            if !g.apply(f)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Best-effort test that the constants field is Q: returns a coefficient
    /// ratio that is nonconstant yet killed by every generator, if one is
    /// found. Ratios inside each basis element and against the first basis
    /// element with the same nonzero component are tried.
    pub fn nonrational_constant(&self) -> Result<Option<RatFunc>> {
        let basis = self.basis();
        let mut candidates: Vec<RatFunc> = Vec::new();
        for b in basis {
            let nz: Vec<&RatFunc> = b.coeffs().iter().filter(|c| !c.is_zero()).collect();
            for c in nz.iter().skip(1) {
                candidates.push(*c / nz[0]);
            }
        }
        for k in 0..self.num_vars {
            let Some(first) = basis.iter().find(|b| !b.coeff(k).is_zero()) else {
                continue;
            };
            for b in basis {
                if !b.coeff(k).is_zero() {
                    candidates.push(b.coeff(k) / first.coeff(k));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for r in candidates {
            if r.constant_value().is_some() || !seen.insert(r.clone()) {
                continue;
            }
            if self.is_constant(&r)? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Matrix of `ad x` restricted to an invariant subspace, in the
    /// coordinates of `sub`'s basis (columns).
    pub fn ad_on_subspace(&self, x: &[Scalar], sub: &Subspace) -> Result<Vec<QVec>> {
        sub.basis()
            .iter()
            .map(|v| {
                let img = self.bracket_coords(x, v);
                sub.coords(&img).ok_or(Error::NotInvariant)
            })
            .collect()
    }

    /// Matrix of `ad x` on `big / small`, in the coordinates of
    /// `small.quotient_basis(big)`.
    pub fn ad_on_quotient(&self, x: &[Scalar], big: &Subspace, small: &Subspace) -> Result<Vec<QVec>> {
        let q = small.quotient_basis(big);
        q.basis()
            .iter()
            .map(|v| {
                let img = self.bracket_coords(x, v);
                if !big.contains(&img) {
                    return Err(Error::NotInvariant);
                }
                q.coords(&small.reduce(&img)).ok_or(Error::NotInvariant)
            })
            .collect()
    }
}

/// A Jordan chain `v_1, ..., v_m` of a nilpotent operator with
/// one-dimensional kernel: `A v_1 = 0` and `A v_k = v_{k-1}`. `op` lists the
/// columns of `A`.
///
/// The chain is built upwards: `v_1` is the canonical kernel vector and each
/// `v_{k+1}` is the preimage of `v_k` with free coordinates set to zero, which
/// removes the kernel component at every step.
pub fn jordan_chain(op: &[QVec]) -> Result<Vec<QVec>> {
    let m = op.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    for j in 0..m {
        let mut v = linalg::unit(m, j);
        for _ in 0..m {
            v = linalg::apply_columns(op, &v, m);
        }
        if !linalg::is_zero(&v) {
            return Err(Error::NotNilpotent);
        }
    }
    let rows: Vec<QVec> = (0..m).map(|i| op.iter().map(|c| c[i].clone()).collect()).collect();
    let mut kernel = linalg::nullspace(&rows, m);
    if kernel.len() != 1 {
        return Err(Error::KernelNotSimple(kernel.len()));
    }
    let mut chain = vec![kernel.pop().unwrap()];
    while chain.len() < m {
        match linalg::solve(&rows, chain.last().unwrap(), m) {
            Some(x) => chain.push(x),
            None => break,
        }
    }
    if chain.len() != m {
        return Err(Error::InvariantViolation("Jordan chain is shorter than the space".into()));
    }
    Ok(chain)
}
