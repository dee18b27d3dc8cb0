//! Classification of nilpotent algebras of rank `n >= 3` whose center has
//! corank at most two over R, and the truncated model algebras L1 and L2.
//!
//! Results come with an adapted R-basis `D_1..D_n` of pairwise commuting
//! derivations and slices `a`, `b`. Every basis element of the input is then
//! written in adapted coordinates whose entries are polynomials in the
//! slices; these polynomials use the variables `u` (for `a`) and `v` (for `b`).

use crate::derivation::{bracket, find_slice, iterate_to_zero, kernel_projection, Derivation, DEFAULT_CAP};
use crate::elim::RBasis;
use crate::error::{Error, Result};
use crate::lie::{KSpan, SpannedLieAlgebra};
use crate::linalg::{self, Subspace};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::scalar::{self, Scalar};

/// Number of slice variables in coordinate polynomials.
pub const SLICE_VARS: usize = 2;
pub const U: usize = 0;
pub const V: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictCase {
    AbelianDimN,
    DirectSum3PlusAbelian,
    TypeL1,
    TypeL2,
    OutOfScope { check: String, detail: String },
}

impl VerdictCase {
    pub fn tag(&self) -> &'static str {
        match self {
            VerdictCase::AbelianDimN => "AbelianDimN",
            VerdictCase::DirectSum3PlusAbelian => "DirectSum3PlusAbelian",
            VerdictCase::TypeL1 => "TypeL1",
            VerdictCase::TypeL2 => "TypeL2",
            VerdictCase::OutOfScope { .. } => "OutOfScope",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct ClassificationVerdict {
    pub case: VerdictCase,
    pub rank: usize,
    pub dim: usize,
    pub center_rank: usize,
    /// `D_1..D_n`; for the direct sum case `X, Y, [X, Y]` followed by the
    /// abelian part.
    pub adapted: Vec<Derivation>,
    pub a: Option<RatFunc>,
    pub b: Option<RatFunc>,
    /// Adapted coordinates of every basis element of the input, as
    /// polynomials in `u`, `v`.
    pub coordinates: Vec<Vec<MultiPoly>>,
    pub checks: Vec<Check>,
}

impl ClassificationVerdict {
    fn out_of_scope(rank: usize, dim: usize, center_rank: usize, check: &str, detail: String) -> Self {
        ClassificationVerdict {
            case: VerdictCase::OutOfScope {
                check: check.to_string(),
                detail,
            },
            rank,
            dim,
            center_rank,
            adapted: Vec::new(),
            a: None,
            b: None,
            coordinates: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn is_out_of_scope(&self) -> bool {
        matches!(self.case, VerdictCase::OutOfScope { .. })
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Coordinate solver for elements of the classified algebra.
    pub fn coordinates(&self) -> Result<Coordinates<'_>> {
        let kind = match self.case {
            VerdictCase::AbelianDimN | VerdictCase::DirectSum3PlusAbelian => {
                let n = self.adapted.first().map_or(0, Derivation::num_vars);
                let mut span = KSpan::new(n);
                for d in &self.adapted {
                    span.insert(d);
                }
                CoordKind::Rational(span)
            }
            VerdictCase::TypeL1 | VerdictCase::TypeL2 => {
                let basis = RBasis::new(self.adapted.iter().map(|d| d.coeffs().to_vec()).collect())
                    .ok_or_else(|| Error::InvariantViolation("adapted basis is R-dependent".into()))?;
                CoordKind::Slices(basis)
            }
            VerdictCase::OutOfScope { .. } => {
                return Err(Error::hypothesis("in_scope", "verdict is out of scope"))
            }
        };
        Ok(Coordinates {
            verdict: self,
            kind,
        })
    }
}

enum CoordKind {
    Rational(KSpan),
    Slices(RBasis),
}

pub struct Coordinates<'a> {
    verdict: &'a ClassificationVerdict,
    kind: CoordKind,
}

impl Coordinates<'_> {
    /// Adapted coordinates of `d`, or `None` if `d` is not in the model
    /// algebra (outside the span, or a coefficient is not a polynomial in
    /// the slices of the required shape).
    pub fn of(&self, d: &Derivation) -> Result<Option<Vec<MultiPoly>>> {
        match &self.kind {
            CoordKind::Rational(span) => Ok(span.coords(d).map(|c| {
                c.into_iter()
                    .map(|x| MultiPoly::constant(x, SLICE_VARS))
                    .collect()
            })),
            CoordKind::Slices(basis) => {
                let v = self.verdict;
                let Some(rc) = basis.coords(d.coeffs()) else {
                    return Ok(None);
                };
                let n = v.rank;
                let b = v.b.as_ref().expect("slice b");
                let dn = &v.adapted[n - 1];
                let l2 = v.case == VerdictCase::TypeL2;
                let mut out = Vec::with_capacity(n);
                for (j, c) in rc.iter().enumerate() {
                    let p = if l2 && j < n - 2 {
                        let a = v.a.as_ref().expect("slice a");
                        let s = &v.adapted[n - 2];
                        decompose_in_slices(c, &[(s, a, U), (dn, b, V)], DEFAULT_CAP)?
                    } else if j < n - 1 {
                        decompose_in_slices(c, &[(dn, b, V)], DEFAULT_CAP)?
                    } else {
                        c.constant_value().map(|x| MultiPoly::constant(x, SLICE_VARS))
                    };
                    match p {
                        Some(p) => out.push(p),
                        None => return Ok(None),
                    }
                }
                Ok(Some(out))
            }
        }
    }
}

/// Writes `r` as a polynomial over Q in slices. Each entry `(D, s, var)`
/// has `D(s) = 1` and the slices are assumed mutually compatible
/// (`D_i(s_j) = 0` for `i != j`); `var` is the output variable standing for
/// `s`. The last entry is eliminated first: the coefficient of `s^d` is
/// `D^d(r) / d!`, decomposed recursively in the remaining slices. The result
/// is confirmed by substitution.
pub fn decompose_in_slices(
    r: &RatFunc,
    pairs: &[(&Derivation, &RatFunc, usize)],
    cap: usize,
) -> Result<Option<MultiPoly>> {
    let Some(p) = decompose_rec(r, pairs, cap)? else {
        return Ok(None);
    };
    let n = r.num_vars();
    let mut vals = vec![RatFunc::zero(n); SLICE_VARS];
    for (_, s, var) in pairs {
        vals[*var] = (*s).clone();
    }
    if &RatFunc::eval_poly(&p, &vals, n) != r {
        return Ok(None);
    }
    Ok(Some(p))
}

fn decompose_rec(
    r: &RatFunc,
    pairs: &[(&Derivation, &RatFunc, usize)],
    cap: usize,
) -> Result<Option<MultiPoly>> {
    let Some(((d, s, var), rest)) = pairs.split_last() else {
        return Ok(r.constant_value().map(|c| MultiPoly::constant(c, SLICE_VARS)));
    };
    let n = r.num_vars();
    let Some(chain) = iterate_to_zero(d, r, cap)? else {
        return Ok(None);
    };
    let mut rem = r.clone();
    let mut out = MultiPoly::zero(SLICE_VARS);
    let mut vals = vec![RatFunc::zero(n); SLICE_VARS];
    for (_, s2, v2) in rest {
        vals[*v2] = (*s2).clone();
    }
    for deg in (0..chain.len()).rev() {
        let mut t = rem.clone();
        for _ in 0..deg {
            t = d.apply(&t)?;
        }
        if t.is_zero() {
            continue;
        }
        let g = t.scale(&scalar::factorial(deg as u32).recip());
        let Some(sub) = decompose_rec(&g, rest, cap)? else {
            return Ok(None);
        };
        let sub_val = RatFunc::eval_poly(&sub, &vals, n);
        rem = &rem - &(&sub_val * &s.pow(deg as u32));
        let mut e = vec![0; SLICE_VARS];
        e[*var] = deg as u32;
        out = &out + &(&sub * &MultiPoly::monomial(Scalar::from_integer(1.into()), e));
    }
    if !rem.is_zero() {
        return Ok(None);
    }
    Ok(Some(out))
}

fn monomial_field(n: usize, exps: &[(usize, u32)]) -> RatFunc {
    let mut e = vec![0; n];
    let mut c = Scalar::from_integer(1.into());
    for &(v, k) in exps {
        e[v] += k;
        c /= scalar::factorial(k);
    }
    RatFunc::from_poly(MultiPoly::monomial(c, e))
}

fn builder_max_dim(estimate: usize) -> usize {
    (4 * estimate).max(crate::lie::DEFAULT_MAX_DIM)
}

/// Truncation of L1 with `D_i = d_i`, `b = x_n`: generated by
/// `x_n^i / i! * d_j` (`i <= k`, `j < n`) and `d_n`.
pub fn build_l1(n: usize, k: usize) -> Result<SpannedLieAlgebra> {
    if n < 3 {
        return Err(Error::hypothesis("n_at_least_3", format!("n = {}", n)));
    }
    let mut gens: Vec<Derivation> = (0..n).map(|i| Derivation::coordinate(n, i)).collect();
    for i in 1..=k {
        for j in 0..n - 1 {
            gens.push(Derivation::coordinate(n, j).mul_fn(&monomial_field(n, &[(n - 1, i as u32)])));
        }
    }
    let est = gens.len();
    SpannedLieAlgebra::close_under_bracket(n, &gens, builder_max_dim(est))
}

/// Truncation of L2 with `D_i = d_i`, `a = x_{n-1}`, `b = x_n`: generated by
/// `a^i b^j / (i! j!) * d_m` (`i + j <= k`, `m <= n - 2`),
/// `b^i / i! * d_{n-1}` (`i <= k`) and `d_n`, then closed under the bracket.
/// The degree cut alone is not closed for `k >= 2`:
/// `[x_n^2/2 d_{n-1}, x_{n-1} x_n d_1] = x_n^3/2 d_1`.
pub fn build_l2(n: usize, k: usize) -> Result<SpannedLieAlgebra> {
    if n < 3 {
        return Err(Error::hypothesis("n_at_least_3", format!("n = {}", n)));
    }
    let mut gens: Vec<Derivation> = (0..n).map(|i| Derivation::coordinate(n, i)).collect();
    for t in 1..=k {
        for i in (0..=t).rev() {
            let j = t - i;
            let f = monomial_field(n, &[(n - 2, i as u32), (n - 1, j as u32)]);
            for m in 0..n - 2 {
                gens.push(Derivation::coordinate(n, m).mul_fn(&f));
            }
        }
        gens.push(Derivation::coordinate(n, n - 2).mul_fn(&monomial_field(n, &[(n - 1, t as u32)])));
    }
    let est = gens.len();
    SpannedLieAlgebra::close_under_bracket(n, &gens, builder_max_dim(est))
}

struct Ctx<'a> {
    alg: &'a SpannedLieAlgebra,
    rank: usize,
    dim: usize,
    center_rank: usize,
}

impl Ctx<'_> {
    fn oos(&self, check: &str, detail: impl Into<String>) -> Result<ClassificationVerdict> {
        Ok(ClassificationVerdict::out_of_scope(
            self.rank,
            self.dim,
            self.center_rank,
            check,
            detail.into(),
        ))
    }

    fn first_outside(&self, sub: &Subspace) -> Option<Derivation> {
        (0..self.dim)
            .find(|&i| !sub.contains(&linalg::unit(self.dim, i)))
            .map(|i| self.alg.basis()[i].clone())
    }

    /// Nonconstant coefficients of the elements of `sub` with respect to the
    /// R-independent family `lower`.
    fn coefficient_ring(&self, sub: &Subspace, lower: &[Derivation]) -> Result<Vec<RatFunc>> {
        let basis = RBasis::new(lower.iter().map(|d| d.coeffs().to_vec()).collect())
            .ok_or_else(|| Error::InvariantViolation("center basis is R-dependent".into()))?;
        let mut out: Vec<RatFunc> = Vec::new();
        for d in self.alg.elements(sub) {
            let c = basis.coords(d.coeffs()).ok_or_else(|| {
                Error::InvariantViolation(format!("{} is not in R times the center", d))
            })?;
            for f in c {
                if f.constant_value().is_none() && !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }
}

/// Errors of slice and chain constructions that signal a failed hypothesis
/// rather than a bug.
fn soft(e: &Error) -> bool {
    matches!(
        e,
        Error::NoSlice(_) | Error::NotLocallyNilpotent { .. } | Error::KernelNotSimple(_)
    )
}

pub fn classify(alg: &SpannedLieAlgebra) -> Result<ClassificationVerdict> {
    let dim = alg.dim();
    let rank = alg.rank_over_r();
    let mut ctx = Ctx {
        alg,
        rank,
        dim,
        center_rank: 0,
    };
    if let Some(stable) = match alg.nilpotency() {
        crate::lie::Nilpotency::NotNilpotent { stable_dim } => Some(stable_dim),
        _ => None,
    } {
        return ctx.oos(
            "nilpotent",
            format!("lower central series stabilizes at dimension {}", stable),
        );
    }
    let cd = alg.center();
    ctx.center_rank = cd.rank_over_r;
    if rank < 3 {
        if rank == 1 && !alg.is_abelian() {
            return Err(Error::InvariantViolation(
                "nilpotent algebra of rank 1 is not abelian".into(),
            ));
        }
        let note = if alg.is_abelian() { "; the algebra is abelian" } else { "" };
        return ctx.oos("rank_at_least_3", format!("rank over R is {}{}", rank, note));
    }
    if cd.corank > 2 {
        return ctx.oos(
            "center_corank_at_most_2",
            format!("center has rank {} in an algebra of rank {}", cd.rank_over_r, rank),
        );
    }
    if let Some(r) = alg.nonrational_constant()? {
        return ctx.oos(
            "constants_field_is_Q",
            format!("{} is a nonconstant common kernel element", r),
        );
    }
    let zidx = SpannedLieAlgebra::r_independent_subset(&cd.center_basis);
    let zb: Vec<Derivation> = zidx.iter().map(|&i| cd.center_basis[i].clone()).collect();

    if dim == rank {
        return classify_dim_n(&ctx, &cd.center);
    }
    let res = match cd.corank {
        0 => ctx.oos(
            "constants_field_is_Q",
            format!("abelian algebra of rank {} has dimension {} over Q", rank, dim),
        ),
        1 => corank_one(&ctx, &zb),
        _ => corank_two(&ctx, &zb),
    };
    match res {
        Err(e) if soft(&e) => ctx.oos("slice_construction", e.to_string()),
        other => other,
    }
}

fn classify_dim_n(ctx: &Ctx<'_>, center: &Subspace) -> Result<ClassificationVerdict> {
    let alg = ctx.alg;
    let n = ctx.rank;
    let (case, adapted) = if alg.is_abelian() {
        (VerdictCase::AbelianDimN, alg.basis().to_vec())
    } else {
        let dim = ctx.dim;
        let (i, j) = (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .find(|&(i, j)| !linalg::is_zero(&alg.structure_constants()[i][j]))
            .expect("nonabelian");
        let z0 = alg.structure_constants()[i][j].clone();
        if !center.contains(&z0) || center.dim() != n - 2 {
            return Err(Error::InvariantViolation(
                "nonabelian algebra of dimension n is not of class 2 with center of dimension n - 2"
                    .into(),
            ));
        }
        let mut adapted = vec![alg.basis()[i].clone(), alg.basis()[j].clone(), alg.element(&z0)];
        let mut acc = Subspace::span(dim, vec![z0]);
        for v in center.basis() {
            if !acc.contains(v) {
                acc = acc.with(v);
                adapted.push(alg.element(v));
            }
        }
        (VerdictCase::DirectSum3PlusAbelian, adapted)
    };
    let mut v = ClassificationVerdict {
        case,
        rank: n,
        dim: ctx.dim,
        center_rank: ctx.center_rank,
        adapted,
        a: None,
        b: None,
        coordinates: Vec::new(),
        checks: Vec::new(),
    };
    let mut checks = vec![Check {
        name: "adapted_basis_rank".into(),
        passed: SpannedLieAlgebra::rank_of(&v.adapted) == n && v.adapted.len() == n,
    }];
    if v.case == VerdictCase::DirectSum3PlusAbelian {
        let a = &v.adapted;
        let mut ok = bracket(&a[0], &a[1])? == a[2];
        for z in &a[2..] {
            for w in a {
                ok &= bracket(z, w)?.is_zero();
            }
        }
        checks.push(Check {
            name: "direct_sum_relations".into(),
            passed: ok,
        });
    }
    fill_coordinates(ctx, &mut v, checks)
}

fn fill_coordinates(
    ctx: &Ctx<'_>,
    v: &mut ClassificationVerdict,
    mut checks: Vec<Check>,
) -> Result<ClassificationVerdict> {
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::InvariantViolation(format!("check `{}` failed", c.name)));
    }
    let coords = v.coordinates()?;
    let mut all = Vec::with_capacity(ctx.dim);
    for d in ctx.alg.basis() {
        match coords.of(d)? {
            Some(c) => all.push(c),
            None => {
                return ctx.oos(
                    "constants_field_is_Q",
                    format!("{} has no polynomial coordinates over Q in the slices", d),
                )
            }
        }
    }
    drop(coords);
    checks.push(Check {
        name: "containment".into(),
        passed: true,
    });
    v.coordinates = all;
    v.checks = checks;
    Ok(v.clone())
}

fn corank_one(ctx: &Ctx<'_>, zb: &[Derivation]) -> Result<ClassificationVerdict> {
    let ideal = ctx.alg.central_rank_ideal()?;
    let dn = ctx
        .first_outside(&ideal)
        .ok_or_else(|| Error::InvariantViolation("RZ ∩ L is the whole algebra".into()))?;
    let gens = ctx.coefficient_ring(&ideal, zb)?;
    let b = find_slice(&dn, &gens, DEFAULT_CAP)?.slice;
    let mut adapted = zb.to_vec();
    adapted.push(dn);
    finish(ctx, VerdictCase::TypeL1, adapted, None, b, Vec::new())
}

fn corank_two(ctx: &Ctx<'_>, zb: &[Derivation]) -> Result<ClassificationVerdict> {
    let alg = ctx.alg;
    let n = ctx.rank;
    let dim = ctx.dim;
    let ideal = alg.central_rank_ideal()?;
    let full = alg.full();
    let abelian_quotient = alg.bracket_spaces(&full, &full).is_subspace_of(&ideal);
    if abelian_quotient {
        if dim - ideal.dim() != 2 {
            return ctx.oos(
                "constants_field_is_Q",
                format!("L / I is abelian of dimension {} over Q", dim - ideal.dim()),
            );
        }
        let c = alg.centralizer(&ideal);
        if c == ideal {
            let q = ideal.quotient_basis(&full);
            let s = alg.element(&q.basis()[0]);
            let t = alg.element(&q.basis()[1]);
            return two_slices(ctx, &ideal, zb, s, t, Vec::new());
        }
        let cq = ideal.quotient_basis(&c);
        if cq.dim() != 1 {
            return Err(Error::InvariantViolation(format!(
                "centralizer of I has codimension {} over I",
                cq.dim()
            )));
        }
        let dn1 = alg.element(&cq.basis()[0]);
        let mut lower = zb.to_vec();
        lower.push(dn1.clone());
        let i1 = alg.r_span_intersection(&lower);
        let dn = ctx
            .first_outside(&i1)
            .ok_or_else(|| Error::InvariantViolation("R(I + D_{n-1}) ∩ L is everything".into()))?;
        let gens = ctx.coefficient_ring(&ideal, zb)?;
        let b = find_slice(&dn, &gens, DEFAULT_CAP)?.slice;
        lower.push(dn);
        return finish(ctx, VerdictCase::TypeL1, lower, None, b, Vec::new());
    }

    let z2 = alg.relative_center(&ideal);
    let zq = ideal.quotient_basis(&z2);
    if zq.dim() == 0 {
        return Err(Error::InvariantViolation("L / I has trivial center".into()));
    }
    let guess = alg.element(&zq.basis()[0]);
    let mut lower = zb.to_vec();
    lower.push(guess);
    let i1 = alg.r_span_intersection(&lower);
    if dim - i1.dim() != 1 {
        return ctx.oos(
            "constants_field_is_Q",
            format!("L / I_1 has dimension {} over Q", dim - i1.dim()),
        );
    }
    let dn_idx = (0..dim)
        .find(|&i| !i1.contains(&linalg::unit(dim, i)))
        .expect("codimension one");
    let dn = alg.basis()[dn_idx].clone();
    let op = alg
        .ad_on_quotient(&linalg::unit(dim, dn_idx), &i1, &ideal)
        .map_err(|_| Error::InvariantViolation("I_1 is not invariant under ad D_n".into()))?;
    let chain = match crate::lie::jordan_chain(&op) {
        Ok(c) => c,
        Err(Error::KernelNotSimple(k)) => {
            return ctx.oos(
                "single_jordan_chain",
                format!("kernel of ad D_n on I_1 / I has dimension {}", k),
            )
        }
        Err(e) => return Err(e),
    };
    if chain.len() < 2 {
        return Err(Error::InvariantViolation("Jordan chain of length 1 in a nonabelian quotient".into()));
    }
    let qb = ideal.quotient_basis(&i1);
    let reps: Vec<Derivation> = chain
        .iter()
        .map(|w| alg.element(&linalg::apply_columns(qb.basis(), w, dim)))
        .collect();
    let dn1 = reps[0].clone();
    lower[n - 2] = dn1.clone();
    let rb = RBasis::new(lower.iter().map(|d| d.coeffs().to_vec()).collect())
        .ok_or_else(|| Error::InvariantViolation("D_1..D_{n-1} are R-dependent".into()))?;
    let mut cs = Vec::with_capacity(reps.len());
    for r in &reps {
        let c = rb
            .coords(r.coeffs())
            .ok_or_else(|| Error::InvariantViolation(format!("{} is not in R(I + D_(n-1))", r)))?;
        cs.push(c[n - 2].clone());
    }
    let b = cs[1].clone();
    // Chain elements must be b^k/k! D_{n-1} modulo I and constants.
    let mut shape = true;
    for (k, c) in cs.iter().enumerate() {
        let expect = b.pow(k as u32).scale(&scalar::factorial(k as u32).recip());
        shape &= (c - &expect).constant_value().is_some();
    }
    if !shape {
        return ctx.oos(
            "constants_field_is_Q",
            "Jordan chain coefficients are not powers of b over Q",
        );
    }
    let extra = vec![Check {
        name: "jordan_chain_shape".into(),
        passed: shape,
    }];
    if ideal.dim() == n - 2 || alg.centralizer(&ideal) != ideal {
        lower.push(dn);
        return finish(ctx, VerdictCase::TypeL1, lower, None, b, extra);
    }
    two_slices(ctx, &ideal, zb, dn1, dn, extra)
}

/// Slices `a`, `b` with `S(a) = 1, T(a) = 0, S(b) = 0, T(b) = 1` built from
/// the coefficient ring of `I`: a slice `a0` of `S`, then a slice `b` of `T`
/// among projections onto `ker S`, then `a` = projection of `a0` onto
/// `ker T`.
fn two_slices(
    ctx: &Ctx<'_>,
    ideal: &Subspace,
    zb: &[Derivation],
    s: Derivation,
    t: Derivation,
    extra: Vec<Check>,
) -> Result<ClassificationVerdict> {
    let mut adapted = zb.to_vec();
    adapted.push(s.clone());
    adapted.push(t.clone());
    if SpannedLieAlgebra::rank_of(&adapted) != ctx.rank {
        return Err(Error::InvariantViolation("I, S, T do not have full rank".into()));
    }
    let gens = ctx.coefficient_ring(ideal, zb)?;
    let a0 = find_slice(&s, &gens, DEFAULT_CAP)?.slice;
    let mut proj = Vec::new();
    for g in &gens {
        let p = kernel_projection(&s, &a0, g, DEFAULT_CAP)?;
        if p.constant_value().is_none() && !proj.contains(&p) {
            proj.push(p);
        }
    }
    let b = find_slice(&t, &proj, DEFAULT_CAP)?.slice;
    if !s.apply(&b)?.is_zero() {
        return ctx.oos("two_commuting_slices", format!("S({}) is not zero", b));
    }
    let a = kernel_projection(&t, &b, &a0, DEFAULT_CAP)?;
    finish(ctx, VerdictCase::TypeL2, adapted, Some(a), b, extra)
}

/// Applies the correction `D_{n-1} -> D_{n-1} - sum u_i D_i` making
/// `[D_n, D_{n-1}] = 0`, verifies the slice equations and fills in
/// coordinates.
fn finish(
    ctx: &Ctx<'_>,
    case: VerdictCase,
    mut adapted: Vec<Derivation>,
    a: Option<RatFunc>,
    b: RatFunc,
    mut checks: Vec<Check>,
) -> Result<ClassificationVerdict> {
    let n = ctx.rank;
    if adapted.len() != n {
        return Err(Error::InvariantViolation(format!(
            "adapted basis has {} elements for rank {}",
            adapted.len(),
            n
        )));
    }
    let nv = ctx.alg.num_vars();
    let br = bracket(&adapted[n - 1], &adapted[n - 2])?;
    if !br.is_zero() {
        let low = RBasis::new(adapted[..n - 2].iter().map(|d| d.coeffs().to_vec()).collect())
            .ok_or_else(|| Error::InvariantViolation("center basis is R-dependent".into()))?;
        let h = low.coords(br.coeffs()).ok_or_else(|| {
            Error::InvariantViolation("[D_n, D_(n-1)] is not in R times the center".into())
        })?;
        let dn = adapted[n - 1].clone();
        let mut vals = vec![RatFunc::zero(nv); SLICE_VARS];
        vals[V] = b.clone();
        if let Some(a) = &a {
            vals[U] = a.clone();
        }
        let mut correction = Derivation::zero(nv);
        for (i, hi) in h.iter().enumerate() {
            if hi.is_zero() {
                continue;
            }
            let hp = match &a {
                Some(a) => decompose_in_slices(hi, &[(&adapted[n - 2], a, U), (&dn, &b, V)], DEFAULT_CAP)?,
                None => decompose_in_slices(hi, &[(&dn, &b, V)], DEFAULT_CAP)?,
            };
            let Some(hp) = hp else {
                return ctx.oos(
                    "constants_field_is_Q",
                    format!("[D_n, D_(n-1)] coefficient {} is not a polynomial in the slices", hi),
                );
            };
            let ui = RatFunc::eval_poly(&hp.integrate(V), &vals, nv);
            correction = &correction + &adapted[i].mul_fn(&ui);
        }
        adapted[n - 2] = &adapted[n - 2] - &correction;
    }

    let mut commute = true;
    for i in 0..n {
        for j in i + 1..n {
            commute &= bracket(&adapted[i], &adapted[j])?.is_zero();
        }
    }
    checks.push(Check {
        name: "adapted_basis_rank".into(),
        passed: SpannedLieAlgebra::rank_of(&adapted) == n,
    });
    checks.push(Check {
        name: "adapted_basis_commutes".into(),
        passed: commute,
    });
    let is = |d: &Derivation, f: &RatFunc, v: i64| -> Result<bool> {
        Ok(d.apply(f)? == RatFunc::constant(scalar::int(v), nv))
    };
    let mut slice_ok = is(&adapted[n - 1], &b, 1)?;
    for d in &adapted[..n - 1] {
        slice_ok &= is(d, &b, 0)?;
    }
    if let Some(a) = &a {
        slice_ok &= is(&adapted[n - 2], a, 1)? && is(&adapted[n - 1], a, 0)?;
        for d in &adapted[..n - 2] {
            slice_ok &= is(d, a, 0)?;
        }
    }
    checks.push(Check {
        name: "slice_equations".into(),
        passed: slice_ok,
    });
    let mut v = ClassificationVerdict {
        case,
        rank: n,
        dim: ctx.dim,
        center_rank: ctx.center_rank,
        adapted,
        a,
        b: Some(b),
        coordinates: Vec::new(),
        checks: Vec::new(),
    };
    fill_coordinates(ctx, &mut v, checks)
}
