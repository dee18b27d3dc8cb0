//! Derivations of K[x1..xn] with coefficients in R, viewed as vector fields.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::scalar::{self, Scalar};

/// `sum coeffs[i] * d/dx_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    coeffs: Vec<RatFunc>,
}

impl Derivation {
    pub fn new(coeffs: Vec<RatFunc>) -> Result<Self> {
        let n = coeffs.len();
        for c in &coeffs {
            if c.num_vars() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: c.num_vars(),
                });
            }
        }
        Ok(Derivation { coeffs })
    }

    pub fn from_polys(coeffs: Vec<MultiPoly>) -> Result<Self> {
        Self::new(coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn zero(n: usize) -> Self {
        Derivation {
            coeffs: vec![RatFunc::zero(n); n],
        }
    }

    /// `d/dx_{i+1}` (zero-based `i`).
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i] = RatFunc::one(n);
        d
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_polynomial)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Derivation {
            coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// R-multiple `f * self`.
    pub fn mul_fn(&self, f: &RatFunc) -> Self {
        Derivation {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    fn check_same(&self, other_vars: usize) -> Result<()> {
        if self.num_vars() != other_vars {
            return Err(Error::DimensionMismatch {
                left: self.num_vars(),
                right: other_vars,
            });
        }
        Ok(())
    }

    /// `D(p)` for a polynomial `p`.
    pub fn apply_poly(&self, p: &MultiPoly) -> RatFunc {
        let n = self.num_vars();
        let mut acc = RatFunc::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() || !p.uses_var(i) {
                continue;
            }
            let dp = RatFunc::from_poly(p.partial(i).expect("index in range"));
            acc = &acc + &(c * &dp);
        }
        acc
    }

    /// `D(f)`, using `D(a/b) = (D(a) b - a D(b)) / b^2` for fractions.
    pub fn apply(&self, f: &RatFunc) -> Result<RatFunc> {
        self.check_same(f.num_vars())?;
        let dp = self.apply_poly(f.numer());
        if f.is_polynomial() {
            return Ok(dp);
        }
        let dq = self.apply_poly(f.denom());
        let q = RatFunc::from_poly(f.denom().clone());
        let p = RatFunc::from_poly(f.numer().clone());
        if dq.is_zero() {
            return Ok(&dp / &q);
        }
        let top = &(&dp * &q) - &(&p * &dq);
        Ok(&top / &q.pow(2))
    }

    /// Coefficient `i` involves only variables `x_{i+2}..x_n` (zero-based:
    /// only indices greater than `i`) and every coefficient is a polynomial.
    pub fn is_triangular(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| {
            c.is_polynomial() && (0..=i).all(|v| !c.numer().uses_var(v))
        })
    }

    /// Sign normalization: the leading coefficient of the first nonzero
    /// component's numerator is made positive.
    pub fn sign_normalized(self) -> Self {
        let neg = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.numer().lc() < num_traits::Zero::zero())
            .unwrap_or(false);
        if neg {
            -&self
        } else {
            self
        }
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, c: &RatFunc, i: usize) -> fmt::Result {
        if c.is_polynomial() && c.numer().nterms() == 1 {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag == "1" {
                write!(f, "d{}", i + 1)
            } else {
                write!(f, "{}*d{}", mag, i + 1)
            }
        } else {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})*d{}", c, i + 1)
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            Self::fmt_term(f, first, c, i)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation[{}]({})", self.num_vars(), self)
    }
}

impl Add for &Derivation {
    type Output = Derivation;
    fn add(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.num_vars(), rhs.num_vars(), "variable count mismatch");
        Derivation {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.num_vars(), rhs.num_vars(), "variable count mismatch");
        Derivation {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// `[D1, D2]`, whose `j`-th coefficient is `D1(c2_j) - D2(c1_j)`.
pub fn bracket(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    d1.check_same(d2.num_vars())?;
    let coeffs = d1
        .coeffs
        .iter()
        .zip(&d2.coeffs)
        .map(|(c1, c2)| Ok(&d1.apply(c2)? - &d2.apply(c1)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Derivation { coeffs })
}

pub const DEFAULT_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalNilpotencyVerdict {
    /// The derivation is triangular and the generators lie in a ring on which
    /// triangular derivations are locally nilpotent.
    ProvedLocallyNilpotent,
    /// Every generator is killed after at most `depth <= cap` applications.
    NilpotentOnGeneratorsUpTo { cap: usize, depth: usize },
    /// `witness` survived `cap` applications.
    ExceededCap { witness: RatFunc },
}

/// Iterates `d` on `f` until zero; returns the chain `f, D f, ..., D^m f` of
/// nonzero iterates, or `None` if it is still nonzero after `cap` steps.
pub fn iterate_to_zero(d: &Derivation, f: &RatFunc, cap: usize) -> Result<Option<Vec<RatFunc>>> {
    let mut chain = Vec::new();
    let mut cur = f.clone();
    for _ in 0..=cap {
        if cur.is_zero() {
            return Ok(Some(chain));
        }
        let next = d.apply(&cur)?;
        chain.push(cur);
        cur = next;
    }
    Ok(None)
}

pub fn local_nilpotency(
    d: &Derivation,
    generators: &[RatFunc],
    cap: usize,
) -> Result<LocalNilpotencyVerdict> {
    for g in generators {
        d.check_same(g.num_vars())?;
    }
    // A triangular polynomial derivation lowers a weighted degree, so it is
    // locally nilpotent on K[x]; fractions whose denominators it kills behave
    // like their numerators.
    if d.is_triangular() {
        let mut ok = true;
        for g in generators {
            if !g.is_polynomial() && !d.apply_poly(g.denom()).is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(LocalNilpotencyVerdict::ProvedLocallyNilpotent);
        }
    }
    let mut depth = 0;
    for g in generators {
        match iterate_to_zero(d, g, cap)? {
            Some(chain) => depth = depth.max(chain.len()),
            None => {
                return Ok(LocalNilpotencyVerdict::ExceededCap { witness: g.clone() });
            }
        }
    }
    Ok(LocalNilpotencyVerdict::NilpotentOnGeneratorsUpTo { cap, depth })
}

/// A preslice `p` (with `D(p)` a nonzero element of `ker D`) and the slice
/// `a = p / D(p)`, which satisfies `D(a) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub preslice: RatFunc,
    pub slice: RatFunc,
}

/// Searches the `D`-iterates of the generators for a preslice.
///
/// Every generator whose iterates die within `cap` steps offers one
/// candidate: its last iterate before a nonzero kernel element. Candidates
/// whose image `D(p)` is a nonzero scalar are preferred (the slice then lies
/// in the ring itself), then deeper candidates, then earlier generators.
pub fn find_slice(d: &Derivation, generators: &[RatFunc], cap: usize) -> Result<Slice> {
    if let LocalNilpotencyVerdict::ExceededCap { witness } = local_nilpotency(d, generators, cap)? {
        return Err(Error::NotLocallyNilpotent {
            witness: witness.to_string(),
            cap,
        });
    }
    let mut best: Option<((bool, usize), RatFunc, RatFunc)> = None;
    for g in generators {
        let Some(chain) = iterate_to_zero(d, g, cap)? else {
            continue;
        };
        if chain.len() < 2 {
            continue;
        }
        let m = chain.len() - 1;
        let p = &chain[m - 1];
        let c = &chain[m];
        let key = (c.constant_value().is_some(), m - 1);
        if best.as_ref().is_none_or(|(k, _, _)| key > *k) {
            best = Some((key, p.clone(), c.clone()));
        }
    }
    let Some((_, p, c)) = best else {
        return Err(Error::NoSlice("the derivation vanishes on every generator".into()));
    };
    let slice = &p / &c;
    debug_assert!(d.apply(&slice).map(|v| v.is_one()).unwrap_or(false));
    Ok(Slice { preslice: p, slice })
}

/// Projection onto `ker D` along a slice `s` (`D(s) = 1`):
/// `sum_k (-1)^k s^k / k! * D^k(r)`.
pub fn kernel_projection(d: &Derivation, s: &RatFunc, r: &RatFunc, cap: usize) -> Result<RatFunc> {
    let chain = iterate_to_zero(d, r, cap)?.ok_or_else(|| Error::NotLocallyNilpotent {
        witness: r.to_string(),
        cap,
    })?;
    let n = r.num_vars();
    let mut acc = RatFunc::zero(n);
    let mut s_pow = RatFunc::one(n);
    for (k, term) in chain.iter().enumerate() {
        let mut coef = Scalar::from_integer(1.into()) / scalar::factorial(k as u32);
        if k % 2 == 1 {
            coef = -coef;
        }
        acc = &acc + &(&s_pow * term).scale(&coef);
        s_pow = &s_pow * s;
    }
    Ok(acc)
}
