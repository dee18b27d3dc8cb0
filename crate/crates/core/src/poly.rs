//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors. Exponent vectors
//! compare lexicographically with `x1` most significant, which is exactly the
//! lex order x1 > x2 > ... > xn, so the last entry is the leading term and two
//! equal polynomials always have identical storage.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(Scalar::one(), num_vars)
    }

    pub fn constant(c: Scalar, num_vars: usize) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The variable with zero-based index `i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(Scalar::one(), e)
    }

    pub fn monomial(c: Scalar, exps: Monomial) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), num_vars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient under lex; zero for the zero polynomial.
    pub fn lc(&self) -> Scalar {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(Scalar::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Value at a point of K^n.
    pub fn eval(&self, pt: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Highest-index variable that occurs, if any.
    pub fn last_var(&self) -> Option<usize> {
        (0..self.num_vars).rev().find(|&v| self.uses_var(v))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: RingOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(match op {
            RingOp::Add => self + other,
            RingOp::Sub => self - other,
            RingOp::Mul => self * other,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the zero-based variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                num_vars: self.num_vars,
            });
        }
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.terms.insert(e2, c * scalar::int(e[i] as i64));
        }
        Ok(out)
    }

    /// Antiderivative in variable `i` with zero constant of integration.
    pub fn integrate(&self, i: usize) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            out.terms.insert(e2, c / scalar::int(e[i] as i64 + 1));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Scalar::one() / c)));
        }
        let (dl, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = Self::zero(self.num_vars);
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if !re.iter().zip(&dl).all(|(a, b)| a >= b) {
                return None;
            }
            let qe: Monomial = re.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            let t = MultiPoly::monomial(qc, qe);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        self.scale(&(Scalar::one() / lc))
    }

    /// Substitutes variable `i` of this polynomial by variable `map[i]` of a
    /// ring with `num_vars` variables.
    pub fn rename_vars(&self, map: &[usize], num_vars: usize) -> Self {
        Self::from_terms(
            num_vars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = vec![0; num_vars];
                for (i, &k) in e.iter().enumerate() {
                    e2[map[i]] += k;
                }
                (e2, c.clone())
            }),
        )
    }

    /// Views the polynomial as univariate in `v`: entry `k` is the coefficient
    /// of `x_v^k`, a polynomial not involving `x_v`.
    pub fn to_univariate(&self, v: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.num_vars); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[MultiPoly], v: usize, num_vars: usize) -> Self {
        let mut out = Self::zero(num_vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, s) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                out.add_term(e2, s.clone());
            }
        }
        out
    }

    /// Componentwise minimum of the exponents over all terms.
    pub fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.num_vars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    fn fmt_monomial(e: &[u32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Scalar::zero();
            let mag = scalar::abs(c);
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                write!(f, "{}", scalar::format(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", scalar::format(&mag))?;
                }
                Self::fmt_monomial(e, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.num_vars, self)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.num_vars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Scalar::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i - 1)
    }

    fn c(n: usize, v: i64) -> MultiPoly {
        MultiPoly::constant(int(v), n)
    }

    #[test]
    fn ring_examples() {
        let n = 3;
        let a = &x(n, 1) + &c(n, 1);
        let b = &x(n, 1) - &c(n, 1);
        assert_eq!(a.arith(&b, RingOp::Add).unwrap(), x(n, 1).scale(&int(2)));
        assert_eq!(
            x(n, 1).arith(&x(n, 2), RingOp::Mul).unwrap(),
            MultiPoly::monomial(int(1), vec![1, 1, 0])
        );
        let p = &x(n, 2) + &x(n, 3);
        let q = &x(n, 2) - &x(n, 3);
        let expect = MultiPoly::from_terms(n, [(vec![0, 2, 0], int(1)), (vec![0, 0, 2], int(-1))]);
        assert_eq!(p.arith(&q, RingOp::Mul).unwrap(), expect);
    }

    #[test]
    fn mismatched_vars() {
        let err = x(2, 1).arith(&x(3, 1), RingOp::Add).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn partial_examples() {
        let n = 3;
        assert_eq!(x(n, 3).pow(2).partial(2).unwrap(), x(n, 3).scale(&int(2)));
        assert!((&x(n, 1) * &x(n, 2)).partial(2).unwrap().is_zero());
        let p = &(&x(n, 2).pow(2) * &x(n, 3)) + &x(n, 3);
        assert_eq!(p.partial(1).unwrap(), (&x(n, 2) * &x(n, 3)).scale(&int(2)));
        assert!(matches!(p.partial(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn exact_division() {
        let n = 2;
        let p = &(&x(n, 1) + &x(n, 2)) * &(&x(n, 1) - &x(n, 2));
        let q = p.div_exact(&(&x(n, 1) + &x(n, 2))).unwrap();
        assert_eq!(q, &x(n, 1) - &x(n, 2));
        assert!(p.div_exact(&x(n, 1)).is_none());
    }

    #[test]
    fn display_is_lex_descending() {
        let n = 3;
        let p = &(&x(n, 3).pow(2) - &x(n, 1)) + &c(n, 1);
        assert_eq!(p.to_string(), "-x1 + x3^2 + 1");
        let q = x(n, 2).pow(2).scale(&scalar::frac(1, 2));
        assert_eq!(q.to_string(), "1/2*x2^2");
    }

    #[test]
    fn integrate_inverts_partial() {
        let n = 2;
        let p = &(&x(n, 1) * &x(n, 2).pow(3)) + &c(n, 5);
        assert_eq!(p.integrate(1).partial(1).unwrap(), p);
    }

    #[test]
    fn univariate_view_roundtrip() {
        let n = 3;
        let p = &(&x(n, 1) * &x(n, 3).pow(2)) + &x(n, 2);
        let u = p.to_univariate(2);
        assert_eq!(u.len(), 3);
        assert_eq!(MultiPoly::from_univariate(&u, 2, n), p);
    }
}
