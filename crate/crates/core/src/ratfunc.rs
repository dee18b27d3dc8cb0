//! Elements of the fraction field K(x1..xn), kept in lowest terms with a
//! monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gcd::gcd;
use crate::poly::MultiPoly;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFunc {
    pub fn zero(num_vars: usize) -> Self {
        RatFunc {
            num: MultiPoly::zero(num_vars),
            den: MultiPoly::one(num_vars),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::from_poly(MultiPoly::one(num_vars))
    }

    pub fn constant(c: Scalar, num_vars: usize) -> Self {
        Self::from_poly(MultiPoly::constant(c, num_vars))
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(num_vars, i))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.num_vars();
        RatFunc {
            num: p,
            den: MultiPoly::one(n),
        }
    }

    /// Reduces `num / den` to canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.num_vars() != den.num_vars() {
            return Err(Error::DimensionMismatch {
                left: num.num_vars(),
                right: den.num_vars(),
            });
        }
        let n = num.num_vars();
        if num.is_zero() {
            return Ok(Self::zero(n));
        }
        if let Some(c) = den.constant_value() {
            return Ok(Self::from_poly(num.scale(&(Scalar::one() / c))));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Assumes `num` and `den` are already coprime; only normalizes the
    /// denominator to be monic.
    fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.lc();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = Scalar::one() / lc;
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn num_vars(&self) -> usize {
        self.num.num_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    pub fn arith(&self, other: &Self, op: FieldOp) -> Result<Self> {
        if self.num_vars() != other.num_vars() {
            return Err(Error::DimensionMismatch {
                left: self.num_vars(),
                right: other.num_vars(),
            });
        }
        Ok(match op {
            FieldOp::Add => self + other,
            FieldOp::Sub => self - other,
            FieldOp::Mul => self * other,
            FieldOp::Div => self.checked_div(other)?,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn partial(&self, i: usize) -> Result<Self> {
        let dn = self.num.partial(i)?;
        if self.den.is_one() {
            return Ok(Self::from_poly(dn));
        }
        let dd = self.den.partial(i)?;
        if dd.is_zero() {
            return Self::new(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::new(top, self.den.pow(2))
    }

    /// Evaluates `p(vals[0], vals[1], ...)`; `p` has `vals.len()` variables.
    pub fn eval_poly(p: &MultiPoly, vals: &[RatFunc], num_vars: usize) -> RatFunc {
        assert_eq!(p.num_vars(), vals.len());
        let mut powers: Vec<Vec<RatFunc>> = vals
            .iter()
            .map(|_| vec![RatFunc::one(num_vars)])
            .collect();
        let mut acc = RatFunc::zero(num_vars);
        for (e, c) in p.terms() {
            let mut t = RatFunc::constant(c.clone(), num_vars);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &vals[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.nterms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple_den = self.den.is_monomial()
            && self.den.lc().is_one()
            && self.den.leading().unwrap().0.iter().filter(|&&k| k > 0).count() == 1;
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        let g = gcd(&self.den, &rhs.den);
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        let den = &(&b * &d) * &g;
        RatFunc::new(num, den).expect("nonzero den")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        let n = self.num_vars();
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(n);
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel so the product is already in lowest terms.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        RatFunc::from_coprime(&a * &c, &b * &d)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x(n: usize, i: usize) -> RatFunc {
        RatFunc::var(n, i - 1)
    }

    #[test]
    fn field_examples() {
        let n = 3;
        let one = RatFunc::one(n);
        let inv = one.arith(&x(n, 2), FieldOp::Div).unwrap();
        assert!(inv.arith(&x(n, 2), FieldOp::Mul).unwrap().is_one());

        let a = &x(n, 1) / &x(n, 2);
        let b = &(-&x(n, 1)) / &x(n, 2);
        assert!(a.arith(&b, FieldOp::Add).unwrap().is_zero());

        let s = &(&one / &x(n, 2)) + &(&one / &x(n, 3));
        let expect = RatFunc::new(
            (&x(n, 2) + &x(n, 3)).numer().clone(),
            (&x(n, 2) * &x(n, 3)).numer().clone(),
        )
        .unwrap();
        assert_eq!(s, expect);
        assert_eq!(s.to_string(), "(x2 + x3)/(x2*x3)");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let n = 2;
        assert_eq!(
            x(n, 1).arith(&RatFunc::zero(n), FieldOp::Div),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            RatFunc::new(MultiPoly::one(n), MultiPoly::zero(n)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn denominator_is_monic_and_reduced() {
        let n = 2;
        let num = (&x(n, 1) * &x(n, 2)).numer().scale(&int(4));
        let den = x(n, 2).numer().scale(&int(-2));
        let f = RatFunc::new(num, den).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f, x(n, 1).scale(&int(-2)));
    }

    #[test]
    fn quotient_rule() {
        let n = 2;
        // d/dx1 (x1 / x2) = 1/x2 ; d/dx2 (x1/x2) = -x1/x2^2
        let f = &x(n, 1) / &x(n, 2);
        assert_eq!(f.partial(0).unwrap(), &RatFunc::one(n) / &x(n, 2));
        assert_eq!(f.partial(1).unwrap(), &(-&x(n, 1)) / &x(n, 2).pow(2));
    }
}
