use std::fmt;

use crate::error::{Error, Result};
use crate::gcd::gcd;
use crate::poly::{MultiPoly, RingRef};

/// Reduced quotient `num / den` with a monic (graded-lex) denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        num.ensure_same_ring(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let one = MultiPoly::one(den.ring());
            return Ok(RationalFunction { num, den: one });
        }
        let g = gcd(&num, &den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_divide(&g)?, den.exact_divide(&g)?)
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.ring());
        RationalFunction { num: p, den }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::from_poly(MultiPoly::one(ring))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn ring(&self) -> &RingRef {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn scale(&self, p: &MultiPoly) -> Result<Self> {
        Self::new(&self.num * p, self.den.clone())
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let k = e.unsigned_abs() as u32;
        if e >= 0 {
            Self::new(self.num.pow(k), self.den.pow(k))
        } else {
            Self::new(self.den.pow(k), self.num.pow(k))
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MultiPoly, strict: bool| {
            let text = p.to_string();
            if p.num_terms() > 1 || (strict && text.contains('*')) {
                format!("({})", text)
            } else {
                text
            }
        };
        write!(f, "{}/{}", wrap(&self.num, false), wrap(&self.den, true))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
