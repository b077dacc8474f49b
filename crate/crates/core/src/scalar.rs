//! Exact rational and Gaussian-rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, which already keeps the
//! denominator positive and the fraction reduced. [`GaussRational`] is
//! `re + im*i` over it and is the single coefficient type used by every
//! polynomial; the ring's [`Field`] tag decides whether nonzero `im` is legal.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = num_rational::BigRational;

/// Coefficient field of a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// The rationals.
    #[serde(rename = "Q")]
    Rational,
    /// The Gaussian rationals Q(i).
    #[serde(rename = "Qi")]
    Gaussian,
}

impl Field {
    pub fn tag(self) -> &'static str {
        match self {
            Field::Rational => "Q",
            Field::Gaussian => "Qi",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Field> {
        match tag {
            "Q" => Some(Field::Rational),
            "Qi" => Some(Field::Gaussian),
            _ => None,
        }
    }

    /// Whether `c` lies in this field.
    pub fn contains(self, c: &GaussRational) -> bool {
        self == Field::Gaussian || c.im.is_zero()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `re + im*i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    /// `a/b + (c/d) i` from machine integers; handy in tests.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussRational::new(rat(a, b), rat(c, d))
    }

    pub fn i() -> Self {
        GaussRational::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        GaussRational::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -&self.im)
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussRational::new(&self.re / &n, -&self.im / &n))
    }

    /// Both parts are integers.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    /// A rational integer (imaginary part zero, real part integral).
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Exact square root inside Q(i), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return rational_sqrt(&self.re).map(GaussRational::from_rational);
            }
            return rational_sqrt(&-&self.re)
                .map(|s| GaussRational::new(Rational::zero(), s));
        }
        // (x + yi)^2 = re + im i  =>  x^2 = (|z| + re)/2, y^2 = (|z| - re)/2
        let modulus = rational_sqrt(&self.norm())?;
        let two = rat_int(2);
        let x = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let mut y = rational_sqrt(&((&modulus - &self.re) / &two))?;
        if self.im.is_negative() {
            y = -y;
        }
        let root = GaussRational::new(x, y);
        debug_assert!(&(&root * &root) == self);
        Some(root)
    }

    /// A total order used only to make outputs deterministic
    /// (real part first, then imaginary part).
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(Rational::new(n, d))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders as the CLI grammar parses it: `3`, `-1/2`, `2*i`, `-i`, `1 + i`.
impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let imag = imag_str(&self.im.abs());
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", imag)
            } else {
                write!(f, "{}", imag)
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{} {} {}", self.re, sign, imag)
        }
    }
}

fn imag_str(abs_im: &Rational) -> String {
    if abs_im.is_one() {
        "i".to_string()
    } else {
        format!("{}*i", abs_im)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: &'a GaussRational) -> GaussRational {
                (&self).$method(rhs)
            }
        }
    };
}

impl<'b> Add<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &'b GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'b> Sub<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &'b GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'b> Mul<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &'b GaussRational) -> GaussRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRational::from_rational(&self.re * &rhs.re);
        }
        GaussRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'b> Div<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    /// Panics on division by zero, like the rational type it wraps.
    fn div(self, rhs: &'b GaussRational) -> GaussRational {
        if rhs.im.is_zero() {
            return GaussRational::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        self * &rhs.inv().expect("division by zero")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-&self.re, -&self.im)
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, rhs: &GaussRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, rhs: &GaussRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, rhs: &GaussRational) {
        *self = &*self * rhs;
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::from_int(n)
    }
}

impl From<Rational> for GaussRational {
    fn from(q: Rational) -> Self {
        GaussRational::from_rational(q)
    }
}
