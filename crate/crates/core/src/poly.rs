//! Canonical sparse multivariate polynomials over Q or Q(i).
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic with the first registry variable most significant. The map
//! never stores a zero coefficient, so structural equality is value equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, GaussRational};

/// Ordered list of variable names plus the coefficient field.
///
/// Frozen once built; polynomials share it through [`RingRef`].
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    field: Field,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<I, S>(vars: I, field: Field) -> Result<RingRef>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (k, v) in vars.iter().enumerate() {
            let mut chars = v.chars();
            let ok = chars
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidRing(format!("`{}` is not a valid variable name", v)));
            }
            if vars[..k].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{}`", v)));
            }
            if field == Field::Gaussian && v == "i" {
                return Err(Error::InvalidRing(
                    "`i` is reserved for the imaginary unit over Qi".into(),
                ));
            }
        }
        Ok(Arc::new(Ring { vars, field }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, idx: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[idx] = power;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All monomials in `n` variables of total degree exactly `d`, ascending.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if idx + 1 == n {
                cur[idx] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[idx] = e;
                rec(n, idx + 1, left - e, cur, out);
            }
            cur[idx] = 0;
        }
        if n == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(n, 0, d, &mut vec![0; n], &mut out);
        out.sort();
        out
    }

    /// All monomials of total degree at most `d`, ascending.
    pub fn all_up_to_degree(n: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Self::all_of_degree(n, k)).collect()
    }

    pub fn render(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| {
                if e == 1 {
                    vars[k].clone()
                } else {
                    format!("{}^{}", vars[k], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in a fixed ring.
#[derive(Clone)]
pub struct MultiPoly {
    ring: RingRef,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ring: &RingRef) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, GaussRational::one())
    }

    /// Panics if `c` is not in the ring's field.
    pub fn constant(ring: &RingRef, c: GaussRational) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.nvars()), c)])
    }

    pub fn from_int(ring: &RingRef, n: i64) -> Self {
        Self::constant(ring, GaussRational::from_int(n))
    }

    /// Checked constant: errors instead of panicking on a field mismatch.
    pub fn try_constant(ring: &RingRef, c: GaussRational) -> Result<Self> {
        if !ring.field().contains(&c) {
            return Err(Error::FieldMismatch(format!(
                "{} is not in {}",
                c,
                ring.field()
            )));
        }
        Ok(Self::constant(ring, c))
    }

    pub fn var_at(ring: &RingRef, idx: usize) -> Self {
        Self::from_terms(ring, [(Monomial::var(ring.nvars(), idx, 1), GaussRational::one())])
    }

    pub fn var(ring: &RingRef, name: &str) -> Result<Self> {
        Ok(Self::var_at(ring, ring.var_index(name)?))
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    /// Panics on a wrong exponent length or a coefficient outside the field.
    pub fn from_terms<I>(ring: &RingRef, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussRational)>,
    {
        let mut p = MultiPoly::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.nvars(), "exponent vector length");
            assert!(
                ring.field().contains(&c),
                "coefficient {} outside field {}",
                c,
                ring.field()
            );
            p.add_term(m, &c);
        }
        p
    }

    /// Univariate polynomial in variable `idx` from low-to-high integer coefficients.
    pub fn univariate_from_ints(ring: &RingRef, idx: usize, coeffs: &[i64]) -> Self {
        let n = ring.nvars();
        Self::from_terms(
            ring,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (Monomial::var(n, idx, k as u32), GaussRational::from_int(c))),
        )
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<GaussRational> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one(self.ring.nvars())))
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn occurring_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&k| self.terms.keys().any(|m| m.0[k] > 0))
            .collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> GaussRational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Scaled to leading coefficient 1 (graded-lex); zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussRational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &MultiPoly) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials from different rings"
        );
    }

    /// Checked ring compatibility for public entry points.
    pub fn ensure_same_ring(&self, other: &MultiPoly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = MultiPoly::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f / g` when `g` divides `f` exactly.
    pub fn exact_divide(&self, g: &MultiPoly) -> Result<MultiPoly> {
        self.ensure_same_ring(g)?;
        let (lm, lc) = g.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(Error::NotDivisible);
            }
            let t = m.div(lm);
            let qc = c * &lc_inv;
            rem = &rem - &g.mul_monomial(&t, &qc);
            quot.add_term(t, &qc);
        }
        Ok(quot)
    }

    pub fn divides(&self, f: &MultiPoly) -> bool {
        !self.is_zero() && f.exact_divide(self).is_ok()
    }

    pub fn partial(&self, idx: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[idx] -= 1;
            out.add_term(dm, &(c * &GaussRational::from_int(e as i64)));
        }
        out
    }

    /// Formal partial derivative by variable name.
    pub fn partial_derivative(&self, var: &str) -> Result<MultiPoly> {
        Ok(self.partial(self.ring.var_index(var)?))
    }

    /// Coefficients with respect to variable `idx`, lowest power first.
    pub fn coefficients_in(&self, idx: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![MultiPoly::zero(&self.ring); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            let mut rest = m.clone();
            rest.0[idx] = 0;
            out[e].add_term(rest, c);
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(ring: &RingRef, idx: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(ring.nvars(), idx, k as u32);
            for (m, x) in &c.terms {
                out.add_term(m.mul(&shift), x);
            }
        }
        out
    }

    /// Leading coefficient with respect to variable `idx`.
    pub fn leading_coeff_in(&self, idx: usize) -> MultiPoly {
        self.coefficients_in(idx)
            .pop()
            .unwrap_or_else(|| MultiPoly::zero(&self.ring))
    }

    /// Replaces variable `idx` by `value` (a polynomial of the same ring).
    pub fn substitute_at(&self, idx: usize, value: &MultiPoly) -> MultiPoly {
        self.check_ring(value);
        let coeffs = self.coefficients_in(idx);
        // Horner
        let mut acc = MultiPoly::zero(&self.ring);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Result<MultiPoly> {
        let idx = self.ring.var_index(var)?;
        self.ensure_same_ring(value)?;
        Ok(self.substitute_at(idx, value))
    }

    pub fn substitute_value(&self, var: &str, value: &GaussRational) -> Result<MultiPoly> {
        let idx = self.ring.var_index(var)?;
        let v = MultiPoly::try_constant(&self.ring, value.clone())?;
        Ok(self.substitute_at(idx, &v))
    }

    /// Evaluates at a full point (one value per variable).
    pub fn evaluate(&self, point: &[GaussRational]) -> GaussRational {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[k].pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Ring homomorphism sending variable `k` to `images[k]`, all in `target`.
    pub fn compose(&self, target: &RingRef, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidRing(format!(
                "expected {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        if images.iter().any(|p| !same_ring(p.ring(), target)) {
            return Err(Error::RingMismatch);
        }
        if target.field() == Field::Rational && self.ring.field() == Field::Gaussian {
            if let Some((_, c)) = self.terms.iter().find(|(_, c)| !c.is_real()) {
                return Err(Error::FieldMismatch(format!("{} is not in Q", c)));
            }
        }
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[k].pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Moves the polynomial into `target`, sending variable `k` to
    /// `var_map[k]`. Variables that occur must be mapped.
    pub fn remap(&self, target: &RingRef, var_map: &[Option<usize>]) -> Result<MultiPoly> {
        let n = target.nvars();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            if !target.field().contains(c) {
                return Err(Error::FieldMismatch(format!("{} is not in {}", c, target.field())));
            }
            let mut e = vec![0; n];
            for (k, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let to = var_map[k]
                    .ok_or_else(|| Error::UnknownVariable(self.ring.vars()[k].clone()))?;
                e[to] += x;
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Same polynomial viewed over another ring with the same variables
    /// (used to lift Q-polynomials into Q(i)).
    pub fn with_ring(&self, target: &RingRef) -> Result<MultiPoly> {
        let map: Vec<Option<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.index_of(v))
            .collect();
        self.remap(target, &map)
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Canonical text: descending graded-lex, `^` powers, explicit `*`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = render_term(m, c, self.ring.vars());
            match (k, negative) {
                (0, false) => {}
                (0, true) => out.push('-'),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

/// Returns (is_negative, magnitude text) for one term.
fn render_term(m: &Monomial, c: &GaussRational, vars: &[String]) -> (bool, String) {
    let complex = !c.re.is_zero() && !c.im.is_zero();
    let negative = if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative()
    };
    let mag = if negative { -c } else { c.clone() };
    let coef = if complex {
        format!("({})", mag)
    } else {
        mag.to_string()
    };
    if m.is_one() {
        return (negative, coef);
    }
    let mono = m.render(vars);
    if mag.is_one() {
        (negative, mono)
    } else {
        (negative, format!("{}*{}", coef, mono))
    }
}

impl<'b> Add<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'b MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }
}

impl<'b> Sub<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'b MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'b> Mul<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'b MultiPoly) -> MultiPoly {
        self.check_ring(rhs);
        let mut acc: std::collections::HashMap<Monomial, GaussRational> =
            std::collections::HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|x| *x += &prod)
                    .or_insert(prod);
            }
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-GaussRational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
