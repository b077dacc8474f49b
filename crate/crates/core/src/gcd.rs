//! Multivariate GCD by primitive pseudo-remainder sequences.
//!
//! The main variable is the last registry variable occurring in either
//! input; contents are computed recursively in the remaining variables.

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::GaussRational;

/// Monic (graded-lex) greatest common divisor.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    f.ensure_same_ring(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(gcd_rec(f, g).monic())
}

/// GCD of a list; zeros are skipped. Errors if every entry is zero.
pub fn gcd_many<'a, I>(polys: I) -> Result<MultiPoly>
where
    I: IntoIterator<Item = &'a MultiPoly>,
{
    let mut acc: Option<MultiPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(a) => gcd(&a, p)?,
        });
        if acc.as_ref().is_some_and(MultiPoly::is_constant) {
            break;
        }
    }
    acc.ok_or(Error::BothZero)
}

pub fn lcm(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero(f.ring()));
    }
    let d = gcd(f, g)?;
    Ok((f * &g.exact_divide(&d)?).monic())
}

fn gcd_rec(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one(f.ring());
    }
    if f.num_terms() == 1 && g.num_terms() == 1 {
        let (a, _) = f.leading_term().expect("nonzero");
        let (b, _) = g.leading_term().expect("nonzero");
        let e: Vec<u32> = a
            .exponents()
            .iter()
            .zip(b.exponents())
            .map(|(x, y)| *x.min(y))
            .collect();
        return MultiPoly::from_terms(f.ring(), [(Monomial::from_exponents(e), GaussRational::one())]);
    }
    let (small, big) = if f.total_degree() <= g.total_degree() { (f, g) } else { (g, f) };
    if big.exact_divide(small).is_ok() {
        return small.monic();
    }
    let mut occurring = f.occurring_vars();
    occurring.extend(g.occurring_vars());
    let v = *occurring.iter().max().expect("nonconstant");

    if f.degree_in(v) == 0 {
        return gcd_rec(f, &content_in(g, v));
    }
    if g.degree_in(v) == 0 {
        return gcd_rec(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let pf = f.exact_divide(&cf).expect("content divides");
    let pg = g.exact_divide(&cg).expect("content divides");
    let c = gcd_rec(&cf, &cg);
    let h = primitive_prs(pf, pg, v);
    (&c * &h).monic()
}

/// Monic gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub(crate) fn content_in(f: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc: Option<MultiPoly> = None;
    for c in f.coefficients_in(v).iter().filter(|c| !c.is_zero()) {
        acc = Some(match acc {
            None => c.monic(),
            Some(a) => gcd_rec(&a, c),
        });
        if acc.as_ref().is_some_and(MultiPoly::is_constant) {
            return MultiPoly::one(f.ring());
        }
    }
    acc.unwrap_or_else(|| MultiPoly::zero(f.ring()))
}

pub(crate) fn primitive_part_in(f: &MultiPoly, v: usize) -> MultiPoly {
    if f.is_zero() {
        return f.clone();
    }
    f.exact_divide(&content_in(f, v)).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` with respect to variable `v`.
pub(crate) fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let n = b.degree_in(v);
    let lb = b.leading_coeff_in(v);
    let ring = a.ring();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= n {
        let d = r.degree_in(v) - n;
        let lr = r.leading_coeff_in(v);
        let shift = MultiPoly::from_terms(
            ring,
            [(Monomial::var(ring.nvars(), v, d), GaussRational::one())],
        );
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v).monic();
        }
        if r.degree_in(v) == 0 {
            return MultiPoly::one(a.ring());
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

/// Product of the distinct irreducible factors of `f`, monic.
pub fn squarefree_part(f: &MultiPoly) -> Result<MultiPoly> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.is_constant() {
        return Ok(MultiPoly::one(f.ring()));
    }
    let partials: Vec<MultiPoly> = (0..f.ring().nvars()).map(|k| f.partial(k)).collect();
    let mut g = f.monic();
    for p in partials.iter().filter(|p| !p.is_zero()) {
        g = gcd(&g, p)?;
        if g.is_constant() {
            break;
        }
    }
    Ok(f.exact_divide(&g)?.monic())
}

/// Whether `f` has no repeated factor.
pub fn is_squarefree(f: &MultiPoly) -> Result<bool> {
    Ok(squarefree_part(f)? == f.monic())
}
