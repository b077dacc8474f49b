//! Buchberger's algorithm with the coprime-leading-term and chain criteria.
//!
//! Polynomials are re-keyed internally so that the plain lexicographic order
//! on `Vec<u32>` keys *is* the requested monomial order: graded-lex keys are
//! `[total_degree, e_1, .., e_n]`, lex keys are `[e_1, .., e_n]`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{same_ring, Monomial, MultiPoly, RingRef};
use crate::scalar::GaussRational;

pub const DEFAULT_DEGREE_CAP: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    GradedLex,
    Lex,
}

type Key = Vec<u32>;

#[derive(Clone, Copy)]
struct Encoding {
    order: MonomialOrder,
}

impl Encoding {
    fn key(&self, m: &Monomial) -> Key {
        match self.order {
            MonomialOrder::Lex => m.exponents().to_vec(),
            MonomialOrder::GradedLex => {
                let mut k = Vec::with_capacity(m.exponents().len() + 1);
                k.push(m.degree());
                k.extend_from_slice(m.exponents());
                k
            }
        }
    }

    fn exponents<'a>(&self, k: &'a Key) -> &'a [u32] {
        match self.order {
            MonomialOrder::Lex => k,
            MonomialOrder::GradedLex => &k[1..],
        }
    }

    fn monomial(&self, k: &Key) -> Monomial {
        Monomial::from_exponents(self.exponents(k).to_vec())
    }

    fn degree(&self, k: &Key) -> u32 {
        match self.order {
            MonomialOrder::Lex => k.iter().sum(),
            MonomialOrder::GradedLex => k[0],
        }
    }

    fn divides(&self, a: &Key, b: &Key) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    fn mul(&self, a: &Key, b: &Key) -> Key {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn div(&self, a: &Key, b: &Key) -> Key {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn lcm(&self, a: &Key, b: &Key) -> Key {
        let e: Vec<u32> = self
            .exponents(a)
            .iter()
            .zip(self.exponents(b))
            .map(|(x, y)| *x.max(y))
            .collect();
        self.key(&Monomial::from_exponents(e))
    }

    fn coprime(&self, a: &Key, b: &Key) -> bool {
        self.exponents(a)
            .iter()
            .zip(self.exponents(b))
            .all(|(x, y)| *x == 0 || *y == 0)
    }
}

#[derive(Clone)]
struct OPoly {
    terms: BTreeMap<Key, GaussRational>,
}

impl OPoly {
    fn from_poly(enc: &Encoding, p: &MultiPoly) -> Self {
        OPoly {
            terms: p.terms().map(|(m, c)| (enc.key(m), c.clone())).collect(),
        }
    }

    fn to_poly(&self, enc: &Encoding, ring: &RingRef) -> MultiPoly {
        MultiPoly::from_terms(ring, self.terms.iter().map(|(k, c)| (enc.monomial(k), c.clone())))
    }

    fn lead(&self) -> &Key {
        self.terms.keys().next_back().expect("nonzero")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn degree(&self, enc: &Encoding) -> u32 {
        self.terms.keys().map(|k| enc.degree(k)).max().unwrap_or(0)
    }

    fn monic(mut self) -> Self {
        if let Some((_, c)) = self.terms.iter().next_back() {
            if !c.is_one() {
                let inv = c.inv().expect("nonzero");
                for v in self.terms.values_mut() {
                    *v = &*v * &inv;
                }
            }
        }
        self
    }

    /// `self -= c * x^shift * g`, skipping `g`'s leading term when `skip_lead`.
    fn sub_scaled(&mut self, enc: &Encoding, c: &GaussRational, shift: &Key, g: &OPoly, skip_lead: bool) {
        let skip = usize::from(skip_lead);
        for (gk, gc) in g.terms.iter().rev().skip(skip) {
            let key = enc.mul(shift, gk);
            let delta = c * gc;
            use std::collections::btree_map::Entry;
            match self.terms.entry(key) {
                Entry::Vacant(v) => {
                    v.insert(-delta);
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() -= &delta;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }
}

/// Full normal form of `p` modulo monic `basis`.
fn normal_form(enc: &Encoding, mut p: OPoly, basis: &[OPoly]) -> OPoly {
    let mut rem = BTreeMap::new();
    while let Some((k, c)) = p.terms.pop_last() {
        match basis.iter().find(|g| enc.divides(g.lead(), &k)) {
            Some(g) => {
                let shift = enc.div(&k, g.lead());
                p.sub_scaled(enc, &c, &shift, g, true);
            }
            None => {
                rem.insert(k, c);
            }
        }
    }
    OPoly { terms: rem }
}

fn s_polynomial(enc: &Encoding, f: &OPoly, g: &OPoly) -> OPoly {
    let l = enc.lcm(f.lead(), g.lead());
    let sf = enc.div(&l, f.lead());
    let sg = enc.div(&l, g.lead());
    let mut s = OPoly {
        terms: BTreeMap::new(),
    };
    let one = GaussRational::one();
    s.sub_scaled(enc, &-one.clone(), &sf, f, true);
    s.sub_scaled(enc, &one, &sg, g, true);
    s
}

/// Reduced Gröbner basis: monic elements, sorted by descending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingRef,
    order: MonomialOrder,
    basis: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    /// Leading monomial of each element under the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        let enc = Encoding { order: self.order };
        self.basis
            .iter()
            .map(|g| enc.monomial(OPoly::from_poly(&enc, g).lead()))
            .collect()
    }

    pub fn reduce(&self, p: &MultiPoly) -> Result<MultiPoly> {
        reduce(p, self)
    }

    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Zero-dimensional iff every variable has a pure power among the
    /// leading monomials.
    pub fn is_zero_dimensional(&self) -> bool {
        let leads = self.leading_monomials();
        (0..self.ring.nvars()).all(|v| {
            leads.iter().any(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .all(|(k, &e)| if k == v { e > 0 } else { e == 0 })
            })
        })
    }
}

pub fn buchberger(gens: &[MultiPoly], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_cap(gens, order, DEFAULT_DEGREE_CAP)
}

/// Buchberger with "normal" pair selection (smallest lcm degree first, ties
/// by creation order). Errors once any intermediate total degree exceeds
/// `degree_cap`.
pub fn buchberger_with_cap(
    gens: &[MultiPoly],
    order: MonomialOrder,
    degree_cap: u32,
) -> Result<GroebnerBasis> {
    let ring = gens.first().ok_or(Error::EmptyInput)?.ring().clone();
    if gens.iter().any(|g| !same_ring(g.ring(), &ring)) {
        return Err(Error::RingMismatch);
    }
    let enc = Encoding { order };
    let check = |p: &OPoly| -> Result<()> {
        let d = p.degree(&enc);
        if d > degree_cap {
            Err(Error::DegreeBudgetExceeded {
                cap: degree_cap,
                reached: d,
            })
        } else {
            Ok(())
        }
    };

    let mut polys: Vec<OPoly> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let p = OPoly::from_poly(&enc, g);
        check(&p)?;
        let r = normal_form(&enc, p, &polys);
        if !r.is_zero() {
            polys.push(r.monic());
        }
    }
    if polys.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut pending: Vec<(usize, usize)> = Vec::new();
    for j in 0..polys.len() {
        for i in 0..j {
            pending.push((i, j));
        }
    }
    let unit = |ring: &RingRef| GroebnerBasis {
        ring: ring.clone(),
        order,
        basis: vec![MultiPoly::one(ring)],
    };
    if polys.iter().any(|p| enc.degree(p.lead()) == 0) {
        return Ok(unit(&ring));
    }

    let mut pending_set: HashSet<(usize, usize)> = pending.iter().copied().collect();
    while !pending.is_empty() {
        let (best, _) = pending
            .iter()
            .enumerate()
            .min_by_key(|(idx, &(i, j))| (enc.degree(&enc.lcm(polys[i].lead(), polys[j].lead())), *idx))
            .expect("nonempty");
        let (i, j) = pending.remove(best);
        pending_set.remove(&(i, j));

        if enc.coprime(polys[i].lead(), polys[j].lead()) {
            continue;
        }
        let l = enc.lcm(polys[i].lead(), polys[j].lead());
        let chain = (0..polys.len()).any(|k| {
            k != i
                && k != j
                && enc.divides(polys[k].lead(), &l)
                && !pending_set.contains(&(i.min(k), i.max(k)))
                && !pending_set.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&enc, &polys[i], &polys[j]);
        check(&s)?;
        let r = normal_form(&enc, s, &polys);
        if r.is_zero() {
            continue;
        }
        check(&r)?;
        let r = r.monic();
        if enc.degree(r.lead()) == 0 {
            return Ok(unit(&ring));
        }
        let new = polys.len();
        polys.push(r);
        for k in 0..new {
            pending.push((k, new));
            pending_set.insert((k, new));
        }
    }

    // minimise, then interreduce
    let mut keep: Vec<OPoly> = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        let redundant = polys.iter().enumerate().any(|(m, q)| {
            m != k && enc.divides(q.lead(), p.lead()) && (q.lead() != p.lead() || m < k)
        });
        if !redundant {
            keep.push(p.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<OPoly> = keep
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, q)| q.clone())
            .collect();
        let mut p = keep[k].clone();
        let (lead, lc) = p.terms.pop_last().expect("nonzero");
        let mut tail = normal_form(&enc, p, &others);
        tail.terms.insert(lead, lc);
        reduced.push(tail);
    }
    reduced.sort_by(|a, b| b.lead().cmp(a.lead()));
    Ok(GroebnerBasis {
        basis: reduced.iter().map(|p| p.to_poly(&enc, &ring)).collect(),
        ring,
        order,
    })
}

/// Normal form of `p` modulo `gb`.
pub fn reduce(p: &MultiPoly, gb: &GroebnerBasis) -> Result<MultiPoly> {
    if !same_ring(p.ring(), &gb.ring) {
        return Err(Error::RingMismatch);
    }
    let enc = Encoding { order: gb.order };
    let basis: Vec<OPoly> = gb.basis.iter().map(|g| OPoly::from_poly(&enc, g)).collect();
    Ok(normal_form(&enc, OPoly::from_poly(&enc, p), &basis).to_poly(&enc, &gb.ring))
}

pub fn ideal_member(p: &MultiPoly, gens: &[MultiPoly]) -> Result<bool> {
    ideal_member_with_cap(p, gens, DEFAULT_DEGREE_CAP)
}

/// Membership of `p` in the ideal generated by `gens` (zero generators are
/// ignored; an all-zero list generates the zero ideal).
pub fn ideal_member_with_cap(p: &MultiPoly, gens: &[MultiPoly], degree_cap: u32) -> Result<bool> {
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if let Some(g) = gens.first() {
        p.ensure_same_ring(g)?;
    }
    if nonzero.is_empty() {
        return Ok(p.is_zero());
    }
    if p.is_zero() {
        return Ok(true);
    }
    let gb = buchberger_with_cap(&nonzero, MonomialOrder::GradedLex, degree_cap)?;
    gb.contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::Derivation;
    use crate::parse::parse_poly;
    use crate::poly::Ring;
    use crate::scalar::Field;

    fn ring(vars: &[&str]) -> RingRef {
        Ring::new(vars.iter().copied(), Field::Rational).unwrap()
    }

    fn p(r: &RingRef, s: &str) -> MultiPoly {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn examples() {
        let r = ring(&["X", "Y"]);
        let gb = buchberger(&[p(&r, "X")], MonomialOrder::GradedLex).unwrap();
        assert_eq!(gb.basis(), &[p(&r, "X")]);

        let gb = buchberger(&[p(&r, "X^2"), p(&r, "X*Y")], MonomialOrder::Lex).unwrap();
        assert_eq!(gb.basis(), &[p(&r, "X^2"), p(&r, "X*Y")]);

        let ra = ring(&["X", "a"]);
        let gb = buchberger(&[p(&ra, "X - a"), p(&ra, "a")], MonomialOrder::GradedLex).unwrap();
        assert_eq!(gb.basis(), &[p(&ra, "X"), p(&ra, "a")]);
    }

    #[test]
    fn empty_input() {
        let r = ring(&["X"]);
        assert!(matches!(buchberger(&[], MonomialOrder::Lex), Err(Error::EmptyInput)));
        assert!(matches!(
            buchberger(&[MultiPoly::zero(&r)], MonomialOrder::Lex),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn reduce_examples() {
        let r = ring(&["X", "a"]);
        let gb = buchberger(&[p(&r, "X"), p(&r, "a")], MonomialOrder::GradedLex).unwrap();
        assert!(reduce(&p(&r, "X"), &gb).unwrap().is_zero());
        let gx = buchberger(&[p(&r, "X")], MonomialOrder::GradedLex).unwrap();
        assert_eq!(reduce(&p(&r, "1"), &gx).unwrap(), p(&r, "1"));

        let d = Derivation::cubic(&r);
        let lin = p(&r, "X - a");
        let gl = buchberger(std::slice::from_ref(&lin), MonomialOrder::GradedLex).unwrap();
        assert!(reduce(&d.apply(&lin).unwrap(), &gl).unwrap().is_zero());
    }

    #[test]
    fn membership_examples() {
        let r = ring(&["X", "a"]);
        assert!(ideal_member(&p(&r, "X"), &[p(&r, "X - a"), p(&r, "a")]).unwrap());
        assert!(!ideal_member(&p(&r, "1"), &[p(&r, "X")]).unwrap());
        assert!(ideal_member(
            &p(&r, "X^3 - 2*X^2 + 2*X - (a^3 - 2*a^2 + 2*a)"),
            &[p(&r, "X - a")]
        )
        .unwrap());
        assert!(ideal_member(&MultiPoly::zero(&r), &[MultiPoly::zero(&r)]).unwrap());
        assert!(!ideal_member(&p(&r, "X"), &[MultiPoly::zero(&r)]).unwrap());
    }

    #[test]
    fn unit_ideal_and_cap() {
        let r = ring(&["X", "Y"]);
        let gb = buchberger(&[p(&r, "X*Y - 1"), p(&r, "X")], MonomialOrder::GradedLex).unwrap();
        assert!(gb.is_unit());
        let err = buchberger_with_cap(&[p(&r, "X^5 - Y")], MonomialOrder::Lex, 3).unwrap_err();
        assert_eq!(err, Error::DegreeBudgetExceeded { cap: 3, reached: 5 });
    }

    #[test]
    fn lex_elimination() {
        // x^2 + y^2 - 1, x - y: lex (x > y) eliminates x
        let r = ring(&["x", "y"]);
        let gb = buchberger(&[p(&r, "x^2 + y^2 - 1"), p(&r, "x - y")], MonomialOrder::Lex).unwrap();
        assert_eq!(gb.basis(), &[p(&r, "x - y"), p(&r, "y^2 - 1/2")]);
        assert!(gb.is_zero_dimensional());
    }

    #[test]
    fn twisted_cubic() {
        let r = ring(&["x", "y", "z"]);
        let gens = [p(&r, "y - x^2"), p(&r, "z - x^3")];
        let gb = buchberger(&gens, MonomialOrder::GradedLex).unwrap();
        // y^2 - x z is in the ideal
        assert!(gb.contains(&p(&r, "y^2 - x*z")).unwrap());
        assert!(!gb.contains(&p(&r, "y - x")).unwrap());
        assert!(!gb.is_zero_dimensional());
    }
}
