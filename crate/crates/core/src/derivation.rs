//! Derivations on polynomial rings, given by the image of each variable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{same_ring, MultiPoly, Ring, RingRef};
use crate::ratfunc::RationalFunction;
use crate::scalar::{Field, GaussRational};

/// Coefficients (low to high) of `v^3 - 2v^2 + 2v`.
pub const CUBIC_IMAGE: [i64; 4] = [0, 2, -2, 1];

/// A derivation `D` with `D(x_k) = images[k]`, extended by additivity and
/// the Leibniz rule. Every variable has an image; zero is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    ring: RingRef,
    images: Vec<MultiPoly>,
    max_image_degree: u32,
}

impl Derivation {
    pub fn new(ring: &RingRef, images: Vec<MultiPoly>) -> Result<Self> {
        if images.len() != ring.nvars() {
            let missing = ring.vars()[images.len().min(ring.nvars().saturating_sub(1))].clone();
            return Err(Error::MissingImage(missing));
        }
        if images.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        let max_image_degree = images.iter().map(MultiPoly::total_degree).max().unwrap_or(0);
        Ok(Derivation {
            ring: ring.clone(),
            images,
            max_image_degree,
        })
    }

    /// From `(variable name, image)` pairs covering every variable.
    pub fn from_named<'a, I>(ring: &RingRef, images: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, MultiPoly)>,
    {
        let mut slots: Vec<Option<MultiPoly>> = vec![None; ring.nvars()];
        for (name, p) in images {
            let idx = ring.var_index(name)?;
            slots[idx] = Some(p);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(k, p)| p.ok_or_else(|| Error::MissingImage(ring.vars()[k].clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, images)
    }

    /// Every variable `v` is sent to `p(v)` for the integer polynomial with
    /// coefficients `p` (lowest degree first).
    pub fn coordinatewise(ring: &RingRef, p: &[i64]) -> Self {
        let images = (0..ring.nvars())
            .map(|k| MultiPoly::univariate_from_ints(ring, k, p))
            .collect();
        Self::new(ring, images).expect("one image per variable")
    }

    /// `D(v) = v^3 - 2v^2 + 2v` on every variable.
    pub fn cubic(ring: &RingRef) -> Self {
        Self::coordinatewise(ring, &CUBIC_IMAGE)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    pub fn image(&self, idx: usize) -> &MultiPoly {
        &self.images[idx]
    }

    /// Maximum total degree of the variable images.
    pub fn max_image_degree(&self) -> u32 {
        self.max_image_degree
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(MultiPoly::is_zero)
    }

    /// `D f = sum_k (df/dx_k) D(x_k)`.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let mut acc = MultiPoly::zero(&self.ring);
        for (k, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = f.partial(k);
            if !d.is_zero() {
                acc = &acc + &(&d * img);
            }
        }
        Ok(acc)
    }

    /// Quotient rule: `D(f/g) = (g Df - f Dg) / g^2`, reduced.
    pub fn apply_rational(&self, w: &RationalFunction) -> Result<RationalFunction> {
        let (f, g) = (w.num(), w.den());
        let df = self.apply(f)?;
        let dg = self.apply(g)?;
        RationalFunction::new(&(g * &df) - &(f * &dg), g * g)
    }

    /// If every variable `v` maps to `p(v)` for one common univariate `p`,
    /// returns the coefficients of `p`, lowest degree first.
    pub fn coordinatewise_family(&self) -> Option<Vec<GaussRational>> {
        let mut common: Option<Vec<GaussRational>> = None;
        for (k, img) in self.images.iter().enumerate() {
            if img.occurring_vars().iter().any(|&v| v != k) {
                return None;
            }
            let coeffs: Vec<GaussRational> = img
                .coefficients_in(k)
                .iter()
                .map(|c| c.constant_value().expect("univariate"))
                .collect();
            match &common {
                None => common = Some(coeffs),
                Some(c) if *c == coeffs => {}
                Some(_) => return None,
            }
        }
        common
    }

    /// Whether this is the coordinatewise `v^3 - 2v^2 + 2v` derivation.
    pub fn is_cubic_family(&self) -> bool {
        let cubic: Vec<GaussRational> = CUBIC_IMAGE.iter().map(|&c| c.into()).collect();
        self.ring.nvars() > 0 && self.coordinatewise_family() == Some(cubic)
    }
}

/// The coordinatewise cubic derivation on a fresh ring with `vars`.
pub fn paper_derivation(vars: &[&str], field: Field) -> Result<Derivation> {
    if vars.is_empty() {
        return Err(Error::InvalidRing("at least one variable is required".into()));
    }
    let ring = Ring::new(vars.iter().copied(), field)?;
    Ok(Derivation::cubic(&ring))
}

/// JSON ingestion format:
/// `{"field": "Q"|"Qi", "vars": [...], "images": {"X": "X^3-2*X^2+2*X", ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub images: BTreeMap<String, String>,
}

impl DerivationSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn ring(&self) -> Result<RingRef> {
        Ring::new(self.vars.iter().cloned(), self.field)
    }

    pub fn build(&self) -> Result<Derivation> {
        let ring = self.ring()?;
        let parsed = self
            .images
            .iter()
            .map(|(name, text)| Ok((name.as_str(), parse_poly(text, &ring)?)))
            .collect::<Result<Vec<_>>>()?;
        Derivation::from_named(&ring, parsed)
    }

    /// Spec describing an existing derivation.
    pub fn describe(d: &Derivation) -> Self {
        DerivationSpec {
            field: d.ring().field(),
            vars: d.ring().vars().to_vec(),
            images: d
                .ring()
                .vars()
                .iter()
                .zip(d.images())
                .map(|(v, p)| (v.clone(), p.to_string()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_plane() -> (Derivation, MultiPoly, MultiPoly) {
        let d = paper_derivation(&["X", "a"], Field::Rational).unwrap();
        let x = MultiPoly::var(d.ring(), "X").unwrap();
        let a = MultiPoly::var(d.ring(), "a").unwrap();
        (d, x, a)
    }

    #[test]
    fn linear_factor_identity() {
        let (d, x, a) = cubic_plane();
        let r = d.ring().clone();
        let lin = &x - &a;
        let two = MultiPoly::from_int(&r, 2);
        let q = &(&(&(&(&x * &x) + &(&a * &x)) + &(&a * &a)) - &(&two * &(&x + &a))) + &two;
        assert_eq!(d.apply(&lin).unwrap(), &lin * &q);
    }

    #[test]
    fn constants_and_squares() {
        let d = paper_derivation(&["a"], Field::Rational).unwrap();
        let r = d.ring().clone();
        assert!(d.apply(&MultiPoly::from_int(&r, 9)).unwrap().is_zero());
        let a = MultiPoly::var(&r, "a").unwrap();
        assert_eq!(
            d.apply(&a.pow(2)).unwrap(),
            MultiPoly::univariate_from_ints(&r, 0, &[0, 0, 4, -4, 2])
        );
        assert_eq!(d.max_image_degree(), 3);
        assert!(d.is_cubic_family());
    }

    #[test]
    fn quotient_rule() {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let x = MultiPoly::var(&r, "x").unwrap();
        let y = MultiPoly::var(&r, "y").unwrap();
        let d = Derivation::new(&r, vec![x.clone(), y.clone()]).unwrap();
        let w = RationalFunction::new(x.clone(), y.clone()).unwrap();
        assert!(d.apply_rational(&w).unwrap().is_zero());

        let r1 = Ring::new(["X"], Field::Rational).unwrap();
        let xx = MultiPoly::var(&r1, "X").unwrap();
        let d1 = Derivation::new(&r1, vec![xx.clone()]).unwrap();
        let inv = RationalFunction::new(MultiPoly::one(&r1), xx.clone()).unwrap();
        let expect = RationalFunction::new(MultiPoly::from_int(&r1, -1), xx.clone()).unwrap();
        assert_eq!(d1.apply_rational(&inv).unwrap(), expect);

        let f = &xx * &xx;
        assert_eq!(
            d1.apply_rational(&RationalFunction::from_poly(f.clone())).unwrap(),
            RationalFunction::from_poly(d1.apply(&f).unwrap())
        );
    }

    #[test]
    fn ring_mismatch() {
        let (d, _, _) = cubic_plane();
        let other = Ring::new(["Z"], Field::Rational).unwrap();
        let z = MultiPoly::var(&other, "Z").unwrap();
        assert_eq!(d.apply(&z), Err(Error::RingMismatch));
    }

    #[test]
    fn spec_roundtrip() {
        let json = r#"{"field": "Q", "vars": ["X","a"],
            "images": {"X": "X^3-2*X^2+2*X", "a": "a^3-2*a^2+2*a"}}"#;
        let spec = DerivationSpec::from_json(json).unwrap();
        let d = spec.build().unwrap();
        assert_eq!(d, paper_derivation(&["X", "a"], Field::Rational).unwrap());
        assert_eq!(DerivationSpec::describe(&d).build().unwrap(), d);
    }

    #[test]
    fn spec_errors() {
        let missing = r#"{"field": "Q", "vars": ["X","a"], "images": {"X": "X"}}"#;
        assert_eq!(
            DerivationSpec::from_json(missing).unwrap().build(),
            Err(Error::MissingImage("a".into()))
        );
        let unknown = r#"{"field": "Q", "vars": ["X"], "images": {"X": "X", "Y": "1"}}"#;
        assert_eq!(
            DerivationSpec::from_json(unknown).unwrap().build(),
            Err(Error::UnknownVariable("Y".into()))
        );
        assert!(matches!(
            DerivationSpec::from_json(r#"{"field": "R", "vars": [], "images": {}}"#),
            Err(Error::InvalidSpec(_))
        ));
    }
}
