//! Differential ideals: closure checks, integral-ideal witnesses, the
//! principal radical case, zeros of plane vector fields and saturating
//! elements.

use crate::darboux::{cofactor, CofactorSpace};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::gcd::{gcd, squarefree_part};
use crate::groebner::{buchberger_with_cap, GroebnerBasis, MonomialOrder, DEFAULT_DEGREE_CAP};
use crate::poly::{same_ring, MultiPoly, RingRef};
use crate::roots::{resultant, roots_in_field};
use crate::scalar::{Field, GaussRational};

/// Images of the variables in a target ring, presenting an ideal as the
/// kernel of the induced map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    pub target: RingRef,
    pub images: Vec<MultiPoly>,
}

/// An ideal given by generators, with optional quotient data and an
/// optional caller-asserted height.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    ring: RingRef,
    gens: Vec<MultiPoly>,
    quotient: Option<QuotientData>,
    asserted_height: Option<usize>,
    degree_cap: u32,
}

impl IdealPresentation {
    pub fn new(ring: &RingRef, gens: Vec<MultiPoly>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyInput);
        }
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(IdealPresentation {
            ring: ring.clone(),
            gens,
            quotient: None,
            asserted_height: None,
            degree_cap: DEFAULT_DEGREE_CAP,
        })
    }

    pub fn principal(f: MultiPoly) -> Self {
        let ring = f.ring().clone();
        Self::new(&ring, vec![f]).expect("one generator")
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self::principal(MultiPoly::zero(ring))
    }

    /// Attaches the map sending variable `k` to `images[k]`; every
    /// generator must map to zero.
    pub fn with_quotient(mut self, target: &RingRef, images: Vec<MultiPoly>) -> Result<Self> {
        for g in &self.gens {
            if !g.compose(target, &images)?.is_zero() {
                return Err(Error::NotApplicable(format!("generator {} does not map to 0", g)));
            }
        }
        self.quotient = Some(QuotientData {
            target: target.clone(),
            images,
        });
        Ok(self)
    }

    /// Records a height for the ideal; it is trusted, not verified.
    pub fn with_height(mut self, height: usize) -> Self {
        self.asserted_height = Some(height);
        self
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn quotient(&self) -> Option<&QuotientData> {
        self.quotient.as_ref()
    }

    pub fn asserted_height(&self) -> Option<usize> {
        self.asserted_height
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.iter().all(MultiPoly::is_zero)
    }

    /// Gröbner basis of the ideal; `None` for the zero ideal.
    pub fn basis(&self) -> Result<Option<GroebnerBasis>> {
        if self.is_zero_ideal() {
            return Ok(None);
        }
        buchberger_with_cap(&self.gens, MonomialOrder::GradedLex, self.degree_cap).map(Some)
    }

    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        p.ensure_same_ring(&self.gens[0])?;
        match self.basis()? {
            None => Ok(p.is_zero()),
            Some(gb) => gb.contains(p),
        }
    }
}

/// Whether `D g` lies in the ideal for every generator `g`.
pub fn is_differential_ideal(ideal: &IdealPresentation, d: &Derivation) -> Result<bool> {
    if !same_ring(ideal.ring(), d.ring()) {
        return Err(Error::RingMismatch);
    }
    let Some(gb) = ideal.basis()? else {
        return Ok(true);
    };
    for g in ideal.gens() {
        if !gb.contains(&d.apply(g)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBranch {
    /// `f - c g` lies in the ideal.
    FMinusCG,
    /// `g - c f` lies in the ideal.
    GMinusCF,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralWitness {
    Found { branch: WitnessBranch, c: GaussRational },
    NoWitnessFound,
}

/// `{0, ±1, ±2, ±i, 1±i}`, keeping only constants of `field`.
pub fn default_constants(field: Field) -> Vec<GaussRational> {
    let i = GaussRational::i();
    let one = GaussRational::one();
    let all = [
        GaussRational::zero(),
        one.clone(),
        -&one,
        GaussRational::from_int(2),
        GaussRational::from_int(-2),
        i.clone(),
        -&i,
        &one + &i,
        &one - &i,
    ];
    all.into_iter().filter(|c| field.contains(c)).collect()
}

/// Looks for a constant `c` with `f - c g` or `g - c f` in the ideal,
/// given that the ideal is differential and contains `g Df - f Dg`.
///
/// Tries `constants` first, then any `c` making the normal forms of `f`
/// and `g` proportional.
pub fn integral_witness(
    ideal: &IdealPresentation,
    f: &MultiPoly,
    g: &MultiPoly,
    d: &Derivation,
    constants: &[GaussRational],
) -> Result<IntegralWitness> {
    f.ensure_same_ring(g)?;
    if !is_differential_ideal(ideal, d)? {
        return Err(Error::NotApplicable("the ideal is not differential".into()));
    }
    let wronskian = &(g * &d.apply(f)?) - &(f * &d.apply(g)?);
    if !ideal.contains(&wronskian)? {
        return Err(Error::NotApplicable("g Df - f Dg is not in the ideal".into()));
    }
    let gb = ideal.basis()?;
    let nf = |p: &MultiPoly| -> Result<MultiPoly> {
        match &gb {
            Some(b) => b.reduce(p),
            None => Ok(p.clone()),
        }
    };
    let (nf_f, nf_g) = (nf(f)?, nf(g)?);
    let field = ideal.ring().field();
    let mut candidates: Vec<GaussRational> = constants.iter().filter(|c| field.contains(c)).cloned().collect();
    for (a, b) in [(&nf_f, &nf_g), (&nf_g, &nf_f)] {
        if let Some(c) = proportionality(a, b) {
            if !candidates.contains(&c) {
                candidates.push(c);
            }
        }
    }
    for c in &candidates {
        let cst = MultiPoly::constant(ideal.ring(), c.clone());
        if nf(&(f - &(&cst * g)))?.is_zero() {
            return Ok(IntegralWitness::Found {
                branch: WitnessBranch::FMinusCG,
                c: c.clone(),
            });
        }
        if nf(&(g - &(&cst * f)))?.is_zero() {
            return Ok(IntegralWitness::Found {
                branch: WitnessBranch::GMinusCF,
                c: c.clone(),
            });
        }
    }
    Ok(IntegralWitness::NoWitnessFound)
}

/// `c` with `a = c b`, if `b` is nonzero and such a constant exists.
fn proportionality(a: &MultiPoly, b: &MultiPoly) -> Option<GaussRational> {
    let (m, lb) = b.leading_term()?;
    let c = &a.coeff(m) / lb;
    (*a == b.scale(&c)).then_some(c)
}

/// The `g = 1` case: a constant `c` with `f - c` in the ideal, given that
/// `Df` is in it.
pub fn integral_observation(
    ideal: &IdealPresentation,
    f: &MultiPoly,
    d: &Derivation,
    constants: &[GaussRational],
) -> Result<IntegralWitness> {
    integral_witness(ideal, f, &MultiPoly::one(f.ring()), d, constants)
}

/// For a differential principal ideal `(f)` and the irreducible factors of
/// `f`, checks that every factor generates a differential ideal, as the
/// minimal primes over a differential ideal must.
pub fn principal_radical_differential(f: &MultiPoly, factors: &[MultiPoly], d: &Derivation) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if cofactor(f, d)?.is_none() {
        return Err(Error::NotDifferential);
    }
    if factors.is_empty() {
        return Err(Error::BadFactorization("no factors given".into()));
    }
    let mut monic: Vec<MultiPoly> = Vec::new();
    for q in factors {
        q.ensure_same_ring(f)?;
        if q.is_constant() {
            return Err(Error::BadFactorization(format!("constant factor {}", q)));
        }
        let m = q.monic();
        if monic.contains(&m) {
            return Err(Error::BadFactorization(format!("repeated factor {}", q)));
        }
        monic.push(m);
    }
    let product = monic.iter().fold(MultiPoly::one(f.ring()), |acc, q| &acc * q);
    if product != squarefree_part(f)? {
        return Err(Error::BadFactorization(
            "factors do not multiply to the squarefree part".into(),
        ));
    }
    for q in factors {
        if cofactor(q, d)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanePoint {
    pub x: GaussRational,
    pub y: GaussRational,
}

/// A factor whose roots are not in the field. `fixed_x` is set when the
/// factor is in the second variable after fixing the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedFactor {
    pub fixed_x: Option<GaussRational>,
    pub poly: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSet {
    pub points: Vec<PlanePoint>,
    /// Common factor of both images: a whole curve of zeros.
    pub curve: Option<MultiPoly>,
    pub unresolved: Vec<UnresolvedFactor>,
}

/// Common zeros of `D X1` and `D X2` with coordinates in the field.
pub fn vector_field_zeros(d: &Derivation) -> Result<ZeroSet> {
    let ring = d.ring();
    if ring.nvars() != 2 {
        return Err(Error::UnsupportedShape("expected exactly two variables".into()));
    }
    if d.is_zero() {
        return Err(Error::ZeroField);
    }
    let (a, b) = (d.image(0), d.image(1));
    let common = gcd(a, b)?;
    let curve = (!common.is_constant()).then(|| common.clone());
    let a1 = a.exact_divide(&common)?;
    let b1 = b.exact_divide(&common)?;

    let mut points = Vec::new();
    let mut unresolved = Vec::new();
    let res = resultant(&a1, &b1, 1)?;
    if !res.is_constant() {
        let xs = roots_in_field(&res, 0, ring.field())?;
        unresolved.extend(xs.unresolved.into_iter().map(|poly| UnresolvedFactor { fixed_x: None, poly }));
        for x0 in xs.roots {
            let at = MultiPoly::constant(ring, x0.clone());
            let h = gcd(&a1.substitute_at(0, &at), &b1.substitute_at(0, &at))?;
            if h.is_constant() {
                continue;
            }
            let ys = roots_in_field(&h, 1, ring.field())?;
            points.extend(ys.roots.into_iter().map(|y| PlanePoint { x: x0.clone(), y }));
            unresolved.extend(ys.unresolved.into_iter().map(|poly| UnresolvedFactor {
                fixed_x: Some(x0.clone()),
                poly,
            }));
        }
    }
    points.sort_by(|p, q| p.x.canonical_cmp(&q.x).then_with(|| p.y.canonical_cmp(&q.y)));
    points.dedup();
    Ok(ZeroSet {
        points,
        curve,
        unresolved,
    })
}

/// The ideal `(X1 - x, X2 - y)` of a plane point.
pub fn point_ideal(ring: &RingRef, p: &PlanePoint) -> Result<IdealPresentation> {
    let gens = [&p.x, &p.y]
        .iter()
        .enumerate()
        .map(|(k, c)| &MultiPoly::var_at(ring, k) - &MultiPoly::constant(ring, (*c).clone()))
        .collect();
    IdealPresentation::new(ring, gens)
}

/// `D X1 = y z`, `D X2 = w z` with `z = gcd(D X1, D X2)`; returns `(y, w, z)`.
pub fn common_factor_split(d: &Derivation) -> Result<(MultiPoly, MultiPoly, MultiPoly)> {
    if d.ring().nvars() != 2 {
        return Err(Error::UnsupportedShape("expected exactly two variables".into()));
    }
    if d.is_zero() {
        return Err(Error::ZeroField);
    }
    let z = gcd(d.image(0), d.image(1))?;
    Ok((d.image(0).exact_divide(&z)?, d.image(1).exact_divide(&z)?, z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturationShape {
    /// Zero ideal in at most two variables, with all Darboux polynomials up
    /// to some degree supplied.
    Plane,
    /// An ideal asserted to have height `n - 1`.
    DimensionOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatingElement {
    pub element: MultiPoly,
    pub shape: SaturationShape,
    pub asserted_height: Option<usize>,
}

/// An element outside the ideal whose inversion leaves no proper nonzero
/// differential prime, in the two supported shapes.
///
/// Plane shape: the product of the Darboux polynomials times the first
/// nonzero `D X_j`. Dimension-one shape: the first `D X_j` outside the
/// ideal.
pub fn saturating_element(
    ideal: &IdealPresentation,
    d: &Derivation,
    space: Option<&CofactorSpace>,
) -> Result<SaturatingElement> {
    if !same_ring(ideal.ring(), d.ring()) {
        return Err(Error::RingMismatch);
    }
    let ring = d.ring();
    let n = ring.nvars();
    let asserted_height = ideal.asserted_height();
    if ideal.is_zero_ideal() && n <= 2 {
        if let Some(space) = space {
            let Some(dx) = d.images().iter().find(|p| !p.is_zero()) else {
                return Err(Error::NoCandidate("every D X_j is zero".into()));
            };
            let element = space.pairs.iter().fold(dx.clone(), |acc, p| &acc * &p.f);
            debug_assert!(space.pairs.iter().all(|p| p.f.divides(&element)));
            return Ok(SaturatingElement {
                element,
                shape: SaturationShape::Plane,
                asserted_height,
            });
        }
    }
    if n >= 1 && asserted_height == Some(n - 1) {
        for dx in d.images() {
            if !ideal.contains(dx)? {
                return Ok(SaturatingElement {
                    element: dx.clone(),
                    shape: SaturationShape::DimensionOne,
                    asserted_height,
                });
            }
        }
        return Err(Error::NoCandidate("every D X_j lies in the ideal".into()));
    }
    Err(Error::UnsupportedShape(
        "expected the zero ideal in at most two variables with a Darboux list, or an ideal of height n - 1".into(),
    ))
}
