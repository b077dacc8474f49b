//! Darboux polynomials: `f` with `Df = w f` for a polynomial cofactor `w`.
//!
//! Covers cofactor extraction, the eigenpolynomial recursion for the
//! coordinatewise cubic derivation, a bounded complete search, integer
//! relations among cofactors with their first integrals, and the residue
//! test for rational solutions of `DY = cY` in one variable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::gcd::is_squarefree;
use crate::groebner::DEFAULT_DEGREE_CAP;
use crate::linalg::{integer_scale, nullspace, ExactMatrix};
use crate::poly::{same_ring, Monomial, MultiPoly, Ring};
use crate::ratfunc::RationalFunction;
use crate::scalar::{GaussRational, Rational};
use crate::solve::solve_staged;

/// `f` (leading coefficient 1) with `Df = w f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarbouxPair {
    pub f: MultiPoly,
    pub w: MultiPoly,
}

/// A designated leading monomial whose Darboux polynomials form a family
/// of dimension > 1 (typically from a non-trivial constant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFlag {
    pub degree: u32,
    pub leading: Monomial,
    /// The cofactor when it is the same along the whole family.
    pub cofactor: Option<MultiPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofactorSpace {
    pub pairs: Vec<DarbouxPair>,
    /// Integer vectors `n` with `sum n_k w_k = 0`.
    pub relation_basis: Vec<Vec<BigInt>>,
    pub families: Vec<FamilyFlag>,
}

impl CofactorSpace {
    /// Space for a given list of pairs, with its relation basis filled in.
    pub fn from_pairs(pairs: Vec<DarbouxPair>) -> Self {
        let mut space = CofactorSpace {
            pairs,
            relation_basis: Vec::new(),
            families: Vec::new(),
        };
        space.relation_basis = cofactor_relations(&space);
        space
    }

    pub fn polynomials(&self) -> Vec<&MultiPoly> {
        self.pairs.iter().map(|p| &p.f).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueReport {
    pub solvable: bool,
    /// Root and its residue, in input order.
    pub residues: Vec<(GaussRational, GaussRational)>,
    /// Root and its integer exponent; present iff solvable.
    pub exponents: Option<Vec<(GaussRational, BigInt)>>,
    /// `prod (X - r)^(n_r)`, present iff solvable.
    pub witness: Option<RationalFunction>,
}

/// `Df / f` when `f` divides `Df`.
pub fn cofactor(f: &MultiPoly, d: &Derivation) -> Result<Option<MultiPoly>> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    let df = d.apply(f)?;
    match df.exact_divide(f) {
        Ok(w) => Ok(Some(w)),
        Err(Error::NotDivisible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Solves `Df = z f` for the coordinatewise cubic derivation by matching
/// coefficients of powers of `var`, given `z = b2 var^2 + b1 var + b0`.
///
/// Writing `f = sum_j a_j var^j` with `a_N = 1`, the `var^(j+2)` coefficient
/// gives `(N - j) a_j = D(a_{j+2}) + (2(j+2) - b0) a_{j+2} - (b1 + 2(j+1)) a_{j+1}`.
/// The remaining low-order equations are checked by verifying `Df = z f`.
pub fn eigenpoly_solve(z: &MultiPoly, d: &Derivation, var: &str) -> Result<Option<MultiPoly>> {
    if !same_ring(z.ring(), d.ring()) {
        return Err(Error::RingMismatch);
    }
    if !d.is_cubic_family() {
        return Err(Error::UnsupportedDerivation(
            "expected v^3 - 2v^2 + 2v on every variable".into(),
        ));
    }
    let ring = d.ring();
    let idx = ring.var_index(var)?;
    let b = z.coefficients_in(idx);
    if b.len() > 3 {
        return Err(Error::BadCofactorShape(format!("degree {} in {}", b.len() - 1, var)));
    }
    let coeff = |k: usize| b.get(k).cloned().unwrap_or_else(|| MultiPoly::zero(ring));
    let (b0, b1, b2) = (coeff(0), coeff(1), coeff(2));
    let Some(n) = b2
        .constant_value()
        .and_then(|c| c.as_integer())
        .and_then(|n| n.to_usize())
        .filter(|&n| n >= 1)
    else {
        return Ok(None);
    };
    let int = |k: usize| MultiPoly::from_int(ring, k as i64);
    let mut a = vec![MultiPoly::zero(ring); n + 2];
    a[n] = MultiPoly::one(ring);
    a[n - 1] = -(&b1 + &int(2 * n));
    for j in (0..n.saturating_sub(1)).rev() {
        let rhs = &(&d.apply(&a[j + 2])? + &(&(&int(2 * (j + 2)) - &b0) * &a[j + 2]))
            - &(&(&b1 + &int(2 * (j + 1))) * &a[j + 1]);
        let inv = GaussRational::from_rational(Rational::new(1.into(), ((n - j) as i64).into()));
        a[j] = rhs.scale(&inv);
    }
    a.truncate(n + 1);
    let f = MultiPoly::from_coefficients_in(ring, idx, &a);
    if d.apply(&f)? == z * &f {
        Ok(Some(f.monic()))
    } else {
        Ok(None)
    }
}

/// All Darboux polynomials of total degree `1..=degree_bound`, up to scalar
/// multiples, omitting those divisible by one already found.
pub fn darboux_search(d: &Derivation, degree_bound: u32) -> Result<CofactorSpace> {
    darboux_search_with_cap(d, degree_bound, DEFAULT_DEGREE_CAP)
}

/// [`darboux_search`] with an explicit Gröbner degree cap.
pub fn darboux_search_with_cap(d: &Derivation, degree_bound: u32, cap: u32) -> Result<CofactorSpace> {
    if degree_bound < 1 {
        return Err(Error::NotApplicable("degree bound must be at least 1".into()));
    }
    let n = d.ring().nvars();
    let wmons = match d.max_image_degree() {
        0 => Vec::new(),
        m => Monomial::all_up_to_degree(n, m - 1),
    };
    // by degree, and within a degree from the largest leading monomial down
    let leading: Vec<Monomial> = (1..=degree_bound)
        .flat_map(|k| Monomial::all_of_degree(n, k).into_iter().rev())
        .collect();
    let found = leading
        .par_iter()
        .map(|m| search_leading(d, m, &wmons, cap))
        .collect::<Result<Vec<_>>>()?;

    let mut pairs: Vec<DarbouxPair> = Vec::new();
    let mut families = Vec::new();
    for (mut ps, fams) in found {
        ps.sort_by_cached_key(|p| p.f.to_string());
        for p in ps {
            if !pairs.iter().any(|q| q.f.divides(&p.f)) {
                pairs.push(p);
            }
        }
        families.extend(fams);
    }
    let mut space = CofactorSpace::from_pairs(pairs);
    space.families = families;
    Ok(space)
}

/// Solves `Df = w f` for `f = m + sum_j c_j m_j` over monomials `m_j < m`
/// and `w = sum_a w_a wmons_a`.
fn search_leading(
    d: &Derivation,
    m: &Monomial,
    wmons: &[Monomial],
    cap: u32,
) -> Result<(Vec<DarbouxPair>, Vec<FamilyFlag>)> {
    let ring = d.ring();
    let n = ring.nvars();
    let lower: Vec<Monomial> = Monomial::all_up_to_degree(n, m.degree())
        .into_iter()
        .filter(|x| x < m)
        .collect();
    let nw = wmons.len();
    let names = (0..nw)
        .map(|k| format!("w{}", k))
        .chain((0..lower.len()).map(|k| format!("c{}", k)));
    let unk = Ring::new(names, ring.field())?;
    let nu = unk.nvars();
    let unit = |k: usize| Monomial::var(nu, k, 1);

    let mut eqs: BTreeMap<Monomial, Vec<(Monomial, GaussRational)>> = BTreeMap::new();
    let mut push = |at: Monomial, u: Monomial, c: GaussRational| eqs.entry(at).or_default().push((u, c));
    let mono = |x: &Monomial| MultiPoly::from_terms(ring, [(x.clone(), GaussRational::one())]);

    for (mu, c) in d.apply(&mono(m))?.terms() {
        push(mu.clone(), Monomial::one(nu), c.clone());
    }
    for (j, mj) in lower.iter().enumerate() {
        for (mu, c) in d.apply(&mono(mj))?.terms() {
            push(mu.clone(), unit(nw + j), c.clone());
        }
    }
    let minus_one = -GaussRational::one();
    for (a, wa) in wmons.iter().enumerate() {
        push(wa.mul(m), unit(a), minus_one.clone());
        for (j, mj) in lower.iter().enumerate() {
            push(wa.mul(mj), unit(a).mul(&unit(nw + j)), minus_one.clone());
        }
    }
    // highest degree first: once the top components of f and w are fixed,
    // each lower degree is linear in the next components
    let mut groups: BTreeMap<std::cmp::Reverse<u32>, Vec<MultiPoly>> = BTreeMap::new();
    for (at, terms) in eqs {
        let e = MultiPoly::from_terms(&unk, terms);
        if !e.is_zero() {
            groups.entry(std::cmp::Reverse(at.degree())).or_default().push(e);
        }
    }
    let groups: Vec<Vec<MultiPoly>> = groups.into_values().collect();
    let sols = solve_staged(&unk, &groups, cap)?;
    let build_w = |vals: &[GaussRational]| {
        MultiPoly::from_terms(ring, wmons.iter().cloned().zip(vals[..nw].iter().cloned()))
    };
    let mut pairs = Vec::new();
    for pt in &sols.points {
        let f = MultiPoly::from_terms(
            ring,
            std::iter::once((m.clone(), GaussRational::one()))
                .chain(lower.iter().cloned().zip(pt[nw..].iter().cloned())),
        );
        let w = build_w(pt);
        debug_assert_eq!(d.apply(&f)?, &w * &f);
        pairs.push(DarbouxPair { f, w });
    }
    let families = sols
        .families
        .iter()
        .map(|fam| {
            let wvals: Option<Vec<GaussRational>> = fam[..nw].iter().cloned().collect();
            FamilyFlag {
                degree: m.degree(),
                leading: m.clone(),
                cofactor: wvals.map(|v| build_w(&v)),
            }
        })
        .collect();
    Ok((pairs, families))
}

/// Integer basis of `{n : sum n_k w_k = 0}` over the cofactors in `space`.
/// Each vector is primitive with its last nonzero entry positive.
pub fn cofactor_relations(space: &CofactorSpace) -> Vec<Vec<BigInt>> {
    let cols = space.pairs.len();
    if cols == 0 {
        return Vec::new();
    }
    let mut monos: Vec<&Monomial> = space.pairs.iter().flat_map(|p| p.w.terms().map(|(m, _)| m)).collect();
    monos.sort();
    monos.dedup();
    let mut rows = Vec::new();
    for mono in monos {
        let coeffs: Vec<GaussRational> = space.pairs.iter().map(|p| p.w.coeff(mono)).collect();
        rows.push(coeffs.iter().map(|c| GaussRational::from_rational(c.re.clone())).collect());
        if coeffs.iter().any(|c| !c.is_real()) {
            rows.push(coeffs.iter().map(|c| GaussRational::from_rational(c.im.clone())).collect());
        }
    }
    if rows.is_empty() {
        rows.push(vec![GaussRational::zero(); cols]);
    }
    nullspace(&ExactMatrix::from_rows(rows))
        .iter()
        .map(|v| {
            let v = integer_scale(v).expect("rational nonzero kernel vector");
            match v.iter().rev().find(|x| !x.is_zero()) {
                Some(last) if last.is_negative() => v.iter().map(|x| -x).collect(),
                _ => v,
            }
        })
        .collect()
}

/// `prod f_k^(n_k)` for a relation `n`; constant along `D`.
pub fn first_integral(space: &CofactorSpace, d: &Derivation, relation: &[BigInt]) -> Result<RationalFunction> {
    if relation.len() != space.pairs.len() {
        return Err(Error::NotARelation);
    }
    let ring = d.ring();
    let mut total = MultiPoly::zero(ring);
    for (p, n) in space.pairs.iter().zip(relation) {
        let n = GaussRational::from_bigint(n.clone());
        total = &total + &p.w.scale(&n);
    }
    if !total.is_zero() {
        return Err(Error::NotARelation);
    }
    let mut acc = RationalFunction::one(ring);
    for (p, n) in space.pairs.iter().zip(relation) {
        if n.is_zero() {
            continue;
        }
        let e = n.to_i64().ok_or(Error::NotARelation)?;
        acc = acc.mul(&RationalFunction::from_poly(p.f.clone()).powi(e)?)?;
    }
    assert!(d.apply_rational(&acc)?.is_zero(), "first integral must be constant");
    Ok(acc)
}

/// Decides whether `DY = cY` with `DX = p(X)` has a nonzero solution `Y`
/// in the rational functions of `X`, given all roots of `p` in the field.
///
/// A solution `prod (X - r)^(n_r)` needs `n_r = c / p'(r)`, so it exists
/// exactly when every residue is a rational integer.
pub fn eigenvalue_rational_solvable(
    p: &MultiPoly,
    roots: &[GaussRational],
    c: &GaussRational,
) -> Result<ResidueReport> {
    let ring = p.ring();
    let vars = p.occurring_vars();
    if vars.len() != 1 {
        return Err(Error::UnsupportedShape("expected a nonconstant univariate polynomial".into()));
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if !is_squarefree(p)? {
        return Err(Error::NotSquarefree);
    }
    let field = ring.field();
    if !field.contains(c) {
        return Err(Error::FieldMismatch(format!("{} is not in {}", c, field)));
    }
    let idx = vars[0];
    let deg = p.degree_in(idx) as usize;
    if roots.len() != deg {
        return Err(Error::IncompleteRoots(format!("{} roots for degree {}", roots.len(), deg)));
    }
    let mut point = vec![GaussRational::zero(); ring.nvars()];
    let at = |x: &MultiPoly, r: &GaussRational, point: &mut Vec<GaussRational>| {
        point[idx] = r.clone();
        x.evaluate(point)
    };
    let dp = p.partial(idx);
    let mut residues = Vec::new();
    for (k, r) in roots.iter().enumerate() {
        if !field.contains(r) || !at(p, r, &mut point).is_zero() || roots[..k].contains(r) {
            return Err(Error::IncompleteRoots(format!("{} is not a new root", r)));
        }
        let res = c / &at(&dp, r, &mut point);
        residues.push((r.clone(), res));
    }
    let exponents: Option<Vec<(GaussRational, BigInt)>> = residues
        .iter()
        .map(|(r, e)| e.as_integer().map(|n| (r.clone(), n)))
        .collect();
    let Some(exponents) = exponents else {
        return Ok(ResidueReport {
            solvable: false,
            residues,
            exponents: None,
            witness: None,
        });
    };
    let x = MultiPoly::var_at(ring, idx);
    let mut witness = RationalFunction::one(ring);
    for (r, n) in &exponents {
        let e = n.to_i64().ok_or_else(|| Error::UnsupportedShape("exponent too large".into()))?;
        let lin = RationalFunction::from_poly(&x - &MultiPoly::constant(ring, r.clone()));
        witness = witness.mul(&lin.powi(e)?)?;
    }
    let images: Vec<MultiPoly> = (0..ring.nvars())
        .map(|k| if k == idx { p.clone() } else { MultiPoly::zero(ring) })
        .collect();
    let d = Derivation::new(ring, images)?;
    let expect = witness.scale(&MultiPoly::constant(ring, c.clone()))?;
    assert_eq!(d.apply_rational(&witness)?, expect, "residue witness must satisfy DY = cY");
    Ok(ResidueReport {
        solvable: true,
        residues,
        exponents: Some(exponents),
        witness: Some(witness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::paper_derivation;
    use crate::parse::parse_poly;
    use crate::scalar::Field;

    fn p(text: &str, d: &Derivation) -> MultiPoly {
        parse_poly(text, d.ring()).unwrap()
    }

    fn fs(space: &CofactorSpace) -> Vec<String> {
        space.pairs.iter().map(|q| q.f.to_string()).collect()
    }

    #[test]
    fn cofactor_examples() {
        let d = paper_derivation(&["X", "a"], Field::Rational).unwrap();
        assert_eq!(
            cofactor(&p("X - a", &d), &d).unwrap(),
            Some(p("X^2 + a*X + a^2 - 2*X - 2*a + 2", &d))
        );
        let d1 = paper_derivation(&["X"], Field::Rational).unwrap();
        assert_eq!(cofactor(&p("X", &d1), &d1).unwrap(), Some(p("X^2 - 2*X + 2", &d1)));
        assert_eq!(cofactor(&p("X - 1", &d1), &d1).unwrap(), None);
        assert_eq!(cofactor(&p("3", &d1), &d1), Err(Error::ConstantInput));
    }

    #[test]
    fn eigenpoly_examples() {
        let d = paper_derivation(&["a"], Field::Rational).unwrap();
        assert_eq!(eigenpoly_solve(&p("a^2 - 2*a + 2", &d), &d, "a").unwrap(), Some(p("a", &d)));
        assert_eq!(eigenpoly_solve(&p("2*a^2 - 4*a + 4", &d), &d, "a").unwrap(), Some(p("a^2", &d)));
        assert_eq!(eigenpoly_solve(&p("a", &d), &d, "a").unwrap(), None);
        assert!(matches!(
            eigenpoly_solve(&p("a^3", &d), &d, "a"),
            Err(Error::BadCofactorShape(_))
        ));
        let two = paper_derivation(&["X", "a"], Field::Rational).unwrap();
        let w = p("X^2 + a*X + a^2 - 2*X - 2*a + 2", &two);
        assert_eq!(eigenpoly_solve(&w, &two, "X").unwrap(), Some(p("X - a", &two)));
        let r = Ring::new(["x"], Field::Rational).unwrap();
        let lin = Derivation::coordinatewise(&r, &[0, 1]);
        assert!(matches!(
            eigenpoly_solve(&MultiPoly::one(&r), &lin, "x"),
            Err(Error::UnsupportedDerivation(_))
        ));
    }

    #[test]
    fn search_univariate() {
        let d = paper_derivation(&["X"], Field::Rational).unwrap();
        let s = darboux_search(&d, 2).unwrap();
        assert_eq!(fs(&s), vec!["X", "X^2 - 2*X + 2"]);
        let dq = paper_derivation(&["X"], Field::Gaussian).unwrap();
        let s = darboux_search(&dq, 2).unwrap();
        assert_eq!(fs(&s), vec!["X", "X - (1 + i)", "X - (1 - i)"]);
        assert!(s.families.is_empty());
    }

    #[test]
    fn search_linear_field() {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let x = MultiPoly::var_at(&r, 0);
        let y = MultiPoly::var_at(&r, 1);
        let d = Derivation::new(&r, vec![x.clone(), y.scale(&GaussRational::from_int(2))]).unwrap();
        let s = darboux_search(&d, 1).unwrap();
        let got: Vec<(String, String)> = s.pairs.iter().map(|q| (q.f.to_string(), q.w.to_string())).collect();
        assert_eq!(got, vec![("x".into(), "1".into()), ("y".into(), "2".into())]);
        assert!(s.families.is_empty());

        // D = x d/dx + y d/dy: every ax + by is Darboux with cofactor 1
        let e = Derivation::new(&r, vec![x.clone(), y.clone()]).unwrap();
        let s = darboux_search(&e, 1).unwrap();
        assert_eq!(fs(&s), vec!["y"]);
        assert_eq!(s.families.len(), 1);
        assert_eq!(s.families[0].cofactor, Some(MultiPoly::one(&r)));
    }

    fn space_of(d: &Derivation, fs: &[&str]) -> CofactorSpace {
        CofactorSpace::from_pairs(
            fs.iter()
                .map(|t| {
                    let f = p(t, d);
                    let w = cofactor(&f, d).unwrap().unwrap();
                    DarbouxPair { f, w }
                })
                .collect(),
        )
    }

    fn up_to_sign(v: &[BigInt], expect: &[i64]) -> bool {
        let e: Vec<BigInt> = expect.iter().map(|&k| BigInt::from(k)).collect();
        let neg: Vec<BigInt> = e.iter().map(|k| -k).collect();
        v == e.as_slice() || v == neg.as_slice()
    }

    #[test]
    fn relations_and_integrals() {
        let r = Ring::new(["x", "y"], Field::Rational).unwrap();
        let x = MultiPoly::var_at(&r, 0);
        let y = MultiPoly::var_at(&r, 1);
        let d = Derivation::new(&r, vec![x.clone(), y.scale(&GaussRational::from_int(2))]).unwrap();
        let s = space_of(&d, &["x", "y"]);
        assert_eq!(s.relation_basis.len(), 1);
        assert_eq!(s.relation_basis[0], vec![BigInt::from(-2), BigInt::from(1)]);
        let rel = [BigInt::from(-2), BigInt::from(1)];
        assert_eq!(first_integral(&s, &d, &rel).unwrap().to_string(), "y/x^2");
        let zero = [BigInt::zero(), BigInt::zero()];
        assert!(first_integral(&s, &d, &zero).unwrap().is_polynomial());
        assert_eq!(
            first_integral(&s, &d, &[BigInt::from(1), BigInt::from(1)]),
            Err(Error::NotARelation)
        );

        let e = Derivation::new(&r, vec![x, y]).unwrap();
        let s = space_of(&e, &["x", "y"]);
        assert!(up_to_sign(&s.relation_basis[0], &[1, -1]));
        let rel = [BigInt::from(1), BigInt::from(-1)];
        assert_eq!(first_integral(&s, &e, &rel).unwrap().to_string(), "x/y");

        let single = space_of(&d, &["x"]);
        assert!(single.relation_basis.is_empty());
    }

    #[test]
    fn residue_examples() {
        let rq = Ring::new(["X"], Field::Gaussian).unwrap();
        let cubic = parse_poly("X^3 - 2*X^2 + 2*X", &rq).unwrap();
        let roots = [
            GaussRational::zero(),
            GaussRational::from_parts(1, 1, 1, 1),
            GaussRational::from_parts(1, 1, -1, 1),
        ];
        let rep = eigenvalue_rational_solvable(&cubic, &roots, &GaussRational::from_int(2)).unwrap();
        assert!(!rep.solvable);
        assert_eq!(rep.residues[0].1, GaussRational::one());
        assert_eq!(rep.residues[1].1, GaussRational::from_parts(-1, 2, -1, 2));
        assert_eq!(rep.residues[2].1, GaussRational::from_parts(-1, 2, 1, 2));

        let r = Ring::new(["X"], Field::Rational).unwrap();
        let quad = parse_poly("X^2 - X", &r).unwrap();
        let roots = [GaussRational::zero(), GaussRational::one()];
        let rep = eigenvalue_rational_solvable(&quad, &roots, &GaussRational::one()).unwrap();
        assert!(rep.solvable);
        let exps: Vec<i64> = rep.exponents.unwrap().iter().map(|(_, n)| n.to_i64().unwrap()).collect();
        assert_eq!(exps, vec![-1, 1]);
        assert_eq!(rep.witness.unwrap().to_string(), "(X - 1)/X");

        let rep = eigenvalue_rational_solvable(&quad, &roots, &GaussRational::zero()).unwrap();
        assert!(rep.solvable);
        assert!(rep.witness.unwrap().is_polynomial());

        assert!(matches!(
            eigenvalue_rational_solvable(&quad, &roots[..1], &GaussRational::one()),
            Err(Error::IncompleteRoots(_))
        ));
        let bad = [GaussRational::zero(), GaussRational::from_int(2)];
        assert!(matches!(
            eigenvalue_rational_solvable(&quad, &bad, &GaussRational::one()),
            Err(Error::IncompleteRoots(_))
        ));
        let sq = parse_poly("X^2", &r).unwrap();
        assert_eq!(
            eigenvalue_rational_solvable(&sq, &roots, &GaussRational::one()),
            Err(Error::NotSquarefree)
        );
    }
}
