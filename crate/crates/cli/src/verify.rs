//! Fixed regression suite over the cubic derivation `D v = v^3 - 2v^2 + 2v`
//! and its neighbours. Each check is deterministic (seeded) and reports a
//! one-line detail.

use std::time::Instant;

use diffalg::darboux::{
    cofactor_relations, darboux_search, eigenpoly_solve, eigenvalue_rational_solvable, first_integral,
};
use diffalg::derivation::{paper_derivation, Derivation};
use diffalg::diffideal::{is_differential_ideal, point_ideal, vector_field_zeros, IdealPresentation};
use diffalg::groebner::ideal_member;
use diffalg::parse::parse_poly;
use diffalg::scalar::rat;
use diffalg::{Field, GaussRational, Monomial, MultiPoly, Ring, RingRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

pub const CHECKS: [(&str, Check); 11] = [
    ("claim3", linear_factor_identity),
    ("leibniz", leibniz),
    ("degree-law", degree_law),
    ("cubic-residue", cubic_residue),
    ("remark-contrast", quadratic_contrast),
    ("plane-darboux", plane_darboux),
    ("first-integral", scaling_first_integral),
    ("groebner-divisibility", groebner_divisibility),
    ("eigen-roundtrip", eigen_roundtrip),
    ("plane-zeros", plane_zeros),
    ("truncated-ideals", truncated_ideals),
];

/// Runs every check, or only `only`; an unknown name is an error.
pub fn run_checks(only: Option<&str>) -> Result<Vec<CheckResult>, String> {
    let selected: Vec<&(&str, Check)> = match only {
        None => CHECKS.iter().collect(),
        Some(name) => {
            let hit: Vec<_> = CHECKS.iter().filter(|(n, _)| *n == name).collect();
            if hit.is_empty() {
                let names: Vec<&str> = CHECKS.iter().map(|(n, _)| *n).collect();
                return Err(format!("unknown check `{}`; available: {}", name, names.join(", ")));
            }
            hit
        }
    };
    Ok(selected
        .into_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let outcome = check();
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name,
                passed,
                seconds,
                detail,
            }
        })
        .collect())
}

fn err(e: diffalg::Error) -> String {
    e.to_string()
}

fn ring(names: &[&str], field: Field) -> RingRef {
    Ring::new(names.iter().copied(), field).expect("valid ring")
}

fn random_poly(rng: &mut ChaCha8Rng, r: &RingRef, degree: u32, terms: usize) -> MultiPoly {
    let monos = Monomial::all_up_to_degree(r.nvars(), degree);
    let count = rng.gen_range(0..=terms);
    MultiPoly::from_terms(
        r,
        (0..count).map(|_| {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            (m, GaussRational::from_rational(rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))))
        }),
    )
}

fn random_nonconstant(rng: &mut ChaCha8Rng, r: &RingRef, degree: u32, terms: usize) -> MultiPoly {
    loop {
        let p = random_poly(rng, r, degree, terms);
        if !p.is_constant() {
            return p;
        }
    }
}

fn wronskian(n: &MultiPoly, m: &MultiPoly, d: &Derivation) -> Result<MultiPoly, String> {
    Ok(&(m * &d.apply(n).map_err(err)?) - &(n * &d.apply(m).map_err(err)?))
}

fn linear_factor_identity() -> Result<String, String> {
    let d = paper_derivation(&["X", "a"], Field::Rational).map_err(err)?;
    let lin = parse_poly("X - a", d.ring()).map_err(err)?;
    let q = parse_poly("X^2 + a*X + a^2 - 2*(X + a) + 2", d.ring()).map_err(err)?;
    let got = d.apply(&lin).map_err(err)?;
    if got == &lin * &q {
        Ok(format!("D(X - a) = {}", got))
    } else {
        Err(format!("D(X - a) = {}", got))
    }
}

fn leibniz() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let n = rng.gen_range(1..=3);
        let names: Vec<String> = (0..n).map(|k| format!("x{}", k)).collect();
        let r = Ring::new(names, Field::Rational).map_err(err)?;
        let d = if case % 2 == 0 {
            Derivation::cubic(&r)
        } else {
            let images = (0..n).map(|_| random_poly(&mut rng, &r, 3, 4)).collect();
            Derivation::new(&r, images).map_err(err)?
        };
        let f = random_poly(&mut rng, &r, 4, 6);
        let g = random_poly(&mut rng, &r, 4, 6);
        let lhs = d.apply(&(&f * &g)).map_err(err)?;
        let rhs = &(&f * &d.apply(&g).map_err(err)?) + &(&g * &d.apply(&f).map_err(err)?);
        if lhs != rhs {
            return Err(format!("fails for f = {}, g = {}", f, g));
        }
    }
    Ok("1000 random pairs".into())
}

fn degree_law() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let r = ring(&["x", "y", "z"], Field::Rational);
    let d = Derivation::cubic(&r);
    for _ in 0..200 {
        let f = random_nonconstant(&mut rng, &r, 4, 5);
        let df = d.apply(&f).map_err(err)?;
        for v in f.occurring_vars() {
            if df.degree_in(v) != f.degree_in(v) + 2 {
                return Err(format!("degree in {} of D({}) is {}", r.vars()[v], f, df.degree_in(v)));
            }
        }
    }
    Ok("200 random polynomials".into())
}

fn cubic_residue() -> Result<String, String> {
    let r = ring(&["X"], Field::Gaussian);
    let p = parse_poly("X^3 - 2*X^2 + 2*X", &r).map_err(err)?;
    let roots = [
        GaussRational::zero(),
        GaussRational::from_parts(1, 1, 1, 1),
        GaussRational::from_parts(1, 1, -1, 1),
    ];
    let mut count = 0;
    for num in (-10..=10i64).filter(|&n| n != 0) {
        for den in 1..=10i64 {
            let c = GaussRational::from_rational(rat(num, den));
            let rep = eigenvalue_rational_solvable(&p, &roots, &c).map_err(err)?;
            if rep.solvable {
                return Err(format!("c = {} reported solvable", c));
            }
            count += 1;
        }
    }
    Ok(format!("{} eigenvalues unsolvable", count))
}

fn quadratic_contrast() -> Result<String, String> {
    let r = ring(&["X"], Field::Rational);
    let p = parse_poly("X^2 - X", &r).map_err(err)?;
    let d = Derivation::new(&r, vec![p.clone()]).map_err(err)?;
    let roots = [GaussRational::zero(), GaussRational::one()];
    for c in (-5..=5i64).filter(|&c| c != 0) {
        let cc = GaussRational::from_int(c);
        let rep = eigenvalue_rational_solvable(&p, &roots, &cc).map_err(err)?;
        let y = match (rep.solvable, rep.witness) {
            (true, Some(y)) => y,
            _ => return Err(format!("c = {} reported unsolvable", c)),
        };
        if wronskian(y.num(), y.den(), &d)? != (y.num() * y.den()).scale(&cc) {
            return Err(format!("witness {} fails for c = {}", y, c));
        }
    }
    Ok("solvable for every integer 0 < |c| <= 5".into())
}

fn plane_darboux() -> Result<String, String> {
    let d = paper_derivation(&["X1", "X2"], Field::Rational).map_err(err)?;
    let space = darboux_search(&d, 4).map_err(err)?;
    for want in ["X1", "X2", "X1^2 - 2*X1 + 2", "X2^2 - 2*X2 + 2", "X1 - X2"] {
        if !space.pairs.iter().any(|p| p.f.render() == want) {
            return Err(format!("missing {}", want));
        }
    }
    for p in &space.pairs {
        if d.apply(&p.f).map_err(err)? != &p.w * &p.f {
            return Err(format!("pair {} does not verify", p.f));
        }
    }
    if !space.families.is_empty() {
        return Err(format!("{} family flags raised", space.families.len()));
    }
    Ok(format!("{} pairs, no families", space.pairs.len()))
}

fn scaling_first_integral() -> Result<String, String> {
    let r = ring(&["x", "y"], Field::Rational);
    let d = Derivation::new(&r, vec![parse_poly("x", &r).map_err(err)?, parse_poly("2*y", &r).map_err(err)?])
        .map_err(err)?;
    let space = darboux_search(&d, 1).map_err(err)?;
    let rels = cofactor_relations(&space);
    let rel = rels.first().ok_or("no relation found")?;
    let fi = first_integral(&space, &d, rel).map_err(err)?;
    if fi.to_string() != "y/x^2" {
        return Err(format!("got {}", fi));
    }
    if !wronskian(fi.num(), fi.den(), &d)?.is_zero() {
        return Err("derivative is not zero".into());
    }
    Ok(format!("{} is constant", fi))
}

fn groebner_divisibility() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = ring(&["x", "y"], Field::Rational);
    for case in 0..200 {
        let g = random_nonconstant(&mut rng, &r, 2, 3);
        let p = if case % 2 == 0 {
            &g * &random_poly(&mut rng, &r, 2, 3)
        } else {
            random_poly(&mut rng, &r, 4, 5)
        };
        if ideal_member(&p, std::slice::from_ref(&g)).map_err(err)? != p.exact_divide(&g).is_ok() {
            return Err(format!("disagreement for p = {}, g = {}", p, g));
        }
    }
    Ok("200 principal cases agree".into())
}

fn eigen_roundtrip() -> Result<String, String> {
    let d = paper_derivation(&["X1", "X2"], Field::Rational).map_err(err)?;
    let space = darboux_search(&d, 4).map_err(err)?;
    for p in &space.pairs {
        let var = p
            .f
            .occurring_vars()
            .into_iter()
            .find(|&v| p.f.leading_coeff_in(v).is_constant())
            .ok_or_else(|| format!("{} has no variable with constant leading coefficient", p.f))?;
        let back = eigenpoly_solve(&p.w, &d, &d.ring().vars()[var]).map_err(err)?;
        if back.as_ref() != Some(&p.f) {
            return Err(format!("cofactor of {} gave {:?}", p.f, back.map(|b| b.render())));
        }
    }
    Ok(format!("{} pairs recovered", space.pairs.len()))
}

fn plane_zeros() -> Result<String, String> {
    let d = paper_derivation(&["X1", "X2"], Field::Gaussian).map_err(err)?;
    let zeros = vector_field_zeros(&d).map_err(err)?;
    if zeros.points.len() != 9 || zeros.curve.is_some() {
        return Err(format!("{} points", zeros.points.len()));
    }
    for p in &zeros.points {
        let ideal = point_ideal(d.ring(), p).map_err(err)?;
        if !is_differential_ideal(&ideal, &d).map_err(err)? {
            return Err(format!("({}, {}) is not a differential point", p.x, p.y));
        }
    }
    Ok("9 differential points".into())
}

fn truncated_ideals() -> Result<String, String> {
    let d = paper_derivation(&["a1", "a2", "a3", "a4", "X"], Field::Gaussian).map_err(err)?;
    let r = d.ring();
    for j in 1..=4 {
        let ideal = IdealPresentation::principal(parse_poly(&format!("X - a{}", j), r).map_err(err)?);
        if !is_differential_ideal(&ideal, &d).map_err(err)? {
            return Err(format!("(X - a{}) is not differential", j));
        }
        if ideal.contains(&MultiPoly::one(r)).map_err(err)? {
            return Err(format!("(X - a{}) is the unit ideal", j));
        }
    }
    Ok("(X - aj) proper and differential for j = 1..4".into())
}
