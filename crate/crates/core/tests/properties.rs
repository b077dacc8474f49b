mod common;

use diffalg::darboux::{
    cofactor, cofactor_relations, darboux_search, eigenpoly_solve, eigenvalue_rational_solvable, first_integral,
};
use diffalg::derivation::{paper_derivation, Derivation};
use diffalg::diffideal::{
    is_differential_ideal, principal_radical_differential, saturating_element, vector_field_zeros,
    IdealPresentation, SaturationShape,
};
use diffalg::gcd::{gcd, squarefree_part};
use diffalg::groebner::{buchberger, ideal_member, MonomialOrder};
use diffalg::linalg::{integer_scale, nullspace, ExactMatrix};
use diffalg::parse::parse_poly;
use diffalg::roots::roots_in_field;
use diffalg::{Error, Field, GaussRational, Monomial, MultiPoly, Ring, RingRef};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

fn field_of(gaussian: bool) -> Field {
    if gaussian {
        Field::Gaussian
    } else {
        Field::Rational
    }
}

fn ring(nvars: usize, field: Field) -> RingRef {
    let names: Vec<String> = (0..nvars).map(|k| format!("x{}", k)).collect();
    Ring::new(names, field).unwrap()
}

fn random_derivation(rng: &mut ChaCha8Rng, r: &RingRef) -> Derivation {
    let images = (0..r.nvars()).map(|_| common::random_poly(rng, r, 3, 4)).collect();
    Derivation::new(r, images).unwrap()
}

/// D(N/M) = 0 exactly when M DN - N DM = 0.
fn wronskian(n: &MultiPoly, m: &MultiPoly, d: &Derivation) -> MultiPoly {
    &(m * &d.apply(n).unwrap()) - &(n * &d.apply(m).unwrap())
}

/// Irreducible Darboux polynomials of the cubic derivation on two variables.
fn plane_darboux(r: &RingRef) -> Vec<MultiPoly> {
    ["x0", "x1", "x0 - x1", "x0^2 - 2*x0 + 2", "x1^2 - 2*x1 + 2"]
        .iter()
        .map(|s| parse_poly(s, r).unwrap())
        .collect()
}

/// A product of a nonempty random selection of `factors`, each with
/// exponent 1..=max_exp, together with the distinct factors used.
fn random_product(rng: &mut ChaCha8Rng, factors: &[MultiPoly], max_exp: u32) -> (MultiPoly, Vec<MultiPoly>) {
    let r = factors[0].ring().clone();
    loop {
        let mut used = Vec::new();
        let mut f = MultiPoly::one(&r);
        for q in factors {
            if rng.gen_bool(0.5) {
                f = &f * &q.pow(rng.gen_range(1..=max_exp));
                used.push(q.clone());
            }
        }
        if !used.is_empty() {
            return (f, used);
        }
    }
}

proptest! {
    #![proptest_config(cases(96))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), n in 1usize..=3, gaussian in any::<bool>()) {
        let mut rng = common::seeded(seed);
        let r = ring(n, field_of(gaussian));
        let f = common::random_poly(&mut rng, &r, 3, 5);
        let g = common::random_poly(&mut rng, &r, 3, 5);
        let h = common::random_poly(&mut rng, &r, 3, 5);
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &MultiPoly::one(&r), f.clone());
    }

    #[test]
    fn exact_divide_undoes_multiplication(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::seeded(seed);
        let r = ring(n, Field::Gaussian);
        let f = common::random_poly(&mut rng, &r, 3, 4);
        let g = common::random_nonzero(&mut rng, &r, 3, 4);
        prop_assert_eq!((&f * &g).exact_divide(&g).unwrap(), f);
    }

    #[test]
    fn gcd_divides_and_keeps_common_factor(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = common::seeded(seed);
        let r = ring(n, Field::Rational);
        let k = common::random_nonzero(&mut rng, &r, 2, 3);
        let f = &common::random_nonzero(&mut rng, &r, 2, 3) * &k;
        let h = &common::random_nonzero(&mut rng, &r, 2, 3) * &k;
        let g = gcd(&f, &h).unwrap();
        prop_assert!(g.divides(&f) && g.divides(&h));
        prop_assert!(k.divides(&g));
    }

    #[test]
    fn substitution_is_a_homomorphism(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = common::seeded(seed);
        let r = ring(n, Field::Gaussian);
        let f = common::random_poly(&mut rng, &r, 3, 4);
        let g = common::random_poly(&mut rng, &r, 3, 4);
        let v = common::random_poly(&mut rng, &r, 2, 3);
        let idx = rng.gen_range(0..n);
        prop_assert_eq!((&f * &g).substitute_at(idx, &v), &f.substitute_at(idx, &v) * &g.substitute_at(idx, &v));
        prop_assert_eq!((&f + &g).substitute_at(idx, &v), &f.substitute_at(idx, &v) + &g.substitute_at(idx, &v));
        let point: Vec<GaussRational> = (0..n).map(|_| common::small_scalar(&mut rng, Field::Gaussian)).collect();
        prop_assert_eq!((&f * &g).evaluate(&point), &f.evaluate(&point) * &g.evaluate(&point));
    }

    #[test]
    fn leibniz_and_linearity(seed in any::<u64>(), n in 1usize..=3, gaussian in any::<bool>()) {
        let mut rng = common::seeded(seed);
        let r = ring(n, field_of(gaussian));
        let d = random_derivation(&mut rng, &r);
        let f = common::random_poly(&mut rng, &r, 3, 4);
        let g = common::random_poly(&mut rng, &r, 3, 4);
        let a = common::small_scalar(&mut rng, r.field());
        let b = common::small_scalar(&mut rng, r.field());
        let (df, dg) = (d.apply(&f).unwrap(), d.apply(&g).unwrap());
        prop_assert_eq!(d.apply(&(&f * &g)).unwrap(), &(&f * &dg) + &(&g * &df));
        prop_assert_eq!(d.apply(&(&f.scale(&a) + &g.scale(&b))).unwrap(), &df.scale(&a) + &dg.scale(&b));
        prop_assert!(d.apply(&MultiPoly::constant(&r, a)).unwrap().is_zero());
    }

    #[test]
    fn cubic_derivation_raises_degree_by_two(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::seeded(seed);
        let r = ring(n, Field::Rational);
        let d = Derivation::cubic(&r);
        let f = common::random_nonconstant(&mut rng, &r, 4, 5);
        let df = d.apply(&f).unwrap();
        for v in f.occurring_vars() {
            prop_assert_eq!(df.degree_in(v), f.degree_in(v) + 2);
        }
    }

    #[test]
    fn nullspace_matches_rank(seed in any::<u64>(), rows in 1usize..=4, cols in 1usize..=5) {
        let mut rng = common::seeded(seed);
        let m = ExactMatrix::from_rows(
            (0..rows)
                .map(|_| (0..cols).map(|_| {
                    if rng.gen_bool(0.3) { GaussRational::zero() } else { common::small_scalar(&mut rng, Field::Gaussian) }
                }).collect())
                .collect(),
        );
        let basis = nullspace(&m);
        prop_assert_eq!(basis.len() + m.rank(), cols);
        for v in &basis {
            prop_assert!(m.mul_vec(v).iter().all(GaussRational::is_zero));
        }
    }

    #[test]
    fn integer_scale_is_proportional(seed in any::<u64>(), len in 1usize..=5) {
        let mut rng = common::seeded(seed);
        let v: Vec<GaussRational> = (0..len).map(|_| common::small_scalar(&mut rng, Field::Rational)).collect();
        prop_assume!(v.iter().any(|c| !c.is_zero()));
        let w = integer_scale(&v).unwrap();
        let wq: Vec<GaussRational> = w.iter().map(|k| GaussRational::from_bigint(k.clone())).collect();
        for i in 0..len {
            for j in 0..len {
                prop_assert_eq!(&wq[i] * &v[j], &wq[j] * &v[i]);
            }
        }
        let g = w.iter().fold(BigInt::from(0), |acc, k| num_integer::Integer::gcd(&acc, k));
        prop_assert_eq!(g, BigInt::from(1));
    }

    #[test]
    fn reduction_is_idempotent_and_stays_in_coset(seed in any::<u64>(), lex in any::<bool>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let gens: Vec<MultiPoly> = (0..rng.gen_range(1..=2)).map(|_| common::random_nonconstant(&mut rng, &r, 2, 3)).collect();
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::GradedLex };
        let gb = buchberger(&gens, order).unwrap();
        let p = common::random_poly(&mut rng, &r, 3, 4);
        let once = gb.reduce(&p).unwrap();
        prop_assert_eq!(gb.reduce(&once).unwrap(), once.clone());
        prop_assert!(gb.contains(&(&p - &once)).unwrap());
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
        }
    }

    #[test]
    fn membership_ignores_generator_order(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let mut gens: Vec<MultiPoly> = (0..3).map(|_| common::random_nonconstant(&mut rng, &r, 2, 3)).collect();
        let p = if rng.gen_bool(0.5) {
            gens.iter().fold(MultiPoly::zero(&r), |acc, g| &acc + &(g * &common::random_poly(&mut rng, &r, 1, 2)))
        } else {
            common::random_poly(&mut rng, &r, 3, 4)
        };
        let before = ideal_member(&p, &gens).unwrap();
        gens.shuffle(&mut rng);
        prop_assert_eq!(ideal_member(&p, &gens).unwrap(), before);
        let lex = buchberger(&gens, MonomialOrder::Lex).unwrap();
        prop_assert_eq!(lex.contains(&p).unwrap(), before);
    }
}

proptest! {
    #![proptest_config(cases(500))]

    #[test]
    fn render_then_parse_round_trips(seed in any::<u64>(), n in 1usize..=3, gaussian in any::<bool>()) {
        let mut rng = common::seeded(seed);
        let r = ring(n, field_of(gaussian));
        let f = common::random_poly(&mut rng, &r, 4, 6);
        prop_assert_eq!(parse_poly(&f.render(), &r).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn principal_membership_is_divisibility(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let g = common::random_nonconstant(&mut rng, &r, 2, 3);
        let p = if rng.gen_bool(0.5) {
            &g * &common::random_poly(&mut rng, &r, 2, 3)
        } else {
            common::random_poly(&mut rng, &r, 4, 5)
        };
        prop_assert_eq!(ideal_member(&p, std::slice::from_ref(&g)).unwrap(), p.exact_divide(&g).is_ok());
    }

    #[test]
    fn principal_differential_iff_darboux(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let d = if rng.gen_bool(0.5) { Derivation::cubic(&r) } else { random_derivation(&mut rng, &r) };
        let f = if rng.gen_bool(0.5) {
            random_product(&mut rng, &plane_darboux(&r), 2).0
        } else {
            common::random_nonconstant(&mut rng, &r, 3, 4)
        };
        let ideal = IdealPresentation::principal(f.clone());
        prop_assert_eq!(is_differential_ideal(&ideal, &d).unwrap(), cofactor(&f, &d).unwrap().is_some());
    }
}

proptest! {
    #![proptest_config(cases(50))]

    #[test]
    fn eigenpoly_recovers_darboux_products(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let d = Derivation::cubic(&r);
        let (f, _) = random_product(&mut rng, &plane_darboux(&r), 2);
        let w = cofactor(&f, &d).unwrap().expect("products of Darboux polynomials are Darboux");
        let var = f.occurring_vars().into_iter().find(|&v| f.leading_coeff_in(v).is_constant());
        prop_assume!(var.is_some());
        let var = var.unwrap();
        let got = eigenpoly_solve(&w, &d, &r.vars()[var]).unwrap();
        prop_assert_eq!(got, Some(f.monic()));
    }

    #[test]
    fn principal_radical_holds_for_darboux_products(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let d = Derivation::cubic(&r);
        let (f, used) = random_product(&mut rng, &plane_darboux(&r), 3);
        prop_assert!(principal_radical_differential(&f, &used, &d).unwrap());
        let sqf = used.iter().fold(MultiPoly::one(&r), |acc, q| &acc * q);
        prop_assert_eq!(squarefree_part(&f).unwrap(), sqf.monic());
    }

    #[test]
    fn residue_report_is_sound(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = common::seeded(seed);
        let r = ring(1, Field::Rational);
        let x = MultiPoly::var_at(&r, 0);
        let mut roots: Vec<i64> = (-4..=4).collect();
        roots.shuffle(&mut rng);
        roots.truncate(k);
        let p = roots.iter().fold(MultiPoly::one(&r), |acc, &a| &acc * &(&x - &MultiPoly::from_int(&r, a)));
        let (num, den) = (rng.gen_range(-12i64..=12), rng.gen_range(1i64..=3));
        prop_assume!(num != 0);
        let c = GaussRational::from_rational(diffalg::scalar::rat(num, den));
        let report = eigenvalue_rational_solvable(&p, &roots.iter().map(|&a| GaussRational::from_int(a)).collect::<Vec<_>>(), &c).unwrap();
        // Brute force over small exponents: den * sum e_r p/(X - r) == num,
        // with the quotients as integer coefficient vectors.
        let quotients: Vec<Vec<i64>> = roots
            .iter()
            .map(|&a| {
                let q = p.exact_divide(&(&x - &MultiPoly::from_int(&r, a))).unwrap();
                (0..k)
                    .map(|j| q.coeff(&Monomial::var(1, 0, j as u32)).as_integer().unwrap().try_into().unwrap())
                    .collect()
            })
            .collect();
        let mut e = vec![-12i64; k];
        let mut brute = false;
        'grid: loop {
            let hit = (0..k).all(|j| {
                let s: i64 = quotients.iter().zip(&e).map(|(q, &ek)| q[j] * ek).sum();
                den * s == if j == 0 { num } else { 0 }
            });
            if hit {
                brute = true;
                break;
            }
            for slot in e.iter_mut() {
                *slot += 1;
                if *slot <= 12 {
                    continue 'grid;
                }
                *slot = -12;
            }
            break;
        }
        prop_assert_eq!(report.solvable, brute);
        if let Some(y) = report.witness {
            let d = Derivation::new(&r, vec![p.clone()]).unwrap();
            prop_assert_eq!(wronskian(y.num(), y.den(), &d), (y.num() * y.den()).scale(&c));
        }
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn first_integrals_are_constant(a in 1i64..=4, b in 1i64..=4) {
        let r = ring(2, Field::Rational);
        let x = MultiPoly::var_at(&r, 0);
        let y = MultiPoly::var_at(&r, 1);
        let d = Derivation::new(&r, vec![x.scale(&GaussRational::from_int(a)), y.scale(&GaussRational::from_int(b))]).unwrap();
        let space = darboux_search(&d, 1).unwrap();
        let relations = cofactor_relations(&space);
        prop_assert!(!relations.is_empty() || !space.families.is_empty());
        for rel in &relations {
            let fi = first_integral(&space, &d, rel).unwrap();
            prop_assert!(wronskian(fi.num(), fi.den(), &d).is_zero());
        }
    }

    #[test]
    fn univariate_darboux_matches_factor_oracle(mask in 1u8..32) {
        let r = ring(1, Field::Rational);
        let known: Vec<MultiPoly> = ["x0", "x0 - 1", "x0 + 2", "x0^2 + 1", "x0^2 - 2"]
            .iter()
            .map(|s| parse_poly(s, &r).unwrap())
            .collect();
        let chosen: Vec<MultiPoly> = known.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, q)| q.clone()).collect();
        let p = chosen.iter().fold(MultiPoly::one(&r), |acc, q| &acc * q);
        let d = Derivation::new(&r, vec![p]).unwrap();
        let space = darboux_search(&d, 2).unwrap();
        let mut found: Vec<String> = space.pairs.iter().map(|pair| pair.f.render()).collect();
        let mut want: Vec<String> = chosen.iter().map(MultiPoly::render).collect();
        found.sort();
        want.sort();
        prop_assert_eq!(found, want);
        prop_assert!(space.families.is_empty());
        for q in &known {
            prop_assert_eq!(cofactor(q, &d).unwrap().is_some(), chosen.contains(q));
        }
    }

    #[test]
    fn isolated_zeros_annihilate_the_field(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3) {
        prop_assume!(a != b);
        let r = ring(2, Field::Rational);
        let x = MultiPoly::var_at(&r, 0);
        let y = MultiPoly::var_at(&r, 1);
        let int = |k: i64| MultiPoly::from_int(&r, k);
        let dx = &(&x - &int(a)) * &(&x - &int(b));
        let dy = &(&y - &int(c)) * &(&x + &y);
        let d = Derivation::new(&r, vec![dx, dy]).unwrap();
        let zeros = vector_field_zeros(&d).unwrap();
        prop_assert!(zeros.curve.is_none());
        let expect = [(a, c), (a, -a), (b, c), (b, -b)];
        let mut distinct: Vec<(i64, i64)> = expect.to_vec();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(zeros.points.len(), distinct.len());
        for pt in &zeros.points {
            let point = [pt.x.clone(), pt.y.clone()];
            for image in d.images() {
                prop_assert!(image.evaluate(&point).is_zero());
            }
        }
    }

    #[test]
    fn saturating_element_lies_outside(seed in any::<u64>()) {
        let mut rng = common::seeded(seed);
        let r = ring(2, Field::Rational);
        let d = if rng.gen_bool(0.5) { Derivation::cubic(&r) } else { random_derivation(&mut rng, &r) };
        let f = common::random_nonconstant(&mut rng, &r, 2, 3);
        let ideal = IdealPresentation::principal(f).with_height(1);
        match saturating_element(&ideal, &d, None) {
            Ok(s) => {
                prop_assert_eq!(s.shape, SaturationShape::DimensionOne);
                prop_assert!(!ideal.contains(&s.element).unwrap());
            }
            Err(Error::NoCandidate(_)) => {
                for image in d.images() {
                    prop_assert!(ideal.contains(image).unwrap());
                }
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn roots_of_split_products_are_found(seed in any::<u64>(), gaussian in any::<bool>(), extra in any::<bool>()) {
        let mut rng = common::seeded(seed);
        let field = field_of(gaussian);
        let r = ring(1, field);
        let x = MultiPoly::var_at(&r, 0);
        let mut roots: Vec<GaussRational> = Vec::new();
        let mut p = MultiPoly::one(&r);
        for _ in 0..rng.gen_range(1..=5) {
            let root = common::small_scalar(&mut rng, field);
            p = &p * &(&x - &MultiPoly::constant(&r, root.clone()));
            if !roots.contains(&root) {
                roots.push(root);
            }
        }
        if extra {
            p = &p * &parse_poly("x0^2 + 2", &r).unwrap();
        }
        let report = roots_in_field(&p, 0, field).unwrap();
        prop_assert_eq!(report.roots.len(), roots.len());
        for root in &roots {
            prop_assert!(report.roots.contains(root));
        }
        prop_assert_eq!(report.unresolved.is_empty(), !extra);
    }
}

#[test]
fn plane_saturating_element_is_divisible_by_each_darboux_polynomial() {
    let d = paper_derivation(&["x0", "x1"], Field::Rational).unwrap();
    let space = darboux_search(&d, 2).unwrap();
    let s = saturating_element(&IdealPresentation::zero(d.ring()), &d, Some(&space)).unwrap();
    assert_eq!(s.shape, SaturationShape::Plane);
    assert!(!s.element.is_zero());
    for f in space.polynomials() {
        assert!(f.divides(&s.element));
    }
}
