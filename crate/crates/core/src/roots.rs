//! Exact roots of univariate polynomials in Q or Q(i), and resultants.
//!
//! Rational roots come from Hensel lifting the simple roots modulo a small
//! prime and rational reconstruction, each candidate then checked exactly.
//! Gaussian roots `a + b i` are the rational solutions of
//! `Re P(a + b i) = Im P(a + b i) = 0`, found by eliminating `b` with a
//! resultant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{Field, GaussRational, Rational};

/// Distinct roots found in the field plus the factors left without roots
/// there (as polynomials in the input variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub roots: Vec<GaussRational>,
    pub unresolved: Vec<MultiPoly>,
}

/// Roots of `p`, which may only involve variable `var`, in `field`.
pub fn roots_in_field(p: &MultiPoly, var: usize, field: Field) -> Result<RootReport> {
    if p.occurring_vars().iter().any(|&v| v != var) {
        return Err(Error::UnsupportedShape("polynomial is not univariate".into()));
    }
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let coeffs: Vec<GaussRational> = p
        .coefficients_in(var)
        .iter()
        .map(|c| c.constant_value().expect("univariate"))
        .collect();
    if field == Field::Rational && coeffs.iter().any(|c| !c.is_real()) {
        return Err(Error::FieldMismatch("non-rational coefficient over Q".into()));
    }
    let sqf = dense_squarefree(&coeffs);
    let mut roots = match field {
        Field::Rational => {
            let real: Vec<Rational> = sqf.iter().map(|c| c.re.clone()).collect();
            rational_roots(&real)
                .into_iter()
                .map(GaussRational::from_rational)
                .collect()
        }
        Field::Gaussian => gaussian_roots(&sqf),
    };
    roots.sort_by(|a, b| a.canonical_cmp(b));
    roots.dedup();

    let mut rest = sqf;
    for r in &roots {
        rest = dense_deflate(&rest, r);
    }
    let mut unresolved = Vec::new();
    if rest.len() > 1 {
        let ring = p.ring();
        let n = ring.nvars();
        let q = MultiPoly::from_terms(
            ring,
            rest.iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(n, var, k as u32), c.clone())),
        );
        unresolved.push(q.monic());
    }
    Ok(RootReport { roots, unresolved })
}

// ---- dense univariate helpers over Q(i), coefficients low to high ----

type Dense = Vec<GaussRational>;

fn trim(mut v: Dense) -> Dense {
    while v.last().is_some_and(GaussRational::is_zero) {
        v.pop();
    }
    v
}

fn dense_eval(p: &[GaussRational], x: &GaussRational) -> GaussRational {
    p.iter().rev().fold(GaussRational::zero(), |acc, c| &(&acc * x) + c)
}

fn dense_derivative(p: &[GaussRational]) -> Dense {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &GaussRational::from_int(k as i64))
        .collect()
}

fn dense_divrem(a: &[GaussRational], b: &[GaussRational]) -> (Dense, Dense) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lb_inv = b.last().expect("nonzero divisor").inv().expect("nonzero");
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![GaussRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") * &lb_inv;
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] -= &(&c * bc);
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (q, r)
}

fn dense_monic(p: Dense) -> Dense {
    let p = trim(p);
    match p.last() {
        None => p,
        Some(l) => {
            let inv = l.inv().expect("nonzero");
            p.iter().map(|c| c * &inv).collect()
        }
    }
}

fn dense_gcd(a: &[GaussRational], b: &[GaussRational]) -> Dense {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = dense_divrem(&a, &b);
        a = b;
        b = r;
    }
    dense_monic(a)
}

fn dense_squarefree(p: &[GaussRational]) -> Dense {
    let p = trim(p.to_vec());
    if p.len() <= 2 {
        return dense_monic(p);
    }
    let g = dense_gcd(&p, &dense_derivative(&p));
    dense_monic(dense_divrem(&p, &g).0)
}

/// Divides out `(x - r)`; `r` must be a root.
fn dense_deflate(p: &[GaussRational], r: &GaussRational) -> Dense {
    let lin = vec![-r, GaussRational::one()];
    let (q, rem) = dense_divrem(p, &lin);
    debug_assert!(rem.is_empty());
    q
}

// ---- rational roots ----

/// Distinct rational roots of a polynomial with rational coefficients.
pub fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let dense: Dense = p.iter().cloned().map(GaussRational::from_rational).collect();
    let mut sqf: Vec<Rational> = dense_squarefree(&dense).into_iter().map(|c| c.re).collect();
    let mut out = Vec::new();
    if sqf.len() <= 1 {
        return out;
    }
    if sqf[0].is_zero() {
        out.push(Rational::zero());
        sqf.remove(0);
    }
    let ints = clear_denominators(&sqf);
    match ints.len() {
        0 | 1 => {}
        2 => out.push(Rational::new(-ints[0].clone(), ints[1].clone())),
        _ => out.extend(padic_rational_roots(&ints)),
    }
    out.sort();
    out
}

fn clear_denominators(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

fn fp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    result
}

fn fp_gcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let mut a = fp_trim(a);
    let mut b = fp_trim(b);
    while !b.is_empty() {
        let inv = fp_inv(*b.last().expect("nonzero"), p);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = (*a.last().expect("nonempty") as u128 * inv as u128 % p as u128) as u64;
            for (k, &bc) in b.iter().enumerate() {
                let sub = (c as u128 * bc as u128 % p as u128) as u64;
                a[shift + k] = (a[shift + k] + p - sub) % p;
            }
            a = fp_trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn fp_eval(p: &[u64], x: u64, m: u64) -> u64 {
    p.iter()
        .rev()
        .fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % m as u128) as u64
}

fn big_eval(p: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    p.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn big_modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Rational `u/v` with `|u| <= n_bound`, `0 < v <= d_bound` and `u = a v mod m`.
fn rational_reconstruct(a: &BigInt, m: &BigInt, n_bound: &BigInt, d_bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > n_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > d_bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn derivative_int(p: &[BigInt]) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

fn squarefree_mod(p: &[BigInt], deriv: &[BigInt], q: u64) -> bool {
    let pm: Vec<u64> = p.iter().map(|c| mod_u64(c, q)).collect();
    let dm: Vec<u64> = deriv.iter().map(|c| mod_u64(c, q)).collect();
    fp_gcd(pm, dm, q).len() == 1
}

/// Lifts every root of `p` mod `prime` to a root mod `prime^(2^j)`, the
/// first such power exceeding `bound`. `p` must be squarefree mod `prime`
/// with a leading coefficient prime to it.
fn hensel_roots(p: &[BigInt], prime: u64, bound: &BigInt) -> (Vec<BigInt>, BigInt) {
    let deriv = derivative_int(p);
    let pm: Vec<u64> = p.iter().map(|c| mod_u64(c, prime)).collect();
    let mut target = BigInt::from(prime);
    while &target <= bound {
        target = &target * &target;
    }
    let mut out = Vec::new();
    for r in (0..prime).filter(|&x| fp_eval(&pm, x, prime) == 0) {
        let mut modulus = BigInt::from(prime);
        let mut root = BigInt::from(r);
        while modulus < target {
            modulus = &modulus * &modulus;
            let f = big_eval(p, &root, &modulus);
            let df = big_eval(&deriv, &root, &modulus);
            let inv = big_modinv(&df, &modulus).expect("simple root");
            root = (&root - f * inv).mod_floor(&modulus);
        }
        out.push(root);
    }
    (out, target)
}

/// Rational roots of a squarefree integer polynomial with nonzero constant
/// term and degree >= 2.
fn padic_rational_roots(p: &[BigInt]) -> Vec<Rational> {
    let lc = p.last().expect("nonempty").abs();
    let a0 = p[0].abs();
    let deriv = derivative_int(p);
    let prime = small_primes()
        .find(|&q| mod_u64(&lc, q) != 0 && squarefree_mod(p, &deriv, q))
        .expect("some prime keeps the polynomial squarefree");
    let bound = BigInt::from(2) * &a0 * &lc;
    let (lifted, modulus) = hensel_roots(p, prime, &bound);
    let dense: Vec<GaussRational> = p.iter().map(|c| GaussRational::from_bigint(c.clone())).collect();
    lifted
        .iter()
        .filter_map(|root| rational_reconstruct(root, &modulus, &a0, &lc))
        .filter(|q| dense_eval(&dense, &GaussRational::from_rational(q.clone())).is_zero())
        .collect()
}

// ---- Gaussian roots ----

fn gaussian_roots(p: &[GaussRational]) -> Vec<GaussRational> {
    let p = trim(p.to_vec());
    match p.len() {
        0 | 1 => return vec![],
        2 => return vec![-&(&p[0] / &p[1])],
        3 => {
            // quadratic formula
            let (c, b, a) = (&p[0], &p[1], &p[2]);
            let disc = &(b * b) - &(&(a * c) * &GaussRational::from_int(4));
            return match disc.sqrt() {
                Some(s) => {
                    let two_a = a * &GaussRational::from_int(2);
                    let mut v = vec![&(&-b + &s) / &two_a, &(&-b - &s) / &two_a];
                    v.dedup();
                    v
                }
                None => vec![],
            };
        }
        _ => {}
    }
    padic_gaussian_roots(&p)
}

/// Roots in Q(i) of a squarefree polynomial of degree >= 1.
///
/// With Gaussian-integer coefficients `c_k`, every root `r` has `c_n r` a
/// Gaussian integer `s`, a root of the monic `Q(x) = c_n^(n-1) P(x / c_n)`.
/// For a prime `p = 1 mod 4` with `j^2 = -1 mod p`, the two ring maps
/// `i -> +j` and `i -> -j` send `s = x + y i` to `x + y j` and `x - y j`,
/// which determine `x` and `y` once lifted past twice their size bound.
fn padic_gaussian_roots(p: &[GaussRational]) -> Vec<GaussRational> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
    let lf = GaussRational::from_bigint(l);
    let ints: Vec<GaussRational> = p.iter().map(|c| c * &lf).collect();
    let n = ints.len() - 1;
    let lc = ints[n].clone();
    let mut monic = vec![GaussRational::one(); n + 1];
    let mut scale = GaussRational::one();
    for k in (0..n).rev() {
        monic[k] = &ints[k] * &scale;
        scale = &scale * &lc;
    }
    let parts = |c: &GaussRational| (c.re.to_integer(), c.im.to_integer());
    let monic: Vec<(BigInt, BigInt)> = monic.iter().map(parts).collect();
    let bound = ints
        .iter()
        .map(|c| c.re.abs().to_integer() + c.im.abs().to_integer())
        .fold(BigInt::zero(), |a, b| a + b);
    let bound = BigInt::from(2) * bound + 1;

    let embed = |j: &BigInt, sign: i64, m: &BigInt| -> Vec<BigInt> {
        monic
            .iter()
            .map(|(re, im)| (re + im * j * BigInt::from(sign)).mod_floor(m))
            .collect()
    };
    let prime = small_primes()
        .filter(|q| q % 4 == 1)
        .find(|&q| {
            let j = BigInt::from(sqrt_minus_one(q));
            let m = BigInt::from(q);
            [1, -1].iter().all(|&s| {
                let e = embed(&j, s, &m);
                squarefree_mod(&e, &derivative_int(&e), q)
            })
        })
        .expect("some split prime keeps the polynomial squarefree");

    // lift sqrt(-1) to the working modulus
    let minus_one_poly = [BigInt::one(), BigInt::zero(), BigInt::one()];
    let (js, modulus) = hensel_roots(&minus_one_poly, prime, &bound);
    let j = js
        .into_iter()
        .find(|r| r.mod_floor(&BigInt::from(prime)) == BigInt::from(sqrt_minus_one(prime)))
        .expect("lifted square root");
    let (plus, m1) = hensel_roots(&embed(&j, 1, &modulus), prime, &bound);
    let (minus, m2) = hensel_roots(&embed(&j, -1, &modulus), prime, &bound);
    debug_assert!(m1 == modulus && m2 == modulus);

    let half = big_modinv(&BigInt::from(2), &modulus).expect("odd modulus");
    let half_j = big_modinv(&(BigInt::from(2) * &j), &modulus).expect("unit");
    let symmetric = |x: BigInt| {
        let x = x.mod_floor(&modulus);
        if BigInt::from(2) * &x > modulus {
            x - &modulus
        } else {
            x
        }
    };
    let lc_inv = lc.inv().expect("nonzero");
    let mut out = Vec::new();
    for t1 in &plus {
        for t2 in &minus {
            let x = symmetric((t1 + t2) * &half);
            let y = symmetric((t1 - t2) * &half_j);
            let s = GaussRational::new(Rational::from_integer(x), Rational::from_integer(y));
            let r = &s * &lc_inv;
            if dense_eval(p, &r).is_zero() {
                out.push(r);
            }
        }
    }
    out
}

fn sqrt_minus_one(p: u64) -> u64 {
    (1..p).find(|x| x * x % p == p - 1).expect("p = 1 mod 4")
}

// ---- resultants ----

/// Sylvester resultant of `f` and `g` with respect to variable `var`,
/// computed by fraction-free (Bareiss) elimination.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly> {
    f.ensure_same_ring(g)?;
    let ring = f.ring();
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero(ring));
    }
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    if size == 0 {
        return Ok(MultiPoly::one(ring));
    }
    let zero = MultiPoly::zero(ring);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut mat: Vec<Vec<MultiPoly>>) -> Result<MultiPoly> {
    let size = mat.len();
    let ring = mat[0][0].ring().clone();
    let mut sign_negative = false;
    let mut prev = MultiPoly::one(&ring);
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign_negative = !sign_negative;
                }
                None => return Ok(MultiPoly::zero(&ring)),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.exact_divide(&prev)?;
            }
            mat[i][k] = MultiPoly::zero(&ring);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if sign_negative { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::Ring;
    use crate::scalar::rat;

    fn ring(field: Field) -> crate::poly::RingRef {
        Ring::new(["X", "Y"], field).unwrap()
    }

    #[test]
    fn rational_root_search() {
        // (2x - 3)(x + 5)(x^2 + 1) x
        let r = ring(Field::Rational);
        let p = parse_poly("(2*X - 3)*(X + 5)*(X^2 + 1)*X", &r).unwrap();
        let rep = roots_in_field(&p, 0, Field::Rational).unwrap();
        let expect: Vec<GaussRational> = [rat(-5, 1), rat(0, 1), rat(3, 2)]
            .into_iter()
            .map(GaussRational::from_rational)
            .collect();
        assert_eq!(rep.roots, expect);
        assert_eq!(rep.unresolved, vec![parse_poly("X^2 + 1", &r).unwrap()]);
    }

    #[test]
    fn large_rational_roots() {
        let r = ring(Field::Rational);
        let p = parse_poly("(1234567*X - 7654321)*(99991*X + 1)*(X^2 - 2)", &r).unwrap();
        let rep = roots_in_field(&p, 0, Field::Rational).unwrap();
        assert_eq!(rep.roots.len(), 2);
        for root in &rep.roots {
            assert!(p.substitute_value("X", root).unwrap().is_zero());
        }
    }

    #[test]
    fn gaussian_root_search() {
        let r = ring(Field::Gaussian);
        let p = parse_poly("X^3 - 2*X^2 + 2*X", &r).unwrap();
        let rep = roots_in_field(&p, 0, Field::Gaussian).unwrap();
        let mut expect = vec![
            GaussRational::zero(),
            GaussRational::from_parts(1, 1, 1, 1),
            GaussRational::from_parts(1, 1, -1, 1),
        ];
        expect.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(rep.roots, expect);
        assert!(rep.unresolved.is_empty());

        let rq = ring(Field::Rational);
        let pq = parse_poly("X^3 - 2*X^2 + 2*X", &rq).unwrap();
        let rep = roots_in_field(&pq, 0, Field::Rational).unwrap();
        assert_eq!(rep.roots, vec![GaussRational::zero()]);
        assert_eq!(rep.unresolved, vec![parse_poly("X^2 - 2*X + 2", &rq).unwrap()]);
    }

    #[test]
    fn gaussian_quartic_and_beyond() {
        let r = ring(Field::Gaussian);
        let p = parse_poly("(X^2 + 4)*(X - 1/2 - 3/2*i)*(X^2 - 3)*(X - 2 + i)", &r).unwrap();
        let rep = roots_in_field(&p, 0, Field::Gaussian).unwrap();
        assert_eq!(rep.roots.len(), 4);
        for root in &rep.roots {
            assert!(p.substitute_value("X", root).unwrap().is_zero());
        }
        assert_eq!(rep.unresolved, vec![parse_poly("X^2 - 3", &r).unwrap()]);
    }

    #[test]
    fn resultant_examples() {
        let r = ring(Field::Rational);
        let f = parse_poly("Y^2 - X", &r).unwrap();
        let g = parse_poly("Y - X", &r).unwrap();
        // Res_Y = X^2 - X up to sign
        let res = resultant(&f, &g, 1).unwrap();
        assert_eq!(res.monic(), parse_poly("X^2 - X", &r).unwrap());
        let c = parse_poly("X^3", &r).unwrap();
        let h = parse_poly("Y^2 + 1", &r).unwrap();
        assert_eq!(resultant(&c, &h, 1).unwrap(), parse_poly("X^6", &r).unwrap());
    }
}
