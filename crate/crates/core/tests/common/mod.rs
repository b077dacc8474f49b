#![allow(dead_code)]

use diffalg::{Field, GaussRational, Monomial, MultiPoly, RingRef};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn small_scalar(rng: &mut ChaCha8Rng, field: Field) -> GaussRational {
    let num = rng.gen_range(-5..=5);
    let den = rng.gen_range(1..=3);
    let re = diffalg::scalar::rat(num, den);
    match field {
        Field::Rational => GaussRational::from_rational(re),
        Field::Gaussian => GaussRational::new(re, diffalg::scalar::rat(rng.gen_range(-3..=3), 1)),
    }
}

/// Random polynomial with up to `terms` terms of total degree <= `degree`.
pub fn random_poly(rng: &mut ChaCha8Rng, ring: &RingRef, degree: u32, terms: usize) -> MultiPoly {
    let n = ring.nvars();
    let monos = Monomial::all_up_to_degree(n, degree);
    let count = rng.gen_range(0..=terms);
    MultiPoly::from_terms(
        ring,
        (0..count).map(|_| {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            (m, small_scalar(rng, ring.field()))
        }),
    )
}

pub fn random_nonconstant(rng: &mut ChaCha8Rng, ring: &RingRef, degree: u32, terms: usize) -> MultiPoly {
    loop {
        let p = random_poly(rng, ring, degree, terms);
        if !p.is_constant() {
            return p;
        }
    }
}

pub fn random_nonzero(rng: &mut ChaCha8Rng, ring: &RingRef, degree: u32, terms: usize) -> MultiPoly {
    loop {
        let p = random_poly(rng, ring, degree, terms);
        if !p.is_zero() {
            return p;
        }
    }
}
