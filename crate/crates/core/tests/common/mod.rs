#![allow(dead_code)]

use std::sync::Arc;

use frobenius_core::{IdealHandle, MonomialOrder, PolyRing, Polynomial, PrimeField, RingContext};
use frobenius_oracle::Terms;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn ring(p: u64, n: usize) -> Arc<PolyRing> {
    PolyRing::new(
        PrimeField::new(p).unwrap(),
        &VAR_NAMES[..n],
        MonomialOrder::Grevlex,
    )
    .unwrap()
}

pub fn poly_ring(p: u64, n: usize) -> Arc<RingContext> {
    RingContext::polynomial_ring(ring(p, n))
}

pub fn quotient(p: u64, vars: &[&str], defining: &[&str]) -> Arc<RingContext> {
    let ring = PolyRing::new(PrimeField::new(p).unwrap(), vars, MonomialOrder::Grevlex).unwrap();
    let f = defining
        .iter()
        .map(|s| frobenius_core::parse_poly(s, &ring).unwrap())
        .collect();
    RingContext::quotient(ring, f).unwrap()
}

pub fn ideal(ctx: &Arc<RingContext>, gens: &[&str]) -> IdealHandle {
    IdealHandle::new(ctx, gens.iter().map(|s| ctx.parse(s).unwrap()).collect()).unwrap()
}

pub fn to_terms(f: &Polynomial) -> Terms {
    f.terms()
        .iter()
        .map(|(m, c)| (m.exponents().to_vec(), *c as u64))
        .collect()
}

pub fn random_monomial(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for _ in 0..degree {
        e[rng.random_range(0..n)] += 1;
    }
    e
}

/// A random homogeneous polynomial of the given degree with up to `terms` terms.
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    ring: &Arc<PolyRing>,
    degree: u32,
    terms: usize,
) -> Polynomial {
    let p = ring.characteristic();
    let n = ring.nvars();
    let mut terms = terms.max(1);
    loop {
        let mut acc = ring.zero();
        for _ in 0..terms {
            let e = random_monomial(rng, n, degree);
            let c = rng.random_range(1..p);
            acc =
                &acc + &Polynomial::monomial(ring, frobenius_core::Monomial::from_exponents(&e), c);
        }
        if !acc.is_zero() {
            return acc;
        }
        // terms can cancel, e.g. in one variable
        terms = 1;
    }
}

/// Random monomial ideal generators plus a couple of binomials, all homogeneous
/// so the graded oracle applies.
pub fn random_homogeneous_ideal(
    rng: &mut ChaCha8Rng,
    ring: &Arc<PolyRing>,
    max_degree: u32,
) -> Vec<Polynomial> {
    let count = rng.random_range(1..=3);
    (0..count)
        .map(|_| {
            let d = rng.random_range(1..=max_degree);
            let t = rng.random_range(1..=3);
            random_homogeneous(rng, ring, d, t)
        })
        .collect()
}
