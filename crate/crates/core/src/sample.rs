//! Seeded random instances for property suites and fuzzing.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::matrix::SquareMatrix;
use crate::ring::RingElement;
use crate::ring::{RingDescriptor, RingKind, SparsePoly, Value};

/// Range of small integers drawn for `Z`, `Q` and polynomial coefficients.
pub const SMALL: i64 = 5;

pub fn value<R: Rng + ?Sized>(ring: &RingDescriptor, rng: &mut R) -> Value {
    match ring.kind() {
        RingKind::Integers => Value::Int(BigInt::from(rng.random_range(-SMALL..=SMALL))),
        RingKind::Rationals => {
            let num = rng.random_range(-SMALL..=SMALL);
            let den = rng.random_range(1..=4i64);
            Value::Rat(BigRational::new(num.into(), den.into()))
        }
        RingKind::PrimeField(n) | RingKind::ModRing(n) => Value::Residue(rng.random_range(0..*n)),
        RingKind::Product(cs) => Value::Tuple(cs.iter().map(|c| value(c, rng)).collect()),
        RingKind::PolyOverZ(vars) => Value::Poly(poly(*vars, 2, 3, rng)),
    }
}

pub fn element<R: Rng + ?Sized>(ring: &RingDescriptor, rng: &mut R) -> RingElement {
    ring.element(value(ring, rng))
        .expect("sampled values are canonical")
}

pub fn matrix<R: Rng + ?Sized>(ring: &RingDescriptor, n: usize, rng: &mut R) -> SquareMatrix {
    SquareMatrix::from_fn(ring, n, |_, _| value(ring, rng)).expect("sampled matrix is valid")
}

/// A matrix of rank at most `rank`, built as a sum of `rank` outer products.
pub fn low_rank_matrix<R: Rng + ?Sized>(
    ring: &RingDescriptor,
    n: usize,
    rank: usize,
    rng: &mut R,
) -> SquareMatrix {
    let mut acc = SquareMatrix::zero(ring, n);
    for _ in 0..rank {
        let u: Vec<Value> = (0..n).map(|_| value(ring, rng)).collect();
        let v: Vec<Value> = (0..n).map(|_| value(ring, rng)).collect();
        let outer =
            SquareMatrix::from_fn(ring, n, |i, j| ring.mul(&u[i], &v[j])).expect("outer product is valid");
        acc.add_assign_unchecked(&outer);
    }
    acc
}

/// A family of `m` matrices mixing full random and rank-deficient members, so
/// that invertible subset sums of several sizes occur.
pub fn mixed_family<R: Rng + ?Sized>(
    ring: &RingDescriptor,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Vec<SquareMatrix> {
    let style = rng.random_range(0..3u8);
    (0..m)
        .map(|_| match style {
            0 => matrix(ring, n, rng),
            1 => low_rank_matrix(ring, n, 1, rng),
            _ => {
                let rank = rng.random_range(0..n);
                low_rank_matrix(ring, n, rank, rng)
            }
        })
        .collect()
}

/// A random polynomial with at most `max_terms` terms of total degree at most `max_degree`.
pub fn poly<R: Rng + ?Sized>(vars: usize, max_degree: u32, max_terms: usize, rng: &mut R) -> SparsePoly {
    let count = rng.random_range(0..=max_terms);
    let terms = (0..count).map(|_| {
        let d = rng.random_range(0..=max_degree);
        (
            random_exponents(vars, d, rng),
            BigInt::from(rng.random_range(-SMALL..=SMALL)),
        )
    });
    SparsePoly::from_terms(vars, terms.collect::<Vec<_>>()).expect("exponent lengths match")
}

/// A random homogeneous polynomial of degree exactly `degree` (nonzero unless `vars == 0`).
pub fn homogeneous_poly<R: Rng + ?Sized>(vars: usize, degree: u32, rng: &mut R) -> SparsePoly {
    loop {
        let count = rng.random_range(1..=4usize);
        let terms: Vec<_> = (0..count)
            .map(|_| {
                let mut c = 0;
                while c == 0 {
                    c = rng.random_range(-SMALL..=SMALL);
                }
                (random_exponents(vars, degree, rng), BigInt::from(c))
            })
            .collect();
        let p = SparsePoly::from_terms(vars, terms).expect("exponent lengths match");
        if !p.is_zero() || vars == 0 {
            return p;
        }
    }
}

fn random_exponents<R: Rng + ?Sized>(vars: usize, degree: u32, rng: &mut R) -> Vec<u32> {
    let mut e = vec![0u32; vars];
    if vars == 0 {
        return e;
    }
    for _ in 0..degree {
        e[rng.random_range(0..vars)] += 1;
    }
    e
}
