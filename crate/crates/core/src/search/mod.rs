//! Searches for small invertible subset sums and the structures around them.
//!
//! Every search walks subsets by increasing cardinality and then by ascending
//! mask value, so a returned witness is the smallest one in that order.

mod semilocal;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub use semilocal::{
    embed_product_to_matrices, example8_instances, mixed_char_counterexample_search,
    semilocal_find_unit_subsum, SemilocalInstance, MINER_MAX_ELEMENTS, MINER_MAX_FIELDS,
    MINER_MAX_FIELD_SIZE, MINER_MAX_TUPLES,
};

use crate::error::{Error, Result};
pub use crate::mask::SubsetMask;
use crate::mask::{subsets_by_cardinality, MAX_FAMILY};
use crate::matrix::{family_shape, subset_sum_unchecked, SquareMatrix, GENERAL_SIZE_LIMIT};
use crate::ring::{RingDescriptor, RingKind, Value};

/// Largest family accepted by [`ideal_chain`] (it evaluates `2^m` determinants).
pub const IDEAL_CHAIN_MAX_M: usize = 20;

/// First nonempty `S` with `|S| <= bound` whose subset sum is invertible.
///
/// A `bound` larger than the family is treated as the family size. Over a
/// local ring (fields included), if the full sum is invertible and
/// `bound >= n`, a witness always exists.
pub fn find_invertible_subsum(matrices: &[SquareMatrix], bound: usize) -> Result<Option<SubsetMask>> {
    if matrices.len() > MAX_FAMILY {
        return Err(Error::TooManyMatrices {
            got: matrices.len(),
            limit: MAX_FAMILY,
        });
    }
    let (ring, n) = family_shape(matrices)?;
    let m = matrices.len();
    for mask in subsets_by_cardinality(m, 1, bound.min(m)) {
        if subset_sum_unchecked(&ring, n, matrices, mask).is_invertible()? {
            return Ok(Some(mask));
        }
    }
    Ok(None)
}

/// Whether a bounded search over `matrices` must succeed: the ring is local,
/// the full sum is invertible and `bound` reaches the matrix size.
pub fn local_guarantee_applies(matrices: &[SquareMatrix], bound: usize) -> Result<bool> {
    let (ring, n) = family_shape(matrices)?;
    if !ring.is_local() || bound < n {
        return Ok(false);
    }
    let m = matrices.len();
    subset_sum_unchecked(&ring, n, matrices, SubsetMask::full(m)).is_invertible()
}

/// The family `diag(.., m1, ..)` (one per diagonal slot) plus `m2 * I_n` over `Z/N`.
///
/// With `m1 + m2 = 1` and both non-units the full sum is `I_n`, yet every
/// subset of at most `n` members has determinant `0`, `m1^n` or `m2^j`, none
/// of which is a unit.
pub fn local_counterexample_matrices(modulus: u64, m1: i64, m2: i64, n: usize) -> Result<Vec<SquareMatrix>> {
    let ring = RingDescriptor::mod_ring(modulus)?;
    if n == 0 || n > GENERAL_SIZE_LIMIT {
        return Err(Error::InvalidParameters(format!(
            "matrix size must be in 1..={GENERAL_SIZE_LIMIT}, got {n}"
        )));
    }
    let a = ring.from_i64(m1);
    let b = ring.from_i64(m2);
    if ring.add(&a, &b) != ring.one() {
        return Err(Error::InvalidParameters(format!(
            "{m1} + {m2} is not 1 modulo {modulus}"
        )));
    }
    for (name, v) in [("m1", &a), ("m2", &b)] {
        if ring.is_unit(v) {
            return Err(Error::InvalidParameters(format!(
                "{name} = {} is a unit modulo {modulus}",
                ring.format_value(v)
            )));
        }
    }
    let mut out: Vec<SquareMatrix> = (0..n)
        .map(|i| {
            SquareMatrix::from_fn(
                &ring,
                n,
                |r, c| {
                    if r == i && c == i {
                        a.clone()
                    } else {
                        ring.zero()
                    }
                },
            )
        })
        .collect::<Result<_>>()?;
    out.push(SquareMatrix::from_fn(&ring, n, |r, c| {
        if r == c {
            b.clone()
        } else {
            ring.zero()
        }
    })?);
    Ok(out)
}

/// Generators `g_0, ..., g_m` of the ideals `I_j` spanned by determinants of
/// subset sums with at most `j` members.
///
/// Over `Z` (`modulus == 0`) each generator is the nonnegative gcd. Over `Z/N`
/// it is `gcd(., N)` with the zero ideal written as `0`, so generators lie in
/// `[0, N)` and each divides `N` unless it is `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealChain {
    pub modulus: u64,
    pub generators: Vec<BigInt>,
}

impl IdealChain {
    /// `x` lies in the ideal generated by `g` (`0` generates the zero ideal).
    pub fn generator_divides(g: &BigInt, x: &BigInt) -> bool {
        if g.is_zero() {
            x.is_zero()
        } else {
            x.is_multiple_of(g)
        }
    }

    /// `I_j` is contained in `I_{j+1}` for every `j`.
    pub fn is_ascending(&self) -> bool {
        self.generators
            .windows(2)
            .all(|w| Self::generator_divides(&w[1], &w[0]))
    }

    /// `g_0` is the zero ideal.
    pub fn starts_at_zero(&self) -> bool {
        self.generators.first().is_some_and(|g| g.is_zero())
    }

    /// `g_j == g_n` for every `j >= n` present in the chain.
    pub fn stable_from(&self, n: usize) -> bool {
        match self.generators.get(n) {
            None => true,
            Some(gn) => self.generators[n..].iter().all(|g| g == gn),
        }
    }

    /// Smallest index from which the chain is constant.
    pub fn stabilization_index(&self) -> usize {
        let last = self.generators.last().expect("chain has g_0");
        let mut j = self.generators.len() - 1;
        while j > 0 && &self.generators[j - 1] == last {
            j -= 1;
        }
        j
    }

    /// Whether the ring element with integer representative `x` lies in `I_j`.
    pub fn contains(&self, j: usize, x: &BigInt) -> bool {
        let x = if self.modulus == 0 {
            x.clone()
        } else {
            x.mod_floor(&BigInt::from(self.modulus))
        };
        Self::generator_divides(&self.generators[j], &x)
    }
}

fn integer_representative(v: &Value) -> BigInt {
    match v {
        Value::Int(x) => x.clone(),
        Value::Residue(r) => BigInt::from(*r),
        _ => unreachable!("ideal chains are computed over Z and Z/N"),
    }
}

/// Computes the ideal chain of subset-sum determinants over `Z` or `Z/N`.
pub fn ideal_chain(matrices: &[SquareMatrix]) -> Result<IdealChain> {
    let (ring, n) = family_shape(matrices)?;
    let modulus = match ring.kind() {
        RingKind::Integers => 0,
        RingKind::ModRing(k) | RingKind::PrimeField(k) => *k,
        _ => {
            return Err(Error::UnsupportedRing(format!(
                "ideal chains need Z or Z/N, got {ring}"
            )))
        }
    };
    let m = matrices.len();
    if m > IDEAL_CHAIN_MAX_M {
        return Err(Error::TooManyMatrices {
            got: m,
            limit: IDEAL_CHAIN_MAX_M,
        });
    }
    let mut level = vec![BigInt::zero(); m + 1];
    for (k, slot) in level.iter_mut().enumerate().skip(1) {
        for mask in crate::mask::k_subsets(m, k) {
            let d = subset_sum_unchecked(&ring, n, matrices, mask).det()?;
            *slot = slot.gcd(&integer_representative(d.value()));
        }
    }
    let mut generators = Vec::with_capacity(m + 1);
    let mut g = BigInt::zero();
    for lv in &level {
        g = g.gcd(lv);
        if modulus == 0 {
            generators.push(g.clone());
        } else {
            let r = g.gcd(&BigInt::from(modulus));
            let canonical = if r.to_u64() == Some(modulus) {
                BigInt::zero()
            } else {
                r
            };
            generators.push(canonical);
        }
    }
    Ok(IdealChain { modulus, generators })
}
